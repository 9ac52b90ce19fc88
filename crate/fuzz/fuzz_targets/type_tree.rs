#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::{parse_type_tree, type_tree_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_type_tree(text) {
        assert_eq!(parse_type_tree(&type_tree_to_json(&t)).expect("emitted tree parses"), t);
    }
});
