#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::{element_tree_to_json, parse_element_tree};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_element_tree(text) {
        assert_eq!(parse_element_tree(&element_tree_to_json(&t)).expect("emitted tree parses"), t);
    }
});
