#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::{parse_prob_space, prob_space_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_prob_space(text) {
        assert_eq!(parse_prob_space(&prob_space_to_json(&s)).expect("emitted space parses"), s);
    }
});
