#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::{arrangement_to_json, parse_arrangement};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = parse_arrangement(text) {
        assert_eq!(parse_arrangement(&arrangement_to_json(&a)).expect("emitted arrangement parses"), a);
    }
});
