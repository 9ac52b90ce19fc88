#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::rational::{format, parse};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse(text) {
        assert_eq!(parse(&format(&r)).expect("formatted rational parses"), r);
    }
});
