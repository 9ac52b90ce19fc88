#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::{parse_set_system, set_system_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_set_system(text) {
        let back = parse_set_system(&set_system_to_json(&f)).expect("emitted set system parses");
        assert_eq!(back.universe(), f.universe());
        assert_eq!(back.sets(), f.sets());
    }
});
