#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::{ban_table_to_json, parse_ban_table};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for strict in [true, false] {
        if let Ok(t) = parse_ban_table(text, strict) {
            assert_eq!(parse_ban_table(&ban_table_to_json(&t), false).expect("emitted table parses"), t);
        }
    }
});
