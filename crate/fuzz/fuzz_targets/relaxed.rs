#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::{ban_table_to_json, parse_relaxed_problem};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_relaxed_problem(text) {
        let back = parse_relaxed_problem(&ban_table_to_json(f.table())).expect("emitted table parses");
        assert_eq!(back, f);
    }
});
