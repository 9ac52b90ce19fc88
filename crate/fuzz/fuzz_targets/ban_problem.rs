#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::banseq::{solutions, BanRule};
use shatterlab::formats::parse_ban_problem;
use shatterlab::Caps;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let caps = Caps {
        vc_universe: 10,
        op_universe: 6,
        sequences: 1 << 12,
        ..Caps::default()
    };
    if let Ok(f) = parse_ban_problem(text, &caps) {
        if let Ok(sols) = solutions(&f, &caps) {
            assert!(sols.len() as u128 <= f.shape().sequence_count());
        }
    }
});
