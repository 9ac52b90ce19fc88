#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::parse_subset;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let n = usize::from(n % 129);
    if let Ok(bits) = parse_subset(text, n) {
        assert!(n == 128 || bits >> n == 0);
    }
});
