#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::banseq::{seq_from_string, seq_to_string};

fuzz_target!(|data: &[u8]| {
    let Some((&[len, j], rest)) = data.split_first_chunk::<2>() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let (len, j) = (usize::from(len), usize::from(j % 40));
    if let Ok(seq) = seq_from_string(text, len, j) {
        assert_eq!(seq.len(), len);
        assert!(seq.iter().all(|&d| usize::from(d) < j));
        assert_eq!(seq_from_string(&seq_to_string(&seq), len, j).expect("emitted sequence parses"), seq);
    }
});
