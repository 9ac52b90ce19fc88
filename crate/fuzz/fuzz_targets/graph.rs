#![no_main]

use libfuzzer_sys::fuzz_target;
use shatterlab::formats::{graph_to_json, parse_graph};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_graph(text) {
        assert_eq!(parse_graph(&graph_to_json(&g)).expect("emitted graph parses"), g);
    }
});
