#![no_main]

use hwm_core::io::{emit_graph, parse_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = parse_graph(data) {
        let out = emit_graph(&g);
        let again = parse_graph(&out).expect("emitted graph parses");
        assert_eq!(again, g.canonical());
        assert_eq!(emit_graph(&again), out);
    }
});
