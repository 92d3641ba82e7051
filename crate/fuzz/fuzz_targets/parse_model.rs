#![no_main]

use hwm_core::io::{emit_model, parse_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = parse_model(data) {
        let out = emit_model(&m);
        let again = parse_model(&out).expect("emitted model parses");
        assert_eq!(emit_model(&again), out);
    }
});
