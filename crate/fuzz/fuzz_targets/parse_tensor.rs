#![no_main]

use hwm_core::io::{emit_tensor, parse_tensor};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = parse_tensor(data) {
        let again = parse_tensor(&emit_tensor(&t)).expect("emitted tensor parses");
        assert_eq!(again, t);
    }
});
