#![no_main]

use hwm_core::io::{emit_string_rep, parse_string_rep};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = parse_string_rep(data) {
        let again = parse_string_rep(&emit_string_rep(&r)).expect("emitted rep parses");
        assert_eq!(again, r);
    }
});
