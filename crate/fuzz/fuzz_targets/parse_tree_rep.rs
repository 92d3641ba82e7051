#![no_main]

use hwm_core::io::{emit_tree_rep, parse_tree_rep};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = parse_tree_rep(data) {
        let again = parse_tree_rep(&emit_tree_rep(&r)).expect("emitted rep parses");
        assert_eq!(again, r);
    }
});
