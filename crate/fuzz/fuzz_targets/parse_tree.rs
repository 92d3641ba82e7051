#![no_main]

use hwm_core::encodings::{encode_tree, parse_tree};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = parse_tree(text) {
        // Mixed ranks are a parse success but an encoding failure.
        if let Ok(g) = encode_tree(&t) {
            assert_eq!(g.vertex_count(), t.size() + 1);
        }
        assert_eq!(parse_tree(&t.to_string()).as_ref(), Ok(&t));
    }
});
