#![no_main]

use hwm_core::crosswords::encode_crossword;
use hwm_core::io::parse_crossword;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(w) = parse_crossword(data) {
        let g = encode_crossword(&w);
        assert_eq!(g.vertex_count(), w.rows() * w.cols());
        assert_eq!(parse_crossword(w.to_string().as_bytes()).as_ref(), Ok(&w));
    }
});
