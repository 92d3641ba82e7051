//! Replays the checked-in fuzz corpus through the same checks the fuzz
//! targets make, so seeds stay meaningful as the formats evolve.

use std::fs;
use std::path::PathBuf;

use hwm_core::crosswords::encode_crossword;
use hwm_core::encodings::{encode_tree, parse_tree};
use hwm_core::io::{
    emit_graph, emit_model, emit_string_rep, emit_tensor, emit_tree_rep, parse_crossword,
    parse_graph, parse_model, parse_string_rep, parse_tensor, parse_tree_rep,
};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

/// Runs `check` on every seed and returns how many parsed.
fn replay(target: &str, check: impl Fn(&[u8]) -> bool) -> usize {
    seeds(target).iter().filter(|(_, bytes)| check(bytes)).count()
}

#[test]
fn graphs() {
    let ok = replay("parse_graph", |data| {
        let Ok(g) = parse_graph(data) else { return false };
        let out = emit_graph(&g);
        let again = parse_graph(&out).unwrap();
        assert_eq!(again, g.canonical());
        assert_eq!(emit_graph(&again), out);
        true
    });
    assert_eq!(ok, 5);
}

#[test]
fn models() {
    let ok = replay("parse_model", |data| {
        let Ok(m) = parse_model(data) else { return false };
        let out = emit_model(&m);
        assert_eq!(emit_model(&parse_model(&out).unwrap()), out);
        true
    });
    assert_eq!(ok, 8);
}

#[test]
fn tensors() {
    // The port-set seed has no algebra to resolve against and must fail.
    let ok = replay("parse_tensor", |data| {
        let Ok(t) = parse_tensor(data) else { return false };
        assert_eq!(parse_tensor(&emit_tensor(&t)).unwrap(), t);
        true
    });
    assert_eq!(ok, 2);
}

#[test]
fn representations() {
    let strings = replay("parse_string_rep", |data| {
        let Ok(r) = parse_string_rep(data) else { return false };
        assert_eq!(parse_string_rep(&emit_string_rep(&r)).unwrap(), r);
        true
    });
    let trees = replay("parse_tree_rep", |data| {
        let Ok(r) = parse_tree_rep(data) else { return false };
        assert_eq!(parse_tree_rep(&emit_tree_rep(&r)).unwrap(), r);
        true
    });
    assert_eq!((strings, trees), (2, 1));
}

#[test]
fn trees() {
    let ok = replay("parse_tree", |data| {
        let Ok(t) = parse_tree(std::str::from_utf8(data).unwrap()) else { return false };
        if let Ok(g) = encode_tree(&t) {
            assert_eq!(g.vertex_count(), t.size() + 1);
        }
        assert_eq!(parse_tree(&t.to_string()).as_ref(), Ok(&t));
        true
    });
    assert_eq!(ok, 3);
}

#[test]
fn crosswords() {
    let ok = replay("parse_crossword", |data| {
        let Ok(w) = parse_crossword(data) else { return false };
        assert_eq!(encode_crossword(&w).vertex_count(), w.rows() * w.cols());
        assert_eq!(parse_crossword(w.to_string().as_bytes()).as_ref(), Ok(&w));
        true
    });
    assert_eq!(ok, 3);
}
