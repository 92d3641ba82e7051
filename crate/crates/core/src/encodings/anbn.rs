use std::collections::BTreeMap;

use super::{build, check_reserved, port, EncodeError, IOTA, TAU};
use crate::engine::Hwm;
use crate::hypergraph::{Hypergraph, RankedAlphabet, Vertex};
use crate::numeric::{C64, ONE, ZERO};
use crate::tensor::{BasisLabel, DenseAlgebra, DenseProduct, ProductAlgebra, SparseTensor, Table};

/// 3-ary graph of an even word `w_1..w_{2n}`: the string path through
/// slots 1 and 2, plus edges `{(i,3), (n+i,3)}` pairing the halves.
pub fn encode_anbn_graph<S: AsRef<str>>(w: &[S]) -> Result<Hypergraph, EncodeError> {
    let len = w.len();
    if len == 0 || len % 2 == 1 {
        return Err(EncodeError::OddLength(len));
    }
    check_reserved(w, &[IOTA, TAU])?;
    let n = len / 2;
    let mut symbols: Vec<(String, usize)> = w.iter().map(|s| (s.as_ref().to_string(), 3)).collect();
    symbols.sort();
    symbols.dedup();
    symbols.push((IOTA.into(), 1));
    symbols.push((TAU.into(), 1));
    let alphabet = RankedAlphabet::new(symbols).expect("reserved symbols excluded");
    let mut vertices = vec![Vertex::new("0", IOTA)];
    vertices.extend(
        w.iter()
            .enumerate()
            .map(|(i, s)| Vertex::new((i + 1).to_string(), s.as_ref())),
    );
    vertices.push(Vertex::new((len + 1).to_string(), TAU));
    let mut edges = vec![vec![port(0, 1), port(1, 1)]];
    for i in 1..=len {
        edges.push(vec![port(i, 2), port(i + 1, 1)]);
    }
    for i in 1..=n {
        edges.push(vec![port(i, 3), port(n + i, 3)]);
    }
    Ok(build(alphabet, vertices, edges))
}

const S1: usize = 0;
const S2: usize = 1;
const PA: usize = 2;
const PB: usize = 3;
const M: usize = 4;

/// Model over `{a, b}` supported exactly on the 3-ary graphs of `a^n b^n`.
///
/// Basis `s1, s2, pa, pb, m`. The product sends `e_x * e_y` to `e_m` for
/// the pairs `(s1,s1)`, `(s2,s2)`, `(pa,pb)` and to zero otherwise, and
/// `alpha` reads the `m` coordinate. Chain edges thus force equal states
/// and pairing edges force an `a` in the first half against a `b` in the
/// second. `a` keeps state `s1`; `b` moves `s1 -> s2` or stays in `s2`.
pub fn anbn_hwm() -> Hwm {
    let d = 5;
    let mut c = vec![ZERO; d * d * d];
    for (x, y) in [(S1, S1), (S2, S2), (PA, PB), (PB, PA)] {
        c[(x * d + y) * d + M] = ONE;
    }
    let table = Table::new(d, c).expect("nilpotent of index 2");
    let mut alpha = vec![ZERO; d];
    alpha[M] = ONE;
    let algebra = DenseAlgebra::new(DenseProduct::Table(table), alpha).expect("dimensions agree");
    let e = |idx: &[usize]| -> (Vec<BasisLabel>, C64) {
        (idx.iter().map(|&i| BasisLabel::Dense(i)).collect(), ONE)
    };
    let t = |entries: Vec<(Vec<BasisLabel>, C64)>, order| {
        SparseTensor::from_entries(order, entries).expect("well formed")
    };
    let tensors = BTreeMap::from([
        (IOTA.to_string(), t(vec![e(&[S1])], 1)),
        (TAU.to_string(), t(vec![e(&[S2])], 1)),
        ("a".to_string(), t(vec![e(&[S1, S1, PA])], 3)),
        ("b".to_string(), t(vec![e(&[S1, S2, PB]), e(&[S2, S2, PB])], 3)),
    ]);
    let alphabet = RankedAlphabet::new([("a", 3), ("b", 3), (IOTA, 1), (TAU, 1)]).expect("distinct");
    Hwm::new(alphabet, ProductAlgebra::Dense(algebra), tensors).expect("consistent")
}

/// Whether `w = a^n b^n` for some `n >= 1`.
pub fn is_anbn<S: AsRef<str>>(w: &[S]) -> bool {
    let n = w.len() / 2;
    n >= 1
        && w.len().is_multiple_of(2)
        && w[..n].iter().all(|s| s.as_ref() == "a")
        && w[n..].iter().all(|s| s.as_ref() == "b")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::word;
    use crate::engine::{eval, Engine, EvalConfig};

    #[test]
    fn graph_shapes() {
        let g = encode_anbn_graph(&word("abaa")).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 7));
        let g = encode_anbn_graph(&word("ab")).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        assert_eq!(encode_anbn_graph(&word("aba")), Err(EncodeError::OddLength(3)));
        assert_eq!(encode_anbn_graph::<&str>(&[]), Err(EncodeError::OddLength(0)));
    }

    #[test]
    fn short_words() {
        let m = anbn_hwm();
        let cfg = EvalConfig::default();
        let value = |w: &str| {
            let g = encode_anbn_graph(&word(w)).unwrap();
            let naive = eval(&m, &g, Engine::Naive, &cfg).unwrap().value;
            let support = eval(&m, &g, Engine::Support, &cfg).unwrap().value;
            assert_eq!(naive, support);
            naive
        };
        assert_eq!(value("ab"), ONE);
        assert_eq!(value("ba"), ZERO);
        assert_eq!(value("aa"), ZERO);
        assert_eq!(value("bb"), ZERO);
    }

    #[test]
    fn language_membership() {
        assert!(is_anbn(&word("aabb")));
        assert!(!is_anbn(&word("abab")));
        assert!(!is_anbn::<&str>(&[]));
    }
}
