//! Two-dimensional words, their graphs, and the row/column factorization.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::closures::direct_sum_algebra;
use crate::encodings::{lift_string_series_iota_eq_tau, string_series_eval, EncodeError, StringLinearRep};
use crate::engine::Hwm;
use crate::hypergraph::{Hypergraph, PortRef, RankedAlphabet, Vertex};
use crate::numeric::{C64, ONE};
use crate::tensor::{BasisLabel, ProductAlgebra, SparseTensor};

/// Port slots of a crossword cell.
pub const WEST: usize = 1;
pub const EAST: usize = 2;
pub const NORTH: usize = 3;
pub const SOUTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrosswordError {
    #[error("a crossword needs at least one row and one column")]
    Empty,
    #[error("row {row} has {got} cells, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("both models need dense algebras")]
    NotDense,
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// An `M x N` array of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crossword {
    cells: Vec<Vec<String>>,
}

impl Crossword {
    pub fn new(cells: Vec<Vec<String>>) -> Result<Self, CrosswordError> {
        let n = cells.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(CrosswordError::Empty);
        }
        for (m, row) in cells.iter().enumerate() {
            if row.len() != n {
                return Err(CrosswordError::Ragged {
                    row: m + 1,
                    expected: n,
                    got: row.len(),
                });
            }
        }
        Ok(Self { cells })
    }

    /// One line per row, one character per cell. Leading and trailing
    /// blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, CrosswordError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .collect();
        let start = lines.iter().position(|(_, l)| !l.is_empty());
        let end = lines.iter().rposition(|(_, l)| !l.is_empty());
        let (Some(start), Some(end)) = (start, end) else {
            return Err(CrosswordError::Empty);
        };
        let mut cells = Vec::new();
        for &(line, l) in &lines[start..=end] {
            if l.is_empty() {
                return Err(CrosswordError::Parse {
                    line,
                    msg: "blank line inside the grid".into(),
                });
            }
            if l.chars().any(char::is_whitespace) {
                return Err(CrosswordError::Parse {
                    line,
                    msg: "whitespace inside a row".into(),
                });
            }
            cells.push(l.chars().map(|c| c.to_string()).collect());
        }
        Self::new(cells).map_err(|e| match e {
            CrosswordError::Ragged { row, expected, got } => CrosswordError::Parse {
                line: lines[start].0 + row - 1,
                msg: format!("row has {got} cells, expected {expected}"),
            },
            other => other,
        })
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cols(&self) -> usize {
        self.cells[0].len()
    }

    pub fn cell(&self, m: usize, n: usize) -> &str {
        &self.cells[m][n]
    }

    pub fn row(&self, m: usize) -> Vec<String> {
        self.cells[m].clone()
    }

    pub fn col(&self, n: usize) -> Vec<String> {
        self.cells.iter().map(|r| r[n].clone()).collect()
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut s: Vec<String> = self.cells.iter().flatten().cloned().collect();
        s.sort();
        s.dedup();
        s
    }

    fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for m in 0..self.rows() {
            for n in 0..self.cols() {
                out.push(Vertex::new(cell_id(m + 1, n + 1), self.cells[m][n].clone()));
            }
        }
        out
    }

    fn alphabet(&self, arity: usize) -> RankedAlphabet {
        RankedAlphabet::new(self.symbols().into_iter().map(|s| (s, arity))).expect("distinct")
    }

    fn horizontal_edges(&self, w: usize, e: usize) -> Vec<Vec<PortRef>> {
        let (rows, cols) = (self.rows(), self.cols());
        let mut edges = Vec::new();
        for m in 1..=rows {
            for n in 1..cols {
                edges.push(vec![PortRef::new(cell_id(m, n), e), PortRef::new(cell_id(m, n + 1), w)]);
            }
            edges.push(vec![PortRef::new(cell_id(m, 1), w)]);
            edges.push(vec![PortRef::new(cell_id(m, cols), e)]);
        }
        edges
    }

    fn vertical_edges(&self, north: usize, south: usize) -> Vec<Vec<PortRef>> {
        let (rows, cols) = (self.rows(), self.cols());
        let mut edges = Vec::new();
        for n in 1..=cols {
            for m in 1..rows {
                edges.push(vec![
                    PortRef::new(cell_id(m, n), south),
                    PortRef::new(cell_id(m + 1, n), north),
                ]);
            }
            edges.push(vec![PortRef::new(cell_id(1, n), north)]);
            edges.push(vec![PortRef::new(cell_id(rows, n), south)]);
        }
        edges
    }
}

impl fmt::Display for Crossword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.cells {
            writeln!(f, "{}", row.concat())?;
        }
        Ok(())
    }
}

/// Vertex id of the cell in row `m`, column `n` (1-based).
pub fn cell_id(m: usize, n: usize) -> String {
    format!("{m},{n}")
}

/// `G_w`: cells of arity 4 with ports W, E, N, S, chained horizontally and
/// vertically, boundary ports closed by singleton hyperedges.
pub fn encode_crossword(w: &Crossword) -> Hypergraph {
    let mut edges = w.horizontal_edges(WEST, EAST);
    edges.extend(w.vertical_edges(NORTH, SOUTH));
    Hypergraph::new(w.alphabet(4), w.vertices(), edges).expect("valid by construction")
}

/// `(G_H, G_V)` over arity-2 symbols: `(W, E)` and `(N, S)` become slots 1, 2.
pub fn crossword_split(w: &Crossword) -> (Hypergraph, Hypergraph) {
    let h = Hypergraph::new(w.alphabet(2), w.vertices(), w.horizontal_edges(1, 2))
        .expect("valid by construction");
    let v = Hypergraph::new(w.alphabet(2), w.vertices(), w.vertical_edges(1, 2))
        .expect("valid by construction");
    (h, v)
}

/// Model on crosswords whose value on `G_w` is `r_A(G_H) · r_B(G_V)`.
///
/// Dimension `d1 + d2`; `C^σ[i, j, k, l] = A^σ[i, j] B^σ[k - d1, l - d1]`,
/// with the blocks multiplied separately and `alpha = (alpha_A; alpha_B)`.
pub fn crossword_combine_hwm(a: &Hwm, b: &Hwm) -> Result<Hwm, CrosswordError> {
    let symbols = |m: &Hwm| m.alphabet().symbols().map(|(s, k)| (s.to_string(), k)).collect::<Vec<_>>();
    let (sa, sb) = (symbols(a), symbols(b));
    if sa != sb {
        return Err(CrosswordError::AlphabetMismatch("symbol sets differ".into()));
    }
    if let Some((s, k)) = sa.iter().find(|(_, k)| *k != 2) {
        return Err(CrosswordError::AlphabetMismatch(format!(
            "symbol {s:?} has arity {k}, expected 2"
        )));
    }
    let (Some(x), Some(y)) = (a.algebra().as_dense(), b.algebra().as_dense()) else {
        return Err(CrosswordError::NotDense);
    };
    let d1 = x.dim();
    let algebra = direct_sum_algebra(x, y);
    let mut tensors = BTreeMap::new();
    for (s, _) in &sa {
        let ta = &a.tensors()[s];
        let tb = &b.tensors()[s];
        let mut entries = Vec::with_capacity(ta.nnz() * tb.nnz());
        for (ia, va) in ta.entries() {
            for (ib, vb) in tb.entries() {
                let mut idx: Vec<BasisLabel> = ia.to_vec();
                idx.extend(ib.iter().map(|l| {
                    BasisLabel::Dense(l.dense_index().expect("dense model") + d1)
                }));
                entries.push((idx, va * vb));
            }
        }
        tensors.insert(s.clone(), SparseTensor::from_entries(4, entries).expect("order 4"));
    }
    let alphabet = RankedAlphabet::new(sa.into_iter().map(|(s, _)| (s, 4))).expect("distinct");
    Ok(Hwm::new(alphabet, ProductAlgebra::Dense(algebra), tensors).expect("consistent"))
}

/// Lifts both string series onto bare path graphs and combines them: the
/// value on `G_w` is the product of row values under `A` and column values
/// under `B`.
pub fn crossword_row_col_hwm(
    rep_a: &StringLinearRep,
    rep_b: &StringLinearRep,
    seed: u64,
) -> Result<Hwm, CrosswordError> {
    let a = lift_string_series_iota_eq_tau(rep_a, seed)?.model;
    let b = lift_string_series_iota_eq_tau(rep_b, seed.wrapping_add(1))?.model;
    crossword_combine_hwm(&a, &b)
}

/// `Π_m r_A(w_{m:}) · Π_n r_B(w_{:n})` from the classical series.
pub fn row_col_oracle(
    rep_a: &StringLinearRep,
    rep_b: &StringLinearRep,
    w: &Crossword,
) -> Result<C64, CrosswordError> {
    let mut v = ONE;
    for m in 0..w.rows() {
        v *= string_series_eval(rep_a, &w.row(m))?;
    }
    for n in 0..w.cols() {
        v *= string_series_eval(rep_b, &w.col(n))?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::encode_string_bare;
    use crate::engine::evaluate;
    use crate::hypergraph::small_canonical_key;
    use crate::numeric::{approx_eq, real};
    use nalgebra::{DMatrix, DVector};

    fn grid(text: &str) -> Crossword {
        Crossword::parse(text).unwrap()
    }

    #[test]
    fn graph_counts() {
        let w = grid("aca\ndbb\n");
        let g = encode_crossword(&w);
        assert_eq!(g.vertex_count(), 6);
        // rows: 2 * (2 inner + 2 boundary); columns: 3 * (1 inner + 2 boundary)
        assert_eq!(g.edge_count(), 8 + 9);
        let (h, v) = crossword_split(&w);
        assert_eq!((h.edge_count(), v.edge_count()), (8, 9));
        assert_eq!(h.connected_components().count, 2);
        assert_eq!(v.connected_components().count, 3);
        let one = encode_crossword(&grid("a"));
        assert_eq!((one.vertex_count(), one.edge_count()), (1, 4));
        assert!(one.hyperedges().iter().all(|e| e.len() == 1));
    }

    #[test]
    fn rows_are_bare_strings() {
        let w = grid("aca\ndbb");
        let (h, _) = crossword_split(&w);
        for (m, comp) in h.components().iter().enumerate() {
            let row = encode_string_bare(&w.row(m)).unwrap();
            let comp = comp.with_alphabet(row.alphabet().clone()).unwrap();
            assert_eq!(
                small_canonical_key(&comp, 10_000),
                small_canonical_key(&row, 10_000)
            );
        }
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Crossword::parse("\n\n"), Err(CrosswordError::Empty));
        assert!(matches!(Crossword::parse("ab\nc"), Err(CrosswordError::Parse { line: 2, .. })));
        assert!(matches!(Crossword::parse("a b"), Err(CrosswordError::Parse { line: 1, .. })));
        assert_eq!(grid("ab\ncd\n").to_string(), "ab\ncd\n");
    }

    fn rep(iota: &[f64], tau: &[f64], m: &[f64]) -> StringLinearRep {
        let d = iota.len();
        let c = |v: &[f64]| DVector::from_iterator(v.len(), v.iter().map(|&x| real(x)));
        StringLinearRep::new(
            c(iota),
            c(tau),
            BTreeMap::from([(
                "a".to_string(),
                DMatrix::from_iterator(d, d, m.iter().map(|&x| real(x))).transpose(),
            )]),
        )
        .unwrap()
    }

    #[test]
    fn counting_rows_doubling_columns() {
        let count = rep(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0, 0.0, 1.0]);
        let double = rep(&[1.0], &[1.0], &[2.0]);
        let c = crossword_row_col_hwm(&count, &double, 9).unwrap();
        let w = grid("aa\naa");
        let want = row_col_oracle(&count, &double, &w).unwrap();
        assert_eq!(want, real(2.0 * 2.0 * 4.0 * 4.0));
        assert!(approx_eq(evaluate(&c, &encode_crossword(&w)).unwrap(), want, 1e-8));
        let one = grid("a");
        let v = evaluate(&c, &encode_crossword(&one)).unwrap();
        assert!(approx_eq(v, real(2.0), 1e-8));
    }

    #[test]
    fn degenerate_rows() {
        let zero = rep(&[1.0], &[0.0], &[1.0]);
        let ok = rep(&[1.0], &[1.0], &[1.0]);
        assert!(matches!(
            crossword_row_col_hwm(&zero, &ok, 0),
            Err(CrosswordError::Encode(EncodeError::DegenerateRep { .. }))
        ));
    }
}
