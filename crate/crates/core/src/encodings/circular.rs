use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::{alphabet_of, build, check_reserved, port, EncodeError, LAMBDA};
use crate::engine::Hwm;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::numeric::C64;
use crate::tensor::{ProductAlgebra, SparseTensor};

fn matrix_tensor(m: &DMatrix<C64>) -> SparseTensor {
    let rows: Vec<Vec<C64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    SparseTensor::dense_matrix(&rows)
}

fn shared_dim(matrices: &BTreeMap<String, DMatrix<C64>>) -> Result<usize, EncodeError> {
    let mut dim = None;
    for (s, m) in matrices {
        if m.nrows() != m.ncols() {
            return Err(EncodeError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        match dim {
            None => dim = Some(m.nrows()),
            Some(d) if d != m.nrows() => {
                return Err(EncodeError::DimensionMismatch {
                    what: format!("matrix {s:?}"),
                    expected: d,
                    got: m.nrows(),
                })
            }
            _ => {}
        }
    }
    dim.filter(|&d| d > 0).ok_or(EncodeError::DimensionMismatch {
        what: "matrix family".into(),
        expected: 1,
        got: 0,
    })
}

/// `Tr(M_{w_1} ... M_{w_n})`.
pub fn trace_of_product<S: AsRef<str>>(
    matrices: &BTreeMap<String, DMatrix<C64>>,
    w: &[S],
) -> Result<C64, EncodeError> {
    let d = shared_dim(matrices)?;
    let mut acc = DMatrix::<C64>::identity(d, d);
    for s in w {
        let m = matrices
            .get(s.as_ref())
            .ok_or_else(|| EncodeError::UnknownSymbol(s.as_ref().to_string()))?;
        acc *= m;
    }
    Ok(acc.trace())
}

/// Cycle on vertices `1..=n` with edges `{(i,2), (i mod n + 1, 1)}`.
pub fn encode_circular<S: AsRef<str>>(w: &[S]) -> Result<Hypergraph, EncodeError> {
    if w.is_empty() {
        return Err(EncodeError::EmptyWord);
    }
    let n = w.len();
    let vertices = w
        .iter()
        .enumerate()
        .map(|(i, s)| Vertex::new((i + 1).to_string(), s.as_ref()))
        .collect();
    let edges = (1..=n).map(|i| vec![port(i, 2), port(i % n + 1, 1)]).collect();
    Ok(build(alphabet_of(w, 2, &[]), vertices, edges))
}

/// `T^σ = M_σ` under the identity product; evaluates circular strings to
/// traces of matrix products.
pub fn circular_trace_hwm(matrices: &BTreeMap<String, DMatrix<C64>>) -> Result<Hwm, EncodeError> {
    let d = shared_dim(matrices)?;
    let symbols: Vec<&String> = matrices.keys().collect();
    let tensors = matrices
        .iter()
        .map(|(s, m)| (s.clone(), matrix_tensor(m)))
        .collect();
    Ok(Hwm::new(alphabet_of(&symbols, 2, &[]), ProductAlgebra::identity_ones(d), tensors)
        .expect("consistent"))
}

/// Cycle through a `lambda` vertex `0`: edges `{(i,2), (i+1,1)}` for
/// `0 <= i < n` and `{(n,2), (0,1)}`. The empty word is a `lambda` loop.
pub fn encode_rooted_circular<S: AsRef<str>>(w: &[S]) -> Result<Hypergraph, EncodeError> {
    check_reserved(w, &[LAMBDA])?;
    let n = w.len();
    let mut vertices = vec![Vertex::new("0", LAMBDA)];
    vertices.extend(
        w.iter()
            .enumerate()
            .map(|(i, s)| Vertex::new((i + 1).to_string(), s.as_ref())),
    );
    let mut edges: Vec<_> = (0..n).map(|i| vec![port(i, 2), port(i + 1, 1)]).collect();
    edges.push(vec![port(n, 2), port(0, 1)]);
    Ok(build(alphabet_of(w, 2, &[(LAMBDA, 2)]), vertices, edges))
}

/// `Σ_i iota_iᵀ M_w tau_i`.
pub fn rooted_series_eval<S: AsRef<str>>(
    matrices: &BTreeMap<String, DMatrix<C64>>,
    reps: &[(DVector<C64>, DVector<C64>)],
    w: &[S],
) -> Result<C64, EncodeError> {
    let d = shared_dim(matrices)?;
    let mut acc = DMatrix::<C64>::identity(d, d);
    for s in w {
        acc *= matrices
            .get(s.as_ref())
            .ok_or_else(|| EncodeError::UnknownSymbol(s.as_ref().to_string()))?;
    }
    Ok(reps
        .iter()
        .map(|(iota, tau)| (iota.transpose() * &acc * tau)[(0, 0)])
        .sum())
}

/// Sum of string series sharing their matrices, on rooted circular graphs.
///
/// The cycle contracts to `Tr(T^lambda M_w)`, so `T^lambda = Σ_i tau_i iota_iᵀ`
/// yields `Σ_i iota_iᵀ M_w tau_i`.
pub fn rooted_circular_hwm(
    matrices: &BTreeMap<String, DMatrix<C64>>,
    reps: &[(DVector<C64>, DVector<C64>)],
) -> Result<Hwm, EncodeError> {
    let d = shared_dim(matrices)?;
    check_reserved(&matrices.keys().collect::<Vec<_>>(), &[LAMBDA])?;
    let mut lambda = DMatrix::<C64>::zeros(d, d);
    for (i, (iota, tau)) in reps.iter().enumerate() {
        for (what, v) in [("iota", iota), ("tau", tau)] {
            if v.len() != d {
                return Err(EncodeError::DimensionMismatch {
                    what: format!("{what} of representation {}", i + 1),
                    expected: d,
                    got: v.len(),
                });
            }
        }
        lambda += tau * iota.transpose();
    }
    let symbols: Vec<&String> = matrices.keys().collect();
    let mut tensors: BTreeMap<String, SparseTensor> = matrices
        .iter()
        .map(|(s, m)| (s.clone(), matrix_tensor(m)))
        .collect();
    tensors.insert(LAMBDA.into(), matrix_tensor(&lambda));
    Ok(Hwm::new(
        alphabet_of(&symbols, 2, &[(LAMBDA, 2)]),
        ProductAlgebra::identity_ones(d),
        tensors,
    )
    .expect("consistent"))
}

/// Outcome of testing "Tr(M^k) = 0 for k >= 2 implies Tr(M) = 0" on one
/// matrix in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceLemmaReport {
    pub premise_holds: bool,
    pub conclusion_holds: bool,
    /// `Tr(M^k)` for `k = 1..=kmax`.
    pub traces: Vec<f64>,
    /// `max(1, ‖M‖_F)`.
    pub scale: f64,
}

impl TraceLemmaReport {
    /// Premise true and conclusion false.
    pub fn is_counterexample(&self) -> bool {
        self.premise_holds && !self.conclusion_holds
    }
}

/// Premise: `|Tr(M^k)| <= tol * max(1, ‖M‖)` for `k = 2..=kmax`.
/// Conclusion: `|Tr(M)| <= 100 * tol * max(1, ‖M‖)`.
pub fn check_trace_lemma(
    m: &DMatrix<f64>,
    kmax: usize,
    tol: f64,
) -> Result<TraceLemmaReport, EncodeError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(EncodeError::NotSquare { rows, cols });
    }
    if kmax < rows + 1 {
        return Err(EncodeError::KmaxTooSmall {
            kmax,
            need: rows + 1,
        });
    }
    let scale = m.norm().max(1.0);
    let mut power = m.clone();
    let mut traces = vec![m.trace()];
    for _ in 2..=kmax {
        power = &power * m;
        traces.push(power.trace());
    }
    let premise_holds = traces[1..].iter().all(|t| t.abs() <= tol * scale);
    let conclusion_holds = traces[0].abs() <= 100.0 * tol * scale;
    Ok(TraceLemmaReport {
        premise_holds,
        conclusion_holds,
        traces,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::word;
    use crate::engine::evaluate;
    use crate::numeric::{approx_eq, real, ONE, ZERO};

    fn swap() -> BTreeMap<String, DMatrix<C64>> {
        BTreeMap::from([(
            "a".to_string(),
            DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        )])
    }

    #[test]
    fn circular_shapes() {
        let g = encode_circular(&word("a")).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 1));
        assert_eq!(g.hyperedges()[0], vec![port(1, 1), port(1, 2)]);
        let g = encode_circular(&word("ab")).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 2));
        assert!(g.is_connected());
        assert_eq!(encode_circular::<&str>(&[]), Err(EncodeError::EmptyWord));
    }

    #[test]
    fn swap_matrix_traces() {
        let m = circular_trace_hwm(&swap()).unwrap();
        assert_eq!(evaluate(&m, &encode_circular(&word("aa")).unwrap()).unwrap(), real(2.0));
        assert_eq!(evaluate(&m, &encode_circular(&word("aaa")).unwrap()).unwrap(), ZERO);
        let id = BTreeMap::from([("a".to_string(), DMatrix::<C64>::identity(3, 3))]);
        let m = circular_trace_hwm(&id).unwrap();
        assert_eq!(evaluate(&m, &encode_circular(&word("aaaa")).unwrap()).unwrap(), real(3.0));
    }

    #[test]
    fn rooted_shapes() {
        let g = encode_rooted_circular(&word("ab")).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        let g = encode_rooted_circular::<&str>(&[]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 1));
    }

    #[test]
    fn rooted_counting() {
        let mats = BTreeMap::from([(
            "a".to_string(),
            DMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]),
        )]);
        let reps = vec![(DVector::from_vec(vec![ONE, ZERO]), DVector::from_vec(vec![ZERO, ONE]))];
        let m = rooted_circular_hwm(&mats, &reps).unwrap();
        let g = encode_rooted_circular(&word("aaa")).unwrap();
        assert!(approx_eq(evaluate(&m, &g).unwrap(), real(3.0), 1e-12));
        let e = encode_rooted_circular::<&str>(&[]).unwrap();
        assert_eq!(evaluate(&m, &e).unwrap(), ZERO);
        assert_eq!(rooted_series_eval(&mats, &reps, &word("aaa")).unwrap(), real(3.0));
    }

    #[test]
    fn trace_lemma_cases() {
        let nil = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let r = check_trace_lemma(&nil, 3, 1e-9).unwrap();
        assert!(r.premise_holds && r.conclusion_holds);
        let diag = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let r = check_trace_lemma(&diag, 3, 1e-9).unwrap();
        assert!(!r.premise_holds);
        assert_eq!(r.traces[1], 2.0);
        let upper = DMatrix::from_fn(4, 4, |i, j| if j > i { (i + 2 * j) as f64 } else { 0.0 });
        let r = check_trace_lemma(&upper, 5, 1e-9).unwrap();
        assert!(r.premise_holds && r.conclusion_holds);
        assert!(matches!(
            check_trace_lemma(&upper, 4, 1e-9),
            Err(EncodeError::KmaxTooSmall { .. })
        ));
        assert!(matches!(
            check_trace_lemma(&DMatrix::zeros(2, 3), 4, 1e-9),
            Err(EncodeError::NotSquare { .. })
        ));
    }
}
