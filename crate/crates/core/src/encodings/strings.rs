use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::{alphabet_of, build, check_reserved, port, EncodeError, IOTA, TAU};
use crate::engine::Hwm;
use crate::hypergraph::{Hypergraph, RankedAlphabet, Vertex};
use crate::numeric::{C64, ONE};
use crate::random;
use crate::tensor::{BasisLabel, DenseAlgebra, DenseProduct, ProductAlgebra, SparseTensor};

/// Random basis changes tried after the identity basis.
pub const LIFT_ATTEMPTS: usize = 64;
/// Smallest admissible coordinate magnitude of the rotated `iota`, `tau`.
pub const LIFT_THRESHOLD: f64 = 1e-6;

/// `r(u_1..u_n) = iotaᵀ M_{u_1} ... M_{u_n} tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct StringLinearRep {
    dim: usize,
    iota: DVector<C64>,
    tau: DVector<C64>,
    matrices: BTreeMap<String, DMatrix<C64>>,
}

impl StringLinearRep {
    pub fn new(
        iota: DVector<C64>,
        tau: DVector<C64>,
        matrices: BTreeMap<String, DMatrix<C64>>,
    ) -> Result<Self, EncodeError> {
        let dim = iota.len();
        if tau.len() != dim {
            return Err(EncodeError::DimensionMismatch {
                what: "tau".into(),
                expected: dim,
                got: tau.len(),
            });
        }
        for (s, m) in &matrices {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(EncodeError::DimensionMismatch {
                    what: format!("matrix {s:?}"),
                    expected: dim,
                    got: if m.nrows() != dim { m.nrows() } else { m.ncols() },
                });
            }
        }
        check_reserved(&matrices.keys().collect::<Vec<_>>(), &[IOTA, TAU])?;
        Ok(Self {
            dim,
            iota,
            tau,
            matrices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn iota(&self) -> &DVector<C64> {
        &self.iota
    }

    pub fn tau(&self) -> &DVector<C64> {
        &self.tau
    }

    pub fn matrices(&self) -> &BTreeMap<String, DMatrix<C64>> {
        &self.matrices
    }

    pub fn matrix(&self, s: &str) -> Result<&DMatrix<C64>, EncodeError> {
        self.matrices
            .get(s)
            .ok_or_else(|| EncodeError::UnknownSymbol(s.to_string()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        let ok = |z: &C64| z.im.abs() <= tol;
        self.iota.iter().all(ok)
            && self.tau.iter().all(ok)
            && self.matrices.values().all(|m| m.iter().all(ok))
    }
}

/// Classical value `iotaᵀ M_w tau`; the empty word gives `iotaᵀ tau`.
pub fn string_series_eval<S: AsRef<str>>(
    rep: &StringLinearRep,
    w: &[S],
) -> Result<C64, EncodeError> {
    let mut row = rep.iota.transpose();
    for s in w {
        row *= rep.matrix(s.as_ref())?;
    }
    Ok((row * &rep.tau)[(0, 0)])
}

fn symbol_alphabet(rep: &StringLinearRep, extra: &[(&str, usize)]) -> RankedAlphabet {
    let symbols: Vec<&String> = rep.matrices.keys().collect();
    alphabet_of(&symbols, 2, extra)
}

fn matrix_tensor(m: &DMatrix<C64>) -> SparseTensor {
    let rows: Vec<Vec<C64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    SparseTensor::dense_matrix(&rows)
}

fn vector_tensor(v: &DVector<C64>) -> SparseTensor {
    SparseTensor::dense_vector(v.as_slice())
}

/// Path graph `iota - u_1 - ... - u_n - tau` on vertices `0..=n+1`.
pub fn encode_string<S: AsRef<str>>(w: &[S]) -> Result<Hypergraph, EncodeError> {
    check_reserved(w, &[IOTA, TAU])?;
    let n = w.len();
    let alphabet = alphabet_of(w, 2, &[(IOTA, 1), (TAU, 1)]);
    let mut vertices = vec![Vertex::new("0", IOTA)];
    vertices.extend(
        w.iter()
            .enumerate()
            .map(|(i, s)| Vertex::new((i + 1).to_string(), s.as_ref())),
    );
    vertices.push(Vertex::new((n + 1).to_string(), TAU));
    let mut edges = vec![vec![port(0, 1), port(1, 1)]];
    for i in 1..=n {
        edges.push(vec![port(i, 2), port(i + 1, 1)]);
    }
    Ok(build(alphabet, vertices, edges))
}

/// Path graph on vertices `1..=n` closed by two singleton hyperedges.
pub fn encode_string_bare<S: AsRef<str>>(w: &[S]) -> Result<Hypergraph, EncodeError> {
    if w.is_empty() {
        return Err(EncodeError::EmptyWord);
    }
    let n = w.len();
    let alphabet = alphabet_of(w, 2, &[]);
    let vertices = w
        .iter()
        .enumerate()
        .map(|(i, s)| Vertex::new((i + 1).to_string(), s.as_ref()))
        .collect();
    let mut edges = vec![vec![port(1, 1)]];
    for i in 1..n {
        edges.push(vec![port(i, 2), port(i + 1, 1)]);
    }
    edges.push(vec![port(n, 2)]);
    Ok(build(alphabet, vertices, edges))
}

/// `T^iota = iota`, `T^tau = tau`, `T^σ = M_σ` under the identity product.
pub fn lift_string_series(rep: &StringLinearRep) -> Hwm {
    let alphabet = symbol_alphabet(rep, &[(IOTA, 1), (TAU, 1)]);
    let mut tensors: BTreeMap<String, SparseTensor> = rep
        .matrices
        .iter()
        .map(|(s, m)| (s.clone(), matrix_tensor(m)))
        .collect();
    tensors.insert(IOTA.into(), vector_tensor(&rep.iota));
    tensors.insert(TAU.into(), vector_tensor(&rep.tau));
    Hwm::new(alphabet, ProductAlgebra::identity_ones(rep.dim), tensors).expect("consistent")
}

/// Result of the lift on graphs without `iota`/`tau` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct IotaTauLift {
    pub model: Hwm,
    /// Orthogonal basis change that made every coordinate usable.
    pub basis: DMatrix<f64>,
    /// 0 for the identity basis, `k` for the `k`-th random rotation.
    pub attempt: usize,
    pub alpha: Vec<C64>,
}

/// Moves `iota` and `tau` into `alpha` so that the bare path graph computes
/// the series.
///
/// In a basis `P` where every coordinate of `iota' = Pᵀ iota` and
/// `tau' = Pᵀ tau` is nonzero, `D_ii = sqrt(tau'_i) / sqrt(iota'_i)` gives
/// `D iota' = D⁻¹ tau' = alpha`, and `N_σ = D⁻¹ Pᵀ M_σ P D` with
/// `e_i * e_j = δ_ij e_i / alpha_i` reproduces `iotaᵀ M_w tau`.
pub fn lift_string_series_iota_eq_tau(
    rep: &StringLinearRep,
    seed: u64,
) -> Result<IotaTauLift, EncodeError> {
    let d = rep.dim;
    let mut rng = random::rng(seed);
    for attempt in 0..=LIFT_ATTEMPTS {
        let p = if attempt == 0 {
            DMatrix::<f64>::identity(d, d)
        } else {
            random::orthogonal(&mut rng, d)
        };
        let pc = p.map(|x| C64::new(x, 0.0));
        let iota = pc.transpose() * &rep.iota;
        let tau = pc.transpose() * &rep.tau;
        if iota
            .iter()
            .chain(tau.iter())
            .any(|z| z.norm() < LIFT_THRESHOLD)
        {
            continue;
        }
        let diag: Vec<C64> = (0..d).map(|i| tau[i].sqrt() / iota[i].sqrt()).collect();
        let alpha: Vec<C64> = (0..d).map(|i| diag[i] * iota[i]).collect();
        let check: Vec<C64> = (0..d).map(|i| tau[i] / diag[i]).collect();
        let gap = alpha
            .iter()
            .zip(&check)
            .map(|(a, b)| (a - b).norm() / a.norm().max(1.0))
            .fold(0.0, f64::max);
        if gap > 1e-8 {
            return Err(EncodeError::LiftMismatch(gap));
        }
        let mut tensors = BTreeMap::new();
        for (s, m) in &rep.matrices {
            let rotated = pc.transpose() * m * &pc;
            let n = DMatrix::from_fn(d, d, |i, j| rotated[(i, j)] * diag[j] / diag[i]);
            tensors.insert(s.clone(), matrix_tensor(&n));
        }
        let weights = alpha.iter().map(|a| ONE / a).collect();
        let algebra = DenseAlgebra::new(DenseProduct::DiagScaled(weights), alpha.clone())
            .expect("dimensions agree");
        let model = Hwm::new(
            symbol_alphabet(rep, &[]),
            ProductAlgebra::Dense(algebra),
            tensors,
        )
        .expect("consistent");
        return Ok(IotaTauLift {
            model,
            basis: p,
            attempt,
            alpha,
        });
    }
    Err(EncodeError::DegenerateRep {
        attempts: LIFT_ATTEMPTS + 1,
    })
}

pub(crate) fn check_dense_labels(t: &SparseTensor, dim: usize, what: &str) -> Result<(), EncodeError> {
    for (idx, _) in t.entries() {
        for l in idx {
            match l {
                BasisLabel::Dense(i) if *i < dim => {}
                _ => {
                    return Err(EncodeError::DimensionMismatch {
                        what: what.to_string(),
                        expected: dim,
                        got: l.dense_index().map_or(0, |i| i + 1),
                    })
                }
            }
        }
    }
    Ok(())
}
