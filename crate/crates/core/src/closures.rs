//! Sum, Hadamard product and normalization of models.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::engine::Hwm;
use crate::hypergraph::RankedAlphabet;
use crate::numeric::{C64, ONE, ZERO};
use crate::tensor::{
    bilinear_form_matrix, mode_apply, symmetric_factor, AlgebraError, BasisLabel, DenseAlgebra,
    DenseProduct, ProductAlgebra, SparseTensor, Table,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosureError {
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("construction requires dense algebras")]
    NotDense,
    #[error("cannot combine a dense model with a subset model")]
    MixedFamilies,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn same_alphabet(a: &RankedAlphabet, b: &RankedAlphabet) -> Result<(), ClosureError> {
    if a == b {
        return Ok(());
    }
    let show = |x: &RankedAlphabet| {
        x.symbols()
            .map(|(s, k)| format!("{s}:{k}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    Err(ClosureError::AlphabetMismatch(format!("{{{}}} vs {{{}}}", show(a), show(b))))
}

fn weights(a: &DenseAlgebra) -> Option<Vec<C64>> {
    match a.product() {
        DenseProduct::Identity => Some(vec![ONE; a.dim()]),
        DenseProduct::DiagScaled(w) => Some(w.clone()),
        DenseProduct::Table(_) => None,
    }
}

/// Block-diagonal product on `C^{m+n}`: each block keeps its own product,
/// cross-block products vanish; `alpha` is concatenated.
pub fn direct_sum_algebra(a: &DenseAlgebra, b: &DenseAlgebra) -> DenseAlgebra {
    let (m, n) = (a.dim(), b.dim());
    let mut alpha = a.alpha().to_vec();
    alpha.extend_from_slice(b.alpha());
    let product = match (a.product(), b.product()) {
        (DenseProduct::Identity, DenseProduct::Identity) => DenseProduct::Identity,
        _ => match (weights(a), weights(b)) {
            (Some(mut wa), Some(wb)) => {
                wa.extend(wb);
                DenseProduct::DiagScaled(wa)
            }
            _ => {
                let d = m + n;
                let mut c = vec![ZERO; d * d * d];
                for i in 0..m {
                    for j in 0..m {
                        for (k, v) in a.basis_product(i, j) {
                            c[(i * d + j) * d + k] = v;
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        for (k, v) in b.basis_product(i, j) {
                            c[((m + i) * d + m + j) * d + m + k] = v;
                        }
                    }
                }
                DenseProduct::Table(Table::unchecked(d, c).expect("sized"))
            }
        },
    };
    DenseAlgebra::new(product, alpha).expect("sized")
}

/// Tensor product algebra on `C^{mn}` with `(i, j) -> i n + j`.
pub fn kron_algebra(a: &DenseAlgebra, b: &DenseAlgebra) -> DenseAlgebra {
    let (m, n) = (a.dim(), b.dim());
    let alpha: Vec<C64> = (0..m * n).map(|ij| a.alpha()[ij / n] * b.alpha()[ij % n]).collect();
    let product = match (a.product(), b.product()) {
        (DenseProduct::Identity, DenseProduct::Identity) => DenseProduct::Identity,
        _ => match (weights(a), weights(b)) {
            (Some(wa), Some(wb)) => {
                DenseProduct::DiagScaled((0..m * n).map(|ij| wa[ij / n] * wb[ij % n]).collect())
            }
            _ => {
                let d = m * n;
                let mut c = vec![ZERO; d * d * d];
                for i in 0..m {
                    for i2 in 0..m {
                        let pa = a.basis_product(i, i2);
                        if pa.is_empty() {
                            continue;
                        }
                        for j in 0..n {
                            for j2 in 0..n {
                                for &(k, va) in &pa {
                                    for (k2, vb) in b.basis_product(j, j2) {
                                        c[((i * n + j) * d + i2 * n + j2) * d + k * n + k2] = va * vb;
                                    }
                                }
                            }
                        }
                    }
                }
                DenseProduct::Table(Table::unchecked(d, c).expect("sized"))
            }
        },
    };
    DenseAlgebra::new(product, alpha).expect("sized")
}

fn shift_dense(t: &SparseTensor, by: usize) -> SparseTensor {
    t.map_labels(|l| match l {
        BasisLabel::Dense(i) => BasisLabel::Dense(i + by),
        other => other.clone(),
    })
}

fn shift_blocks(t: &SparseTensor, by: usize) -> SparseTensor {
    t.map_labels(|l| match l {
        BasisLabel::Subset { block, ports } => BasisLabel::Subset {
            block: block + by,
            ports: ports.clone(),
        },
        other => other.clone(),
    })
}

/// `C^x = A^x ⊕ B^x` on the direct sum of the algebras.
///
/// Equals `r_A + r_B` on connected graphs. On a disconnected graph the
/// value is the product over components of `r_A(c) + r_B(c)`.
pub fn hwm_sum(a: &Hwm, b: &Hwm) -> Result<Hwm, ClosureError> {
    same_alphabet(a.alphabet(), b.alphabet())?;
    type Shift = Box<dyn Fn(&SparseTensor) -> SparseTensor>;
    let (algebra, shift): (ProductAlgebra, Shift) =
        match (a.algebra(), b.algebra()) {
            (ProductAlgebra::Dense(x), ProductAlgebra::Dense(y)) => {
                let m = x.dim();
                (
                    ProductAlgebra::Dense(direct_sum_algebra(x, y)),
                    Box::new(move |t| shift_dense(t, m)),
                )
            }
            (ProductAlgebra::Subset(x), ProductAlgebra::Subset(y)) => {
                let m = x.blocks().len();
                (
                    ProductAlgebra::Subset(x.concat(y)),
                    Box::new(move |t| shift_blocks(t, m)),
                )
            }
            _ => return Err(ClosureError::MixedFamilies),
        };
    let tensors = a
        .tensors()
        .iter()
        .map(|(s, ta)| {
            let tb = shift(&b.tensors()[s]);
            (s.clone(), ta.add(&tb).expect("same order and family"))
        })
        .collect();
    Ok(Hwm::new(a.alphabet().clone(), algebra, tensors).expect("consistent"))
}

/// `D^x = A^x ⊗ B^x` mode by mode on the tensor product algebra; computes
/// `r_A · r_B` on every graph.
pub fn hwm_hadamard(a: &Hwm, b: &Hwm) -> Result<Hwm, ClosureError> {
    same_alphabet(a.alphabet(), b.alphabet())?;
    let (Some(x), Some(y)) = (a.algebra().as_dense(), b.algebra().as_dense()) else {
        return Err(ClosureError::NotDense);
    };
    let n = y.dim();
    let tensors = a
        .tensors()
        .iter()
        .map(|(s, ta)| {
            let t = ta.kron_modes(&b.tensors()[s], n).expect("validated dense tensors");
            (s.clone(), t)
        })
        .collect();
    Ok(Hwm::new(
        a.alphabet().clone(),
        ProductAlgebra::Dense(kron_algebra(x, y)),
        tensors,
    )
    .expect("consistent"))
}

/// Rewrites a model under the identity product with `alpha = 1`, preserving
/// its value on every graph whose hyperedges all have exactly two ports.
///
/// With `M_ij = alpha(e_i * e_j) = (QᵀQ)_ij`, every mode of every tensor is
/// multiplied by `Q`.
pub fn normalize_closed_graph(a: &Hwm, tol: f64) -> Result<Hwm, ClosureError> {
    let m = bilinear_form_matrix(a.algebra()).map_err(|_| ClosureError::NotDense)?;
    let q = symmetric_factor(&m, tol)?;
    let tensors: BTreeMap<String, SparseTensor> = a
        .tensors()
        .iter()
        .map(|(s, t)| {
            let mut out = t.clone();
            for mode in 0..t.order() {
                out = mode_apply(&q, &out, mode).expect("dense tensors of matching dimension");
            }
            (s.clone(), out)
        })
        .collect();
    Ok(Hwm::new(
        a.alphabet().clone(),
        ProductAlgebra::identity_ones(m.nrows()),
        tensors,
    )
    .expect("consistent"))
}
