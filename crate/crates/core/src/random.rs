//! Seeded generators for models, graphs and matrices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::engine::Hwm;
use crate::hypergraph::{Hypergraph, PortRef, RankedAlphabet, Vertex};
use crate::numeric::{real, C64, ZERO};
use crate::tensor::{DenseAlgebra, DenseProduct, ProductAlgebra, SparseTensor, Table};

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut Rng64) -> f64 {
    StandardNormal.sample(rng)
}

/// Real and imaginary parts uniform in `[-1, 1)`; real only if `complex` is false.
pub fn scalar(rng: &mut Rng64, complex: bool) -> C64 {
    let re = rng.random_range(-1.0..1.0);
    let im = if complex {
        rng.random_range(-1.0..1.0)
    } else {
        0.0
    };
    C64::new(re, im)
}

/// Dense-basis tensor where each entry is nonzero with probability `density`.
pub fn tensor(rng: &mut Rng64, order: usize, dim: usize, density: f64, complex: bool) -> SparseTensor {
    let n = dim.pow(order as u32);
    let data: Vec<C64> = (0..n)
        .map(|_| {
            if rng.random_bool(density.clamp(0.0, 1.0)) {
                scalar(rng, complex)
            } else {
                ZERO
            }
        })
        .collect();
    SparseTensor::from_dense(order, dim, &data).expect("sized by construction")
}

pub fn alpha(rng: &mut Rng64, dim: usize, complex: bool) -> Vec<C64> {
    (0..dim).map(|_| scalar(rng, complex)).collect()
}

/// Gaussian `n x n` matrix.
pub fn gaussian_matrix(rng: &mut Rng64, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Haar-like random orthogonal matrix from the QR factorization of a
/// Gaussian matrix, with signs fixed by the diagonal of `R`.
pub fn orthogonal(rng: &mut Rng64, n: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// A commutative associative table.
///
/// Either `C^d` with a weighted pointwise product seen through a random
/// orthogonal basis, or truncated polynomials `x^i x^j = x^{i+j}` in a
/// rescaled basis, which is nilpotent apart from the unit.
pub fn table(rng: &mut Rng64, dim: usize, complex: bool) -> Table {
    let mut c = vec![ZERO; dim * dim * dim];
    if rng.random_bool(0.5) {
        let p = orthogonal(rng, dim);
        let w: Vec<C64> = (0..dim).map(|_| scalar(rng, complex)).collect();
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let mut s = ZERO;
                    for l in 0..dim {
                        s += w[l] * (p[(l, i)] * p[(l, j)]) * p[(l, k)];
                    }
                    c[(i * dim + j) * dim + k] = s;
                    c[(j * dim + i) * dim + k] = s;
                }
            }
        }
    } else {
        let s: Vec<C64> = (0..dim)
            .map(|_| {
                let phase = if complex {
                    rng.random_range(0.0..std::f64::consts::TAU)
                } else {
                    0.0
                };
                C64::from_polar(rng.random_range(0.5..2.0), phase)
            })
            .collect();
        for i in 0..dim {
            for j in i..dim {
                if i + j < dim {
                    let v = s[i] * s[j] / s[i + j];
                    c[(i * dim + j) * dim + i + j] = v;
                    c[(j * dim + i) * dim + i + j] = v;
                }
            }
        }
    }
    Table::new(dim, c).expect("associative by construction")
}

/// Random dense algebra of each variant in turn.
pub fn dense_algebra(rng: &mut Rng64, dim: usize, complex: bool) -> DenseAlgebra {
    let product = match rng.random_range(0..3) {
        0 => DenseProduct::Identity,
        1 => DenseProduct::DiagScaled((0..dim).map(|_| scalar(rng, complex)).collect()),
        _ => DenseProduct::Table(table(rng, dim, complex)),
    };
    DenseAlgebra::new(product, alpha(rng, dim, complex)).expect("dimensions agree")
}

pub fn hwm(
    rng: &mut Rng64,
    alphabet: &RankedAlphabet,
    algebra: DenseAlgebra,
    density: f64,
    complex: bool,
) -> Hwm {
    let d = algebra.dim();
    let tensors: BTreeMap<String, SparseTensor> = alphabet
        .symbols()
        .map(|(s, k)| (s.to_string(), tensor(rng, k, d, density, complex)))
        .collect();
    Hwm::new(alphabet.clone(), ProductAlgebra::Dense(algebra), tensors).expect("consistent")
}

pub fn identity_hwm(rng: &mut Rng64, alphabet: &RankedAlphabet, dim: usize, complex: bool) -> Hwm {
    hwm(rng, alphabet, DenseAlgebra::identity_ones(dim), 1.0, complex)
}

/// Alphabet `x1..xn` with arities drawn from `1..=max_arity`.
pub fn alphabet(rng: &mut Rng64, symbols: usize, max_arity: usize) -> RankedAlphabet {
    RankedAlphabet::new((1..=symbols).map(|i| (format!("x{i}"), rng.random_range(1..=max_arity))))
        .expect("distinct symbols")
}

/// Random valid hypergraph: random labels, then the shuffled ports cut into
/// hyperedges of size `1..=max_edge`.
pub fn hypergraph(
    rng: &mut Rng64,
    alphabet: &RankedAlphabet,
    vertices: usize,
    max_edge: usize,
) -> Hypergraph {
    let symbols: Vec<(&str, usize)> = alphabet.symbols().collect();
    let vs: Vec<Vertex> = (1..=vertices.max(1))
        .map(|i| Vertex::new(format!("v{i}"), symbols[rng.random_range(0..symbols.len())].0))
        .collect();
    let mut ports: Vec<PortRef> = vs
        .iter()
        .flat_map(|v| {
            let k = alphabet.arity(&v.label).unwrap();
            (1..=k).map(move |s| PortRef::new(v.id.clone(), s))
        })
        .collect();
    ports.shuffle(rng);
    let mut edges = Vec::new();
    let mut rest = ports.as_slice();
    while !rest.is_empty() {
        let k = rng.random_range(1..=max_edge.max(1)).min(rest.len());
        let (e, tail) = rest.split_at(k);
        edges.push(e.to_vec());
        rest = tail;
    }
    Hypergraph::new(alphabet.clone(), vs, edges).expect("valid by construction")
}

/// Real symmetric matrix with entries in `[-1, 1)`.
pub fn symmetric(rng: &mut Rng64, n: usize) -> DMatrix<C64> {
    let a = DMatrix::from_fn(n, n, |_, _| real(rng.random_range(-1.0..1.0)));
    (&a + a.transpose()) * real(0.5)
}

/// Scalar of modulus above 0.1, for weights that get inverted.
pub fn nonzero_scalar(rng: &mut Rng64, complex: bool) -> C64 {
    loop {
        let z = scalar(rng, complex);
        if z.norm() > 0.1 {
            return z;
        }
    }
}
