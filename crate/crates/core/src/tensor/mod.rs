//! Sparse complex tensors over a basis family, product algebras, and the
//! linear algebra used to normalize models.

mod algebra;
mod linalg;

pub use algebra::{
    bilinear_form_matrix, edge_form, product_fold, AlgebraError, DenseAlgebra, DenseProduct,
    ProductAlgebra, SparseVector, SubsetAlgebra, SubsetBlock, Table, TABLE_ASSOCIATIVITY_TOL,
};
pub use linalg::{mode_apply, symmetric_factor};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::numeric::{C64, ZERO};

/// Set of ports of a reference hypergraph, by global port index.
pub type PortSet = FixedBitSet;

/// Index of one tensor mode.
///
/// `Dense(i)` is the canonical basis vector `e_i`, 0-based. `Subset` labels
/// index the virtual basis of a [`SubsetAlgebra`]: a block (one reference
/// hypergraph) and a set of that block's ports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisLabel {
    Dense(usize),
    Subset { block: usize, ports: PortSet },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFamily {
    Dense,
    Subset,
}

impl BasisLabel {
    pub fn family(&self) -> BasisFamily {
        match self {
            BasisLabel::Dense(_) => BasisFamily::Dense,
            BasisLabel::Subset { .. } => BasisFamily::Subset,
        }
    }

    pub fn dense_index(&self) -> Option<usize> {
        match self {
            BasisLabel::Dense(i) => Some(*i),
            BasisLabel::Subset { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("multi-index has {got} labels but the tensor has order {order}")]
    WrongOrder { order: usize, got: usize },
    #[error("tensor mixes dense and subset basis labels")]
    BasisMismatch,
    #[error("dense index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected a tensor over a dense basis")]
    NotDense,
    #[error("mode {mode} out of range for a tensor of order {order}")]
    ModeOutOfRange { mode: usize, order: usize },
    #[error("matrix has {cols} columns but the tensor uses index {index}")]
    ShapeMismatch { cols: usize, index: usize },
    #[error("dense buffer has {got} entries, expected {expected}")]
    BufferLength { expected: usize, got: usize },
}

/// A tensor of order `k` stored as its nonzero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor {
    order: usize,
    entries: BTreeMap<Vec<BasisLabel>, C64>,
}

impl SparseTensor {
    /// The zero tensor of a given order.
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: BTreeMap::new(),
        }
    }

    pub fn scalar(value: C64) -> Self {
        let mut t = Self::zeros(0);
        t.accumulate(Vec::new(), value);
        t
    }

    /// Builds from entries; repeated indices are summed and zeros dropped.
    pub fn from_entries<I>(order: usize, entries: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (Vec<BasisLabel>, C64)>,
    {
        let mut t = Self::zeros(order);
        let mut family = None;
        for (idx, value) in entries {
            if idx.len() != order {
                return Err(TensorError::WrongOrder {
                    order,
                    got: idx.len(),
                });
            }
            for label in &idx {
                match family {
                    None => family = Some(label.family()),
                    Some(f) if f != label.family() => return Err(TensorError::BasisMismatch),
                    _ => {}
                }
            }
            t.accumulate(idx, value);
        }
        Ok(t)
    }

    /// Row-major dense buffer of length `dim^order`.
    pub fn from_dense(order: usize, dim: usize, data: &[C64]) -> Result<Self, TensorError> {
        let expected = dim.pow(order as u32);
        if data.len() != expected {
            return Err(TensorError::BufferLength {
                expected,
                got: data.len(),
            });
        }
        let mut t = Self::zeros(order);
        for (flat, &value) in data.iter().enumerate() {
            if value != ZERO {
                t.entries.insert(unflatten(flat, order, dim), value);
            }
        }
        Ok(t)
    }

    /// `e_{l1} ⊗ ... ⊗ e_{lk}`.
    pub fn pure(labels: Vec<BasisLabel>) -> Result<Self, TensorError> {
        let order = labels.len();
        Self::from_entries(order, [(labels, crate::numeric::ONE)])
    }

    pub fn dense_vector(values: &[C64]) -> Self {
        Self::from_dense(1, values.len(), values).expect("length matches")
    }

    pub fn dense_matrix(rows: &[Vec<C64>]) -> Self {
        let mut t = Self::zeros(2);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                t.accumulate(vec![BasisLabel::Dense(i), BasisLabel::Dense(j)], v);
            }
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &[BasisLabel]) -> C64 {
        self.entries.get(idx).copied().unwrap_or(ZERO)
    }

    /// Entry at a dense multi-index.
    pub fn get_dense(&self, idx: &[usize]) -> C64 {
        let key: Vec<BasisLabel> = idx.iter().map(|&i| BasisLabel::Dense(i)).collect();
        self.get(&key)
    }

    /// Stored entries in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (&[BasisLabel], C64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn family(&self) -> Option<BasisFamily> {
        self.entries
            .keys()
            .flat_map(|k| k.first())
            .map(BasisLabel::family)
            .next()
    }

    /// Largest dense index used, if the tensor is over a dense basis.
    pub fn max_dense_index(&self) -> Option<usize> {
        self.entries
            .keys()
            .flatten()
            .filter_map(BasisLabel::dense_index)
            .max()
    }

    /// Row-major dense buffer; fails on subset labels or indices `>= dim`.
    pub fn to_dense(&self, dim: usize) -> Result<Vec<C64>, TensorError> {
        let mut out = vec![ZERO; dim.pow(self.order as u32)];
        for (idx, &value) in &self.entries {
            let mut flat = 0;
            for label in idx {
                let i = label.dense_index().ok_or(TensorError::NotDense)?;
                if i >= dim {
                    return Err(TensorError::IndexOutOfRange { index: i, dim });
                }
                flat = flat * dim + i;
            }
            out[flat] = value;
        }
        Ok(out)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.entries.values().all(|v| v.im.abs() <= tol)
    }

    pub fn scaled(&self, factor: C64) -> SparseTensor {
        let mut t = Self::zeros(self.order);
        for (idx, &v) in &self.entries {
            t.accumulate(idx.clone(), v * factor);
        }
        t
    }

    /// Relabels every index; entries that collide are summed.
    pub fn map_labels(&self, mut f: impl FnMut(&BasisLabel) -> BasisLabel) -> SparseTensor {
        let mut t = Self::zeros(self.order);
        for (idx, &v) in &self.entries {
            t.accumulate(idx.iter().map(&mut f).collect(), v);
        }
        t
    }

    /// Entrywise sum of two tensors of the same order.
    pub fn add(&self, other: &SparseTensor) -> Result<SparseTensor, TensorError> {
        if self.order != other.order {
            return Err(TensorError::WrongOrder {
                order: self.order,
                got: other.order,
            });
        }
        if let (Some(a), Some(b)) = (self.family(), other.family()) {
            if a != b {
                return Err(TensorError::BasisMismatch);
            }
        }
        let mut t = self.clone();
        for (idx, &v) in &other.entries {
            t.accumulate(idx.clone(), v);
        }
        Ok(t)
    }

    /// Mode-wise Kronecker pairing of two dense tensors of equal order:
    /// index `(i, j)` becomes `i * dim_other + j`.
    pub fn kron_modes(
        &self,
        other: &SparseTensor,
        dim_other: usize,
    ) -> Result<SparseTensor, TensorError> {
        if self.order != other.order {
            return Err(TensorError::WrongOrder {
                order: self.order,
                got: other.order,
            });
        }
        let mut t = Self::zeros(self.order);
        for (ia, &va) in &self.entries {
            for (ib, &vb) in &other.entries {
                let mut idx = Vec::with_capacity(self.order);
                for (a, b) in ia.iter().zip(ib) {
                    let (Some(a), Some(b)) = (a.dense_index(), b.dense_index()) else {
                        return Err(TensorError::NotDense);
                    };
                    if b >= dim_other {
                        return Err(TensorError::IndexOutOfRange {
                            index: b,
                            dim: dim_other,
                        });
                    }
                    idx.push(BasisLabel::Dense(a * dim_other + b));
                }
                t.accumulate(idx, va * vb);
            }
        }
        Ok(t)
    }

    pub(crate) fn accumulate(&mut self, idx: Vec<BasisLabel>, value: C64) {
        if value == ZERO {
            return;
        }
        match self.entries.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(value);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if *e.get() == ZERO {
                    e.remove();
                }
            }
        }
    }
}

/// `(T ⊗ U)_{i.. j..} = T_{i..} U_{j..}`.
pub fn tensor_product(a: &SparseTensor, b: &SparseTensor) -> Result<SparseTensor, TensorError> {
    if let (Some(fa), Some(fb)) = (a.family(), b.family()) {
        if fa != fb {
            return Err(TensorError::BasisMismatch);
        }
    }
    let mut t = SparseTensor::zeros(a.order + b.order);
    for (ia, &va) in &a.entries {
        for (ib, &vb) in &b.entries {
            let mut idx = ia.clone();
            idx.extend(ib.iter().cloned());
            t.accumulate(idx, va * vb);
        }
    }
    Ok(t)
}

pub(crate) fn unflatten(mut flat: usize, order: usize, dim: usize) -> Vec<BasisLabel> {
    let mut idx = vec![BasisLabel::Dense(0); order];
    for slot in idx.iter_mut().rev() {
        *slot = BasisLabel::Dense(flat % dim);
        flat /= dim;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::real;

    fn d(i: usize) -> BasisLabel {
        BasisLabel::Dense(i)
    }

    #[test]
    fn pure_product_of_basis_vectors() {
        let e1 = SparseTensor::pure(vec![d(0)]).unwrap();
        let e2 = SparseTensor::pure(vec![d(1)]).unwrap();
        let t = tensor_product(&e1, &e2).unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(t.nnz(), 1);
        assert_eq!(t.get(&[d(0), d(1)]), real(1.0));
    }

    #[test]
    fn scalar_times_tensor() {
        let t = SparseTensor::dense_matrix(&[vec![real(1.0), real(2.0)], vec![real(0.0), real(5.0)]]);
        let p = tensor_product(&SparseTensor::scalar(real(3.0)), &t).unwrap();
        assert_eq!(p, t.scaled(real(3.0)));
    }

    #[test]
    fn outer_product_by_hand() {
        let v = SparseTensor::dense_vector(&[real(1.0), real(2.0)]);
        let t = tensor_product(&v, &v).unwrap();
        assert_eq!(t.get_dense(&[0, 0]), real(1.0));
        assert_eq!(t.get_dense(&[0, 1]), real(2.0));
        assert_eq!(t.get_dense(&[1, 0]), real(2.0));
        assert_eq!(t.get_dense(&[1, 1]), real(4.0));
        assert!(t.nnz() <= v.nnz() * v.nnz());
    }

    #[test]
    fn mixing_families_is_rejected() {
        let s = BasisLabel::Subset {
            block: 0,
            ports: PortSet::with_capacity(2),
        };
        let a = SparseTensor::pure(vec![d(0)]).unwrap();
        let b = SparseTensor::pure(vec![s.clone()]).unwrap();
        assert_eq!(tensor_product(&a, &b), Err(TensorError::BasisMismatch));
        assert_eq!(
            SparseTensor::from_entries(2, [(vec![d(0), s], real(1.0))]),
            Err(TensorError::BasisMismatch)
        );
    }

    #[test]
    fn zeros_are_not_stored() {
        let t = SparseTensor::from_entries(
            1,
            [(vec![d(0)], real(1.0)), (vec![d(0)], real(-1.0)), (vec![d(1)], real(0.0))],
        )
        .unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn dense_round_trip() {
        let data: Vec<C64> = (0..8).map(|i| real(i as f64)).collect();
        let t = SparseTensor::from_dense(3, 2, &data).unwrap();
        assert_eq!(t.nnz(), 7);
        assert_eq!(t.to_dense(2).unwrap(), data);
        assert_eq!(t.get_dense(&[1, 0, 1]), real(5.0));
    }
}
