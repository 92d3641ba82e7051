use std::collections::{BTreeMap, HashSet};

use nalgebra::DMatrix;
use thiserror::Error;

use super::{BasisFamily, BasisLabel, PortSet};
use crate::hypergraph::{Hypergraph, PortRef};
use crate::numeric::{C64, ONE, ZERO};

/// Absolute tolerance of the associativity check on multiplication tables.
pub const TABLE_ASSOCIATIVITY_TOL: f64 = 1e-9;

/// Sparse vector over a basis, zeros omitted.
pub type SparseVector = BTreeMap<BasisLabel, C64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("label sequence is empty")]
    EmptyLabels,
    #[error("invalid basis label {0}")]
    InvalidLabel(String),
    #[error("algebra dimension must be positive")]
    ZeroDimension,
    #[error("expected {expected} {what}, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("table is not symmetric: coefficient {k} of e_{i} * e_{j} differs from e_{j} * e_{i}")]
    NotSymmetric { i: usize, j: usize, k: usize },
    #[error("table is not associative on (e_{i}, e_{j}, e_{k}): discrepancy {discrepancy:e}")]
    NotAssociative {
        i: usize,
        j: usize,
        k: usize,
        discrepancy: f64,
    },
    #[error("operation requires a dense algebra")]
    NotDense,
    #[error("matrix is not symmetric at ({i}, {j})")]
    MatrixNotSymmetric { i: usize, j: usize },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// Multiplication table: `coeff(i, j, k)` is the coefficient of `e_k` in
/// `e_i * e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    dim: usize,
    coeffs: Vec<C64>,
    rows: Vec<Vec<(usize, C64)>>,
}

impl Table {
    /// Validates symmetry exactly and associativity within
    /// [`TABLE_ASSOCIATIVITY_TOL`].
    pub fn new(dim: usize, coeffs: Vec<C64>) -> Result<Self, AlgebraError> {
        let table = Self::unchecked(dim, coeffs)?;
        table.check_symmetry()?;
        table.check_associativity(TABLE_ASSOCIATIVITY_TOL)?;
        Ok(table)
    }

    /// From nested `c[i][j][k]`.
    pub fn from_nested(c: &[Vec<Vec<C64>>]) -> Result<Self, AlgebraError> {
        let dim = c.len();
        let mut flat = Vec::with_capacity(dim * dim * dim);
        for row in c {
            if row.len() != dim {
                return Err(AlgebraError::Shape {
                    what: "table columns",
                    expected: dim,
                    got: row.len(),
                });
            }
            for cell in row {
                if cell.len() != dim {
                    return Err(AlgebraError::Shape {
                        what: "table coefficients",
                        expected: dim,
                        got: cell.len(),
                    });
                }
                flat.extend_from_slice(cell);
            }
        }
        Self::new(dim, flat)
    }

    /// Skips law validation. For tables assembled from already valid ones.
    pub(crate) fn unchecked(dim: usize, coeffs: Vec<C64>) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if coeffs.len() != dim * dim * dim {
            return Err(AlgebraError::Shape {
                what: "table coefficients",
                expected: dim * dim * dim,
                got: coeffs.len(),
            });
        }
        let rows = coeffs
            .chunks(dim)
            .map(|cell| {
                cell.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != ZERO)
                    .map(|(k, &c)| (k, c))
                    .collect()
            })
            .collect();
        Ok(Self { dim, coeffs, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> C64 {
        self.coeffs[(i * self.dim + j) * self.dim + k]
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Nonzero coefficients of `e_i * e_j`.
    pub fn row(&self, i: usize, j: usize) -> &[(usize, C64)] {
        &self.rows[i * self.dim + j]
    }

    pub fn nested(&self) -> Vec<Vec<Vec<C64>>> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| (0..d).map(|k| self.coeff(i, j, k)).collect()).collect())
            .collect()
    }

    fn check_symmetry(&self) -> Result<(), AlgebraError> {
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    if self.coeff(i, j, k) != self.coeff(j, i, k) {
                        return Err(AlgebraError::NotSymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self, tol: f64) -> Result<(), AlgebraError> {
        let d = self.dim;
        let mut left = vec![ZERO; d];
        let mut right = vec![ZERO; d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    left.fill(ZERO);
                    right.fill(ZERO);
                    for &(l, c) in self.row(i, j) {
                        for &(m, c2) in self.row(l, k) {
                            left[m] += c * c2;
                        }
                    }
                    for &(l, c) in self.row(j, k) {
                        for &(m, c2) in self.row(i, l) {
                            right[m] += c * c2;
                        }
                    }
                    let discrepancy = left
                        .iter()
                        .zip(&right)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    if discrepancy > tol {
                        return Err(AlgebraError::NotAssociative {
                            i,
                            j,
                            k,
                            discrepancy,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DenseProduct {
    /// `e_i * e_j = δ_ij e_i`.
    Identity,
    /// `e_i * e_j = δ_ij w_i e_i`.
    DiagScaled(Vec<C64>),
    Table(Table),
}

/// A product on `C^d` with its linear functional `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseAlgebra {
    product: DenseProduct,
    alpha: Vec<C64>,
}

impl DenseAlgebra {
    pub fn new(product: DenseProduct, alpha: Vec<C64>) -> Result<Self, AlgebraError> {
        let d = alpha.len();
        if d == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        match &product {
            DenseProduct::Identity => {}
            DenseProduct::DiagScaled(w) if w.len() != d => {
                return Err(AlgebraError::Shape {
                    what: "weights",
                    expected: d,
                    got: w.len(),
                })
            }
            DenseProduct::DiagScaled(_) => {}
            DenseProduct::Table(t) if t.dim() != d => {
                return Err(AlgebraError::Shape {
                    what: "alpha entries",
                    expected: t.dim(),
                    got: d,
                })
            }
            DenseProduct::Table(_) => {}
        }
        Ok(Self { product, alpha })
    }

    /// Identity product with `alpha = 1`.
    pub fn identity_ones(dim: usize) -> Self {
        Self {
            product: DenseProduct::Identity,
            alpha: vec![ONE; dim.max(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn product(&self) -> &DenseProduct {
        &self.product
    }

    pub fn alpha(&self) -> &[C64] {
        &self.alpha
    }

    /// Identity product and `alpha` exactly all ones.
    pub fn is_identity_ones(&self) -> bool {
        matches!(self.product, DenseProduct::Identity) && self.alpha.iter().all(|&a| a == ONE)
    }

    fn check_index(&self, i: usize) -> Result<(), AlgebraError> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(AlgebraError::InvalidLabel(format!(
                "e_{i} (dimension {})",
                self.dim()
            )))
        }
    }

    /// `e_i * e_j` as sorted nonzero coefficients.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<(usize, C64)> {
        match &self.product {
            DenseProduct::Identity if i == j => vec![(i, ONE)],
            DenseProduct::DiagScaled(w) if i == j && w[i] != ZERO => vec![(i, w[i])],
            DenseProduct::Table(t) => t.row(i, j).to_vec(),
            _ => Vec::new(),
        }
    }

    /// Left fold of basis indices under the product.
    pub fn fold_indices(&self, idx: &[usize]) -> Result<Vec<(usize, C64)>, AlgebraError> {
        let (&first, rest) = idx.split_first().ok_or(AlgebraError::EmptyLabels)?;
        for &i in idx {
            self.check_index(i)?;
        }
        match &self.product {
            DenseProduct::Identity => Ok(if rest.iter().all(|&i| i == first) {
                vec![(first, ONE)]
            } else {
                Vec::new()
            }),
            DenseProduct::DiagScaled(w) => Ok(if rest.iter().all(|&i| i == first) {
                let c = w[first].powu(rest.len() as u32);
                if c == ZERO {
                    Vec::new()
                } else {
                    vec![(first, c)]
                }
            } else {
                Vec::new()
            }),
            DenseProduct::Table(t) => {
                let d = t.dim();
                let mut acc = vec![ZERO; d];
                acc[first] = ONE;
                let mut next = vec![ZERO; d];
                for &j in rest {
                    next.fill(ZERO);
                    for (l, &v) in acc.iter().enumerate() {
                        if v != ZERO {
                            for &(k, c) in t.row(l, j) {
                                next[k] += v * c;
                            }
                        }
                    }
                    std::mem::swap(&mut acc, &mut next);
                }
                Ok(acc
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| *v != ZERO)
                    .collect())
            }
        }
    }

    /// `alpha` applied to the fold of the indices.
    pub fn edge_form_indices(&self, idx: &[usize]) -> Result<C64, AlgebraError> {
        Ok(self
            .fold_indices(idx)?
            .into_iter()
            .map(|(k, c)| self.alpha[k] * c)
            .sum())
    }

    /// `M_ij = alpha(e_i * e_j)`.
    pub fn bilinear_form(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| {
            self.basis_product(i, j)
                .into_iter()
                .map(|(k, c)| self.alpha[k] * c)
                .sum()
        })
    }

    /// Exhaustive symmetry and associativity check over all basis pairs and
    /// triples, for any product variant.
    pub fn verify_laws(&self, tol: f64) -> Result<(), AlgebraError> {
        match &self.product {
            DenseProduct::Table(t) => {
                t.check_symmetry()?;
                t.check_associativity(tol)
            }
            _ => {
                let t = Table::unchecked(self.dim(), self.dense_coeffs())?;
                t.check_symmetry()?;
                t.check_associativity(tol)
            }
        }
    }

    /// Flattened `c[i][j][k]` for any variant.
    pub fn dense_coeffs(&self) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![ZERO; d * d * d];
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.basis_product(i, j) {
                    out[(i * d + j) * d + k] = c;
                }
            }
        }
        out
    }
}

/// One reference hypergraph of a subset algebra: its edges as port sets
/// and the uniform weight `alpha` gives them.
#[derive(Debug, Clone)]
pub struct SubsetBlock {
    reference: Hypergraph,
    weight: C64,
    edges: HashSet<PortSet>,
}

impl PartialEq for SubsetBlock {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight && self.reference == other.reference
    }
}

impl SubsetBlock {
    pub fn new(reference: Hypergraph, weight: C64) -> Self {
        let n = reference.port_count();
        let edges = reference
            .indexed_edges()
            .iter()
            .map(|e| {
                let mut s = PortSet::with_capacity(n);
                for &p in e {
                    s.insert(p);
                }
                s
            })
            .collect();
        Self {
            reference,
            weight,
            edges,
        }
    }

    pub fn reference(&self) -> &Hypergraph {
        &self.reference
    }

    pub fn weight(&self) -> C64 {
        self.weight
    }

    pub fn port_count(&self) -> usize {
        self.reference.port_count()
    }

    pub fn empty_set(&self) -> PortSet {
        PortSet::with_capacity(self.port_count())
    }

    /// Global index of a reference port.
    pub fn port_index(&self, port: &PortRef) -> Option<usize> {
        let pos = self.reference.position(&port.vertex)?;
        let arity = self.reference.arity_at(pos);
        (port.slot >= 1 && port.slot <= arity).then(|| self.reference.port_offset(pos) + port.slot - 1)
    }

    pub fn port_set<'a>(&self, ports: impl IntoIterator<Item = &'a PortRef>) -> Option<PortSet> {
        let mut s = self.empty_set();
        for p in ports {
            s.insert(self.port_index(p)?);
        }
        Some(s)
    }

    pub fn ports_of(&self, set: &PortSet) -> Vec<PortRef> {
        set.ones()
            .map(|g| {
                let (v, slot) = self.reference.port_at(g);
                PortRef::new(self.reference.vertices()[v].id.clone(), slot)
            })
            .collect()
    }

    pub fn is_edge(&self, set: &PortSet) -> bool {
        self.edges.contains(set)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Product on port sets of one or more reference hypergraphs.
///
/// Within a block, `e_S * e_T = e_{S ∪ T}` when both are nonempty and
/// disjoint and `e_∅` otherwise. Products across blocks are the zero vector.
/// `alpha(e_S)` is the block weight when `S` is an edge of the reference and
/// zero otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetAlgebra {
    blocks: Vec<SubsetBlock>,
}

impl SubsetAlgebra {
    pub fn new(reference: Hypergraph, weight: C64) -> Self {
        Self {
            blocks: vec![SubsetBlock::new(reference, weight)],
        }
    }

    pub fn from_blocks(blocks: Vec<SubsetBlock>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &[SubsetBlock] {
        &self.blocks
    }

    /// Block list of `self` followed by that of `other`.
    pub fn concat(&self, other: &SubsetAlgebra) -> SubsetAlgebra {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        SubsetAlgebra { blocks }
    }

    pub fn label(&self, block: usize, ports: &[PortRef]) -> Option<BasisLabel> {
        let ports = self.blocks.get(block)?.port_set(ports)?;
        Some(BasisLabel::Subset { block, ports })
    }

    fn check<'a>(&self, label: &'a BasisLabel) -> Result<(usize, &'a PortSet), AlgebraError> {
        match label {
            BasisLabel::Subset { block, ports }
                if self
                    .blocks
                    .get(*block)
                    .is_some_and(|b| ports.len() == b.port_count()) =>
            {
                Ok((*block, ports))
            }
            other => Err(AlgebraError::InvalidLabel(format!("{other:?}"))),
        }
    }

    /// Fold of the labels; `None` is the zero vector.
    pub fn fold(&self, labels: &[BasisLabel]) -> Result<Option<BasisLabel>, AlgebraError> {
        self.fold_iter(labels)
    }

    pub fn fold_iter<'a>(
        &self,
        labels: impl IntoIterator<Item = &'a BasisLabel>,
    ) -> Result<Option<BasisLabel>, AlgebraError> {
        let mut labels = labels.into_iter();
        let first = labels.next().ok_or(AlgebraError::EmptyLabels)?;
        let (block, first_set) = self.check(first)?;
        let mut acc = first_set.clone();
        let mut cross = false;
        for label in labels {
            let (b, s) = self.check(label)?;
            if b != block {
                cross = true;
                continue;
            }
            if !acc.is_clear() && !s.is_clear() && acc.is_disjoint(s) {
                acc.union_with(s);
            } else {
                acc.clear();
            }
        }
        Ok((!cross).then_some(BasisLabel::Subset { block, ports: acc }))
    }

    pub fn alpha(&self, label: &BasisLabel) -> Result<C64, AlgebraError> {
        let (block, set) = self.check(label)?;
        let b = &self.blocks[block];
        Ok(if b.is_edge(set) { b.weight() } else { ZERO })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProductAlgebra {
    Dense(DenseAlgebra),
    Subset(SubsetAlgebra),
}

impl ProductAlgebra {
    pub fn identity_ones(dim: usize) -> Self {
        ProductAlgebra::Dense(DenseAlgebra::identity_ones(dim))
    }

    pub fn family(&self) -> BasisFamily {
        match self {
            ProductAlgebra::Dense(_) => BasisFamily::Dense,
            ProductAlgebra::Subset(_) => BasisFamily::Subset,
        }
    }

    pub fn as_dense(&self) -> Option<&DenseAlgebra> {
        match self {
            ProductAlgebra::Dense(a) => Some(a),
            ProductAlgebra::Subset(_) => None,
        }
    }

    pub fn as_subset(&self) -> Option<&SubsetAlgebra> {
        match self {
            ProductAlgebra::Subset(a) => Some(a),
            ProductAlgebra::Dense(_) => None,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.as_dense().map(DenseAlgebra::dim)
    }

    pub fn is_identity_ones(&self) -> bool {
        self.as_dense().is_some_and(DenseAlgebra::is_identity_ones)
    }

    /// Whether a label belongs to this algebra's basis.
    pub fn accepts(&self, label: &BasisLabel) -> bool {
        match (self, label) {
            (ProductAlgebra::Dense(a), BasisLabel::Dense(i)) => *i < a.dim(),
            (ProductAlgebra::Subset(s), l @ BasisLabel::Subset { .. }) => s.check(l).is_ok(),
            _ => false,
        }
    }
}

fn dense_indices(alg: &DenseAlgebra, labels: &[BasisLabel]) -> Result<Vec<usize>, AlgebraError> {
    labels
        .iter()
        .map(|l| match l {
            BasisLabel::Dense(i) if *i < alg.dim() => Ok(*i),
            other => Err(AlgebraError::InvalidLabel(format!("{other:?}"))),
        })
        .collect()
}

/// `e_{l1} * e_{l2} * ... * e_{lk}`, folded left.
pub fn product_fold(
    alg: &ProductAlgebra,
    labels: &[BasisLabel],
) -> Result<SparseVector, AlgebraError> {
    match alg {
        ProductAlgebra::Dense(a) => {
            let idx = dense_indices(a, labels)?;
            Ok(a.fold_indices(&idx)?
                .into_iter()
                .map(|(k, c)| (BasisLabel::Dense(k), c))
                .collect())
        }
        ProductAlgebra::Subset(s) => Ok(s.fold(labels)?.map(|l| (l, ONE)).into_iter().collect()),
    }
}

/// `alpha` of the product of the labels.
pub fn edge_form(alg: &ProductAlgebra, labels: &[BasisLabel]) -> Result<C64, AlgebraError> {
    match alg {
        ProductAlgebra::Dense(a) => a.edge_form_indices(&dense_indices(a, labels)?),
        ProductAlgebra::Subset(s) => match s.fold(labels)? {
            Some(l) => s.alpha(&l),
            None => Ok(ZERO),
        },
    }
}

/// `M_ij = alpha(e_i * e_j)` for a dense algebra.
pub fn bilinear_form_matrix(alg: &ProductAlgebra) -> Result<DMatrix<C64>, AlgebraError> {
    alg.as_dense()
        .map(DenseAlgebra::bilinear_form)
        .ok_or(AlgebraError::NotDense)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::three_vertex_graph;
    use crate::numeric::{approx_eq, real};

    fn d(i: usize) -> BasisLabel {
        BasisLabel::Dense(i)
    }

    #[test]
    fn identity_fold() {
        let alg = ProductAlgebra::identity_ones(4);
        let v = product_fold(&alg, &[d(2), d(2), d(2)]).unwrap();
        assert_eq!(v.into_iter().collect::<Vec<_>>(), vec![(d(2), ONE)]);
        assert!(product_fold(&alg, &[d(0), d(1)]).unwrap().is_empty());
        assert_eq!(product_fold(&alg, &[]), Err(AlgebraError::EmptyLabels));
        assert!(matches!(
            product_fold(&alg, &[d(4)]),
            Err(AlgebraError::InvalidLabel(_))
        ));
    }

    #[test]
    fn identity_edge_form() {
        let alg = ProductAlgebra::identity_ones(3);
        assert_eq!(edge_form(&alg, &[d(1), d(1)]).unwrap(), ONE);
        assert_eq!(edge_form(&alg, &[d(1), d(2)]).unwrap(), ZERO);
        assert_eq!(edge_form(&alg, &[d(0)]).unwrap(), ONE);
    }

    #[test]
    fn diag_scaled_cancels_alpha() {
        let alpha = vec![real(2.0), C64::new(0.5, -1.0), real(-3.0)];
        let w = alpha.iter().map(|a| ONE / a).collect();
        let alg =
            ProductAlgebra::Dense(DenseAlgebra::new(DenseProduct::DiagScaled(w), alpha.clone()).unwrap());
        for i in 0..3 {
            assert!(approx_eq(edge_form(&alg, &[d(i), d(i)]).unwrap(), ONE, 1e-12));
        }
        let m = bilinear_form_matrix(&alg).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { ONE } else { ZERO };
                assert!(approx_eq(m[(i, j)], want, 1e-12));
            }
        }
    }

    #[test]
    fn identity_bilinear_form_is_identity() {
        let m = bilinear_form_matrix(&ProductAlgebra::identity_ones(3)).unwrap();
        assert_eq!(m, DMatrix::identity(3, 3));
    }

    #[test]
    fn asymmetric_table_rejected() {
        let mut c = vec![ZERO; 8];
        // c[(i * d + j) * d + k] with (i, j, k) = (0, 1, 0)
        c[2] = ONE;
        assert!(matches!(
            Table::new(2, c),
            Err(AlgebraError::NotSymmetric { i: 0, j: 1, k: 0 })
        ));
    }

    #[test]
    fn non_associative_table_rejected() {
        // e0*e0 = e1, everything else zero except e1*e1 = e0
        let mut c = vec![ZERO; 8];
        c[1] = ONE;
        c[6] = ONE;
        assert!(matches!(
            Table::new(2, c),
            Err(AlgebraError::NotAssociative { .. })
        ));
    }

    #[test]
    fn shipped_dense_variants_satisfy_laws() {
        for dim in 1..=8 {
            DenseAlgebra::identity_ones(dim).verify_laws(1e-12).unwrap();
            let w: Vec<C64> = (0..dim).map(|i| C64::new(i as f64 - 1.5, 0.25)).collect();
            DenseAlgebra::new(DenseProduct::DiagScaled(w), vec![ONE; dim])
                .unwrap()
                .verify_laws(1e-12)
                .unwrap();
        }
    }

    #[test]
    fn subset_products() {
        let g = three_vertex_graph();
        let alg = SubsetAlgebra::new(g, ONE);
        let p = PortRef::new("v1", 3);
        let q = PortRef::new("v2", 2);
        let ep = alg.label(0, std::slice::from_ref(&p)).unwrap();
        let eq = alg.label(0, std::slice::from_ref(&q)).unwrap();
        let got = alg.fold(&[ep.clone(), eq.clone()]).unwrap().unwrap();
        assert_eq!(got, alg.label(0, &[p.clone(), q.clone()]).unwrap());
        assert_eq!(alg.alpha(&got).unwrap(), ONE);
        let algebra = ProductAlgebra::Subset(alg.clone());
        assert_eq!(edge_form(&algebra, &[ep.clone(), eq.clone()]).unwrap(), ONE);
        // repeated port collapses to the empty set
        let empty = alg.fold(&[ep.clone(), ep.clone()]).unwrap().unwrap();
        assert_eq!(empty, alg.label(0, &[]).unwrap());
        assert_eq!(alg.alpha(&empty).unwrap(), ZERO);
        // the empty set absorbs
        let e = alg.fold(&[empty.clone(), eq.clone()]).unwrap().unwrap();
        assert_eq!(e, empty);
        // a non-edge singleton has zero weight
        assert_eq!(edge_form(&algebra, &[ep]).unwrap(), ZERO);
        let lone = alg.label(0, &[PortRef::new("v3", 1)]).unwrap();
        assert_eq!(edge_form(&algebra, &[lone]).unwrap(), ONE);
    }

    #[test]
    fn cross_block_product_is_zero() {
        let g = three_vertex_graph();
        let alg = SubsetAlgebra::new(g.clone(), ONE).concat(&SubsetAlgebra::new(g, ONE));
        let a = alg.label(0, &[PortRef::new("v3", 1)]).unwrap();
        let b = alg.label(1, &[PortRef::new("v1", 1)]).unwrap();
        assert_eq!(alg.fold(&[a, b]).unwrap(), None);
    }
}
