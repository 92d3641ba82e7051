//! JSON documents for graphs, tensors, models and linear representations.
//!
//! Parsing rejects unknown fields and reports schema errors with a JSON
//! pointer. Emission is canonical: object keys sorted, vertices sorted by
//! id, tensor entries in lexicographic index order.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crosswords::{Crossword, CrosswordError};
use crate::encodings::{EncodeError, StringLinearRep, TreeLinearRep};
use crate::engine::{Hwm, ModelError};
use crate::hypergraph::{AlphabetError, Hypergraph, PortRef, RankedAlphabet, ValidationError, Vertex};
use crate::numeric::C64;
use crate::tensor::{
    AlgebraError, BasisLabel, DenseAlgebra, DenseProduct, ProductAlgebra, SparseTensor,
    SubsetAlgebra, SubsetBlock, Table, TensorError,
};

pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("schema error at {pointer:?}: {message}")]
    Schema { pointer: String, message: String },
    #[error("unsupported model version {0}, expected {MODEL_VERSION}")]
    Version(u32),
    #[error("invalid alphabet: {0}")]
    Alphabet(#[from] AlphabetError),
    #[error("invalid hypergraph: {0}")]
    Graph(#[from] ValidationError),
    #[error("invalid algebra: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("invalid tensor: {0}")]
    Tensor(#[from] TensorError),
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("invalid representation: {0}")]
    Encode(#[from] EncodeError),
    #[error("invalid crossword: {0}")]
    Crossword(#[from] CrosswordError),
    #[error("{0}")]
    Invalid(String),
}

impl IoError {
    /// Schema errors are malformed documents; everything else is a well
    /// formed document describing an invalid object.
    pub fn is_schema(&self) -> bool {
        matches!(self, IoError::Schema { .. } | IoError::Version(_))
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        let raw = match seg {
            Segment::Seq { index } => index.to_string(),
            Segment::Map { key } => key.clone(),
            Segment::Enum { variant } => variant.clone(),
            Segment::Unknown => "?".to_string(),
        };
        out.push_str(&raw.replace('~', "~0").replace('/', "~1"));
    }
    out
}

/// Deserializes any document, mapping failures to [`IoError::Schema`].
pub fn from_json<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, IoError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let out = serde_path_to_error::deserialize(&mut de).map_err(|e| IoError::Schema {
        pointer: pointer(e.path()),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| IoError::Schema {
        pointer: String::new(),
        message: e.to_string(),
    })?;
    Ok(out)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> Vec<u8> {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = serde_json::to_vec_pretty(&value).expect("values serialize");
    out.push(b'\n');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<C64> for ComplexDoc {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexDoc> for C64 {
    fn from(z: ComplexDoc) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Vertex ids are strings; bare numbers are accepted on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdDoc {
    Str(String),
    Num(u64),
}

impl IdDoc {
    fn into_string(self) -> String {
        match self {
            IdDoc::Str(s) => s,
            IdDoc::Num(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDoc {
    pub symbol: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: IdDoc,
    pub label: String,
}

pub type PortDoc = (IdDoc, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub alphabet: Vec<SymbolDoc>,
    pub vertices: Vec<VertexDoc>,
    pub hyperedges: Vec<Vec<PortDoc>>,
}

fn alphabet_doc(a: &RankedAlphabet) -> Vec<SymbolDoc> {
    a.symbols()
        .map(|(s, k)| SymbolDoc {
            symbol: s.to_string(),
            arity: k,
        })
        .collect()
}

fn alphabet_from(doc: Vec<SymbolDoc>) -> Result<RankedAlphabet, IoError> {
    Ok(RankedAlphabet::new(doc.into_iter().map(|s| (s.symbol, s.arity)))?)
}

fn port_doc(p: &PortRef) -> PortDoc {
    (IdDoc::Str(p.vertex.clone()), p.slot)
}

fn port_from((id, slot): PortDoc) -> PortRef {
    PortRef::new(id.into_string(), slot)
}

impl GraphDoc {
    pub fn from_graph(g: &Hypergraph) -> Self {
        let g = g.canonical();
        Self {
            alphabet: alphabet_doc(g.alphabet()),
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexDoc {
                    id: IdDoc::Str(v.id.clone()),
                    label: v.label.clone(),
                })
                .collect(),
            hyperedges: g
                .hyperedges()
                .iter()
                .map(|h| h.iter().map(port_doc).collect())
                .collect(),
        }
    }

    pub fn into_graph(self) -> Result<Hypergraph, IoError> {
        let alphabet = alphabet_from(self.alphabet)?;
        let vertices = self
            .vertices
            .into_iter()
            .map(|v| Vertex::new(v.id.into_string(), v.label))
            .collect();
        let edges = self
            .hyperedges
            .into_iter()
            .map(|h| h.into_iter().map(port_from).collect())
            .collect();
        Ok(Hypergraph::new(alphabet, vertices, edges)?)
    }
}

pub fn parse_graph(bytes: &[u8]) -> Result<Hypergraph, IoError> {
    from_json::<GraphDoc>(bytes)?.into_graph()
}

pub fn emit_graph(g: &Hypergraph) -> Vec<u8> {
    to_json(&GraphDoc::from_graph(g))
}

/// A basis label: a dense index, or a port set of a subset block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelDoc {
    Dense(usize),
    Subset(SubsetLabelDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetLabelDoc {
    #[serde(default)]
    pub block: usize,
    pub ports: Vec<PortDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub idx: Vec<LabelDoc>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDoc {
    pub order: usize,
    pub entries: Vec<EntryDoc>,
}

impl TensorDoc {
    /// Subset labels need the algebra to translate port sets.
    pub fn from_tensor(t: &SparseTensor, subset: Option<&SubsetAlgebra>) -> Self {
        let label = |l: &BasisLabel| match l {
            BasisLabel::Dense(i) => LabelDoc::Dense(*i),
            BasisLabel::Subset { block, ports } => {
                let refs = subset
                    .and_then(|a| a.blocks().get(*block))
                    .map(|b| b.ports_of(ports))
                    .expect("subset labels belong to the model algebra");
                LabelDoc::Subset(SubsetLabelDoc {
                    block: *block,
                    ports: refs.iter().map(port_doc).collect(),
                })
            }
        };
        Self {
            order: t.order(),
            entries: t
                .entries()
                .map(|(idx, v)| EntryDoc {
                    idx: idx.iter().map(label).collect(),
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }

    pub fn into_tensor(self, subset: Option<&SubsetAlgebra>) -> Result<SparseTensor, IoError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in self.entries {
            let mut idx = Vec::with_capacity(e.idx.len());
            for l in e.idx {
                idx.push(match l {
                    LabelDoc::Dense(i) => BasisLabel::Dense(i),
                    LabelDoc::Subset(s) => {
                        let alg = subset.ok_or_else(|| {
                            IoError::Invalid("port-set label in a dense tensor".into())
                        })?;
                        let ports: Vec<PortRef> = s.ports.into_iter().map(port_from).collect();
                        alg.label(s.block, &ports).ok_or_else(|| {
                            IoError::Invalid(format!(
                                "label {ports:?} is not a port set of block {}",
                                s.block
                            ))
                        })?
                    }
                });
            }
            entries.push((idx, C64::new(e.re, e.im)));
        }
        Ok(SparseTensor::from_entries(self.order, entries)?)
    }
}

pub fn parse_tensor(bytes: &[u8]) -> Result<SparseTensor, IoError> {
    from_json::<TensorDoc>(bytes)?.into_tensor(None)
}

pub fn emit_tensor(t: &SparseTensor) -> Vec<u8> {
    to_json(&TensorDoc::from_tensor(t, None))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffDoc {
    pub idx: [usize; 3],
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProductDoc {
    Identity { dim: usize },
    DiagScaled { weights: Vec<ComplexDoc> },
    /// Nonzero coefficients of `e_k` in `e_i * e_j`.
    Table { dim: usize, coeffs: Vec<CoeffDoc> },
    Subset { references: Vec<GraphDoc> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaDoc {
    Dense(Vec<ComplexDoc>),
    Subset(EdgeWeightDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeWeightDoc {
    pub edge_weight: WeightsDoc,
}

/// One weight per reference; a single reference may give it bare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightsDoc {
    One(ComplexDoc),
    Many(Vec<ComplexDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub product: ProductDoc,
    pub alpha: AlphaDoc,
}

impl AlgebraDoc {
    pub fn from_algebra(alg: &ProductAlgebra) -> Self {
        let cs = |v: &[C64]| v.iter().map(|&z| ComplexDoc::from(z)).collect::<Vec<_>>();
        match alg {
            ProductAlgebra::Dense(a) => {
                let product = match a.product() {
                    DenseProduct::Identity => ProductDoc::Identity { dim: a.dim() },
                    DenseProduct::DiagScaled(w) => ProductDoc::DiagScaled { weights: cs(w) },
                    DenseProduct::Table(t) => {
                        let d = t.dim();
                        let mut coeffs = Vec::new();
                        for i in 0..d {
                            for j in 0..d {
                                for &(k, v) in t.row(i, j) {
                                    coeffs.push(CoeffDoc {
                                        idx: [i, j, k],
                                        re: v.re,
                                        im: v.im,
                                    });
                                }
                            }
                        }
                        ProductDoc::Table { dim: d, coeffs }
                    }
                };
                Self {
                    product,
                    alpha: AlphaDoc::Dense(cs(a.alpha())),
                }
            }
            ProductAlgebra::Subset(s) => {
                let weights: Vec<ComplexDoc> = s.blocks().iter().map(|b| b.weight().into()).collect();
                Self {
                    product: ProductDoc::Subset {
                        references: s
                            .blocks()
                            .iter()
                            .map(|b| GraphDoc::from_graph(b.reference()))
                            .collect(),
                    },
                    alpha: AlphaDoc::Subset(EdgeWeightDoc {
                        edge_weight: if weights.len() == 1 {
                            WeightsDoc::One(weights[0])
                        } else {
                            WeightsDoc::Many(weights)
                        },
                    }),
                }
            }
        }
    }

    pub fn into_algebra(self) -> Result<ProductAlgebra, IoError> {
        let cs = |v: Vec<ComplexDoc>| v.into_iter().map(C64::from).collect::<Vec<_>>();
        match (self.product, self.alpha) {
            (ProductDoc::Subset { references }, AlphaDoc::Subset(w)) => {
                let weights = match w.edge_weight {
                    WeightsDoc::One(z) => vec![z],
                    WeightsDoc::Many(v) => v,
                };
                if weights.len() != references.len() {
                    return Err(IoError::Invalid(format!(
                        "{} edge weights for {} references",
                        weights.len(),
                        references.len()
                    )));
                }
                let blocks = references
                    .into_iter()
                    .zip(weights)
                    .map(|(g, w)| Ok(SubsetBlock::new(g.into_graph()?, w.into())))
                    .collect::<Result<Vec<_>, IoError>>()?;
                if blocks.is_empty() {
                    return Err(IoError::Invalid("subset algebra without references".into()));
                }
                Ok(ProductAlgebra::Subset(SubsetAlgebra::from_blocks(blocks)))
            }
            (ProductDoc::Subset { .. }, AlphaDoc::Dense(_)) => Err(IoError::Invalid(
                "a subset product takes alpha as {\"edge_weight\": w}".into(),
            )),
            (_, AlphaDoc::Subset(_)) => Err(IoError::Invalid(
                "a dense product takes alpha as an array".into(),
            )),
            (product, AlphaDoc::Dense(alpha)) => {
                let product = match product {
                    ProductDoc::Identity { dim } => {
                        if dim == 0 {
                            return Err(AlgebraError::ZeroDimension.into());
                        }
                        DenseProduct::Identity
                    }
                    ProductDoc::DiagScaled { weights } => DenseProduct::DiagScaled(cs(weights)),
                    ProductDoc::Table { dim, coeffs } => {
                        let mut c = vec![C64::new(0.0, 0.0); dim * dim * dim];
                        for e in coeffs {
                            let [i, j, k] = e.idx;
                            if i >= dim || j >= dim || k >= dim {
                                return Err(IoError::Invalid(format!(
                                    "table coefficient {:?} outside dimension {dim}",
                                    e.idx
                                )));
                            }
                            c[(i * dim + j) * dim + k] += C64::new(e.re, e.im);
                        }
                        DenseProduct::Table(Table::new(dim, c)?)
                    }
                    ProductDoc::Subset { .. } => unreachable!("handled above"),
                };
                let alg = DenseAlgebra::new(product, cs(alpha))?;
                Ok(ProductAlgebra::Dense(alg))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub version: u32,
    pub alphabet: Vec<SymbolDoc>,
    pub algebra: AlgebraDoc,
    pub tensors: BTreeMap<String, TensorDoc>,
}

impl ModelDoc {
    pub fn from_model(m: &Hwm) -> Self {
        let subset = m.algebra().as_subset();
        Self {
            version: MODEL_VERSION,
            alphabet: alphabet_doc(m.alphabet()),
            algebra: AlgebraDoc::from_algebra(m.algebra()),
            tensors: m
                .tensors()
                .iter()
                .map(|(s, t)| (s.clone(), TensorDoc::from_tensor(t, subset)))
                .collect(),
        }
    }

    pub fn into_model(self) -> Result<Hwm, IoError> {
        if self.version != MODEL_VERSION {
            return Err(IoError::Version(self.version));
        }
        let alphabet = alphabet_from(self.alphabet)?;
        let algebra = self.algebra.into_algebra()?;
        let subset = algebra.as_subset();
        let tensors = self
            .tensors
            .into_iter()
            .map(|(s, t)| Ok((s, t.into_tensor(subset)?)))
            .collect::<Result<BTreeMap<_, _>, IoError>>()?;
        Ok(Hwm::new(alphabet, algebra, tensors)?)
    }
}

pub fn parse_model(bytes: &[u8]) -> Result<Hwm, IoError> {
    from_json::<ModelDoc>(bytes)?.into_model()
}

pub fn emit_model(m: &Hwm) -> Vec<u8> {
    to_json(&ModelDoc::from_model(m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringRepDoc {
    pub d: usize,
    pub iota: Vec<ComplexDoc>,
    pub tau: Vec<ComplexDoc>,
    /// Row-major `d x d` matrices.
    pub matrices: BTreeMap<String, Vec<Vec<ComplexDoc>>>,
}

fn vector(v: Vec<ComplexDoc>, d: usize, what: &str) -> Result<DVector<C64>, IoError> {
    if v.len() != d {
        return Err(EncodeError::DimensionMismatch {
            what: what.to_string(),
            expected: d,
            got: v.len(),
        }
        .into());
    }
    Ok(DVector::from_iterator(d, v.into_iter().map(C64::from)))
}

impl StringRepDoc {
    pub fn from_rep(r: &StringLinearRep) -> Self {
        let v = |x: &DVector<C64>| x.iter().map(|&z| ComplexDoc::from(z)).collect();
        Self {
            d: r.dim(),
            iota: v(r.iota()),
            tau: v(r.tau()),
            matrices: r
                .matrices()
                .iter()
                .map(|(s, m)| {
                    let rows = (0..m.nrows())
                        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
                        .collect();
                    (s.clone(), rows)
                })
                .collect(),
        }
    }

    pub fn into_rep(self) -> Result<StringLinearRep, IoError> {
        let d = self.d;
        let iota = vector(self.iota, d, "iota")?;
        let tau = vector(self.tau, d, "tau")?;
        let mut matrices = BTreeMap::new();
        for (s, rows) in self.matrices {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(EncodeError::NotSquare {
                    rows: rows.len(),
                    cols: rows.iter().map(Vec::len).max().unwrap_or(0),
                }
                .into());
            }
            let m = DMatrix::from_fn(d, d, |i, j| C64::from(rows[i][j]));
            matrices.insert(s, m);
        }
        Ok(StringLinearRep::new(iota, tau, matrices)?)
    }
}

pub fn parse_string_rep(bytes: &[u8]) -> Result<StringLinearRep, IoError> {
    from_json::<StringRepDoc>(bytes)?.into_rep()
}

pub fn emit_string_rep(r: &StringLinearRep) -> Vec<u8> {
    to_json(&StringRepDoc::from_rep(r))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeRepDoc {
    pub d: usize,
    pub lambda: Vec<ComplexDoc>,
    pub mu: BTreeMap<String, TensorDoc>,
}

impl TreeRepDoc {
    pub fn from_rep(r: &TreeLinearRep) -> Self {
        Self {
            d: r.dim(),
            lambda: r.lambda().iter().map(|&z| z.into()).collect(),
            mu: r
                .mu()
                .iter()
                .map(|(s, t)| (s.clone(), TensorDoc::from_tensor(t, None)))
                .collect(),
        }
    }

    pub fn into_rep(self) -> Result<TreeLinearRep, IoError> {
        let lambda = vector(self.lambda, self.d, "lambda")?;
        let mu = self
            .mu
            .into_iter()
            .map(|(s, t)| Ok((s, t.into_tensor(None)?)))
            .collect::<Result<BTreeMap<_, _>, IoError>>()?;
        Ok(TreeLinearRep::new(lambda.iter().copied().collect(), mu)?)
    }
}

pub fn parse_tree_rep(bytes: &[u8]) -> Result<TreeLinearRep, IoError> {
    from_json::<TreeRepDoc>(bytes)?.into_rep()
}

pub fn emit_tree_rep(r: &TreeLinearRep) -> Vec<u8> {
    to_json(&TreeRepDoc::from_rep(r))
}

pub fn parse_crossword(bytes: &[u8]) -> Result<Crossword, IoError> {
    let text = std::str::from_utf8(bytes).map_err(|e| IoError::Schema {
        pointer: String::new(),
        message: format!("not UTF-8: {e}"),
    })?;
    Ok(Crossword::parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::three_vertex_graph;
    use crate::random;
    use crate::tiling::tiling_hwm;
    use crate::numeric::ONE;

    #[test]
    fn graph_round_trip() {
        let g = three_vertex_graph();
        let bytes = emit_graph(&g);
        let back = parse_graph(&bytes).unwrap();
        assert_eq!(back, g.canonical());
        assert_eq!(emit_graph(&back), bytes);
    }

    #[test]
    fn numeric_ids() {
        let doc = br#"{"alphabet":[{"symbol":"a","arity":1}],
            "vertices":[{"id":1,"label":"a"}],"hyperedges":[[[1,1]]]}"#;
        let g = parse_graph(doc).unwrap();
        assert_eq!(g.vertices()[0].id, "1");
    }

    #[test]
    fn model_round_trip_is_byte_stable() {
        let g = three_vertex_graph();
        let mut rng = random::rng(1);
        for complex in [false, true] {
            let alg = random::dense_algebra(&mut rng, 2, complex);
            let m = random::hwm(&mut rng, g.alphabet(), alg, 0.7, complex);
            let once = emit_model(&m);
            let back = parse_model(&once).unwrap();
            assert_eq!(back, m);
            assert_eq!(emit_model(&back), once);
        }
        let t = tiling_hwm(&g, ONE);
        let once = emit_model(&t);
        let back = parse_model(&once).unwrap();
        assert_eq!(emit_model(&back), once);
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let err = parse_graph(br#"{"alphabet":[{"symbol":"a","arity":"x"}],"vertices":[],"hyperedges":[]}"#)
            .unwrap_err();
        assert_eq!(
            err.clone(),
            IoError::Schema {
                pointer: "/alphabet/0/arity".into(),
                message: match &err {
                    IoError::Schema { message, .. } => message.clone(),
                    _ => unreachable!(),
                },
            }
        );
        let err = parse_graph(br#"{"alphabet":[],"vertices":[],"hyperedges":[],"extra":1}"#).unwrap_err();
        assert!(err.is_schema());
        let m = emit_model(&random::identity_hwm(&mut random::rng(2), three_vertex_graph().alphabet(), 2, false));
        let err = parse_model(&m[..m.len() / 2]).unwrap_err();
        assert!(err.is_schema());
    }

    #[test]
    fn asymmetric_table_is_reported() {
        let doc = br#"{"version":1,"alphabet":[{"symbol":"a","arity":1}],
            "algebra":{"product":{"kind":"table","dim":2,"coeffs":[{"idx":[0,1,0],"re":1.0}]},
                       "alpha":[{"re":1.0},{"re":1.0}]},
            "tensors":{"a":{"order":1,"entries":[{"idx":[0],"re":1.0}]}}}"#;
        let err = parse_model(doc).unwrap_err();
        assert!(!err.is_schema());
        assert!(matches!(err, IoError::Algebra(AlgebraError::NotSymmetric { i: 0, j: 1, k: 0 })), "{err:?}");
    }

    #[test]
    fn wrong_version() {
        let doc = br#"{"version":2,"alphabet":[],"algebra":{"product":{"kind":"identity","dim":1},"alpha":[{"re":1}]},"tensors":{}}"#;
        assert_eq!(parse_model(doc).unwrap_err(), IoError::Version(2));
    }

    #[test]
    fn string_rep_round_trip() {
        let doc = br#"{"d":2,"iota":[{"re":1},{"re":0}],"tau":[{"re":0},{"re":1}],
            "matrices":{"a":[[{"re":1},{"re":1}],[{"re":0},{"re":1}]]}}"#;
        let r = parse_string_rep(doc).unwrap();
        let once = emit_string_rep(&r);
        assert_eq!(emit_string_rep(&parse_string_rep(&once).unwrap()), once);
        let bad = br#"{"d":2,"iota":[{"re":1}],"tau":[{"re":0},{"re":1}],"matrices":{}}"#;
        assert!(matches!(parse_string_rep(bad), Err(IoError::Encode(_))));
    }
}
