//! Graph encodings of strings, trees, circular strings and 3-ary string
//! graphs, the models lifted from classical linear representations, and
//! direct evaluators of those representations.

mod anbn;
mod circular;
mod strings;
mod trees;

pub use anbn::{anbn_hwm, encode_anbn_graph, is_anbn};
pub use circular::{
    check_trace_lemma, circular_trace_hwm, encode_circular, encode_rooted_circular,
    rooted_circular_hwm, rooted_series_eval, trace_of_product, TraceLemmaReport,
};
pub use strings::{
    encode_string, encode_string_bare, lift_string_series, lift_string_series_iota_eq_tau,
    string_series_eval, IotaTauLift, StringLinearRep, LIFT_ATTEMPTS, LIFT_THRESHOLD,
};
pub use trees::{encode_tree, lift_tree_series, parse_tree, tree_oracle_mu, Tree, TreeLinearRep};

use thiserror::Error;

use crate::hypergraph::{Hypergraph, PortRef, RankedAlphabet, Vertex};

/// Label of the initial vertex of string graphs.
pub const IOTA: &str = "iota";
/// Label of the final vertex of string graphs.
pub const TAU: &str = "tau";
/// Label of the root-facing vertex of tree and rooted circular graphs.
pub const LAMBDA: &str = "lambda";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodeError {
    #[error("the empty word has no such encoding")]
    EmptyWord,
    #[error("word length {0} is not even and positive")]
    OddLength(usize),
    #[error("symbol {0:?} is not covered by the representation")]
    UnknownSymbol(String),
    #[error("symbol {0:?} is reserved by the encoding")]
    ReservedSymbol(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("{what}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("no basis with all coordinates of iota and tau nonzero after {attempts} attempts")]
    DegenerateRep { attempts: usize },
    #[error("the two expressions for alpha disagree by {0:e}")]
    LiftMismatch(f64),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("kmax = {kmax} is below dim + 1 = {need}")]
    KmaxTooSmall { kmax: usize, need: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Splits text into symbols: whitespace-separated tokens if there is any
/// whitespace, single characters otherwise.
pub fn word(text: &str) -> Vec<String> {
    if text.chars().any(char::is_whitespace) {
        text.split_whitespace().map(str::to_string).collect()
    } else {
        text.chars().map(|c| c.to_string()).collect()
    }
}

fn check_reserved<S: AsRef<str>>(w: &[S], reserved: &[&str]) -> Result<(), EncodeError> {
    match w.iter().find(|s| reserved.contains(&s.as_ref())) {
        Some(s) => Err(EncodeError::ReservedSymbol(s.as_ref().to_string())),
        None => Ok(()),
    }
}

/// Alphabet of the given symbols at one arity, plus fixed extra symbols.
fn alphabet_of<S: AsRef<str>>(w: &[S], arity: usize, extra: &[(&str, usize)]) -> RankedAlphabet {
    let mut pairs: Vec<(String, usize)> = w.iter().map(|s| (s.as_ref().to_string(), arity)).collect();
    pairs.sort();
    pairs.dedup();
    pairs.extend(extra.iter().map(|&(s, k)| (s.to_string(), k)));
    RankedAlphabet::new(pairs).expect("reserved symbols were excluded")
}

fn port(v: impl ToString, slot: usize) -> PortRef {
    PortRef::new(v.to_string(), slot)
}

fn build(alphabet: RankedAlphabet, vertices: Vec<Vertex>, edges: Vec<Vec<PortRef>>) -> Hypergraph {
    Hypergraph::new(alphabet, vertices, edges).expect("encodings are valid by construction")
}
