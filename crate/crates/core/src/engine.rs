//! The model type and its evaluation engines.
//!
//! Every engine computes the same series
//! `r_M(G) = Σ_γ T_γ Π_h alpha(⨀_{p ∈ h} e_{γ(p)})`; they differ only in
//! how the sum is organized.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, PortRef, RankedAlphabet};
use crate::numeric::{saturating_pow, C64, ONE, ZERO};
use crate::tensor::{
    edge_form, AlgebraError, BasisLabel, DenseAlgebra, DenseProduct, ProductAlgebra, SparseTensor,
};

pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;
pub const DEFAULT_INTERMEDIATE_BUDGET: u64 = 10_000_000;

const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("no tensor for symbol {0:?}")]
    MissingTensor(String),
    #[error("tensor for {0:?} has no symbol in the alphabet")]
    UnknownSymbol(String),
    #[error("tensor for {symbol:?} has order {got}, symbol arity is {expected}")]
    OrderMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("tensor for {symbol:?} uses a label outside the algebra's basis: {label}")]
    InvalidLabel { symbol: String, label: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{what} needs {needed} but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    #[error("engine requires a dense algebra")]
    BasisMismatch,
    #[error("engine requires the identity product with alpha = 1")]
    WrongAlgebra,
    #[error("graph vertex {vertex:?} has label {label:?} unknown to the model")]
    UnknownLabel { vertex: String, label: String },
    #[error("label {label:?} has arity {graph} in the graph but {model} in the model")]
    ArityMismatch {
        label: String,
        graph: usize,
        model: usize,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A hypergraph weighted model: one tensor per symbol and a product algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Hwm {
    alphabet: RankedAlphabet,
    algebra: ProductAlgebra,
    tensors: BTreeMap<String, SparseTensor>,
}

impl Hwm {
    pub fn new(
        alphabet: RankedAlphabet,
        algebra: ProductAlgebra,
        tensors: BTreeMap<String, SparseTensor>,
    ) -> Result<Self, ModelError> {
        for (symbol, arity) in alphabet.symbols() {
            let t = tensors
                .get(symbol)
                .ok_or_else(|| ModelError::MissingTensor(symbol.to_string()))?;
            if t.order() != arity {
                return Err(ModelError::OrderMismatch {
                    symbol: symbol.to_string(),
                    expected: arity,
                    got: t.order(),
                });
            }
            for (idx, _) in t.entries() {
                if let Some(bad) = idx.iter().find(|l| !algebra.accepts(l)) {
                    return Err(ModelError::InvalidLabel {
                        symbol: symbol.to_string(),
                        label: format!("{bad:?}"),
                    });
                }
            }
        }
        if let Some(extra) = tensors.keys().find(|s| !alphabet.contains(s)) {
            return Err(ModelError::UnknownSymbol(extra.clone()));
        }
        Ok(Self {
            alphabet,
            algebra,
            tensors,
        })
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn algebra(&self) -> &ProductAlgebra {
        &self.algebra
    }

    pub fn tensors(&self) -> &BTreeMap<String, SparseTensor> {
        &self.tensors
    }

    pub fn tensor(&self, symbol: &str) -> Option<&SparseTensor> {
        self.tensors.get(symbol)
    }

    /// Dimension of a dense model.
    pub fn dim(&self) -> Option<usize> {
        self.algebra.dim()
    }

    fn check_graph(&self, g: &Hypergraph) -> Result<(), EvalError> {
        for v in g.vertices() {
            let model = self
                .alphabet
                .arity(&v.label)
                .ok_or_else(|| EvalError::UnknownLabel {
                    vertex: v.id.clone(),
                    label: v.label.clone(),
                })?;
            let graph = g.alphabet().arity(&v.label).unwrap_or(model);
            if graph != model {
                return Err(EvalError::ArityMismatch {
                    label: v.label.clone(),
                    graph,
                    model,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Auto,
    Naive,
    Support,
    Factored,
    GammaId,
}

impl Engine {
    pub const ALL: [Engine; 5] = [
        Engine::Auto,
        Engine::Naive,
        Engine::Support,
        Engine::Factored,
        Engine::GammaId,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::Naive => "naive",
            Engine::Support => "support",
            Engine::Factored => "factored",
            Engine::GammaId => "gamma_id",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown engine {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContractionOrder {
    #[default]
    Greedy,
    /// Absorb factors into a running result from the end of the list.
    RightToLeft,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub term_budget: u64,
    pub intermediate_budget: u64,
    pub order: ContractionOrder,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            term_budget: DEFAULT_TERM_BUDGET,
            intermediate_budget: DEFAULT_INTERMEDIATE_BUDGET,
            order: ContractionOrder::Greedy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: C64,
    pub engine: Engine,
    /// Terms enumerated, or entries produced for the factored engine.
    pub terms: u64,
}

/// Map from every port of the graph to a basis label.
pub type Assignment = BTreeMap<PortRef, BasisLabel>;

/// The single term `T_γ Π_h alpha(⨀ e_{γ(h)})` of the series.
pub fn term(m: &Hwm, g: &Hypergraph, gamma: &Assignment) -> Result<C64, EvalError> {
    m.check_graph(g)?;
    let mut value = ONE;
    for v in g.vertices() {
        let t = &m.tensors[&v.label];
        let idx: Vec<BasisLabel> = (1..=t.order())
            .map(|slot| gamma[&PortRef::new(v.id.clone(), slot)].clone())
            .collect();
        value *= t.get(&idx);
    }
    for h in g.hyperedges() {
        let labels: Vec<BasisLabel> = h.iter().map(|p| gamma[p].clone()).collect();
        value *= edge_form(&m.algebra, &labels)?;
    }
    Ok(value)
}

fn budget(what: &'static str, needed: u64, budget: u64) -> Result<(), EvalError> {
    if needed > budget {
        Err(EvalError::BudgetExceeded {
            what,
            needed,
            budget,
        })
    } else {
        Ok(())
    }
}

/// Dense lookup table of a symbol tensor.
fn dense_values(t: &SparseTensor, d: usize) -> Vec<C64> {
    t.to_dense(d).expect("model tensors are validated against the algebra")
}

/// `W[i_1..i_k] = alpha(e_{i_1} * ... * e_{i_k})` over a dense algebra.
pub fn edge_weight_tensor(
    alg: &ProductAlgebra,
    k: usize,
    term_budget: u64,
) -> Result<SparseTensor, EvalError> {
    let a = alg.as_dense().ok_or(EvalError::BasisMismatch)?;
    let d = a.dim();
    let mut out = SparseTensor::zeros(k);
    match a.product() {
        DenseProduct::Identity | DenseProduct::DiagScaled(_) => {
            for i in 0..d {
                let v = a.edge_form_indices(&vec![i; k])?;
                out.accumulate(vec![BasisLabel::Dense(i); k], v);
            }
        }
        DenseProduct::Table(_) => {
            budget("edge weight tensor", saturating_pow(d as u64, k), term_budget)?;
            let dense = dense_edge_weights(a, k)?;
            out = SparseTensor::from_dense(k, d, &dense).expect("sized by construction");
        }
    }
    Ok(out)
}

fn dense_edge_weights(a: &DenseAlgebra, k: usize) -> Result<Vec<C64>, EvalError> {
    let d = a.dim();
    let n = d.pow(k as u32);
    let mut idx = vec![0usize; k];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(a.edge_form_indices(&idx)?);
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < d {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}

/// Sums `f(start, len)` over fixed-size chunks of `0..total` in parallel,
/// reducing in chunk order so results do not depend on the thread count.
fn chunked_sum<F>(total: u64, f: F) -> C64
where
    F: Fn(u64, u64) -> C64 + Sync,
{
    let chunks = total.div_ceil(CHUNK);
    let partial: Vec<C64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            f(start, CHUNK.min(total - start))
        })
        .collect();
    partial.into_iter().fold(ZERO, |acc, x| acc + x)
}

fn decode(mut flat: u64, d: usize, digits: &mut [usize]) {
    for slot in digits.iter_mut().rev() {
        *slot = (flat % d as u64) as usize;
        flat /= d as u64;
    }
}

fn increment(digits: &mut [usize], d: usize) {
    for slot in digits.iter_mut().rev() {
        *slot += 1;
        if *slot < d {
            return;
        }
        *slot = 0;
    }
}

/// Literal enumeration of every assignment of basis indices to ports.
pub fn eval_naive(m: &Hwm, g: &Hypergraph, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    m.check_graph(g)?;
    let a = m.algebra.as_dense().ok_or(EvalError::BasisMismatch)?;
    let d = a.dim();
    let ports = g.port_count();
    let total = saturating_pow(d as u64, ports);
    budget("naive enumeration", total, cfg.term_budget)?;

    let mut cache: HashMap<&str, Vec<C64>> = HashMap::new();
    for v in g.vertices() {
        cache
            .entry(v.label.as_str())
            .or_insert_with(|| dense_values(&m.tensors[&v.label], d));
    }
    let vertex_tables: Vec<(usize, usize, &[C64])> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (g.port_offset(i), g.arity_at(i), cache[v.label.as_str()].as_slice()))
        .collect();
    let mut edge_tables: HashMap<usize, Vec<C64>> = HashMap::new();
    for e in g.indexed_edges() {
        if let Entry::Vacant(slot) = edge_tables.entry(e.len()) {
            slot.insert(dense_edge_weights(a, e.len())?);
        }
    }
    let edges: Vec<(&[usize], &[C64])> = g
        .indexed_edges()
        .iter()
        .map(|e| (e.as_slice(), edge_tables[&e.len()].as_slice()))
        .collect();

    let value = chunked_sum(total, |start, len| {
        let mut digits = vec![0usize; ports];
        decode(start, d, &mut digits);
        let mut acc = ZERO;
        for _ in 0..len {
            let mut t = ONE;
            for &(off, arity, table) in &vertex_tables {
                let flat = digits[off..off + arity].iter().fold(0, |f, &i| f * d + i);
                t *= table[flat];
                if t == ZERO {
                    break;
                }
            }
            if t != ZERO {
                for &(e, table) in &edges {
                    let flat = e.iter().fold(0, |f, &p| f * d + digits[p]);
                    t *= table[flat];
                    if t == ZERO {
                        break;
                    }
                }
                acc += t;
            }
            increment(&mut digits, d);
        }
        acc
    });
    Ok(EvalResult {
        value,
        engine: Engine::Naive,
        terms: total,
    })
}

/// Cached `alpha(⨀ e)` evaluation for one algebra.
struct EdgeEvaluator<'a> {
    alg: &'a ProductAlgebra,
    tables: HashMap<usize, Vec<C64>>,
}

const EDGE_TABLE_LIMIT: u64 = 1 << 20;

impl<'a> EdgeEvaluator<'a> {
    fn new(alg: &'a ProductAlgebra, g: &Hypergraph) -> Result<Self, EvalError> {
        let mut tables = HashMap::new();
        if let Some(a) = alg.as_dense() {
            if matches!(a.product(), DenseProduct::Table(_)) {
                for e in g.indexed_edges() {
                    let k = e.len();
                    if !tables.contains_key(&k)
                        && saturating_pow(a.dim() as u64, k) <= EDGE_TABLE_LIMIT
                    {
                        tables.insert(k, dense_edge_weights(a, k)?);
                    }
                }
            }
        }
        Ok(Self { alg, tables })
    }

    fn value(&self, labels: &[&BasisLabel]) -> Result<C64, EvalError> {
        match self.alg {
            ProductAlgebra::Dense(a) => {
                let idx: Vec<usize> = labels
                    .iter()
                    .map(|l| l.dense_index().ok_or(EvalError::BasisMismatch))
                    .collect::<Result<_, _>>()?;
                if let Some(t) = self.tables.get(&idx.len()) {
                    let d = a.dim();
                    return Ok(t[idx.iter().fold(0, |f, &i| f * d + i)]);
                }
                Ok(a.edge_form_indices(&idx)?)
            }
            ProductAlgebra::Subset(s) => Ok(match s.fold_iter(labels.iter().copied())? {
                Some(l) => s.alpha(&l)?,
                None => ZERO,
            }),
        }
    }

    /// A partial product that can no longer contribute.
    fn dead(&self, labels: &[&BasisLabel]) -> Result<bool, EvalError> {
        match self.alg {
            ProductAlgebra::Dense(a) => {
                let idx: Vec<usize> = labels
                    .iter()
                    .map(|l| l.dense_index().ok_or(EvalError::BasisMismatch))
                    .collect::<Result<_, _>>()?;
                Ok(a.fold_indices(&idx)?.is_empty())
            }
            ProductAlgebra::Subset(s) => Ok(match s.fold_iter(labels.iter().copied())? {
                Some(BasisLabel::Subset { ports, .. }) => ports.is_clear(),
                _ => true,
            }),
        }
    }
}

/// Vertex order that completes hyperedges early: breadth first over edges.
fn search_order(g: &Hypergraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adjacency = vec![Vec::new(); n];
    for e in g.indexed_edges() {
        let vs: Vec<usize> = e.iter().map(|&p| g.port_at(p).0).collect();
        for &a in &vs {
            for &b in &vs {
                if a != b {
                    adjacency[a].push(b);
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    order: Vec<usize>,
    offsets: Vec<(usize, usize)>,
    entries: Vec<Vec<(&'a [BasisLabel], C64)>>,
    complete_at: Vec<Vec<&'a [usize]>>,
    partial_at: Vec<Vec<&'a [usize]>>,
    edges: EdgeEvaluator<'a>,
    ports: usize,
    budget: u64,
}

impl<'a> Search<'a> {
    fn run(
        &self,
        depth: usize,
        labels: &mut Vec<Option<&'a BasisLabel>>,
        value: C64,
        visited: &mut u64,
    ) -> Result<C64, EvalError> {
        if depth == self.order.len() {
            return Ok(value);
        }
        let mut sum = ZERO;
        for &(idx, c) in &self.entries[depth] {
            sum += self.step(depth, idx, c, labels, value, visited)?;
        }
        Ok(sum)
    }

    fn step(
        &self,
        depth: usize,
        idx: &'a [BasisLabel],
        c: C64,
        labels: &mut Vec<Option<&'a BasisLabel>>,
        value: C64,
        visited: &mut u64,
    ) -> Result<C64, EvalError> {
        *visited += 1;
        if *visited > self.budget {
            return Err(EvalError::BudgetExceeded {
                what: "support search",
                needed: *visited,
                budget: self.budget,
            });
        }
        let (off, arity) = self.offsets[depth];
        for (slot, l) in idx.iter().enumerate().take(arity) {
            labels[off + slot] = Some(l);
        }
        let mut w = value * c;
        let mut buf: Vec<&BasisLabel> = Vec::new();
        for e in &self.complete_at[depth] {
            buf.clear();
            buf.extend(e.iter().map(|&p| labels[p].expect("assigned")));
            w *= self.edges.value(&buf)?;
            if w == ZERO {
                break;
            }
        }
        if w != ZERO {
            for e in &self.partial_at[depth] {
                buf.clear();
                buf.extend(e.iter().filter_map(|&p| labels[p]));
                if self.edges.dead(&buf)? {
                    w = ZERO;
                    break;
                }
            }
        }
        let out = if w != ZERO {
            self.run(depth + 1, labels, w, visited)
        } else {
            Ok(ZERO)
        };
        for slot in 0..arity {
            labels[off + slot] = None;
        }
        out
    }
}

/// Enumerates one stored entry per vertex, pruning as soon as a hyperedge
/// product vanishes. The budget bounds the number of search nodes.
pub fn eval_support_restricted(
    m: &Hwm,
    g: &Hypergraph,
    cfg: &EvalConfig,
) -> Result<EvalResult, EvalError> {
    m.check_graph(g)?;
    let order = search_order(g);
    let mut rank = vec![0; g.vertex_count()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let n = order.len();
    let mut complete_at = vec![Vec::new(); n];
    let mut partial_at = vec![Vec::new(); n];
    for e in g.indexed_edges() {
        let ranks: Vec<usize> = e.iter().map(|&p| rank[g.port_at(p).0]).collect();
        let last = *ranks.iter().max().expect("edges are nonempty");
        complete_at[last].push(e.as_slice());
        let mut touched: Vec<usize> = ranks.into_iter().filter(|&r| r != last).collect();
        touched.sort_unstable();
        touched.dedup();
        for r in touched {
            partial_at[r].push(e.as_slice());
        }
    }
    let entries: Vec<Vec<(&[BasisLabel], C64)>> = order
        .iter()
        .map(|&v| m.tensors[&g.vertices()[v].label].entries().collect())
        .collect();
    let search = Search {
        offsets: order.iter().map(|&v| (g.port_offset(v), g.arity_at(v))).collect(),
        order,
        entries,
        complete_at,
        partial_at,
        edges: EdgeEvaluator::new(&m.algebra, g)?,
        ports: g.port_count(),
        budget: cfg.term_budget,
    };
    let branches: Vec<Result<(C64, u64), EvalError>> = search.entries[0]
        .par_iter()
        .map(|&(idx, c)| {
            let mut labels = vec![None; search.ports];
            let mut visited = 0;
            let v = search.step(0, idx, c, &mut labels, ONE, &mut visited)?;
            Ok((v, visited))
        })
        .collect();
    let mut value = ZERO;
    let mut terms = 0u64;
    for b in branches {
        let (v, t) = b?;
        value += v;
        terms = terms.saturating_add(t);
    }
    budget("support search", terms, cfg.term_budget)?;
    Ok(EvalResult {
        value,
        engine: Engine::Support,
        terms,
    })
}

#[derive(Debug, Clone)]
struct Factor {
    id: usize,
    wires: Vec<usize>,
    entries: HashMap<Vec<usize>, C64>,
}

impl Factor {
    fn from_tensor(id: usize, wires: Vec<usize>, t: &SparseTensor) -> Result<Self, EvalError> {
        let mut entries = HashMap::with_capacity(t.nnz());
        for (idx, v) in t.entries() {
            let key = idx
                .iter()
                .map(|l| l.dense_index().ok_or(EvalError::BasisMismatch))
                .collect::<Result<Vec<_>, _>>()?;
            entries.insert(key, v);
        }
        Ok(Self { id, wires, entries })
    }

    fn shares(&self, other: &Factor) -> usize {
        self.wires.iter().filter(|w| other.wires.contains(w)).count()
    }

    fn scalar(&self) -> C64 {
        debug_assert!(self.wires.is_empty());
        self.entries.get(&Vec::new()).copied().unwrap_or(ZERO)
    }
}

fn contract(a: &Factor, b: &Factor, id: usize, limit: u64) -> Result<Factor, EvalError> {
    let shared: Vec<usize> = a.wires.iter().copied().filter(|w| b.wires.contains(w)).collect();
    let a_shared: Vec<usize> = shared
        .iter()
        .map(|w| a.wires.iter().position(|x| x == w).unwrap())
        .collect();
    let b_shared: Vec<usize> = shared
        .iter()
        .map(|w| b.wires.iter().position(|x| x == w).unwrap())
        .collect();
    let a_rest: Vec<usize> = (0..a.wires.len()).filter(|i| !a_shared.contains(i)).collect();
    let b_rest: Vec<usize> = (0..b.wires.len()).filter(|i| !b_shared.contains(i)).collect();

    let mut index: HashMap<Vec<usize>, Vec<(Vec<usize>, C64)>> = HashMap::new();
    for (idx, &v) in &b.entries {
        let key = b_shared.iter().map(|&i| idx[i]).collect();
        let rest = b_rest.iter().map(|&i| idx[i]).collect();
        index.entry(key).or_default().push((rest, v));
    }
    let mut entries: HashMap<Vec<usize>, C64> = HashMap::new();
    // iterate in a fixed order so floating-point sums are reproducible
    let mut a_sorted: Vec<(&Vec<usize>, &C64)> = a.entries.iter().collect();
    a_sorted.sort_unstable_by(|x, y| x.0.cmp(y.0));
    for (idx, &va) in a_sorted {
        let key: Vec<usize> = a_shared.iter().map(|&i| idx[i]).collect();
        let Some(matches) = index.get(&key) else {
            continue;
        };
        for (rest, vb) in matches {
            let mut out: Vec<usize> = a_rest.iter().map(|&i| idx[i]).collect();
            out.extend_from_slice(rest);
            *entries.entry(out).or_insert(ZERO) += va * vb;
        }
        if entries.len() as u64 > limit {
            return Err(EvalError::BudgetExceeded {
                what: "intermediate factor",
                needed: entries.len() as u64,
                budget: limit,
            });
        }
    }
    entries.retain(|_, v| *v != ZERO);
    let mut wires: Vec<usize> = a_rest.iter().map(|&i| a.wires[i]).collect();
    wires.extend(b_rest.iter().map(|&i| b.wires[i]));
    Ok(Factor { id, wires, entries })
}

fn network(m: &Hwm, g: &Hypergraph, cfg: &EvalConfig) -> Result<Vec<Factor>, EvalError> {
    let mut factors = Vec::with_capacity(g.vertex_count() + g.edge_count());
    for (i, v) in g.vertices().iter().enumerate() {
        let wires = (0..g.arity_at(i)).map(|s| g.port_offset(i) + s).collect();
        factors.push(Factor::from_tensor(factors.len(), wires, &m.tensors[&v.label])?);
    }
    let mut weights: HashMap<usize, SparseTensor> = HashMap::new();
    for e in g.indexed_edges() {
        if let Entry::Vacant(slot) = weights.entry(e.len()) {
            slot.insert(edge_weight_tensor(&m.algebra, e.len(), cfg.term_budget)?);
        }
        factors.push(Factor::from_tensor(factors.len(), e.clone(), &weights[&e.len()])?);
    }
    Ok(factors)
}

/// Product of entry counts, resulting order, then the two factor ids.
type PairCost = (u128, usize, usize, usize);

/// Tensor-network contraction with one factor per vertex and per hyperedge.
pub fn eval_factored(m: &Hwm, g: &Hypergraph, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    m.check_graph(g)?;
    let mut factors = network(m, g, cfg)?;
    let mut next_id = factors.len();
    let mut terms = 0u64;
    let mut value = ONE;
    if factors.iter().any(|f| f.entries.is_empty()) {
        return Ok(EvalResult {
            value: ZERO,
            engine: Engine::Factored,
            terms,
        });
    }
    match cfg.order {
        ContractionOrder::Greedy => loop {
            let mut best: Option<(PairCost, usize, usize)> = None;
            for i in 0..factors.len() {
                for j in i + 1..factors.len() {
                    let shared = factors[i].shares(&factors[j]);
                    if shared == 0 {
                        continue;
                    }
                    let cost = factors[i].entries.len() as u128 * factors[j].entries.len() as u128;
                    let order = factors[i].wires.len() + factors[j].wires.len() - 2 * shared;
                    let (a, b) = (factors[i].id, factors[j].id);
                    let key = (cost, order, a.min(b), a.max(b));
                    if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                        best = Some((key, i, j));
                    }
                }
            }
            let Some((_, i, j)) = best else { break };
            let b = factors.swap_remove(j);
            let a = factors.swap_remove(i);
            let c = contract(&a, &b, next_id, cfg.intermediate_budget)?;
            next_id += 1;
            terms = terms.saturating_add(c.entries.len() as u64);
            factors.push(c);
        },
        ContractionOrder::RightToLeft => {
            let mut done = Vec::new();
            while let Some(mut acc) = factors.pop() {
                while let Some(k) = (0..factors.len()).rev().find(|&k| factors[k].shares(&acc) > 0) {
                    let f = factors.remove(k);
                    acc = contract(&f, &acc, next_id, cfg.intermediate_budget)?;
                    next_id += 1;
                    terms = terms.saturating_add(acc.entries.len() as u64);
                }
                done.push(acc);
            }
            factors = done;
        }
    }
    for f in &factors {
        value *= f.scalar();
    }
    Ok(EvalResult {
        value,
        engine: Engine::Factored,
        terms,
    })
}

/// One shared index per hyperedge; valid for the identity product with
/// `alpha = 1`, where every other assignment contributes zero.
pub fn eval_gamma_id(m: &Hwm, g: &Hypergraph, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    m.check_graph(g)?;
    if !m.algebra.is_identity_ones() {
        return Err(EvalError::WrongAlgebra);
    }
    let d = m.dim().expect("identity algebras are dense");
    let edges = g.edge_count();
    let total = saturating_pow(d as u64, edges);
    budget("edge-index enumeration", total, cfg.term_budget)?;
    let mut edge_of = vec![0usize; g.port_count()];
    for (e, ports) in g.indexed_edges().iter().enumerate() {
        for &p in ports {
            edge_of[p] = e;
        }
    }
    let mut cache: HashMap<&str, Vec<C64>> = HashMap::new();
    for v in g.vertices() {
        cache
            .entry(v.label.as_str())
            .or_insert_with(|| dense_values(&m.tensors[&v.label], d));
    }
    let vertices: Vec<(Vec<usize>, &[C64])> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let wires = (0..g.arity_at(i)).map(|s| edge_of[g.port_offset(i) + s]).collect();
            (wires, cache[v.label.as_str()].as_slice())
        })
        .collect();
    let value = chunked_sum(total, |start, len| {
        let mut digits = vec![0usize; edges];
        decode(start, d, &mut digits);
        let mut acc = ZERO;
        for _ in 0..len {
            let mut t = ONE;
            for (wires, table) in &vertices {
                t *= table[wires.iter().fold(0, |f, &e| f * d + digits[e])];
                if t == ZERO {
                    break;
                }
            }
            acc += t;
            increment(&mut digits, d);
        }
        acc
    });
    Ok(EvalResult {
        value,
        engine: Engine::GammaId,
        terms: total,
    })
}

/// Dispatch. `Auto` takes the edge-index enumeration when it applies and
/// fits the budget, else contraction for dense algebras, else the support
/// search.
pub fn eval(
    m: &Hwm,
    g: &Hypergraph,
    engine: Engine,
    cfg: &EvalConfig,
) -> Result<EvalResult, EvalError> {
    match engine {
        Engine::Naive => eval_naive(m, g, cfg),
        Engine::Support => eval_support_restricted(m, g, cfg),
        Engine::Factored => eval_factored(m, g, cfg),
        Engine::GammaId => eval_gamma_id(m, g, cfg),
        Engine::Auto => {
            let fits = m.dim().is_some_and(|d| {
                saturating_pow(d as u64, g.edge_count()) <= cfg.term_budget
            });
            if m.algebra.is_identity_ones() && fits {
                eval_gamma_id(m, g, cfg)
            } else if m.algebra.as_dense().is_some() {
                eval_factored(m, g, cfg)
            } else {
                eval_support_restricted(m, g, cfg)
            }
        }
    }
}

/// Convenience wrapper: automatic engine, default budgets.
pub fn evaluate(m: &Hwm, g: &Hypergraph) -> Result<C64, EvalError> {
    eval(m, g, Engine::Auto, &EvalConfig::default()).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::three_vertex_graph;
    use crate::numeric::{approx_eq, real};
    use crate::random;
    use crate::tensor::DenseAlgebra;

    fn all_engines(m: &Hwm, g: &Hypergraph) -> Vec<(Engine, C64)> {
        let cfg = EvalConfig::default();
        let mut out = Vec::new();
        for e in [Engine::Naive, Engine::Support, Engine::Factored, Engine::GammaId] {
            if let Ok(r) = eval(m, g, e, &cfg) {
                out.push((e, r.value));
            }
        }
        out
    }

    #[test]
    fn dimension_one_all_ones() {
        let g = three_vertex_graph();
        let tensors = g
            .alphabet()
            .symbols()
            .map(|(s, k)| (s.to_string(), SparseTensor::from_dense(k, 1, &[ONE]).unwrap()))
            .collect();
        let m = Hwm::new(g.alphabet().clone(), ProductAlgebra::identity_ones(1), tensors).unwrap();
        let got = all_engines(&m, &g);
        assert_eq!(got.len(), 4);
        for (e, v) in got {
            assert_eq!(v, ONE, "{e}");
        }
    }

    /// The expanded eight-index sum for the example graph.
    fn example_oracle(m: &Hwm) -> C64 {
        let a = m.algebra().as_dense().unwrap();
        let d = a.dim();
        let ta = m.tensor("a").unwrap();
        let tb = m.tensor("b").unwrap();
        let f = |idx: &[usize]| a.edge_form_indices(idx).unwrap();
        let mut s = ZERO;
        for flat in 0..d.pow(8) {
            let mut i = [0usize; 8];
            let mut r = flat;
            for slot in i.iter_mut().rev() {
                *slot = r % d;
                r /= d;
            }
            s += ta.get_dense(&i[0..3])
                * tb.get_dense(&i[3..5])
                * ta.get_dense(&i[5..8])
                * f(&[i[0], i[7]])
                * f(&[i[1], i[3], i[6]])
                * f(&[i[2], i[4]])
                * f(&[i[5]]);
        }
        s
    }

    #[test]
    fn example_graph_matches_expanded_sum() {
        let g = three_vertex_graph();
        let mut rng = random::rng(11);
        for trial in 0..6 {
            let d = 2 + trial % 2;
            let alg = random::dense_algebra(&mut rng, d, trial % 2 == 1);
            let m = random::hwm(&mut rng, g.alphabet(), alg, 0.8, true);
            let want = example_oracle(&m);
            for (e, v) in all_engines(&m, &g) {
                assert!(approx_eq(v, want, 1e-10), "{e}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn edge_index_contraction_of_example() {
        let g = three_vertex_graph();
        let mut rng = random::rng(12);
        let m = random::identity_hwm(&mut rng, g.alphabet(), 3, true);
        let ta = m.tensor("a").unwrap();
        let tb = m.tensor("b").unwrap();
        let mut want = ZERO;
        for i1 in 0..3 {
            for i2 in 0..3 {
                for i3 in 0..3 {
                    for i6 in 0..3 {
                        want += ta.get_dense(&[i1, i2, i3])
                            * tb.get_dense(&[i2, i3])
                            * ta.get_dense(&[i6, i2, i1]);
                    }
                }
            }
        }
        let r = eval(&m, &g, Engine::Auto, &EvalConfig::default()).unwrap();
        assert_eq!(r.engine, Engine::GammaId);
        assert!(approx_eq(r.value, want, 1e-12));
        let n = eval_naive(&m, &g, &EvalConfig::default()).unwrap();
        assert!(approx_eq(n.value, want, 1e-10));
    }

    #[test]
    fn zero_tensor_gives_zero() {
        let g = three_vertex_graph();
        let mut rng = random::rng(13);
        let mut m = random::identity_hwm(&mut rng, g.alphabet(), 2, false);
        m.tensors.insert("b".into(), SparseTensor::zeros(2));
        for (e, v) in all_engines(&m, &g) {
            assert_eq!(v, ZERO, "{e}");
        }
    }

    #[test]
    fn dispatch() {
        let g = three_vertex_graph();
        let mut rng = random::rng(14);
        let cfg = EvalConfig::default();
        let m = random::identity_hwm(&mut rng, g.alphabet(), 2, false);
        assert_eq!(eval(&m, &g, Engine::Auto, &cfg).unwrap().engine, Engine::GammaId);
        let alg = DenseAlgebra::new(DenseProduct::Identity, vec![real(2.0); 2]).unwrap();
        let m2 = random::hwm(&mut rng, g.alphabet(), alg, 1.0, false);
        assert_eq!(eval(&m2, &g, Engine::Auto, &cfg).unwrap().engine, Engine::Factored);
        assert_eq!(eval_gamma_id(&m2, &g, &cfg), Err(EvalError::WrongAlgebra));
    }

    #[test]
    fn budgets_are_enforced() {
        let g = three_vertex_graph();
        let mut rng = random::rng(15);
        let m = random::identity_hwm(&mut rng, g.alphabet(), 3, false);
        let cfg = EvalConfig {
            term_budget: 100,
            ..EvalConfig::default()
        };
        assert!(matches!(
            eval_naive(&m, &g, &cfg),
            Err(EvalError::BudgetExceeded { needed: 6561, .. })
        ));
        assert!(matches!(
            eval_support_restricted(&m, &g, &cfg),
            Err(EvalError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn contraction_orders_agree() {
        let mut rng = random::rng(16);
        for _ in 0..20 {
            let sigma = random::alphabet(&mut rng, 2, 3);
            let g = random::hypergraph(&mut rng, &sigma, 4, 3);
            let alg = random::dense_algebra(&mut rng, 2, true);
            let m = random::hwm(&mut rng, &sigma, alg, 0.7, true);
            let greedy = eval_factored(&m, &g, &EvalConfig::default()).unwrap().value;
            let rtl = eval_factored(
                &m,
                &g,
                &EvalConfig {
                    order: ContractionOrder::RightToLeft,
                    ..EvalConfig::default()
                },
            )
            .unwrap()
            .value;
            assert!(approx_eq(greedy, rtl, 1e-7));
        }
    }

    #[test]
    fn engine_names_round_trip() {
        for e in Engine::ALL {
            assert_eq!(e.name().parse::<Engine>().unwrap(), e);
        }
        assert!("fast".parse::<Engine>().is_err());
    }
}
