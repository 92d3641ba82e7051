//! Tilings of a template hypergraph, the model that detects them, and
//! finite-support series on tiling-free families.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::closures::{hwm_sum, ClosureError};
use crate::engine::{eval_support_restricted, EvalConfig, EvalError, Hwm};
use crate::hypergraph::{small_canonical_key, AlphabetError, Hypergraph, PortRef, RankedAlphabet, Vertex};
use crate::numeric::{principal_root, C64, ONE};
use crate::tensor::{BasisLabel, ProductAlgebra, SparseTensor, SubsetAlgebra};

pub const DEFAULT_MAX_VERTICES: usize = 12;
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TilingError {
    #[error("search budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    #[error("invalid tiling map: {0}")]
    InvalidMap(String),
    #[error("the template evaluates to zero on itself")]
    ZeroSelfValue,
    #[error("templates {0} and {1} are isomorphic")]
    DuplicateTemplate(usize, usize),
    #[error("no templates given")]
    NoTemplates,
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Vertex map `f` from a graph to a template, by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TilingMap {
    pub f: BTreeMap<String, String>,
}

impl TilingMap {
    /// `|f^{-1}(v̂)|` for every template vertex, zeros included.
    pub fn fiber_sizes(&self, hat: &Hypergraph) -> BTreeMap<String, usize> {
        let mut out: BTreeMap<String, usize> =
            hat.vertices().iter().map(|v| (v.id.clone(), 0)).collect();
        for target in self.f.values() {
            if let Some(n) = out.get_mut(target) {
                *n += 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TilingReport {
    pub maps: Vec<TilingMap>,
    /// Fibers of the first map; empty when there is none.
    pub fiber_sizes: BTreeMap<String, usize>,
    /// Whether enumeration stopped at the limit.
    pub truncated: bool,
}

impl TilingReport {
    pub fn is_tiling(&self) -> bool {
        !self.maps.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TilingSearch {
    pub max_vertices: usize,
    pub limit: usize,
    pub node_budget: u64,
}

impl Default for TilingSearch {
    fn default() -> Self {
        Self {
            max_vertices: DEFAULT_MAX_VERTICES,
            limit: usize::MAX,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Hyperedge index of every global port.
fn edge_of_port(g: &Hypergraph) -> Vec<usize> {
    let mut out = vec![0; g.port_count()];
    for (e, edge) in g.indexed_edges().iter().enumerate() {
        for &p in edge {
            out[p] = e;
        }
    }
    out
}

fn bfs_order(g: &Hypergraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj = vec![BTreeSet::new(); n];
    for edge in g.indexed_edges() {
        let vs: Vec<usize> = edge.iter().map(|&p| g.port_at(p).0).collect();
        for &a in &vs {
            for &b in &vs {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
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
    g: &'a Hypergraph,
    hat: &'a Hypergraph,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    g_edge: Vec<usize>,
    hat_edge: Vec<usize>,
    image: Vec<Option<usize>>,
    assign: Vec<usize>,
    used: Vec<bool>,
    injective: bool,
    nodes: u64,
    cfg: TilingSearch,
    out: Vec<TilingMap>,
}

impl Search<'_> {
    /// Sets the port images of `v -> vh`, undoing them on conflict.
    fn place(&mut self, v: usize, vh: usize) -> bool {
        let arity = self.g.arity_at(v);
        let (go, ho) = (self.g.port_offset(v), self.hat.port_offset(vh));
        for s in 0..arity {
            let (p, q) = (go + s, ho + s);
            let h = self.g_edge[p];
            let e = self.hat_edge[q];
            let ok = self.g.indexed_edges()[h].len() == self.hat.indexed_edges()[e].len()
                && self.g.indexed_edges()[h].iter().all(|&p2| match self.image[p2] {
                    Some(q2) => q2 != q && self.hat_edge[q2] == e,
                    None => true,
                });
            if !ok {
                for s2 in 0..s {
                    self.image[go + s2] = None;
                }
                return false;
            }
            self.image[p] = Some(q);
        }
        true
    }

    fn unplace(&mut self, v: usize) {
        let go = self.g.port_offset(v);
        for s in 0..self.g.arity_at(v) {
            self.image[go + s] = None;
        }
    }

    fn run(&mut self, depth: usize) -> Result<bool, TilingError> {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget {
            return Err(TilingError::BudgetExceeded {
                what: "tiling search nodes",
                needed: self.nodes,
                budget: self.cfg.node_budget,
            });
        }
        if depth == self.order.len() {
            let f = self
                .order
                .iter()
                .map(|&v| {
                    (
                        self.g.vertices()[v].id.clone(),
                        self.hat.vertices()[self.assign[v]].id.clone(),
                    )
                })
                .collect();
            self.out.push(TilingMap { f });
            return Ok(self.out.len() >= self.cfg.limit);
        }
        let v = self.order[depth];
        for i in 0..self.candidates[v].len() {
            let vh = self.candidates[v][i];
            if self.injective && self.used[vh] {
                continue;
            }
            if !self.place(v, vh) {
                continue;
            }
            self.assign[v] = vh;
            self.used[vh] = true;
            let stop = self.run(depth + 1);
            self.used[vh] = false;
            self.unplace(v);
            if stop? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn search(
    g: &Hypergraph,
    hat: &Hypergraph,
    cfg: TilingSearch,
    injective: bool,
) -> Result<(Vec<TilingMap>, bool), TilingError> {
    if g.vertex_count() > cfg.max_vertices {
        return Err(TilingError::BudgetExceeded {
            what: "graph vertices",
            needed: g.vertex_count() as u64,
            budget: cfg.max_vertices as u64,
        });
    }
    let candidates = (0..g.vertex_count())
        .map(|v| {
            let label = &g.vertices()[v].label;
            (0..hat.vertex_count())
                .filter(|&vh| {
                    hat.vertices()[vh].label == *label && hat.arity_at(vh) == g.arity_at(v)
                })
                .collect()
        })
        .collect();
    let mut s = Search {
        g,
        hat,
        order: bfs_order(g),
        candidates,
        g_edge: edge_of_port(g),
        hat_edge: edge_of_port(hat),
        image: vec![None; g.port_count()],
        assign: vec![0; g.vertex_count()],
        used: vec![false; hat.vertex_count()],
        injective,
        nodes: 0,
        cfg,
        out: Vec::new(),
    };
    let truncated = if cfg.limit == 0 { true } else { s.run(0)? };
    let mut maps = s.out;
    maps.sort();
    Ok((maps, truncated))
}

/// All tiling maps `G -> Ĝ` (up to `cfg.limit`), sorted.
///
/// A map must preserve labels, and `g(v, i) = (f(v), i)` must send every
/// hyperedge of `G` bijectively onto a hyperedge of `Ĝ`. Vertices whose label
/// is missing from `Ĝ` admit no image.
pub fn find_tilings_with(
    g: &Hypergraph,
    hat: &Hypergraph,
    cfg: TilingSearch,
) -> Result<TilingReport, TilingError> {
    let (maps, truncated) = search(g, hat, cfg, false)?;
    let fiber_sizes = maps.first().map(|m| m.fiber_sizes(hat)).unwrap_or_default();
    Ok(TilingReport {
        maps,
        fiber_sizes,
        truncated: truncated && cfg.limit != usize::MAX,
    })
}

pub fn find_tilings(g: &Hypergraph, hat: &Hypergraph, limit: usize) -> Result<TilingReport, TilingError> {
    find_tilings_with(g, hat, TilingSearch { limit, ..TilingSearch::default() })
}

/// A label-preserving vertex bijection carrying the hyperedges of `a` onto
/// those of `b`, if one exists.
pub fn find_isomorphism(
    a: &Hypergraph,
    b: &Hypergraph,
) -> Result<Option<BTreeMap<String, String>>, TilingError> {
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || a.port_count() != b.port_count()
    {
        return Ok(None);
    }
    let cfg = TilingSearch {
        limit: 1,
        ..TilingSearch::default()
    };
    let (maps, _) = search(a, b, cfg, true)?;
    Ok(maps.into_iter().next().map(|m| m.f))
}

pub fn are_isomorphic(a: &Hypergraph, b: &Hypergraph) -> Result<bool, TilingError> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// Checks that `m` is a tiling map `G -> Ĝ`.
pub fn check_tiling_map(g: &Hypergraph, hat: &Hypergraph, m: &TilingMap) -> Result<(), TilingError> {
    let invalid = |msg: String| Err(TilingError::InvalidMap(msg));
    if m.f.len() != g.vertex_count() {
        return invalid(format!("map covers {} of {} vertices", m.f.len(), g.vertex_count()));
    }
    for v in g.vertices() {
        let Some(target) = m.f.get(&v.id) else {
            return invalid(format!("vertex {:?} is unmapped", v.id));
        };
        let Some(t) = hat.vertex(target) else {
            return invalid(format!("{:?} is not a template vertex", target));
        };
        if t.label != v.label {
            return invalid(format!("{:?} -> {:?} changes the label", v.id, target));
        }
    }
    let hat_edges: HashSet<BTreeSet<&PortRef>> =
        hat.hyperedges().iter().map(|h| h.iter().collect()).collect();
    for h in g.hyperedges() {
        let image: Vec<PortRef> = h
            .iter()
            .map(|p| PortRef::new(m.f[&p.vertex].clone(), p.slot))
            .collect();
        let set: BTreeSet<&PortRef> = image.iter().collect();
        if set.len() != h.len() || !hat_edges.contains(&set) {
            return invalid(format!("hyperedge {h:?} is not sent onto a template hyperedge"));
        }
    }
    Ok(())
}

/// `G` modulo the fibers of `f` and the images of `g`; each class is named
/// by its smallest vertex id.
pub fn quotient_hypergraph(
    g: &Hypergraph,
    hat: &Hypergraph,
    m: &TilingMap,
) -> Result<Hypergraph, TilingError> {
    check_tiling_map(g, hat, m)?;
    let mut rep: BTreeMap<&str, &str> = BTreeMap::new();
    for (v, t) in &m.f {
        let r = rep.entry(t.as_str()).or_insert(v.as_str());
        if v.as_str() < *r {
            *r = v.as_str();
        }
    }
    let vertices = rep
        .iter()
        .map(|(t, r)| Vertex::new(*r, hat.vertex(t).expect("checked").label.clone()))
        .collect();
    let edges: BTreeSet<Vec<PortRef>> = g
        .hyperedges()
        .iter()
        .map(|h| {
            let mut e: Vec<PortRef> = h
                .iter()
                .map(|p| PortRef::new(rep[m.f[&p.vertex].as_str()], p.slot))
                .collect();
            e.sort();
            e
        })
        .collect();
    Hypergraph::new(g.alphabet().clone(), vertices, edges.into_iter().collect())
        .map_err(|e| TilingError::InvalidMap(e.to_string()))
}

/// `T^x = Σ_{v̂ : l(v̂) = x} e_{(v̂,1)} ⊗ … ⊗ e_{(v̂,♯x)}` over the subset
/// algebra of `Ĝ`, with `alpha = edge_weight` on the hyperedges of `Ĝ`.
///
/// With weight 1 the value on `G` is the number of tiling maps `G -> Ĝ`.
pub fn tiling_hwm(hat: &Hypergraph, edge_weight: C64) -> Hwm {
    let algebra = SubsetAlgebra::new(hat.clone(), edge_weight);
    let block = &algebra.blocks()[0];
    let mut tensors = BTreeMap::new();
    for (symbol, arity) in hat.alphabet().symbols() {
        let mut entries = Vec::new();
        for v in hat.vertices().iter().filter(|v| v.label == symbol) {
            let idx = (1..=arity)
                .map(|s| algebra.label(0, &[PortRef::new(v.id.clone(), s)]).expect("template port"))
                .collect();
            entries.push((idx, ONE));
        }
        if entries.is_empty() {
            let empty = BasisLabel::Subset {
                block: 0,
                ports: block.empty_set(),
            };
            entries.push((vec![empty; arity], ONE));
        }
        tensors.insert(
            symbol.to_string(),
            SparseTensor::from_entries(arity, entries).expect("one family"),
        );
    }
    Hwm::new(hat.alphabet().clone(), ProductAlgebra::Subset(algebra), tensors)
        .expect("consistent by construction")
}

fn self_value(m: &Hwm, hat: &Hypergraph) -> Result<C64, TilingError> {
    let cfg = EvalConfig::default();
    Ok(eval_support_restricted(m, hat, &cfg)?.value)
}

/// Tiling model rescaled so that it takes the value `y` on `Ĝ`: the edge
/// weight becomes `(y / z)^{1/|Ê|}` where `z` is the unscaled self value.
pub fn scaled_tiling_hwm(hat: &Hypergraph, y: C64) -> Result<Hwm, TilingError> {
    let z = self_value(&tiling_hwm(hat, ONE), hat)?;
    if z.norm() == 0.0 {
        return Err(TilingError::ZeroSelfValue);
    }
    Ok(tiling_hwm(hat, principal_root(y / z, hat.edge_count())))
}

/// Sum of scaled tiling models. On a tiling-free family containing every
/// template, the value is `y_k` on `Ĝ_k` and zero on the other members.
///
/// Templates are lifted to the union of their alphabets first.
pub fn finite_support_hwm(pairs: &[(Hypergraph, C64)]) -> Result<Hwm, TilingError> {
    let Some(((first, _), _)) = pairs.split_first() else {
        return Err(TilingError::NoTemplates);
    };
    let mut alphabet: RankedAlphabet = first.alphabet().clone();
    for (g, _) in pairs {
        alphabet = alphabet.union(g.alphabet())?;
    }
    let templates: Vec<Hypergraph> = pairs
        .iter()
        .map(|(g, _)| g.with_alphabet(alphabet.clone()).expect("compatible alphabets"))
        .collect();
    for i in 0..templates.len() {
        for j in i + 1..templates.len() {
            if are_isomorphic(&templates[i], &templates[j])? {
                return Err(TilingError::DuplicateTemplate(i, j));
            }
        }
    }
    let mut model: Option<Hwm> = None;
    for (g, (_, y)) in templates.iter().zip(pairs) {
        let m = scaled_tiling_hwm(g, *y)?;
        model = Some(match model {
            None => m,
            Some(acc) => hwm_sum(&acc, &m)?,
        });
    }
    Ok(model.expect("at least one template"))
}

/// A member that is a non-trivial tiling of another.
#[derive(Debug, Clone, PartialEq)]
pub struct TilingWitness {
    pub tiling: usize,
    pub template: usize,
    pub map: TilingMap,
}

/// Whether no member tiles another member with strictly fewer vertices.
pub fn is_tiling_free(family: &[Hypergraph]) -> Result<Option<TilingWitness>, TilingError> {
    for (i, g) in family.iter().enumerate() {
        for (j, hat) in family.iter().enumerate() {
            if g.vertex_count() <= hat.vertex_count() {
                continue;
            }
            if let Some(map) = find_tilings(g, hat, 1)?.maps.into_iter().next() {
                return Ok(Some(TilingWitness {
                    tiling: i,
                    template: j,
                    map,
                }));
            }
        }
    }
    Ok(None)
}

/// Every hypergraph with `1..=max_vertices` vertices over `alphabet`, one
/// per isomorphism class, in a deterministic order.
pub fn enumerate_hypergraphs(alphabet: &RankedAlphabet, max_vertices: usize) -> Vec<Hypergraph> {
    let symbols: Vec<(String, usize)> = alphabet.symbols().map(|(s, k)| (s.to_string(), k)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let mut labels = vec![0usize; n];
        loop {
            let vertices: Vec<Vertex> = labels
                .iter()
                .enumerate()
                .map(|(i, &l)| Vertex::new((i + 1).to_string(), symbols[l].0.clone()))
                .collect();
            let ports: Vec<PortRef> = labels
                .iter()
                .enumerate()
                .flat_map(|(i, &l)| (1..=symbols[l].1).map(move |s| PortRef::new((i + 1).to_string(), s)))
                .collect();
            for_each_partition(ports.len(), |blocks| {
                let edges = blocks
                    .iter()
                    .map(|b| b.iter().map(|&p| ports[p].clone()).collect())
                    .collect();
                let g = Hypergraph::new(alphabet.clone(), vertices.clone(), edges).expect("valid");
                let key = small_canonical_key(&g, u64::MAX).expect("unbounded");
                if seen.insert(key) {
                    out.push(g);
                }
            });
            // Next non-decreasing label sequence.
            let Some(i) = (0..n).rev().find(|&i| labels[i] + 1 < symbols.len()) else {
                break;
            };
            let next = labels[i] + 1;
            for l in &mut labels[i..] {
                *l = next;
            }
        }
    }
    out
}

/// Calls `visit` on every set partition of `0..n`, via restricted growth
/// strings.
fn for_each_partition(n: usize, mut visit: impl FnMut(&[Vec<usize>])) {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, visit: &mut dyn FnMut(&[Vec<usize>])) {
        if i == n {
            visit(blocks);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, visit);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, visit);
        blocks.pop();
    }
    go(0, n, &mut Vec::new(), &mut visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{encode_circular, word};
    use crate::engine::evaluate;
    use crate::hypergraph::tests::three_vertex_graph;
    use crate::numeric::{approx_eq, real, ZERO};

    fn circ(w: &str) -> Hypergraph {
        encode_circular(&word(w)).unwrap()
    }

    #[test]
    fn identity_is_a_tiling() {
        let g = three_vertex_graph();
        let r = find_tilings(&g, &g, usize::MAX).unwrap();
        assert_eq!(r.maps.len(), 1);
        assert!(r.fiber_sizes.values().all(|&n| n == 1));
        assert_eq!(quotient_hypergraph(&g, &g, &r.maps[0]).unwrap(), g);
        assert_eq!(evaluate(&tiling_hwm(&g, ONE), &g).unwrap(), ONE);
    }

    #[test]
    fn circular_abab_tiles_ab() {
        let (g, hat) = (circ("abab"), circ("ab"));
        // Labels pin every vertex, so there is a single map.
        let r = find_tilings(&g, &hat, usize::MAX).unwrap();
        assert_eq!(r.maps.len(), 1);
        assert!(r.fiber_sizes.values().all(|&n| n == 2));
        for m in &r.maps {
            let q = quotient_hypergraph(&g, &hat, m).unwrap();
            assert!(are_isomorphic(&q, &hat).unwrap());
        }
        assert_eq!(evaluate(&tiling_hwm(&hat, ONE), &g).unwrap(), ONE);
        assert_eq!(find_tilings(&circ("abba"), &hat, usize::MAX).unwrap().maps.len(), 0);
        assert_eq!(evaluate(&tiling_hwm(&hat, ONE), &circ("abba")).unwrap(), ZERO);
    }

    #[test]
    fn phase_shifts() {
        let (g, hat) = (circ("aaaa"), circ("aa"));
        let r = find_tilings(&g, &hat, usize::MAX).unwrap();
        assert_eq!(r.maps.len(), 2);
        assert_eq!(evaluate(&tiling_hwm(&hat, ONE), &g).unwrap(), real(2.0));
        assert_eq!(find_tilings(&circ("aaa"), &hat, usize::MAX).unwrap().maps.len(), 0);
        let limited = find_tilings(&g, &hat, 1).unwrap();
        assert_eq!(limited.maps.len(), 1);
        assert!(limited.truncated);
    }

    #[test]
    fn disjoint_labels() {
        let a = Hypergraph::new(
            RankedAlphabet::new([("a", 1)]).unwrap(),
            vec![Vertex::new("1", "a")],
            vec![vec![PortRef::new("1", 1)]],
        )
        .unwrap();
        let b = Hypergraph::new(
            RankedAlphabet::new([("b", 1)]).unwrap(),
            vec![Vertex::new("1", "b")],
            vec![vec![PortRef::new("1", 1)]],
        )
        .unwrap();
        assert!(!find_tilings(&a, &b, usize::MAX).unwrap().is_tiling());
    }

    #[test]
    fn three_copies_of_three_vertex_graph() {
        let hat = three_vertex_graph();
        // The three copies share nothing but their edge pattern, with the
        // binary edges rewired cyclically between copies.
        let id = |c: usize, v: &str| format!("{v}_{c}");
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for c in 0..3 {
            for v in hat.vertices() {
                vertices.push(Vertex::new(id(c, &v.id), v.label.clone()));
            }
            let n = (c + 1) % 3;
            edges.push(vec![PortRef::new(id(c, "v1"), 1), PortRef::new(id(n, "v3"), 3)]);
            edges.push(vec![
                PortRef::new(id(c, "v1"), 2),
                PortRef::new(id(c, "v2"), 1),
                PortRef::new(id(n, "v3"), 2),
            ]);
            edges.push(vec![PortRef::new(id(c, "v1"), 3), PortRef::new(id(n, "v2"), 2)]);
            edges.push(vec![PortRef::new(id(c, "v3"), 1)]);
        }
        let g = Hypergraph::new(hat.alphabet().clone(), vertices, edges).unwrap();
        assert!(g.is_connected());
        let r = find_tilings(&g, &hat, usize::MAX).unwrap();
        assert_eq!(r.maps.len(), 1);
        assert!(r.fiber_sizes.values().all(|&n| n == 3));
        let q = quotient_hypergraph(&g, &hat, &r.maps[0]).unwrap();
        assert!(are_isomorphic(&q, &hat).unwrap());
        assert_eq!(evaluate(&tiling_hwm(&hat, ONE), &g).unwrap(), ONE);
    }

    #[test]
    fn invalid_maps_are_rejected() {
        let (g, hat) = (circ("abab"), circ("ab"));
        let mut m = find_tilings(&g, &hat, 1).unwrap().maps.remove(0);
        let first = m.f.keys().next().unwrap().clone();
        let other = if m.f[&first] == "1" { "2" } else { "1" };
        m.f.insert(first, other.to_string());
        assert!(matches!(quotient_hypergraph(&g, &hat, &m), Err(TilingError::InvalidMap(_))));
    }

    #[test]
    fn scaling() {
        let g = three_vertex_graph();
        let m = scaled_tiling_hwm(&g, real(5.0)).unwrap();
        assert!(approx_eq(evaluate(&m, &g).unwrap(), real(5.0), 1e-8));
        let zero = scaled_tiling_hwm(&g, ZERO).unwrap();
        assert_eq!(evaluate(&zero, &g).unwrap(), ZERO);
        let same = scaled_tiling_hwm(&g, ONE).unwrap();
        assert_eq!(same, tiling_hwm(&g, ONE));
    }

    #[test]
    fn circular_family_is_not_tiling_free() {
        let family = [circ("ab"), circ("abab")];
        let w = is_tiling_free(&family).unwrap().unwrap();
        assert_eq!((w.tiling, w.template), (1, 0));
        let m = scaled_tiling_hwm(&family[0], real(3.0)).unwrap();
        // weight^2 = 3 on the template, so abab (4 edges) gets 9.
        assert!(approx_eq(evaluate(&m, &family[1]).unwrap(), real(9.0), 1e-8));
    }

    #[test]
    fn isomorphism() {
        let g = three_vertex_graph();
        let renamed = g.rename_vertices(|id| format!("x{id}"));
        assert!(are_isomorphic(&g, &renamed).unwrap());
        assert!(are_isomorphic(&circ("abab"), &circ("baba")).unwrap());
        assert!(!are_isomorphic(&circ("aabb"), &circ("abab")).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let alphabet = RankedAlphabet::new([("a", 1)]).unwrap();
        // n unary vertices: partitions of an n-set up to relabeling = integer partitions of n.
        assert_eq!(enumerate_hypergraphs(&alphabet, 4).len(), 1 + 2 + 3 + 5);
        let mut count = 0;
        for_each_partition(5, |_| count += 1);
        assert_eq!(count, 52);
    }

    #[test]
    fn budgets() {
        let g = circ("abab");
        let tight = TilingSearch {
            node_budget: 2,
            ..TilingSearch::default()
        };
        assert!(matches!(
            find_tilings_with(&g, &circ("ab"), tight),
            Err(TilingError::BudgetExceeded { .. })
        ));
        let small = TilingSearch {
            max_vertices: 3,
            ..TilingSearch::default()
        };
        assert!(find_tilings_with(&g, &circ("ab"), small).is_err());
    }
}
