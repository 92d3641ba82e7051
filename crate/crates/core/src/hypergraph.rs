//! Ranked alphabets and labeled hypergraphs whose hyperedges partition the
//! port set.
//!
//! A vertex labeled `x` owns the ports `(v, 1) .. (v, arity(x))`. The
//! hyperedges of a [`Hypergraph`] are a partition of all ports; this is
//! enforced by [`Hypergraph::new`], which is the only way to obtain one.
//! Slots are 1-based everywhere in the public surface.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` has arity 0; hypergraph alphabets must be positive")]
    ZeroArity(String),
    #[error("symbol `{symbol}` has arity {left} in one alphabet and {right} in the other")]
    Conflict {
        symbol: String,
        left: usize,
        right: usize,
    },
}

/// A positive ranked alphabet: every symbol has an arity of at least one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankedAlphabet {
    arities: BTreeMap<String, usize>,
}

impl RankedAlphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut arities = BTreeMap::new();
        for (symbol, arity) in symbols {
            let symbol = symbol.into();
            if arity == 0 {
                return Err(AlphabetError::ZeroArity(symbol));
            }
            if arities.insert(symbol.clone(), arity).is_some() {
                return Err(AlphabetError::DuplicateSymbol(symbol));
            }
        }
        Ok(Self { arities })
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.arities.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.arities.contains_key(symbol)
    }

    /// Symbols in lexicographic order with their arities.
    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.arities.iter().map(|(s, &a)| (s.as_str(), a))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.arities.values().copied().max().unwrap_or(0)
    }

    /// Union of two alphabets that agree on every shared symbol.
    pub fn union(&self, other: &RankedAlphabet) -> Result<RankedAlphabet, AlphabetError> {
        let mut arities = self.arities.clone();
        for (symbol, &arity) in &other.arities {
            match arities.get(symbol) {
                Some(&mine) if mine != arity => {
                    return Err(AlphabetError::Conflict {
                        symbol: symbol.clone(),
                        left: mine,
                        right: arity,
                    })
                }
                _ => {
                    arities.insert(symbol.clone(), arity);
                }
            }
        }
        Ok(RankedAlphabet { arities })
    }
}

/// A port `(vertex, slot)`; `slot` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PortRef {
    pub vertex: String,
    pub slot: usize,
}

impl PortRef {
    pub fn new(vertex: impl Into<String>, slot: usize) -> Self {
        Self {
            vertex: vertex.into(),
            slot,
        }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vertex, self.slot)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub id: String,
    pub label: String,
}

impl Vertex {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            label: label.into(),
        }
    }
}

/// First violated hypergraph invariant, naming the offending vertex or port.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("a hypergraph needs at least one vertex")]
    NoVertices,
    #[error("vertex id `{0}` is used twice")]
    DuplicateVertex(String),
    #[error("vertex `{vertex}` has label `{label}`, which is not in the alphabet")]
    UnknownSymbol { vertex: String, label: String },
    #[error("hyperedge #{0} is empty")]
    EmptyHyperedge(usize),
    #[error("hyperedge #{edge} refers to unknown vertex `{vertex}`")]
    UnknownVertex { edge: usize, vertex: String },
    #[error("port {port} is out of range: vertex has arity {arity}")]
    ArityMismatch { port: PortRef, arity: usize },
    #[error("port {0} appears in more than one hyperedge")]
    DuplicatePort(PortRef),
    #[error("port {0} is not covered by any hyperedge")]
    MissingPort(PortRef),
}

/// Checks every hypergraph invariant without building the graph.
pub fn validate_hypergraph(
    alphabet: &RankedAlphabet,
    vertices: &[Vertex],
    hyperedges: &[Vec<PortRef>],
) -> Result<(), ValidationError> {
    Hypergraph::new(alphabet.clone(), vertices.to_vec(), hyperedges.to_vec()).map(|_| ())
}

/// A hypergraph over a positive ranked alphabet. Immutable once built.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    alphabet: RankedAlphabet,
    vertices: Vec<Vertex>,
    hyperedges: Vec<Vec<PortRef>>,
    position: HashMap<String, usize>,
    port_offsets: Vec<usize>,
    indexed_edges: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.vertices == other.vertices
            && self.hyperedges == other.hyperedges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Validates and builds. Each hyperedge is stored sorted.
    pub fn new(
        alphabet: RankedAlphabet,
        vertices: Vec<Vertex>,
        hyperedges: Vec<Vec<PortRef>>,
    ) -> Result<Self, ValidationError> {
        if vertices.is_empty() {
            return Err(ValidationError::NoVertices);
        }
        let mut position = HashMap::with_capacity(vertices.len());
        let mut port_offsets = Vec::with_capacity(vertices.len() + 1);
        let mut total = 0;
        for (i, v) in vertices.iter().enumerate() {
            if position.insert(v.id.clone(), i).is_some() {
                return Err(ValidationError::DuplicateVertex(v.id.clone()));
            }
            let arity = alphabet
                .arity(&v.label)
                .ok_or_else(|| ValidationError::UnknownSymbol {
                    vertex: v.id.clone(),
                    label: v.label.clone(),
                })?;
            port_offsets.push(total);
            total += arity;
        }
        port_offsets.push(total);

        let mut covered = vec![false; total];
        let mut sorted_edges = Vec::with_capacity(hyperedges.len());
        let mut indexed_edges = Vec::with_capacity(hyperedges.len());
        for (e, mut edge) in hyperedges.into_iter().enumerate() {
            if edge.is_empty() {
                return Err(ValidationError::EmptyHyperedge(e));
            }
            let mut indexed = Vec::with_capacity(edge.len());
            for port in &edge {
                let &v = position
                    .get(&port.vertex)
                    .ok_or_else(|| ValidationError::UnknownVertex {
                        edge: e,
                        vertex: port.vertex.clone(),
                    })?;
                let arity = port_offsets[v + 1] - port_offsets[v];
                if port.slot == 0 || port.slot > arity {
                    return Err(ValidationError::ArityMismatch {
                        port: port.clone(),
                        arity,
                    });
                }
                let global = port_offsets[v] + port.slot - 1;
                if covered[global] {
                    return Err(ValidationError::DuplicatePort(port.clone()));
                }
                covered[global] = true;
                indexed.push(global);
            }
            edge.sort();
            indexed.sort_unstable();
            sorted_edges.push(edge);
            indexed_edges.push(indexed);
        }
        for (v, vertex) in vertices.iter().enumerate() {
            for slot in 1..=(port_offsets[v + 1] - port_offsets[v]) {
                if !covered[port_offsets[v] + slot - 1] {
                    return Err(ValidationError::MissingPort(PortRef::new(
                        vertex.id.clone(),
                        slot,
                    )));
                }
            }
        }
        Ok(Self {
            alphabet,
            vertices,
            hyperedges: sorted_edges,
            position,
            port_offsets,
            indexed_edges,
        })
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn hyperedges(&self) -> &[Vec<PortRef>] {
        &self.hyperedges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn port_count(&self) -> usize {
        *self.port_offsets.last().unwrap()
    }

    /// Position of a vertex id in [`Hypergraph::vertices`].
    pub fn position(&self, id: &str) -> Option<usize> {
        self.position.get(id).copied()
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.position(id).map(|i| &self.vertices[i])
    }

    pub fn arity_at(&self, v: usize) -> usize {
        self.port_offsets[v + 1] - self.port_offsets[v]
    }

    /// Global 0-based index of the first port of vertex `v`.
    pub fn port_offset(&self, v: usize) -> usize {
        self.port_offsets[v]
    }

    /// Hyperedges as sorted lists of global port indices.
    pub fn indexed_edges(&self) -> &[Vec<usize>] {
        &self.indexed_edges
    }

    /// Inverse of the global port numbering: `(vertex position, 1-based slot)`.
    pub fn port_at(&self, global: usize) -> (usize, usize) {
        let v = self.port_offsets.partition_point(|&o| o <= global) - 1;
        (v, global - self.port_offsets[v] + 1)
    }

    /// Vertices sorted by id, hyperedges sorted lexicographically.
    pub fn canonical(&self) -> Hypergraph {
        let mut vertices = self.vertices.clone();
        vertices.sort();
        let mut edges = self.hyperedges.clone();
        edges.sort();
        Hypergraph::new(self.alphabet.clone(), vertices, edges).expect("already valid")
    }

    /// Renames vertices; `rename` must be injective.
    pub fn rename_vertices(&self, mut rename: impl FnMut(&str) -> String) -> Hypergraph {
        let map: HashMap<&str, String> = self
            .vertices
            .iter()
            .map(|v| (v.id.as_str(), rename(&v.id)))
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex::new(map[v.id.as_str()].clone(), v.label.clone()))
            .collect();
        let edges = self
            .hyperedges
            .iter()
            .map(|h| {
                h.iter()
                    .map(|p| PortRef::new(map[p.vertex.as_str()].clone(), p.slot))
                    .collect()
            })
            .collect();
        Hypergraph::new(self.alphabet.clone(), vertices, edges).expect("renaming must be injective")
    }

    /// Same graph with the hyperedge list in a different order.
    pub fn with_edge_order(&self, order: &[usize]) -> Hypergraph {
        let edges = order.iter().map(|&i| self.hyperedges[i].clone()).collect();
        Hypergraph::new(self.alphabet.clone(), self.vertices.clone(), edges)
            .expect("order must be a permutation")
    }

    /// Same graph over a larger, compatible alphabet.
    pub fn with_alphabet(&self, alphabet: RankedAlphabet) -> Result<Hypergraph, ValidationError> {
        Hypergraph::new(alphabet, self.vertices.clone(), self.hyperedges.clone())
    }

    /// Induced sub-hypergraph on a set of vertex positions closed under
    /// hyperedges (e.g. a connected component).
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Result<Hypergraph, ValidationError> {
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .indexed_edges
            .iter()
            .zip(&self.hyperedges)
            .filter(|(idx, _)| keep.contains(&self.port_at(idx[0]).0))
            .map(|(_, h)| h.clone())
            .collect();
        Hypergraph::new(self.alphabet.clone(), vertices, edges)
    }

    pub fn connected_components(&self) -> ComponentPartition {
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        for edge in &self.indexed_edges {
            let first = self.port_at(edge[0]).0;
            for &p in &edge[1..] {
                uf.union(first, self.port_at(p).0);
            }
        }
        let mut index_of_root = HashMap::new();
        let mut assignment = BTreeMap::new();
        for (v, vertex) in self.vertices.iter().enumerate() {
            let next = index_of_root.len();
            let idx = *index_of_root.entry(uf.find(v)).or_insert(next);
            assignment.insert(vertex.id.clone(), idx);
        }
        ComponentPartition {
            count: index_of_root.len(),
            assignment,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().count == 1
    }

    /// Connected components as standalone hypergraphs, ordered by first vertex.
    pub fn components(&self) -> Vec<Hypergraph> {
        let partition = self.connected_components();
        let mut groups = vec![BTreeSet::new(); partition.count];
        for (v, vertex) in self.vertices.iter().enumerate() {
            groups[partition.assignment[&vertex.id]].insert(v);
        }
        groups
            .iter()
            .map(|g| self.restrict(g).expect("components are closed under hyperedges"))
            .collect()
    }
}

/// Connected components: `assignment[id]` is in `0..count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub assignment: BTreeMap<String, usize>,
    pub count: usize,
}

/// `g1 ⊎ g2`. Vertex ids of `g2` that collide with `g1` get primes appended.
pub fn disjoint_union(g1: &Hypergraph, g2: &Hypergraph) -> Result<Hypergraph, AlphabetError> {
    let alphabet = g1.alphabet.union(&g2.alphabet)?;
    let mut used: BTreeSet<String> = g1.vertices.iter().map(|v| v.id.clone()).collect();
    let mut rename = HashMap::new();
    for v in &g2.vertices {
        let mut id = v.id.clone();
        while used.contains(&id) {
            id.push('\'');
        }
        used.insert(id.clone());
        rename.insert(v.id.clone(), id);
    }
    let mut vertices = g1.vertices.clone();
    vertices.extend(
        g2.vertices
            .iter()
            .map(|v| Vertex::new(rename[&v.id].clone(), v.label.clone())),
    );
    let mut edges = g1.hyperedges.clone();
    edges.extend(g2.hyperedges.iter().map(|h| {
        h.iter()
            .map(|p| PortRef::new(rename[&p.vertex].clone(), p.slot))
            .collect()
    }));
    Ok(Hypergraph::new(alphabet, vertices, edges).expect("union of valid graphs is valid"))
}

/// An isomorphism-invariant key, by brute force over label-preserving vertex
/// orderings. Intended for small graphs; `None` if more than `max_orderings`
/// orderings would be needed.
pub fn small_canonical_key(g: &Hypergraph, max_orderings: u64) -> Option<String> {
    let n = g.vertex_count();
    // Group vertex positions by label; orderings only permute within a group.
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (v, vertex) in g.vertices.iter().enumerate() {
        groups.entry(vertex.label.as_str()).or_default().push(v);
    }
    let orderings = groups
        .values()
        .map(|members| (1..=members.len() as u64).product::<u64>())
        .try_fold(1u64, |acc, f| acc.checked_mul(f))?;
    if orderings > max_orderings {
        return None;
    }
    let labels: Vec<&str> = groups
        .iter()
        .flat_map(|(l, m)| std::iter::repeat_n(*l, m.len()))
        .collect();
    let mut perms: Vec<Vec<usize>> = groups.values().cloned().collect();
    for p in &mut perms {
        p.sort_unstable();
    }
    let mut best: Option<Vec<Vec<(usize, usize)>>> = None;
    let mut rank = vec![0usize; n];
    loop {
        for (r, &v) in perms.iter().flatten().enumerate() {
            rank[v] = r;
        }
        let mut edges: Vec<Vec<(usize, usize)>> = g
            .indexed_edges
            .iter()
            .map(|h| {
                let mut e: Vec<(usize, usize)> = h
                    .iter()
                    .map(|&p| {
                        let (v, s) = g.port_at(p);
                        (rank[v], s)
                    })
                    .collect();
                e.sort_unstable();
                e
            })
            .collect();
        edges.sort();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
        if !next_group_permutation(&mut perms) {
            break;
        }
    }
    let alphabet: Vec<String> = g.alphabet.symbols().map(|(s, a)| format!("{s}:{a}")).collect();
    Some(format!(
        "{}|{}|{:?}",
        alphabet.join(","),
        labels.join(","),
        best.unwrap()
    ))
}

fn next_group_permutation(groups: &mut [Vec<usize>]) -> bool {
    for group in groups.iter_mut().rev() {
        if next_permutation(group) {
            return true;
        }
        // wrapped around to sorted order; carry into the previous group
    }
    false
}

fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn three_vertex_graph() -> Hypergraph {
        let alphabet = RankedAlphabet::new([("a", 3), ("b", 2)]).unwrap();
        let vertices = vec![
            Vertex::new("v1", "a"),
            Vertex::new("v2", "b"),
            Vertex::new("v3", "a"),
        ];
        let p = PortRef::new;
        let edges = vec![
            vec![p("v1", 1), p("v3", 3)],
            vec![p("v1", 2), p("v2", 1), p("v3", 2)],
            vec![p("v1", 3), p("v2", 2)],
            vec![p("v3", 1)],
        ];
        Hypergraph::new(alphabet, vertices, edges).unwrap()
    }

    fn single_a(edges: Vec<Vec<PortRef>>) -> Result<Hypergraph, ValidationError> {
        Hypergraph::new(
            RankedAlphabet::new([("a", 3)]).unwrap(),
            vec![Vertex::new("v", "a")],
            edges,
        )
    }

    #[test]
    fn three_vertex_graph_is_valid_and_connected() {
        let g = three_vertex_graph();
        assert_eq!(g.port_count(), 8);
        assert_eq!(g.connected_components().count, 1);
        let edge_sizes: usize = g.hyperedges().iter().map(Vec::len).sum();
        assert_eq!(edge_sizes, g.port_count());
    }

    #[test]
    fn singleton_partition_is_valid() {
        let p = PortRef::new;
        assert!(single_a(vec![vec![p("v", 1)], vec![p("v", 2)], vec![p("v", 3)]]).is_ok());
    }

    #[test]
    fn missing_port_is_reported() {
        let p = PortRef::new;
        let err = single_a(vec![vec![p("v", 1)], vec![p("v", 2)]]).unwrap_err();
        assert_eq!(err, ValidationError::MissingPort(p("v", 3)));
    }

    #[test]
    fn other_violations() {
        let p = PortRef::new;
        assert_eq!(
            single_a(vec![vec![p("v", 1), p("v", 2)], vec![p("v", 2), p("v", 3)]]).unwrap_err(),
            ValidationError::DuplicatePort(p("v", 2))
        );
        assert_eq!(
            single_a(vec![vec![p("v", 1), p("v", 2), p("v", 3)], vec![]]).unwrap_err(),
            ValidationError::EmptyHyperedge(1)
        );
        assert!(matches!(
            single_a(vec![vec![p("v", 1), p("v", 2), p("v", 4)]]).unwrap_err(),
            ValidationError::ArityMismatch { arity: 3, .. }
        ));
        assert!(matches!(
            single_a(vec![vec![p("v", 1), p("v", 2), p("w", 3)]]).unwrap_err(),
            ValidationError::UnknownVertex { .. }
        ));
        let err = Hypergraph::new(
            RankedAlphabet::new([("a", 1)]).unwrap(),
            vec![Vertex::new("v", "z")],
            vec![vec![p("v", 1)]],
        )
        .unwrap_err();
        assert!(matches!(err, ValidationError::UnknownSymbol { .. }));
    }

    #[test]
    fn alphabet_invariants() {
        assert_eq!(
            RankedAlphabet::new([("a", 1), ("a", 2)]).unwrap_err(),
            AlphabetError::DuplicateSymbol("a".into())
        );
        assert_eq!(
            RankedAlphabet::new([("a", 0)]).unwrap_err(),
            AlphabetError::ZeroArity("a".into())
        );
    }

    #[test]
    fn union_adds_components() {
        let g = three_vertex_graph();
        let u = disjoint_union(&g, &g).unwrap();
        assert_eq!(u.vertex_count(), 6);
        assert_eq!(u.edge_count(), 8);
        assert_eq!(u.connected_components().count, 2);

        let single = Hypergraph::new(
            RankedAlphabet::new([("c", 1)]).unwrap(),
            vec![Vertex::new("w", "c")],
            vec![vec![PortRef::new("w", 1)]],
        )
        .unwrap();
        assert_eq!(single.connected_components().count, 1);
        let u2 = disjoint_union(&u, &single).unwrap();
        assert_eq!(u2.connected_components().count, 3);
        assert_eq!(u2.components().len(), 3);
    }

    #[test]
    fn union_rejects_conflicting_arity() {
        let g = three_vertex_graph();
        let other = Hypergraph::new(
            RankedAlphabet::new([("a", 1)]).unwrap(),
            vec![Vertex::new("w", "a")],
            vec![vec![PortRef::new("w", 1)]],
        )
        .unwrap();
        assert!(disjoint_union(&g, &other).is_err());
    }

    #[test]
    fn port_numbering_round_trips() {
        let g = three_vertex_graph();
        for global in 0..g.port_count() {
            let (v, s) = g.port_at(global);
            assert_eq!(g.port_offset(v) + s - 1, global);
        }
    }

    #[test]
    fn canonical_key_ignores_names_and_order() {
        let g = three_vertex_graph();
        let renamed = g.rename_vertices(|id| format!("x_{id}"));
        let reordered = renamed.with_edge_order(&[3, 1, 0, 2]);
        let k1 = small_canonical_key(&g, 1000).unwrap();
        assert_eq!(k1, small_canonical_key(&reordered, 1000).unwrap());
        // Swapping the slots of h1 changes the structure.
        let p = PortRef::new;
        let other = Hypergraph::new(
            g.alphabet().clone(),
            g.vertices().to_vec(),
            vec![
                vec![p("v1", 1), p("v3", 1)],
                vec![p("v1", 2), p("v2", 1), p("v3", 2)],
                vec![p("v1", 3), p("v2", 2)],
                vec![p("v3", 3)],
            ],
        )
        .unwrap();
        assert_ne!(k1, small_canonical_key(&other, 1000).unwrap());
    }
}
