use std::collections::BTreeMap;
use std::fmt;

use super::strings::check_dense_labels;
use super::{build, port, EncodeError, LAMBDA};
use crate::engine::Hwm;
use crate::hypergraph::{Hypergraph, RankedAlphabet, Vertex};
use crate::numeric::{C64, ZERO};
use crate::tensor::{ProductAlgebra, SparseTensor};

/// A finite ranked tree. Positions are sequences of 1-based child indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub label: String,
    pub children: Vec<Tree>,
}

impl Tree {
    pub fn leaf(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            children: Vec::new(),
        }
    }

    pub fn node(label: impl Into<String>, children: Vec<Tree>) -> Self {
        Self {
            label: label.into(),
            children,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    /// `Pos(t)` with the label at each position.
    pub fn positions(&self) -> BTreeMap<Vec<usize>, String> {
        let mut out = BTreeMap::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((p, t)) = stack.pop() {
            for (j, c) in t.children.iter().enumerate() {
                let mut q = p.clone();
                q.push(j + 1);
                stack.push((q, c));
            }
            out.insert(p, t.label.clone());
        }
        out
    }

    /// Rebuilds a tree from a prefix-closed position map whose nodes have
    /// children exactly `1..=n`.
    pub fn from_positions(pos: &BTreeMap<Vec<usize>, String>) -> Result<Tree, EncodeError> {
        fn go(p: &mut Vec<usize>, pos: &BTreeMap<Vec<usize>, String>, used: &mut usize) -> Result<Tree, EncodeError> {
            let label = pos
                .get(p.as_slice())
                .ok_or_else(|| EncodeError::InvalidTree(format!("missing position {}", position_id(p))))?
                .clone();
            *used += 1;
            let mut children = Vec::new();
            let mut j = 1;
            loop {
                p.push(j);
                let present = pos.contains_key(p.as_slice());
                if present {
                    children.push(go(p, pos, used)?);
                }
                p.pop();
                if !present {
                    break;
                }
                j += 1;
            }
            Ok(Tree { label, children })
        }
        let mut used = 0;
        let t = go(&mut Vec::new(), pos, &mut used)?;
        if used != pos.len() {
            let stray = pos
                .keys()
                .find(|p| !t.positions().contains_key(*p))
                .map(|p| position_id(p))
                .unwrap_or_default();
            return Err(EncodeError::InvalidTree(format!(
                "position {stray} is not reachable through children 1..n"
            )));
        }
        Ok(t)
    }

    /// Arity of each symbol (its number of children); conflicting uses are
    /// rejected.
    pub fn ranks(&self) -> Result<BTreeMap<String, usize>, EncodeError> {
        let mut out = BTreeMap::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            let k = t.children.len();
            if let Some(&prev) = out.get(&t.label) {
                if prev != k {
                    return Err(EncodeError::InvalidTree(format!(
                        "symbol {:?} used with {prev} and {k} children",
                        t.label
                    )));
                }
            }
            out.insert(t.label.clone(), k);
            stack.extend(t.children.iter());
        }
        Ok(out)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Vertex id of a position: `ε` for the root, dotted child indices otherwise.
pub(crate) fn position_id(p: &[usize]) -> String {
    if p.is_empty() {
        "ε".to_string()
    } else {
        p.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

/// Parses `f(a, g(b))`-style terms.
pub fn parse_tree(text: &str) -> Result<Tree, EncodeError> {
    struct P<'a> {
        s: &'a [u8],
        i: usize,
        depth: usize,
    }
    impl P<'_> {
        fn err(&self, msg: &str) -> EncodeError {
            EncodeError::Parse {
                pos: self.i,
                msg: msg.to_string(),
            }
        }
        fn ws(&mut self) {
            while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
        }
        fn tree(&mut self) -> Result<Tree, EncodeError> {
            self.depth += 1;
            if self.depth > 512 {
                return Err(self.err("nesting too deep"));
            }
            self.ws();
            let start = self.i;
            while self.i < self.s.len() && !b"(),".contains(&self.s[self.i]) && !self.s[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
            if self.i == start {
                return Err(self.err("expected a symbol"));
            }
            let label = std::str::from_utf8(&self.s[start..self.i])
                .map_err(|_| self.err("symbol is not valid UTF-8"))?
                .to_string();
            self.ws();
            let mut children = Vec::new();
            if self.s.get(self.i) == Some(&b'(') {
                self.i += 1;
                loop {
                    children.push(self.tree()?);
                    self.ws();
                    match self.s.get(self.i) {
                        Some(b',') => self.i += 1,
                        Some(b')') => {
                            self.i += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ',' or ')'")),
                    }
                }
            }
            self.depth -= 1;
            Ok(Tree { label, children })
        }
    }
    let mut p = P {
        s: text.as_bytes(),
        i: 0,
        depth: 0,
    };
    let t = p.tree()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

/// `r(t) = lambdaᵀ mu(t)`, where `mu(f)` is stored as an order `p+1` tensor
/// with the output index first.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeLinearRep {
    dim: usize,
    lambda: Vec<C64>,
    mu: BTreeMap<String, SparseTensor>,
}

impl TreeLinearRep {
    pub fn new(lambda: Vec<C64>, mu: BTreeMap<String, SparseTensor>) -> Result<Self, EncodeError> {
        let dim = lambda.len();
        if dim == 0 {
            return Err(EncodeError::DimensionMismatch {
                what: "lambda".into(),
                expected: 1,
                got: 0,
            });
        }
        for (s, t) in &mu {
            if s == LAMBDA {
                return Err(EncodeError::ReservedSymbol(s.clone()));
            }
            if t.order() == 0 {
                return Err(EncodeError::InvalidTree(format!(
                    "tensor for {s:?} must have order at least 1"
                )));
            }
            check_dense_labels(t, dim, &format!("tensor {s:?}"))?;
        }
        Ok(Self { dim, lambda, mu })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> &[C64] {
        &self.lambda
    }

    pub fn mu(&self) -> &BTreeMap<String, SparseTensor> {
        &self.mu
    }

    /// Number of children of a symbol.
    pub fn rank(&self, s: &str) -> Option<usize> {
        self.mu.get(s).map(|t| t.order() - 1)
    }
}

/// Bottom-up `mu(f(t_1..t_p)) = mu(f)(mu(t_1), ..., mu(t_p))`.
fn mu_vector(rep: &TreeLinearRep, t: &Tree) -> Result<Vec<C64>, EncodeError> {
    let tensor = rep
        .mu
        .get(&t.label)
        .ok_or_else(|| EncodeError::UnknownSymbol(t.label.clone()))?;
    if tensor.order() != t.children.len() + 1 {
        return Err(EncodeError::InvalidTree(format!(
            "symbol {:?} has rank {} but {} children",
            t.label,
            tensor.order() - 1,
            t.children.len()
        )));
    }
    let kids = t
        .children
        .iter()
        .map(|c| mu_vector(rep, c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = vec![ZERO; rep.dim];
    for (idx, v) in tensor.entries() {
        let mut term = v;
        for (j, kid) in kids.iter().enumerate() {
            term *= kid[idx[j + 1].dense_index().expect("checked dense")];
        }
        out[idx[0].dense_index().expect("checked dense")] += term;
    }
    Ok(out)
}

pub fn tree_oracle_mu(rep: &TreeLinearRep, t: &Tree) -> Result<C64, EncodeError> {
    let v = mu_vector(rep, t)?;
    Ok(rep.lambda.iter().zip(&v).map(|(a, b)| a * b).sum())
}

/// `G^t`: one vertex per position plus a `lambda` vertex `0` above the root.
/// Slot 1 of every vertex faces its parent; slot `j+1` faces child `j`.
pub fn encode_tree(t: &Tree) -> Result<Hypergraph, EncodeError> {
    let ranks = t.ranks()?;
    if ranks.contains_key(LAMBDA) {
        return Err(EncodeError::ReservedSymbol(LAMBDA.into()));
    }
    let alphabet = RankedAlphabet::new(
        ranks
            .iter()
            .map(|(s, &k)| (s.clone(), k + 1))
            .chain([(LAMBDA.to_string(), 1)]),
    )
    .expect("distinct symbols");
    let positions = t.positions();
    let mut vertices = vec![Vertex::new("0", LAMBDA)];
    let mut edges = vec![vec![port("0", 1), port("ε", 1)]];
    for (p, label) in &positions {
        let id = position_id(p);
        vertices.push(Vertex::new(id.clone(), label.clone()));
        let mut j = 1;
        let mut q = p.clone();
        q.push(1);
        while positions.contains_key(&q) {
            edges.push(vec![port(&id, j + 1), port(position_id(&q), 1)]);
            j += 1;
            *q.last_mut().unwrap() = j;
        }
    }
    Ok(build(alphabet, vertices, edges))
}

/// `T^lambda = lambda`, `T^f = mu(f)` under the identity product.
pub fn lift_tree_series(rep: &TreeLinearRep) -> Hwm {
    let alphabet = RankedAlphabet::new(
        rep.mu
            .iter()
            .map(|(s, t)| (s.clone(), t.order()))
            .chain([(LAMBDA.to_string(), 1)]),
    )
    .expect("distinct symbols");
    let mut tensors = rep.mu.clone();
    tensors.insert(LAMBDA.into(), SparseTensor::dense_vector(&rep.lambda));
    Hwm::new(alphabet, ProductAlgebra::identity_ones(rep.dim), tensors).expect("consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::evaluate;
    use crate::numeric::{real, ONE};

    fn sum_rep() -> TreeLinearRep {
        // d = 2 with coordinates (count, 1): f(u, v) = (u0 v1 + u1 v0, u1 v1)
        let mut f = vec![ZERO; 8];
        f[0b001] = ONE;
        f[0b010] = ONE;
        f[0b111] = ONE;
        TreeLinearRep::new(
            vec![ONE, ZERO],
            BTreeMap::from([
                ("a".to_string(), SparseTensor::dense_vector(&[ONE, ONE])),
                ("f".to_string(), SparseTensor::from_dense(3, 2, &f).unwrap()),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn parse_and_print() {
        let t = parse_tree("f(a, f(a,a))").unwrap();
        assert_eq!(t.to_string(), "f(a,f(a,a))");
        assert_eq!(t.size(), 5);
        assert!(parse_tree("f(a,").is_err());
        assert!(parse_tree("f()").is_err());
        assert!(parse_tree("a b").is_err());
    }

    #[test]
    fn positions_round_trip() {
        let t = parse_tree("g(a,h(b,c,d),e)").unwrap();
        assert_eq!(Tree::from_positions(&t.positions()).unwrap(), t);
        let mut bad = t.positions();
        bad.insert(vec![5], "z".into());
        assert!(matches!(Tree::from_positions(&bad), Err(EncodeError::InvalidTree(_))));
    }

    #[test]
    fn tree_graph_shape() {
        let g = encode_tree(&parse_tree("f(a,f(a,a))").unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 5));
        let g = encode_tree(&Tree::leaf("a")).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert!(encode_tree(&parse_tree("f(a,f(a))").unwrap()).is_err());
    }

    #[test]
    fn counting_leaves() {
        let rep = sum_rep();
        let t = parse_tree("f(a,f(a,a))").unwrap();
        assert_eq!(tree_oracle_mu(&rep, &t).unwrap(), real(3.0));
        assert_eq!(tree_oracle_mu(&rep, &Tree::leaf("a")).unwrap(), real(1.0));
        let m = lift_tree_series(&rep);
        assert_eq!(evaluate(&m, &encode_tree(&t).unwrap()).unwrap(), real(3.0));
    }
}
