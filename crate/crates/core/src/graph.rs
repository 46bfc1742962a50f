//! Simple undirected graphs, vertex sets and odd-neighbourhoods.
//!
//! Vertices are `0..n`. A [`Graph`] stores one adjacency bit-row per vertex,
//! which makes the odd-neighbourhood of a set a plain XOR of rows.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex set has universe size {found}, graph has {expected} vertices")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A subset of the vertices `0..n` of some graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(BitVec);

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self(BitVec::zeros(n))
    }

    pub fn full(n: usize) -> Self {
        Self(BitVec::ones(n))
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(
        n: usize,
        vertices: I,
    ) -> Result<Self, GraphError> {
        let mut bits = BitVec::zeros(n);
        for v in vertices {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            bits.set(v, true);
        }
        Ok(Self(bits))
    }

    /// Set whose members are the set bits of `mask`.
    ///
    /// # Panics
    ///
    /// Panics if `n > 64` or `mask` mentions a vertex `>= n`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self(BitVec::from_u64(n, mask))
    }

    pub fn from_bits(bits: BitVec) -> Self {
        Self(bits)
    }

    pub fn to_mask(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    /// Size of the vertex universe, not the cardinality.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_zero()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe() && self.0.get(v)
    }

    pub fn insert(&mut self, v: usize) {
        self.0.set(v, true);
    }

    pub fn remove(&mut self, v: usize) {
        self.0.set(v, false);
    }

    pub fn toggle(&mut self, v: usize) {
        self.0.flip(v);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter_ones()
    }

    pub fn complement(&self) -> Self {
        Self(self.0.not())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset_of(&other.0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.0.or_assign(&other.0);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.0.and_assign(&other.0);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.0.and_not_assign(&other.0);
        out
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.0.xor_assign(&other.0);
        out
    }

    /// Parses a comma-separated vertex list such as `0,2,4`. An empty or
    /// all-whitespace string is the empty set.
    pub fn parse_list(n: usize, text: &str) -> Result<Self, GraphError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty(n));
        }
        let mut vertices = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let v: usize = part.parse().map_err(|_| GraphError::Parse {
                line: 1,
                message: format!("invalid vertex {part:?} in set list"),
            })?;
            vertices.push(v);
        }
        Self::from_vertices(n, vertices)
    }

    fn check_universe(&self, n: usize) -> Result<(), GraphError> {
        if self.universe() == n {
            Ok(())
        } else {
            Err(GraphError::UniverseMismatch {
                expected: n,
                found: self.universe(),
            })
        }
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A simple undirected graph on vertices `0..n`.
///
/// Invariants: no self-loops, and `adj[u][v] == adj[v][u]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![VertexSet::empty(n); n],
        }
    }

    /// Builds a graph from an edge list. Repeated edges in either orientation collapse.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(
        n: usize,
        edges: I,
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        Self::empty(n).complement()
    }

    /// Star with centre 0 and leaves `1..n`.
    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (0, i))).expect("star edges are valid")
    }

    /// Decodes a graph from an edge-selection mask over the pairs
    /// `(u, v)`, `u < v`, listed in lexicographic order. Bit `i` of `mask`
    /// selects the `i`-th pair. Used to enumerate all labelled graphs.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let mut g = Self::empty(n);
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if (mask >> bit) & 1 == 1 {
                    g.add_edge(u, v).expect("pair is valid");
                }
                bit += 1;
            }
        }
        g
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.order();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].contains(v)
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    /// N(u).
    pub fn neighbourhood(&self, u: usize) -> Result<&VertexSet, GraphError> {
        self.adj.get(u).ok_or(GraphError::VertexOutOfRange {
            vertex: u,
            n: self.order(),
        })
    }

    /// Odd(D): the vertices with an odd number of neighbours in `d`,
    /// computed as the XOR of the adjacency rows of `d`.
    pub fn odd_neighbourhood(&self, d: &VertexSet) -> Result<VertexSet, GraphError> {
        d.check_universe(self.order())?;
        let mut acc = BitVec::zeros(self.order());
        for u in d.iter() {
            acc.xor_assign(self.adj[u].bits());
        }
        Ok(VertexSet(acc))
    }

    /// The complement graph: every non-edge `u != v` becomes an edge.
    pub fn complement(&self) -> Self {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(u, row)| {
                let mut c = row.complement();
                c.remove(u);
                c
            })
            .collect();
        Self { adj }
    }

    /// Adjacency rows as `u64` masks; `None` when `n > 64`.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        self.adj.iter().map(VertexSet::to_mask).collect()
    }

    /// Checks that `set` lives in this graph's vertex universe.
    pub fn check_set(&self, set: &VertexSet) -> Result<(), GraphError> {
        set.check_universe(self.order())
    }

    /// Canonical edge-list text: `n` on the first line, then `u v` per edge
    /// with `u < v` in sorted order, each line newline-terminated.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.order());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list format: the first non-comment line holds the
    /// vertex count, each following non-empty line holds `u v`. Lines whose
    /// first non-blank character is `#` are comments.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| GraphError::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match graph.as_mut() {
                None => {
                    let [count] = fields[..] else {
                        return Err(parse_err(format!("expected vertex count, found {line:?}")));
                    };
                    let n: usize = count
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex count {count:?}")))?;
                    if n == 0 {
                        return Err(parse_err("vertex count must be at least 1".into()));
                    }
                    graph = Some(Graph::empty(n));
                }
                Some(g) => {
                    let [a, b] = fields[..] else {
                        return Err(parse_err(format!("expected \"u v\", found {line:?}")));
                    };
                    let u: usize = a
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex {a:?}")))?;
                    let v: usize = b
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex {b:?}")))?;
                    g.add_edge(u, v).map_err(|e| parse_err(e.to_string()))?;
                }
            }
        }
        graph.ok_or(GraphError::Parse {
            line: text.lines().count().max(1),
            message: "missing vertex count".into(),
        })
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_edge_list(s)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.order(), self.edges())
    }
}
