//! Simple undirected graphs with structured vertex labels.
//!
//! Vertices are addressed by their index in construction order; the label is
//! the vertex's identity and is what serialization emits. Adjacency is kept
//! twice: sorted neighbor lists for iteration and a packed bit matrix for
//! constant-time edge queries (omitted for very large graphs, where the
//! lookup falls back to a binary search).

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest vertex count for which the packed adjacency matrix is built.
const MATRIX_LIMIT: usize = 1 << 14;

/// Structured vertex label recording how a vertex was produced.
///
/// `Left(g1)` is the merged level-0 vertex of a star-join, `Right(g2)` the
/// merged top-level vertex, and `Mid(g1, g2, level)` a product vertex on one
/// of the middle levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Base(u32),
    Left(Box<VertexLabel>),
    Right(Box<VertexLabel>),
    Mid(Box<VertexLabel>, Box<VertexLabel>, u32),
}

impl VertexLabel {
    pub fn left(g1: &VertexLabel) -> Self {
        VertexLabel::Left(Box::new(g1.clone()))
    }

    pub fn right(g2: &VertexLabel) -> Self {
        VertexLabel::Right(Box::new(g2.clone()))
    }

    pub fn mid(g1: &VertexLabel, g2: &VertexLabel, level: u32) -> Self {
        VertexLabel::Mid(Box::new(g1.clone()), Box::new(g2.clone()), level)
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Base(i) => write!(f, "{i}"),
            VertexLabel::Left(g) => write!(f, "L({g})"),
            VertexLabel::Right(g) => write!(f, "R({g})"),
            VertexLabel::Mid(a, b, level) => write!(f, "M({a},{b},{level})"),
        }
    }
}

impl FromStr for VertexLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = LabelParser { src: s.as_bytes(), pos: 0 };
        let label = parser.label()?;
        if parser.pos != s.len() {
            return Err(parser.error("trailing characters"));
        }
        Ok(label)
    }
}

struct LabelParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl LabelParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::InvalidInput(format!(
            "bad vertex label {:?} at byte {}: {msg}",
            String::from_utf8_lossy(self.src),
            self.pos
        ))
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.src.get(self.pos) == Some(&byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("number out of range"))
    }

    fn label(&mut self) -> Result<VertexLabel> {
        match self.src.get(self.pos) {
            Some(b'L') | Some(b'R') => {
                let left = self.src[self.pos] == b'L';
                self.pos += 1;
                self.expect(b'(')?;
                let inner = self.label()?;
                self.expect(b')')?;
                Ok(if left {
                    VertexLabel::Left(Box::new(inner))
                } else {
                    VertexLabel::Right(Box::new(inner))
                })
            }
            Some(b'M') => {
                self.pos += 1;
                self.expect(b'(')?;
                let a = self.label()?;
                self.expect(b',')?;
                let b = self.label()?;
                self.expect(b',')?;
                let level = self.number()?;
                self.expect(b')')?;
                Ok(VertexLabel::Mid(Box::new(a), Box::new(b), level))
            }
            _ => Ok(VertexLabel::Base(self.number()?)),
        }
    }
}

/// Graph distance; `Infinite` sorts after every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone)]
struct BitMatrix {
    n: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        BitMatrix { n, words: vec![0; (n * n).div_ceil(64)] }
    }

    fn set(&mut self, u: usize, v: usize) {
        let bit = u * self.n + v;
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    fn get(&self, u: usize, v: usize) -> bool {
        let bit = u * self.n + v;
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<VertexLabel>,
    index: HashMap<VertexLabel, usize>,
    adj: Vec<Vec<usize>>,
    matrix: Option<BitMatrix>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from labels and an edge list over label indices.
    ///
    /// Duplicate edges (in either orientation) are merged; loops and
    /// repeated labels are rejected.
    pub fn new(
        labels: Vec<VertexLabel>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Graph> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate vertex label {label}")));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(format!("index {} (graph has {n})", u.max(v))));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("loop at vertex {}", labels[u])));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let matrix = (n <= MATRIX_LIMIT).then(|| {
            let mut m = BitMatrix::new(n);
            for (u, list) in adj.iter().enumerate() {
                for &v in list {
                    m.set(u, v);
                }
            }
            m
        });
        Ok(Graph { labels, index, adj, matrix })
    }

    /// Graph on `Base(0..n)` labels.
    pub fn from_base_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let labels = (0..n as u32).map(VertexLabel::Base).collect();
        Graph::new(labels, edges.iter().copied())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &VertexLabel {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &VertexLabel) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("index {v} (graph has {})", self.labels.len())))
        }
    }

    /// Sorted open neighborhood of `v`. Panics on an out-of-range index; use
    /// [`Graph::neighbor_set`] for checked access.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: usize) -> Result<&[usize]> {
        self.check(v)?;
        Ok(&self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.matrix {
            Some(m) => m.get(u, v),
            None => self.adj[u].binary_search(&v).is_ok(),
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: usize, limit: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            if limit.is_some_and(|r| d >= r) {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<Distance> {
        self.check(u)?;
        self.check(v)?;
        Ok(match self.distances_from(u, None)[v] {
            Some(d) => Distance::Finite(d),
            None => Distance::Infinite,
        })
    }

    /// Sorted vertex set of the radius-`r` ball around `v`.
    pub fn ball_vertices(&self, v: usize, r: usize) -> Result<Vec<usize>> {
        self.check(v)?;
        Ok(self
            .distances_from(v, Some(r))
            .iter()
            .enumerate()
            .filter_map(|(u, d)| d.map(|_| u))
            .collect())
    }

    pub fn ball(&self, v: usize, r: usize) -> Result<Graph> {
        let vertices = self.ball_vertices(v, r)?;
        self.induced_subgraph(&vertices)
    }

    /// Induced subgraph on `subset`; vertices keep their relative order in
    /// `self` and their labels.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<Graph> {
        let mut vertices = subset.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        if let Some(&bad) = vertices.iter().find(|&&v| v >= self.vertex_count()) {
            self.check(bad)?;
        }
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        let edges: Vec<(usize, usize)> = vertices
            .iter()
            .enumerate()
            .flat_map(|(i, &v)| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| position[w] != usize::MAX && position[w] > i)
                    .map(|&w| (i, position[w]))
                    .collect::<Vec<_>>()
            })
            .collect();
        Graph::new(labels, edges)
    }

    /// Length of the shortest odd cycle; `Infinite` iff the graph is bipartite.
    pub fn odd_girth(&self) -> Distance {
        // A same-level edge in the BFS tree from v closes an odd walk of
        // length 2d+1, and the shortest odd cycle is realized this way from
        // any of its own vertices.
        let mut best: Option<usize> = None;
        for v in 0..self.vertex_count() {
            let dist = self.distances_from(v, None);
            for (a, b) in self.edges() {
                if let (Some(da), Some(db)) = (dist[a], dist[b]) {
                    if da == db {
                        let len = 2 * da + 1;
                        best = Some(best.map_or(len, |x: usize| x.min(len)));
                    }
                }
            }
        }
        best.map_or(Distance::Infinite, Distance::Finite)
    }

    pub fn has_isolated_vertices(&self) -> bool {
        self.adj.iter().any(Vec::is_empty)
    }

    pub(crate) fn require_no_isolated(&self, what: &str) -> Result<()> {
        match self.adj.iter().position(Vec::is_empty) {
            Some(v) => Err(Error::Precondition(format!(
                "{what} has isolated vertex {}",
                self.labels[v]
            ))),
            None => Ok(()),
        }
    }
}
