//! Graphs, blocks and designs.
//!
//! Vertices are dense non-negative integers. Named vertices from external
//! sources are mapped to integers when a design is built, and the mapping is
//! kept in the design's comment lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// An undirected edge stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    /// Panics on a loop; loops never occur in simple graphs.
    pub fn new(u: Vertex, v: Vertex) -> Edge {
        assert_ne!(u, v, "loop edge ({u},{u})");
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn u(self) -> Vertex {
        self.0
    }

    pub fn v(self) -> Vertex {
        self.1
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint that is not `x`.
    pub fn other(self, x: Vertex) -> Vertex {
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.0, self.1)
    }
}

/// A simple undirected graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn with_vertices(vertices: impl IntoIterator<Item = Vertex>) -> Graph {
        Graph {
            vertices: vertices.into_iter().collect(),
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from an edge list; endpoints are added to the vertex set.
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Graph {
        let mut g = Graph::new();
        for e in edges {
            g.add_edge(e);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.vertices.insert(v);
    }

    /// Returns false when the edge was already present.
    pub fn add_edge(&mut self, e: Edge) -> bool {
        self.vertices.insert(e.u());
        self.vertices.insert(e.v());
        self.edges.insert(e)
    }

    pub fn remove_edge(&mut self, e: Edge) -> bool {
        self.edges.remove(&e)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        self.edges
            .iter()
            .filter(|e| e.contains(v))
            .map(|e| e.other(v))
            .collect()
    }

    /// Adjacency lists keyed by vertex, neighbors in ascending order.
    pub fn adjacency(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.u()).unwrap().push(e.v());
            adj.get_mut(&e.v()).unwrap().push(e.u());
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    /// Connected components as vertex lists, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in &adj[&x] {
                    if seen.insert(y) {
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Union of edge and vertex sets.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        g.vertices.extend(other.vertices.iter().copied());
        g.edges.extend(other.edges.iter().copied());
        g
    }

    /// Maps every vertex through `f`; `f` must be injective on the vertex set.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Graph {
        Graph {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
            edges: self.edges.iter().map(|e| Edge::new(f(e.u()), f(e.v()))).collect(),
        }
    }
}

/// K_n on vertices `0..n`.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Usage("complete graph needs at least one vertex".into()));
    }
    Ok(complete_on(0..n))
}

/// Complete graph on an arbitrary vertex list.
pub fn complete_on(vertices: impl IntoIterator<Item = Vertex>) -> Graph {
    let vs: Vec<Vertex> = vertices.into_iter().collect();
    let mut g = Graph::with_vertices(vs.iter().copied());
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            g.add_edge(Edge::new(a, b));
        }
    }
    g
}

/// K_{m,n} with parts `0..m` and `m..m+n`.
pub fn complete_bipartite(m: usize, n: usize) -> Result<Graph> {
    if m == 0 || n == 0 {
        return Err(Error::Usage(format!(
            "complete bipartite graph needs non-empty parts, got K_{{{m},{n}}}"
        )));
    }
    Ok(complete_bipartite_on(0..m, m..m + n))
}

/// Complete bipartite graph between two disjoint vertex lists.
pub fn complete_bipartite_on(
    left: impl IntoIterator<Item = Vertex>,
    right: impl IntoIterator<Item = Vertex>,
) -> Graph {
    let left: Vec<Vertex> = left.into_iter().collect();
    let right: Vec<Vertex> = right.into_iter().collect();
    let mut g = Graph::with_vertices(left.iter().chain(right.iter()).copied());
    for &a in &left {
        for &b in &right {
            g.add_edge(Edge::new(a, b));
        }
    }
    g
}

/// Removes the edges of `blocks` from `g`. Fails on the first absent or repeated edge.
pub fn graph_subtract(g: &Graph, blocks: &[Block]) -> Result<Graph> {
    let mut out = g.clone();
    for (i, b) in blocks.iter().enumerate() {
        for e in b.edges() {
            if !out.remove_edge(e) {
                return Err(Error::Precondition(format!(
                    "block {i} uses edge {e}, which is not in the graph"
                )));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeKind {
    Path,
    Cycle,
}

/// P_k (k vertices, k-1 edges) or C_k (k vertices, k edges).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockShape {
    pub kind: ShapeKind,
    pub k: usize,
}

impl BlockShape {
    pub fn path(k: usize) -> BlockShape {
        assert!(k >= 2, "P_{k} is not a path");
        BlockShape { kind: ShapeKind::Path, k }
    }

    pub fn cycle(k: usize) -> BlockShape {
        assert!(k >= 3, "C_{k} is not a cycle");
        BlockShape { kind: ShapeKind::Cycle, k }
    }

    pub fn edge_count(self) -> usize {
        match self.kind {
            ShapeKind::Path => self.k - 1,
            ShapeKind::Cycle => self.k,
        }
    }

    /// True when this shape contains a P_4 subgraph.
    pub fn contains_p4(self) -> bool {
        self.k >= 4
    }

    pub fn parse(s: &str) -> Result<BlockShape> {
        let s = s.trim();
        let (kind, rest) = match s.chars().next() {
            Some('P' | 'p') => (ShapeKind::Path, &s[1..]),
            Some('C' | 'c') => (ShapeKind::Cycle, &s[1..]),
            _ => return Err(Error::Usage(format!("unknown shape '{s}'"))),
        };
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let k: usize = rest
            .parse()
            .map_err(|_| Error::Usage(format!("bad shape size in '{s}'")))?;
        match kind {
            ShapeKind::Path if k >= 2 => Ok(BlockShape::path(k)),
            ShapeKind::Cycle if k >= 3 => Ok(BlockShape::cycle(k)),
            _ => Err(Error::Usage(format!("shape '{s}' is too small"))),
        }
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ShapeKind::Path => write!(f, "P{}", self.k),
            ShapeKind::Cycle => write!(f, "C{}", self.k),
        }
    }
}

/// A path `[a1,...,ak]` or cycle `(a1,...,ak)`.
///
/// Vertex lists are canonicalized on construction: a path keeps the
/// lexicographically smaller of its two orientations, a cycle the smallest
/// of its rotations and reflections. Blocks with repeated vertices can be
/// represented so that the verifier can report them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    kind: ShapeKind,
    vertices: Vec<Vertex>,
}

impl Block {
    pub fn path(vertices: Vec<Vertex>) -> Block {
        let mut rev = vertices.clone();
        rev.reverse();
        Block {
            kind: ShapeKind::Path,
            vertices: vertices.min(rev),
        }
    }

    pub fn cycle(vertices: Vec<Vertex>) -> Block {
        let n = vertices.len();
        let mut best = vertices.clone();
        let mut rev = vertices.clone();
        rev.reverse();
        for base in [&vertices, &rev] {
            for r in 0..n {
                let rot: Vec<Vertex> = (0..n).map(|i| base[(i + r) % n]).collect();
                if rot < best {
                    best = rot;
                }
            }
        }
        Block {
            kind: ShapeKind::Cycle,
            vertices: best,
        }
    }

    pub fn new(kind: ShapeKind, vertices: Vec<Vertex>) -> Block {
        match kind {
            ShapeKind::Path => Block::path(vertices),
            ShapeKind::Cycle => Block::cycle(vertices),
        }
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_distinct_vertices(&self) -> bool {
        let set: BTreeSet<_> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }

    /// True when the block is a well-formed copy of `shape`.
    pub fn matches(&self, shape: BlockShape) -> bool {
        self.kind == shape.kind && self.vertices.len() == shape.k && self.has_distinct_vertices()
    }

    /// Edges in traversal order. A degenerate block may yield loops, which
    /// are skipped.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (self.vertices[i], self.vertices[i + 1]);
            if a != b {
                out.push(Edge::new(a, b));
            }
        }
        if self.kind == ShapeKind::Cycle && n >= 3 && self.vertices[0] != self.vertices[n - 1] {
            out.push(Edge::new(self.vertices[n - 1], self.vertices[0]));
        }
        out
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().into_iter().collect()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Number of block edges incident to `v`.
    pub fn degree_of(&self, v: Vertex) -> usize {
        self.edges().iter().filter(|e| e.contains(v)).count()
    }

    /// True when every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Block) -> bool {
        let theirs = other.edge_set();
        self.edges().iter().all(|e| theirs.contains(e))
    }

    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Block {
        Block::new(self.kind, self.vertices.iter().map(|&v| f(v)).collect())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        match self.kind {
            ShapeKind::Path => write!(f, "[{}]", body.join(",")),
            ShapeKind::Cycle => write!(f, "({})", body.join(",")),
        }
    }
}

/// How a design's host graph is described.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Host {
    /// K_n on `0..n`.
    Complete(usize),
    /// K_{m,n} with parts `0..m` and `m..m+n`.
    Bipartite(usize, usize),
    /// Explicit edge list.
    Edges(Graph),
}

impl Host {
    pub fn graph(&self) -> Result<Graph> {
        match self {
            Host::Complete(n) => complete_graph(*n),
            Host::Bipartite(m, n) => complete_bipartite(*m, *n),
            Host::Edges(g) => Ok(g.clone()),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Host::Complete(n) => n * n.saturating_sub(1) / 2,
            Host::Bipartite(m, n) => m * n,
            Host::Edges(g) => g.edge_count(),
        }
    }

    /// Number of vertices of K_n hosts; `None` otherwise.
    pub fn order(&self) -> Option<usize> {
        match self {
            Host::Complete(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Host::Complete(n) => write!(f, "K_{n}"),
            Host::Bipartite(m, n) => write!(f, "K_{{{m},{n}}}"),
            Host::Edges(g) => write!(f, "graph with {} edges", g.edge_count()),
        }
    }
}

/// A host graph, a block shape, and the blocks claimed to partition the host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    pub host: Host,
    pub shape: BlockShape,
    pub blocks: Vec<Block>,
    /// Free-form provenance lines, serialized as `#` comments.
    pub comments: Vec<String>,
}

impl Design {
    pub fn new(host: Host, shape: BlockShape, blocks: Vec<Block>) -> Design {
        Design {
            host,
            shape,
            blocks,
            comments: Vec::new(),
        }
    }

    pub fn with_comment(mut self, line: impl Into<String>) -> Design {
        self.comments.push(line.into());
        self
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block equal to `b` (after canonicalization), if any.
    pub fn position(&self, b: &Block) -> Option<usize> {
        self.blocks.iter().position(|x| x == b)
    }

    pub fn relabel(&self, host: Host, f: impl Fn(Vertex) -> Vertex + Copy) -> Design {
        Design {
            host,
            shape: self.shape,
            blocks: self.blocks.iter().map(|b| b.relabel(f)).collect(),
            comments: self.comments.clone(),
        }
    }
}

/// A per-block map from a domain design onto a codomain design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownLink {
    pub domain: Design,
    pub codomain: Design,
    /// `(domain block index, codomain block index)` pairs.
    pub map: Vec<(usize, usize)>,
}

impl DownLink {
    /// True when no two domain blocks share an image.
    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map.iter().all(|&(_, j)| seen.insert(j))
    }

    pub fn image_of(&self, i: usize) -> Option<usize> {
        self.map.iter().find(|&&(d, _)| d == i).map(|&(_, j)| j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_edge_counts() {
        assert_eq!(complete_graph(1).unwrap().edge_count(), 0);
        assert_eq!(complete_graph(1).unwrap().vertex_count(), 1);
        assert_eq!(complete_graph(4).unwrap().edge_count(), 6);
        assert_eq!(complete_graph(24).unwrap().edge_count(), 276);
        assert!(matches!(complete_graph(0), Err(Error::Usage(_))));
    }

    #[test]
    fn complete_bipartite_edge_counts() {
        let g = complete_bipartite(1, 1).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![Edge::new(0, 1)]);
        assert_eq!(complete_bipartite(3, 4).unwrap().edge_count(), 12);
        let g = complete_bipartite(9, 24).unwrap();
        assert_eq!(g.edge_count(), 216);
        assert!(g.edges().all(|e| e.u() < 9 && e.v() >= 9));
        assert!(complete_bipartite(0, 3).is_err());
        assert!(complete_bipartite(3, 0).is_err());
    }

    #[test]
    fn subtract_path_from_k4() {
        let k4 = complete_graph(4).unwrap();
        let r = graph_subtract(&k4, &[Block::path(vec![0, 1, 2, 3])]).unwrap();
        let es: Vec<_> = r.edges().collect();
        assert_eq!(es, vec![Edge::new(0, 2), Edge::new(0, 3), Edge::new(1, 3)]);
        assert_eq!(r.vertex_count(), 4);
        let k3 = complete_graph(3).unwrap();
        assert_eq!(graph_subtract(&k3, &[]).unwrap(), k3);
    }

    #[test]
    fn subtract_missing_edge_names_it() {
        let k3 = complete_graph(3).unwrap();
        let err = graph_subtract(&k3, &[Block::path(vec![0, 1, 5])]).unwrap_err();
        assert!(err.to_string().contains("[1,5]"), "{err}");
    }

    #[test]
    fn canonical_orientation() {
        assert_eq!(Block::path(vec![3, 2, 1, 0]).vertices(), &[0, 1, 2, 3]);
        assert_eq!(Block::path(vec![1, 0, 2]).vertices(), &[1, 0, 2]);
        assert_eq!(Block::cycle(vec![5, 2, 9, 1]).vertices(), &[1, 5, 2, 9]);
        assert_eq!(Block::cycle(vec![1, 9, 2, 5]), Block::cycle(vec![2, 9, 1, 5]));
    }

    #[test]
    fn block_edges() {
        assert_eq!(Block::path(vec![0, 1, 2, 3]).edges().len(), 3);
        assert_eq!(Block::cycle(vec![0, 1, 2]).edges().len(), 3);
        assert!(Block::path(vec![1, 2, 3]).is_subgraph_of(&Block::path(vec![0, 1, 2, 3])));
        assert!(!Block::path(vec![0, 2, 3]).is_subgraph_of(&Block::path(vec![0, 1, 2, 3])));
    }

    #[test]
    fn shape_parsing() {
        assert_eq!(BlockShape::parse("P4").unwrap(), BlockShape::path(4));
        assert_eq!(BlockShape::parse("P_5").unwrap(), BlockShape::path(5));
        assert_eq!(BlockShape::parse("C4").unwrap(), BlockShape::cycle(4));
        assert!(BlockShape::parse("C2").is_err());
        assert!(BlockShape::parse("X4").is_err());
        assert_eq!(BlockShape::path(5).edge_count(), 4);
        assert_eq!(BlockShape::cycle(5).edge_count(), 5);
    }
}
