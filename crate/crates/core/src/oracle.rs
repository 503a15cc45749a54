//! Exhaustive backtracking search for path and cycle decompositions of
//! small graphs.
//!
//! The search always branches on the lowest-indexed uncovered edge and
//! enumerates every placement of the shape through it, so an `Infeasible`
//! verdict means the whole space was explored. Covered edges live in a
//! fixed-width bitmap indexed by canonical edge id. There is no isomorph
//! rejection; budgets bound the cost.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Block, BlockShape, Design, Edge, Graph, Host, ShapeKind, Vertex};
use crate::verify::verify_design;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
    /// Shuffles neighbor order; the same seed gives the same witness when
    /// `jobs == 1`.
    pub seed: u64,
    /// Worker threads. Values above one split the search on first-level
    /// branches.
    pub jobs: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 10_000_000,
            max_time: Duration::from_secs(60),
            seed: 0,
            jobs: 1,
        }
    }
}

impl SearchBudget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_nodes(mut self, n: u64) -> Self {
        self.max_nodes = n;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Found,
    Infeasible,
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub status: OracleStatus,
    pub witness: Option<Design>,
    pub nodes_explored: u64,
}

pub type PlacementFilter<'a> = dyn Fn(&[Vertex]) -> bool + Sync + 'a;
pub type DesignFilter<'a> = dyn Fn(&[Block]) -> bool + Sync + 'a;

/// Extra conditions a search must respect.
#[derive(Default, Clone, Copy)]
pub struct Constraints<'a> {
    /// Rejects a single placement (vertex sequence, in traversal order).
    pub placement: Option<&'a PlacementFilter<'a>>,
    /// Rejects a complete decomposition; the search then continues.
    pub accept: Option<&'a DesignFilter<'a>>,
}

/// Searches for a `shape`-decomposition of `g`.
pub fn find_decomposition(g: &Graph, shape: BlockShape, budget: SearchBudget) -> OracleOutcome {
    find_decomposition_with(g, shape, budget, Constraints::default())
}

pub fn find_decomposition_with(
    g: &Graph,
    shape: BlockShape,
    budget: SearchBudget,
    constraints: Constraints<'_>,
) -> OracleOutcome {
    let ec = shape.edge_count();
    if g.edge_count() % ec != 0 {
        return OracleOutcome {
            status: OracleStatus::Infeasible,
            witness: None,
            nodes_explored: 0,
        };
    }
    let problem = Problem::new(g, shape, budget.seed);
    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        max_nodes: budget.max_nodes,
        deadline: Instant::now() + budget.max_time,
        constraints,
    };
    let result = if budget.jobs <= 1 {
        let mut st = State::new(&problem, &shared);
        match st.search() {
            Flow::Found => Some(Ok(st.found.take().unwrap())),
            Flow::Abort => None,
            Flow::Continue => Some(Err(())),
        }
    } else {
        search_parallel(&problem, &shared, budget.jobs)
    };
    let nodes = shared.nodes.load(Ordering::Relaxed);
    match result {
        Some(Ok(blocks)) => {
            let witness = Design::new(Host::Edges(g.clone()), shape, blocks)
                .with_comment("found by exhaustive oracle search");
            let report = verify_design(&witness);
            assert!(report.valid(), "oracle produced an invalid witness: {report}");
            OracleOutcome {
                status: OracleStatus::Found,
                witness: Some(witness),
                nodes_explored: nodes,
            }
        }
        Some(Err(())) => OracleOutcome {
            status: OracleStatus::Infeasible,
            witness: None,
            nodes_explored: nodes,
        },
        None => OracleOutcome {
            status: OracleStatus::Exhausted,
            witness: None,
            nodes_explored: nodes,
        },
    }
}

/// Searches for `leftover` edges whose removal leaves a `shape`-decomposable
/// graph. Leftover sets are tried in lexicographic order of edge ids.
pub fn find_with_leftover(
    g: &Graph,
    shape: BlockShape,
    leftover: usize,
    budget: SearchBudget,
) -> Option<(Vec<Block>, Vec<Edge>)> {
    let edges: Vec<Edge> = g.edges().collect();
    if edges.len() < leftover || (edges.len() - leftover) % shape.edge_count() != 0 {
        return None;
    }
    let mut chosen: Vec<usize> = (0..leftover).collect();
    loop {
        let mut rest = g.clone();
        for &i in &chosen {
            rest.remove_edge(edges[i]);
        }
        let out = find_decomposition(&rest, shape, budget);
        if let Some(w) = out.witness {
            return Some((w.blocks, chosen.iter().map(|&i| edges[i]).collect()));
        }
        // next combination
        let n = edges.len();
        let mut i = leftover;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if chosen[i] < n - leftover + i {
                chosen[i] += 1;
                for j in i + 1..leftover {
                    chosen[j] = chosen[j - 1] + 1;
                }
                break;
            }
        }
    }
}

type CatalogKey = (BlockShape, usize, Vec<(usize, usize)>);

fn gadget_catalog() -> &'static Mutex<HashMap<CatalogKey, Option<Vec<Block>>>> {
    static CATALOG: OnceLock<Mutex<HashMap<CatalogKey, Option<Vec<Block>>>>> = OnceLock::new();
    CATALOG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Largest gadget the catalog accepts.
pub const MAX_GADGET_EDGES: usize = 24;

/// Decomposes one of the small remnant graphs the constructions produce.
///
/// The answer is computed once by the oracle and memoized, keyed by the
/// graph relabeled order-preservingly onto `0..n`. An infeasible or
/// undecided gadget is an internal-consistency failure.
pub fn certify_claimed_graph(g: &Graph, shape: BlockShape) -> Result<Design> {
    certify_with_leftover(g, shape, 0).map(|(d, _)| d)
}

/// Like [`certify_claimed_graph`] but allows `leftover` edges to remain
/// uncovered. Returns the design on the covered edges and the leftover.
pub fn certify_with_leftover(
    g: &Graph,
    shape: BlockShape,
    leftover: usize,
) -> Result<(Design, Vec<Edge>)> {
    if g.edge_count() > MAX_GADGET_EDGES {
        return Err(Error::Precondition(format!(
            "gadget has {} edges; the catalog only holds graphs with at most {MAX_GADGET_EDGES}",
            g.edge_count()
        )));
    }
    let verts: Vec<Vertex> = g.vertices().collect();
    let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let local = g.relabel(|v| index[&v]);
    let key_edges: Vec<(usize, usize)> = local.edges().map(|e| (e.u(), e.v())).collect();
    let key = (shape, leftover, key_edges);

    let cached = gadget_catalog().lock().unwrap().get(&key).cloned();
    let blocks = match cached {
        Some(b) => b,
        None => {
            let found = if leftover == 0 {
                find_decomposition(&local, shape, SearchBudget::default())
                    .witness
                    .map(|w| w.blocks)
            } else {
                find_with_leftover(&local, shape, leftover, SearchBudget::default()).map(|(b, _)| b)
            };
            gadget_catalog().lock().unwrap().insert(key, found.clone());
            found
        }
    };
    let blocks = blocks.ok_or_else(|| {
        Error::Internal(format!(
            "gadget with {} edges has no {shape}-decomposition (leftover {leftover})",
            g.edge_count()
        ))
    })?;
    let blocks: Vec<Block> = blocks.iter().map(|b| b.relabel(|i| verts[i])).collect();
    let mut rest = g.clone();
    for b in &blocks {
        for e in b.edges() {
            rest.remove_edge(e);
        }
    }
    let left: Vec<Edge> = rest.edges().collect();
    let mut host = g.clone();
    for &e in &left {
        host.remove_edge(e);
    }
    Ok((
        Design::new(Host::Edges(host), shape, blocks).with_comment("gadget catalog"),
        left,
    ))
}

struct Problem {
    shape: BlockShape,
    verts: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    /// Per local vertex: (neighbor, edge id), in seeded order.
    adj: Vec<Vec<(usize, usize)>>,
    /// Edge id lookup by local endpoints.
    edge_id: HashMap<(usize, usize), usize>,
}

impl Problem {
    fn new(g: &Graph, shape: BlockShape, seed: u64) -> Problem {
        let verts: Vec<Vertex> = g.vertices().collect();
        let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = g.edges().map(|e| (index[&e.u()], index[&e.v()])).collect();
        let mut adj = vec![Vec::new(); verts.len()];
        let mut edge_id = HashMap::new();
        for (id, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b, id));
            adj[b].push((a, id));
            edge_id.insert((a, b), id);
            edge_id.insert((b, a), id);
        }
        if seed != 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for list in &mut adj {
                list.shuffle(&mut rng);
            }
        }
        Problem {
            shape,
            verts,
            edges,
            adj,
            edge_id,
        }
    }
}

struct Shared<'a> {
    nodes: AtomicU64,
    stop: AtomicBool,
    max_nodes: u64,
    deadline: Instant,
    constraints: Constraints<'a>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Found,
    Continue,
    Abort,
}

struct State<'p, 's> {
    p: &'p Problem,
    shared: &'s Shared<'s>,
    covered: Vec<u64>,
    in_path: Vec<bool>,
    path: Vec<usize>,
    path_edges: Vec<usize>,
    placed: Vec<Vec<usize>>,
    found: Option<Vec<Block>>,
    local_nodes: u64,
}

impl<'p, 's> State<'p, 's> {
    fn new(p: &'p Problem, shared: &'s Shared<'s>) -> Self {
        State {
            p,
            shared,
            covered: vec![0; p.edges.len().div_ceil(64)],
            in_path: vec![false; p.verts.len()],
            path: Vec::new(),
            path_edges: Vec::new(),
            placed: Vec::new(),
            found: None,
            local_nodes: 0,
        }
    }

    fn is_covered(&self, e: usize) -> bool {
        self.covered[e / 64] >> (e % 64) & 1 == 1
    }

    fn set(&mut self, e: usize, on: bool) {
        if on {
            self.covered[e / 64] |= 1 << (e % 64);
        } else {
            self.covered[e / 64] &= !(1 << (e % 64));
        }
    }

    fn first_uncovered(&self) -> Option<usize> {
        for (w, &word) in self.covered.iter().enumerate() {
            if word != u64::MAX {
                let e = w * 64 + (!word).trailing_zeros() as usize;
                return (e < self.p.edges.len()).then_some(e);
            }
        }
        None
    }

    fn solution(&self) -> Vec<Block> {
        self.placed
            .iter()
            .map(|seq| Block::new(self.p.shape.kind, seq.iter().map(|&i| self.p.verts[i]).collect()))
            .collect()
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        let n = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.shared.max_nodes || self.shared.stop.load(Ordering::Relaxed) {
            return false;
        }
        if self.local_nodes % 1024 == 0 && Instant::now() > self.shared.deadline {
            return false;
        }
        true
    }

    fn search(&mut self) -> Flow {
        let Some(e) = self.first_uncovered() else {
            let sol = self.solution();
            if let Some(accept) = self.shared.constraints.accept {
                if !accept(&sol) {
                    return Flow::Continue;
                }
            }
            self.found = Some(sol);
            return Flow::Found;
        };
        self.place_through(e, &mut |st| st.search())
    }

    /// Enumerates every placement through edge `e`, calling `then` with the
    /// placement marked as covered and pushed onto `placed`.
    fn place_through(&mut self, e: usize, then: &mut dyn FnMut(&mut Self) -> Flow) -> Flow {
        let (u, w) = self.p.edges[e];
        self.set(e, true);
        self.in_path[u] = true;
        self.in_path[w] = true;
        self.path_edges.push(e);
        let k = self.p.shape.k;
        let flow = match self.p.shape.kind {
            ShapeKind::Path => {
                let mut flow = Flow::Continue;
                for left in 0..=k - 2 {
                    self.path.clear();
                    self.path.push(u);
                    flow = self.extend_left(left, k - 2 - left, w, then);
                    if flow != Flow::Continue {
                        break;
                    }
                }
                flow
            }
            ShapeKind::Cycle => {
                self.path.clear();
                self.path.push(u);
                self.path.push(w);
                self.extend_cycle(k - 2, u, then)
            }
        };
        self.path_edges.pop();
        self.in_path[u] = false;
        self.in_path[w] = false;
        self.set(e, false);
        flow
    }

    // `path` holds the left part reversed, ending at u; once complete it is
    // flipped and w plus the right part are appended.
    fn extend_left(
        &mut self,
        left: usize,
        right: usize,
        w: usize,
        then: &mut dyn FnMut(&mut Self) -> Flow,
    ) -> Flow {
        if left == 0 {
            self.path.reverse();
            self.path.push(w);
            let flow = self.extend_right(right, then);
            self.path.pop();
            self.path.reverse();
            return flow;
        }
        let tail = *self.path.last().unwrap();
        for i in 0..self.p.adj[tail].len() {
            let (x, id) = self.p.adj[tail][i];
            if self.in_path[x] || self.is_covered(id) {
                continue;
            }
            self.step_in(x, id);
            let flow = self.extend_left(left - 1, right, w, then);
            self.step_out(x, id);
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }

    fn extend_right(&mut self, right: usize, then: &mut dyn FnMut(&mut Self) -> Flow) -> Flow {
        if right == 0 {
            return self.commit(then);
        }
        let tail = *self.path.last().unwrap();
        for i in 0..self.p.adj[tail].len() {
            let (x, id) = self.p.adj[tail][i];
            if self.in_path[x] || self.is_covered(id) {
                continue;
            }
            self.step_in(x, id);
            let flow = self.extend_right(right - 1, then);
            self.step_out(x, id);
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }

    fn extend_cycle(
        &mut self,
        remaining: usize,
        start: usize,
        then: &mut dyn FnMut(&mut Self) -> Flow,
    ) -> Flow {
        let tail = *self.path.last().unwrap();
        if remaining == 0 {
            let Some(&close) = self.p.edge_id.get(&(tail, start)) else {
                return Flow::Continue;
            };
            if self.is_covered(close) {
                return Flow::Continue;
            }
            self.set(close, true);
            self.path_edges.push(close);
            let flow = self.commit(then);
            self.path_edges.pop();
            self.set(close, false);
            return flow;
        }
        for i in 0..self.p.adj[tail].len() {
            let (x, id) = self.p.adj[tail][i];
            if self.in_path[x] || self.is_covered(id) {
                continue;
            }
            self.step_in(x, id);
            let flow = self.extend_cycle(remaining - 1, start, then);
            self.step_out(x, id);
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }

    fn step_in(&mut self, x: usize, id: usize) {
        self.in_path[x] = true;
        self.set(id, true);
        self.path.push(x);
        self.path_edges.push(id);
    }

    fn step_out(&mut self, x: usize, id: usize) {
        self.in_path[x] = false;
        self.set(id, false);
        self.path.pop();
        self.path_edges.pop();
    }

    fn commit(&mut self, then: &mut dyn FnMut(&mut Self) -> Flow) -> Flow {
        if let Some(ok) = self.shared.constraints.placement {
            let seq: Vec<Vertex> = self.path.iter().map(|&i| self.p.verts[i]).collect();
            if !ok(&seq) {
                return Flow::Continue;
            }
        }
        if !self.tick() {
            return Flow::Abort;
        }
        // The placement's vertices stay marked in `in_path` while the
        // recursion runs; clear them so later blocks can reuse the vertices.
        let seq = self.path.clone();
        let saved_path = std::mem::take(&mut self.path);
        let saved_edges = std::mem::take(&mut self.path_edges);
        for &v in &seq {
            self.in_path[v] = false;
        }
        self.placed.push(seq.clone());
        let flow = then(self);
        self.placed.pop();
        for &v in &seq {
            self.in_path[v] = true;
        }
        self.path = saved_path;
        self.path_edges = saved_edges;
        flow
    }
}

fn search_parallel(problem: &Problem, shared: &Shared<'_>, jobs: usize) -> Option<Result<Vec<Block>, ()>> {
    // Collect first-level placements, then hand them out to workers.
    let Some(first) = State::new(problem, shared).first_uncovered() else {
        return Some(Ok(Vec::new()));
    };
    let mut roots: Vec<Vec<usize>> = Vec::new();
    {
        let mut st = State::new(problem, shared);
        st.place_through(first, &mut |st| {
            roots.push(st.placed.last().unwrap().clone());
            Flow::Continue
        });
    }
    let next = AtomicUsize::new(0);
    let aborted = AtomicBool::new(false);
    let found: Mutex<Option<Vec<Block>>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= roots.len() || shared.stop.load(Ordering::Relaxed) {
                    break;
                }
                let mut st = State::new(problem, shared);
                let root = &roots[i];
                let kind = problem.shape.kind;
                let mut ids = Vec::new();
                for j in 0..root.len() - 1 {
                    ids.push(problem.edge_id[&(root[j], root[j + 1])]);
                }
                if kind == ShapeKind::Cycle {
                    ids.push(problem.edge_id[&(root[root.len() - 1], root[0])]);
                }
                for &id in &ids {
                    st.set(id, true);
                }
                st.placed.push(root.clone());
                match st.search() {
                    Flow::Found => {
                        *found.lock().unwrap() = st.found.take();
                        shared.stop.store(true, Ordering::Relaxed);
                        break;
                    }
                    Flow::Abort => {
                        if !shared.stop.load(Ordering::Relaxed) {
                            aborted.store(true, Ordering::Relaxed);
                        }
                        break;
                    }
                    Flow::Continue => {}
                }
            });
        }
    });
    if let Some(sol) = found.into_inner().unwrap() {
        return Some(Ok(sol));
    }
    if aborted.load(Ordering::Relaxed) {
        None
    } else {
        Some(Err(()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, complete_graph};

    #[test]
    fn k7_has_p4_design() {
        let out = find_decomposition(&complete_graph(7).unwrap(), BlockShape::path(4), SearchBudget::default());
        assert_eq!(out.status, OracleStatus::Found);
        assert_eq!(out.witness.unwrap().blocks.len(), 7);
    }

    #[test]
    fn small_obstructions() {
        let p4 = BlockShape::path(4);
        let out = find_decomposition(&complete_graph(3).unwrap(), p4, SearchBudget::default());
        assert_eq!(out.status, OracleStatus::Infeasible);
        let out = find_decomposition(&complete_graph(5).unwrap(), p4, SearchBudget::default());
        assert_eq!(out.status, OracleStatus::Infeasible);
        assert_eq!(out.nodes_explored, 0);
    }

    #[test]
    fn cycles_and_bipartite() {
        let out = find_decomposition(&complete_graph(9).unwrap(), BlockShape::cycle(4), SearchBudget::default());
        assert_eq!(out.status, OracleStatus::Found);
        let out = find_decomposition(&complete_bipartite(3, 3).unwrap(), BlockShape::path(4), SearchBudget::default());
        assert_eq!(out.witness.unwrap().blocks.len(), 3);
        // K_4 has no C_3-design: 6 edges but every triangle pair shares an edge.
        let out = find_decomposition(&complete_graph(4).unwrap(), BlockShape::cycle(3), SearchBudget::default());
        assert_eq!(out.status, OracleStatus::Infeasible);
    }

    #[test]
    fn seeded_search_is_deterministic() {
        let g = complete_graph(9).unwrap();
        let b = SearchBudget::default().with_seed(42);
        let a = find_decomposition(&g, BlockShape::path(4), b).witness.unwrap();
        let c = find_decomposition(&g, BlockShape::path(4), b).witness.unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn parallel_verdicts_match() {
        let b = SearchBudget::default().with_jobs(4);
        let out = find_decomposition(&complete_graph(9).unwrap(), BlockShape::path(4), b);
        assert_eq!(out.status, OracleStatus::Found);
        let out = find_decomposition(&complete_graph(8).unwrap(), BlockShape::path(4), b);
        assert_eq!(out.status, OracleStatus::Infeasible);
    }

    #[test]
    fn node_budget_exhausts() {
        let g = complete_graph(12).unwrap();
        let out = find_decomposition(&g, BlockShape::path(4), SearchBudget::default().with_max_nodes(3));
        assert_eq!(out.status, OracleStatus::Exhausted);
    }

    #[test]
    fn accept_filter_continues_search() {
        let g = complete_graph(4).unwrap();
        let first = find_decomposition(&g, BlockShape::path(4), SearchBudget::default())
            .witness
            .unwrap()
            .blocks;
        let reject_first = |bs: &[Block]| bs != first.as_slice();
        let c = Constraints {
            accept: Some(&reject_first),
            ..Default::default()
        };
        let out = find_decomposition_with(&g, BlockShape::path(4), SearchBudget::default(), c);
        assert_eq!(out.status, OracleStatus::Found);
        assert_ne!(out.witness.unwrap().blocks, first);
    }

    #[test]
    fn leftover_search() {
        let g = complete_graph(5).unwrap();
        let (blocks, left) = find_with_leftover(&g, BlockShape::path(4), 1, SearchBudget::default()).unwrap();
        assert_eq!(blocks.len(), 3);
        assert_eq!(left.len(), 1);
    }
}
