//! Difference families over Z_v, cyclic development, and small orbit
//! constructions used to populate the base-design catalog.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Block, BlockShape, Design, Host, ShapeKind, Vertex};
use crate::verify::{verify_design, VerificationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceFamily {
    pub v: usize,
    pub shape: BlockShape,
    pub base_blocks: Vec<Block>,
}

/// Ordered differences x−y over the adjacent pairs of every base block.
pub fn differences(df: &DifferenceFamily) -> Vec<usize> {
    let v = df.v;
    let mut out = Vec::new();
    for b in &df.base_blocks {
        for e in b.edges() {
            let (x, y) = (e.u() % v, e.v() % v);
            out.push((x + v - y) % v);
            out.push((y + v - x) % v);
        }
    }
    out
}

pub fn verify_difference_family(df: &DifferenceFamily) -> VerificationReport {
    let mut report = VerificationReport::default();
    let mut count = vec![0usize; df.v];
    for (i, b) in df.base_blocks.iter().enumerate() {
        if !b.matches(df.shape) {
            report.push(Violation::BadBlockShape { block: i });
        }
    }
    for d in differences(df) {
        count[d] += 1;
    }
    for (d, &c) in count.iter().enumerate() {
        let want = usize::from(d != 0);
        if c != want {
            report.push(Violation::DifferenceCount { difference: d, count: c });
        }
    }
    report
}

/// Base cycles C^a = (0, a, (v+1)/2, (v−1)/8 + a) for a = 1..(v−1)/8.
pub fn c4_difference_family(v: usize) -> Result<DifferenceFamily> {
    if v <= 1 || v % 8 != 1 {
        return Err(Error::Usage(format!("C_4 difference families need v ≡ 1 (mod 8), v > 1; got {v}")));
    }
    let m = (v - 1) / 8;
    let base_blocks = (1..=m)
        .map(|a| Block::cycle(vec![0, a, (v + 1) / 2, m + a]))
        .collect();
    Ok(DifferenceFamily {
        v,
        shape: BlockShape::cycle(4),
        base_blocks,
    })
}

pub fn translate(b: &Block, s: usize, v: usize) -> Block {
    b.relabel(|x| (x + s) % v)
}

/// All translates B + g, g ∈ Z_v, of the base blocks, as a design on K_v.
pub fn develop(df: &DifferenceFamily) -> Result<Design> {
    let report = verify_difference_family(df);
    if !report.valid() {
        return Err(Error::Precondition(format!("not a difference family: {report}")));
    }
    let mut seen = BTreeSet::new();
    let mut blocks = Vec::with_capacity(df.v * df.base_blocks.len());
    for b in &df.base_blocks {
        for g in 0..df.v {
            let t = translate(b, g, df.v);
            if !seen.insert(t.clone()) {
                return Err(Error::Precondition(format!("short orbit: {t} repeats on development")));
            }
            blocks.push(t);
        }
    }
    let design = Design::new(Host::Complete(df.v), df.shape, blocks);
    let r = verify_design(&design);
    if !r.valid() {
        return Err(Error::Internal(format!("developed family is not a design: {r}")));
    }
    Ok(design)
}

/// Hamiltonian cycle decomposition of K_n for odd n (Walecki). Vertex
/// n−1 is fixed; the others are Z_{n−1} and cycle i is the zigzag
/// ∞, i, i+1, i−1, i+2, i−2, …, i+(n−1)/2.
pub fn walecki(n: usize) -> Result<Design> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Usage(format!("Hamiltonian decompositions of K_n need odd n ≥ 3; got {n}")));
    }
    let m = n - 1;
    let blocks = (0..m / 2)
        .map(|i| {
            let mut vs = vec![m, i];
            for j in 1..=m / 2 {
                vs.push((i + j) % m);
                if j < m / 2 {
                    vs.push((i + m - j) % m);
                }
            }
            Block::cycle(vs)
        })
        .collect();
    let d = Design::new(Host::Complete(n), BlockShape::cycle(n), blocks);
    let r = verify_design(&d);
    if !r.valid() {
        return Err(Error::Internal(format!("Walecki construction failed: {r}")));
    }
    Ok(d)
}

/// Point set Z_g × {0..levels} plus an optional fixed point, acted on by
/// Z_g. Point (l, x) has id l·g + x; the fixed point has id levels·g.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitSpace {
    pub modulus: usize,
    pub levels: usize,
    pub fixed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeOrbit {
    /// Both ends on level l, difference ±d with 1 ≤ d ≤ g/2.
    Pure(usize, usize),
    /// From level l1 to level l2 > l1, difference x2 − x1.
    Mixed(usize, usize, usize),
    /// Fixed point to level l.
    Fixed(usize),
}

impl OrbitSpace {
    pub fn new(modulus: usize, levels: usize, fixed: bool) -> Result<OrbitSpace> {
        if modulus % 2 == 0 || modulus < 3 || levels == 0 {
            return Err(Error::Usage("orbit spaces need an odd modulus ≥ 3 and a level".into()));
        }
        Ok(OrbitSpace { modulus, levels, fixed })
    }

    pub fn order(&self) -> usize {
        self.modulus * self.levels + usize::from(self.fixed)
    }

    pub fn infinity(&self) -> Option<Vertex> {
        self.fixed.then_some(self.modulus * self.levels)
    }

    fn split(&self, p: Vertex) -> Option<(usize, usize)> {
        (p < self.modulus * self.levels).then(|| (p / self.modulus, p % self.modulus))
    }

    pub fn translate(&self, p: Vertex, s: usize) -> Vertex {
        match self.split(p) {
            Some((l, x)) => l * self.modulus + (x + s) % self.modulus,
            None => p,
        }
    }

    pub fn orbit(&self, a: Vertex, b: Vertex) -> EdgeOrbit {
        let g = self.modulus;
        match (self.split(a), self.split(b)) {
            (Some((la, xa)), Some((lb, xb))) if la == lb => {
                let d = (xb + g - xa) % g;
                EdgeOrbit::Pure(la, d.min(g - d))
            }
            (Some((la, xa)), Some((lb, xb))) => {
                let ((l1, x1), (l2, x2)) = if la < lb { ((la, xa), (lb, xb)) } else { ((lb, xb), (la, xa)) };
                EdgeOrbit::Mixed(l1, l2, (x2 + g - x1) % g)
            }
            (Some((l, _)), None) | (None, Some((l, _))) => EdgeOrbit::Fixed(l),
            (None, None) => unreachable!("an edge needs two points"),
        }
    }

    /// Every edge orbit of the complete graph on the space.
    pub fn complete_orbits(&self) -> Vec<EdgeOrbit> {
        let g = self.modulus;
        let mut out = Vec::new();
        for l in 0..self.levels {
            out.extend((1..=g / 2).map(|d| EdgeOrbit::Pure(l, d)));
            for l2 in l + 1..self.levels {
                out.extend((0..g).map(|d| EdgeOrbit::Mixed(l, l2, d)));
            }
            if self.fixed {
                out.push(EdgeOrbit::Fixed(l));
            }
        }
        out
    }

    pub fn develop(&self, base: &[Block]) -> Vec<Block> {
        base.iter()
            .flat_map(|b| (0..self.modulus).map(move |s| b.relabel(|p| self.translate(p, s))))
            .collect()
    }
}

/// Search for base blocks whose edges meet each orbit in `orbits` once.
///
/// `accept` sees the finished list of base blocks as vertex sequences and
/// can reject it (for example to force a vertex to be an endpoint).
pub fn orbit_search(
    space: OrbitSpace,
    orbits: &[EdgeOrbit],
    shape: BlockShape,
    seed: u64,
    max_nodes: u64,
    accept: &dyn Fn(&[Vec<Vertex>]) -> bool,
) -> Option<Vec<Vec<Vertex>>> {
    let per = shape.edge_count();
    if orbits.is_empty() || orbits.len() % per != 0 {
        return None;
    }
    let index: BTreeMap<EdgeOrbit, usize> = orbits.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut s = OrbitSearch {
        space,
        shape,
        index,
        used: vec![false; orbits.len()],
        blocks: Vec::new(),
        nodes: 0,
        max_nodes,
        rng: ChaCha8Rng::seed_from_u64(seed),
        accept,
        total: orbits.len() / per,
    };
    s.next_block().then(|| s.blocks.clone())
}

struct OrbitSearch<'a> {
    space: OrbitSpace,
    shape: BlockShape,
    index: BTreeMap<EdgeOrbit, usize>,
    used: Vec<bool>,
    blocks: Vec<Vec<Vertex>>,
    nodes: u64,
    max_nodes: u64,
    rng: ChaCha8Rng,
    accept: &'a dyn Fn(&[Vec<Vertex>]) -> bool,
    total: usize,
}

impl OrbitSearch<'_> {
    fn orbit_id(&self, a: Vertex, b: Vertex) -> Option<usize> {
        self.index.get(&self.space.orbit(a, b)).copied().filter(|&i| !self.used[i])
    }

    fn next_block(&mut self) -> bool {
        if self.blocks.len() == self.total {
            return (self.accept)(&self.blocks);
        }
        // Every block can be translated so that some level point sits at x = 0.
        let mut starts: Vec<Vertex> = (0..self.space.levels).map(|l| l * self.space.modulus).collect();
        starts.extend(self.space.infinity());
        for st in starts {
            let mut cur = vec![st];
            if self.extend(&mut cur) {
                return true;
            }
        }
        false
    }

    fn extend(&mut self, cur: &mut Vec<Vertex>) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return false;
        }
        let k = self.shape.k;
        if cur.len() == k {
            let closing = match self.shape.kind {
                ShapeKind::Path => None,
                ShapeKind::Cycle => match self.orbit_id(cur[k - 1], cur[0]) {
                    Some(i) => Some(i),
                    None => return false,
                },
            };
            if let Some(i) = closing {
                self.used[i] = true;
            }
            self.blocks.push(cur.clone());
            if self.next_block() {
                return true;
            }
            self.blocks.pop();
            if let Some(i) = closing {
                self.used[i] = false;
            }
            return false;
        }
        let last = *cur.last().unwrap();
        let anchored = cur.iter().any(|&p| self.space.split(p).is_some());
        let mut cands: Vec<Vertex> = (0..self.space.order())
            .filter(|p| !cur.contains(p))
            // A block that starts at the fixed point anchors its next vertex at x = 0.
            .filter(|&p| anchored || self.space.split(p).is_some_and(|(_, x)| x == 0))
            .collect();
        cands.shuffle(&mut self.rng);
        for p in cands {
            let Some(i) = self.orbit_id(last, p) else { continue };
            self.used[i] = true;
            cur.push(p);
            if self.extend(cur) {
                return true;
            }
            cur.pop();
            self.used[i] = false;
            if self.nodes > self.max_nodes {
                return false;
            }
        }
        false
    }
}

/// Retries [`orbit_search`] over consecutive seeds until one succeeds.
pub fn orbit_search_restarts(
    space: OrbitSpace,
    orbits: &[EdgeOrbit],
    shape: BlockShape,
    seed: u64,
    attempts: u64,
    max_nodes: u64,
    accept: &dyn Fn(&[Vec<Vertex>]) -> bool,
) -> Option<Vec<Vec<Vertex>>> {
    (0..attempts).find_map(|i| orbit_search(space, orbits, shape, seed + i, max_nodes, accept))
}

/// A (K_n, shape)-design from base blocks over an orbit space of order n.
pub fn orbit_design(space: OrbitSpace, shape: BlockShape, base: &[Vec<Vertex>]) -> Result<Design> {
    let base: Vec<Block> = base.iter().map(|b| Block::new(shape.kind, b.clone())).collect();
    let d = Design::new(Host::Complete(space.order()), shape, space.develop(&base));
    let r = verify_design(&d);
    if !r.valid() {
        return Err(Error::Internal(format!("orbit base blocks do not develop into a design: {r}")));
    }
    Ok(d)
}

/// (K_16, P_13)-design on Z_5 × {0,1,2} ∪ {∞} from two base paths.
pub fn k16_p13() -> Result<Design> {
    let space = OrbitSpace::new(5, 3, true)?;
    let shape = BlockShape::path(13);
    let base = orbit_search_restarts(space, &space.complete_orbits(), shape, 1, 64, 200_000, &|_| true)
        .ok_or_else(|| Error::Internal("no base paths for (K_16, P_13)".into()))?;
    orbit_design(space, shape, &base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(v: usize, base: Vec<Vec<usize>>, shape: BlockShape) -> DifferenceFamily {
        DifferenceFamily {
            v,
            shape,
            base_blocks: base.into_iter().map(|b| Block::new(shape.kind, b)).collect(),
        }
    }

    #[test]
    fn small_families() {
        let c4 = BlockShape::cycle(4);
        assert!(verify_difference_family(&family(9, vec![vec![0, 1, 5, 2]], c4)).valid());
        let bad = family(9, vec![vec![0, 1, 2, 3]], c4);
        assert!(!verify_difference_family(&bad).valid());
        assert!(matches!(develop(&bad), Err(Error::Precondition(_))));
        let f25 = family(25, vec![vec![0, 1, 13, 4], vec![0, 2, 13, 5], vec![0, 3, 13, 6]], c4);
        assert!(verify_difference_family(&f25).valid());
        assert_eq!(c4_difference_family(25).unwrap(), f25);
    }

    #[test]
    fn c4_families_develop() {
        assert_eq!(c4_difference_family(9).unwrap().base_blocks, vec![Block::cycle(vec![0, 1, 5, 2])]);
        assert_eq!(c4_difference_family(17).unwrap().base_blocks.len(), 2);
        for v in (9..=73).step_by(8) {
            let df = c4_difference_family(v).unwrap();
            let d = develop(&df).unwrap();
            assert_eq!(d.blocks.len(), v * (v - 1) / 8);
        }
        assert!(c4_difference_family(10).is_err());
    }

    #[test]
    fn differences_are_symmetric() {
        let df = c4_difference_family(33).unwrap();
        let ds = differences(&df);
        let mut neg: Vec<usize> = ds.iter().map(|&d| (33 - d) % 33).collect();
        let mut pos = ds.clone();
        neg.sort();
        pos.sort();
        assert_eq!(neg, pos);
    }

    #[test]
    fn walecki_cycles() {
        for n in [3, 5, 7, 9, 13] {
            assert_eq!(walecki(n).unwrap().blocks.len(), (n - 1) / 2);
        }
        assert!(walecki(8).is_err());
    }

    #[test]
    fn orbit_constructions() {
        let space = OrbitSpace::new(7, 1, true).unwrap();
        let p5 = BlockShape::path(5);
        let base = orbit_search(space, &space.complete_orbits(), p5, 0, 100_000, &|_| true).unwrap();
        assert_eq!(orbit_design(space, p5, &base).unwrap().blocks.len(), 7);
        let d = k16_p13().unwrap();
        assert_eq!(d.blocks.len(), 10);
    }

    #[test]
    fn orbit_classes() {
        let s = OrbitSpace::new(5, 3, true).unwrap();
        assert_eq!(s.complete_orbits().len(), 24);
        assert_eq!(s.orbit(0, 4), EdgeOrbit::Pure(0, 1));
        assert_eq!(s.orbit(7, 1), EdgeOrbit::Mixed(0, 1, 1));
        assert_eq!(s.orbit(15, 12), EdgeOrbit::Fixed(2));
    }
}
