//! Embedding a (K_n, P_k)-design, k even, into a (K_m, P_k)-design.
//!
//! With s = m − n new vertices, K_m = K_n ∪ K_s ∪ K_{n,s}. The vertex sets
//! are cut into groups of size k−1 (plus one group of size k or k−2
//! depending on the congruence classes of n and s) so that K_{n,s} splits
//! into slabs K_{k−1,k−1}, K_{k−1,k} and K_{k−1,k−2}.

use std::fmt;

use crate::bipartite::{decompose_k_bipartite, decompose_square_bipartite};
use crate::catalog::base_design;
use crate::error::{Error, Result};
use crate::graph::{complete_on, Block, BlockShape, Design, Graph, Host, ShapeKind, Vertex};
use crate::oracle::{find_decomposition, OracleStatus, SearchBudget};
use crate::verify::verify_design;

/// Which congruence case of (n, s) mod (k−1) the embedding used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bullet {
    /// n ≡ 0, s ≡ 0.
    One,
    /// n ≡ 0, s ≡ 1.
    Two,
    /// n ≡ 1, s ≡ 0.
    Three,
    /// n ≡ 1, s ≡ k−2.
    Four,
    /// n ≤ 1: the result is any design on K_m.
    Trivial,
}

impl fmt::Display for Bullet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bullet::One => write!(f, "bullet 1"),
            Bullet::Two => write!(f, "bullet 2"),
            Bullet::Three => write!(f, "bullet 3"),
            Bullet::Four => write!(f, "bullet 4"),
            Bullet::Trivial => write!(f, "trivial"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PkEmbedding {
    pub design: Design,
    pub bullet: Bullet,
    /// The complete part had fewer than k vertices and was merged with a slab.
    pub degenerate: bool,
    pub trace: Vec<String>,
}

fn groups(start: usize, sizes: &[usize]) -> Vec<Vec<Vertex>> {
    let mut at = start;
    sizes
        .iter()
        .map(|&s| {
            let g: Vec<Vertex> = (at..at + s).collect();
            at += s;
            g
        })
        .collect()
}

/// P_k-design of K_{X,Y} for |X|, |Y| ∈ {k−2, k−1, k} with one side k−1.
fn slab(k: usize, x: &[Vertex], y: &[Vertex]) -> Result<Vec<Block>> {
    let (a, b) = (x.len(), y.len());
    // Templates put their two parts at 0..p and p..p+q.
    let (template, first, second) = if a == k - 1 && b == k - 1 {
        (decompose_square_bipartite(k)?, x, y)
    } else if a == k - 1 {
        (decompose_k_bipartite(k, b)?, y, x)
    } else if b == k - 1 {
        (decompose_k_bipartite(k, a)?, x, y)
    } else {
        return Err(Error::Internal(format!("no slab K_{{{a},{b}}} for P_{k}")));
    };
    let p = first.len();
    Ok(template
        .blocks
        .iter()
        .map(|bl| bl.relabel(|v| if v < p { first[v] } else { second[v - p] }))
        .collect())
}

/// Decomposes a small graph with the oracle, trying a few seeds.
pub(crate) fn oracle_blocks(g: &Graph, shape: BlockShape) -> Result<Vec<Block>> {
    for seed in 0..16 {
        let budget = SearchBudget::default().with_seed(seed).with_max_nodes(2_000_000);
        let out = find_decomposition(g, shape, budget);
        match out.status {
            OracleStatus::Found => return Ok(out.witness.unwrap().blocks),
            OracleStatus::Infeasible => {
                return Err(Error::Internal(format!(
                    "graph with {} edges has no {shape}-decomposition",
                    g.edge_count()
                )))
            }
            OracleStatus::Exhausted => continue,
        }
    }
    Err(Error::Internal(format!("oracle budget exhausted on a {}-edge graph", g.edge_count())))
}

pub fn embed_pk(d: &Design, m: usize) -> Result<PkEmbedding> {
    let shape = d.shape;
    let k = shape.k;
    if shape.kind != ShapeKind::Path || k < 4 || k % 2 != 0 {
        return Err(Error::Usage(format!("embedding needs P_k with k even, k ≥ 4; got {shape}")));
    }
    let n = d
        .host
        .order()
        .ok_or_else(|| Error::Usage("the design must live on a complete graph".into()))?;
    let q = k - 1;
    if n % q > 1 || m % q > 1 {
        return Err(Error::Usage(format!("n and m must be ≡ 0,1 (mod {q}); got n={n}, m={m}")));
    }
    if m <= n + 1 {
        return Err(Error::Usage(format!("m must exceed n+1 = {}; got {m}", n + 1)));
    }
    let r = verify_design(d);
    if !r.valid() {
        return Err(Error::Precondition(format!("input design is invalid: {r}")));
    }
    let s = m - n;
    let mut trace = Vec::new();
    let mut blocks = d.blocks.clone();

    if n <= 1 {
        blocks.extend(base_design(shape, &Host::Complete(m))?.blocks);
        return finish(blocks, shape, m, Bullet::Trivial, false, trace);
    }

    let lambda = n / q;
    let (bullet, n_sizes, s_sizes, core_extra) = match (n % q, s % q) {
        (0, 0) => (Bullet::One, vec![q; lambda], vec![q; s / q], None),
        (0, 1) => {
            let mu = s / q;
            let mut ss = vec![k];
            ss.extend(vec![q; mu - 1]);
            (Bullet::Two, vec![q; lambda], ss, None)
        }
        (1, 0) => {
            let mut ns = vec![k];
            ns.extend(vec![q; lambda - 1]);
            (Bullet::Three, ns, vec![q; s / q], None)
        }
        (1, r) if r == k - 2 => {
            let mut ss = vec![k - 2];
            ss.extend(vec![q; s / q]);
            // The last old vertex joins K_s.
            (Bullet::Four, vec![q; lambda], ss, Some(n - 1))
        }
        _ => {
            return Err(Error::Internal(format!("no case for n={n}, s={s} mod {q}")));
        }
    };
    trace.push(format!("{bullet}: n={n}, s={s}"));
    let n_groups = groups(0, &n_sizes);
    let s_groups = groups(n, &s_sizes);
    let mut core: Vec<Vertex> = (n..m).collect();
    core.extend(core_extra);
    core.sort_unstable();

    let mut slabs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n_groups.len() {
        for j in 0..s_groups.len() {
            slabs.push((i, j));
        }
    }
    let degenerate = core.len() == q;
    if degenerate {
        // K_{k−1} has no P_k-design; take it together with the first slab.
        let (i, j) = slabs.remove(0);
        let mut g = complete_on(core.iter().copied());
        for &a in &n_groups[i] {
            for &b in &s_groups[j] {
                g.add_edge(crate::graph::Edge::new(a, b));
            }
        }
        trace.push(format!(
            "K_{} merged with K_{{{},{}}} ({} edges, oracle)",
            core.len(),
            n_groups[i].len(),
            s_groups[j].len(),
            g.edge_count()
        ));
        blocks.extend(oracle_blocks(&g, shape)?);
    } else {
        let base = base_design(shape, &Host::Complete(core.len()))?;
        trace.push(format!("K_{} from the base catalog", core.len()));
        blocks.extend(base.blocks.iter().map(|b| b.relabel(|v| core[v])));
    }
    for (i, j) in slabs {
        blocks.extend(slab(k, &n_groups[i], &s_groups[j])?);
    }
    finish(blocks, shape, m, bullet, degenerate, trace)
}

fn finish(
    blocks: Vec<Block>,
    shape: BlockShape,
    m: usize,
    bullet: Bullet,
    degenerate: bool,
    trace: Vec<String>,
) -> Result<PkEmbedding> {
    let design = Design::new(Host::Complete(m), shape, blocks);
    let r = verify_design(&design);
    if !r.valid() {
        return Err(Error::Internal(format!("embedding into K_{m} failed ({bullet}): {r}")));
    }
    Ok(PkEmbedding { design, bullet, degenerate, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4(n: usize) -> Design {
        base_design(BlockShape::path(4), &Host::Complete(n)).unwrap()
    }

    #[test]
    fn p4_bullets() {
        for (n, m, bullet, degenerate) in [
            (9, 13, Bullet::Two, false),
            (4, 6, Bullet::Four, true),
            (6, 9, Bullet::One, true),
            (6, 12, Bullet::One, false),
            (7, 13, Bullet::Three, false),
            (7, 12, Bullet::Four, false),
            (4, 7, Bullet::Three, true),
        ] {
            let d = p4(n);
            let e = embed_pk(&d, m).unwrap();
            assert_eq!((e.bullet, e.degenerate), (bullet, degenerate), "n={n} m={m}");
            assert_eq!(&e.design.blocks[..d.blocks.len()], &d.blocks[..]);
        }
    }

    #[test]
    fn bad_arguments() {
        let d = p4(6);
        assert!(matches!(embed_pk(&d, 7), Err(Error::Usage(_))));
        assert!(matches!(embed_pk(&d, 8), Err(Error::Usage(_))));
    }
}
