//! Constructions of the basic P_5 → P_4 down-links the gluing tables
//! combine. They are run offline to fill the catalog and re-run in tests.
//!
//! Complete-graph atoms come from 1-rotational base paths over Z_g ∪ {∞}
//! (or cyclic ones over Z_9). The fixed point ∞ lies in one orbit of edges,
//! so it is an endpoint of every block containing it. Every block drops one
//! end edge; the dropped edges of a non-∞ orbit form the circulant of one
//! difference, which the completion cuts into P_4s.

use std::collections::BTreeSet;

use crate::apex::{p4_decompose_two_apex, ApexInput};
use crate::cyclic::{orbit_search_restarts, OrbitSpace};
use crate::error::{Error, Result};
use crate::graph::{
    complete_bipartite_on, Block, BlockShape, Design, DownLink, Edge, Graph, Host, Vertex,
};
use crate::linker::embed::oracle_blocks;
use crate::linker::paper_data::k9_24_apex_downlink;
use crate::oracle::{find_decomposition_with, Constraints, OracleStatus, SearchBudget};
use crate::verify::verify_downlink;

/// Names of the basic down-links, in catalog order.
pub const ATOMS: &[&str] = &[
    "k8-drop",
    "k9-same",
    "k9-apex",
    "k16-drop",
    "k16-same",
    "k24-same",
    "k24-apex",
    "bip34",
    "bip43-drop",
    "bip9x24-apex",
];

pub fn build_atom(name: &str) -> Result<DownLink> {
    let dl = match name {
        "k8-drop" => rotational(7, true, Completion::None)?,
        "k9-same" => rotational(9, false, Completion::Rim)?,
        "k9-apex" => rotational(9, false, Completion::Wheel)?,
        "k16-drop" => rotational(15, true, Completion::Rim)?,
        "k16-same" => rotational(15, true, Completion::Wheel)?,
        "k24-same" => rotational(23, true, Completion::TwoDifferences)?,
        "k24-apex" => rotational(23, true, Completion::Apex)?,
        "bip34" => bip34()?,
        "bip43-drop" => bip43_drop()?,
        "bip9x24-apex" => k9_24_apex_downlink()?,
        _ => return Err(Error::NotCataloged { shape: "P5".into(), host: name.into() }),
    };
    let r = verify_downlink(&dl);
    if !r.valid() {
        return Err(Error::Internal(format!("atom {name} failed to verify: {r}")));
    }
    Ok(dl)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Completion {
    /// ∞ is deleted and there is nothing to add (K_8 → K_7).
    None,
    /// One circulant cycle, cut into P_4s; ∞ (if any) is deleted.
    Rim,
    /// One circulant cycle plus a hub: ∞ if present, else a new vertex.
    Wheel,
    /// Star of ∞ and two circulants, as [∞, i, i+d1, i+d1+d2].
    TwoDifferences,
    /// Star of ∞, two circulants and the star of a new vertex α.
    Apex,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn diff(a: Vertex, b: Vertex, g: usize) -> usize {
    (b + g - a) % g
}

/// Orients each base path so that its dropped edge comes last. ∞ paths
/// drop their ∞ edge; the others drop an end edge whose differences meet
/// `ok`. Returns None if no orientation works.
fn orient(
    base: &[Vec<Vertex>],
    g: usize,
    inf: Option<Vertex>,
    ok: &dyn Fn(&[usize]) -> bool,
) -> Option<Vec<Vec<Vertex>>> {
    let (with_inf, plain): (Vec<_>, Vec<_>) =
        base.iter().cloned().partition(|b| inf.is_some_and(|x| b.contains(&x)));
    let mut out: Vec<Vec<Vertex>> = with_inf
        .into_iter()
        .map(|mut b| {
            if b[0] == inf.unwrap() {
                b.reverse();
            }
            b
        })
        .collect();
    let k = plain.len();
    for mask in 0..(1u32 << k) {
        let chosen: Vec<Vec<Vertex>> = plain
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut b = b.clone();
                if mask >> i & 1 == 1 {
                    b.reverse();
                }
                b
            })
            .collect();
        let ds: Vec<usize> = chosen.iter().map(|b| diff(b[b.len() - 2], b[b.len() - 1], g)).collect();
        if ok(&ds) {
            out.extend(chosen);
            return Some(out);
        }
    }
    None
}

type Condition = dyn Fn(&[usize]) -> bool;

fn rotational(g: usize, fixed: bool, completion: Completion) -> Result<DownLink> {
    let space = OrbitSpace::new(g, 1, fixed)?;
    let inf = space.infinity();
    let shape = BlockShape::path(5);
    let need: Box<Condition> = match completion {
        Completion::None => Box::new(|ds: &[usize]| ds.is_empty()),
        Completion::Rim | Completion::Wheel => {
            Box::new(move |ds: &[usize]| ds.len() == 1 && gcd(ds[0], g) == 1)
        }
        Completion::TwoDifferences | Completion::Apex => Box::new(move |ds: &[usize]| {
            ds.len() == 2 && ds[0] != ds[1] && ds[0] + ds[1] != g
        }),
    };
    let accept = |b: &[Vec<Vertex>]| orient(b, g, inf, &*need).is_some();
    let base = orbit_search_restarts(space, &space.complete_orbits(), shape, 0, 64, 200_000, &accept)
        .ok_or_else(|| Error::Internal(format!("no base paths over Z_{g}")))?;
    let base = orient(&base, g, inf, &*need).unwrap();

    let v = space.order();
    let mut dom = Vec::new();
    let mut img = Vec::new();
    for b in &base {
        for s in 0..g {
            let t: Vec<Vertex> = b.iter().map(|&p| space.translate(p, s)).collect();
            img.push(Block::path(t[..4].to_vec()));
            dom.push(Block::path(t));
        }
    }
    let ds: Vec<usize> = base
        .iter()
        .filter(|b| !inf.is_some_and(|x| b.contains(&x)))
        .map(|b| diff(b[3], b[4], g))
        .collect();
    let rim = |d: usize| -> Vec<Vertex> { (0..g).map(|j| j * d % g).collect() };
    let alpha = v;
    let n = match completion {
        Completion::None => v - 1,
        Completion::Rim => {
            let c = rim(ds[0]);
            for j in 0..g / 3 {
                img.push(Block::path((0..4).map(|s| c[(3 * j + s) % g]).collect()));
            }
            if fixed { v - 1 } else { v }
        }
        Completion::Wheel => {
            let c = rim(ds[0]);
            let hub = inf.unwrap_or(alpha);
            for j in 0..g / 3 {
                let r = |s: usize| c[(3 * j + s) % g];
                img.push(Block::path(vec![r(0), r(1), r(2), hub]));
                img.push(Block::path(vec![r(2), r(3), hub, r(1)]));
            }
            if fixed { v } else { v + 1 }
        }
        Completion::TwoDifferences => {
            let x = inf.unwrap();
            for i in 0..g {
                img.push(Block::path(vec![x, i, (i + ds[0]) % g, (i + ds[0] + ds[1]) % g]));
            }
            v
        }
        Completion::Apex => {
            let x = inf.unwrap();
            let mut gr = Graph::with_vertices(0..=alpha);
            for i in 0..g {
                gr.add_edge(Edge::new(x, i));
                gr.add_edge(Edge::new(i, (i + ds[0]) % g));
                gr.add_edge(Edge::new(i, (i + ds[1]) % g));
            }
            for u in 0..alpha {
                gr.add_edge(Edge::new(u, alpha));
            }
            let part = p4_decompose_two_apex(&ApexInput::new(gr, x, alpha)?)?;
            if !part.leftover.is_empty() {
                return Err(Error::Internal("apex completion left edges".into()));
            }
            img.extend(part.design.blocks);
            v + 1
        }
    };
    let domain = Design::new(Host::Complete(v), shape, dom);
    let codomain = Design::new(Host::Complete(n), BlockShape::path(4), img);
    let map = (0..domain.blocks.len()).map(|i| (i, i)).collect();
    Ok(DownLink { domain, codomain, map })
}

/// Truncations of `paths` (dropping the first edge when the bit is set,
/// else the last) together with the dropped edges.
fn truncate(paths: &[Block], mask: u32) -> (Vec<Block>, Vec<Edge>) {
    let mut imgs = Vec::new();
    let mut dropped = Vec::new();
    for (i, b) in paths.iter().enumerate() {
        let vs = b.vertices();
        let n = vs.len();
        if mask >> i & 1 == 1 {
            dropped.push(Edge::new(vs[0], vs[1]));
            imgs.push(Block::path(vs[1..].to_vec()));
        } else {
            dropped.push(Edge::new(vs[n - 2], vs[n - 1]));
            imgs.push(Block::path(vs[..n - 1].to_vec()));
        }
    }
    (imgs, dropped)
}

fn is_p4(edges: &[Edge]) -> bool {
    let g = Graph::from_edges(edges.iter().copied());
    let degs: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    g.vertex_count() == 4 && g.components().len() == 1 && degs.iter().all(|&d| d <= 2)
}

fn p4_mask(blocks: &[Block]) -> Option<u32> {
    (0..1u32 << blocks.len()).find(|&m| is_p4(&truncate(blocks, m).1))
}

/// K_{3,4} on 0..2 and 3..6: three P_5s whose dropped edges form a P_4.
fn bip34() -> Result<DownLink> {
    let g = complete_bipartite_on(0..3, 3..7);
    let accept = |bs: &[Block]| p4_mask(bs).is_some();
    let cons = Constraints { placement: None, accept: Some(&accept) };
    let out = find_decomposition_with(&g, BlockShape::path(5), SearchBudget::default(), cons);
    if out.status != OracleStatus::Found {
        return Err(Error::Internal("no suitable (K_{3,4}, P_5)-design".into()));
    }
    let domain = Design::new(Host::Bipartite(3, 4), BlockShape::path(5), out.witness.unwrap().blocks);
    let mask = p4_mask(&domain.blocks).unwrap();
    let (mut imgs, dropped) = truncate(&domain.blocks, mask);
    imgs.extend(oracle_blocks(&Graph::from_edges(dropped), BlockShape::path(4))?);
    let codomain = Design::new(Host::Bipartite(3, 4), BlockShape::path(4), imgs);
    Ok(DownLink { domain, codomain, map: vec![(0, 0), (1, 1), (2, 2)] })
}

/// K_{4,3} on 0..3 and 4..6 with vertex 3 an endpoint of each block; it is
/// deleted, leaving K_{3,3} on {0,1,2} ∪ {4,5,6}.
fn bip43_drop() -> Result<DownLink> {
    const X: Vertex = 3;
    let g = complete_bipartite_on(0..4, 4..7);
    let accept = |bs: &[Block]| {
        bs.iter().all(|b| {
            let vs = b.vertices();
            !vs.contains(&X) || vs[0] == X || vs[vs.len() - 1] == X
        })
    };
    let cons = Constraints { placement: None, accept: Some(&accept) };
    let out = find_decomposition_with(&g, BlockShape::path(5), SearchBudget::default(), cons);
    if out.status != OracleStatus::Found {
        return Err(Error::Internal("no suitable (K_{4,3}, P_5)-design".into()));
    }
    let domain = Design::new(Host::Bipartite(4, 3), BlockShape::path(5), out.witness.unwrap().blocks);
    let imgs: Vec<Block> = domain
        .blocks
        .iter()
        .map(|b| {
            let vs = b.vertices();
            let t = if vs[0] == X { &vs[1..] } else { &vs[..4] };
            Block::path(t.to_vec())
        })
        .collect();
    let used: BTreeSet<Vertex> = imgs.iter().flat_map(|b| b.vertices().to_vec()).collect();
    if used.contains(&X) {
        return Err(Error::Internal("deleted vertex survives in an image".into()));
    }
    let codomain = Design::new(
        Host::Edges(complete_bipartite_on(0..3, 4..7)),
        BlockShape::path(4),
        imgs,
    );
    Ok(DownLink { domain, codomain, map: vec![(0, 0), (1, 1), (2, 2)] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_design;

    #[test]
    fn every_atom_builds() {
        for name in ATOMS {
            let dl = build_atom(name).unwrap();
            assert!(verify_design(&dl.domain).valid(), "{name}");
            assert!(verify_design(&dl.codomain).valid(), "{name}");
            assert!(dl.is_injective(), "{name}");
        }
    }

    #[test]
    fn atom_orders() {
        let order = |name: &str| {
            let dl = build_atom(name).unwrap();
            (dl.domain.host.order(), dl.codomain.host.order())
        };
        assert_eq!(order("k8-drop"), (Some(8), Some(7)));
        assert_eq!(order("k9-apex"), (Some(9), Some(10)));
        assert_eq!(order("k16-drop"), (Some(16), Some(15)));
        assert_eq!(order("k24-apex"), (Some(24), Some(25)));
    }
}
