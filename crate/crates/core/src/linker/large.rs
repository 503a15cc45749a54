//! Down-links from k-cycle systems (k ≥ 9) and P_k-designs (k ≥ 12).
//!
//! t + 2 vertices are reserved: x_1..x_t are deleted and y_1, y_2 become
//! the apexes of the residual graph. Each block gives up a P_4 that avoids
//! all of them.

use super::{SpectrumWitness};
use crate::apex::{p4_decompose_two_apex, ApexInput};
use crate::error::{Error, Result};
use crate::graph::{complete_graph, Block, BlockShape, Design, DownLink, Host, ShapeKind, Vertex};
use crate::verify::verify_design;

/// The reserved vertices for a design on K_v: x_1..x_t are the t highest
/// ids and y_1, y_2 the two below them.
pub fn reserved_vertices(v: usize, t: usize) -> (Vec<Vertex>, [Vertex; 2]) {
    ((v - t..v).collect(), [v - t - 2, v - t - 1])
}

/// First 4-vertex window of the block (cyclically for cycles) avoiding `banned`.
fn window(b: &Block, banned: &[Vertex]) -> Option<Block> {
    let vs = b.vertices();
    let len = vs.len();
    let starts = match b.kind() {
        ShapeKind::Path => len.saturating_sub(3),
        ShapeKind::Cycle => len,
    };
    (0..starts)
        .map(|s| (0..4).map(|j| vs[(s + j) % len]).collect::<Vec<_>>())
        .find(|w| w.iter().all(|x| !banned.contains(x)))
        .map(Block::path)
}

/// Codomain orders the construction reaches from v − t.
pub fn reachable_orders(v: usize, t: usize) -> Vec<usize> {
    let base = v - t;
    match base % 3 {
        0 => vec![base, base + 1],
        1 => vec![base],
        _ => vec![base + 1, base + 2],
    }
}

fn reserved_downlink(
    d: &Design,
    t: usize,
    target: Option<usize>,
    tag: &str,
) -> Result<SpectrumWitness> {
    let v = d
        .host
        .order()
        .ok_or_else(|| Error::Usage("the design must live on a complete graph".into()))?;
    let r = verify_design(d);
    if !r.valid() {
        return Err(Error::Precondition(format!("input design is invalid: {r}")));
    }
    if v < t + 4 {
        return Err(Error::Usage(format!("K_{v} is too small to reserve {} vertices", t + 2)));
    }
    let orders = reachable_orders(v, t);
    let n = match target {
        None => orders[0],
        Some(n) if orders.contains(&n) => n,
        Some(n) => {
            return Err(Error::Usage(format!(
                "with v − t = {} the reachable orders are {orders:?}; got {n}",
                v - t
            )))
        }
    };
    let (xs, ys) = reserved_vertices(v, t);
    let banned: Vec<Vertex> = xs.iter().chain(ys.iter()).copied().collect();
    let mut images = Vec::with_capacity(d.blocks.len());
    for b in &d.blocks {
        let w = window(b, &banned)
            .ok_or_else(|| Error::Internal(format!("block {b} has no P4 avoiding {banned:?}")))?;
        images.push(w);
    }
    // Deleted ids v−t..v−1 are reused for the vertices added when n > v−t.
    let mut rest = complete_graph(n)?;
    for b in &images {
        for e in b.edges() {
            rest.remove_edge(e);
        }
    }
    let part = p4_decompose_two_apex(&ApexInput::new(rest, ys[0], ys[1])?)?;
    if !part.leftover.is_empty() {
        return Err(Error::Internal(format!("residual on K_{n} left {} edges", part.leftover.len())));
    }
    let map = (0..images.len()).map(|i| (i, i)).collect();
    let mut blocks = images;
    blocks.extend(part.design.blocks);
    let codomain = Design::new(Host::Complete(n), BlockShape::path(4), blocks);
    let trace = vec![
        format!("t = {t}, deleted {xs:?}, apexes {ys:?}"),
        format!("v − t = {} ≡ {} (mod 3), codomain order {n}", v - t, (v - t) % 3),
    ];
    let dl = DownLink { domain: d.clone(), codomain, map };
    SpectrumWitness::new(dl, tag, trace)
}

/// Down-link from a (K_v, C_k)-design, k ≥ 9, to K_n with n ≥ v − ⌊(k−9)/4⌋.
pub fn downlink_cycle_system(d: &Design, target: Option<usize>) -> Result<SpectrumWitness> {
    let k = d.shape.k;
    if d.shape.kind != ShapeKind::Cycle || k < 9 {
        return Err(Error::Usage(format!("cycle-system down-links need C_k with k ≥ 9; got {}", d.shape)));
    }
    reserved_downlink(d, (k - 9) / 4, target, "cycle-system")
}

/// Down-link from a (K_v, P_k)-design, k ≥ 12, to K_n with n ≥ v − ⌊(k−12)/4⌋.
pub fn downlink_pk_design(d: &Design, target: Option<usize>) -> Result<SpectrumWitness> {
    let k = d.shape.k;
    if d.shape.kind != ShapeKind::Path || k < 12 {
        return Err(Error::Usage(format!("path-design down-links need P_k with k ≥ 12; got {}", d.shape)));
    }
    reserved_downlink(d, (k - 12) / 4, target, "path-design")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{k16_p13, walecki};

    fn touches_reserved(w: &SpectrumWitness, t: usize) -> bool {
        let (xs, ys) = reserved_vertices(w.v, t);
        w.downlink.map.iter().any(|&(_, j)| {
            w.downlink.codomain.blocks[j]
                .vertices()
                .iter()
                .any(|x| xs.contains(x) || ys.contains(x))
        })
    }

    #[test]
    fn hamiltonian_systems() {
        let d9 = walecki(9).unwrap();
        for n in [9, 10] {
            let w = downlink_cycle_system(&d9, Some(n)).unwrap();
            assert_eq!(w.n, n);
            assert!(!touches_reserved(&w, 0));
        }
        let d13 = walecki(13).unwrap();
        let w = downlink_cycle_system(&d13, None).unwrap();
        assert_eq!(w.n, 12);
        assert!(!touches_reserved(&w, 1));
        assert!(downlink_cycle_system(&d13, Some(14)).is_err());
    }

    #[test]
    fn path_design() {
        let d = k16_p13().unwrap();
        let w = downlink_pk_design(&d, None).unwrap();
        assert_eq!(w.n, 16);
        assert!(!touches_reserved(&w, 0));
    }

    #[test]
    fn t_values() {
        assert_eq!((15 - 12) / 4, 0);
        assert_eq!((16 - 12) / 4, 1);
        assert_eq!(reachable_orders(13, 1), vec![12, 13]);
        assert_eq!(reachable_orders(17, 0), vec![18, 19]);
    }
}
