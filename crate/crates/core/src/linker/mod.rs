//! Embeddings of P_4 and P_k designs, and down-links from Γ-designs to
//! P_4-designs.

pub mod atoms;
mod c4;
pub(crate) mod embed;
mod large;
pub mod p5;
pub mod paper_data;

pub use c4::downlink_c4;
pub use embed::{embed_pk, Bullet, PkEmbedding};
pub use large::{downlink_cycle_system, downlink_pk_design, reserved_vertices};
pub use p5::{downlink_p5, p5_targets};

use std::collections::BTreeSet;

use crate::admissible::p4_admissible;
use crate::apex::{p4_decompose_two_apex, ApexInput};
use crate::error::{Error, Result};
use crate::graph::{complete_graph, Block, BlockShape, Design, DownLink, Edge, Host, ShapeKind};
use crate::verify::{verify_design, verify_downlink, VerificationReport, Violation};

/// Edge-disjoint P_4s inside K_v, not necessarily covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDesign {
    pub v: usize,
    pub blocks: Vec<Block>,
}

impl PartialDesign {
    pub fn new(v: usize, blocks: Vec<Block>) -> Result<PartialDesign> {
        let mut seen = BTreeSet::new();
        for b in &blocks {
            if !b.matches(BlockShape::path(4)) {
                return Err(Error::Precondition(format!("{b} is not a P_4")));
            }
            if b.vertices().iter().any(|&x| x >= v) {
                return Err(Error::Precondition(format!("{b} leaves K_{v}")));
            }
            for e in b.edges() {
                if !seen.insert(e) {
                    return Err(Error::Precondition(format!("edge {e} is used twice")));
                }
            }
        }
        Ok(PartialDesign { v, blocks })
    }
}

/// Embeds a partial P_4-design of K_v into a (K_n, P_4)-design, n ≥ v+2.
///
/// The complement of the partial design in K_n has every added vertex as
/// an apex, so the two-apex decomposer finishes it. The input blocks come
/// first, unchanged.
pub fn embed_partial_p4(p: &PartialDesign, n: usize) -> Result<Design> {
    if n < p.v + 2 {
        return Err(Error::Usage(format!("embedding needs n ≥ v+2 = {}; got {n}", p.v + 2)));
    }
    if !p4_admissible(n) {
        return Err(Error::Usage(format!("K_{n} has no P_4-design (need n ≡ 0,1 mod 3, n ≥ 4)")));
    }
    let mut rest = complete_graph(n)?;
    for b in &p.blocks {
        for e in b.edges() {
            rest.remove_edge(e);
        }
    }
    let part = p4_decompose_two_apex(&ApexInput::new(rest, n - 2, n - 1)?)?;
    if !part.leftover.is_empty() {
        return Err(Error::Internal(format!("embedding into K_{n} left {} edges", part.leftover.len())));
    }
    let mut blocks = p.blocks.clone();
    blocks.extend(part.design.blocks);
    let d = Design::new(Host::Complete(n), BlockShape::path(4), blocks);
    let r = verify_design(&d);
    if !r.valid() {
        return Err(Error::Internal(format!("embedding failed: {r}")));
    }
    Ok(d)
}

/// A down-link from a (K_v, Γ)-design to a (K_n, P_4)-design, with the
/// construction that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumWitness {
    pub gamma: BlockShape,
    pub v: usize,
    pub n: usize,
    pub downlink: DownLink,
    /// Short tag naming the construction.
    pub theorem: String,
    pub trace: Vec<String>,
}

impl SpectrumWitness {
    fn new(downlink: DownLink, theorem: &str, trace: Vec<String>) -> Result<SpectrumWitness> {
        let order = |h: &Host| {
            h.order()
                .ok_or_else(|| Error::Internal(format!("witness host {h} is not complete")))
        };
        let w = SpectrumWitness {
            gamma: downlink.domain.shape,
            v: order(&downlink.domain.host)?,
            n: order(&downlink.codomain.host)?,
            downlink,
            theorem: theorem.into(),
            trace,
        };
        let r = verify_spectrum_membership(&w);
        if !r.valid() {
            return Err(Error::Internal(format!("{theorem} witness failed to verify: {r}")));
        }
        Ok(w)
    }
}

pub fn verify_spectrum_membership(w: &SpectrumWitness) -> VerificationReport {
    let dl = &w.downlink;
    let mut r = verify_design(&dl.domain);
    r.extend(verify_design(&dl.codomain));
    r.extend(verify_downlink(dl));
    let mut mismatch = |reason: String| r.push(Violation::OrderMismatch { reason });
    if dl.domain.host != Host::Complete(w.v) {
        mismatch(format!("domain host is {} but v = {}", dl.domain.host, w.v));
    }
    if dl.codomain.host != Host::Complete(w.n) {
        mismatch(format!("codomain host is {} but n = {}", dl.codomain.host, w.n));
    }
    if dl.domain.shape != w.gamma {
        mismatch(format!("domain shape is {} but gamma = {}", dl.domain.shape, w.gamma));
    }
    if dl.codomain.shape != BlockShape::path(4) {
        mismatch(format!("codomain shape is {}, not P4", dl.codomain.shape));
    }
    let floor = match (w.gamma.kind, w.gamma.k) {
        (ShapeKind::Path, 5) => Some(w.v.saturating_sub(1)),
        (ShapeKind::Cycle, 4) => Some(w.v),
        _ => None,
    };
    if let Some(f) = floor {
        if w.n < f {
            mismatch(format!("n = {} is below the lower bound {f} for {}", w.n, w.gamma));
        }
    }
    r
}

/// The P_4 formed by the first four vertices of a block.
pub fn leading_p4(b: &Block) -> Block {
    Block::path(b.vertices()[..4].to_vec())
}

/// Down-link from any design whose blocks contain a P_4 into K_n, n ≥ v+2.
pub fn downlink_generic(d: &Design, n: usize) -> Result<SpectrumWitness> {
    if !d.shape.contains_p4() {
        return Err(Error::Usage(format!("{} contains no P_4", d.shape)));
    }
    let v = d
        .host
        .order()
        .ok_or_else(|| Error::Usage("the design must live on a complete graph".into()))?;
    let r = verify_design(d);
    if !r.valid() {
        return Err(Error::Precondition(format!("input design is invalid: {r}")));
    }
    let images: Vec<Block> = d.blocks.iter().map(leading_p4).collect();
    let codomain = embed_partial_p4(&PartialDesign::new(v, images)?, n)?;
    let map = (0..d.blocks.len()).map(|i| (i, i)).collect();
    let dl = DownLink { domain: d.clone(), codomain, map };
    SpectrumWitness::new(dl, "generic", vec![format!("leading P4 of each block, embedded into K_{n}")])
}

/// Moves a witness to order m ≥ n+2 by embedding its codomain.
pub fn extend_witness(w: &SpectrumWitness, m: usize) -> Result<SpectrumWitness> {
    let e = embed_pk(&w.downlink.codomain, m)?;
    let dl = DownLink {
        domain: w.downlink.domain.clone(),
        codomain: e.design,
        map: w.downlink.map.clone(),
    };
    let mut trace = w.trace.clone();
    trace.push(format!("codomain embedded into K_{m} ({})", e.bullet));
    SpectrumWitness::new(dl, &format!("{}+embed", w.theorem), trace)
}

/// Re-embeds the images of a witness as a partial design of K_v into K_m,
/// m ≥ v+2.
pub fn reembed_images(w: &SpectrumWitness, m: usize) -> Result<SpectrumWitness> {
    let dl = &w.downlink;
    let images: Vec<Block> = dl.map.iter().map(|&(_, j)| dl.codomain.blocks[j].clone()).collect();
    if images.iter().flat_map(|b| b.vertices()).any(|&x| x >= w.v) {
        return Err(Error::Precondition("images leave the domain's vertex set".into()));
    }
    let codomain = embed_partial_p4(&PartialDesign::new(w.v, images)?, m)?;
    let map = dl.map.iter().enumerate().map(|(k, &(i, _))| (i, k)).collect();
    let dl = DownLink { domain: dl.domain.clone(), codomain, map };
    let mut trace = w.trace.clone();
    trace.push(format!("images re-embedded into K_{m}"));
    SpectrumWitness::new(dl, &format!("{}+reembed", w.theorem), trace)
}

fn path_edges(vs: &[usize]) -> Vec<Edge> {
    vs.windows(2).map(|p| Edge::new(p[0], p[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{c4_difference_family, develop};

    #[test]
    fn partial_embeddings() {
        let empty = PartialDesign::new(4, vec![]).unwrap();
        assert_eq!(embed_partial_p4(&empty, 6).unwrap().blocks.len(), 5);
        let one = PartialDesign::new(4, vec![Block::path(vec![0, 1, 2, 3])]).unwrap();
        let d = embed_partial_p4(&one, 6).unwrap();
        assert_eq!(d.blocks.len(), 5);
        assert_eq!(d.blocks[0], Block::path(vec![0, 1, 2, 3]));
        assert!(matches!(embed_partial_p4(&one, 5), Err(Error::Usage(_))));
        assert!(PartialDesign::new(4, vec![Block::path(vec![0, 1, 2, 3]), Block::path(vec![1, 2, 0, 3])]).is_err());
    }

    #[test]
    fn generic_downlinks() {
        let d = develop(&c4_difference_family(9).unwrap()).unwrap();
        let w = downlink_generic(&d, 12).unwrap();
        assert_eq!(w.downlink.codomain.blocks.len(), 22);
        assert!(w.downlink.is_injective());
        let p3 = Design::new(Host::Complete(3), BlockShape::path(3), vec![Block::path(vec![0, 1, 2])]);
        assert!(matches!(downlink_generic(&p3, 6), Err(Error::Usage(_))));
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let d = develop(&c4_difference_family(9).unwrap()).unwrap();
        let mut w = downlink_generic(&d, 12).unwrap();
        assert!(verify_spectrum_membership(&w).valid());
        w.downlink.map[0].1 = 5;
        assert!(!verify_spectrum_membership(&w).valid());
    }

    #[test]
    fn path_edges_helper() {
        assert_eq!(path_edges(&[0, 1, 2]), vec![Edge::new(0, 1), Edge::new(1, 2)]);
    }
}
