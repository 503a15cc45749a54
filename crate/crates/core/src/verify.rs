//! Partition and down-link verifiers.
//!
//! Every constructor in the crate funnels its output through these checks.
//! The partition check counts edge multiplicities exactly and reports both
//! under- and over-coverage instead of stopping at the first problem.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::{Design, DownLink, Edge};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A host edge covered by no block.
    MissingEdge { edge: Edge },
    /// A host edge covered by more than one block; `blocks` lists all of them.
    DuplicateEdge { edge: Edge, blocks: Vec<usize> },
    /// A block edge that is not in the host.
    ForeignEdge { block: usize, edge: Edge },
    /// A block that is not a copy of the design's shape.
    BadBlockShape { block: usize },
    /// A mapped codomain block that is not contained in its domain block.
    NotSubgraph { domain: usize, codomain: usize },
    /// A domain block with no image.
    UnmappedBlock { block: usize },
    /// A domain block mapped more than once.
    RepeatedLink { block: usize },
    /// A map entry pointing outside either design.
    LinkOutOfRange { domain: usize, codomain: usize },
    /// The host descriptor itself is invalid.
    BadHost { reason: String },
    /// A difference of Z_v not met exactly once (zero must be met never).
    DifferenceCount { difference: usize, count: usize },
    /// A spectrum witness whose orders are inconsistent with its claim.
    OrderMismatch { reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingEdge { edge } => write!(f, "MissingEdge {edge}"),
            Violation::DuplicateEdge { edge, blocks } => {
                write!(f, "DuplicateEdge {edge} in blocks {blocks:?}")
            }
            Violation::ForeignEdge { block, edge } => {
                write!(f, "ForeignEdge {edge} in block {block}")
            }
            Violation::BadBlockShape { block } => write!(f, "BadBlockShape block {block}"),
            Violation::NotSubgraph { domain, codomain } => {
                write!(f, "NotSubgraph codomain block {codomain} is not inside domain block {domain}")
            }
            Violation::UnmappedBlock { block } => write!(f, "UnmappedBlock {block}"),
            Violation::RepeatedLink { block } => write!(f, "RepeatedLink {block}"),
            Violation::LinkOutOfRange { domain, codomain } => {
                write!(f, "LinkOutOfRange {domain} -> {codomain}")
            }
            Violation::BadHost { reason } => write!(f, "BadHost {reason}"),
            Violation::DifferenceCount { difference, count } => {
                write!(f, "DifferenceCount difference {difference} occurs {count} times")
            }
            Violation::OrderMismatch { reason } => write!(f, "OrderMismatch {reason}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn verify_design(d: &Design) -> VerificationReport {
    let mut report = VerificationReport::default();
    let host = match d.host.graph() {
        Ok(g) => g,
        Err(e) => {
            report.push(Violation::BadHost {
                reason: e.to_string(),
            });
            return report;
        }
    };
    let mut cover: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (i, b) in d.blocks.iter().enumerate() {
        if !b.matches(d.shape) {
            report.push(Violation::BadBlockShape { block: i });
        }
        for e in b.edges() {
            if host.has_edge(e) {
                cover.entry(e).or_default().push(i);
            } else {
                report.push(Violation::ForeignEdge { block: i, edge: e });
            }
        }
    }
    for e in host.edges() {
        match cover.get(&e) {
            None => report.push(Violation::MissingEdge { edge: e }),
            Some(bs) if bs.len() > 1 => report.push(Violation::DuplicateEdge {
                edge: e,
                blocks: bs.clone(),
            }),
            _ => {}
        }
    }
    report
}

/// Checks the map only: totality on domain blocks and the subgraph
/// condition. The two designs are checked separately with
/// [`verify_design`]. Injectivity is not a validity requirement; see
/// [`DownLink::is_injective`].
pub fn verify_downlink(dl: &DownLink) -> VerificationReport {
    let mut report = VerificationReport::default();
    let nd = dl.domain.blocks.len();
    let nc = dl.codomain.blocks.len();
    let mut hits = vec![0usize; nd];
    for &(i, j) in &dl.map {
        if i >= nd || j >= nc {
            report.push(Violation::LinkOutOfRange {
                domain: i,
                codomain: j,
            });
            continue;
        }
        hits[i] += 1;
        if !dl.codomain.blocks[j].is_subgraph_of(&dl.domain.blocks[i]) {
            report.push(Violation::NotSubgraph {
                domain: i,
                codomain: j,
            });
        }
    }
    for (i, &h) in hits.iter().enumerate() {
        match h {
            0 => report.push(Violation::UnmappedBlock { block: i }),
            1 => {}
            _ => report.push(Violation::RepeatedLink { block: i }),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Block, BlockShape, Host};

    fn k4_p4() -> Design {
        Design::new(
            Host::Complete(4),
            BlockShape::path(4),
            vec![Block::path(vec![0, 1, 2, 3]), Block::path(vec![2, 0, 3, 1])],
        )
    }

    #[test]
    fn triangle_is_a_c3_design() {
        let d = Design::new(
            Host::Complete(3),
            BlockShape::cycle(3),
            vec![Block::cycle(vec![0, 1, 2])],
        );
        assert!(verify_design(&d).valid());
    }

    #[test]
    fn k4_two_paths() {
        assert!(verify_design(&k4_p4()).valid());
    }

    #[test]
    fn reports_under_and_over_coverage() {
        let mut d = k4_p4();
        d.blocks[1] = Block::path(vec![0, 1, 3, 2]);
        let r = verify_design(&d);
        assert!(!r.valid());
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateEdge { .. })));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MissingEdge { .. })));
    }

    #[test]
    fn foreign_edge_and_bad_shape() {
        let d = Design::new(
            Host::Complete(3),
            BlockShape::path(4),
            vec![Block::path(vec![0, 1, 2, 7])],
        );
        let r = verify_design(&d);
        assert!(r.violations.contains(&Violation::ForeignEdge {
            block: 0,
            edge: Edge::new(2, 7)
        }));
        let d = Design::new(
            Host::Complete(3),
            BlockShape::path(4),
            vec![Block::path(vec![0, 1, 2])],
        );
        assert!(verify_design(&d)
            .violations
            .contains(&Violation::BadBlockShape { block: 0 }));
    }

    #[test]
    fn identity_downlink() {
        let d = k4_p4();
        let dl = DownLink {
            domain: d.clone(),
            codomain: d,
            map: vec![(0, 0), (1, 1)],
        };
        assert!(verify_downlink(&dl).valid());
        assert!(dl.is_injective());
    }

    #[test]
    fn downlink_negative_cases() {
        let d = k4_p4();
        let dl = DownLink {
            domain: d.clone(),
            codomain: d.clone(),
            map: vec![(0, 1), (1, 0)],
        };
        let r = verify_downlink(&dl);
        assert!(r.violations.contains(&Violation::NotSubgraph {
            domain: 0,
            codomain: 1
        }));
        let dl = DownLink {
            domain: d.clone(),
            codomain: d,
            map: vec![(0, 0)],
        };
        assert!(verify_downlink(&dl)
            .violations
            .contains(&Violation::UnmappedBlock { block: 1 }));
    }
}
