//! Which P_4-design orders a Γ-design of order v down-links to.
//!
//! Each order is attempted with the dedicated constructions first, then
//! the leading-P_4 embedding (n ≥ v+2), then by embedding the codomain of
//! a smaller witness (n ≥ n'+2).

use std::fmt;
use std::ops::RangeInclusive;

use crate::admissible::p4_admissible;
use crate::catalog::base_design;
use crate::error::{Error, Result};
use crate::graph::{BlockShape, Design, Host, ShapeKind};
use crate::linker::{
    downlink_c4, downlink_cycle_system, downlink_generic, downlink_p5, downlink_pk_design,
    extend_witness, SpectrumWitness,
};

#[derive(Debug, Clone)]
pub enum Membership {
    Witnessed(Box<SpectrumWitness>),
    /// K_n has no P_4-design.
    Inadmissible,
    /// No construction here reaches n.
    Failed,
}

#[derive(Debug, Clone)]
pub struct SpectrumEntry {
    pub n: usize,
    pub membership: Membership,
    /// The closed-form answer, where one is known.
    pub predicted: Option<bool>,
}

impl SpectrumEntry {
    pub fn witnessed(&self) -> bool {
        matches!(self.membership, Membership::Witnessed(_))
    }

    /// False when the construction disagrees with the closed form.
    pub fn agrees(&self) -> bool {
        self.predicted.is_none_or(|p| p == self.witnessed())
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub gamma: BlockShape,
    pub v: usize,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    pub fn members(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| e.witnessed()).map(|e| e.n).collect()
    }

    /// Smallest witnessed order.
    pub fn eta(&self) -> Option<usize> {
        self.members().first().copied()
    }

    /// The closed-form set restricted to the probed orders, if known.
    pub fn theoretical(&self) -> Option<Vec<usize>> {
        self.entries
            .iter()
            .map(|e| e.predicted.map(|p| (e.n, p)))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().filter(|&(_, p)| p).map(|(n, _)| n).collect())
    }

    pub fn consistent(&self) -> bool {
        self.entries.iter().all(SpectrumEntry::agrees)
    }
}

impl fmt::Display for SpectrumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spectrum of ({}, K_{}) → P4", self.gamma, self.v)?;
        match self.eta() {
            Some(eta) => writeln!(f, "  eta = {eta}")?,
            None => writeln!(f, "  eta = none")?,
        }
        for e in &self.entries {
            let status = match &e.membership {
                Membership::Witnessed(w) => format!("yes  {}", w.theorem),
                Membership::Inadmissible => "no   inadmissible".into(),
                Membership::Failed => "failed".into(),
            };
            let note = if e.agrees() { "" } else { "  (disagrees with closed form)" };
            writeln!(f, "  n = {:>3}  {status}{note}", e.n)?;
        }
        Ok(())
    }
}

/// Smallest codomain order any construction can reach from K_v.
pub fn lower_bound(gamma: BlockShape, v: usize) -> usize {
    let t = match (gamma.kind, gamma.k) {
        (ShapeKind::Path, 5) => 1,
        (ShapeKind::Cycle, k) if k >= 9 => (k - 9) / 4,
        (ShapeKind::Path, k) if k >= 12 => (k - 12) / 4,
        _ => 0,
    };
    v.saturating_sub(t)
}

/// Closed-form membership for the shapes where it is known.
pub fn closed_form(gamma: BlockShape, v: usize, n: usize) -> Option<bool> {
    match (gamma.kind, gamma.k) {
        (ShapeKind::Cycle, 4) => Some(n >= v && p4_admissible(n)),
        (ShapeKind::Path, 5) => Some(n + 1 >= v && p4_admissible(n)),
        _ => None,
    }
}

fn direct(gamma: BlockShape, d: &Design, v: usize, n: usize) -> Option<SpectrumWitness> {
    match (gamma.kind, gamma.k) {
        (ShapeKind::Cycle, 4) => downlink_c4(v, n).ok(),
        (ShapeKind::Path, 5) => downlink_p5(v, n).ok(),
        (ShapeKind::Cycle, k) if k >= 9 => downlink_cycle_system(d, Some(n)).ok(),
        (ShapeKind::Path, k) if k >= 12 => downlink_pk_design(d, Some(n)).ok(),
        _ => None,
    }
}

/// Spectrum of (K_v, Γ) for codomain orders from the lower bound up to
/// `n_max`. Every witness is verified on construction.
pub fn cmd_spectrum(gamma: BlockShape, v: usize, n_max: usize) -> Result<SpectrumReport> {
    spectrum_range(gamma, v, 0..=n_max)
}

/// As [`cmd_spectrum`], over an explicit range of orders.
pub fn spectrum_range(gamma: BlockShape, v: usize, orders: RangeInclusive<usize>) -> Result<SpectrumReport> {
    if !gamma.contains_p4() {
        return Err(Error::Usage(format!("{gamma} contains no P4")));
    }
    let d = base_design(gamma, &Host::Complete(v))?;
    let lo = (*orders.start()).max(lower_bound(gamma, v));
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for n in lo..=*orders.end() {
        let predicted = closed_form(gamma, v, n);
        if !p4_admissible(n) {
            entries.push(SpectrumEntry { n, membership: Membership::Inadmissible, predicted });
            continue;
        }
        let mut w = direct(gamma, &d, v, n);
        if w.is_none() && n >= v + 2 {
            w = downlink_generic(&d, n).ok();
        }
        if w.is_none() {
            w = entries.iter().find_map(|e| match &e.membership {
                Membership::Witnessed(prev) if prev.n + 2 <= n => extend_witness(prev, n).ok(),
                _ => None,
            });
        }
        let membership = match w {
            Some(w) => Membership::Witnessed(Box::new(w)),
            None => Membership::Failed,
        };
        entries.push(SpectrumEntry { n, membership, predicted });
    }
    Ok(SpectrumReport { gamma, v, entries })
}
