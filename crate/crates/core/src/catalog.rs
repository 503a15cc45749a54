//! Base designs and basic down-links.
//!
//! Small designs that have no closed form ship as text files under
//! `catalog/`, compiled into the library. `PATHLINK_CATALOG=<dir>` loads a
//! directory with the same layout instead. Either way every file is checked
//! against its SHA-256 in the manifest and every entry is re-verified
//! before use.
//!
//! Manifest records:
//!
//! ```text
//! file <name> <sha256>
//! design <shape> <host> <file> <provenance>
//! downlink <name> <link-file> <provenance>
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::admissible::{admissibility_rule, design_admissible};
use crate::apex::{p4_decompose_two_apex, ApexInput};
use crate::bipartite::{decompose_k_bipartite, decompose_square_bipartite};
use crate::cyclic::{c4_difference_family, develop, k16_p13, walecki};
use crate::error::{Error, Result};
use crate::graph::{complete_graph, Block, BlockShape, Design, DownLink, Host, ShapeKind, Vertex};
use crate::io::{parse_design, parse_host_arg, parse_link_file};
use crate::linker::{downlink_p5, embed_pk, p5_targets};
use crate::verify::{verify_design, verify_downlink};

pub const MANIFEST: &str = "MANIFEST";

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../catalog/", $name)))),*]
    };
}

/// Files compiled into the library.
pub static EMBEDDED: &[(&str, &str)] = embedded![
    "MANIFEST",
    "k8-drop.domain", "k8-drop.codomain", "k8-drop.link",
    "k9-same.domain", "k9-same.codomain", "k9-same.link",
    "k9-apex.domain", "k9-apex.codomain", "k9-apex.link",
    "k16-drop.domain", "k16-drop.codomain", "k16-drop.link",
    "k16-same.domain", "k16-same.codomain", "k16-same.link",
    "k24-same.domain", "k24-same.codomain", "k24-same.link",
    "k24-apex.domain", "k24-apex.codomain", "k24-apex.link",
    "bip34.domain", "bip34.codomain", "bip34.link",
    "bip43-drop.domain", "bip43-drop.codomain", "bip43-drop.link",
    "bip9x24-apex.domain", "bip9x24-apex.codomain", "bip9x24-apex.link",
    "p6-k6.design", "p6-k10.design", "p6-k11.design", "p6-k15.design", "p6-k16.design",
    "p13-k16.design",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Transcribed from a published listing.
    PaperListed,
    /// Found by the exhaustive search.
    Oracle,
    /// Produced by a construction in this crate.
    Constructed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::PaperListed => "paper-listed",
            Provenance::Oracle => "oracle",
            Provenance::Constructed => "constructed",
        })
    }
}

impl Provenance {
    pub fn parse(s: &str) -> Option<Provenance> {
        match s {
            "paper-listed" => Some(Provenance::PaperListed),
            "oracle" => Some(Provenance::Oracle),
            "constructed" => Some(Provenance::Constructed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogDesign {
    pub file: String,
    pub provenance: Provenance,
    pub design: Design,
}

#[derive(Debug, Clone)]
pub struct CatalogLink {
    pub name: String,
    pub file: String,
    pub provenance: Provenance,
    pub link: DownLink,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub designs: Vec<CatalogDesign>,
    pub downlinks: Vec<CatalogLink>,
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Host token used in manifests: `K8` or `K3,4`.
pub fn host_token(h: &Host) -> Option<String> {
    match h {
        Host::Complete(n) => Some(format!("K{n}")),
        Host::Bipartite(m, n) => Some(format!("K{m},{n}")),
        Host::Edges(_) => None,
    }
}

impl Catalog {
    /// Parses a manifest, reading files through `read`, and verifies
    /// every checksum and entry.
    pub fn load_with(read: &dyn Fn(&str) -> Result<String>) -> Result<Catalog> {
        let manifest = read(MANIFEST)?;
        let mut sums: BTreeMap<String, String> = BTreeMap::new();
        let mut cat = Catalog::default();
        let checked = |sums: &BTreeMap<String, String>, name: &str, line: usize| -> Result<String> {
            let want = sums
                .get(name)
                .ok_or_else(|| Error::parse(line, format!("{name} has no checksum record")))?;
            let text = read(name)?;
            let got = sha256_hex(&text);
            if &got != want {
                return Err(Error::Internal(format!("catalog file {name}: sha256 {got}, manifest says {want}")));
            }
            Ok(text)
        };
        for (i, l) in manifest.lines().enumerate() {
            let ln = i + 1;
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            let prov = |s: &str| {
                Provenance::parse(s).ok_or_else(|| Error::parse(ln, format!("unknown provenance {s:?}")))
            };
            match toks.as_slice() {
                ["file", name, sum] => {
                    sums.insert(name.to_string(), sum.to_string());
                }
                ["design", shape, host, file, p] => {
                    let shape = BlockShape::parse(shape)?;
                    let host = parse_host_arg(host)?;
                    let design = parse_design(&checked(&sums, file, ln)?)?;
                    if design.shape != shape || design.host != host {
                        return Err(Error::Internal(format!(
                            "catalog file {file} holds a {} design on {}, manifest says {shape} on {host}",
                            design.shape, design.host
                        )));
                    }
                    let r = verify_design(&design);
                    if !r.valid() {
                        return Err(Error::Internal(format!("catalog design {file} is invalid: {r}")));
                    }
                    cat.designs.push(CatalogDesign { file: file.to_string(), provenance: prov(p)?, design });
                }
                ["downlink", name, file, p] => {
                    let lf = parse_link_file(&checked(&sums, file, ln)?)?;
                    let link = DownLink {
                        domain: parse_design(&checked(&sums, &lf.domain, ln)?)?,
                        codomain: parse_design(&checked(&sums, &lf.codomain, ln)?)?,
                        map: lf.map,
                    };
                    let r = verify_downlink(&link);
                    if !r.valid() {
                        return Err(Error::Internal(format!("catalog down-link {name} is invalid: {r}")));
                    }
                    cat.downlinks.push(CatalogLink {
                        name: name.to_string(),
                        file: file.to_string(),
                        provenance: prov(p)?,
                        link,
                    });
                }
                _ => return Err(Error::parse(ln, format!("unknown manifest record {l:?}"))),
            }
        }
        Ok(cat)
    }

    pub fn embedded() -> Result<Catalog> {
        Catalog::load_with(&|name| {
            EMBEDDED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| Error::Internal(format!("catalog file {name} is not embedded")))
        })
    }

    pub fn from_dir(dir: &Path) -> Result<Catalog> {
        Catalog::load_with(&|name| Ok(fs::read_to_string(dir.join(name))?))
    }

    pub fn design(&self, shape: BlockShape, host: &Host) -> Option<&CatalogDesign> {
        self.designs.iter().find(|d| d.design.shape == shape && &d.design.host == host)
    }

    pub fn downlink(&self, name: &str) -> Option<&CatalogLink> {
        self.downlinks.iter().find(|d| d.name == name)
    }
}

/// The process-wide catalog, loaded on first use.
pub fn catalog() -> Result<&'static Catalog> {
    static CELL: OnceLock<std::result::Result<Catalog, String>> = OnceLock::new();
    CELL.get_or_init(|| {
        let c = match std::env::var_os("PATHLINK_CATALOG") {
            Some(dir) => Catalog::from_dir(Path::new(&dir)),
            None => Catalog::embedded(),
        };
        c.map_err(|e| e.to_string())
    })
    .as_ref()
    .map_err(|e| Error::Internal(format!("catalog failed to load: {e}")))
}

/// A basic down-link by name (`k8-drop`, `bip34`, ...).
pub fn basic_downlink(name: &str) -> Result<DownLink> {
    catalog()?
        .downlink(name)
        .map(|c| c.link.clone())
        .ok_or_else(|| Error::NotCataloged { shape: "P5 → P4".into(), host: name.into() })
}

fn not_cataloged(shape: BlockShape, host: &Host) -> Error {
    Error::NotCataloged { shape: shape.to_string(), host: host.to_string() }
}

/// A (host, shape)-design from closed-form constructions or the catalog.
pub fn base_design(shape: BlockShape, host: &Host) -> Result<Design> {
    match host {
        Host::Complete(n) => complete_base(shape, *n),
        Host::Bipartite(m, n) => bipartite_base(shape, *m, *n),
        Host::Edges(_) => Err(Error::Usage(
            "base designs live on complete or complete bipartite hosts".into(),
        )),
    }
}

fn complete_base(shape: BlockShape, n: usize) -> Result<Design> {
    let host = Host::Complete(n);
    if !design_admissible(shape, n) {
        return Err(Error::Usage(format!(
            "K_{n} has no {shape}-design (need {})",
            admissibility_rule(shape)
        )));
    }
    if n <= 1 {
        return Ok(Design::new(host, shape, Vec::new()));
    }
    match (shape.kind, shape.k) {
        (ShapeKind::Path, 4) => {
            let input = ApexInput::new(complete_graph(n)?, n - 2, n - 1)?;
            let part = p4_decompose_two_apex(&input)?;
            if !part.leftover.is_empty() {
                return Err(Error::Internal(format!("K_{n} left {} edges", part.leftover.len())));
            }
            return Ok(Design::new(host, shape, part.design.blocks));
        }
        (ShapeKind::Cycle, 4) => return develop(&c4_difference_family(n)?),
        (ShapeKind::Cycle, k) if k == n => return walecki(n),
        _ => {}
    }
    if let Some(c) = catalog()?.design(shape, &host) {
        return Ok(c.design.clone());
    }
    match (shape.kind, shape.k) {
        (ShapeKind::Path, 13) if n == 16 => k16_p13(),
        (ShapeKind::Path, 5) => {
            let target = p5_targets(n)[0];
            Ok(downlink_p5(n, target)?.downlink.domain)
        }
        (ShapeKind::Path, k) if k % 2 == 0 => {
            // Embed a two-group design; the new part is smaller than n.
            let q = k - 1;
            let n0 = 2 * q + n % q;
            if n < n0 + 2 {
                return Err(not_cataloged(shape, &host));
            }
            Ok(embed_pk(&complete_base(shape, n0)?, n)?.design)
        }
        _ => Err(not_cataloged(shape, &host)),
    }
}

/// Splits `count` into chunks of 2, 3 and 4.
fn small_chunks(count: usize) -> Option<Vec<usize>> {
    match count {
        0 | 1 => None,
        c if c % 2 == 0 => Some(vec![2; c / 2]),
        c => {
            let mut v = vec![3];
            v.extend(vec![2; (c - 3) / 2]);
            Some(v)
        }
    }
}

fn bipartite_base(shape: BlockShape, m: usize, n: usize) -> Result<Design> {
    let host = Host::Bipartite(m, n);
    if shape.kind == ShapeKind::Cycle {
        if let Some(c) = catalog()?.design(shape, &host) {
            return Ok(c.design.clone());
        }
        return Err(not_cataloged(shape, &host));
    }
    let k = shape.k;
    let q = k - 1;
    if (m * n) % q != 0 {
        return Err(Error::Usage(format!("K_{{{m},{n}}} has {} edges, not a multiple of {q}", m * n)));
    }
    let left: Vec<Vertex> = (0..m).collect();
    let right: Vec<Vertex> = (m..m + n).collect();
    if k % 2 == 0 && (m == q || n == q) {
        let (a, b) = if m == q { (m, n) } else { (n, m) };
        if (k - 2..=k).contains(&b) {
            let (template, first, second) = if a == b {
                (decompose_square_bipartite(k)?, &left, &right)
            } else if m == q {
                // Templates put the k−1 side second.
                (decompose_k_bipartite(k, n)?, &right, &left)
            } else {
                (decompose_k_bipartite(k, m)?, &left, &right)
            };
            let mut d = Design::new(host, shape, relabel(&template, first, second));
            d.comments = template.comments;
            return Ok(d);
        }
    }
    if k == 4 {
        let (threes, other) = if m % 3 == 0 { (&left, &right) } else { (&right, &left) };
        let sizes = small_chunks(other.len())
            .ok_or_else(|| Error::Usage(format!("K_{{{m},{n}}} is a star and has no P4-design")))?;
        let mut blocks = Vec::new();
        for t in threes.chunks(3) {
            let mut at = 0;
            for &s in &sizes {
                let o = &other[at..at + s];
                at += s;
                let piece = bipartite_base(shape, 3, s)?;
                blocks.extend(relabel(&piece, t, o));
            }
        }
        return Ok(Design::new(host, shape, blocks));
    }
    if let Some(c) = catalog()?.design(shape, &host) {
        return Ok(c.design.clone());
    }
    Err(not_cataloged(shape, &host))
}

/// Relabels a design on K_{p,q} (parts 0..p and p..p+q) onto `a` and `b`.
fn relabel(d: &Design, a: &[Vertex], b: &[Vertex]) -> Vec<Block> {
    let p = match d.host {
        Host::Bipartite(p, _) => p,
        _ => a.len(),
    };
    d.blocks
        .iter()
        .map(|bl| bl.relabel(|v| if v < p { a[v] } else { b[v - p] }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_catalog_loads() {
        let c = Catalog::embedded().unwrap();
        for name in crate::linker::atoms::ATOMS {
            assert!(c.downlink(name).is_some(), "{name}");
        }
        assert!(c.design(BlockShape::path(6), &Host::Complete(16)).is_some());
    }

    #[test]
    fn tampered_file_is_rejected() {
        let err = Catalog::load_with(&|name| {
            let (_, t) = EMBEDDED.iter().find(|(n, _)| *n == name).unwrap();
            Ok(if name == "bip34.link" { t.replace("link 0 0", "link 0 1") } else { t.to_string() })
        })
        .unwrap_err();
        assert!(err.to_string().contains("sha256"), "{err}");
    }

    #[test]
    fn closed_forms() {
        for n in [4, 6, 7, 9, 10, 12, 13] {
            assert!(verify_design(&base_design(BlockShape::path(4), &Host::Complete(n)).unwrap()).valid());
        }
        for (m, n) in [(3, 2), (3, 5), (6, 7), (4, 9), (2, 3)] {
            let d = base_design(BlockShape::path(4), &Host::Bipartite(m, n)).unwrap();
            assert!(verify_design(&d).valid(), "K_{m},{n}");
        }
        for (k, m, n) in [(6, 5, 4), (6, 6, 5), (8, 7, 7), (8, 8, 7)] {
            let d = base_design(BlockShape::path(k), &Host::Bipartite(m, n)).unwrap();
            assert!(verify_design(&d).valid(), "P{k} K_{m},{n}");
        }
        assert!(verify_design(&base_design(BlockShape::cycle(4), &Host::Complete(17)).unwrap()).valid());
        assert!(verify_design(&base_design(BlockShape::cycle(11), &Host::Complete(11)).unwrap()).valid());
    }

    #[test]
    fn p6_by_embedding() {
        let d = base_design(BlockShape::path(6), &Host::Complete(20)).unwrap();
        assert!(verify_design(&d).valid());
    }

    #[test]
    fn errors() {
        assert!(matches!(base_design(BlockShape::path(4), &Host::Complete(5)), Err(Error::Usage(_))));
        assert!(matches!(base_design(BlockShape::path(5), &Host::Complete(10)), Err(Error::Usage(_))));
        assert!(matches!(
            base_design(BlockShape::path(7), &Host::Complete(13)),
            Err(Error::NotCataloged { .. })
        ));
    }
}
