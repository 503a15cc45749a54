//! Line-based text formats for designs, down-links and witness bundles.
//!
//! ```text
//! design P4 host=K 4
//! # optional comment lines
//! block 0 1 2 3
//! block 0 2 3 1
//! ```
//!
//! Hosts are written `host=K n`, `host=K m n` or `host=edges`; the last is
//! followed by `edge u v` lines after the blocks. A down-link file starts
//! with `downlink <domain-file> <codomain-file>` (paths relative to the link
//! file) followed by `link i j` lines.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Block, BlockShape, Design, DownLink, Edge, Graph, Host, Vertex};
use crate::linker::SpectrumWitness;

fn numbers(line: usize, toks: &[&str]) -> Result<Vec<usize>> {
    toks.iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got {t:?}")))
        })
        .collect()
}

fn parse_host(line: usize, toks: &[&str]) -> Result<Host> {
    let (first, rest) = toks
        .split_first()
        .ok_or_else(|| Error::parse(line, "missing host descriptor"))?;
    let kind = first
        .strip_prefix("host=")
        .ok_or_else(|| Error::parse(line, format!("expected host=..., got {first:?}")))?;
    match (kind, numbers(line, rest)?.as_slice()) {
        ("K", [n]) => Ok(Host::Complete(*n)),
        ("K", [m, n]) => Ok(Host::Bipartite(*m, *n)),
        ("edges", []) => Ok(Host::Edges(Graph::new())),
        _ => Err(Error::parse(line, format!("bad host descriptor {:?}", toks.join(" ")))),
    }
}

pub fn parse_design(text: &str) -> Result<Design> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hl, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::parse(1, "empty design file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() < 3 || toks[0] != "design" {
        return Err(Error::parse(hl, "header must read `design <shape> host=...`"));
    }
    let shape = BlockShape::parse(toks[1]).map_err(|e| Error::parse(hl, e.to_string()))?;
    let mut host = parse_host(hl, &toks[2..])?;
    let mut blocks = Vec::new();
    let mut comments = Vec::new();
    let mut edges = Vec::new();
    for (ln, l) in lines {
        if l.is_empty() {
            continue;
        }
        if let Some(c) = l.strip_prefix('#') {
            comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "block" => {
                let vs = numbers(ln, &toks[1..])?;
                if vs.is_empty() {
                    return Err(Error::parse(ln, "empty block"));
                }
                blocks.push(Block::new(shape.kind, vs));
            }
            "edge" => {
                if !matches!(host, Host::Edges(_)) {
                    return Err(Error::parse(ln, "edge lines require host=edges"));
                }
                match numbers(ln, &toks[1..])?.as_slice() {
                    [u, v] if u != v => edges.push(Edge::new(*u, *v)),
                    _ => return Err(Error::parse(ln, "edge needs two distinct vertices")),
                }
            }
            other => return Err(Error::parse(ln, format!("unknown record {other:?}"))),
        }
    }
    if let Host::Edges(g) = &mut host {
        *g = Graph::from_edges(edges);
    }
    Ok(Design {
        host,
        shape,
        blocks,
        comments,
    })
}

fn host_descriptor(h: &Host) -> String {
    match h {
        Host::Complete(n) => format!("host=K {n}"),
        Host::Bipartite(m, n) => format!("host=K {m} {n}"),
        Host::Edges(_) => "host=edges".to_string(),
    }
}

pub fn serialize_design(d: &Design) -> String {
    let mut out = format!("design {} {}\n", d.shape, host_descriptor(&d.host));
    for c in &d.comments {
        out.push_str(&format!("# {c}\n"));
    }
    for b in &d.blocks {
        out.push_str("block");
        for v in b.vertices() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    if let Host::Edges(g) = &d.host {
        for e in g.edges() {
            out.push_str(&format!("edge {} {}\n", e.u(), e.v()));
        }
    }
    out
}

/// Writes via a temporary file and rename so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp~");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_design(path: &Path) -> Result<Design> {
    parse_design(&fs::read_to_string(path)?)
}

pub fn write_design(path: &Path, d: &Design) -> Result<()> {
    write_atomic(path, &serialize_design(d))
}

/// Header and links of a down-link file, without loading the designs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkFile {
    pub domain: String,
    pub codomain: String,
    pub map: Vec<(usize, usize)>,
}

pub fn parse_link_file(text: &str) -> Result<LinkFile> {
    let mut out: Option<LinkFile> = None;
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        match (&mut out, toks.as_slice()) {
            (None, ["downlink", dom, cod]) => {
                out = Some(LinkFile {
                    domain: dom.to_string(),
                    codomain: cod.to_string(),
                    map: Vec::new(),
                })
            }
            (None, _) => {
                return Err(Error::parse(ln, "header must read `downlink <domain> <codomain>`"))
            }
            (Some(f), ["link", rest @ ..]) => match numbers(ln, rest)?.as_slice() {
                [a, b] => f.map.push((*a, *b)),
                _ => return Err(Error::parse(ln, "link needs two indices")),
            },
            (Some(_), _) => return Err(Error::parse(ln, format!("unknown record {l:?}"))),
        }
    }
    out.ok_or_else(|| Error::parse(1, "empty down-link file"))
}

pub fn serialize_link_file(f: &LinkFile) -> String {
    let mut out = format!("downlink {} {}\n", f.domain, f.codomain);
    for (a, b) in &f.map {
        out.push_str(&format!("link {a} {b}\n"));
    }
    out
}

fn sibling(base: &Path, name: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(name)
}

pub fn read_downlink(path: &Path) -> Result<DownLink> {
    let f = parse_link_file(&fs::read_to_string(path)?)?;
    Ok(DownLink {
        domain: read_design(&sibling(path, &f.domain))?,
        codomain: read_design(&sibling(path, &f.codomain))?,
        map: f.map,
    })
}

const MANIFEST: &str = "manifest.txt";
const DOMAIN_FILE: &str = "domain.design";
const CODOMAIN_FILE: &str = "codomain.design";
const LINK_FILE: &str = "downlink.link";

/// Writes `dir/manifest.txt` plus the domain, codomain and link files.
pub fn write_witness_bundle(dir: &Path, w: &SpectrumWitness) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_design(&dir.join(DOMAIN_FILE), &w.downlink.domain)?;
    write_design(&dir.join(CODOMAIN_FILE), &w.downlink.codomain)?;
    let link = LinkFile {
        domain: DOMAIN_FILE.into(),
        codomain: CODOMAIN_FILE.into(),
        map: w.downlink.map.clone(),
    };
    write_atomic(&dir.join(LINK_FILE), &serialize_link_file(&link))?;
    let mut manifest = format!(
        "witness\ngamma {}\nv {}\nn {}\ntheorem {}\ndomain {DOMAIN_FILE}\ncodomain {CODOMAIN_FILE}\ndownlink {LINK_FILE}\n",
        w.gamma, w.v, w.n, w.theorem
    );
    for t in &w.trace {
        manifest.push_str(&format!("# {t}\n"));
    }
    write_atomic(&dir.join(MANIFEST), &manifest)
}

pub fn is_witness_bundle(path: &Path) -> bool {
    path.is_dir() && path.join(MANIFEST).is_file()
}

pub fn read_witness_bundle(dir: &Path) -> Result<SpectrumWitness> {
    let text = fs::read_to_string(dir.join(MANIFEST))?;
    let mut gamma = None;
    let (mut v, mut n, mut theorem, mut link) = (None, None, String::new(), None);
    let mut trace = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        if let Some(t) = l.strip_prefix("# ") {
            trace.push(t.to_string());
            continue;
        }
        let (key, val) = l.split_once(' ').unwrap_or((l, ""));
        match key {
            "witness" | "" | "domain" | "codomain" => {}
            "gamma" => gamma = Some(BlockShape::parse(val).map_err(|e| Error::parse(ln, e.to_string()))?),
            "v" => v = Some(numbers(ln, &[val])?[0]),
            "n" => n = Some(numbers(ln, &[val])?[0]),
            "theorem" => theorem = val.to_string(),
            "downlink" => link = Some(val.to_string()),
            _ => return Err(Error::parse(ln, format!("unknown manifest key {key:?}"))),
        }
    }
    let missing = |what: &str| Error::parse(0, format!("manifest lacks `{what}`"));
    Ok(SpectrumWitness {
        gamma: gamma.ok_or_else(|| missing("gamma"))?,
        v: v.ok_or_else(|| missing("v"))?,
        n: n.ok_or_else(|| missing("n"))?,
        downlink: read_downlink(&dir.join(link.ok_or_else(|| missing("downlink"))?))?,
        theorem,
        trace,
    })
}

/// Parses a host argument: `K9`, `K3,4`, `K 3 4`, or `edges:<file>` (a
/// whitespace separated list of `u v` pairs, `#` comments allowed).
pub fn parse_host_arg(s: &str) -> Result<Host> {
    if let Some(path) = s.strip_prefix("edges:") {
        let text = fs::read_to_string(path)?;
        let mut g = Graph::new();
        for (i, l) in text.lines().enumerate() {
            let l = l.split('#').next().unwrap().trim();
            if l.is_empty() {
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().filter(|t| *t != "edge").collect();
            match numbers(i + 1, &toks)?.as_slice() {
                [u, v] if u != v => {
                    g.add_edge(Edge::new(*u, *v));
                }
                _ => return Err(Error::parse(i + 1, "expected an edge `u v`")),
            }
        }
        return Ok(Host::Edges(g));
    }
    let body = s
        .strip_prefix('K')
        .or_else(|| s.strip_prefix("K_"))
        .ok_or_else(|| Error::Usage(format!("bad host {s:?}; expected Kn, Km,n or edges:<file>")))?;
    let body = body.trim_start_matches('_').trim_start_matches(['{', ' ']).trim_end_matches('}');
    let parts: Vec<&str> = body
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    let nums: Vec<usize> = parts
        .iter()
        .map(|t| t.parse().map_err(|_| Error::Usage(format!("bad host {s:?}"))))
        .collect::<Result<_>>()?;
    match nums.as_slice() {
        [n] => Ok(Host::Complete(*n)),
        [m, n] => Ok(Host::Bipartite(*m, *n)),
        _ => Err(Error::Usage(format!("bad host {s:?}"))),
    }
}

/// Blocks as plain vertex lists, for comparisons that ignore shape.
pub fn block_lists(d: &Design) -> Vec<Vec<Vertex>> {
    d.blocks.iter().map(|b| b.vertices().to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ShapeKind;
    use proptest::prelude::*;

    const K4: &str = "design P4 host=K 4\n# two paths\nblock 0 1 2 3\nblock 2 0 3 1\n";

    #[test]
    fn design_round_trip() {
        let d = parse_design(K4).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.comments, vec!["two paths".to_string()]);
        let s = serialize_design(&d);
        assert_eq!(parse_design(&s).unwrap(), d);
        assert_eq!(serialize_design(&parse_design(&s).unwrap()), s);
    }

    #[test]
    fn edges_host() {
        let text = "design P4 host=edges\nblock 0 1 2 3\nedge 0 1\nedge 1 2\nedge 2 3\n";
        let d = parse_design(text).unwrap();
        assert_eq!(d.host.edge_count(), 3);
        assert_eq!(serialize_design(&d), text);
    }

    #[test]
    fn parse_errors_carry_lines() {
        match parse_design("design P4 host=K 4\nblock 0 1 x 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_design("desgn P4 host=K 4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_design("design P4 host=Q 4\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_design(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn link_file_round_trip() {
        let f = parse_link_file("downlink a.design b.design\nlink 0 1\nlink 1 0\n").unwrap();
        assert_eq!(f.map, vec![(0, 1), (1, 0)]);
        assert_eq!(parse_link_file(&serialize_link_file(&f)).unwrap(), f);
        assert!(parse_link_file("link 0 1\n").is_err());
    }

    #[test]
    fn host_args() {
        assert_eq!(parse_host_arg("K9").unwrap(), Host::Complete(9));
        assert_eq!(parse_host_arg("K3,4").unwrap(), Host::Bipartite(3, 4));
        assert_eq!(parse_host_arg("K_{3,4}").unwrap(), Host::Bipartite(3, 4));
        assert!(parse_host_arg("L9").is_err());
    }

    fn arb_design() -> impl Strategy<Value = Design> {
        let block = prop::collection::vec(0usize..30, 4..=6);
        (
            prop::bool::ANY,
            prop::collection::vec(block, 0..8),
            prop::collection::vec((0usize..20, 0usize..20), 0..10),
            1usize..30,
        )
            .prop_map(|(cyc, blocks, edges, n)| {
                let k = 4;
                let kind = if cyc { ShapeKind::Cycle } else { ShapeKind::Path };
                let shape = BlockShape { kind, k };
                let blocks = blocks
                    .into_iter()
                    .map(|mut b| {
                        b.truncate(k);
                        Block::new(kind, b)
                    })
                    .collect();
                let host = if edges.len() % 2 == 0 {
                    Host::Complete(n)
                } else {
                    Host::Edges(Graph::from_edges(
                        edges.into_iter().filter(|(a, b)| a != b).map(|(a, b)| Edge::new(a, b)),
                    ))
                };
                Design::new(host, shape, blocks)
            })
    }

    proptest! {
        #[test]
        fn parse_serialize_is_identity(d in arb_design()) {
            let s = serialize_design(&d);
            let back = parse_design(&s).unwrap();
            prop_assert_eq!(&back, &d);
            prop_assert_eq!(serialize_design(&back), s);
        }
    }
}
