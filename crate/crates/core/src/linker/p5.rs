//! Down-links from (K_v, P_5)-designs to (K_n, P_4)-designs, n ∈ {v−1, v, v+1},
//! assembled by gluing basic down-links.
//!
//! Write v = ℓ + 24t. The vertices are laid out as t groups of 24
//! followed by the ℓ remaining ones, so a deleted vertex is v−1 and an
//! added vertex is v. Complete parts use the basic down-links of the
//! catalog; every pair of parts is joined through bipartite slabs cut into
//! K_{3,4} pieces (or K_{4,3} pieces losing the deleted vertex, or the
//! K_{9,24} piece gaining the added one).

use std::collections::BTreeSet;

use super::SpectrumWitness;
use crate::catalog::basic_downlink;
use crate::error::{Error, Result};
use crate::graph::{BlockShape, Design, DownLink, Host, Vertex};

/// One row of the gluing tables: residue of v mod 24, the target offset,
/// and the basic components on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GluingRow {
    pub residue: usize,
    pub offset: i8,
    pub domain: &'static str,
    pub codomain: &'static str,
}

pub const GLUING_TABLE: &[GluingRow] = &[
    GluingRow { residue: 1, offset: -1, domain: "(K_25,P_5) (K_3,4,P_5)", codomain: "(K_24,P_4) (K_3,4,P_4)" },
    GluingRow { residue: 8, offset: -1, domain: "(K_8,P_5) (K_24,P_5) (K_4,3,P_5)", codomain: "(K_7,P_4) (K_24,P_4) (K_4,3,P_4) (K_3,3,P_4)" },
    GluingRow { residue: 16, offset: -1, domain: "(K_16,P_5) (K_24,P_5) (K_4,3,P_5)", codomain: "(K_15,P_4) (K_24,P_4) (K_4,3,P_4) (K_3,3,P_4)" },
    GluingRow { residue: 17, offset: -1, domain: "(K_17,P_5) (K_24,P_5) (K_4,3,P_5)", codomain: "(K_16,P_4) (K_24,P_4) (K_4,3,P_4) (K_3,3,P_4)" },
    GluingRow { residue: 0, offset: 0, domain: "(K_24,P_5) (K_3,4,P_5)", codomain: "(K_24,P_4) (K_3,4,P_4)" },
    GluingRow { residue: 1, offset: 0, domain: "(K_9,P_5) (K_16,P_5) (K_24,P_5) (K_3,4,P_5)", codomain: "(K_9,P_4) (K_16,P_4) (K_24,P_4) (K_3,4,P_4)" },
    GluingRow { residue: 9, offset: 0, domain: "(K_9,P_5) (K_24,P_5) (K_3,4,P_5)", codomain: "(K_9,P_4) (K_24,P_4) (K_3,4,P_4)" },
    GluingRow { residue: 16, offset: 0, domain: "(K_16,P_5) (K_24,P_5) (K_3,4,P_5)", codomain: "(K_16,P_4) (K_24,P_4) (K_3,4,P_4)" },
    GluingRow { residue: 0, offset: 1, domain: "(K_24,P_5) (K_3,4,P_5)", codomain: "(K_25,P_4) (K_3,4,P_4)" },
    GluingRow { residue: 9, offset: 1, domain: "(K_9,P_5) (K_24,P_5) (K_3,4,P_5) (K_9,24,P_5)", codomain: "(K_10,P_4) (K_24,P_4) (K_3,4,P_4) (K_10,24,P_4)" },
];

pub fn gluing_row(v: usize, target: usize) -> Option<&'static GluingRow> {
    let offset = target as i64 - v as i64;
    GLUING_TABLE
        .iter()
        .find(|r| r.residue == v % 24 && i64::from(r.offset) == offset)
}

/// Orders n ∈ {v−1, v, v+1} the tables reach from v.
pub fn p5_targets(v: usize) -> Vec<usize> {
    [v.wrapping_sub(1), v, v + 1]
        .into_iter()
        .filter(|&n| v > 1 && gluing_row(v, n).is_some())
        .collect()
}

#[derive(Debug, Clone)]
enum Node {
    /// A basic down-link on a complete part. Its vertex list ends with the
    /// deleted vertex for "-drop" atoms.
    Leaf(&'static str, Vec<Vertex>),
    Join(Vec<Node>),
}

impl Node {
    fn vertices(&self) -> Vec<Vertex> {
        match self {
            Node::Leaf(_, vs) => vs.clone(),
            Node::Join(cs) => {
                let s: BTreeSet<Vertex> = cs.iter().flat_map(Node::vertices).collect();
                s.into_iter().collect()
            }
        }
    }
}

struct Component {
    link: DownLink,
    /// Local vertex id → global id.
    map: Vec<Vertex>,
}

struct Gluer {
    v: usize,
    /// The deleted vertex, if any.
    x: Option<Vertex>,
    /// The added vertex, if any.
    alpha: Option<Vertex>,
    parts: Vec<Component>,
    trace: Vec<String>,
}

impl Gluer {
    fn atom(&mut self, name: &'static str, map: Vec<Vertex>) -> Result<()> {
        let link = basic_downlink(name)?;
        self.parts.push(Component { link, map });
        Ok(())
    }

    fn node(&mut self, n: &Node) -> Result<()> {
        match n {
            Node::Leaf(name, vs) => {
                let mut map = vs.clone();
                if name.ends_with("-apex") {
                    map.push(self.alpha.expect("apex atoms need an added vertex"));
                }
                self.trace.push(format!("{name} on {}..={}", vs[0], vs[vs.len() - 1]));
                self.atom(name, map)
            }
            Node::Join(cs) => {
                for c in cs {
                    self.node(c)?;
                }
                for i in 0..cs.len() {
                    for j in i + 1..cs.len() {
                        self.join(&cs[i], &cs[j])?;
                    }
                }
                Ok(())
            }
        }
    }

    fn join(&mut self, a: &Node, b: &Node) -> Result<()> {
        if let (Node::Leaf("k9-apex", nine), Node::Leaf("k24-same", group))
        | (Node::Leaf("k24-same", group), Node::Leaf("k9-apex", nine)) = (a, b)
        {
            let mut map = group.clone();
            map.extend(nine);
            map.push(self.alpha.unwrap());
            self.trace.push(format!("bip9x24-apex between {}.. and {}..", nine[0], group[0]));
            return self.atom("bip9x24-apex", map);
        }
        let (va, vb) = (a.vertices(), b.vertices());
        let shared: BTreeSet<Vertex> = va.iter().filter(|x| vb.contains(x)).copied().collect();
        let va: Vec<Vertex> = va.into_iter().filter(|x| !shared.contains(x)).collect();
        let vb: Vec<Vertex> = vb.into_iter().filter(|x| !shared.contains(x)).collect();
        // The side holding x is the one cut into chunks.
        let (ca, cb) = if self.x.is_some_and(|x| vb.contains(&x)) { (vb, va) } else { (va, vb) };
        self.slab(&ca, &cb)
            .or_else(|_| if self.x.is_some_and(|x| ca.contains(&x)) { Err(()) } else { self.slab(&cb, &ca) })
            .map_err(|_| {
                Error::Internal(format!("cannot cut K_{{{},{}}} into K_{{3,4}} pieces", ca.len(), cb.len()))
            })?
    }

    /// Cuts `a` into chunks of 3 and 4 (3s first, so x ends up in a final
    /// 4-chunk) and `b` into pieces of the complementary size.
    fn slab(&mut self, a: &[Vertex], b: &[Vertex]) -> std::result::Result<Result<()>, ()> {
        let has_x = self.x.is_some_and(|x| a.contains(&x));
        let fits = |n4: usize| {
            let n3 = (a.len() - 4 * n4) / 3;
            (a.len() - 4 * n4) % 3 == 0
                && (n3 == 0 || b.len() % 4 == 0)
                && (n4 == 0 || b.len() % 3 == 0)
                && (!has_x || n4 > 0)
        };
        let n4 = (0..=a.len() / 4).rev().find(|&n4| fits(n4)).ok_or(())?;
        let n3 = (a.len() - 4 * n4) / 3;
        if has_x && a.last() != self.x.as_ref() {
            return Err(());
        }
        let mut at = 0;
        let mut pieces = 0;
        for size in std::iter::repeat_n(3, n3).chain(std::iter::repeat_n(4, n4)) {
            let chunk = &a[at..at + size];
            at += size;
            for other in b.chunks(7 - size) {
                let r = if size == 3 {
                    self.atom("bip34", [chunk, other].concat())
                } else if Some(chunk[3]) == self.x {
                    self.atom("bip43-drop", [chunk, other].concat())
                } else {
                    self.atom("bip34", [other, chunk].concat())
                };
                if let Err(e) = r {
                    return Ok(Err(e));
                }
                pieces += 1;
            }
        }
        self.trace.push(format!(
            "K_{{{},{}}} cut into {pieces} pieces",
            a.len(),
            b.len()
        ));
        Ok(Ok(()))
    }

    fn finish(self, target: usize) -> Result<SpectrumWitness> {
        let mut dom = Vec::new();
        let mut cod = Vec::new();
        let mut map = Vec::new();
        for c in &self.parts {
            let (d0, c0) = (dom.len(), cod.len());
            dom.extend(c.link.domain.blocks.iter().map(|b| b.relabel(|u| c.map[u])));
            cod.extend(c.link.codomain.blocks.iter().map(|b| b.relabel(|u| c.map[u])));
            map.extend(c.link.map.iter().map(|&(i, j)| (d0 + i, c0 + j)));
        }
        let dl = DownLink {
            domain: Design::new(Host::Complete(self.v), BlockShape::path(5), dom),
            codomain: Design::new(Host::Complete(target), BlockShape::path(4), cod),
            map,
        };
        SpectrumWitness::new(dl, "p5-gluing", self.trace)
    }
}

fn leaf(name: &'static str, range: std::ops::Range<usize>) -> Node {
    Node::Leaf(name, range.collect())
}

fn plan(v: usize, target: usize) -> Node {
    let l = v % 24;
    let t = v / 24;
    let groups = |count: usize, name: &'static str| -> Vec<Node> {
        (0..count).map(|i| leaf(name, 24 * i..24 * (i + 1))).collect()
    };
    let h = 24 * t;
    let mut parts;
    match (l, target as i64 - v as i64) {
        (1, -1) => {
            // Every group forms a K_25 with the deleted vertex.
            let x = v - 1;
            parts = (0..t)
                .map(|i| {
                    let g = 24 * i;
                    let mut sixteen: Vec<Vertex> = (g + 9..g + 24).collect();
                    sixteen.push(x);
                    Node::Join(vec![leaf("k9-same", g..g + 9), Node::Leaf("k16-drop", sixteen)])
                })
                .collect();
        }
        (1, 0) => {
            parts = groups(t - 1, "k24-same");
            let g = 24 * (t - 1);
            parts.push(leaf("k9-same", g..g + 9));
            parts.push(leaf("k16-same", g + 9..v));
        }
        (17, -1) => {
            parts = groups(t, "k24-same");
            parts.push(leaf("k9-same", h..h + 9));
            parts.push(leaf("k8-drop", h + 9..v));
        }
        (8, -1) => {
            parts = groups(t, "k24-same");
            parts.push(leaf("k8-drop", h..v));
        }
        (16, -1) => {
            parts = groups(t, "k24-same");
            parts.push(leaf("k16-drop", h..v));
        }
        (0, 0) => parts = groups(t, "k24-same"),
        (9, 0) => {
            parts = groups(t, "k24-same");
            parts.push(leaf("k9-same", h..v));
        }
        (16, 0) => {
            parts = groups(t, "k24-same");
            parts.push(leaf("k16-same", h..v));
        }
        (0, 1) => parts = groups(t, "k24-apex"),
        (9, 1) => {
            parts = groups(t, "k24-same");
            parts.push(leaf("k9-apex", h..v));
        }
        _ => unreachable!("plan called without a table row"),
    }
    Node::Join(parts)
}

pub fn downlink_p5(v: usize, target: usize) -> Result<SpectrumWitness> {
    if v <= 1 || (v % 8 != 0 && v % 8 != 1) {
        return Err(Error::Usage(format!("(K_v,P_5)-designs need v ≡ 0,1 (mod 8), v > 1; got {v}")));
    }
    let Some(row) = gluing_row(v, target) else {
        let reach: Vec<String> = p5_targets(v).iter().map(|n| n.to_string()).collect();
        return Err(Error::Usage(format!(
            "no gluing row for v = {v} ≡ {} (mod 24) and target {target}: target v−1 needs v ≡ 1,8,16,17, \
             target v needs v ≡ 0,1,9,16, target v+1 needs v ≡ 0,9 (mod 24); reachable here: {{{}}}",
            v % 24,
            reach.join(",")
        )));
    };
    let mut g = Gluer {
        v,
        x: (target < v).then_some(v - 1),
        alpha: (target > v).then_some(v),
        parts: Vec::new(),
        trace: vec![format!("row {}+24t, offset {}: {} → {}", row.residue, row.offset, row.domain, row.codomain)],
    };
    g.node(&plan(v, target))?;
    g.finish(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets() {
        assert_eq!(p5_targets(8), vec![7]);
        assert_eq!(p5_targets(9), vec![9, 10]);
        assert_eq!(p5_targets(24), vec![24, 25]);
        assert_eq!(p5_targets(25), vec![24, 25]);
        assert_eq!(p5_targets(33), vec![33, 34]);
    }

    #[test]
    fn small_rows() {
        for (v, n) in [(8, 7), (9, 9), (9, 10), (16, 15), (16, 16), (17, 16), (24, 24), (24, 25), (25, 24), (25, 25)] {
            let w = downlink_p5(v, n).unwrap();
            assert_eq!((w.v, w.n), (v, n));
            assert_eq!(w.downlink.codomain.blocks.len(), n * (n - 1) / 6);
        }
    }

    #[test]
    fn inadmissible_targets() {
        assert!(matches!(downlink_p5(33, 32), Err(Error::Usage(_))));
        assert!(matches!(downlink_p5(10, 9), Err(Error::Usage(_))));
        assert!(matches!(downlink_p5(8, 8), Err(Error::Usage(_))));
    }
}
