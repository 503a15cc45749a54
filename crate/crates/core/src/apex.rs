//! P_4-decomposition of graphs with two universal vertices.
//!
//! Given apexes α and β, the rest of the graph G is stripped of a maximal
//! set of edge-disjoint P_4s. What remains of G has no P_4: it is a union of
//! isolated vertices, stars and triangles. Each of those, joined to {α,β},
//! decomposes into P_4s up to a small remnant. The remnants are grouped in
//! threes where possible and the final gadget (remnants plus the edge αβ)
//! is decomposed from the gadget catalog, stepping back one construction
//! step in the cases where the gadget alone is a bare triangle.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Block, BlockShape, Design, Edge, Graph, Host, Vertex};
use crate::oracle::{certify_claimed_graph, certify_with_leftover};
use crate::verify::verify_design;

#[derive(Debug, Clone)]
pub struct ApexInput {
    pub graph: Graph,
    pub alpha: Vertex,
    pub beta: Vertex,
}

impl ApexInput {
    pub fn new(graph: Graph, alpha: Vertex, beta: Vertex) -> Result<ApexInput> {
        if alpha == beta {
            return Err(Error::Usage("apexes must be distinct".into()));
        }
        let n = graph.vertex_count();
        for a in [alpha, beta] {
            if !graph.contains_vertex(a) || graph.degree(a) != n - 1 {
                return Err(Error::Usage(format!(
                    "vertex {a} is not adjacent to every other vertex"
                )));
            }
        }
        Ok(ApexInput { graph, alpha, beta })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub center: Vertex,
    pub leaves: Vec<Vertex>,
}

impl Star {
    /// Stars with an odd number of vertices have an even number of leaves.
    pub fn has_odd_order(&self) -> bool {
        self.leaves.len() % 2 == 0
    }
}

/// The components of a P_4-free graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RemnantClassification {
    pub isolated: Vec<Vertex>,
    /// Stars with an odd number of vertices.
    pub odd_stars: Vec<Star>,
    /// Stars with an even number of vertices.
    pub even_stars: Vec<Star>,
    pub triangles: Vec<[Vertex; 3]>,
}

/// Labels for the branches the construction takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseLabel {
    /// |I| mod 3, as 1..=3.
    Isolated(u8),
    /// |S_1| mod 3, as 1..=3.
    OddStars(u8),
    /// |S_2| mod 3, as 1..=3.
    EvenStars(u8),
    /// One of the nine remnant combinations whose gadget has 0 mod 3 edges.
    Combination(u8),
    /// Remnant combination with 1 or 2 mod 3 edges, keyed by the residues.
    Leftover { isolated: u8, odd: u8, even: u8 },
    /// Step back over two radii of the odd star whose remnant is left (a_3).
    RepairTwoRadii,
    /// Step back over three isolated vertices (a_4, |I| > 1).
    RepairIsolatedTriple,
    /// Step back over a triangle gadget (a_4, |I| = 1, triangles present).
    RepairTriangle,
    /// Step back over two radii of a star with at least two leaves (a_4).
    RepairStarRadii,
    /// Step back over the last triple of single-edge stars (a_4).
    RepairEdgeTriple,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::Isolated(r) => write!(f, "i_{r}"),
            CaseLabel::OddStars(r) => write!(f, "iii_1{r}"),
            CaseLabel::EvenStars(r) => write!(f, "iii_2{r}"),
            CaseLabel::Combination(r) => write!(f, "a_{r}"),
            CaseLabel::Leftover { isolated, odd, even } => write!(f, "b_{isolated}{odd}{even}"),
            CaseLabel::RepairTwoRadii => write!(f, "repair-Fig6"),
            CaseLabel::RepairIsolatedTriple => write!(f, "repair-Fig7"),
            CaseLabel::RepairTriangle => write!(f, "repair-Fig8"),
            CaseLabel::RepairStarRadii => write!(f, "repair-Fig9"),
            CaseLabel::RepairEdgeTriple => write!(f, "repair-Fig10"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PartitionResult {
    /// P_4-design of the input graph minus the leftover edges.
    pub design: Design,
    pub leftover: Vec<Edge>,
    pub case_trace: Vec<CaseLabel>,
}

/// Greedily removes P_4s from `g` until none remain.
///
/// Middle edges are scanned in canonical order and each is extended by the
/// lowest-id neighbors that give a path. The residual is P_4-free.
pub fn extract_maximal_p4(g: &Graph) -> (Vec<Block>, Graph) {
    let mut residual = g.clone();
    let mut adj = g.adjacency();
    let mut blocks = Vec::new();
    'outer: loop {
        for e in residual.edges().collect::<Vec<_>>() {
            let (u, w) = (e.u(), e.v());
            for &a in adj[&u].iter().filter(|&&a| a != w) {
                if let Some(&d) = adj[&w].iter().find(|&&d| d != u && d != a) {
                    let path = [a, u, w, d];
                    for pair in path.windows(2) {
                        residual.remove_edge(Edge::new(pair[0], pair[1]));
                        adj.get_mut(&pair[0]).unwrap().retain(|&x| x != pair[1]);
                        adj.get_mut(&pair[1]).unwrap().retain(|&x| x != pair[0]);
                    }
                    blocks.push(Block::path(path.to_vec()));
                    continue 'outer;
                }
            }
        }
        break;
    }
    (blocks, residual)
}

/// Splits a P_4-free graph into isolated vertices, stars and triangles.
pub fn classify_remnant(residual: &Graph) -> Result<RemnantClassification> {
    let mut out = RemnantClassification::default();
    let adj = residual.adjacency();
    for comp in residual.components() {
        let edges: usize = comp.iter().map(|v| adj[v].len()).sum::<usize>() / 2;
        match comp.len() {
            1 => out.isolated.push(comp[0]),
            3 if edges == 3 => out.triangles.push([comp[0], comp[1], comp[2]]),
            n if edges == n - 1 => {
                let center = *comp
                    .iter()
                    .find(|v| adj[v].len() == n - 1)
                    .ok_or_else(|| Error::Internal(format!("component {comp:?} contains a P_4")))?;
                let leaves: Vec<Vertex> = comp.iter().copied().filter(|&v| v != center).collect();
                let star = Star { center, leaves };
                if star.has_odd_order() {
                    out.odd_stars.push(star);
                } else {
                    out.even_stars.push(star);
                }
            }
            _ => {
                return Err(Error::Internal(format!(
                    "component {comp:?} is neither a star nor a triangle"
                )))
            }
        }
    }
    Ok(out)
}

fn p(vs: &[Vertex]) -> Block {
    Block::path(vs.to_vec())
}

fn edges_of(blocks: &[Block]) -> Vec<Edge> {
    blocks.iter().flat_map(|b| b.edges()).collect()
}

/// Decomposes a star joined to both apexes, minus its remnant.
///
/// Leaves are paired in ascending order; each pair yields two P_4s. The
/// remnant is `[α,c,β]` for an even number of leaves and
/// `(α,c,β,v) ∪ [c,v]` otherwise, `v` being the last leaf.
pub fn decompose_star_gadget(
    star: &Star,
    alpha: Vertex,
    beta: Vertex,
) -> (Vec<Vec<Block>>, Vec<Edge>) {
    let c = star.center;
    let mut pairs = Vec::new();
    let mut chunks = star.leaves.chunks_exact(2);
    for pair in &mut chunks {
        let (l1, l2) = (pair[0], pair[1]);
        pairs.push(vec![p(&[alpha, l1, c, l2]), p(&[l1, beta, l2, alpha])]);
    }
    let mut remnant = vec![Edge::new(alpha, c), Edge::new(c, beta)];
    if let [v] = chunks.remainder() {
        remnant.extend([Edge::new(beta, *v), Edge::new(*v, alpha), Edge::new(c, *v)]);
    }
    (pairs, remnant)
}

/// Two P_4s on K_{{α,β},{x,y,z}}.
fn apex_triple(alpha: Vertex, beta: Vertex, x: Vertex, y: Vertex, z: Vertex) -> Vec<Block> {
    vec![p(&[x, alpha, y, beta]), p(&[x, beta, z, alpha])]
}

fn graph_of(edges: &[Edge]) -> Graph {
    Graph::from_edges(edges.iter().copied())
}

fn certify(edges: &[Edge]) -> Result<Vec<Block>> {
    Ok(certify_claimed_graph(&graph_of(edges), BlockShape::path(4))?.blocks)
}

/// Partitions a two-apex graph into a P_4-design plus |E| mod 3 edges.
pub fn p4_decompose_two_apex(input: &ApexInput) -> Result<PartitionResult> {
    let ApexInput { graph, alpha, beta } = input;
    let (alpha, beta) = (*alpha, *beta);
    let mut trace = Vec::new();

    let mut g = Graph::with_vertices(graph.vertices().filter(|&v| v != alpha && v != beta));
    for e in graph.edges() {
        if !e.contains(alpha) && !e.contains(beta) {
            g.add_edge(e);
        }
    }
    let (mut blocks, residual) = extract_maximal_p4(&g);
    let cls = classify_remnant(&residual)?;

    // i) isolated vertices, in triples
    let mut iso_triples: Vec<Vec<Block>> = Vec::new();
    let mut iso = cls.isolated.chunks_exact(3);
    for h in &mut iso {
        iso_triples.push(apex_triple(alpha, beta, h[0], h[1], h[2]));
    }
    let iso_rest: Vec<Vertex> = iso.remainder().to_vec();
    let r_iso = iso_rest.len();
    trace.push(CaseLabel::Isolated(r_iso as u8 + 1));
    let mut remnant: Vec<Edge> = iso_rest
        .iter()
        .flat_map(|&h| [Edge::new(alpha, h), Edge::new(h, beta)])
        .collect();

    // ii) triangles
    let mut triangle_gadgets: Vec<Vec<Block>> = Vec::new();
    for t in &cls.triangles {
        let mut es = vec![Edge::new(t[0], t[1]), Edge::new(t[1], t[2]), Edge::new(t[0], t[2])];
        for &x in t {
            es.push(Edge::new(alpha, x));
            es.push(Edge::new(beta, x));
        }
        triangle_gadgets.push(certify(&es)?);
    }

    // iii) stars
    let mut star_pairs: Vec<(Vertex, Vec<Vec<Block>>)> = Vec::new();
    let mut odd_remnant_centers = Vec::new();
    for s in &cls.odd_stars {
        let (pairs, _) = decompose_star_gadget(s, alpha, beta);
        star_pairs.push((s.center, pairs));
        odd_remnant_centers.push(s.center);
    }
    let mut even_remnants: Vec<Vec<Edge>> = Vec::new();
    for s in &cls.even_stars {
        let (pairs, rem) = decompose_star_gadget(s, alpha, beta);
        star_pairs.push((s.center, pairs));
        even_remnants.push(rem);
    }
    let mut odd_triples: Vec<Vec<Block>> = Vec::new();
    let mut odd = odd_remnant_centers.chunks_exact(3);
    for c in &mut odd {
        odd_triples.push(apex_triple(alpha, beta, c[0], c[1], c[2]));
    }
    let odd_rest: Vec<Vertex> = odd.remainder().to_vec();
    let r_odd = odd_rest.len();
    trace.push(CaseLabel::OddStars(r_odd as u8 + 1));
    for &c in &odd_rest {
        remnant.extend([Edge::new(alpha, c), Edge::new(c, beta)]);
    }
    let mut even_triples: Vec<Vec<Block>> = Vec::new();
    let mut even = even_remnants.chunks_exact(3);
    for trio in &mut even {
        even_triples.push(certify(&trio.concat())?);
    }
    let even_rest = even.remainder().to_vec();
    let r_even = even_rest.len();
    trace.push(CaseLabel::EvenStars(r_even as u8 + 1));
    for rem in &even_rest {
        remnant.extend(rem.iter().copied());
    }

    remnant.push(Edge::new(alpha, beta));
    let t = remnant.len();
    let mut leftover = Vec::new();

    if t % 3 == 0 {
        let case = combination_case(r_iso, r_odd, r_even)
            .ok_or_else(|| Error::Internal(format!("no case for residues ({r_iso},{r_odd},{r_even})")))?;
        trace.push(CaseLabel::Combination(case));
        let gadget_blocks = match case {
            3 => {
                // The last odd-order star left its [α,c,β]; it has at least two leaves.
                trace.push(CaseLabel::RepairTwoRadii);
                let c = odd_rest[0];
                let pairs = &mut star_pairs.iter_mut().find(|(cc, _)| *cc == c).unwrap().1;
                let back = pairs.pop().ok_or_else(|| {
                    Error::Internal(format!("odd star at {c} has no radii to recover"))
                })?;
                let mut es = remnant.clone();
                es.extend(edges_of(&back));
                certify(&es)?
            }
            4 => {
                let mut es = remnant.clone();
                if cls.isolated.len() > 1 {
                    trace.push(CaseLabel::RepairIsolatedTriple);
                    es.extend(edges_of(&iso_triples.pop().unwrap()));
                } else if let Some(tri) = triangle_gadgets.pop() {
                    trace.push(CaseLabel::RepairTriangle);
                    es.extend(edges_of(&tri));
                } else if let Some((_, pairs)) =
                    star_pairs.iter_mut().find(|(_, pairs)| !pairs.is_empty())
                {
                    trace.push(CaseLabel::RepairStarRadii);
                    es.extend(edges_of(&pairs.pop().unwrap()));
                } else if let Some(trio) = even_triples.pop() {
                    trace.push(CaseLabel::RepairEdgeTriple);
                    es.extend(edges_of(&trio));
                } else {
                    return Err(Error::Precondition(
                        "the triangle K_3 has 3 edges but no P_4-decomposition".into(),
                    ));
                }
                certify(&es)?
            }
            _ => certify(&remnant)?,
        };
        blocks.extend(gadget_blocks);
    } else {
        trace.push(CaseLabel::Leftover {
            isolated: r_iso as u8,
            odd: r_odd as u8,
            even: r_even as u8,
        });
        let (d, left) = certify_with_leftover(&graph_of(&remnant), BlockShape::path(4), t % 3)?;
        blocks.extend(d.blocks);
        leftover = left;
    }

    blocks.extend(iso_triples.into_iter().flatten());
    blocks.extend(triangle_gadgets.into_iter().flatten());
    blocks.extend(star_pairs.into_iter().flat_map(|(_, p)| p.into_iter().flatten()));
    blocks.extend(odd_triples.into_iter().flatten());
    blocks.extend(even_triples.into_iter().flatten());

    let mut host = graph.clone();
    for &e in &leftover {
        host.remove_edge(e);
    }
    let design = Design::new(Host::Edges(host), BlockShape::path(4), blocks);
    let report = verify_design(&design);
    if !report.valid() {
        return Err(Error::Internal(format!("two-apex decomposition failed to verify: {report}")));
    }
    debug_assert_eq!(leftover.len(), graph.edge_count() % 3);
    let distinct: BTreeSet<CaseLabel> = trace.iter().copied().collect();
    debug_assert_eq!(distinct.len(), trace.len());
    Ok(PartitionResult {
        design,
        leftover,
        case_trace: trace,
    })
}

/// Index 1..=9 of the remnant combination with residues
/// (|I|, |S_1|, |S_2|) mod 3, when its gadget has 0 mod 3 edges.
pub fn combination_case(iso: usize, odd: usize, even: usize) -> Option<u8> {
    const TABLE: [(usize, usize, usize); 9] = [
        (0, 0, 1),
        (0, 2, 2),
        (0, 1, 0),
        (1, 0, 0),
        (1, 2, 1),
        (1, 1, 2),
        (2, 0, 2),
        (2, 2, 0),
        (2, 1, 1),
    ];
    TABLE
        .iter()
        .position(|&r| r == (iso % 3, odd % 3, even % 3))
        .map(|i| i as u8 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite_on, complete_graph, complete_on};

    fn two_apex(n: usize) -> ApexInput {
        ApexInput::new(complete_graph(n).unwrap(), 0, 1).unwrap()
    }

    #[test]
    fn extraction_basics() {
        let tri = complete_graph(3).unwrap();
        let (b, r) = extract_maximal_p4(&tri);
        assert!(b.is_empty());
        assert_eq!(r, tri);
        let path = Graph::from_edges([Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 3)]);
        let (b, r) = extract_maximal_p4(&path);
        assert_eq!(b.len(), 1);
        assert_eq!(r.edge_count(), 0);
        let (b, r) = extract_maximal_p4(&complete_graph(4).unwrap());
        assert_eq!(b.len(), 2);
        assert_eq!(r.edge_count(), 0);
    }

    #[test]
    fn classification_examples() {
        let c = classify_remnant(&Graph::with_vertices([3, 4, 5])).unwrap();
        assert_eq!(c.isolated, vec![3, 4, 5]);
        let star = Graph::from_edges([Edge::new(0, 1), Edge::new(0, 2), Edge::new(0, 3)]);
        let c = classify_remnant(&star).unwrap();
        assert_eq!(c.even_stars.len(), 1);
        assert_eq!(c.even_stars[0].center, 0);
        let mut g = complete_on([0, 1, 2]);
        g.add_edge(Edge::new(5, 6));
        g.add_edge(Edge::new(6, 7));
        let c = classify_remnant(&g).unwrap();
        assert_eq!(c.triangles.len(), 1);
        assert_eq!(c.odd_stars, vec![Star { center: 6, leaves: vec![5, 7] }]);
        let p4 = Graph::from_edges([Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 3)]);
        assert!(matches!(classify_remnant(&p4), Err(Error::Internal(_))));
    }

    #[test]
    fn star_gadget_remnants() {
        let (a, b) = (100, 101);
        let s = Star { center: 0, leaves: vec![1] };
        let (pairs, rem) = decompose_star_gadget(&s, a, b);
        assert!(pairs.is_empty());
        assert_eq!(rem.len(), 5);
        let s = Star { center: 0, leaves: vec![1, 2] };
        let (pairs, rem) = decompose_star_gadget(&s, a, b);
        assert_eq!(pairs.concat().len(), 2);
        assert_eq!(rem, vec![Edge::new(a, 0), Edge::new(0, b)]);
        let s = Star { center: 0, leaves: vec![1, 2, 3] };
        let (pairs, rem) = decompose_star_gadget(&s, a, b);
        assert_eq!(pairs.concat().len(), 2);
        assert_eq!(rem.len(), 5);
    }

    #[test]
    fn complete_graphs() {
        let r = p4_decompose_two_apex(&two_apex(6)).unwrap();
        assert_eq!(r.design.blocks.len(), 5);
        assert!(r.leftover.is_empty());
        let r = p4_decompose_two_apex(&two_apex(5)).unwrap();
        assert_eq!(r.design.blocks.len(), 3);
        assert_eq!(r.leftover.len(), 1);
        for n in (2..=16).filter(|&n| n != 3) {
            let r = p4_decompose_two_apex(&two_apex(n)).unwrap();
            assert_eq!(r.leftover.len(), (n * (n - 1) / 2) % 3, "n={n}");
        }
    }

    #[test]
    fn isolated_quadruple_uses_triple_repair() {
        // K_2 on {α,β} joined to four isolated vertices.
        let mut g = complete_bipartite_on([0, 1], [2, 3, 4, 5]);
        g.add_edge(Edge::new(0, 1));
        let r = p4_decompose_two_apex(&ApexInput::new(g, 0, 1).unwrap()).unwrap();
        assert_eq!(r.design.blocks.len(), 3);
        assert!(r.case_trace.contains(&CaseLabel::Combination(4)));
        assert!(r.case_trace.contains(&CaseLabel::RepairIsolatedTriple));
    }

    #[test]
    fn triangle_is_rejected() {
        let err = p4_decompose_two_apex(&two_apex(3)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn apex_precondition() {
        let g = Graph::from_edges([Edge::new(0, 1), Edge::new(1, 2)]);
        assert!(ApexInput::new(g.clone(), 0, 1).is_err());
        assert!(ApexInput::new(g, 1, 1).is_err());
    }

    #[test]
    fn combination_table_has_zero_mod_three_gadgets() {
        let sizes_iso = [0, 2, 4];
        let sizes_odd = [0, 2, 4];
        let sizes_even = [0, 5, 10];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let t = 1 + sizes_iso[a] + sizes_odd[b] + sizes_even[c];
                    assert_eq!(combination_case(a, b, c).is_some(), t % 3 == 0);
                }
            }
        }
    }
}
