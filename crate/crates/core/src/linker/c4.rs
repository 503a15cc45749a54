//! Down-links from the cyclic C_4-systems C^a = (0, a, (v+1)/2, m+a),
//! m = (v−1)/8, to P_4-designs of order v or v+1.

use super::{path_edges, SpectrumWitness};
use crate::cyclic::{c4_difference_family, develop};
use crate::error::{Error, Result};
use crate::graph::{Block, BlockShape, Design, DownLink, Edge, Host};

pub fn downlink_c4(v: usize, target: usize) -> Result<SpectrumWitness> {
    let r = v % 24;
    let ok = (target == v && (r == 1 || r == 9)) || (target == v + 1 && (r == 9 || r == 17));
    if v <= 1 || !ok {
        return Err(Error::Usage(format!(
            "C4 down-link to K_{target} from K_{v}: target v needs v ≡ 1,9 (mod 24), target v+1 needs v ≡ 9,17 (mod 24)"
        )));
    }
    let m = (v - 1) / 8;
    let h = (v + 1) / 2;
    let domain = develop(&c4_difference_family(v)?)?;
    let mut trace = Vec::new();

    // The cycle C^a + i loses its edge [i, a+i].
    let mut blocks = Vec::new();
    let mut map = Vec::new();
    for (bi, b) in domain.blocks.iter().enumerate() {
        let (a, i) = (bi / v + 1, bi % v);
        let p = Block::path(vec![(a + i) % v, (h + i) % v, (m + a + i) % v, i]);
        if !p.is_subgraph_of(b) {
            return Err(Error::Internal(format!("{p} is not inside {b}")));
        }
        map.push((bi, blocks.len()));
        blocks.push(p);
    }

    // Removed differences come in triples (d, d+1, d+2) joined as
    // (i+1, d+i+1, i, d+i+2). Differences 1 and m are left when v ≢ 1 mod 24.
    let first = if r == 1 { 1 } else { 2 };
    let last = if r == 17 { m - 1 } else { m };
    let mut d = first;
    while d + 2 <= last {
        for i in 0..v {
            blocks.push(Block::path(vec![(i + 1) % v, (d + i + 1) % v, i, (d + i + 2) % v]));
        }
        trace.push(format!("differences {d},{},{} joined into paths", d + 1, d + 2));
        d += 3;
    }
    if d != last + 1 {
        return Err(Error::Internal(format!("differences {d}..{last} not grouped in triples")));
    }

    let alpha = v;
    match (r, target == v) {
        (1, _) => {}
        (9, true) => {
            trace.push("difference 1 forms the v-cycle, cut into P4s".into());
            for j in 0..v / 3 {
                blocks.push(Block::path((0..4).map(|s| (3 * j + s) % v).collect()));
            }
        }
        (9, false) => {
            trace.push(format!("wheel on the v-cycle with hub {alpha}, {} copies of W'", v / 3));
            for j in 0..v / 3 {
                let c = |s: usize| (3 * j + s) % v;
                blocks.push(Block::path(vec![c(0), c(1), c(2), alpha]));
                blocks.push(Block::path(vec![c(2), c(3), alpha, c(1)]));
            }
        }
        (17, false) => {
            trace.push(format!("differences 1 and {m} with the star of {alpha}"));
            for i in 0..v {
                blocks.push(Block::path(vec![alpha, (1 + i) % v, i, (m + i) % v]));
            }
        }
        _ => unreachable!(),
    }
    debug_assert!(blocks.iter().all(|b| path_edges(b.vertices()).len() == 3));
    let codomain = Design::new(Host::Complete(target), BlockShape::path(4), blocks);
    let dl = DownLink { domain, codomain, map };
    SpectrumWitness::new(dl, "c4-difference-family", trace)
}

#[allow(dead_code)]
fn removed_edge(a: usize, i: usize, v: usize) -> Edge {
    Edge::new(i, (a + i) % v)
}
