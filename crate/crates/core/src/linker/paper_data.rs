//! The explicit down-link from a (K_{9,24}, P_5)-design to a
//! (K_{10,24}, P_4)-design.
//!
//! B = Z_24 keeps ids 0..23, the letters a..i become 24..32 and α is 33.
//! Each P_5 is listed with its dropped edge first.

use crate::error::{Error, Result};
use crate::graph::{Block, BlockShape, Design, DownLink, Host, Vertex};
use crate::verify::verify_downlink;

pub const ALPHA: Vertex = 33;

const P5_PATHS: &str = "
6 a 12 b 1; 1 c 12 d 6; 6 e 18 f 1; 1 g 12 h 0; 12 i 0 a 18;
7 a 13 b 2; 2 c 13 d 7; 7 e 19 f 2; 2 g 13 h 1; 13 i 1 a 19;
8 a 14 b 3; 3 c 14 d 8; 8 e 20 f 3; 3 g 14 h 2; 14 i 2 a 20;
9 a 15 b 4; 4 c 15 d 9; 9 e 21 f 4; 4 g 15 h 3; 15 i 3 a 21;
10 a 16 b 5; 5 c 16 d 10; 10 e 22 f 5; 5 g 16 h 4; 16 i 4 a 22;
11 a 17 b 0; 0 c 17 d 11; 11 e 23 f 0; 0 g 17 h 5; 17 i 5 a 23;
18 b 6 c 19; 19 d 0 e 12; 12 f 6 g 19; 19 h 6 i 18;
19 b 7 c 20; 20 d 1 e 13; 13 f 7 g 20; 20 h 7 i 19;
20 b 8 c 21; 21 d 2 e 14; 14 f 8 g 21; 21 h 8 i 20;
21 b 9 c 22; 22 d 3 e 15; 15 f 9 g 22; 22 h 9 i 21;
22 b 10 c 23; 23 d 4 e 16; 16 f 10 g 23; 23 h 10 i 22;
23 b 11 c 18; 18 d 5 e 17; 17 f 11 g 18; 18 h 11 i 23
";

const COMPLETION: &str = "
6 a 9 alpha; 7 a 10 alpha; 8 a 11 alpha; 1 c 4 alpha; 2 c 5 alpha;
3 c 0 alpha; 9 e 6 alpha; 10 e 7 alpha; 11 e 8 alpha; 4 g 1 alpha;
5 g 2 alpha; 0 g 3 alpha; 15 i 12 alpha; 16 i 13 alpha; 17 i 14 alpha;
22 d 19 alpha; 23 d 20 alpha; 21 d 18 alpha; 12 f 15 alpha; 13 f 16 alpha;
14 f 17 alpha; 20 h 21 alpha; 23 h 22 alpha; 20 b 23 alpha; h 18 b 21;
h 19 b 22
";

fn vertex(tok: &str) -> Result<Vertex> {
    match tok {
        "alpha" => Ok(ALPHA),
        t if t.len() == 1 && ("a"..="i").contains(&t) => Ok(24 + (t.as_bytes()[0] - b'a') as usize),
        t => t.parse().map_err(|_| Error::Internal(format!("bad vertex {t:?} in paper data"))),
    }
}

fn lists(text: &str) -> Result<Vec<Vec<Vertex>>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.split_whitespace().map(vertex).collect())
        .collect()
}

fn mapping_comment() -> String {
    "vertices: 0..23 = Z_24, a..i = 24..32, alpha = 33".into()
}

/// The 54 P_5s on K_{24,9}.
pub fn k9_24_design() -> Result<Design> {
    let blocks = lists(P5_PATHS)?.into_iter().map(Block::path).collect();
    Ok(Design::new(Host::Bipartite(24, 9), BlockShape::path(5), blocks).with_comment(mapping_comment()))
}

/// Down-link onto K_{24,10} (α is the tenth vertex of the small side): each P_5 loses its first listed edge,
/// and 26 further P_4s cover the dropped edges and the star of α.
pub fn k9_24_apex_downlink() -> Result<DownLink> {
    let paths = lists(P5_PATHS)?;
    let mut images: Vec<Block> = paths.iter().map(|p| Block::path(p[1..].to_vec())).collect();
    images.extend(lists(COMPLETION)?.into_iter().map(Block::path));
    let domain = k9_24_design()?;
    let codomain = Design::new(Host::Bipartite(24, 10), BlockShape::path(4), images)
        .with_comment(mapping_comment());
    let dl = DownLink {
        domain,
        codomain,
        map: (0..paths.len()).map(|i| (i, i)).collect(),
    };
    let r = verify_downlink(&dl);
    if !r.valid() {
        return Err(Error::Internal(format!("paper down-link does not verify: {r}")));
    }
    Ok(dl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_design;

    #[test]
    fn golden_counts() {
        let dl = k9_24_apex_downlink().unwrap();
        assert_eq!((dl.domain.blocks.len(), dl.domain.host.edge_count()), (54, 216));
        assert_eq!((dl.codomain.blocks.len(), dl.codomain.host.edge_count()), (80, 240));
        assert!(verify_design(&dl.domain).valid());
        assert!(verify_design(&dl.codomain).valid());
    }
}
