//! Necessary conditions for designs on complete graphs.

use crate::graph::{BlockShape, ShapeKind};

/// Whether K_n passes the counting conditions for a (K_n, shape)-design:
/// the block size divides the edge count, n ≥ k, and for cycles n is odd.
/// K_0 and K_1 admit the empty design.
pub fn design_admissible(shape: BlockShape, n: usize) -> bool {
    if n <= 1 {
        return true;
    }
    let edges = n * (n - 1) / 2;
    let base = n >= shape.k && edges % shape.edge_count() == 0;
    match shape.kind {
        ShapeKind::Path => base,
        ShapeKind::Cycle => base && n % 2 == 1,
    }
}

/// Human-readable form of [`design_admissible`], used in error messages.
pub fn admissibility_rule(shape: BlockShape) -> String {
    match (shape.kind, shape.k) {
        (ShapeKind::Path, 4) => "n ≡ 0,1 (mod 3), n ≥ 4".into(),
        (ShapeKind::Path, 5) => "n ≡ 0,1 (mod 8), n ≥ 5".into(),
        (ShapeKind::Cycle, 4) => "n ≡ 1 (mod 8)".into(),
        (ShapeKind::Path, k) => format!("n(n−1)/2 ≡ 0 (mod {}), n ≥ {k}", k - 1),
        (ShapeKind::Cycle, k) => format!("n odd, n(n−1)/2 ≡ 0 (mod {k}), n ≥ {k}"),
    }
}

pub fn p4_admissible(n: usize) -> bool {
    design_admissible(BlockShape::path(4), n)
}

/// Smallest order ≥ `from` admitting a design of the given shape.
pub fn smallest_admissible(shape: BlockShape, from: usize) -> usize {
    (from.max(2)..).find(|&n| design_admissible(shape, n)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_orders() {
        let p4 = BlockShape::path(4);
        let ok: Vec<usize> = (2..14).filter(|&n| design_admissible(p4, n)).collect();
        assert_eq!(ok, vec![4, 6, 7, 9, 10, 12, 13]);
        let p5 = BlockShape::path(5);
        let ok: Vec<usize> = (2..26).filter(|&n| design_admissible(p5, n)).collect();
        assert_eq!(ok, vec![8, 9, 16, 17, 24, 25]);
        let c4 = BlockShape::cycle(4);
        let ok: Vec<usize> = (2..30).filter(|&n| design_admissible(c4, n)).collect();
        assert_eq!(ok, vec![9, 17, 25]);
        assert_eq!(smallest_admissible(BlockShape::path(13), 13), 16);
        assert_eq!(smallest_admissible(BlockShape::cycle(13), 13), 13);
        assert_eq!(smallest_admissible(BlockShape::cycle(9), 9), 9);
    }
}
