//! P_k-decompositions of complete bipartite graphs for even k.
//!
//! K_{k−1,x} with x ∈ {k−2, k} is decomposed by two matrices M and M̄ of
//! x/2 rows each; every row is a path alternating between the part
//! I = {1..x} and the part A = {a_1..a_{k−1}}. Indices are 1-based as in
//! the matrices and converted to vertex ids when blocks are emitted:
//! i ∈ I becomes i−1 and a_j becomes x+j−1.

use crate::error::{Error, Result};
use crate::graph::{Block, BlockShape, Design, Host, Vertex};
use crate::verify::verify_design;

/// One column of M or M̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    /// Rotation vector P_i = (i, …, x/2, 1, …, i−1).
    P(usize),
    /// P̄_i = P_i + x/2.
    PBar(usize),
    /// Constant column a_j.
    A(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPlan {
    pub k: usize,
    pub x: usize,
    pub m: Vec<Column>,
    pub m_bar: Vec<Column>,
}

impl MatrixPlan {
    pub fn new(k: usize, x: usize) -> Result<MatrixPlan> {
        if k < 4 || k % 2 != 0 {
            return Err(Error::Usage(format!("k must be even and at least 4, got {k}")));
        }
        if x != k - 2 && x != k {
            return Err(Error::Usage(format!("x must be k-2 or k, got x={x} for k={k}")));
        }
        use Column::*;
        let half = k / 2;
        let (mut m, mut m_bar) = (Vec::with_capacity(k), Vec::with_capacity(k));
        for j in 1..=k / 4 {
            m.extend([P(j), A(2 * j - 1), PBar(j), A(2 * j)]);
            m_bar.extend([PBar(j), A(2 * j - 1 + half), P(j), A(2 * j + half)]);
        }
        if k % 4 == 0 {
            // M̄ ends on A_{k/2}, not its barred counterpart.
            *m_bar.last_mut().unwrap() = A(half);
        } else {
            let j = (k + 2) / 4;
            m.extend([P(j), A(half)]);
            m_bar.extend([PBar(j), A(half)]);
        }
        Ok(MatrixPlan { k, x, m, m_bar })
    }

    pub fn rows(&self) -> usize {
        self.x / 2
    }

    /// Entry of `col` in row `r` (1-based), as a 1-based I index or an A index.
    fn entry(&self, col: Column, r: usize) -> Entry {
        let h = self.rows();
        match col {
            Column::P(i) => Entry::I((i - 1 + r - 1) % h + 1),
            Column::PBar(i) => Entry::I((i - 1 + r - 1) % h + 1 + h),
            Column::A(j) => Entry::A(j),
        }
    }

    fn row(&self, cols: &[Column], r: usize) -> Vec<Entry> {
        cols.iter().map(|&c| self.entry(c, r)).collect()
    }

    fn vertex(&self, e: Entry) -> Vertex {
        match e {
            Entry::I(i) => i - 1,
            Entry::A(j) => self.x + j - 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Entry {
    I(usize),
    A(usize),
}

/// (K_{k−1,x}, P_k)-design with x blocks. Vertices 0..x−1 form the part of
/// size x and x..x+k−2 the part of size k−1.
pub fn decompose_k_bipartite(k: usize, x: usize) -> Result<Design> {
    let plan = MatrixPlan::new(k, x)?;
    let mut blocks = Vec::with_capacity(x);
    let mut design_comments = Vec::new();
    for (name, cols) in [("M", &plan.m), ("Mbar", &plan.m_bar)] {
        for r in 1..=plan.rows() {
            let row = plan.row(cols, r);
            let alternates = row
                .iter()
                .enumerate()
                .all(|(i, e)| matches!((i % 2, e), (0, Entry::I(_)) | (1, Entry::A(_))));
            if !alternates {
                return Err(Error::Internal(format!("row {r} of {name} does not alternate parts")));
            }
            design_comments.push(format!("block {} from {name} row {r}", blocks.len()));
            blocks.push(Block::path(row.into_iter().map(|e| plan.vertex(e)).collect()));
        }
    }
    let mut design = Design::new(Host::Bipartite(x, k - 1), BlockShape::path(k), blocks);
    design.comments = design_comments;
    let report = verify_design(&design);
    if !report.valid() {
        return Err(Error::Internal(format!("matrix plan k={k} x={x} failed: {report}")));
    }
    Ok(design)
}

/// (K_{k−1,k−1}, P_k)-design with k−1 blocks.
///
/// With n = k−1 (odd) and both parts identified with Z_n, the base path
/// (0, 0′, 1, −1′, 2, −2′, …) uses every difference y − x exactly once, so
/// its n translates partition the edges. Part one is 0..n−1, part two n..2n−1.
pub fn decompose_square_bipartite(k: usize) -> Result<Design> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::Usage(format!("k must be even and at least 4, got {k}")));
    }
    let n = k - 1;
    let base: Vec<(usize, usize)> = (0..k / 2)
        .flat_map(|i| [(0, i % n), (1, (n - i % n) % n)])
        .collect();
    let blocks = (0..n)
        .map(|s| {
            Block::path(
                base.iter()
                    .map(|&(side, y)| side * n + (y + s) % n)
                    .collect(),
            )
        })
        .collect();
    let design = Design::new(Host::Bipartite(n, n), BlockShape::path(k), blocks);
    let report = verify_design(&design);
    if !report.valid() {
        return Err(Error::Internal(format!("square construction k={k} failed: {report}")));
    }
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_x4_rows() {
        let d = decompose_k_bipartite(4, 4).unwrap();
        assert_eq!(d.blocks.len(), 4);
        // [1,a_1,3,a_2] and [3,a_3,1,a_2] with a_j = 3+j
        assert!(d.position(&Block::path(vec![0, 4, 2, 5])).is_some());
        assert!(d.position(&Block::path(vec![2, 6, 0, 5])).is_some());
    }

    #[test]
    fn small_instances() {
        let d = decompose_k_bipartite(4, 2).unwrap();
        assert_eq!((d.blocks.len(), d.host.edge_count()), (2, 6));
        let d = decompose_k_bipartite(6, 6).unwrap();
        assert_eq!((d.blocks.len(), d.host.edge_count()), (6, 30));
    }

    #[test]
    fn column_plans() {
        let p = MatrixPlan::new(8, 8).unwrap();
        assert_eq!(p.m.len(), 8);
        assert_eq!(p.m_bar.last(), Some(&Column::A(4)));
        let p = MatrixPlan::new(6, 4).unwrap();
        assert_eq!(&p.m[4..], &[Column::P(2), Column::A(3)]);
        assert_eq!(&p.m_bar[4..], &[Column::PBar(2), Column::A(3)]);
    }

    #[test]
    fn every_even_k() {
        for k in (4..=16).step_by(2) {
            for x in [k - 2, k] {
                assert_eq!(decompose_k_bipartite(k, x).unwrap().blocks.len(), x);
            }
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(decompose_k_bipartite(5, 5), Err(Error::Usage(_))));
        assert!(matches!(decompose_k_bipartite(6, 5), Err(Error::Usage(_))));
        assert!(matches!(decompose_square_bipartite(7), Err(Error::Usage(_))));
    }

    #[test]
    fn squares() {
        for k in (4..=20).step_by(2) {
            let d = decompose_square_bipartite(k).unwrap();
            assert_eq!(d.blocks.len(), k - 1);
        }
    }
}
