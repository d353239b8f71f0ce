//! Brute-force enumeration of characteristic vectors in a coordinate box.
//!
//! This is the independent oracle for the solver: it knows nothing about
//! planes or frames, it just walks every point of `[-B, B]^n`.

use crate::lattice::{GramLattice, LatticeVector};
use crate::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Emit the over-limit flag when the box has more points than this.
    pub work_limit: u64,
    /// Number of contiguous slices the box is cut into before walking.
    pub chunks: usize,
    pub execution: Execution,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { work_limit: super::DEFAULT_WORK_LIMIT, chunks: 64, execution: Execution::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Lexicographically sorted.
    pub vectors: Vec<LatticeVector>,
    /// Number of box points, saturating.
    pub box_size: u128,
    pub over_limit: bool,
}

/// `{ c : c characteristic, Q(c, c) = h, max |c_i| <= bound }`.
pub fn enumerate_characteristic(l: &GramLattice, h: i64, bound: u64) -> Enumeration {
    enumerate_characteristic_with(l, h, bound, &EnumOptions::default())
}

pub fn enumerate_characteristic_with(l: &GramLattice, h: i64, bound: u64, opts: &EnumOptions) -> Enumeration {
    let n = l.rank();
    let side = 2 * bound as u128 + 1;
    let box_size = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(side)).unwrap_or(u128::MAX);
    let over_limit = box_size > opts.work_limit as u128;

    let chunks = opts.chunks.max(1) as u128;
    let step = box_size.div_ceil(chunks).max(1);
    let ranges: Vec<(u128, u128)> =
        (0..chunks).map(|i| (i * step, ((i + 1) * step).min(box_size))).filter(|(a, b)| a < b).collect();

    let walk = |&(start, end): &(u128, u128)| walk_range(l, h, bound as i64, start, end);
    let parts: Vec<Vec<LatticeVector>> = match opts.execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            ranges.par_iter().map(walk).collect()
        }
        _ => ranges.iter().map(walk).collect(),
    };
    let mut vectors: Vec<LatticeVector> = parts.into_iter().flatten().collect();
    vectors.sort();
    Enumeration { vectors, box_size, over_limit }
}

fn walk_range(l: &GramLattice, h: i64, bound: i64, start: u128, end: u128) -> Vec<LatticeVector> {
    let n = l.rank();
    let g = l.gram();
    let side = (2 * bound + 1) as u128;
    // Decode `start` into mixed-radix digits, last coordinate fastest.
    let mut x = vec![0i64; n];
    let mut rem = start;
    for i in (0..n).rev() {
        x[i] = (rem % side) as i64 - bound;
        rem /= side;
    }
    let mut out = Vec::new();
    let mut idx = start;
    let diag_parity: Vec<i64> = (0..n).map(|i| g[i][i].rem_euclid(2)).collect();
    while idx < end {
        let mut characteristic = true;
        let mut norm: i128 = 0;
        for i in 0..n {
            let gi: i128 = g[i].iter().zip(&x).map(|(&a, &b)| a as i128 * b as i128).sum();
            if (gi - diag_parity[i] as i128).rem_euclid(2) != 0 {
                characteristic = false;
                break;
            }
            norm += gi * x[i] as i128;
        }
        if characteristic && norm == h as i128 {
            out.push(LatticeVector::new(x.clone()));
        }
        idx += 1;
        for i in (0..n).rev() {
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Block;

    fn vs(e: &Enumeration) -> Vec<Vec<i64>> {
        e.vectors.iter().map(|v| v.coords().to_vec()).collect()
    }

    #[test]
    fn hyperbolic_square_eight() {
        let h = GramLattice::from_blocks(&[Block::H]).unwrap();
        assert_eq!(vs(&enumerate_characteristic(&h, 8, 3)), vec![vec![-2, -2], vec![2, 2]]);
    }

    #[test]
    fn cp2_square_nine() {
        let l = GramLattice::diagonal(1, 0);
        assert_eq!(vs(&enumerate_characteristic(&l, 9, 3)), vec![vec![-3], vec![3]]);
    }

    #[test]
    fn odd_plane_square_eight() {
        // x^2 - y^2 = 8 with x, y odd and |x|, |y| <= 4.
        let l = GramLattice::diagonal(1, 1);
        assert_eq!(vs(&enumerate_characteristic(&l, 8, 4)), vec![vec![-3, -1], vec![-3, 1], vec![3, -1], vec![3, 1]]);
    }

    #[test]
    fn rank_zero_box() {
        let l = GramLattice::from_blocks(&[]).unwrap();
        assert_eq!(enumerate_characteristic(&l, 0, 5).vectors.len(), 1);
        assert!(enumerate_characteristic(&l, 4, 5).vectors.is_empty());
    }

    #[test]
    fn over_limit_flag() {
        let l = GramLattice::diagonal(3, 0);
        let opts = EnumOptions { work_limit: 100, ..Default::default() };
        let e = enumerate_characteristic_with(&l, 3, 2, &opts);
        assert!(e.box_size == 125 && e.over_limit);
        assert_eq!(e.vectors.len(), 8);
    }

    #[test]
    fn partition_independence() {
        let l = GramLattice::from_blocks(&[Block::H, Block::Plus1]).unwrap();
        let base = enumerate_characteristic_with(
            &l,
            9,
            6,
            &EnumOptions { chunks: 1, execution: Execution::Sequential, ..Default::default() },
        );
        for chunks in [2, 3, 7, 64, 1000] {
            for execution in [Execution::Sequential, Execution::Parallel] {
                let e =
                    enumerate_characteristic_with(&l, 9, 6, &EnumOptions { chunks, execution, ..Default::default() });
                assert_eq!(e, base);
            }
        }
    }
}
