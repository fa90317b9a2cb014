//! Rational polytopes and cones: vertices, tangent cones, triangulations, polarity,
//! lattices (HNF, LLL) and Barvinok's signed unimodular decomposition.

mod barvinok;
mod cone;
mod format;
mod lattice;
mod polytope;
mod regular;

pub use barvinok::{barvinok_decompose, barvinok_decompose_with_stats, BarvinokStats};
pub use cone::{cone_extreme_rays, polar, triangulate_cone, SimplicialCone};
pub use format::{format_hrep, parse_hrep};
pub use lattice::{hnf, lll_reduce, lll_short_vector, LatticeBasis};
pub use polytope::{simplex_volume, Polytope};
pub use regular::find_regular_vector;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Q = BigRational;
pub type Z = BigInt;

/// Calls `f` on every `k`-subset of `0..n`, in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::for_each_subset;

    #[test]
    fn subsets() {
        let mut all = Vec::new();
        for_each_subset(4, 2, |s| all.push(s.to_vec()));
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut n = 0;
        for_each_subset(3, 0, |_| n += 1);
        assert_eq!(n, 1);
        for_each_subset(2, 3, |_| panic!());
        let mut single = Vec::new();
        for_each_subset(3, 3, |s| single.push(s.to_vec()));
        assert_eq!(single, vec![vec![0, 1, 2]]);
    }
}
