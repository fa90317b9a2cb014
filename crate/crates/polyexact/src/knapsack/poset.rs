use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::polyhedra::for_each_subset;

/// The gcds `f` of all sublists of size greater than `N - k`, with the Möbius
/// weights that turn `Σ μ(f) [G(f)]` into the indicator of the poles of order
/// greater than `N - k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdPoset {
    /// Increasing; always contains 1.
    pub values: Vec<u64>,
    /// `mobius[i]` belongs to `values[i]`.
    pub mobius: Vec<i64>,
}

impl GcdPoset {
    pub fn mu(&self, f: u64) -> Option<i64> {
        self.values.iter().position(|&v| v == f).map(|i| self.mobius[i])
    }

    /// Pairs `(f, μ(f))` in increasing order of `f`.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.values.iter().copied().zip(self.mobius.iter().copied())
    }

    /// The lcm of the values, a common period of the resulting step polynomials.
    pub fn lcm(&self) -> u64 {
        self.values.iter().fold(1u64, |acc, v| acc.lcm(v))
    }

    /// Builds the poset of an explicit value set, computing μ by the recursive
    /// divisibility rule `μ(n) = 1 - Σ_{v ∈ V, n | v, v ≠ n} μ(v)`.
    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        let values: Vec<u64> = values.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut mobius = vec![0i64; values.len()];
        // Multiples of v are larger than v, so descending order sees them first.
        for i in (0..values.len()).rev() {
            let above: i64 = (i + 1..values.len()).filter(|&j| values[j] % values[i] == 0).map(|j| mobius[j]).sum();
            mobius[i] = 1 - above;
        }
        GcdPoset { values, mobius }
    }
}

/// The gcd poset for the top `k + 1` coefficients of a list with gcd 1.
pub fn gcd_poset(a: &[u64], k: usize) -> Result<GcdPoset> {
    let n1 = a.len();
    if n1 == 0 {
        return Err(Error::InvalidInput("knapsack list is empty".into()));
    }
    if k + 1 > n1 {
        return Err(Error::InvalidInput(format!("k = {k} exceeds N = {}", n1 - 1)));
    }
    if a.iter().fold(0u64, |g, &x| g.gcd(&x)) != 1 {
        return Err(Error::InvalidInput("knapsack list must have gcd 1".into()));
    }
    // Sublists of size > N - k are complements of index sets of size <= k.
    let mut values = BTreeSet::new();
    for size in 0..=k {
        for_each_subset(n1, size, |omit| {
            let g = (0..n1).filter(|i| !omit.contains(i)).fold(0u64, |g, i| g.gcd(&a[i]));
            values.insert(g);
        });
    }
    Ok(GcdPoset::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_examples() {
        let p = gcd_poset(&[98, 59, 44, 100], 1).unwrap();
        assert_eq!(p.values, vec![1, 2]);
        assert_eq!((p.mu(1), p.mu(2)), (Some(0), Some(1)));
        let p = gcd_poset(&[6, 2, 2, 3, 3], 2).unwrap();
        assert_eq!(p.values, vec![1, 2, 3]);
        assert_eq!((p.mu(1), p.mu(2), p.mu(3)), (Some(-1), Some(1), Some(1)));
        let p = gcd_poset(&[7, 5, 3], 0).unwrap();
        assert_eq!(p.pairs().collect::<Vec<_>>(), vec![(1, 1)]);
        assert!(gcd_poset(&[2, 4], 0).is_err());
        assert!(gcd_poset(&[1, 2], 2).is_err());
    }

    #[test]
    fn full_poset_of_623() {
        let p = gcd_poset(&[6, 2, 3], 2).unwrap();
        assert_eq!(p.values, vec![1, 2, 3, 6]);
        // μ(6) = 1, μ(2) = μ(3) = 0, μ(1) = 0.
        assert_eq!(p.mobius, vec![0, 0, 0, 1]);
        assert_eq!(p.lcm(), 6);
    }
}
