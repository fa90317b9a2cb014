use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest entry factored by trial division.
pub const MAX_TRIAL_DIVISION: u64 = 1_000_000_000;

/// Prime factorization by trial division, as increasing `(p, e)` pairs.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    if n > MAX_TRIAL_DIVISION {
        return Err(Error::resource(
            "knapsack",
            format!("{n} exceeds the trial-division cap {MAX_TRIAL_DIVISION}; supply a factorization"),
        ));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Where the coefficients of `E(a; t)` stop being constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Periodicity {
    /// Size of the largest sublists whose gcd is not 1 (0 when every entry is 1).
    pub ell: usize,
    /// The distinct largest sublists, as sorted index lists.
    pub sublists: Vec<Vec<usize>>,
    /// `(f, μ(f))` for the fan poset, with `f = 1` first.
    pub mobius: Vec<(u64, i64)>,
}

impl Periodicity {
    /// Degree `ℓ - 1` of the highest strictly periodic coefficient. Coefficients of
    /// degree at least `ℓ` are constant. `None` when every coefficient is constant.
    pub fn top_nonconstant_degree(&self) -> Option<usize> {
        self.ell.checked_sub(1)
    }

    /// Position of that coefficient counted down from the leading one, `N - (ℓ - 1)`.
    pub fn depth_below_leading(&self, n: usize) -> Option<usize> {
        self.top_nonconstant_degree().map(|d| n - d)
    }

    pub fn mu(&self, f: u64) -> Option<i64> {
        self.mobius.iter().find(|(g, _)| *g == f).map(|(_, m)| *m)
    }
}

/// Finds `ℓ`, the largest sublists with gcd different from 1, and the fan Möbius
/// values, factoring the entries by trial division.
pub fn first_periodic_degree(a: &[u64]) -> Result<Periodicity> {
    let fact = a.iter().map(|&x| factorize(x)).collect::<Result<Vec<_>>>()?;
    first_periodic_degree_factored(a, &fact)
}

/// As `first_periodic_degree`, with the prime factorizations supplied. Every prime
/// column of the exponent matrix with the most nonzero entries gives a largest
/// sublist; distinct sublists have pairwise coprime gcds, so the poset is a fan with
/// `μ(f) = 1` for `f ≠ 1` and `μ(1) = 1 - (|G| - 1)`.
pub fn first_periodic_degree_factored(a: &[u64], factorizations: &[Vec<(u64, u32)>]) -> Result<Periodicity> {
    if a.len() != factorizations.len() {
        return Err(Error::InvalidInput("one factorization per entry is required".into()));
    }
    for (x, fac) in a.iter().zip(factorizations) {
        let prod = fac.iter().try_fold(1u64, |acc, &(p, e)| p.checked_pow(e).and_then(|q| acc.checked_mul(q)));
        if prod != Some(*x) {
            return Err(Error::InvalidInput(format!("factorization does not multiply to {x}")));
        }
    }
    let mut columns: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, fac) in factorizations.iter().enumerate() {
        for &(p, _) in fac {
            columns.entry(p).or_default().push(i);
        }
    }
    let ell = columns.values().map(Vec::len).max().unwrap_or(0);
    let sublists: Vec<Vec<usize>> = columns
        .values()
        .filter(|c| c.len() == ell && ell > 0)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let gcds: BTreeSet<u64> = sublists.iter().map(|s| s.iter().fold(0u64, |g, &i| g.gcd(&a[i]))).collect();
    let mut mobius = vec![(1u64, 1 - gcds.len() as i64)];
    mobius.extend(gcds.iter().map(|&f| (f, 1)));
    Ok(Periodicity { ell, sublists, mobius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knapsack::gcd_poset;

    #[test]
    fn factorization() {
        assert_eq!(factorize(1).unwrap(), vec![]);
        assert_eq!(factorize(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(999_999_937).unwrap(), vec![(999_999_937, 1)]);
        assert!(factorize(MAX_TRIAL_DIVISION + 1).is_err());
    }

    #[test]
    fn paper_fan_example() {
        let a = [4 * 7u64.pow(4) * 41, 2 * 49 * 11, 11u64.pow(4), 17u64.pow(3)];
        let p = first_periodic_degree(&a).unwrap();
        assert_eq!(p.ell, 2);
        assert_eq!(p.sublists, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!((p.mu(1), p.mu(11), p.mu(98)), (Some(-1), Some(1), Some(1)));
        // The general Möbius algorithm on the same poset agrees.
        let g = gcd_poset(&a, a.len() - p.ell).unwrap();
        assert_eq!(g.pairs().collect::<Vec<_>>(), vec![(1, -1), (11, 1), (98, 1)]);
    }

    #[test]
    fn partitions_and_coprime() {
        for m in 4..=10u64 {
            let a: Vec<u64> = (1..=m).collect();
            let p = first_periodic_degree(&a).unwrap();
            assert_eq!(p.ell as u64, m / 2);
            assert_eq!(p.depth_below_leading(a.len() - 1), Some(m.div_ceil(2) as usize));
        }
        let p = first_periodic_degree(&[3, 5, 7]).unwrap();
        assert_eq!(p.top_nonconstant_degree(), Some(0));
        assert_eq!(first_periodic_degree(&[1, 1]).unwrap().top_nonconstant_degree(), None);
        assert!(first_periodic_degree_factored(&[6], &[vec![(2, 1)]]).is_err());
    }
}
