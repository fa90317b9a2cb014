use std::sync::Mutex;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{big, binomial, int};

// Akiyama-Tanigawa state: the working row and the numbers produced so far (with the
// recurrence's own sign at index 1). Extended on demand and shared by all callers.
struct Table {
    row: Vec<BigRational>,
    values: Vec<BigRational>,
}

static TABLE: Mutex<Table> = Mutex::new(Table { row: Vec::new(), values: Vec::new() });

fn extend_to(t: &mut Table, k: usize) {
    while t.values.len() <= k {
        let i = t.values.len();
        t.row.push(BigRational::new(One::one(), (i as i64 + 1).into()));
        for j in (1..=i).rev() {
            t.row[j - 1] = int(j as i64) * (&t.row[j - 1] - &t.row[j]);
        }
        t.values.push(t.row[0].clone());
    }
}

/// Bernoulli numbers `B_0..=B_n` by the Akiyama-Tanigawa recurrence, with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<BigRational> {
    let mut t = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    extend_to(&mut t, n);
    let mut out = t.values[..=n].to_vec();
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// `B_k` by the Akiyama-Tanigawa recurrence. The sign at `k = 1` is flipped so that `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> BigRational {
    let mut t = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    extend_to(&mut t, k);
    if k == 1 {
        -t.values[1].clone()
    } else {
        t.values[k].clone()
    }
}

/// Coefficients `c_0..c_{p+1}` of the polynomial `F(n, p) = sum_{j=1}^n j^p` in `n`.
///
/// Uses `B_1 = +1/2`, so `F(1, p) = 1`. The polynomial identity also holds for
/// negative `n`, which is what makes `F(u) - F(l - 1)` valid for any integer range.
pub fn faulhaber_polynomial(p: u32) -> Vec<BigRational> {
    let mut coeffs = vec![BigRational::zero(); p as usize + 2];
    let scale = BigRational::new(One::one(), (p as i64 + 1).into());
    let table = bernoulli_table(p as usize);
    for j in 0..=p {
        let mut b = table[j as usize].clone();
        if j == 1 {
            b = -b;
        }
        if b.is_zero() {
            continue;
        }
        let c = big(binomial(p + 1, j)) * b * &scale;
        coeffs[(p + 1 - j) as usize] += c;
    }
    coeffs
}

/// `sum_{j=1}^n j^p`, evaluated through the closed form.
pub fn faulhaber(n: &BigRational, p: u32) -> BigRational {
    let coeffs = faulhaber_polynomial(p);
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * n + c)
}

/// `sum_{j=l}^u j^p` for integers `l <= u + 1` (empty range gives zero).
pub fn power_sum(l: i64, u: i64, p: u32) -> BigRational {
    if u < l {
        return BigRational::zero();
    }
    faulhaber(&int(u), p) - faulhaber(&int(l - 1), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    #[test]
    fn first_bernoulli_numbers() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn faulhaber_values() {
        assert_eq!(faulhaber(&int(3), 1), int(6));
        assert_eq!(faulhaber(&int(5), 2), int(55));
        assert_eq!(faulhaber(&int(6), 2), int(91));
        for p in 0..6 {
            assert_eq!(faulhaber(&int(0), p), int(0));
            assert_eq!(faulhaber(&int(1), p), int(1));
        }
    }

    #[test]
    fn faulhaber_matches_brute_force() {
        for p in 0..=6u32 {
            let mut acc = BigRational::zero();
            for n in 1..=50i64 {
                acc += int(n.pow(p));
                assert_eq!(faulhaber(&int(n), p), acc, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn power_sum_over_negative_ranges() {
        assert_eq!(power_sum(-5, 6, 2), int(146));
        assert_eq!(power_sum(-5, 6, 1), int(6));
        assert_eq!(power_sum(1, 3, 0), int(3));
        assert_eq!(power_sum(4, 3, 5), int(0));
    }

    proptest! {
        #[test]
        fn power_sum_brute(l in -20i64..20, len in 0i64..20, p in 0u32..6) {
            let u = l + len - 1;
            let brute: i64 = (l..=u).map(|j| j.pow(p)).sum();
            prop_assert_eq!(power_sum(l, u, p), int(brute));
        }
    }
}
