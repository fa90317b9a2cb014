use num_traits::Zero;

use super::Q;
use crate::error::{Error, Result};

/// Largest `t` accepted by the dynamic-programming oracle.
pub const MAX_ORACLE_T: u64 = 10_000_000;

/// `E(a; t)` for `t = 0..=t_max` by the coin-change recurrence.
pub fn denumerant_table(a: &[u64], t_max: u64) -> Result<Vec<u128>> {
    if t_max > MAX_ORACLE_T {
        return Err(Error::resource("knapsack", format!("oracle limited to t <= {MAX_ORACLE_T}")));
    }
    if a.iter().any(|&x| x == 0) {
        return Err(Error::InvalidInput("knapsack entries must be positive".into()));
    }
    let n = t_max as usize;
    let mut dp = vec![0u128; n + 1];
    dp[0] = 1;
    for &alpha in a {
        let alpha = alpha as usize;
        for t in alpha..=n {
            dp[t] = dp[t]
                .checked_add(dp[t - alpha])
                .ok_or_else(|| Error::resource("knapsack", "oracle count overflows 128 bits"))?;
        }
    }
    Ok(dp)
}

/// Number of nonnegative integer solutions of `Σ α_i x_i = t`.
pub fn denumerant_oracle(a: &[u64], t: u64) -> Result<u128> {
    Ok(denumerant_table(a, t)?[t as usize])
}

/// Coefficients (lowest degree first) of the unique polynomial of degree
/// `< points.len()` through the given points, by Newton divided differences.
pub fn interpolate(points: &[(Q, Q)]) -> Vec<Q> {
    let n = points.len();
    let xs: Vec<&Q> = points.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Q> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    // Horner on the Newton form.
    let mut coeffs: Vec<Q> = vec![Q::zero(); n.max(1)];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - x_i) + dd[i]
        let mut next = vec![Q::zero(); n.max(1)];
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d + 1 < next.len() {
                next[d + 1] += c;
            }
            next[d] -= c * xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() == 1 && coeffs[0].is_zero() {
        coeffs.clear();
    }
    coeffs
}

/// Evaluates a coefficient vector (lowest degree first).
pub fn eval_poly(c: &[Q], x: &Q) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, ci| acc * x + ci)
}
