//! Top coefficients of the denumerant quasi-polynomial `E(a; t)`, the number of
//! nonnegative integer solutions of `Σ α_i x_i = t`, written as step polynomials.

mod lattice;
mod oracle;
mod periodicity;
mod poset;
mod step;
mod topk;

#[cfg(test)]
mod tests;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub use lattice::{bezout_and_lattice, KnapsackLattice};
pub use oracle::{denumerant_oracle, denumerant_table, eval_poly, interpolate, MAX_ORACLE_T};
pub use periodicity::{factorize, first_periodic_degree, first_periodic_degree_factored, Periodicity, MAX_TRIAL_DIVISION};
pub use poset::{gcd_poset, GcdPoset};
pub use step::{fractional, StepPolynomial};
pub use topk::{
    coset_polynomials, evaluate_topk, format_univariate, parse_univariate, top_coefficients, top_coefficients_jobs, TopKQuasiPolynomial,
    MAX_COSET_PERIOD,
};

pub type Q = BigRational;
pub type Z = BigInt;

/// A knapsack list `[α_1, ..., α_{N+1}]` of positive integers, divided through by
/// its gcd. The removed factor is kept in `scale`, since `E(a; g t) = E(a/g; t)` and
/// `E(a; t) = 0` when `g` does not divide `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackList {
    a: Vec<u64>,
    scale: u64,
}

impl KnapsackList {
    pub fn new(raw: Vec<u64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidInput("knapsack list is empty".into()));
        }
        if raw.iter().any(|&x| x == 0) {
            return Err(Error::InvalidInput("knapsack entries must be positive".into()));
        }
        let g = raw.iter().fold(0u64, |acc, &x| acc.gcd(&x));
        Ok(KnapsackList { a: raw.iter().map(|x| x / g).collect(), scale: g })
    }

    /// The normalized entries (gcd 1).
    pub fn entries(&self) -> &[u64] {
        &self.a
    }

    /// The gcd divided out of the original input.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// The original entries.
    pub fn original(&self) -> Vec<u64> {
        self.a.iter().map(|x| x * self.scale).collect()
    }

    /// `N`, the degree of the quasi-polynomial.
    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Parses the file format: a line with `N+1`, then a line with the entries.
    /// Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let count: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty knapsack file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the number of entries".into()))?;
        let mut entries = Vec::with_capacity(count);
        for line in lines {
            for tok in line.split_whitespace() {
                entries.push(tok.parse::<u64>().map_err(|_| Error::Parse(format!("bad knapsack entry {tok:?}")))?);
            }
        }
        if entries.len() != count {
            return Err(Error::Parse(format!("expected {count} entries, found {}", entries.len())));
        }
        KnapsackList::new(entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for KnapsackList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orig = self.original();
        writeln!(f, "{}", orig.len())?;
        let parts: Vec<String> = orig.iter().map(u64::to_string).collect();
        writeln!(f, "{}", parts.join(" "))
    }
}
