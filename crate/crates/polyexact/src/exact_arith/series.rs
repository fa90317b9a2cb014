use std::collections::BTreeMap;

use num_rational::BigRational;

use super::bernoulli::bernoulli;
use crate::error::{Error, Result};
use crate::scalar::{big, factorial, Ring, Scalar};

/// Multivariate power series in `t_1..t_n`, truncated at total degree `max_degree`,
/// with at most one extra Laurent variable that may carry negative exponents.
///
/// The Laurent exponent is stored last in every exponent vector and does not
/// count toward the total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    vars: Vec<u32>,
    laurent: Option<u32>,
    max_degree: u32,
    laurent_max: Option<i32>,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Ring> TruncatedSeries<C> {
    pub fn new(vars: Vec<u32>, laurent: Option<u32>, max_degree: u32) -> Self {
        TruncatedSeries { vars, laurent, max_degree, laurent_max: None, terms: BTreeMap::new() }
    }

    /// Series in `n` variables with symbol ids `0..n` and, optionally, Laurent symbol `n`.
    pub fn with_vars(n: usize, laurent: bool, max_degree: u32) -> Self {
        let vars = (0..n as u32).collect();
        Self::new(vars, laurent.then_some(n as u32), max_degree)
    }

    /// Drops every term whose Laurent exponent exceeds `cap` in later products.
    pub fn with_laurent_cap(mut self, cap: i32) -> Self {
        self.laurent_max = Some(cap);
        self.truncate();
        self
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn has_laurent(&self) -> bool {
        self.laurent.is_some()
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn width(&self) -> usize {
        self.vars.len() + self.laurent.is_some() as usize
    }

    pub fn zero_like(&self) -> Self {
        TruncatedSeries {
            vars: self.vars.clone(),
            laurent: self.laurent,
            max_degree: self.max_degree,
            laurent_max: self.laurent_max,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_like(&self, c: C) -> Self {
        let mut s = self.zero_like();
        s.add_term(vec![0; self.width()], c);
        s
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(C::one())
    }

    /// The monomial `c * t^exps` (Laurent exponent last, if present).
    pub fn monomial_like(&self, exps: Vec<i32>, c: C) -> Self {
        let mut s = self.zero_like();
        s.add_term(exps, c);
        s
    }

    fn total_degree(&self, exps: &[i32]) -> i64 {
        exps[..self.vars.len()].iter().map(|&e| e as i64).sum()
    }

    fn keeps(&self, exps: &[i32]) -> bool {
        if self.total_degree(exps) > self.max_degree as i64 {
            return false;
        }
        match (self.laurent, self.laurent_max) {
            (Some(_), Some(cap)) => exps[self.vars.len()] <= cap,
            _ => true,
        }
    }

    /// Accumulates `c * t^exps`, respecting truncation and dropping zeros.
    pub fn add_term(&mut self, exps: Vec<i32>, c: C) {
        assert_eq!(exps.len(), self.width(), "exponent vector has wrong length");
        assert!(
            exps[..self.vars.len()].iter().all(|&e| e >= 0),
            "only the Laurent variable may carry negative exponents"
        );
        if c.is_zero() || !self.keeps(&exps) {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn truncate(&mut self) {
        let probe = self.zero_like();
        self.terms.retain(|e, _| probe.keeps(e));
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars || self.laurent != other.laurent {
            return Err(Error::Structural(format!(
                "series variable mismatch: {:?}/{:?} vs {:?}/{:?}",
                self.vars, self.laurent, other.vars, other.laurent
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.scale(&C::from_rational(q))
    }

    /// Product truncated at this series' own degree bound.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        truncated_mul(self, other, self.max_degree.min(other.max_degree))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `sum_j coeffs[j] * u^j`, for `u` without a constant term.
    pub fn compose(coeffs: &[BigRational], u: &Self) -> Result<Self> {
        if u.terms.keys().any(|e| u.total_degree(e) == 0) {
            return Err(Error::InvalidInput(
                "series composition needs an argument without degree-0 terms".into(),
            ));
        }
        let top = (u.max_degree as usize).min(coeffs.len().saturating_sub(1));
        let mut acc = u.zero_like();
        for j in (0..=top).rev() {
            acc = acc.mul(u)?;
            acc.add_term(vec![0; u.width()], C::from_rational(&coeffs[j]));
        }
        Ok(acc)
    }

    /// `exp(u)` for `u` without a constant term.
    pub fn exp(u: &Self) -> Result<Self> {
        let coeffs: Vec<BigRational> = (0..=u.max_degree)
            .map(|k| BigRational::new(1.into(), factorial(k)))
            .collect();
        Self::compose(&coeffs, u)
    }

    /// `u / (1 - e^u)` for `u` without a constant term, as `-sum B_k u^k / k!`.
    pub fn bernoulli_factor(u: &Self) -> Result<Self> {
        let coeffs: Vec<BigRational> = (0..=u.max_degree)
            .map(|k| -bernoulli(k as usize) / big(factorial(k)))
            .collect();
        Self::compose(&coeffs, u)
    }

    /// Coefficient series of `eps^order` in the Laurent variable.
    pub fn residue_coeff(&self, order: i32) -> TruncatedSeries<C> {
        residue_coeff(self, order)
    }

    /// Multiplies by `eps^shift` in the Laurent variable.
    pub fn shift_laurent(&self, shift: i32) -> Self {
        assert!(self.laurent.is_some(), "series has no Laurent variable");
        let n = self.vars.len();
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[n] += shift;
            out.add_term(e2, c.clone());
        }
        out
    }
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Multiplicative inverse of a non-Laurent series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        if self.laurent.is_some() {
            return Err(Error::InvalidInput("inverse of a Laurent series is not supported".into()));
        }
        let zero = vec![0; self.width()];
        let a0 = self.coeff(&zero);
        if a0.is_zero() {
            return Err(Error::InvalidInput("series constant term is zero".into()));
        }
        let inv0 = S::one() / a0.clone();
        let mut u = self.scale(&inv0);
        u.add_term(zero.clone(), -S::one());
        let coeffs: Vec<BigRational> = (0..=self.max_degree)
            .map(|j| if j % 2 == 0 { BigRational::from_integer(1.into()) } else { BigRational::from_integer((-1).into()) })
            .collect();
        Ok(Self::compose(&coeffs, &u)?.scale(&inv0))
    }
}

/// Product of two series with every term of total degree above `m` discarded.
pub fn truncated_mul<C: Ring>(
    a: &TruncatedSeries<C>,
    b: &TruncatedSeries<C>,
    m: u32,
) -> Result<TruncatedSeries<C>> {
    a.check_compatible(b)?;
    let mut out = a.zero_like();
    out.max_degree = m;
    out.laurent_max = match (a.laurent_max, b.laurent_max) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let n = a.vars.len();
    for (ea, ca) in &a.terms {
        let da = a.total_degree(ea);
        if da > m as i64 {
            continue;
        }
        for (eb, cb) in &b.terms {
            if da + b.total_degree(eb) > m as i64 {
                continue;
            }
            let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if let (Some(_), Some(cap)) = (out.laurent, out.laurent_max) {
                if e[n] > cap {
                    continue;
                }
            }
            out.add_term(e, ca.clone() * cb.clone());
        }
    }
    Ok(out)
}

/// The linear form `<c, t>` as a series.
pub fn linear_series<S: Ring>(c: &[S], max_degree: u32) -> TruncatedSeries<S> {
    let mut s = TruncatedSeries::with_vars(c.len(), false, max_degree);
    for (i, ci) in c.iter().enumerate() {
        let mut e = vec![0; c.len()];
        e[i] = 1;
        s.add_term(e, ci.clone());
    }
    s
}

/// `sum_{k <= m} <c, t>^k / k!`.
pub fn exp_series<S: Ring>(c: &[S], m: u32) -> TruncatedSeries<S> {
    let lin = linear_series(c, m);
    TruncatedSeries::exp(&lin).expect("linear form has no constant term")
}

/// Degree-`m` truncation of `<c, t> / (1 - e^{<c, t>})`.
pub fn bernoulli_factor_series<S: Ring>(c: &[S], m: u32) -> Result<TruncatedSeries<S>> {
    if c.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidInput("bernoulli factor of the zero form".into()));
    }
    TruncatedSeries::bernoulli_factor(&linear_series(c, m))
}

/// Coefficient of `eps^order` of the Laurent variable, as a series in the remaining variables.
pub fn residue_coeff<C: Ring>(s: &TruncatedSeries<C>, order: i32) -> TruncatedSeries<C> {
    let n = s.vars.len();
    let mut out = TruncatedSeries::new(s.vars.clone(), None, s.max_degree);
    match s.laurent {
        None => {
            if order == 0 {
                for (e, c) in &s.terms {
                    out.add_term(e.clone(), c.clone());
                }
            }
        }
        Some(_) => {
            for (e, c) in &s.terms {
                if e[n] == order {
                    out.add_term(e[..n].to_vec(), c.clone());
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    type Q = BigRational;

    fn uni(coeffs: &[i64], m: u32) -> TruncatedSeries<Q> {
        let mut s = TruncatedSeries::with_vars(1, false, m);
        for (i, c) in coeffs.iter().enumerate() {
            s.add_term(vec![i as i32], int(*c));
        }
        s
    }

    #[test]
    fn truncated_products() {
        let a = uni(&[1, 1], 5);
        assert_eq!(truncated_mul(&a, &a, 1).unwrap().terms, uni(&[1, 2], 1).terms);
        let b = uni(&[1, 1, 1], 5);
        let c = uni(&[1, -1], 5);
        assert_eq!(truncated_mul(&b, &c, 2).unwrap().terms, uni(&[1], 2).terms);
    }

    #[test]
    fn exp_products_add_exponents() {
        let a = exp_series(&[int(2)], 3);
        let b = exp_series(&[int(3)], 3);
        let c = truncated_mul(&a, &b, 3).unwrap();
        for k in 0..=3u32 {
            let expect = Q::new(num_traits::pow(num_bigint::BigInt::from(5), k as usize), factorial(k));
            assert_eq!(c.coeff(&[k as i32]), expect);
        }
    }

    #[test]
    fn exp_series_examples() {
        assert_eq!(exp_series(&[int(0)], 4).terms, uni(&[1], 4).terms);
        let e = exp_series(&[int(1)], 2);
        assert_eq!(e.coeff(&[2]), rat(1, 2));
        let e2 = exp_series(&[int(2), int(1)], 1);
        assert_eq!(e2.coeff(&[0, 0]), int(1));
        assert_eq!(e2.coeff(&[1, 0]), int(2));
        assert_eq!(e2.coeff(&[0, 1]), int(1));
        assert_eq!(e2.len(), 3);
    }

    #[test]
    fn bernoulli_factor_examples() {
        let s = bernoulli_factor_series(&[int(1)], 0).unwrap();
        assert_eq!(s.coeff(&[0]), int(-1));
        assert_eq!(s.len(), 1);
        let s = bernoulli_factor_series(&[int(1)], 1).unwrap();
        assert_eq!(s.coeff(&[0]), int(-1));
        assert_eq!(s.coeff(&[1]), rat(1, 2));
        let s = bernoulli_factor_series(&[int(2)], 1).unwrap();
        assert_eq!(s.coeff(&[1]), int(1));
        assert!(bernoulli_factor_series(&[int(0)], 2).is_err());
    }

    #[test]
    fn bernoulli_factor_times_denominator() {
        // (u / (1 - e^u)) * (1 - e^u) = u
        let c = [int(2), int(-3)];
        let m = 6;
        let bf = bernoulli_factor_series(&c, m).unwrap();
        let e = exp_series(&c, m);
        let one_minus = e.one_like().sub(&e).unwrap();
        let prod = truncated_mul(&bf, &one_minus, m).unwrap();
        assert_eq!(prod, linear_series(&c, m));
    }

    #[test]
    fn residues() {
        let mut s: TruncatedSeries<Q> = TruncatedSeries::with_vars(0, true, 0);
        s.add_term(vec![-1], int(1));
        s.add_term(vec![0], int(3));
        s.add_term(vec![1], int(2));
        assert_eq!(residue_coeff(&s, 0).coeff(&[]), int(3));
        let t = s.monomial_like(vec![-2], int(5));
        assert_eq!(residue_coeff(&t, 0).coeff(&[]), int(0));
    }

    #[test]
    fn laurent_residue_of_rational_function() {
        // (1+e)^3 / (e^2 (e - 1)), coefficient of e^-1
        let num = uni(&[1, 3, 3, 1], 3);
        let den = uni(&[-1, 1], 3).inverse().unwrap();
        let regular = truncated_mul(&num, &den, 3).unwrap();
        let mut lifted: TruncatedSeries<Q> = TruncatedSeries::with_vars(0, true, 0);
        for (e, c) in regular.terms() {
            lifted.add_term(vec![e[0]], c.clone());
        }
        let shifted = lifted.shift_laurent(-2);
        assert_eq!(residue_coeff(&shifted, -1).coeff(&[]), int(-4));
    }

    #[test]
    fn mismatched_variables() {
        let a: TruncatedSeries<Q> = TruncatedSeries::with_vars(1, false, 2);
        let b: TruncatedSeries<Q> = TruncatedSeries::with_vars(2, false, 2);
        assert!(matches!(truncated_mul(&a, &b, 2), Err(Error::Structural(_))));
    }

    #[test]
    fn float_coefficients() {
        let e = exp_series(&[1.0f64], 10);
        let total: f64 = e.terms().map(|(_, c)| *c).sum();
        assert!((total - std::f64::consts::E).abs() < 1e-6);
    }

    fn arb_series() -> impl Strategy<Value = Vec<((i32, i32), i64)>> {
        prop::collection::vec(((0i32..4, 0i32..4), -5i64..5), 0..25)
    }

    proptest! {
        #[test]
        fn truncated_mul_matches_full_product(a in arb_series(), b in arb_series(), m in 0u32..7) {
            let build = |ts: &[((i32, i32), i64)], deg: u32| {
                let mut s: TruncatedSeries<Q> = TruncatedSeries::with_vars(2, false, deg);
                for ((x, y), c) in ts { s.add_term(vec![*x, *y], int(*c)); }
                s
            };
            let full = truncated_mul(&build(&a, 20), &build(&b, 20), 20).unwrap();
            let trunc = truncated_mul(&build(&a, 20), &build(&b, 20), m).unwrap();
            let mut filtered: TruncatedSeries<Q> = TruncatedSeries::with_vars(2, false, m);
            for (e, c) in full.terms() { filtered.add_term(e.clone(), c.clone()); }
            prop_assert_eq!(trunc.terms, filtered.terms);
        }

        #[test]
        fn rational_field_laws(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50, e in -50i64..50, f in 1i64..50) {
            let (x, y, z) = (rat(a, b), rat(c, d), rat(e, f));
            prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
            prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        }

        #[test]
        fn inverse_roundtrip(c0 in 1i64..9, c1 in -9i64..9, c2 in -9i64..9) {
            let s = uni(&[c0, c1, c2], 6);
            let p = s.mul(&s.inverse().unwrap()).unwrap();
            prop_assert_eq!(p.terms, uni(&[1], 6).terms);
        }
    }
}
