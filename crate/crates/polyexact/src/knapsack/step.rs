use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Q;
use crate::error::{Error, Result};
use crate::scalar::{fmt_rational_short, parse_rational};

/// Fractional part `{x} = x - floor(x)`.
pub fn fractional(x: &Q) -> Q {
    x - x.floor()
}

/// A rational step polynomial `Σ_l c_l Π_j {r_{l,j} T}^{n_{l,j}}` in an integer
/// variable `T`.
///
/// Each `r` is kept in `(0, 1)`, which is harmless because `{(r + 1)T} = {rT}` for
/// integer `T`, and factors with equal `r` are merged. Terms are keyed by their
/// sorted factor list; the empty list is the constant term.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepPolynomial {
    terms: BTreeMap<Vec<(Q, u32)>, Q>,
}

impl StepPolynomial {
    pub fn zero() -> Self {
        StepPolynomial::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = StepPolynomial::zero();
        p.add_term(c, &[]);
        p
    }

    /// Adds `c Π {r T}^n`, normalizing the factors first.
    pub fn add_term(&mut self, c: Q, factors: &[(Q, u32)]) {
        if c.is_zero() {
            return;
        }
        let mut merged: BTreeMap<Q, u32> = BTreeMap::new();
        for (r, n) in factors {
            if *n == 0 {
                continue;
            }
            let r = fractional(r);
            if r.is_zero() {
                return;
            }
            *merged.entry(r).or_insert(0) += n;
        }
        let key: Vec<(Q, u32)> = merged.into_iter().collect();
        let entry = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<(Q, u32)>, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term involves a fractional part (syntactic check).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.is_empty())
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.iter().map(|(_, n)| n).sum()).max().unwrap_or(0)
    }

    /// The lcm of the denominators of all `r`, a period of the function.
    pub fn period(&self) -> BigInt {
        self.terms
            .keys()
            .flatten()
            .fold(BigInt::one(), |acc, (r, _)| acc.lcm(r.denom()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(c.clone(), k);
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = StepPolynomial::zero();
        for (k, c) in &self.terms {
            out.add_term(c * s, k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = StepPolynomial::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let factors: Vec<(Q, u32)> = ka.iter().chain(kb.iter()).cloned().collect();
                out.add_term(ca * cb, &factors);
            }
        }
        out
    }

    pub fn evaluate(&self, t: &BigInt) -> Q {
        let tq = Q::from(t.clone());
        let mut acc = Q::zero();
        for (k, c) in &self.terms {
            let mut term = c.clone();
            for (r, n) in k {
                term *= num_traits::pow(fractional(&(r * &tq)), *n as usize);
            }
            acc += term;
        }
        acc
    }

    /// Equality as functions of `T`, decided by evaluation over one common period.
    pub fn equals_as_function(&self, other: &Self) -> bool {
        let p = self.period().lcm(&other.period());
        let mut t = BigInt::zero();
        while t < p {
            if self.evaluate(&t) != other.evaluate(&t) {
                return false;
            }
            t += 1;
        }
        true
    }

    /// Parses the text produced by `Display`, for example
    /// `1/4 - 1/6*{2/3*T} - 1/6*{1/2*T}^2`. Negative or improper `r` are accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = StepPolynomial::zero();
        if s.is_empty() || s == "0" {
            return Ok(out);
        }
        for (negative, body) in split_terms(&s)? {
            let mut coef = Q::one();
            let mut factors = Vec::new();
            for part in split_factors(body)? {
                if let Some(inner) = part.strip_prefix('{') {
                    let (inside, rest) = inner
                        .split_once('}')
                        .ok_or_else(|| Error::Parse(format!("unbalanced braces in {part:?}")))?;
                    let r = parse_fraction_of_t(inside)?;
                    let n = match rest.strip_prefix('^') {
                        Some(e) => e.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {part:?}")))?,
                        None if rest.is_empty() => 1,
                        None => return Err(Error::Parse(format!("unexpected text after factor {part:?}"))),
                    };
                    factors.push((r, n));
                } else {
                    coef *= parse_rational(part)?;
                }
            }
            if negative {
                coef = -coef;
            }
            out.add_term(coef, &factors);
        }
        Ok(out)
    }
}

// Splits at top-level signs, returning (negative, body) pairs.
fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'{' => depth += 1,
            b'}' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                // A sign directly after '^', '*' or '/' is not a term separator.
                let prev = if i == 0 { None } else { Some(bytes[i - 1]) };
                if matches!(prev, Some(b'*') | Some(b'/') | Some(b'^')) {
                    continue;
                }
                if i > start {
                    out.push((negative, &s[start..i]));
                } else if i > 0 {
                    return Err(Error::Parse(format!("empty term in {s:?}")));
                }
                negative = b == b'-';
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced braces in {s:?}")));
        }
    }
    if depth != 0 || start >= s.len() {
        return Err(Error::Parse(format!("malformed step polynomial {s:?}")));
    }
    out.push((negative, &s[start..]));
    Ok(out)
}

// Splits a term at top-level '*'.
fn split_factors(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            '*' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    if out.iter().any(|p| p.is_empty()) {
        return Err(Error::Parse(format!("empty factor in {s:?}")));
    }
    Ok(out)
}

// Parses `r*T`, `T`, `-T` or `T/q` inside braces.
fn parse_fraction_of_t(s: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("expected r*T inside braces, got {s:?}"));
    if let Some(r) = s.strip_suffix("*T") {
        return parse_rational(r);
    }
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let r = if rest == "T" {
        Q::one()
    } else if let Some(d) = rest.strip_prefix("T/") {
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Q::new(BigInt::one(), d)
    } else {
        return Err(bad());
    };
    Ok(if neg { -r } else { r })
}

impl fmt::Display for StepPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Constant first, then by degree and factor list.
        let mut keys: Vec<&Vec<(Q, u32)>> = self.terms.keys().collect();
        keys.sort_by_key(|k| (k.iter().map(|(_, n)| *n).sum::<u32>(), (*k).clone()));
        for (i, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            let mut parts = Vec::new();
            if k.is_empty() || !mag.is_one() {
                parts.push(fmt_rational_short(&mag));
            }
            for (r, n) in k {
                let factor = format!("{{{}*T}}", fmt_rational_short(r));
                parts.push(if *n == 1 { factor } else { format!("{factor}^{n}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn normalization_and_eval() {
        let mut p = StepPolynomial::zero();
        p.add_term(rat(1, 4), &[]);
        p.add_term(rat(-1, 6), &[(rat(-1, 3), 1)]);
        p.add_term(rat(-1, 6), &[(rat(1, 2), 1)]);
        // {-T/3} is stored as {2T/3}.
        assert!(p.terms().any(|(k, _)| k == &vec![(rat(2, 3), 1)]));
        assert_eq!(p.period(), BigInt::from(6));
        assert_eq!(p.evaluate(&BigInt::from(0)), rat(1, 4));
        // T = 1: 1/4 - (2/3)/6 - (1/2)/6 = 1/18.
        assert_eq!(p.evaluate(&BigInt::from(1)), rat(1, 18));
        let mut q = StepPolynomial::zero();
        q.add_term(int(1), &[(rat(1, 1), 3)]);
        assert!(q.is_zero());
    }

    #[test]
    fn format_round_trip() {
        let mut p = StepPolynomial::constant(rat(1, 1));
        p.add_term(rat(-3, 2), &[(rat(2, 3), 1)]);
        p.add_term(rat(1, 2), &[(rat(2, 3), 2)]);
        p.add_term(int(1), &[(rat(2, 3), 1), (rat(1, 2), 1)]);
        let text = p.to_string();
        assert_eq!(text, "1 - 3/2*{2/3*T} + {1/2*T}*{2/3*T} + 1/2*{2/3*T}^2");
        assert_eq!(StepPolynomial::parse(&text).unwrap(), p);
        let r = StepPolynomial::parse("1/4 - 1/6*{-1/3*T} - 1/6*{T/2}").unwrap();
        assert_eq!(r.evaluate(&BigInt::from(1)), rat(1, 18));
        assert_eq!(StepPolynomial::parse("0").unwrap(), StepPolynomial::zero());
        assert!(StepPolynomial::parse("1 + {1/2*T").is_err());
        assert!(StepPolynomial::parse("1 + + 2").is_err());
    }

    #[test]
    fn functional_equality() {
        let a = StepPolynomial::parse("{1/2*T}^2").unwrap();
        let b = StepPolynomial::parse("1/2*{1/2*T}").unwrap();
        assert!(a.equals_as_function(&b));
        assert!(!a.equals_as_function(&StepPolynomial::parse("{1/2*T}").unwrap()));
    }
}
