//! Scalar traits and small exact helpers.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Commutative ring with a map from the rationals.
///
/// Series and polynomial arithmetic only need this; coefficient rings such as
/// polynomials in symbolic fractional parts implement it too.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rational(q: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }
}

/// Ordered field used by the linear algebra, LP and integration layers.
pub trait Scalar: Ring + Div<Output = Self> + PartialOrd + Signed + FromPrimitive {}

impl<T: Ring + Div<Output = T> + PartialOrd + Signed + FromPrimitive> Scalar for T {}

impl Ring for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Ring for f64 {
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl Ring for f32 {
    fn from_rational(q: &BigRational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow<R: Ring>(base: &R, exp: u32) -> R {
    let mut acc = R::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

pub fn dot<S: Ring>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Formats a rational compactly: integers without denominator.
pub fn fmt_rational_short(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        fmt_rational(q)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim().trim_matches('"');
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Rounds a rational to a decimal string with `digits` fractional digits (truncating toward zero).
pub fn to_decimal(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q.numer() * &scale) / q.denom();
    let neg = scaled.is_negative() || (scaled.is_zero() && q.is_negative());
    let mag = scaled.abs();
    let (ip, fp) = mag.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{ip}");
    }
    format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b)
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| lcm_big(&acc, x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * big(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_rationals(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| big(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(0), BigInt::one());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("\"-7\"").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&int(6)), "6/1");
        assert_eq!(fmt_rational_short(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&rat(-7, 2), 2), "-3.50");
        assert_eq!(to_decimal(&rat(-1, 3), 2), "-0.33");
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer(&[rat(1, 2), rat(-3, 4), int(0)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(-3), BigInt::zero()]);
    }

    #[test]
    fn generic_pow() {
        assert_eq!(pow(&rat(2, 3), 3), rat(8, 27));
        assert_eq!(pow(&1.5f64, 2), 2.25);
    }
}
