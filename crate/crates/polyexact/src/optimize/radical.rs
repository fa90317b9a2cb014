use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polyhedra::Q;

/// The real number `radicand^{1/degree}` for a nonnegative rational radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radical {
    pub radicand: Q,
    pub degree: u32,
}

impl Radical {
    pub fn new(radicand: Q, degree: u32) -> Self {
        assert!(degree > 0, "root degree must be positive");
        assert!(!radicand.is_negative(), "radicand must be nonnegative");
        Radical { radicand, degree }
    }

    /// `⌊radicand^{1/degree} · 10^digits⌋`.
    pub fn scaled_floor(&self, digits: u32) -> BigInt {
        let scale = num_traits::pow(BigInt::from(10), (digits * self.degree) as usize);
        let x = (self.radicand.numer() * scale) / self.radicand.denom();
        x.nth_root(self.degree)
    }

    pub fn floor(&self) -> BigInt {
        self.scaled_floor(0)
    }

    pub fn ceil(&self) -> BigInt {
        let f = self.floor();
        if Q::from(num_traits::pow(f.clone(), self.degree as usize)) == self.radicand {
            f
        } else {
            f + BigInt::one()
        }
    }

    /// Decimal expansion truncated to `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let v = self.scaled_floor(digits);
        if digits == 0 {
            return v.to_string();
        }
        let s = format!("{:0>width$}", v.to_string(), width = digits as usize + 1);
        let (ip, fp) = s.split_at(s.len() - digits as usize);
        format!("{ip}.{fp}")
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }

    /// Exact comparison by raising both sides to a common power.
    pub fn cmp_exact(&self, other: &Radical) -> Ordering {
        let a = num_traits::pow(self.radicand.clone(), other.degree as usize);
        let b = num_traits::pow(other.radicand.clone(), self.degree as usize);
        a.cmp(&b)
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, q: &Q) -> Ordering {
        if q.is_negative() {
            return Ordering::Greater;
        }
        self.radicand.cmp(&num_traits::pow(q.clone(), self.degree as usize))
    }

    pub fn is_zero(&self) -> bool {
        self.radicand.is_zero()
    }

    pub fn to_rational_approx(&self, digits: u32) -> Q {
        Q::new(self.scaled_floor(digits), num_traits::pow(BigInt::from(10), digits as usize))
    }

    pub fn approx_u64(&self) -> Option<u64> {
        self.floor().to_u64()
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^(1/{})", crate::scalar::fmt_rational(&self.radicand), self.degree)
    }
}
