//! Upper and lower bounds on the maximum of a polynomial over a polytope from
//! integrals (continuous case) or sums (discrete case, boxes only) of `f^k`.

mod radical;

pub use radical::Radical;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::power_sum;
use crate::integrate::{integrate_polynomial, integrate_polynomial_box, Method};
use crate::polyhedra::{Polytope, Q};
use crate::polynomial::SparsePolynomial;
use crate::scalar::pow;

/// `Σ_m |c_m| deg(m) B^{deg(m) - 1}`: a bound on the ∞-norm Lipschitz constant of `f`
/// on `[-B, B]^d`, where `B` bounds every `|x_i|` on the domain.
pub fn lipschitz_constant(f: &SparsePolynomial<Q>, bound: &Q) -> Q {
    f.terms()
        .iter()
        .filter_map(|(m, c)| {
            let deg: u32 = m.iter().sum();
            (deg > 0).then(|| c.abs() * Q::from(BigInt::from(deg)) * pow(bound, deg - 1))
        })
        .sum()
}

/// `Σ_m |c_m| B^{deg m}`, an upper bound on `|f|` over `[-B, B]^d`.
pub fn trivial_upper_bound(f: &SparsePolynomial<Q>, bound: &Q) -> Q {
    f.terms().iter().map(|(m, c)| c.abs() * pow(bound, m.iter().sum())).sum()
}

/// Continuous bounds for one value of `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub k: u32,
    pub lower: Radical,
    pub upper: Radical,
    /// Largest coordinate width of the polytope.
    pub width: Q,
    /// Largest `|x_i|` over the polytope, used for the Lipschitz constant.
    pub coordinate_bound: Q,
    pub lipschitz: Q,
    pub eps_prime: Q,
    /// Smallest `k` for which the upper bound is guaranteed valid.
    pub k0: u64,
    pub integral: Q,
    pub volume: Q,
}

/// Geometric data shared by every `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub width: Q,
    pub coordinate_bound: Q,
    pub volume: Q,
    pub boxed: Option<Vec<(Q, Q)>>,
    pub vertices: Vec<Vec<Q>>,
}

impl Domain {
    pub fn new(p: &Polytope) -> Result<Self> {
        let vertices = p.vertices()?;
        let d = p.dim();
        let mut width = Q::zero();
        let mut coordinate_bound = Q::zero();
        for i in 0..d {
            let lo = vertices.iter().map(|v| v[i].clone()).min().expect("nonempty");
            let hi = vertices.iter().map(|v| v[i].clone()).max().expect("nonempty");
            width = width.max(&hi - &lo);
            coordinate_bound = coordinate_bound.max(lo.abs()).max(hi.abs());
        }
        let boxed = p.as_box();
        let volume = match &boxed {
            Some(b) => b.iter().map(|(l, h)| h - l).product(),
            None => p.volume()?,
        };
        if volume.is_zero() {
            return Err(Error::domain("optimize", "polytope has zero volume"));
        }
        Ok(Domain { width, coordinate_bound, volume, boxed, vertices })
    }
}

/// `∫_P f^k dx`, using separable monomial integration when `P` is a box.
pub fn integral_of_power(f: &SparsePolynomial<Q>, p: &Polytope, k: u32) -> Result<Q> {
    let fk = f.pow_expand(k);
    match p.as_box() {
        Some(b) => integrate_polynomial_box(&b, &fk),
        None => Ok(integrate_polynomial(p, &fk, Method::Triangulation)?.value),
    }
}

/// `L_k = (A)^{1/k}` and `U_k = (A (ML/ε')^d (1-ε')^{-k})^{1/(d+k)}` with
/// `A = ∫ f^k / vol P`, `ε' = d/(d+k)`, `M` the width and `L` the Lipschitz constant.
pub fn continuous_bounds(f: &SparsePolynomial<Q>, p: &Polytope, k: u32) -> Result<BoundsReport> {
    let dom = Domain::new(p)?;
    continuous_bounds_with(f, p, &dom, k, None)
}

/// As [`continuous_bounds`] with precomputed domain data and an optional initial
/// upper bound for `k0` (default `Σ |c_m| B^{deg m}`).
pub fn continuous_bounds_with(
    f: &SparsePolynomial<Q>,
    p: &Polytope,
    dom: &Domain,
    k: u32,
    initial_upper: Option<&Q>,
) -> Result<BoundsReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    for v in &dom.vertices {
        if f.evaluate(v).is_negative() {
            return Err(Error::domain(
                "optimize",
                "f is negative at a vertex; shift it first (for example by a Handelman shift s)",
            ));
        }
    }
    let d = p.dim() as u32;
    let integral = integral_of_power(f, p, k)?;
    let a = &integral / &dom.volume;
    let lipschitz = lipschitz_constant(f, &dom.coordinate_bound);
    let eps_prime = Q::new(BigInt::from(d), BigInt::from(d + k));
    let ml = &dom.width * &lipschitz;
    let radicand =
        &a * pow(&(&ml / &eps_prime), d) * pow(&(Q::one() / (Q::one() - &eps_prime)), k);
    let upper0 = match initial_upper {
        Some(u) => u.clone(),
        None => trivial_upper_bound(f, &dom.coordinate_bound),
    };
    let k0 = if ml.is_zero() {
        1
    } else {
        let t = Q::from(BigInt::from(d)) * (&upper0 / &ml - Q::one());
        t.ceil().to_integer().to_u64().unwrap_or(1).max(1)
    };
    // ML = 0 means f is constant on P, where the mean of f^k already gives f_max.
    let upper = if ml.is_zero() { Radical::new(a.clone(), k) } else { Radical::new(radicand, d + k) };
    Ok(BoundsReport {
        k,
        lower: Radical::new(a, k),
        upper,
        width: dom.width.clone(),
        coordinate_bound: dom.coordinate_bound.clone(),
        lipschitz,
        eps_prime,
        k0,
        integral,
        volume: dom.volume.clone(),
    })
}

/// The four terms whose maximum determines `k` for relative error `eps`, with
/// `δ = 0.1` and `c_δ = 4.05`.
pub fn choose_k_terms(eps: f64, upper: f64, width: f64, lipschitz: f64, d: f64) -> [f64; 4] {
    let (delta, c) = (0.1f64, 4.05f64);
    let ml = width * lipschitz;
    [
        d * (upper / ml - 1.0),
        d / ((eps + 1.0).cbrt() - 1.0),
        3.0 * d * (upper * ml).ln() * (1.0 + 1.0 / eps),
        d * ((3.0 * c).powf(1.0 + delta) * (1.0 + 1.0 / eps).powf(1.0 + delta) - 1.0),
    ]
}

/// `k` large enough that `U_k - L_k ≤ eps · f_max` per the k-selection bound.
pub fn choose_k(eps: &Q, upper: &Q, width: &Q, lipschitz: &Q, d: u32) -> Result<u64> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let f = |q: &Q| q.to_f64().unwrap_or(f64::NAN);
    let terms = choose_k_terms(f(eps), f(upper), f(width), f(lipschitz), d as f64);
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return Err(Error::domain("optimize", "k-selection terms are not finite"));
    }
    Ok(m.ceil().max(1.0) as u64)
}

/// Discrete bounds over the lattice points of a box.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBounds {
    pub k: u32,
    pub lower: Radical,
    pub upper: Radical,
    pub sum: Q,
    pub points: BigInt,
}

impl DiscreteBounds {
    /// The maximum of an integer-valued `f`, when the bounds pin it down.
    pub fn certified_integer_max(&self) -> Option<BigInt> {
        let lo = self.lower.ceil();
        let hi = self.upper.floor();
        (lo == hi).then_some(lo)
    }
}

fn integer_box(bounds: &[(Q, Q)]) -> Result<Vec<(i64, i64)>> {
    bounds
        .iter()
        .map(|(l, u)| {
            if !l.is_integer() || !u.is_integer() || l > u {
                return Err(Error::domain("optimize", "discrete bounds need integer box bounds"));
            }
            match (l.to_integer().to_i64(), u.to_integer().to_i64()) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(Error::domain("optimize", "box bounds out of range")),
            }
        })
        .collect()
}

/// `Σ_{x ∈ box ∩ Z^d} f(x)^k`, summing each monomial of `f^k` coordinatewise with
/// Faulhaber's formula.
pub fn lattice_power_sum(f: &SparsePolynomial<Q>, bounds: &[(Q, Q)], k: u32) -> Result<Q> {
    let b = integer_box(bounds)?;
    if b.len() != f.dim() {
        return Err(Error::InvalidInput("polynomial and box dimensions differ".into()));
    }
    let fk = f.pow_expand(k);
    let mut cache: Vec<Vec<Q>> = vec![Vec::new(); b.len()];
    let mut total = Q::zero();
    for (mono, c) in fk.terms() {
        let mut term = c;
        for (i, &e) in mono.iter().enumerate() {
            while cache[i].len() <= e as usize {
                let p = cache[i].len() as u32;
                cache[i].push(power_sum(b[i].0, b[i].1, p));
            }
            term *= &cache[i][e as usize];
        }
        total += term;
    }
    Ok(total)
}

/// `L_k = (Σ f^k / N)^{1/k}` and `U_k = (Σ f^k)^{1/k}` over the `N` lattice points
/// of the box `P`. Other domains are rejected.
pub fn discrete_bounds_box(f: &SparsePolynomial<Q>, p: &Polytope, k: u32) -> Result<DiscreteBounds> {
    let bounds = p
        .as_box()
        .ok_or_else(|| Error::domain("optimize", "discrete bounds are supported on boxes only"))?;
    discrete_bounds_on(f, &bounds, k)
}

pub fn discrete_bounds_on(f: &SparsePolynomial<Q>, bounds: &[(Q, Q)], k: u32) -> Result<DiscreteBounds> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let b = integer_box(bounds)?;
    let points: BigInt = b.iter().map(|(l, u)| BigInt::from(u - l + 1)).product();
    let sum = lattice_power_sum(f, bounds, k)?;
    if sum.is_negative() {
        return Err(Error::domain("optimize", "sum of f^k is negative; f must be nonnegative on the box"));
    }
    Ok(DiscreteBounds {
        k,
        lower: Radical::new(&sum / Q::from(points.clone()), k),
        upper: Radical::new(sum.clone(), k),
        sum,
        points,
    })
}
