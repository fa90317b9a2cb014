//! Handelman decompositions over polytopes via exact linear programming, the
//! Handelman upper bound hierarchy, and integration of `(f + s)^k` from a
//! decomposition.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::integrate::{integrate_affine_products_simplex, AffineProductTable};
use crate::lp::{solve_lp_exact, ExactLp, LpOutcome};
use crate::polyhedra::{Polytope, Q};
use crate::polynomial::{exponent_vectors, SparsePolynomial};
use crate::scalar::factorial;

/// Extra degrees tried beyond `deg f` when a decomposition is infeasible.
pub const DEFAULT_ESCALATION: u32 = 4;

/// `f + s = Σ_α c_α g^α` with `c_α ≥ 0`, where `g_i = b_i - a_i·x` are the facet rows.
#[derive(Debug, Clone, PartialEq)]
pub struct HandelmanDecomposition {
    pub degree: u32,
    pub facets: Vec<SparsePolynomial<Q>>,
    pub terms: BTreeMap<Vec<u32>, Q>,
    pub shift: Q,
}

impl HandelmanDecomposition {
    /// Expands `Σ c_α g^α` into a polynomial in `x`.
    pub fn expand(&self) -> SparsePolynomial<Q> {
        let dim = self.facets.first().map_or(0, |g| g.dim());
        let mut out = SparsePolynomial::new(dim);
        for (alpha, c) in &self.terms {
            out = out.add(&facet_power(&self.facets, alpha).scale(c));
        }
        out
    }

    /// The polynomial `h(y) = Σ c_α y^α` in one variable per facet.
    pub fn coefficient_polynomial(&self) -> SparsePolynomial<Q> {
        SparsePolynomial::from_terms(self.facets.len(), self.terms.iter().map(|(a, c)| (a.clone(), c.clone())))
    }

    pub fn objective(&self) -> Q {
        self.terms.values().fold(self.shift.clone(), |acc, c| acc + c)
    }
}

/// The LP together with the meaning of its columns and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct HandelmanLp {
    pub lp: ExactLp<Q>,
    /// Exponent vector of each `c_α` column; the last column is the shift.
    pub alphas: Vec<Vec<u32>>,
    /// Monomial matched by each row.
    pub monomials: Vec<Vec<u32>>,
    pub facets: Vec<SparsePolynomial<Q>>,
}

/// Facet polynomials `g_i = b_i - a_i·x` of the polytope.
pub fn facet_polynomials(p: &Polytope) -> Vec<SparsePolynomial<Q>> {
    let d = p.dim();
    p.a()
        .iter()
        .zip(p.b())
        .map(|(row, bi)| {
            let mut g = SparsePolynomial::constant(d, bi.clone());
            for (j, aj) in row.iter().enumerate() {
                g = g.sub(&SparsePolynomial::var(d, j).scale(aj));
            }
            g
        })
        .collect()
}

fn facet_power(facets: &[SparsePolynomial<Q>], alpha: &[u32]) -> SparsePolynomial<Q> {
    let dim = facets.first().map_or(0, |g| g.dim());
    facets
        .iter()
        .zip(alpha)
        .fold(SparsePolynomial::constant(dim, Q::one()), |acc, (g, &k)| if k == 0 { acc } else { acc.mul(&g.pow_expand(k)) })
}

// Column of [x^m] g^α for every α with |α| ≤ t, built incrementally.
fn facet_powers(facets: &[SparsePolynomial<Q>], alphas: &[Vec<u32>]) -> Vec<SparsePolynomial<Q>> {
    let dim = facets.first().map_or(0, |g| g.dim());
    let mut cache: BTreeMap<Vec<u32>, SparsePolynomial<Q>> = BTreeMap::new();
    let mut out = Vec::with_capacity(alphas.len());
    for a in alphas {
        let poly = match a.iter().position(|&k| k > 0) {
            None => SparsePolynomial::constant(dim, Q::one()),
            Some(i) => {
                let mut prev = a.clone();
                prev[i] -= 1;
                cache[&prev].mul(&facets[i])
            }
        };
        cache.insert(a.clone(), poly.clone());
        out.push(poly);
    }
    out
}

#[derive(Clone, Copy)]
enum Shift {
    /// `f + s = Σ c g^α`, minimizing `s + Σ c`.
    Free,
    /// `f + s = Σ c g^α`, minimizing `s` alone.
    MinShift,
    /// `λ - f = Σ c g^α`, minimizing `λ`.
    Bound,
    /// `f + value = Σ c g^α` with the shift fixed.
    Fixed,
}

fn build(f: &SparsePolynomial<Q>, p: &Polytope, t: u32, mode: Shift, fixed: &Q) -> Result<HandelmanLp> {
    let d = p.dim();
    if f.dim() != d {
        return Err(Error::InvalidInput("polynomial and polytope dimensions differ".into()));
    }
    if f.degree() > t {
        return Err(Error::InvalidInput(format!("Handelman degree {t} is below deg f = {}", f.degree())));
    }
    let facets = facet_polynomials(p);
    let alphas = exponent_vectors(facets.len(), t);
    let monomials = exponent_vectors(d, t);
    let powers = facet_powers(&facets, &alphas);
    let ncols = alphas.len() + 1;
    let mut a = Vec::with_capacity(monomials.len());
    let mut b = Vec::with_capacity(monomials.len());
    for m in &monomials {
        let mut row: Vec<Q> = powers.iter().map(|g| g.coeff(m)).collect();
        let constant = m.iter().all(|&e| e == 0);
        let fm = f.coeff(m);
        match mode {
            Shift::Free | Shift::MinShift => {
                row.push(if constant { -Q::one() } else { Q::zero() });
                b.push(fm);
            }
            Shift::Bound => {
                row.push(if constant { -Q::one() } else { Q::zero() });
                b.push(-fm);
            }
            Shift::Fixed => {
                row.push(Q::zero());
                b.push(if constant { fm + fixed } else { fm });
            }
        }
        a.push(row);
    }
    let mut c = vec![Q::zero(); ncols];
    match mode {
        Shift::Free => c.iter_mut().for_each(|x| *x = Q::one()),
        Shift::MinShift | Shift::Bound => c[ncols - 1] = Q::one(),
        Shift::Fixed => {}
    }
    let mut free = vec![false; ncols];
    free[ncols - 1] = !matches!(mode, Shift::Fixed);
    Ok(HandelmanLp { lp: ExactLp::new(a, b, c, free), alphas, monomials, facets })
}

/// The LP `min s + Σ c_α` subject to `Σ c_α [x^m] g^α - [m = 0] s = [x^m] f` for every
/// monomial of degree at most `t`, with `c ≥ 0` (the `α = 0` column included) and `s` free.
pub fn build_lp(f: &SparsePolynomial<Q>, p: &Polytope, t: u32) -> Result<HandelmanLp> {
    build(f, p, t, Shift::Free, &Q::zero())
}

fn decomposition_from(h: &HandelmanLp, t: u32, x: &[Q], shift: Q) -> HandelmanDecomposition {
    let terms = h
        .alphas
        .iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| (a.clone(), c.clone()))
        .collect();
    HandelmanDecomposition { degree: t, facets: h.facets.clone(), terms, shift }
}

/// A degree-`t` decomposition of `f + s` minimizing `s + Σ c_α`.
pub fn handelman_decompose(f: &SparsePolynomial<Q>, p: &Polytope, t: u32) -> Result<HandelmanDecomposition> {
    let h = build_lp(f, p, t)?;
    match solve_lp_exact(&h.lp) {
        LpOutcome::Optimal { x, .. } => {
            let s = x[h.alphas.len()].clone();
            Ok(decomposition_from(&h, t, &x, s))
        }
        LpOutcome::Infeasible => Err(Error::infeasible("handelman", format!("no degree-{t} decomposition"))),
        LpOutcome::Unbounded => Err(Error::domain("handelman", "LP unbounded; is the polytope bounded?")),
    }
}

/// Tries degrees `t0, t0 + 1, ..., cap` and returns the first decomposition found.
pub fn handelman_decompose_escalating(
    f: &SparsePolynomial<Q>,
    p: &Polytope,
    t0: u32,
    cap: u32,
) -> Result<HandelmanDecomposition> {
    let mut last = None;
    for t in t0.max(f.degree())..=cap {
        match handelman_decompose(f, p, t) {
            Ok(d) => return Ok(d),
            Err(e @ Error::Infeasible { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::infeasible("handelman", format!("no decomposition up to degree {cap}"))))
}

/// A degree-`t` decomposition of `f + shift` for a fixed shift, if one exists.
pub fn handelman_decompose_fixed(
    f: &SparsePolynomial<Q>,
    p: &Polytope,
    t: u32,
    shift: &Q,
) -> Result<Option<HandelmanDecomposition>> {
    let h = build(f, p, t, Shift::Fixed, shift)?;
    Ok(match solve_lp_exact(&h.lp) {
        LpOutcome::Optimal { x, .. } => Some(decomposition_from(&h, t, &x, shift.clone())),
        _ => None,
    })
}

/// The smallest shift `s` for which `f + s` has a degree-`t` decomposition.
pub fn handelman_min_shift(f: &SparsePolynomial<Q>, p: &Polytope, t: u32) -> Result<Option<Q>> {
    let h = build(f, p, t, Shift::MinShift, &Q::zero())?;
    Ok(match solve_lp_exact(&h.lp) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    })
}

/// Smallest `ε` in `[lo, hi]` (to within `tol`) such that `f + ε` has a degree-`t`
/// decomposition, found by bisection on feasibility. Returns `None` when `hi` itself
/// is infeasible.
pub fn handelman_frontier_bisect(
    f: &SparsePolynomial<Q>,
    p: &Polytope,
    t: u32,
    lo: Q,
    hi: Q,
    tol: &Q,
) -> Result<Option<Q>> {
    if handelman_decompose_fixed(f, p, t, &hi)?.is_none() {
        return Ok(None);
    }
    let (mut lo, mut hi) = (lo, hi);
    let two = Q::from_integer(2.into());
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if handelman_decompose_fixed(f, p, t, &mid)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// The order-`t` Handelman bound `min{λ : λ - f ∈ H_t}`; `None` stands for `+∞`.
pub fn handelman_bound(f: &SparsePolynomial<Q>, p: &Polytope, t: u32) -> Result<Option<Q>> {
    let h = build(f, p, t, Shift::Bound, &Q::zero())?;
    Ok(match solve_lp_exact(&h.lp) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    })
}

/// Result of integrating `(f + s)^k` through a Handelman decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct HandelmanIntegral {
    pub shift: Q,
    pub value: Q,
    pub decomposition: HandelmanDecomposition,
}

/// `∫_P (f + s)^k dx` where `s` comes from a Handelman decomposition of degree
/// `deg f` (escalated if needed). Every term of `(Σ c_α g^α)^k` is a product of powers
/// of the same affine functions, so one affine-products table serves them all.
pub fn integrate_via_handelman(f: &SparsePolynomial<Q>, p: &Polytope, k: u32) -> Result<HandelmanIntegral> {
    let deg = f.degree().max(1);
    let dec = handelman_decompose_escalating(f, p, deg, deg + DEFAULT_ESCALATION)?;
    let value = integrate_decomposition_power(&dec, p, k)?;
    Ok(HandelmanIntegral { shift: dec.shift.clone(), value, decomposition: dec })
}

/// `∫_P (Σ c_α g^α)^k dx` for a given decomposition.
pub fn integrate_decomposition_power(dec: &HandelmanDecomposition, p: &Polytope, k: u32) -> Result<Q> {
    let h = dec.coefficient_polynomial().pow_expand(k);
    let factors: Vec<(Vec<Q>, Q)> =
        p.a().iter().zip(p.b()).map(|(row, bi)| (row.iter().map(|x| -x).collect(), bi.clone())).collect();
    let top = h.degree();
    let table = affine_table(p, &factors, top)?;
    let mut total = Q::zero();
    for (beta, c) in h.terms() {
        let weight = beta.iter().fold(Q::one(), |acc, &b| acc * Q::from(factorial(b)));
        total += c * weight * table.get(&beta);
    }
    Ok(total)
}

fn affine_table(p: &Polytope, factors: &[(Vec<Q>, Q)], m: u32) -> Result<AffineProductTable> {
    let mut table: Option<AffineProductTable> = None;
    for s in p.triangulate()? {
        let t = integrate_affine_products_simplex(&s, factors, m)?;
        table = Some(match table {
            None => t,
            Some(mut acc) => {
                for (key, v) in t.values {
                    let e = acc.values.entry(key).or_insert_with(Q::zero);
                    *e += v;
                }
                acc
            }
        });
    }
    table.ok_or_else(|| Error::domain("handelman", "empty triangulation"))
}

/// True when every coefficient is nonnegative (a sanity check on LP output).
pub fn is_valid(dec: &HandelmanDecomposition, f: &SparsePolynomial<Q>) -> bool {
    let target = f.add(&SparsePolynomial::constant(f.dim(), dec.shift.clone()));
    dec.terms.values().all(|c| !c.is_negative()) && dec.expand() == target
}
