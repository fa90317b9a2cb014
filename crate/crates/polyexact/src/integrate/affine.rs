use std::collections::BTreeMap;

use num_traits::Zero;

use super::polytope::{Decomposition, Method};
use crate::error::{Error, Result};
use crate::exact_arith::{exp_series, linear_series, TruncatedSeries};
use crate::linalg::determinant;
use crate::polyhedra::{Polytope, Q};
use crate::scalar::{dot, factorial, to_rationals};

/// Values `∫ Π_i (⟨ℓ_i, x⟩ + r_i)^{p_i} / p_i! dx` for every exponent vector `p`
/// with `|p| ≤ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineProductTable {
    pub factors: usize,
    pub max_degree: u32,
    pub values: BTreeMap<Vec<u32>, Q>,
}

impl AffineProductTable {
    fn from_series(s: &TruncatedSeries<Q>, n: usize, m: u32) -> Self {
        let mut values = BTreeMap::new();
        for (e, c) in s.terms() {
            values.insert(e[..n].iter().map(|&x| x as u32).collect(), c.clone());
        }
        AffineProductTable { factors: n, max_degree: m, values }
    }

    /// Entry for `p`, zero when absent.
    pub fn get(&self, p: &[u32]) -> Q {
        self.values.get(p).cloned().unwrap_or_else(Q::zero)
    }

    /// `∫ Π (⟨ℓ_i, x⟩ + r_i)^{p_i} dx` (the entry multiplied back by `Π p_i!`).
    pub fn integral(&self, p: &[u32]) -> Q {
        p.iter().fold(self.get(p), |acc, &k| acc * Q::from(factorial(k)))
    }

    fn add(&mut self, other: &Self) {
        for (k, v) in &other.values {
            let e = self.values.entry(k.clone()).or_insert_with(Q::zero);
            *e += v;
        }
        self.values.retain(|_, v| !v.is_zero());
    }
}

fn check_factors(factors: &[(Vec<Q>, Q)], d: usize) -> Result<()> {
    if factors.is_empty() || factors.iter().any(|(l, _)| l.len() != d) {
        return Err(Error::InvalidInput(format!("need at least one factor with a length-{d} linear part")));
    }
    Ok(())
}

// e^{⟨r, t⟩}
fn shift_series(factors: &[(Vec<Q>, Q)], m: u32) -> TruncatedSeries<Q> {
    let r: Vec<Q> = factors.iter().map(|(_, ri)| ri.clone()).collect();
    exp_series(&r, m)
}

// Coefficients of t in ⟨L(t), x⟩ = Σ_i t_i ⟨ℓ_i, x⟩.
fn form_at(factors: &[(Vec<Q>, Q)], x: &[Q]) -> Vec<Q> {
    factors.iter().map(|(l, _)| dot(l, x)).collect()
}

/// Table of integrals of products of affine functions over a simplex, from
/// `∫_Δ e^{⟨c,x⟩} = d! vol(Δ) Σ_K h_K(⟨c,s_0⟩, ..., ⟨c,s_d⟩) / (K+d)!` with `h_K` the
/// complete homogeneous symmetric polynomials, multiplied by `e^{⟨r,t⟩}`.
pub fn integrate_affine_products_simplex(verts: &[Vec<Q>], factors: &[(Vec<Q>, Q)], m: u32) -> Result<AffineProductTable> {
    let d = verts.len().saturating_sub(1);
    if d == 0 || verts.iter().any(|v| v.len() != d) {
        return Err(Error::InvalidInput("a d-simplex needs d+1 vertices in R^d".into()));
    }
    check_factors(factors, d)?;
    let n = factors.len();
    let rows: Vec<Vec<Q>> = verts[1..].iter().map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect()).collect();
    let det = num_traits::Signed::abs(&determinant(&rows));
    if det.is_zero() {
        return Err(Error::domain("integrate", "degenerate simplex"));
    }
    // Σ_K h_K = Π_j 1 / (1 - z_j), truncated at degree M.
    let ones = vec![Q::from_integer(1.into()); m as usize + 1];
    let mut h = TruncatedSeries::with_vars(n, false, m).one_like();
    for v in verts {
        let z = linear_series(&form_at(factors, v), m);
        let geom = if z.is_empty() { z.one_like() } else { TruncatedSeries::compose(&ones, &z)? };
        h = h.mul(&geom)?;
    }
    let mut weighted = h.zero_like();
    for (e, c) in h.terms() {
        let k: i32 = e.iter().sum();
        weighted.add_term(e.clone(), c / Q::from(factorial(k as u32 + d as u32)));
    }
    let s = weighted.mul(&shift_series(factors, m))?.scale(&det);
    Ok(AffineProductTable::from_series(&s, n, m))
}

/// The same table over a full polytope through its vertex cone decomposition. An
/// auxiliary form `ℓ_{n+1}` regular on every ray turns each cone's rational function
/// into a Laurent series in `t_{n+1}` whose constant terms sum to the answer.
pub fn integrate_affine_products_cone(p: &Polytope, factors: &[(Vec<Q>, Q)], m: u32) -> Result<AffineProductTable> {
    let d = p.dim();
    check_factors(factors, d)?;
    let n = factors.len();
    let Decomposition::Cones { cones, regular } = Decomposition::new(p, Method::ConeDecomposition)? else {
        unreachable!()
    };
    let proto = TruncatedSeries::<Q>::with_vars(n, true, m);
    let shift = lift(&shift_series(factors, m), &proto);
    let mut table = AffineProductTable { factors: n, max_degree: m, values: BTreeMap::new() };
    for (v, rays) in &cones {
        let u: Vec<Vec<Q>> = rays.iter().map(|r| to_rationals(r)).collect();
        let det = num_traits::Signed::abs(&determinant(&u));
        // Π_j 1/(-⟨c,u_j⟩) with ⟨c,u_j⟩ = b_j(t) + β_j t_{n+1}.
        let mut acc = proto.one_like();
        for uj in &u {
            let beta = dot(&regular, uj);
            let b = lift(&linear_series(&form_at(factors, uj), m), &proto);
            let mut series = proto.zero_like();
            let mut bk = proto.one_like();
            let mut beta_pow = beta.clone();
            for k in 0..=m as i32 {
                let sign = if k % 2 == 0 { -1 } else { 1 };
                let coef = Q::from_integer(sign.into()) / &beta_pow;
                series = series.add(&bk.scale(&coef).shift_laurent(-1 - k))?;
                bk = bk.mul(&b)?;
                beta_pow *= &beta;
            }
            acc = acc.mul(&series)?;
        }
        // e^{⟨L(t), v⟩} e^{⟨ℓ_{n+1}, v⟩ t_{n+1}}; only t_{n+1} powers up to d + M matter.
        let ev = lift(&exp_series(&form_at(factors, v), m), &proto);
        let gamma = dot(&regular, v);
        let mut tail = proto.zero_like();
        let mut g = Q::from_integer(1.into());
        for j in 0..=(d as u32 + m) {
            let mut e = vec![0; n + 1];
            e[n] = j as i32;
            tail.add_term(e, &g / Q::from(factorial(j)));
            g *= &gamma;
        }
        let total = acc.with_laurent_cap(0).mul(&ev)?.mul(&shift)?.mul(&tail)?.scale(&det);
        let constant = total.residue_coeff(0);
        table.add(&AffineProductTable::from_series(&constant, n, m));
    }
    Ok(table)
}

// Embeds a series without Laurent variable into the shape of `proto`.
fn lift(s: &TruncatedSeries<Q>, proto: &TruncatedSeries<Q>) -> TruncatedSeries<Q> {
    let mut out = proto.zero_like();
    for (e, c) in s.terms() {
        let mut e2 = e.clone();
        e2.push(0);
        out.add_term(e2, c.clone());
    }
    out
}
