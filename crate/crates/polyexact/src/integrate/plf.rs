use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::polyhedra::{Q, Z};
use crate::scalar::{binomial, dot, factorial, pow, to_rationals};

// Univariate series helpers in ε, truncated at degree `n` (coefficients 0..=n).

// (c + e ε)^p
fn binomial_series(c: &Q, e: &Q, p: u32, n: usize) -> Vec<Q> {
    (0..=n)
        .map(|j| {
            if j as u32 > p {
                Q::zero()
            } else {
                Q::from(binomial(p, j as u32)) * pow(c, p - j as u32) * pow(e, j as u32)
            }
        })
        .collect()
}

// (c + e ε)^{-m} for c ≠ 0
fn inverse_power_series(c: &Q, e: &Q, m: u32, n: usize) -> Vec<Q> {
    let ratio = e / c;
    let base = Q::one() / pow(c, m);
    (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
            sign * Q::from(binomial(m + j as u32 - 1, j as u32)) * pow(&ratio, j as u32) * &base
        })
        .collect()
}

fn mul_series(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn simplex_scale(verts: &[Vec<Q>], m: u32) -> Result<Q> {
    let d = verts.len().saturating_sub(1);
    if d == 0 || verts.iter().any(|v| v.len() != d) {
        return Err(Error::InvalidInput("a d-simplex needs d+1 vertices in R^d".into()));
    }
    let rows: Vec<Vec<Q>> = verts[1..].iter().map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect()).collect();
    let det = determinant(&rows);
    if det.is_zero() {
        return Err(Error::domain("integrate", "degenerate simplex"));
    }
    let ratio = Q::new(factorial(m), factorial(m + d as u32));
    Ok(num_traits::Signed::abs(&det) * ratio)
}

/// Residue terms of the simplex formula, one per distinct value `⟨ℓ, s_i⟩` in order of
/// first occurrence: the coefficient of `ε^{m_k - 1}` in
/// `(ε + v_k)^{M+d} / Π_{j≠k} (ε + v_k - v_j)^{m_j}`. Pairs are `(v_k, term)`.
pub fn simplex_pole_terms(verts: &[Vec<Q>], l: &[Q], m: u32) -> Vec<(Q, Q)> {
    let d = verts.len() - 1;
    let mut groups: Vec<(Q, u32)> = Vec::new();
    for v in verts {
        let val = dot(l, v);
        match groups.iter_mut().find(|(g, _)| *g == val) {
            Some(g) => g.1 += 1,
            None => groups.push((val, 1)),
        }
    }
    let top = m + d as u32;
    groups
        .iter()
        .map(|(vk, mk)| {
            let n = (*mk - 1) as usize;
            let mut s = binomial_series(vk, &Q::one(), top, n);
            for (vj, mj) in &groups {
                if vj != vk {
                    s = mul_series(&s, &inverse_power_series(&(vk - vj), &Q::one(), *mj, n), n);
                }
            }
            (vk.clone(), s[n].clone())
        })
        .collect()
}

/// `∫_Δ ⟨ℓ, x⟩^M dx` over the simplex with the given `d + 1` vertices, using the
/// closed form when the values `⟨ℓ, s_i⟩` are distinct and residues otherwise.
pub fn integrate_plf_simplex(verts: &[Vec<Q>], l: &[Q], m: u32) -> Result<Q> {
    let scale = simplex_scale(verts, m)?;
    let sum: Q = simplex_pole_terms(verts, l, m).into_iter().map(|(_, t)| t).sum();
    Ok(scale * sum)
}

/// Contribution of the simplicial cone `s + cone(rays)` to `∫ ⟨ℓ, x⟩^M` under the
/// cone decomposition: `M!/(M+d)! |det U| ⟨ℓ,s⟩^{M+d} / Π ⟨-ℓ, u_i⟩` when no ray is
/// orthogonal to `ℓ`, otherwise the constant term in ε after replacing `ℓ` by `ℓ + εa`.
/// `a` must satisfy `⟨a, u_i⟩ ≠ 0` for every ray.
pub fn integrate_plf_cone(apex: &[Q], rays: &[Vec<Z>], l: &[Q], m: u32, a: &[Q]) -> Q {
    let d = apex.len();
    let u: Vec<Vec<Q>> = rays.iter().map(|r| to_rationals(r)).collect();
    let det = num_traits::Signed::abs(&determinant(&u));
    let prefactor = Q::new(factorial(m), factorial(m + d as u32)) * det;
    let top = m + d as u32;
    let ls = dot(l, apex);
    let (zero_rays, other): (Vec<&Vec<Q>>, Vec<&Vec<Q>>) = u.iter().partition(|r| dot(l, r).is_zero());
    if zero_rays.is_empty() {
        let den: Q = other.iter().map(|r| -dot(l, r)).product();
        return prefactor * pow(&ls, top) / den;
    }
    let n = zero_rays.len();
    let mut coef = prefactor;
    for r in &zero_rays {
        let ar = dot(a, r);
        assert!(!ar.is_zero(), "perturbation vector is not regular for the cone");
        coef /= -ar;
    }
    let mut s = binomial_series(&ls, &dot(a, apex), top, n);
    for r in &other {
        s = mul_series(&s, &inverse_power_series(&-dot(l, r), &-dot(a, r), 1, n), n);
    }
    coef * &s[n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }
    fn zv(v: &[i64]) -> Vec<Z> {
        v.iter().map(|&x| Z::from(x)).collect()
    }

    #[test]
    fn triangle_with_residues() {
        let tri = [qv(&[1, 1]), qv(&[0, 1]), qv(&[1, 0])];
        let l = qv(&[1, 1]);
        assert_eq!(simplex_pole_terms(&tri, &l, 1), vec![(int(2), int(8)), (int(1), int(-4))]);
        assert_eq!(integrate_plf_simplex(&tri, &l, 1).unwrap(), rat(2, 3));
    }

    #[test]
    fn pole_order_does_not_matter() {
        let tri = [qv(&[0, 1]), qv(&[1, 0]), qv(&[1, 1])];
        assert_eq!(integrate_plf_simplex(&tri, &qv(&[1, 1]), 1).unwrap(), rat(2, 3));
        let tri = [qv(&[1, 0]), qv(&[1, 1]), qv(&[0, 1])];
        assert_eq!(integrate_plf_simplex(&tri, &qv(&[1, 1]), 1).unwrap(), rat(2, 3));
    }

    #[test]
    fn zero_form_gives_volume() {
        let tri = [qv(&[0, 0]), qv(&[2, 0]), qv(&[0, 3])];
        assert_eq!(integrate_plf_simplex(&tri, &qv(&[0, 0]), 0).unwrap(), int(3));
        assert_eq!(integrate_plf_simplex(&tri, &qv(&[0, 0]), 2).unwrap(), int(0));
        let flat = [qv(&[0, 0]), qv(&[1, 1]), qv(&[2, 2])];
        assert!(integrate_plf_simplex(&flat, &qv(&[1, 0]), 1).is_err());
    }

    #[test]
    fn unit_interval_powers() {
        for m in 0..6u32 {
            let v = integrate_plf_simplex(&[qv(&[0]), qv(&[1])], &qv(&[1]), m).unwrap();
            assert_eq!(v, rat(1, m as i64 + 1));
        }
    }

    #[test]
    fn square_vertex_cones() {
        let l = qv(&[1, 0]);
        let a = qv(&[1, 1]);
        let t10 = integrate_plf_cone(&qv(&[1, 0]), &[zv(&[0, 1]), zv(&[-1, 0])], &l, 1, &a);
        let t11 = integrate_plf_cone(&qv(&[1, 1]), &[zv(&[-1, 0]), zv(&[0, -1])], &l, 1, &a);
        let t00 = integrate_plf_cone(&qv(&[0, 0]), &[zv(&[1, 0]), zv(&[0, 1])], &l, 1, &a);
        let t01 = integrate_plf_cone(&qv(&[0, 1]), &[zv(&[1, 0]), zv(&[0, -1])], &l, 1, &a);
        assert_eq!(t10, rat(-2, 6));
        assert_eq!(t11, rat(5, 6));
        assert_eq!(t00, int(0));
        assert_eq!(t01, int(0));
        assert_eq!(t00 + t01 + t10 + t11, rat(1, 2));
    }
}
