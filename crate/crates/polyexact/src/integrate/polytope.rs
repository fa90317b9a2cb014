use std::str::FromStr;

use num_traits::Zero;

use super::plf::{integrate_plf_cone, integrate_plf_simplex};
use crate::error::{Error, Result};
use crate::polyhedra::{find_regular_vector, triangulate_cone, Polytope, Q, Z};
use crate::polynomial::{LinearForm, SparsePolynomial};
use crate::scalar::{pow, to_rationals};

/// Domain decomposition used to integrate over a polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Triangulation,
    ConeDecomposition,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangulate" | "triangulation" => Ok(Method::Triangulation),
            "cone" | "cones" | "cone-decomposition" => Ok(Method::ConeDecomposition),
            _ => Err(Error::Parse(format!("unknown integration method '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationResult {
    pub value: Q,
    pub method: Method,
    /// Number of simplex or cone terms evaluated.
    pub term_count: usize,
}

/// A polytope split into simplices, or into simplicial cones at its vertices together
/// with a perturbation vector regular for every cone ray.
#[derive(Debug, Clone, PartialEq)]
pub enum Decomposition {
    Simplices(Vec<Vec<Vec<Q>>>),
    Cones { cones: Vec<(Vec<Q>, Vec<Vec<Z>>)>, regular: Vec<Q> },
}

impl Decomposition {
    pub fn new(p: &Polytope, method: Method) -> Result<Self> {
        match method {
            Method::Triangulation => Ok(Decomposition::Simplices(p.triangulate()?)),
            Method::ConeDecomposition => {
                if !p.is_full_dimensional()? {
                    return Err(Error::domain("integrate", "polytope is not full dimensional"));
                }
                let mut cones = Vec::new();
                for v in p.vertices()? {
                    let rays = p.tangent_cone(&v)?;
                    let qrays: Vec<Vec<Q>> = rays.iter().map(|r| to_rationals(r)).collect();
                    for ids in triangulate_cone(&qrays)? {
                        cones.push((v.clone(), ids.iter().map(|&i| rays[i].clone()).collect::<Vec<Vec<Z>>>()));
                    }
                }
                let all: Vec<Vec<Vec<Z>>> = cones.iter().map(|(_, r)| r.clone()).collect();
                let regular = find_regular_vector(&all, &[], p.dim());
                Ok(Decomposition::Cones { cones, regular })
            }
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Decomposition::Simplices(_) => Method::Triangulation,
            Decomposition::Cones { .. } => Method::ConeDecomposition,
        }
    }

    pub fn pieces(&self) -> usize {
        match self {
            Decomposition::Simplices(s) => s.len(),
            Decomposition::Cones { cones, .. } => cones.len(),
        }
    }

    /// `∫_P ⟨ℓ, x⟩^M dx`.
    pub fn integrate_plf(&self, l: &[Q], m: u32) -> Result<Q> {
        match self {
            Decomposition::Simplices(s) => {
                let mut acc = Q::zero();
                for simplex in s {
                    acc += integrate_plf_simplex(simplex, l, m)?;
                }
                Ok(acc)
            }
            Decomposition::Cones { cones, regular } => {
                Ok(cones.iter().map(|(v, rays)| integrate_plf_cone(v, rays, l, m, regular)).sum())
            }
        }
    }

    fn integrate_forms(&self, forms: &[LinearForm<Q>]) -> Result<Q> {
        let mut acc = Q::zero();
        for f in forms {
            acc += &f.coef * self.integrate_plf(&f.form, f.power)?;
        }
        Ok(acc)
    }
}

/// `∫_P ⟨ℓ, x⟩^M dx` by the chosen method.
pub fn integrate_plf_polytope(p: &Polytope, l: &[Q], m: u32, method: Method) -> Result<IntegrationResult> {
    let dec = Decomposition::new(p, method)?;
    Ok(IntegrationResult { value: dec.integrate_plf(l, m)?, method, term_count: dec.pieces() })
}

/// Per-vertex sums of the cone terms of `∫_P ⟨ℓ, x⟩^M`, in vertex order.
pub fn cone_vertex_terms(p: &Polytope, l: &[Q], m: u32) -> Result<Vec<(Vec<Q>, Q)>> {
    let Decomposition::Cones { cones, regular } = Decomposition::new(p, Method::ConeDecomposition)? else {
        unreachable!()
    };
    let mut out: Vec<(Vec<Q>, Q)> = Vec::new();
    for (v, rays) in &cones {
        let t = integrate_plf_cone(v, rays, l, m, &regular);
        match out.last_mut() {
            Some((w, acc)) if w == v => *acc += t,
            _ => out.push((v.clone(), t)),
        }
    }
    Ok(out)
}

/// `∫_P f dx` through the decomposition of `f` into powers of linear forms.
pub fn integrate_polynomial(p: &Polytope, f: &SparsePolynomial<Q>, method: Method) -> Result<IntegrationResult> {
    integrate_polynomial_jobs(p, f, method, 1)
}

/// As [`integrate_polynomial`], splitting the linear forms over `jobs` threads.
pub fn integrate_polynomial_jobs(
    p: &Polytope,
    f: &SparsePolynomial<Q>,
    method: Method,
    jobs: usize,
) -> Result<IntegrationResult> {
    if f.dim() != p.dim() {
        return Err(Error::InvalidInput(format!(
            "polynomial has {} variables but the polytope has dimension {}",
            f.dim(),
            p.dim()
        )));
    }
    let dec = Decomposition::new(p, method)?;
    let lf = f.to_linear_forms();
    let forms = lf.terms();
    let jobs = jobs.max(1).min(forms.len().max(1));
    let value = if jobs == 1 {
        dec.integrate_forms(forms)?
    } else {
        let chunk = forms.len().div_ceil(jobs);
        let parts: Vec<Result<Q>> = std::thread::scope(|s| {
            let handles: Vec<_> = forms.chunks(chunk).map(|c| s.spawn(|| dec.integrate_forms(c))).collect();
            handles.into_iter().map(|h| h.join().expect("integration worker panicked")).collect()
        });
        let mut acc = Q::zero();
        for part in parts {
            acc += part?;
        }
        acc
    };
    Ok(IntegrationResult { value, method, term_count: dec.pieces() * forms.len() })
}

/// `∫ f dx` over the box `Π [lo_i, hi_i]`, integrating each monomial separably.
pub fn integrate_polynomial_box(bounds: &[(Q, Q)], f: &SparsePolynomial<Q>) -> Result<Q> {
    if f.dim() != bounds.len() {
        return Err(Error::InvalidInput("polynomial and box dimensions differ".into()));
    }
    // Antiderivative differences per coordinate and exponent, cached.
    let mut cache: Vec<Vec<Q>> = vec![Vec::new(); bounds.len()];
    let mut total = Q::zero();
    for (mono, c) in f.terms() {
        let mut term = c;
        for (i, &e) in mono.iter().enumerate() {
            let row = &mut cache[i];
            while row.len() <= e as usize {
                let k = row.len() as u32 + 1;
                let (lo, hi) = &bounds[i];
                row.push((pow(hi, k) - pow(lo, k)) / Q::from(Z::from(k)));
            }
            term *= &row[e as usize];
        }
        total += term;
    }
    Ok(total)
}
