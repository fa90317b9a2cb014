use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{for_each_subset, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::{determinant, null_space, rank};
use crate::lp::{solve_lp_exact, ExactLp, LpOutcome};
use crate::scalar::{dot, primitive_integer, to_rationals};


/// A simplicial cone `apex + cone(rays)` with primitive integer rays and a sign used
/// by signed decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialCone {
    pub apex: Vec<Q>,
    pub rays: Vec<Vec<Z>>,
    pub sign: i32,
    pub det: Z,
}

impl SimplicialCone {
    /// Builds a cone, making each ray primitive. Rays must be linearly independent
    /// and there must be as many rays as coordinates.
    pub fn new(apex: Vec<Q>, rays: Vec<Vec<Z>>, sign: i32) -> Result<Self> {
        let d = apex.len();
        if rays.len() != d || rays.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput(format!(
                "simplicial cone in dimension {d} needs {d} rays of length {d}"
            )));
        }
        let rays: Vec<Vec<Z>> = rays.iter().map(|r| make_primitive(r)).collect();
        let det = determinant(&rays.iter().map(|r| to_rationals(r)).collect::<Vec<_>>());
        if det.is_zero() {
            return Err(Error::domain("polyhedra", "cone rays are linearly dependent"));
        }
        Ok(SimplicialCone { apex, rays, sign, det: det.to_integer().abs() })
    }

    /// Builds a cone from rays that must stay exactly as given (for example generators
    /// of a sublattice); only independence is checked.
    pub fn with_generators(apex: Vec<Q>, rays: Vec<Vec<Z>>, sign: i32) -> Result<Self> {
        let det = determinant(&rays.iter().map(|r| to_rationals(r)).collect::<Vec<_>>());
        if det.is_zero() {
            return Err(Error::domain("polyhedra", "cone rays are linearly dependent"));
        }
        Ok(SimplicialCone { apex, rays, sign, det: det.to_integer().abs() })
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.is_one()
    }

    /// Rays as rational vectors.
    pub fn rational_rays(&self) -> Vec<Vec<Q>> {
        self.rays.iter().map(|r| to_rationals(r)).collect()
    }

    /// Indicator of the closed cone at `x`.
    pub fn contains(&self, x: &[Q]) -> bool {
        match self.coordinates(x) {
            Some(l) => l.iter().all(|c| !c.is_negative()),
            None => false,
        }
    }

    /// Coordinates of `x - apex` in the ray basis.
    pub fn coordinates(&self, x: &[Q]) -> Option<Vec<Q>> {
        let cols = self.rational_rays();
        let m: Vec<Vec<Q>> = (0..self.dim()).map(|i| cols.iter().map(|r| r[i].clone()).collect()).collect();
        let rhs: Vec<Q> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        crate::linalg::solve(&m, &rhs)
    }
}

pub(crate) fn make_primitive(v: &[Z]) -> Vec<Z> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

/// Extreme rays of `{y : row·y ≤ 0 for every row}` as primitive integer vectors in
/// lexicographic order. The cone must be pointed (the rows have rank `d`).
pub fn cone_extreme_rays(rows: &[Vec<Q>], d: usize) -> Vec<Vec<Z>> {
    let mut out: Vec<Vec<Z>> = Vec::new();
    if d == 0 {
        return out;
    }
    let feasible = |y: &[Q]| rows.iter().all(|r| !dot(r, y).is_positive());
    for_each_subset(rows.len(), d - 1, |sub| {
        let m: Vec<Vec<Q>> = sub.iter().map(|&i| rows[i].clone()).collect();
        if rank(&m) != d - 1 {
            return;
        }
        let ns = null_space(&m, d);
        if ns.len() != 1 {
            return;
        }
        let y = &ns[0];
        let neg: Vec<Q> = y.iter().map(|c| -c).collect();
        for cand in [y.clone(), neg] {
            if feasible(&cand) {
                let p = primitive_integer(&cand);
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    });
    out.sort();
    out
}

/// Polar cone `{y : ⟨y, x⟩ ≤ 0 for all x in C}` of `C = cone(rays)`, given by
/// primitive generators in lexicographic order. When the polar contains lines both
/// directions of a basis of its lineality space are included. A cone spanning the
/// whole space yields the empty generator list (the polar is `{0}`).
pub fn polar(rays: &[Vec<Z>], d: usize) -> Vec<Vec<Z>> {
    let mut rows: Vec<Vec<Q>> = rays.iter().map(|r| to_rationals(r)).collect();
    let lines = null_space(&rows, d);
    let mut out: Vec<Vec<Z>> = Vec::new();
    for v in &lines {
        let p = primitive_integer(v);
        out.push(p.iter().map(|x| -x).collect());
        out.push(p);
        // Restrict the pointed part to the orthogonal complement of the lines.
        rows.push(v.clone());
        rows.push(v.iter().map(|c| -c).collect());
    }
    for r in cone_extreme_rays(&rows, d) {
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out.sort();
    out
}

/// True when some linear functional is strictly positive on every nonzero ray.
pub(crate) fn is_pointed(rays: &[Vec<Q>], d: usize) -> bool {
    if rays.is_empty() {
        return true;
    }
    // Find c with ⟨c, r⟩ ≥ 1 for every ray: ⟨c, r⟩ - s_r = 1, s ≥ 0, c free.
    let n = rays.len();
    let mut a = Vec::with_capacity(n);
    for (i, r) in rays.iter().enumerate() {
        let mut row = r.clone();
        row.extend((0..n).map(|j| if i == j { -Q::one() } else { Q::zero() }));
        a.push(row);
    }
    let mut free = vec![true; d];
    free.extend(vec![false; n]);
    let lp = ExactLp::new(a, vec![Q::one(); n], vec![Q::zero(); d + n], free);
    matches!(solve_lp_exact(&lp), LpOutcome::Optimal { .. })
}

/// Triangulates the pointed cone generated by `rays` into simplicial cones whose
/// rays are drawn from the input. Each simplicial cone is returned as a list of
/// indices into `rays`. The cone must be full dimensional.
pub fn triangulate_cone(rays: &[Vec<Q>]) -> Result<Vec<Vec<usize>>> {
    let d = match rays.first() {
        Some(r) => r.len(),
        None => return Err(Error::domain("polyhedra", "cannot triangulate a cone with no rays")),
    };
    if rays.iter().any(|r| r.iter().all(|c| c.is_zero())) {
        return Err(Error::domain("polyhedra", "zero ray"));
    }
    if rank(rays) != d {
        return Err(Error::domain("polyhedra", "cone is not full dimensional"));
    }
    if !is_pointed(rays, d) {
        return Err(Error::domain("polyhedra", "cone is not pointed"));
    }
    // Merge rays pointing in the same direction, keeping the first occurrence.
    let mut ids: Vec<usize> = Vec::new();
    let mut seen: Vec<Vec<Z>> = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        let p = primitive_integer(r);
        if !seen.contains(&p) {
            seen.push(p);
            ids.push(i);
        }
    }
    let mut out = pulling(rays, &ids, d);
    for s in &mut out {
        s.sort_unstable();
    }
    out.sort();
    Ok(out)
}

// Pulling triangulation of cone(rays[ids]) whose span has dimension k.
fn pulling(rays: &[Vec<Q>], ids: &[usize], k: usize) -> Vec<Vec<usize>> {
    if ids.len() == k {
        return vec![ids.to_vec()];
    }
    let pivot = *ids.iter().min_by(|&&a, &&b| rays[a].cmp(&rays[b])).expect("nonempty");
    let mut out = Vec::new();
    for facet in facets(rays, ids, k) {
        if facet.contains(&pivot) {
            continue;
        }
        for mut s in pulling(rays, &facet, k - 1) {
            s.push(pivot);
            out.push(s);
        }
    }
    out
}

// Facets of cone(rays[ids]) spanning a k-dimensional subspace, as ray-id subsets.
fn facets(rays: &[Vec<Q>], ids: &[usize], k: usize) -> Vec<Vec<usize>> {
    let pts: Vec<Vec<Q>> = ids.iter().map(|&i| rays[i].clone()).collect();
    let basis = span_basis(&pts);
    debug_assert_eq!(basis.len(), k);
    // Coordinates of each ray in the basis of its span.
    let coords: Vec<Vec<Q>> = pts.iter().map(|p| span_coordinates(&basis, p)).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for_each_subset(ids.len(), k - 1, |sub| {
        let m: Vec<Vec<Q>> = sub.iter().map(|&i| coords[i].clone()).collect();
        if rank(&m) != k - 1 {
            return;
        }
        let ns = null_space(&m, k);
        let c = &ns[0];
        let vals: Vec<Q> = coords.iter().map(|p| dot(c, p)).collect();
        let pos = vals.iter().any(|v| v.is_positive());
        let neg = vals.iter().any(|v| v.is_negative());
        if pos && neg {
            return;
        }
        let facet: Vec<usize> = (0..ids.len()).filter(|&i| vals[i].is_zero()).map(|i| ids[i]).collect();
        if !out.contains(&facet) {
            out.push(facet);
        }
    });
    out
}

fn span_basis(pts: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for p in pts {
        let mut trial = basis.clone();
        trial.push(p.clone());
        if rank(&trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

fn span_coordinates(basis: &[Vec<Q>], p: &[Q]) -> Vec<Q> {
    // Solve Σ λ_j basis_j = p via the normal equations of the full-column-rank system.
    let k = basis.len();
    let g: Vec<Vec<Q>> = (0..k).map(|i| (0..k).map(|j| dot(&basis[i], &basis[j])).collect()).collect();
    let rhs: Vec<Q> = (0..k).map(|i| dot(&basis[i], p)).collect();
    crate::linalg::solve(&g, &rhs).expect("basis vectors are independent")
}
