use num_traits::{One, Signed, Zero};

use super::cone::{cone_extreme_rays, triangulate_cone};
use super::{for_each_subset, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::{determinant, null_space, rank, solve};
use crate::lp::{solve_lp_exact, ExactLp, LpOutcome};
use crate::scalar::{dot, factorial, primitive_integer, to_rationals};

/// A rational polytope `{x : b - A x ≥ 0}`; the vertex list is computed on demand
/// unless the polytope was built from vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    a: Vec<Vec<Q>>,
    b: Vec<Q>,
    vertices: Option<Vec<Vec<Q>>>,
}

impl Polytope {
    /// Builds a polytope from its inequality description `b - A x ≥ 0`.
    pub fn from_hrep(a: Vec<Vec<Q>>, b: Vec<Q>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidInput("row count of A and b differ".into()));
        }
        let dim = a.first().map_or(0, |r| r.len());
        if dim == 0 || a.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("constraint rows must share a positive dimension".into()));
        }
        Ok(Polytope { dim, a, b, vertices: None })
    }

    /// Convex hull of a full-dimensional point set; facets are found by exhaustive
    /// search over affinely independent `d`-subsets.
    pub fn from_vertices(points: &[Vec<Q>]) -> Result<Self> {
        let d = points.first().map_or(0, |p| p.len());
        if d == 0 || points.iter().any(|p| p.len() != d) {
            return Err(Error::InvalidInput("points must share a positive dimension".into()));
        }
        let diffs: Vec<Vec<Q>> = points.iter().map(|p| sub(p, &points[0])).collect();
        if rank(&diffs) != d {
            return Err(Error::domain("polyhedra", "points do not span a full-dimensional polytope"));
        }
        let mut a: Vec<Vec<Q>> = Vec::new();
        let mut b: Vec<Q> = Vec::new();
        let mut seen: Vec<(Vec<Z>, Q)> = Vec::new();
        for_each_subset(points.len(), d, |sub_ids| {
            let base = &points[sub_ids[0]];
            let m: Vec<Vec<Q>> = sub_ids[1..].iter().map(|&i| sub(&points[i], base)).collect();
            if rank(&m) != d - 1 {
                return;
            }
            let ns = null_space(&m, d);
            let n = to_rationals(&primitive_integer(&ns[0]));
            let c = dot(&n, base);
            let vals: Vec<Q> = points.iter().map(|p| dot(&n, p) - &c).collect();
            let pos = vals.iter().any(|v| v.is_positive());
            let neg = vals.iter().any(|v| v.is_negative());
            if pos && neg {
                return;
            }
            let (n, c) = if pos { (n.iter().map(|x| -x).collect::<Vec<_>>(), -c) } else { (n, c) };
            let key = (primitive_integer(&n), c.clone());
            if seen.contains(&key) {
                return;
            }
            seen.push(key);
            a.push(n);
            b.push(c);
        });
        let mut p = Polytope { dim: d, a, b, vertices: None };
        let verts = p.compute_vertices()?;
        p.vertices = Some(verts);
        Ok(p)
    }

    /// The box `Π [lo_i, hi_i]`.
    pub fn cube(bounds: &[(Q, Q)]) -> Result<Self> {
        let d = bounds.len();
        if d == 0 || bounds.iter().any(|(l, h)| l > h) {
            return Err(Error::InvalidInput("box bounds must be nonempty with lo ≤ hi".into()));
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            let mut e = vec![Q::zero(); d];
            e[i] = Q::one();
            a.push(e.clone());
            b.push(hi.clone());
            e[i] = -Q::one();
            a.push(e);
            b.push(-lo.clone());
        }
        Polytope::from_hrep(a, b)
    }

    /// The standard simplex `{x ≥ 0, Σ x ≤ 1}`.
    pub fn standard_simplex(d: usize) -> Result<Self> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..d {
            let mut e = vec![Q::zero(); d];
            e[i] = -Q::one();
            a.push(e);
            b.push(Q::zero());
        }
        a.push(vec![Q::one(); d]);
        b.push(Q::one());
        Polytope::from_hrep(a, b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &[Vec<Q>] {
        &self.a
    }

    pub fn b(&self) -> &[Q] {
        &self.b
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.a.iter().zip(&self.b).all(|(r, bi)| dot(r, x) <= *bi)
    }

    /// Exact vertex set in lexicographic order.
    pub fn vertices(&self) -> Result<Vec<Vec<Q>>> {
        match &self.vertices {
            Some(v) => Ok(v.clone()),
            None => self.compute_vertices(),
        }
    }

    fn compute_vertices(&self) -> Result<Vec<Vec<Q>>> {
        self.check_bounded()?;
        let d = self.dim;
        let mut out: Vec<Vec<Q>> = Vec::new();
        for_each_subset(self.a.len(), d, |ids| {
            let m: Vec<Vec<Q>> = ids.iter().map(|&i| self.a[i].clone()).collect();
            let rhs: Vec<Q> = ids.iter().map(|&i| self.b[i].clone()).collect();
            if let Some(x) = solve(&m, &rhs) {
                if self.contains(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
        });
        out.sort();
        Ok(out)
    }

    // Minimizes and maximizes each coordinate; fails when empty or unbounded.
    fn check_bounded(&self) -> Result<()> {
        let d = self.dim;
        let m = self.a.len();
        let mut rows = Vec::with_capacity(m);
        for (i, r) in self.a.iter().enumerate() {
            let mut row = r.clone();
            row.extend((0..m).map(|j| if i == j { Q::one() } else { Q::zero() }));
            rows.push(row);
        }
        let mut free = vec![true; d];
        free.extend(vec![false; m]);
        for i in 0..d {
            for s in [1, -1] {
                let mut c = vec![Q::zero(); d + m];
                c[i] = Q::from(Z::from(s));
                let lp = ExactLp::new(rows.clone(), self.b.clone(), c, free.clone());
                match solve_lp_exact(&lp) {
                    LpOutcome::Optimal { .. } => {}
                    LpOutcome::Infeasible => return Err(Error::domain("polyhedra", "polytope is empty")),
                    LpOutcome::Unbounded => return Err(Error::domain("polyhedra", "polyhedron is unbounded")),
                }
            }
        }
        Ok(())
    }

    /// True when the polytope has nonempty interior.
    pub fn is_full_dimensional(&self) -> Result<bool> {
        let v = self.vertices()?;
        let diffs: Vec<Vec<Q>> = v.iter().map(|p| sub(p, &v[0])).collect();
        Ok(rank(&diffs) == self.dim)
    }

    /// Indices of the rows tight at `x`.
    pub fn tight_rows(&self, x: &[Q]) -> Vec<usize> {
        (0..self.a.len()).filter(|&i| dot(&self.a[i], x) == self.b[i]).collect()
    }

    /// Extreme rays of the tangent cone at the vertex `v` (the cone of feasible
    /// directions), as primitive integer vectors in lexicographic order.
    pub fn tangent_cone(&self, v: &[Q]) -> Result<Vec<Vec<Z>>> {
        if v.len() != self.dim || !self.contains(v) {
            return Err(Error::domain("polyhedra", "point is not a vertex of the polytope"));
        }
        let rows: Vec<Vec<Q>> = self.tight_rows(v).into_iter().map(|i| self.a[i].clone()).collect();
        if rank(&rows) != self.dim {
            return Err(Error::domain("polyhedra", "point is not a vertex of the polytope"));
        }
        Ok(cone_extreme_rays(&rows, self.dim))
    }

    /// A triangulation into full-dimensional simplices using only the vertices,
    /// obtained from a triangulation of the homogenized cone over the polytope.
    pub fn triangulate(&self) -> Result<Vec<Vec<Vec<Q>>>> {
        let verts = self.vertices()?;
        if !self.is_full_dimensional()? {
            return Err(Error::domain("polyhedra", "cannot triangulate a lower-dimensional polytope"));
        }
        let lifted: Vec<Vec<Q>> = verts
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.push(Q::one());
                w
            })
            .collect();
        let cones = triangulate_cone(&lifted)?;
        Ok(cones.into_iter().map(|ids| ids.into_iter().map(|i| verts[i].clone()).collect()).collect())
    }

    /// Volume from the triangulation.
    pub fn volume(&self) -> Result<Q> {
        Ok(self.triangulate()?.iter().map(|s| simplex_volume(s)).sum())
    }

    /// Lower and upper bounds per coordinate when every row is axis aligned and each
    /// coordinate is bounded on both sides.
    pub fn as_box(&self) -> Option<Vec<(Q, Q)>> {
        let d = self.dim;
        let mut lo: Vec<Option<Q>> = vec![None; d];
        let mut hi: Vec<Option<Q>> = vec![None; d];
        for (r, bi) in self.a.iter().zip(&self.b) {
            let nz: Vec<usize> = (0..d).filter(|&j| !r[j].is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            let j = nz[0];
            let bound = bi / &r[j];
            if r[j].is_positive() {
                if hi[j].as_ref().map_or(true, |h| bound < *h) {
                    hi[j] = Some(bound);
                }
            } else if lo[j].as_ref().map_or(true, |l| bound > *l) {
                lo[j] = Some(bound);
            }
        }
        let mut out = Vec::with_capacity(d);
        for (l, h) in lo.into_iter().zip(hi) {
            match (l, h) {
                (Some(l), Some(h)) if l <= h => out.push((l, h)),
                _ => return None,
            }
        }
        Some(out)
    }
}

/// Volume of the simplex with the given `d + 1` vertices.
pub fn simplex_volume(verts: &[Vec<Q>]) -> Q {
    let d = verts.len() - 1;
    let m: Vec<Vec<Q>> = verts[1..].iter().map(|v| sub(v, &verts[0])).collect();
    determinant(&m).abs() / Q::from(factorial(d as u32))
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
