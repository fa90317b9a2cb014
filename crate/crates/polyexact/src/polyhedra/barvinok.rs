use num_traits::{One, Signed, Zero};

use super::cone::make_primitive;
use super::lattice::{lll_reduce, LatticeBasis};
use super::{SimplicialCone, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, mat_vec};
use crate::scalar::{primitive_integer, to_rationals};

/// Counters collected while decomposing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BarvinokStats {
    /// Largest index met at any node of the recursion.
    pub max_index: Z,
    /// Number of recursion nodes visited.
    pub nodes: usize,
    /// Depth of the recursion tree (0 for unimodular input).
    pub depth: usize,
    /// Number of unimodular cones returned.
    pub leaves: usize,
}

/// Signed decomposition of a simplicial cone into cones that are unimodular with
/// respect to `lattice`, performed on the dual cone and dualized back, dropping
/// lower-dimensional pieces. The signed sum of indicator functions agrees with the
/// input modulo indicators of lower-dimensional cones. Returned rays are primitive
/// generators of the lattice.
pub fn barvinok_decompose(cone: &SimplicialCone, lattice: &LatticeBasis) -> Result<Vec<SimplicialCone>> {
    barvinok_decompose_with_stats(cone, lattice).map(|(c, _)| c)
}

pub fn barvinok_decompose_with_stats(
    cone: &SimplicialCone,
    lattice: &LatticeBasis,
) -> Result<(Vec<SimplicialCone>, BarvinokStats)> {
    let d = cone.dim();
    if lattice.dim() != d {
        return Err(Error::InvalidInput("lattice and cone dimensions differ".into()));
    }
    let b: Vec<Vec<Q>> = lattice.matrix.iter().map(|r| to_rationals(r)).collect();
    let binv = inverse(&b).ok_or_else(|| Error::domain("polyhedra", "singular lattice basis"))?;
    // Rays in lattice coordinates, as primitive integer vectors.
    let w: Vec<Vec<Z>> = cone.rays.iter().map(|u| primitive_integer(&mat_vec(&binv, &to_rationals(u)))).collect();
    let dual = dual_generators(&w);
    let mut stats = BarvinokStats::default();
    let mut leaves = Vec::new();
    decompose(dual, cone.sign, 0, &mut leaves, &mut stats)?;
    let mut out = Vec::with_capacity(leaves.len());
    for (v, sign) in leaves {
        let primal = dual_generators(&v);
        let rays: Vec<Vec<Z>> = primal
            .iter()
            .map(|g| {
                let r = mat_vec(&b, &to_rationals(g));
                r.iter().map(|x| x.to_integer()).collect()
            })
            .collect();
        out.push(SimplicialCone::with_generators(cone.apex.clone(), rays, sign)?);
    }
    stats.leaves = out.len();
    Ok((out, stats))
}

// Generators of the dual cone {y : ⟨y, g⟩ ≥ 0} of cone(gens): the rows of the inverse
// of the matrix whose columns are the generators, made primitive.
fn dual_generators(gens: &[Vec<Z>]) -> Vec<Vec<Z>> {
    let d = gens.len();
    let m: Vec<Vec<Q>> = (0..d).map(|i| gens.iter().map(|g| Q::from(g[i].clone())).collect()).collect();
    let inv = inverse(&m).expect("simplicial cone generators are independent");
    inv.iter().map(|row| primitive_integer(row)).collect()
}

fn index_of(v: &[Vec<Z>]) -> Z {
    let d = v.len();
    let m: Vec<Vec<Q>> = (0..d).map(|i| v.iter().map(|g| Q::from(g[i].clone())).collect()).collect();
    determinant(&m).abs().to_integer()
}

fn decompose(
    v: Vec<Vec<Z>>,
    sign: i32,
    depth: usize,
    out: &mut Vec<(Vec<Vec<Z>>, i32)>,
    stats: &mut BarvinokStats,
) -> Result<()> {
    stats.nodes += 1;
    stats.depth = stats.depth.max(depth);
    let idx = index_of(&v);
    if idx > stats.max_index {
        stats.max_index = idx.clone();
    }
    if idx.is_one() {
        out.push((v, sign));
        return Ok(());
    }
    let (mut alpha, mut z) = short_combination(&v, &idx)?;
    if alpha.iter().all(|a| !a.is_positive()) {
        alpha.iter_mut().for_each(|a| *a = -a.clone());
        z.iter_mut().for_each(|x| *x = -x.clone());
    }
    let z = make_primitive(&z);
    for (i, a) in alpha.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mut vi = v.clone();
        vi[i] = z.clone();
        let s = if a.is_positive() { sign } else { -sign };
        decompose(vi, s, depth + 1, out, stats)?;
    }
    Ok(())
}

// Finds a nonzero integer vector z = Σ α_i v_i with every |α_i| < 1, preferring the
// candidate of smallest max |α_i|. The α lattice is generated by the columns of V^{-1};
// it is scaled by the index so that LLL runs on integer vectors.
fn short_combination(v: &[Vec<Z>], idx: &Z) -> Result<(Vec<Q>, Vec<Z>)> {
    let d = v.len();
    let m: Vec<Vec<Q>> = (0..d).map(|i| v.iter().map(|g| Q::from(g[i].clone())).collect()).collect();
    let inv = inverse(&m).expect("independent generators");
    let scale = Q::from(idx.clone());
    let cols: Vec<Vec<Z>> = (0..d).map(|j| (0..d).map(|i| (&inv[i][j] * &scale).to_integer()).collect()).collect();
    let reduced = lll_reduce(&cols)?;
    let norm = |a: &[Z]| a.iter().map(|x| x.abs()).max().unwrap_or_default();
    let consider = |best: &mut Option<Vec<Z>>, cand: Vec<Z>| {
        if cand.iter().all(|x| x.is_zero()) || norm(&cand) >= *idx {
            return;
        }
        if best.as_ref().map_or(true, |b| norm(&cand) < norm(b)) {
            *best = Some(cand);
        }
    };
    let mut best: Option<Vec<Z>> = None;
    for r in &reduced {
        consider(&mut best, r.clone());
    }
    let mut radius = 1i64;
    while best.is_none() {
        if radius > 3 {
            return Err(Error::resource("polyhedra", "no short vector found for Barvinok step"));
        }
        let width = (2 * radius + 1) as usize;
        let total = width.pow(d as u32);
        for code in 0..total {
            let mut c = code;
            let mut cand = vec![Z::zero(); d];
            for r in &reduced {
                let coef = (c % width) as i64 - radius;
                c /= width;
                for (x, y) in cand.iter_mut().zip(r) {
                    *x += y * Z::from(coef);
                }
            }
            consider(&mut best, cand);
        }
        radius += 1;
    }
    let a_scaled = best.expect("found");
    let alpha: Vec<Q> = a_scaled.iter().map(|x| Q::new(x.clone(), idx.clone())).collect();
    let z: Vec<Z> = (0..d)
        .map(|i| {
            let s: Q = v.iter().zip(&alpha).map(|(g, a)| Q::from(g[i].clone()) * a).sum();
            debug_assert!(s.is_integer());
            s.to_integer()
        })
        .collect();
    Ok((alpha, z))
}
