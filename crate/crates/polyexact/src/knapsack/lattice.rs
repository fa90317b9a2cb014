use num_integer::Integer;
use num_traits::{One, Signed};

use super::Z;
use crate::error::{Error, Result};
use crate::polyhedra::{hnf, LatticeBasis};

/// The lattice data attached to one value `f` of the gcd poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackLattice {
    pub f: u64,
    /// Indices `i` with `f ∤ α_i`.
    pub j: Vec<usize>,
    /// The entries `α_i` for `i ∈ J`.
    pub a_j: Vec<Z>,
    /// Bezout coefficients with `Σ s_i α_i ≡ 1 (mod f)`, each reduced into `[0, f)`.
    pub s: Vec<Z>,
    /// Basis of `Λ(a, f) = {y ∈ Z^J : ⟨a_J, y⟩ ∈ fZ}`; its index is `f`.
    pub basis: LatticeBasis,
}

/// Bezout vector and lattice basis for `f > 1`. The basis comes from the Hermite
/// normal form `U·a_J = (h, 0, ..., 0)^T`: the rows of `U` with the first one
/// multiplied by `f / gcd(h, f)` generate `Λ(a, f)`.
pub fn bezout_and_lattice(a: &[u64], f: u64) -> Result<KnapsackLattice> {
    if f <= 1 {
        return Err(Error::InvalidInput("bezout_and_lattice needs f > 1".into()));
    }
    let j: Vec<usize> = (0..a.len()).filter(|&i| a[i] % f != 0).collect();
    if j.is_empty() {
        return Err(Error::InvalidInput(format!("every entry is divisible by {f}")));
    }
    let fz = Z::from(f);
    let a_j: Vec<Z> = j.iter().map(|&i| Z::from(a[i])).collect();
    let g = a_j.iter().fold(fz.clone(), |acc, x| acc.gcd(x));
    if !g.is_one() {
        return Err(Error::InvalidInput(format!("gcd of {f} and the entries it does not divide is {g}")));
    }

    let mut col: Vec<Vec<Z>> = a_j.iter().map(|x| vec![x.clone()]).collect();
    col.push(vec![fz.clone()]);
    let (_, u) = hnf(&col);
    let s: Vec<Z> = u[0][..j.len()].iter().map(|x| x.mod_floor(&fz)).collect();

    let col: Vec<Vec<Z>> = a_j.iter().map(|x| vec![x.clone()]).collect();
    let (h, mut u) = hnf(&col);
    let hval = h[0][0].abs();
    let mult = &fz / hval.gcd(&fz);
    for x in u[0].iter_mut() {
        *x *= &mult;
    }
    let basis = LatticeBasis::from_columns(&u)?;
    debug_assert_eq!(basis.index, fz);
    Ok(KnapsackLattice { f, j, a_j, s, basis })
}

/// True when `y` lies in `Λ(a, f)`.
#[cfg(test)]
pub(crate) fn in_lattice(a_j: &[Z], f: u64, y: &[Z]) -> bool {
    let dot: Z = a_j.iter().zip(y).map(|(a, b)| a * b).sum();
    num_traits::Zero::is_zero(&(dot % Z::from(f)))
}
