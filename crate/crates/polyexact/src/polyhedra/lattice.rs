use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Q, Z};
use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::scalar::{dot, to_rationals};

/// A full-rank lattice `B·Z^r` given by the columns of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    /// Row-major `r×r` matrix; the lattice generators are its columns.
    pub matrix: Vec<Vec<Z>>,
    pub index: Z,
}

impl LatticeBasis {
    pub fn new(matrix: Vec<Vec<Z>>) -> Result<Self> {
        let r = matrix.len();
        if matrix.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidInput("lattice basis must be square".into()));
        }
        let det = determinant(&matrix.iter().map(|row| to_rationals(row)).collect::<Vec<_>>());
        if det.is_zero() {
            return Err(Error::domain("polyhedra", "singular lattice basis"));
        }
        Ok(LatticeBasis { matrix, index: det.to_integer().abs() })
    }

    pub fn standard(r: usize) -> Self {
        let matrix = (0..r).map(|i| (0..r).map(|j| if i == j { Z::one() } else { Z::zero() }).collect()).collect();
        LatticeBasis { matrix, index: Z::one() }
    }

    /// Builds the lattice generated by the given column vectors.
    pub fn from_columns(cols: &[Vec<Z>]) -> Result<Self> {
        let r = cols.len();
        Self::new((0..r).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn columns(&self) -> Vec<Vec<Z>> {
        let r = self.dim();
        (0..r).map(|j| (0..r).map(|i| self.matrix[i][j].clone()).collect()).collect()
    }
}

/// Hermite normal form by unimodular row operations: returns `(H, U)` with `U·A = H`,
/// `U` unimodular, `H` upper echelon with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`. For a single column this yields `(g, 0, ..., 0)^T`
/// with `g` the gcd of the entries, and the first row of `U` is a Bezout vector.
pub fn hnf(a: &[Vec<Z>]) -> (Vec<Vec<Z>>, Vec<Vec<Z>>) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut h = a.to_vec();
    let mut u: Vec<Vec<Z>> = (0..m).map(|i| (0..m).map(|j| if i == j { Z::one() } else { Z::zero() }).collect()).collect();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let piv = (row..m).filter(|&i| !h[i][col].is_zero()).min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(p) = piv else { break };
            h.swap(row, p);
            u.swap(row, p);
            let mut done = true;
            for i in row + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[row][col]);
                sub_row(&mut h, i, row, &q);
                sub_row(&mut u, i, row, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            for x in h[row].iter_mut().chain(u[row].iter_mut()) {
                *x = -x.clone();
            }
        }
        for i in 0..row {
            let q = h[i][col].div_floor(&h[row][col]);
            if !q.is_zero() {
                sub_row(&mut h, i, row, &q);
                sub_row(&mut u, i, row, &q);
            }
        }
        row += 1;
    }
    (h, u)
}

fn sub_row(m: &mut [Vec<Z>], target: usize, src: usize, q: &Z) {
    let s = m[src].clone();
    for (x, y) in m[target].iter_mut().zip(&s) {
        *x -= q * y;
    }
}

/// LLL reduction with parameter 3/4 in exact rational arithmetic. Input and output
/// are lists of basis vectors.
pub fn lll_reduce(basis: &[Vec<Z>]) -> Result<Vec<Vec<Z>>> {
    let n = basis.len();
    let mut b: Vec<Vec<Q>> = basis.iter().map(|v| to_rationals(v)).collect();
    if n == 0 {
        return Ok(Vec::new());
    }
    let delta = Q::new(3.into(), 4.into());
    let half = Q::new(1.into(), 2.into());
    let mut k = 1;
    let (mut bs, mut norms) = gram_schmidt(&b)?;
    while k < n {
        for j in (0..k).rev() {
            let mu = dot(&b[k], &bs[j]) / &norms[j];
            let q = (mu + &half).floor();
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
        let mu = dot(&b[k], &bs[k - 1]) / &norms[k - 1];
        if norms[k] >= (&delta - &mu * &mu) * &norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (bs, norms) = gram_schmidt(&b)?;
            k = (k - 1).max(1);
        }
    }
    Ok(b.iter().map(|v| v.iter().map(|x| x.to_integer()).collect()).collect())
}

fn gram_schmidt(b: &[Vec<Q>]) -> Result<(Vec<Vec<Q>>, Vec<Q>)> {
    let mut bs: Vec<Vec<Q>> = Vec::with_capacity(b.len());
    let mut norms = Vec::with_capacity(b.len());
    for v in b {
        let mut w = v.clone();
        for (u, nu) in bs.iter().zip(&norms) {
            let mu = dot(v, u) / nu;
            for (x, y) in w.iter_mut().zip(u) {
                *x -= &mu * y;
            }
        }
        let nw = dot(&w, &w);
        if nw.is_zero() {
            return Err(Error::domain("polyhedra", "LLL input vectors are linearly dependent"));
        }
        bs.push(w);
        norms.push(nw);
    }
    Ok((bs, norms))
}

/// A short nonzero vector of the lattice: the first vector of an LLL-reduced basis.
pub fn lll_short_vector(lattice: &LatticeBasis) -> Result<Vec<Z>> {
    let reduced = lll_reduce(&lattice.columns())?;
    Ok(reduced.into_iter().next().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn zm(rows: &[&[i64]]) -> Vec<Vec<Z>> {
        rows.iter().map(|r| r.iter().map(|&x| Z::from(x)).collect()).collect()
    }

    fn det_z(m: &[Vec<Z>]) -> Q {
        determinant(&m.iter().map(|r| to_rationals(r)).collect::<Vec<_>>())
    }

    fn mul(a: &[Vec<Z>], b: &[Vec<Z>]) -> Vec<Vec<Z>> {
        a.iter().map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect()).collect()
    }

    #[test]
    fn hnf_of_column() {
        let a = zm(&[&[6], &[2], &[3]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, zm(&[&[1], &[0], &[0]]));
        let s: Z = u[0].iter().zip([6, 2, 3]).map(|(x, c)| x * Z::from(c)).sum();
        assert_eq!(s, Z::one());
        assert_eq!(det_z(&u).abs(), rat(1, 1));
        assert_eq!(mul(&u, &a), h);
    }

    #[test]
    fn hnf_identity() {
        let i = zm(&[&[1, 0], &[0, 1]]);
        assert_eq!(hnf(&i), (i.clone(), i));
    }

    #[test]
    fn short_vectors() {
        let v = lll_short_vector(&LatticeBasis::standard(3)).unwrap();
        assert_eq!(v.iter().map(|x| x.abs()).sum::<Z>(), Z::one());
        let l = LatticeBasis::from_columns(&zm(&[&[1, 0], &[1, 2]])).unwrap();
        let v = lll_short_vector(&l).unwrap();
        let n: Z = v.iter().map(|x| x * x).sum();
        assert!(n <= Z::from(2) && !n.is_zero());
        assert!(LatticeBasis::new(zm(&[&[1, 2], &[2, 4]])).is_err());
    }

    proptest! {
        #[test]
        fn hnf_is_unimodular(raw in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 3)) {
            let a = zm(&raw.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
            let (h, u) = hnf(&a);
            prop_assert_eq!(det_z(&u).abs(), rat(1, 1));
            prop_assert_eq!(mul(&u, &a), h.clone());
            for i in 1..3 {
                for j in 0..i {
                    prop_assert!(h[i][j].is_zero());
                }
            }
        }

        #[test]
        fn lll_preserves_lattice(raw in prop::collection::vec(prop::collection::vec(-30i64..30, 3), 3)) {
            let cols = zm(&raw.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
            prop_assume!(!det_z(&cols).is_zero());
            let red = lll_reduce(&cols).unwrap();
            prop_assert_eq!(det_z(&red).abs(), det_z(&cols).abs());
            // Each reduced vector is an integer combination of the original columns.
            let m: Vec<Vec<Q>> = (0..3).map(|i| cols.iter().map(|c| Q::from(c[i].clone())).collect()).collect();
            for v in &red {
                let c = crate::linalg::solve(&m, &to_rationals(v)).unwrap();
                prop_assert!(c.iter().all(|x| x.is_integer()));
            }
            let first: Z = red[0].iter().map(|x| x * x).sum();
            for c in &cols {
                let n: Z = c.iter().map(|x| x * x).sum();
                // LLL guarantee with δ = 3/4: |b_1|^2 ≤ 2^(n-1) λ_1^2.
                prop_assert!(first <= n * Z::from(4));
            }
        }
    }
}
