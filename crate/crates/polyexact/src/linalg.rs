//! Dense linear algebra over an exact (or floating) field.

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

pub fn transpose<S: Clone>(a: &[Vec<S>]) -> Matrix<S> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec<S: Scalar>(a: &[Vec<S>], x: &[S]) -> Vec<S> {
    a.iter().map(|row| crate::scalar::dot(row, x)).collect()
}

pub fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Matrix<S> {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| crate::scalar::dot(row, col)).collect())
        .collect()
}

pub fn identity<S: Scalar>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

/// Row echelon form in place; returns the pivot columns.
fn echelon<S: Scalar>(m: &mut Matrix<S>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for j in c..cols {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(a: &[Vec<S>]) -> usize {
    let mut m = a.to_vec();
    echelon(&mut m).len()
}

pub fn determinant<S: Scalar>(a: &[Vec<S>]) -> S {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = S::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return S::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = det * m[c][c].clone();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / m[c][c].clone();
            for j in c..n {
                let v = m[c][j].clone() * f.clone();
                m[i][j] = m[i][j].clone() - v;
            }
        }
    }
    det
}

/// Unique solution of the square system `a x = b`, if `a` is nonsingular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut m: Matrix<S> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse<S: Scalar>(a: &[Vec<S>]) -> Option<Matrix<S>> {
    let n = a.len();
    let mut m: Matrix<S> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let pivots = echelon(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// A basis of the null space `{x : a x = 0}`.
pub fn null_space<S: Scalar>(a: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut m = a.to_vec();
    let pivots = echelon(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); ncols];
            v[f] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Matrix<BigRational> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&q(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(determinant(&q(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&q(&[&[1, 2], &[2, 4]])), int(0));
        assert!((determinant(&[vec![2.0f64, 1.0], vec![1.0, 3.0]]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn solve_and_inverse() {
        let a = q(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(solve(&q(&[&[1, 1], &[1, 1]]), &[int(1), int(2)]).is_none());
    }

    #[test]
    fn kernels() {
        let a = q(&[&[1, 1, 1]]);
        let ns = null_space(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(mat_vec(&a, v), vec![int(0)]);
        }
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4], &[0, 1]])), 2);
    }
}
