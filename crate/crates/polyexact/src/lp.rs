//! Dense two-phase simplex method with Bland's rule.
//!
//! Exact for rational scalars; with floating-point scalars zero tests are exact
//! comparisons, so only well-conditioned problems behave.

use crate::scalar::Scalar;

/// `min c.x` subject to `a x = b`, with `x_j >= 0` unless `free[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactLp<S> {
    pub a: Vec<Vec<S>>,
    pub b: Vec<S>,
    pub c: Vec<S>,
    pub free: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { x: Vec<S>, value: S },
    Infeasible,
    Unbounded,
}

impl<S: Scalar> LpOutcome<S> {
    pub fn value(&self) -> Option<&S> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl<S: Scalar> ExactLp<S> {
    pub fn new(a: Vec<Vec<S>>, b: Vec<S>, c: Vec<S>, free: Vec<bool>) -> Self {
        assert_eq!(a.len(), b.len(), "row count mismatch");
        assert_eq!(c.len(), free.len(), "column count mismatch");
        assert!(a.iter().all(|r| r.len() == c.len()), "ragged constraint matrix");
        ExactLp { a, b, c, free }
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.c.len()
    }
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, col: usize) {
        let inv = S::one() / self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        self.rhs[r] = self.rhs[r].clone() * inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..self.rows[i].len() {
                if !self.rows[r][j].is_zero() {
                    let v = self.rows[r][j].clone() * f.clone();
                    self.rows[i][j] = self.rows[i][j].clone() - v;
                }
            }
            let v = self.rhs[r].clone() * f;
            self.rhs[i] = self.rhs[i].clone() - v;
        }
        self.basis[r] = col;
    }

    /// Runs Bland's rule on costs `cost`, only letting columns in `allowed` enter.
    /// Returns false when the objective is unbounded below.
    fn optimize(&mut self, cost: &[S], allowed: &[bool]) -> bool {
        loop {
            let ncols = cost.len();
            let entering = (0..ncols).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, &bv) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        r = r - cost[bv].clone() * self.rows[i][j].clone();
                    }
                }
                r.is_negative()
            });
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, col);
        }
    }
}

/// Solves the LP exactly by the two-phase simplex method with Bland's anti-cycling rule.
pub fn solve_lp_exact<S: Scalar>(lp: &ExactLp<S>) -> LpOutcome<S> {
    let m = lp.rows();
    let n = lp.cols();
    // split free columns into x+ - x-
    let mut col_map: Vec<(usize, bool)> = Vec::new();
    for j in 0..n {
        col_map.push((j, false));
        if lp.free[j] {
            col_map.push((j, true));
        }
    }
    let nstd = col_map.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let flip = lp.b[i].is_negative();
        let mut row: Vec<S> = col_map
            .iter()
            .map(|&(j, neg)| {
                let v = lp.a[i][j].clone();
                let v = if neg { -v } else { v };
                if flip { -v } else { v }
            })
            .collect();
        row.extend((0..m).map(|k| if k == i { S::one() } else { S::zero() }));
        rows.push(row);
        rhs.push(if flip { -lp.b[i].clone() } else { lp.b[i].clone() });
    }
    let total = nstd + m;
    let mut t = Tableau { rows, rhs, basis: (nstd..total).collect() };

    let phase1: Vec<S> = (0..total).map(|j| if j >= nstd { S::one() } else { S::zero() }).collect();
    let all = vec![true; total];
    t.optimize(&phase1, &all);
    let infeas = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bv, _)| bv >= nstd)
        .any(|(_, v)| !v.is_zero());
    if infeas {
        return LpOutcome::Infeasible;
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= nstd {
            if let Some(col) = (0..nstd).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, col);
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let cost: Vec<S> = (0..total)
        .map(|j| {
            if j >= nstd {
                return S::zero();
            }
            let (orig, neg) = col_map[j];
            if neg { -lp.c[orig].clone() } else { lp.c[orig].clone() }
        })
        .collect();
    let allowed: Vec<bool> = (0..total).map(|j| j < nstd).collect();
    if !t.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![S::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        let (orig, neg) = col_map[bv];
        let v = t.rhs[i].clone();
        x[orig] = x[orig].clone() + if neg { -v } else { v };
    }
    let value = crate::scalar::dot(&lp.c, &x);
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn one_dimensional() {
        // min x s.t. x - s = 3, s >= 0
        let lp = ExactLp::new(vec![q(&[1, -1])], q(&[3]), q(&[1, 0]), vec![false, false]);
        assert_eq!(solve_lp_exact(&lp).value(), Some(&int(3)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = ExactLp::new(vec![q(&[1, 1])], q(&[-1]), q(&[0, 0]), vec![false, false]);
        assert_eq!(solve_lp_exact(&lp), LpOutcome::Infeasible);
        let lp = ExactLp::new(vec![q(&[1, -1])], q(&[0]), q(&[-1, 0]), vec![false, false]);
        assert_eq!(solve_lp_exact(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables() {
        // min y s.t. x - y = 5, x >= 0, y free -> y = -5
        let lp = ExactLp::new(vec![q(&[1, -1])], q(&[5]), q(&[0, 1]), vec![false, true]);
        let out = solve_lp_exact(&lp);
        assert_eq!(out.value(), Some(&int(-5)));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's cycling example in equality form; Bland's rule terminates.
        let a = vec![
            vec![rat(1, 4), int(-60), rat(-1, 25), int(9), int(1), int(0), int(0)],
            vec![rat(1, 2), int(-90), rat(-1, 50), int(3), int(0), int(1), int(0)],
            vec![int(0), int(0), int(1), int(0), int(0), int(0), int(1)],
        ];
        let c = vec![rat(-3, 4), int(150), rat(-1, 50), int(6), int(0), int(0), int(0)];
        let lp = ExactLp::new(a, q(&[0, 0, 1]), c, vec![false; 7]);
        assert_eq!(solve_lp_exact(&lp).value(), Some(&rat(-1, 20)));
    }

    #[test]
    fn redundant_rows() {
        let lp = ExactLp::new(vec![q(&[1, 1]), q(&[2, 2])], q(&[1, 2]), q(&[1, 2]), vec![false, false]);
        assert_eq!(solve_lp_exact(&lp).value(), Some(&int(1)));
    }

    proptest! {
        #[test]
        fn optimum_is_feasible_and_beats_vertices(
            a in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 2),
            x0 in prop::collection::vec(0i64..4, 4),
            c in prop::collection::vec(0i64..6, 4),
        ) {
            let a: Vec<Vec<BigRational>> = a.iter().map(|r| q(r)).collect();
            let x0 = q(&x0);
            let b = crate::linalg::mat_vec(&a, &x0);
            let lp = ExactLp::new(a.clone(), b.clone(), q(&c), vec![false; 4]);
            match solve_lp_exact(&lp) {
                LpOutcome::Optimal { x, value } => {
                    prop_assert_eq!(crate::linalg::mat_vec(&a, &x), b);
                    prop_assert!(x.iter().all(|v| *v >= int(0)));
                    prop_assert!(value <= crate::scalar::dot(&q(&c), &x0));
                }
                other => prop_assert!(false, "unexpected {:?}", other),
            }
        }
    }
}
