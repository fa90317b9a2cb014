use super::sparse::SparsePolynomial;
use crate::scalar::{dot, pow, Ring};

/// One summand `coef * <form, x>^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<S> {
    pub coef: S,
    pub form: Vec<S>,
    pub power: u32,
}

/// A weighted sum of powers of linear forms. The constant part is a power-0 term with the zero form.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFormSum<S> {
    dim: usize,
    terms: Vec<LinearForm<S>>,
}

impl<S: Ring> LinearFormSum<S> {
    pub fn new(dim: usize) -> Self {
        LinearFormSum { dim, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[LinearForm<S>] {
        &self.terms
    }

    /// Adds `coef * <form, x>^power`, merging with an existing equal `(form, power)` pair.
    pub fn push(&mut self, coef: S, form: Vec<S>, power: u32) {
        assert_eq!(form.len(), self.dim, "form has wrong dimension");
        let (form, power) = if power == 0 { (vec![S::zero(); self.dim], 0) } else { (form, power) };
        if let Some(i) = self.terms.iter().position(|t| t.power == power && t.form == form) {
            let sum = self.terms[i].coef.clone() + coef;
            if sum.is_zero() {
                self.terms.remove(i);
            } else {
                self.terms[i].coef = sum;
            }
            return;
        }
        if !coef.is_zero() {
            self.terms.push(LinearForm { coef, form, power });
        }
    }

    pub fn evaluate(&self, x: &[S]) -> S {
        self.terms.iter().fold(S::zero(), |acc, t| {
            acc + t.coef.clone() * pow(&dot(&t.form, x), t.power)
        })
    }

    /// Expands back into monomials.
    pub fn expand(&self) -> SparsePolynomial<S> {
        let mut out = SparsePolynomial::new(self.dim);
        for t in &self.terms {
            let mut lin = SparsePolynomial::new(self.dim);
            for (i, c) in t.form.iter().enumerate() {
                let mut e = vec![0; self.dim];
                e[i] = 1;
                lin.insert(e, c.clone());
            }
            let p = lin.pow_expand(t.power).scale(&t.coef);
            out = out.add(&p);
        }
        out
    }
}
