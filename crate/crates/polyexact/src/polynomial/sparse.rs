use num_rational::BigRational;

use super::linear_forms::LinearFormSum;
use super::trie::BurstTrie;
use crate::scalar::{binomial, big, factorial, pow, Ring};

/// Multivariate polynomial in `dim` variables with burst-trie storage.
#[derive(Clone, Debug)]
pub struct SparsePolynomial<S> {
    dim: usize,
    trie: BurstTrie<S>,
}

impl<S: Ring> PartialEq for SparsePolynomial<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.terms() == other.terms()
    }
}

impl<S: Ring> SparsePolynomial<S> {
    pub fn new(dim: usize) -> Self {
        SparsePolynomial { dim, trie: BurstTrie::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, S)>>(dim: usize, terms: I) -> Self {
        let mut p = Self::new(dim);
        for (e, c) in terms {
            p.insert(e, c);
        }
        p
    }

    pub fn constant(dim: usize, c: S) -> Self {
        Self::from_terms(dim, [(vec![0; dim], c)])
    }

    /// The coordinate function `x_i`.
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::from_terms(dim, [(e, S::one())])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.trie.len()
    }

    pub fn is_zero(&self) -> bool {
        self.trie.is_empty()
    }

    pub fn trie(&self) -> &BurstTrie<S> {
        &self.trie
    }

    pub fn insert(&mut self, mono: Vec<u32>, c: S) {
        assert_eq!(mono.len(), self.dim, "monomial has wrong dimension");
        self.trie.insert(mono, c);
    }

    /// Terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> Vec<(Vec<u32>, S)> {
        self.trie.entries()
    }

    pub fn coeff(&self, mono: &[u32]) -> S {
        self.trie.get(mono).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms().iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.insert(e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.dim, self.terms().into_iter().map(|(e, c)| (e, -c)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::from_terms(self.dim, self.terms().into_iter().map(|(e, c)| (e, c * k.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new(self.dim);
        let b = other.terms();
        for (ea, ca) in self.terms() {
            for (eb, cb) in &b {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// `self^k`, expanded.
    pub fn pow_expand(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.dim, S::one());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn evaluate(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.dim, "point has wrong dimension");
        self.terms().into_iter().fold(S::zero(), |acc, (e, c)| {
            let m = e.iter().zip(x).fold(c, |m, (&k, xi)| m * pow(xi, k));
            acc + m
        })
    }

    /// The polynomial `x -> self(x + t)`.
    pub fn translate(&self, t: &[S]) -> Self {
        let shifted: Vec<Self> = (0..self.dim)
            .map(|i| Self::var(self.dim, i).add(&Self::constant(self.dim, t[i].clone())))
            .collect();
        let mut out = Self::new(self.dim);
        for (e, c) in self.terms() {
            let mut m = Self::constant(self.dim, c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = m.mul(&shifted[i].pow_expand(k));
                }
            }
            out = out.add(&m);
        }
        out
    }

    /// Rewrites every monomial as a weighted sum of powers of linear forms:
    /// `x^m = 1/|m|! * sum_{0 <= p <= m} (-1)^{|m|-|p|} prod C(m_i, p_i) <p, x>^{|m|}`.
    /// Forms are reduced to primitive integer directions so repeated directions merge.
    pub fn to_linear_forms(&self) -> LinearFormSum<S> {
        let mut out = LinearFormSum::new(self.dim);
        for (m, c) in self.terms() {
            let total: u32 = m.iter().sum();
            if total == 0 {
                out.push(c, vec![S::zero(); self.dim], 0);
                continue;
            }
            let inv_fact = BigRational::new(1.into(), factorial(total));
            let mut p = vec![0u32; self.dim];
            loop {
                if p.iter().any(|&x| x > 0) {
                    let ps: u32 = p.iter().sum();
                    let mut w = big(
                        m.iter().zip(&p).fold(num_bigint::BigInt::from(1), |acc, (&mi, &pi)| acc * binomial(mi, pi)),
                    ) * &inv_fact;
                    if (total - ps) % 2 == 1 {
                        w = -w;
                    }
                    // primitive direction: <g p', x>^D = g^D <p', x>^D
                    let g = p.iter().fold(0u32, |a, &b| num_integer::gcd(a, b));
                    w *= big(num_traits::pow(num_bigint::BigInt::from(g), total as usize));
                    let form = p.iter().map(|&x| S::from_i64((x / g) as i64)).collect();
                    out.push(c.clone() * S::from_rational(&w), form, total);
                }
                let mut i = 0;
                while i < self.dim {
                    if p[i] < m[i] {
                        p[i] += 1;
                        break;
                    }
                    p[i] = 0;
                    i += 1;
                }
                if i == self.dim {
                    break;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    type P = SparsePolynomial<BigRational>;

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> P {
        P::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), int(*c))))
    }

    fn paper_f() -> P {
        poly(2, &[(&[2, 1], 1), (&[1, 1], -1)])
    }

    #[test]
    fn evaluate_examples() {
        let f = paper_f();
        assert_eq!(f.evaluate(&[int(3), int(3)]), int(18));
        assert_eq!(f.evaluate(&[int(1), int(1)]), int(0));
        assert_eq!(P::new(2).evaluate(&[rat(1, 3), int(7)]), int(0));
    }

    #[test]
    fn pow_expand_examples() {
        let p = poly(1, &[(&[1], 1), (&[0], 1)]);
        assert_eq!(p.pow_expand(2), poly(1, &[(&[2], 1), (&[1], 2), (&[0], 1)]));
        assert_eq!(poly(2, &[(&[1, 1], 1)]).pow_expand(0), poly(2, &[(&[0, 0], 1)]));
        assert_eq!(
            paper_f().pow_expand(2),
            poly(2, &[(&[4, 2], 1), (&[3, 2], -2), (&[2, 2], 1)])
        );
    }

    #[test]
    fn linear_forms_of_xy() {
        let lf = poly(2, &[(&[1, 1], 1)]).to_linear_forms();
        assert_eq!(lf.len(), 3);
        assert_eq!(lf.expand(), poly(2, &[(&[1, 1], 1)]));
        let find = |f: &[i64]| {
            lf.terms()
                .iter()
                .find(|t| t.form == f.iter().map(|&x| int(x)).collect::<Vec<_>>())
                .map(|t| (t.coef.clone(), t.power))
        };
        assert_eq!(find(&[1, 1]), Some((rat(1, 2), 2)));
        assert_eq!(find(&[1, 0]), Some((rat(-1, 2), 2)));
        assert_eq!(find(&[0, 1]), Some((rat(-1, 2), 2)));
    }

    #[test]
    fn linear_forms_of_constants_and_squares() {
        let lf = poly(3, &[(&[0, 0, 0], 7)]).to_linear_forms();
        assert_eq!(lf.len(), 1);
        assert_eq!(lf.terms()[0].power, 0);
        assert_eq!(lf.terms()[0].coef, int(7));
        let sq = poly(1, &[(&[2], 1)]).to_linear_forms();
        assert_eq!(sq.len(), 1);
        assert_eq!((sq.terms()[0].coef.clone(), sq.terms()[0].power), (int(1), 2));
    }

    #[test]
    fn translation() {
        let f = paper_f();
        let t = [int(1), int(-2)];
        let g = f.translate(&t);
        let x = [rat(1, 3), int(5)];
        assert_eq!(g.evaluate(&x), f.evaluate(&[&x[0] + &t[0], &x[1] + &t[1]]));
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -9i64..9), 0..20)
    }

    proptest! {
        #[test]
        fn shuffled_insertion_gives_equal_polynomial(terms in arb_poly(), seed in 0usize..1000) {
            let p = P::from_terms(3, terms.iter().map(|(e, c)| (e.clone(), int(*c))));
            let mut shuffled = p.terms();
            let n = shuffled.len().max(1);
            shuffled.rotate_left(seed % n);
            shuffled.reverse();
            let q = P::from_terms(3, shuffled);
            prop_assert_eq!(&p, &q);
            let t = p.terms();
            prop_assert!(t.windows(2).all(|w| w[0].0 < w[1].0));
        }

        #[test]
        fn linear_forms_evaluate_like_polynomial(
            terms in prop::collection::vec((prop::collection::vec(0u32..3, 3), -9i64..9), 1..8),
            pts in prop::collection::vec(prop::collection::vec((-9i64..9, 1i64..5), 3), 20)
        ) {
            let p = P::from_terms(3, terms.iter().filter(|(e, _)| e.iter().sum::<u32>() <= 5).map(|(e, c)| (e.clone(), int(*c))));
            let lf = p.to_linear_forms();
            for pt in pts {
                let x: Vec<BigRational> = pt.iter().map(|(n, d)| rat(*n, *d)).collect();
                prop_assert_eq!(lf.evaluate(&x), p.evaluate(&x));
            }
        }

        #[test]
        fn form_count_bound(m in prop::collection::vec(0u32..5, 1..4)) {
            let d = m.len();
            let deg: u32 = m.iter().sum();
            let p = P::from_terms(d, [(m.clone(), int(1))]);
            let forms = p.to_linear_forms().len();
            let prod: usize = m.iter().map(|&x| x as usize + 1).product();
            prop_assert!(forms <= prod);
            prop_assert!(prod <= (deg as usize + 1).pow(d as u32));
        }
    }
}
