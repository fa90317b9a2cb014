use num_traits::Zero;
use proptest::prelude::*;

use super::oracle::eval_poly;
use super::*;
use crate::scalar::{factorial, int, rat};

fn knap(a: &[u64]) -> KnapsackList {
    KnapsackList::new(a.to_vec()).unwrap()
}

fn zi(t: i64) -> Z {
    Z::from(t)
}

/// Checks that `oracle - top-k` agrees on each coset with a polynomial of degree
/// `< N - k` (identically zero when `k = N`), using `extra` verification points.
fn check_topk_against_oracle(a: &[u64], k: usize, extra: usize) {
    let kl = knap(a);
    let q = top_coefficients(&kl, k).unwrap();
    let n = kl.degree();
    let period: u64 = a.iter().fold(1u64, |acc, &x| num_integer::Integer::lcm(&acc, &x));
    let per_coset = n - k + extra;
    let t_max = period * per_coset as u64;
    let table = denumerant_table(a, t_max).unwrap();
    for c in 0..period {
        let pts: Vec<(Q, Q)> = (0..per_coset as u64)
            .map(|i| {
                let t = c + i * period;
                (int(t as i64), Q::from(Z::from(table[t as usize])) - evaluate_topk(&q, t))
            })
            .collect();
        let fit = interpolate(&pts[..n - k]);
        for (x, y) in &pts {
            assert_eq!(eval_poly(&fit, x), *y, "a={a:?} k={k} coset {c}");
        }
        if k == n {
            assert!(pts.iter().all(|(_, y)| y.is_zero()));
        }
    }
}

#[test]
fn golden_623() {
    let kl = knap(&[6, 2, 3]);
    let q = top_coefficients(&kl, 2).unwrap();
    assert_eq!(q.coefficient(2).unwrap(), &StepPolynomial::constant(rat(1, 72)));
    let e1 = StepPolynomial::parse("1/4 - 1/6*{-1/3*T} - 1/6*{1/2*T}").unwrap();
    assert!(q.coefficient(1).unwrap().equals_as_function(&e1));
    let e0 = StepPolynomial::parse(
        "1 - 3/2*{-1/3*T} - 3/2*{1/2*T} + 1/2*{-1/3*T}^2 + {-1/3*T}*{1/2*T} + 1/2*{1/2*T}^2",
    )
    .unwrap();
    assert!(q.coefficient(0).unwrap().equals_as_function(&e0));
    assert_eq!(evaluate_topk(&q, 10), int(3));
    assert_eq!(evaluate_topk(&q, 0), int(1));
    let cosets = coset_polynomials(&kl).unwrap();
    let expected = [
        [rat(1, 1), rat(1, 4), rat(1, 72)],
        [rat(-5, 72), rat(1, 18), rat(1, 72)],
        [rat(5, 9), rat(7, 36), rat(1, 72)],
        [rat(3, 8), rat(1, 6), rat(1, 72)],
        [rat(2, 9), rat(5, 36), rat(1, 72)],
        [rat(7, 72), rat(1, 9), rat(1, 72)],
    ];
    assert_eq!(cosets.len(), 6);
    for (got, want) in cosets.iter().zip(expected.iter()) {
        assert_eq!(got.as_slice(), want.as_slice());
    }
    assert_eq!(format_univariate(&cosets[0], "t"), "1/72*t^2 + 1/4*t + 1");
    assert_eq!(parse_univariate("1/72*t^2 + 1/4*t + 1", "t").unwrap(), cosets[0]);
    assert_eq!(parse_univariate("-t + 2", "t").unwrap(), vec![int(2), int(-1)]);
}

#[test]
fn small_goldens() {
    let q = top_coefficients(&knap(&[1, 2]), 1).unwrap();
    assert_eq!(q.coefficient(1).unwrap(), &StepPolynomial::constant(rat(1, 2)));
    for t in 0..6u64 {
        assert_eq!(evaluate_topk(&q, t), int((t / 2 + 1) as i64));
    }
    let c = coset_polynomials(&knap(&[1, 2])).unwrap();
    assert_eq!(c, vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]]);
    assert_eq!(coset_polynomials(&knap(&[1])).unwrap(), vec![vec![int(1)]]);
    for n in 1..5usize {
        let q = top_coefficients(&knap(&vec![1; n + 1]), 0).unwrap();
        let want = Q::from(factorial(n as u32)).recip();
        assert_eq!(q.coefficient(n).unwrap(), &StepPolynomial::constant(want));
    }
}

#[test]
fn gcd_scaling() {
    let kl = knap(&[12, 4, 6]);
    assert_eq!(kl.scale(), 2);
    assert_eq!(kl.entries(), &[6, 2, 3]);
    let q = top_coefficients(&kl, 2).unwrap();
    assert_eq!(evaluate_topk(&q, 20), int(3));
    assert_eq!(evaluate_topk(&q, 21), int(0));
    let table = denumerant_table(&[12, 4, 6], 60).unwrap();
    let cosets = coset_polynomials(&kl).unwrap();
    assert_eq!(cosets.len(), 12);
    for t in 0..=60u64 {
        let c = &cosets[(t % 12) as usize];
        assert_eq!(eval_poly(c, &int(t as i64)), Q::from(Z::from(table[t as usize])));
    }
}

#[test]
fn oracle_agreement_fixed() {
    check_topk_against_oracle(&[6, 2, 3], 2, 2);
    check_topk_against_oracle(&[6, 2, 3], 1, 2);
    check_topk_against_oracle(&[6, 2, 2, 3, 3], 2, 2);
    check_topk_against_oracle(&[3, 5, 7, 4], 2, 2);
    check_topk_against_oracle(&[2, 4, 6, 3, 9], 3, 2);
    check_topk_against_oracle(&[6, 10, 15, 4], 3, 2);
    check_topk_against_oracle(&[5, 5, 5, 5, 2], 4, 1);
}

#[test]
fn leading_coefficient_and_jobs() {
    for a in [vec![6u64, 2, 3], vec![4, 6, 9, 10], vec![7, 7, 3, 2, 5]] {
        let kl = knap(&a);
        let n = kl.degree();
        let q = top_coefficients(&kl, 2.min(n)).unwrap();
        let prod: u64 = a.iter().product();
        let want = (Q::from(factorial(n as u32)) * Q::from(Z::from(prod))).recip();
        assert_eq!(q.coefficient(n).unwrap(), &StepPolynomial::constant(want));
        let par = top_coefficients_jobs(&kl, 2.min(n), 3).unwrap();
        assert_eq!(par, q);
    }
}

#[test]
fn text_round_trip() {
    let q = top_coefficients(&knap(&[6, 2, 3]), 2).unwrap();
    let text = q.to_string();
    assert!(text.starts_with("knapsack = [6, 2, 3]\nE_2 = 1/72\n"));
    assert_eq!(TopKQuasiPolynomial::parse(&text).unwrap(), q);
    assert!(TopKQuasiPolynomial::parse("E_2 = 1").is_err());
    let kl = KnapsackList::parse("3\n6 2 3\n").unwrap();
    assert_eq!(kl.entries(), &[6, 2, 3]);
    assert_eq!(KnapsackList::parse(&kl.to_string()).unwrap(), kl);
    assert!(KnapsackList::parse("3\n6 2\n").is_err());
    assert!(KnapsackList::parse("2\n6 x\n").is_err());
    assert!(KnapsackList::parse("2\n0 1\n").is_err());
}

#[test]
fn periodicity_matches_coefficients() {
    // For [1..m] the coefficients of degree ≥ ℓ are constant and E_{ℓ-1} is not.
    for m in 4..=7u64 {
        let a: Vec<u64> = (1..=m).collect();
        let kl = knap(&a);
        let n = kl.degree();
        let p = first_periodic_degree(&a).unwrap();
        let d = p.top_nonconstant_degree().unwrap();
        let q = top_coefficients(&kl, n - d).unwrap();
        for i in d + 1..=n {
            let e = q.coefficient(i).unwrap();
            let c = StepPolynomial::constant(e.evaluate(&Z::zero()));
            assert!(e.equals_as_function(&c), "m={m} E_{i} should be constant");
        }
        let e = q.coefficient(d).unwrap();
        assert!(!e.equals_as_function(&StepPolynomial::constant(e.evaluate(&Z::zero()))));
    }
}

#[test]
fn mobius_identity() {
    // Σ_{f ∈ G, d | f} μ(f) is 1 exactly for root orders d whose pole order exceeds N - k.
    for (a, k) in [(vec![98u64, 59, 44, 100], 1usize), (vec![6, 2, 2, 3, 3], 2), (vec![12, 18, 8, 27, 5], 3)] {
        let n = a.len() - 1;
        let p = gcd_poset(&a, k).unwrap();
        let l = p.lcm();
        for d in (1..=l).filter(|d| l % d == 0) {
            let order = a.iter().filter(|&&x| x % d == 0).count();
            let member = order > n - k;
            let s: i64 = p.pairs().filter(|(f, _)| f % d == 0).map(|(_, m)| m).sum();
            assert_eq!(s, member as i64, "a={a:?} d={d}");
        }
    }
}

#[test]
fn step_polynomials_are_periodic() {
    let q = top_coefficients(&knap(&[6, 10, 15, 4]), 3).unwrap();
    let poset = gcd_poset(&[6, 10, 15, 4], 3).unwrap();
    let l = poset.lcm() as i64;
    for p in q.coefficients.values() {
        for t in 0..2 * l {
            assert_eq!(p.evaluate(&zi(t)), p.evaluate(&zi(t + l)));
        }
    }
}

fn small_knapsack() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(1u64..=12, 2..=4).prop_filter("gcd 1 and small period", |a| {
        let g = a.iter().fold(0u64, |g, &x| num_integer::Integer::gcd(&g, &x));
        let l = a.iter().fold(1u64, |acc, &x| num_integer::Integer::lcm(&acc, &x));
        g == 1 && l <= 120
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn topk_matches_oracle(a in small_knapsack(), k in 0usize..3) {
        let k = k.min(a.len() - 1);
        check_topk_against_oracle(&a, k, 1);
    }

    #[test]
    fn leading_coefficient(a in small_knapsack()) {
        let q = top_coefficients(&knap(&a), 0).unwrap();
        let n = a.len() - 1;
        let prod: u64 = a.iter().product();
        let want = (Q::from(factorial(n as u32)) * Q::from(Z::from(prod))).recip();
        prop_assert_eq!(q.coefficient(n).unwrap().constant_term(), want);
        prop_assert!(q.coefficient(n).unwrap().is_constant());
    }
}

#[test]
fn dual_index_bounded_by_f() {
    use crate::polyhedra::{barvinok_decompose_with_stats, SimplicialCone};
    for (a, k) in [(vec![6u64, 10, 15, 4], 3usize), (vec![12, 18, 8, 27, 5], 3), (vec![30, 42, 70, 105, 11], 4)] {
        let poset = gcd_poset(&a, k).unwrap();
        for (f, _) in poset.pairs().filter(|&(f, _)| f > 1) {
            let lat = bezout_and_lattice(&a, f).unwrap();
            let r = lat.j.len();
            let unit: Vec<Vec<Z>> = (0..r).map(|i| (0..r).map(|j| Z::from((i == j) as i64)).collect()).collect();
            let cone = SimplicialCone::new(vec![Q::zero(); r], unit, 1).unwrap();
            let (_, stats) = barvinok_decompose_with_stats(&cone, &lat.basis).unwrap();
            assert!(stats.max_index <= Z::from(f), "a={a:?} f={f} index {}", stats.max_index);
        }
    }
}
