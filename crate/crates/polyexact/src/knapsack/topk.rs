use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::bezout_and_lattice;
use super::poset::gcd_poset;
use super::step::StepPolynomial;
use super::{KnapsackList, Q, Z};
use crate::error::{Error, Result};
use crate::exact_arith::bernoulli;
use crate::linalg::solve;
use crate::polyhedra::{barvinok_decompose, find_regular_vector, SimplicialCone};
use crate::scalar::{factorial, fmt_rational_short, parse_rational, to_rationals};

/// Largest period for which `coset_polynomials` lists every coset.
pub const MAX_COSET_PERIOD: u64 = 10_000;

/// The top `k + 1` coefficients `E_N, ..., E_{N-k}` of `E(a; t) = Σ E_i(t) t^i`
/// for the normalized list. `E_i` is stored under key `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopKQuasiPolynomial {
    pub knapsack: KnapsackList,
    pub n: usize,
    pub k: usize,
    pub coefficients: BTreeMap<usize, StepPolynomial>,
}

impl TopKQuasiPolynomial {
    pub fn coefficient(&self, i: usize) -> Option<&StepPolynomial> {
        self.coefficients.get(&i)
    }

    /// A common period of all stored coefficients.
    pub fn period(&self) -> Z {
        self.coefficients.values().fold(Z::one(), |acc, p| acc.lcm(&p.period()))
    }

    /// Parses the text produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut knapsack = None;
        let mut coefficients = BTreeMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected 'name = value', got {line:?}")))?;
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            if lhs == "knapsack" {
                let inner = rhs
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("bad knapsack list {rhs:?}")))?;
                let entries = inner
                    .split(',')
                    .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                knapsack = Some(KnapsackList::new(entries).map_err(|e| Error::Parse(e.to_string()))?);
            } else if let Some(i) = lhs.strip_prefix("E_") {
                let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad coefficient index {lhs:?}")))?;
                coefficients.insert(i, StepPolynomial::parse(rhs)?);
            } else {
                return Err(Error::Parse(format!("unknown field {lhs:?}")));
            }
        }
        let knapsack = knapsack.ok_or_else(|| Error::Parse("missing knapsack line".into()))?;
        let n = knapsack.degree();
        let low = *coefficients.keys().next().ok_or_else(|| Error::Parse("no coefficients".into()))?;
        if coefficients.keys().last() != Some(&n) || coefficients.len() != n - low + 1 {
            return Err(Error::Parse("coefficients must run contiguously from E_N downwards".into()));
        }
        Ok(TopKQuasiPolynomial { knapsack, n, k: n - low, coefficients })
    }
}

impl fmt::Display for TopKQuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.knapsack.original().iter().map(u64::to_string).collect();
        writeln!(f, "knapsack = [{}]", entries.join(", "))?;
        for (i, p) in self.coefficients.iter().rev() {
            writeln!(f, "E_{i} = {p}")?;
        }
        Ok(())
    }
}

/// Computes the top `k + 1` coefficients of the denumerant quasi-polynomial.
pub fn top_coefficients(knapsack: &KnapsackList, k: usize) -> Result<TopKQuasiPolynomial> {
    top_coefficients_jobs(knapsack, k, 1)
}

/// As `top_coefficients`, with the independent per-`f` terms spread over `jobs`
/// threads. The exact sum does not depend on `jobs`.
pub fn top_coefficients_jobs(knapsack: &KnapsackList, k: usize, jobs: usize) -> Result<TopKQuasiPolynomial> {
    let a = knapsack.entries();
    let n = knapsack.degree();
    if k > n {
        return Err(Error::InvalidInput(format!("k = {k} exceeds N = {n}")));
    }
    let poset = gcd_poset(a, k)?;
    let work: Vec<(u64, i64)> = poset.pairs().filter(|&(_, mu)| mu != 0).collect();
    let jobs = jobs.max(1).min(work.len().max(1));
    let parts: Vec<Result<Vec<StepPolynomial>>> = if jobs == 1 {
        work.iter().map(|&(f, mu)| f_term(a, f, mu, k)).collect()
    } else {
        let chunk = work.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            let handles: Vec<_> = work
                .chunks(chunk)
                .map(|c| scope.spawn(move || c.iter().map(|&(f, mu)| f_term(a, f, mu, k)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut coefficients: BTreeMap<usize, StepPolynomial> = (n - k..=n).map(|m| (m, StepPolynomial::zero())).collect();
    for part in parts {
        for (j, p) in part?.into_iter().enumerate() {
            let e = coefficients.get_mut(&(n - j)).expect("degree in range");
            *e = e.add(&p);
        }
    }
    Ok(TopKQuasiPolynomial { knapsack: knapsack.clone(), n, k, coefficients })
}

// Truncated series in x, ε and the fractional-part variables y_1..y_r. Exponent
// vectors are [x, ε, y_1, ..., y_r].
type Series = BTreeMap<Vec<u32>, Q>;

fn series_mul(a: &Series, b: &Series, xcap: u32, ecap: u32) -> Series {
    let mut out = Series::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            if ea[0] + eb[0] > xcap || ea[1] + eb[1] > ecap {
                continue;
            }
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e).or_insert_with(Q::zero);
            *entry += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn mono(nvars: usize, x: u32, e: u32) -> Vec<u32> {
    let mut v = vec![0; nvars];
    v[0] = x;
    v[1] = e;
    v
}

// `(w0 + ε b)^n` truncated at ε^ecap, as coefficients of ε^0, ε^1, ...
fn binomial_powers(w0: &Q, b: &Q, n: u32, ecap: u32) -> Vec<Q> {
    (0..=ecap.min(n))
        .map(|j| {
            let c = Q::from(crate::scalar::binomial(n, j));
            c * num_traits::pow(w0.clone(), (n - j) as usize) * num_traits::pow(b.clone(), j as usize)
        })
        .collect()
}

// Σ_n B_n (w x)^n / n! with w = w0 + ε b, the power series of z/(e^z - 1) at z = wx.
fn bernoulli_factor(nvars: usize, w0: &Q, b: &Q, xcap: u32, ecap: u32) -> Series {
    let mut s = Series::new();
    for n in 0..=xcap {
        let bn = bernoulli(n as usize);
        if bn.is_zero() {
            continue;
        }
        let scale = bn / Q::from(factorial(n));
        for (j, c) in binomial_powers(w0, b, n, ecap).into_iter().enumerate() {
            if !c.is_zero() {
                *s.entry(mono(nvars, n, j as u32)).or_insert_with(Q::zero) += &scale * c;
            }
        }
    }
    s
}

// The contribution of one poset value f to E_N, ..., E_{N-k}: entry j of the result
// is μ(f) times the f-term of E_{N-j}.
fn f_term(a: &[u64], f: u64, mu: i64, k: usize) -> Result<Vec<StepPolynomial>> {
    let n = a.len() - 1;
    let xcap = k as u32;
    // M(-Ts, R^J, Λ; a_J x) as a series in x: entry j is the coefficient of x^{j-r}.
    let (r, m_series) = if f == 1 {
        let mut unit = vec![StepPolynomial::zero(); k + 1];
        unit[0] = StepPolynomial::constant(Q::one());
        (0, unit)
    } else {
        let lat = bezout_and_lattice(a, f)?;
        (lat.j.len(), cone_series(&lat.a_j, &lat.s, &lat.basis, xcap)?)
    };
    // Π_{f | α_j} (1/α_j) · α_j x / (e^{α_j x} - 1), a rational series in x.
    let mut beta = vec![Q::zero(); k + 1];
    beta[0] = Q::one();
    for &alpha in a.iter().filter(|&&x| x % f == 0) {
        let alpha = Q::from(Z::from(alpha));
        let bf: Vec<Q> = (0..=k)
            .map(|i| bernoulli(i) * num_traits::pow(alpha.clone(), i) / Q::from(factorial(i as u32)))
            .collect();
        let mut next = vec![Q::zero(); k + 1];
        for (i, x) in beta.iter().enumerate() {
            for (l, y) in bf.iter().enumerate().take(k + 1 - i) {
                next[i + l] += x * y;
            }
        }
        beta = next.into_iter().map(|c| c / &alpha).collect();
    }
    debug_assert!(r <= k);
    // F = f (-1)^{N+1} x^{-(N+1)} · β(x) · Σ_U (...); E_m gets μ · (-(-1)^m / m!) [x^{-1-m}] F.
    let mut out = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut acc = StepPolynomial::zero();
        for (i, b) in beta.iter().enumerate().take(j + 1) {
            if !b.is_zero() {
                acc = acc.add(&m_series[j - i].scale(b));
            }
        }
        let m = n - j;
        let sign = if (n + 1 + m + 1) % 2 == 0 { 1 } else { -1 };
        let scale = Q::from(Z::from(mu * sign)) * Q::from(Z::from(f)) / Q::from(factorial(m as u32));
        out.push(acc.scale(&scale));
    }
    Ok(out)
}

// Σ_U ε_U [ε^0] e^{x Σ {σ_i T} w_i(ε)} Π_i (1 - e^{x w_i(ε)})^{-1} with the overall
// factor (-1)^r x^{-r} removed; entry j is the coefficient of x^j.
fn cone_series(a_j: &[Z], s: &[Z], basis: &crate::polyhedra::LatticeBasis, xcap: u32) -> Result<Vec<StepPolynomial>> {
    let r = a_j.len();
    let unit: Vec<Vec<Z>> = (0..r).map(|i| (0..r).map(|j| if i == j { Z::one() } else { Z::zero() }).collect()).collect();
    let orthant = SimplicialCone::new(vec![Q::zero(); r], unit, 1)?;
    let cones = barvinok_decompose(&orthant, basis)?;
    let aq = to_rationals(a_j);
    let dot = |u: &[Z]| -> Q { aq.iter().zip(to_rationals(u)).map(|(x, y)| x * y).sum() };
    // One perturbation direction β, nonzero on every ray that annihilates a_J.
    let singular: Vec<Vec<Z>> = cones.iter().flat_map(|c| c.rays.iter()).filter(|g| dot(g).is_zero()).cloned().collect();
    let beta = find_regular_vector(&[singular], &[], r);
    let sq = to_rationals(s);
    let nvars = 2 + r;
    let mut total = vec![StepPolynomial::zero(); xcap as usize + 1];
    for cone in &cones {
        let w0: Vec<Q> = cone.rays.iter().map(|g| dot(g)).collect();
        let wb: Vec<Q> = cone.rays.iter().map(|g| beta.iter().zip(to_rationals(g)).map(|(x, y)| x * y).sum()).collect();
        let p = w0.iter().filter(|w| w.is_zero()).count() as u32;
        let mut prefactor = Q::from(Z::from(cone.sign));
        let mut prod: Series = Series::from([(vec![0; nvars], Q::one())]);
        for i in 0..r {
            if w0[i].is_zero() {
                prefactor /= &wb[i];
            } else {
                // 1/(w0 + εb) = (1/w0) Σ (-b/w0)^j ε^j.
                let mut inv = Series::new();
                let ratio = -&wb[i] / &w0[i];
                for e in 0..=p {
                    let c = num_traits::pow(ratio.clone(), e as usize) / &w0[i];
                    if !c.is_zero() {
                        inv.insert(mono(nvars, 0, e), c);
                    }
                }
                prod = series_mul(&prod, &inv, xcap, p);
            }
            prod = series_mul(&prod, &bernoulli_factor(nvars, &w0[i], &wb[i], xcap, p), xcap, p);
        }
        // exp(x Σ y_i (w0_i + ε b_i)) = Π_i exp(x y_i w0_i) exp(ε x y_i b_i).
        for i in 0..r {
            let mut lin = Series::new();
            if !w0[i].is_zero() {
                let mut e = mono(nvars, 1, 0);
                e[2 + i] = 1;
                lin.insert(e, w0[i].clone());
            }
            if !wb[i].is_zero() && p > 0 {
                let mut e = mono(nvars, 1, 1);
                e[2 + i] = 1;
                lin.insert(e, wb[i].clone());
            }
            prod = series_mul(&prod, &series_exp(&lin, nvars, xcap, p), xcap, p);
        }
        // Coordinates of s in the ray basis give the fractional parts {σ_i T}.
        let g: Vec<Vec<Q>> = (0..r).map(|row| cone.rays.iter().map(|ray| Q::from(ray[row].clone())).collect()).collect();
        let sigma = solve(&g, &sq).ok_or_else(|| Error::Structural("unimodular cone rays are dependent".into()))?;
        for (e, c) in prod {
            if e[1] != p {
                continue;
            }
            let factors: Vec<(Q, u32)> = (0..r).map(|i| (sigma[i].clone(), e[2 + i])).collect();
            total[e[0] as usize].add_term(c * &prefactor, &factors);
        }
    }
    Ok(total)
}

fn series_exp(lin: &Series, nvars: usize, xcap: u32, ecap: u32) -> Series {
    let one: Series = Series::from([(vec![0; nvars], Q::one())]);
    let mut out = one.clone();
    let mut power = one;
    for i in 1..=xcap {
        power = series_mul(&power, lin, xcap, ecap);
        if power.is_empty() {
            break;
        }
        let inv = Q::from(factorial(i)).recip();
        for (e, c) in &power {
            *out.entry(e.clone()).or_insert_with(Q::zero) += c * &inv;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `Σ_i E_i(t) t^i` with the fractional parts taken at `T = t`. For an input list
/// with gcd `g > 1`, `E(a; t)` is `E(a/g; t/g)` when `g | t` and 0 otherwise, and the
/// same rule is applied to the truncated sum.
pub fn evaluate_topk(q: &TopKQuasiPolynomial, t: u64) -> Q {
    let g = q.knapsack.scale();
    if t % g != 0 {
        return Q::zero();
    }
    let tz = Z::from(t / g);
    let tq = Q::from(tz.clone());
    let mut acc = Q::zero();
    for (i, p) in &q.coefficients {
        acc += p.evaluate(&tz) * num_traits::pow(tq.clone(), *i);
    }
    acc
}

/// The full quasi-polynomial listed coset by coset: entry `q` holds the coefficients
/// (constant first) of the polynomial that agrees with `E(a; t)` for `t ≡ q` modulo
/// the period `lcm(a)`. Refuses periods above `MAX_COSET_PERIOD`.
pub fn coset_polynomials(knapsack: &KnapsackList) -> Result<Vec<Vec<Q>>> {
    let orig = knapsack.original();
    let period = orig.iter().fold(1u64, |acc, x| acc.lcm(x));
    if period > MAX_COSET_PERIOD {
        return Err(Error::resource("knapsack", format!("period {period} exceeds {MAX_COSET_PERIOD}")));
    }
    let full = top_coefficients(knapsack, knapsack.degree())?;
    let g = knapsack.scale();
    let gq = Q::from(Z::from(g));
    let n = knapsack.degree();
    let mut out = Vec::with_capacity(period as usize);
    for q in 0..period {
        if q % g != 0 {
            out.push(Vec::new());
            continue;
        }
        // E(a; t) = Σ E_i(t/g) (t/g)^i; the step parts depend only on the coset.
        let tz = Z::from(q / g);
        let mut coeffs: Vec<Q> = (0..=n)
            .map(|i| full.coefficients[&i].evaluate(&tz) / num_traits::pow(gq.clone(), i))
            .collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        out.push(coeffs);
    }
    Ok(out)
}

/// Formats a univariate polynomial (constant first) as `c_n*t^n + ... + c_0`.
pub fn format_univariate(coeffs: &[Q], var: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        let body = match i {
            0 => fmt_rational_short(&mag),
            _ => {
                let v = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if mag.is_one() {
                    v
                } else {
                    format!("{}*{v}", fmt_rational_short(&mag))
                }
            }
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{sign} {body}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

/// Parses the output of `format_univariate`.
pub fn parse_univariate(text: &str, var: &str) -> Result<Vec<Q>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<Q> = Vec::new();
    if s == "0" {
        return Ok(coeffs);
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') && !cur.ends_with('*') && !cur.ends_with('/') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    for (neg, body) in terms {
        if body.is_empty() {
            return Err(Error::Parse(format!("empty term in {text:?}")));
        }
        let (coef, deg) = match body.find(var) {
            None => (parse_rational(&body)?, 0usize),
            Some(pos) => {
                let c = match body[..pos].strip_suffix('*') {
                    Some(c) => parse_rational(c)?,
                    None if pos == 0 => Q::one(),
                    None => return Err(Error::Parse(format!("bad term {body:?}"))),
                };
                let rest = &body[pos + var.len()..];
                let d = match rest.strip_prefix('^') {
                    Some(e) => e.parse().map_err(|_| Error::Parse(format!("bad exponent in {body:?}")))?,
                    None if rest.is_empty() => 1,
                    None => return Err(Error::Parse(format!("bad term {body:?}"))),
                };
                (c, d)
            }
        };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, Q::zero());
        }
        coeffs[deg] += if neg { -coef } else { coef };
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}
