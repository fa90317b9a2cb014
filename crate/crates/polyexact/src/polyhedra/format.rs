use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Polytope, Q, Z};
use crate::error::{Error, Result};
use crate::scalar::parse_rational;

/// Parses a LattE-style H-representation: a header `m d+1` followed by `m` rows
/// `b -a_1 ... -a_d`, each encoding `b - a·x ≥ 0`. Rational entries are accepted.
pub fn parse_hrep(text: &str) -> Result<Polytope> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty H-representation".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad header token '{t}'"))))
        .collect::<Result<_>>()?;
    if dims.len() != 2 || dims[1] < 2 {
        return Err(Error::Parse(format!("header must be 'm d+1', got '{header}'")));
    }
    let (m, d) = (dims[0], dims[1] - 1);
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for i in 0..m {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("expected {m} rows, found {i}")))?;
        let vals: Vec<Q> = line.split_whitespace().map(parse_rational).collect::<Result<_>>()?;
        if vals.len() != d + 1 {
            return Err(Error::Parse(format!("row {} has {} entries, expected {}", i + 1, vals.len(), d + 1)));
        }
        b.push(vals[0].clone());
        a.push(vals[1..].iter().map(|x| -x).collect());
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("unexpected trailing line '{extra}'")));
    }
    Polytope::from_hrep(a, b)
}

/// Writes the H-representation in the format read by [`parse_hrep`], scaling each
/// row to integers.
pub fn format_hrep(p: &Polytope) -> String {
    let mut out = format!("{} {}\n", p.a().len(), p.dim() + 1);
    for (row, bi) in p.a().iter().zip(p.b()) {
        let mut vals: Vec<Q> = vec![bi.clone()];
        vals.extend(row.iter().map(|x| -x));
        let l = vals.iter().fold(Z::one(), |l, v| l.lcm(v.denom()));
        let ints: Vec<Z> = vals.iter().map(|v| (v * Q::from(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(Z::zero(), |g, v| g.gcd(v));
        let g = if g.is_zero() { Z::one() } else { g };
        let toks: Vec<String> = ints.iter().map(|v| (v / &g).to_string()).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}
