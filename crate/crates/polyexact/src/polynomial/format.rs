use num_rational::BigRational;

use super::sparse::SparsePolynomial;
use crate::error::{Error, Result};
use crate::scalar::{fmt_rational_short, parse_rational};

/// Writes `[[c, [e_1, ..., e_d]], ...]` with integer or `n/m` coefficients.
pub fn format_polynomial(p: &SparsePolynomial<BigRational>) -> String {
    let items: Vec<String> = p
        .terms()
        .iter()
        .map(|(e, c)| {
            let exps: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            format!("[{},[{}]]", fmt_rational_short(c), exps.join(","))
        })
        .collect();
    format!("[{}]", items.join(","))
}

/// Parses the list format written by [`format_polynomial`]. Coefficients may be quoted.
///
/// `dim` fixes the dimension; otherwise it is taken from the first term
/// (an empty list then has dimension zero).
pub fn parse_polynomial(text: &str, dim: Option<usize>) -> Result<SparsePolynomial<BigRational>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse("polynomial must be a bracketed list".into()))?;
    let mut terms = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| Error::Parse(format!("expected '[' at {rest:?}")))?;
        let (coef, after) = body
            .split_once(",[")
            .ok_or_else(|| Error::Parse(format!("expected coefficient and exponent list in {body:?}")))?;
        let (exps, after) = after
            .split_once("]]")
            .ok_or_else(|| Error::Parse(format!("unterminated term in {body:?}")))?;
        let c = parse_rational(coef)?;
        let e: Vec<u32> = if exps.is_empty() {
            Vec::new()
        } else {
            exps.split(',')
                .map(|x| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {x:?}"))))
                .collect::<Result<_>>()?
        };
        terms.push((e, c));
        rest = after.strip_prefix(',').unwrap_or(after);
        if after.starts_with(',') && rest.is_empty() {
            return Err(Error::Parse("trailing comma in polynomial".into()));
        }
    }
    let d = dim.or_else(|| terms.first().map(|(e, _)| e.len())).unwrap_or(0);
    if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != d) {
        return Err(Error::Parse(format!("monomial {e:?} does not have dimension {d}")));
    }
    Ok(SparsePolynomial::from_terms(d, terms))
}
