//! Fixing the set-partition variables of a MILP to a dancing-links solution.
//!
//! Text format, one section per header line, `#` starts a comment line:
//!
//! ```text
//! OBJECTIVE
//! min: 2 x1 + 3 x2 - y1
//! CONSTRAINTS
//! c1: x1 + y1 <= 4
//! c2: x2 - 2*y2 >= -3/2
//! PARTITION
//! p1: y1 + y2 = 1
//! INTEGERS
//! x1
//! ```
//!
//! The variables named in `PARTITION` are the binary `y`; every other variable is
//! an `x`. A reduced MILP is written in the same format without `PARTITION`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{DlxMatrix, RowSelection, SearchResult};
use crate::error::{Error, Result};
use crate::scalar::{fmt_rational_short, parse_rational};

type Q = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// One row `Σ coeffs[v] · v  rel  rhs`, with coefficients indexed by variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub name: Option<String>,
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

/// A parsed MILP `min c_1ᵀx + c_2ᵀy` s.t. `Ax + By rel b`, `Cy = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Milp {
    pub names: Vec<String>,
    pub is_partition_var: Vec<bool>,
    pub objective: Vec<Q>,
    pub constraints: Vec<LinearConstraint>,
    /// Rows of `C`, as variable indices.
    pub partition: Vec<Vec<usize>>,
    pub integers: BTreeSet<usize>,
}

/// The MILP left after fixing `y`: `min c_1ᵀx` s.t. `Ax rel b - B y0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMilp {
    pub names: Vec<String>,
    pub objective: Vec<Q>,
    /// `c_2ᵀ y0`, dropped from the objective.
    pub objective_offset: Q,
    pub constraints: Vec<LinearConstraint>,
    pub integers: Vec<String>,
    /// The fixed partition variables and their values.
    pub fixed: Vec<(String, bool)>,
}

#[derive(PartialEq)]
enum Section {
    Objective,
    Constraints,
    Partition,
    Integers,
}

impl Milp {
    pub fn parse(text: &str) -> Result<Milp> {
        let mut section = None;
        let mut objective_text = None;
        let mut raw_constraints = Vec::new();
        let mut raw_partition = Vec::new();
        let mut integer_names = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            match line.to_ascii_uppercase().as_str() {
                "OBJECTIVE" => section = Some(Section::Objective),
                "CONSTRAINTS" => section = Some(Section::Constraints),
                "PARTITION" => section = Some(Section::Partition),
                "INTEGERS" => section = Some(Section::Integers),
                _ => match section {
                    None => return Err(Error::Parse(format!("line outside any section: {line:?}"))),
                    Some(Section::Objective) => {
                        if objective_text.replace(line).is_some() {
                            return Err(Error::Parse("objective given twice".into()));
                        }
                    }
                    Some(Section::Constraints) => raw_constraints.push(parse_row(line)?),
                    Some(Section::Partition) => raw_partition.push(parse_row(line)?),
                    Some(Section::Integers) => integer_names.extend(line.split_whitespace().map(str::to_string)),
                },
            }
        }
        let objective_text = objective_text.ok_or_else(|| Error::Parse("missing OBJECTIVE".into()))?;
        let objective_terms = parse_objective(objective_text)?;

        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut intern = |n: &str, names: &mut Vec<String>| -> usize {
            *index.entry(n.to_string()).or_insert_with(|| {
                names.push(n.to_string());
                names.len() - 1
            })
        };
        let mut partition = Vec::new();
        for row in &raw_partition {
            if row.relation != Relation::Eq || !row.rhs.is_one() {
                return Err(Error::Parse("partition rows must read '... = 1'".into()));
            }
            let mut ids = Vec::new();
            for (n, c) in &row.terms {
                if !c.is_one() {
                    return Err(Error::Parse(format!("partition coefficient of {n} must be 1")));
                }
                let id = intern(n, &mut names);
                if ids.contains(&id) {
                    return Err(Error::Parse(format!("{n} repeated in a partition row")));
                }
                ids.push(id);
            }
            partition.push(ids);
        }
        let y_count = names.len();
        for (n, _) in objective_terms.iter().chain(raw_constraints.iter().flat_map(|r| r.terms.iter())) {
            intern(n, &mut names);
        }
        let mut integers = BTreeSet::new();
        for n in &integer_names {
            integers.insert(intern(n, &mut names));
        }
        let nv = names.len();
        let dense = |terms: &[(String, Q)], names: &[String]| -> Vec<Q> {
            let mut v = vec![Q::zero(); nv];
            for (n, c) in terms {
                let i = names.iter().position(|m| m == n).expect("interned");
                v[i] += c;
            }
            v
        };
        let objective = dense(&objective_terms, &names);
        let constraints = raw_constraints
            .iter()
            .map(|r| LinearConstraint {
                name: r.name.clone(),
                coeffs: dense(&r.terms, &names),
                relation: r.relation,
                rhs: r.rhs.clone(),
            })
            .collect();
        let is_partition_var = (0..nv).map(|i| i < y_count).collect();
        Ok(Milp { names, is_partition_var, objective, constraints, partition, integers })
    }

    /// The rows of `C` as input for `DlxMatrix::build`, over variable indices.
    pub fn partition_rows(&self) -> &[Vec<usize>] {
        &self.partition
    }
}

/// Substitutes `y = y0` (the partition variables in `y0` are 1, the rest 0).
pub fn fix_and_reduce(milp: &Milp, y0: &BTreeSet<usize>) -> Result<ReducedMilp> {
    if let Some(&v) = y0.iter().find(|&&v| v >= milp.names.len() || !milp.is_partition_var[v]) {
        return Err(Error::InvalidInput(format!("variable {v} is not a partition variable")));
    }
    for (i, row) in milp.partition.iter().enumerate() {
        let ones = row.iter().filter(|v| y0.contains(v)).count();
        if ones != 1 {
            return Err(Error::InvalidInput(format!("y0 sets {ones} variables of partition row {} to 1", i + 1)));
        }
    }
    let xs: Vec<usize> = (0..milp.names.len()).filter(|&i| !milp.is_partition_var[i]).collect();
    let objective_offset = y0.iter().fold(Q::zero(), |acc, &v| acc + &milp.objective[v]);
    let constraints = milp
        .constraints
        .iter()
        .map(|c| LinearConstraint {
            name: c.name.clone(),
            coeffs: xs.iter().map(|&i| c.coeffs[i].clone()).collect(),
            relation: c.relation,
            rhs: y0.iter().fold(c.rhs.clone(), |acc, &v| acc - &c.coeffs[v]),
        })
        .collect();
    Ok(ReducedMilp {
        names: xs.iter().map(|&i| milp.names[i].clone()).collect(),
        objective: xs.iter().map(|&i| milp.objective[i].clone()).collect(),
        objective_offset,
        constraints,
        integers: milp.integers.iter().filter(|&&i| !milp.is_partition_var[i]).map(|&i| milp.names[i].clone()).collect(),
        fixed: (0..milp.names.len())
            .filter(|&i| milp.is_partition_var[i])
            .map(|i| (milp.names[i].clone(), y0.contains(&i)))
            .collect(),
    })
}

/// Solves `Cy = 1` with dancing links and fixes `y` to the solution found. An
/// infeasible partition block is reported as an error and nothing is emitted.
pub fn solve_and_reduce(milp: &Milp, policy: RowSelection) -> Result<ReducedMilp> {
    let mut m = DlxMatrix::build(&milp.partition)?;
    match m.search(policy).0 {
        SearchResult::Solution(y0) => fix_and_reduce(milp, &y0),
        SearchResult::Infeasible => Err(Error::infeasible("dancing_links", "the partition block Cy = 1 has no solution")),
    }
}

impl fmt::Display for ReducedMilp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fixed: Vec<String> = self.fixed.iter().map(|(n, v)| format!("{n}={}", *v as u8)).collect();
        writeln!(f, "# fixed: {}", fixed.join(" "))?;
        writeln!(f, "# objective offset: {}", fmt_rational_short(&self.objective_offset))?;
        writeln!(f, "OBJECTIVE")?;
        writeln!(f, "min: {}", format_linear(&self.objective, &self.names))?;
        writeln!(f, "CONSTRAINTS")?;
        for c in &self.constraints {
            if let Some(n) = &c.name {
                write!(f, "{n}: ")?;
            }
            writeln!(f, "{} {} {}", format_linear(&c.coeffs, &self.names), c.relation.symbol(), fmt_rational_short(&c.rhs))?;
        }
        writeln!(f, "INTEGERS")?;
        if !self.integers.is_empty() {
            writeln!(f, "{}", self.integers.join(" "))?;
        }
        Ok(())
    }
}

fn format_linear(coeffs: &[Q], names: &[String]) -> String {
    let mut out = String::new();
    for (c, n) in coeffs.iter().zip(names).filter(|(c, _)| !c.is_zero()) {
        let mag = c.abs();
        let term = if mag.is_one() { n.clone() } else { format!("{} {n}", fmt_rational_short(&mag)) };
        match (out.is_empty(), c.is_negative()) {
            (true, false) => out.push_str(&term),
            (true, true) => out.push_str(&format!("-{term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
            (false, true) => out.push_str(&format!(" - {term}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

struct RawRow {
    name: Option<String>,
    terms: Vec<(String, Q)>,
    relation: Relation,
    rhs: Q,
}

fn split_label(line: &str) -> (Option<String>, &str) {
    match line.split_once(':') {
        Some((l, rest)) if is_name(l.trim()) => (Some(l.trim().to_string()), rest),
        _ => (None, line),
    }
}

fn parse_objective(line: &str) -> Result<Vec<(String, Q)>> {
    let (label, rest) = split_label(line);
    match label.as_deref() {
        None | Some("min") | Some("minimize") => parse_linear(rest),
        Some(other) => Err(Error::Parse(format!("objective must be minimized, got {other:?}"))),
    }
}

fn parse_row(line: &str) -> Result<RawRow> {
    let (name, rest) = split_label(line);
    let (lhs, relation, rhs) = if let Some((l, r)) = rest.split_once("<=") {
        (l, Relation::Le, r)
    } else if let Some((l, r)) = rest.split_once(">=") {
        (l, Relation::Ge, r)
    } else if let Some((l, r)) = rest.split_once('=') {
        (l, Relation::Eq, r)
    } else {
        return Err(Error::Parse(format!("no relation in {line:?}")));
    };
    Ok(RawRow { name, terms: parse_linear(lhs)?, relation, rhs: parse_rational(rhs.trim())? })
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

/// Parses `3/2 x1 - x2 + 4*y` into `(name, coefficient)` pairs.
fn parse_linear(expr: &str) -> Result<Vec<(String, Q)>> {
    if expr.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut raw = Vec::new();
    let mut negative = false;
    let mut buf = String::new();
    for ch in expr.chars() {
        if ch == '+' || ch == '-' {
            if !buf.trim().is_empty() {
                raw.push((negative, std::mem::take(&mut buf)));
                negative = false;
            }
            negative ^= ch == '-';
        } else {
            buf.push(ch);
        }
    }
    if !buf.trim().is_empty() {
        raw.push((negative, buf));
    } else if negative || raw.is_empty() {
        return Err(Error::Parse(format!("incomplete expression {expr:?}")));
    }
    raw.into_iter()
        .map(|(neg, term)| {
            let parts: Vec<&str> = term.split(|c: char| c.is_whitespace() || c == '*').filter(|p| !p.is_empty()).collect();
            let (coef, name) = match parts[..] {
                [n] if is_name(n) => (Q::one(), n),
                [c, n] if is_name(n) => (parse_rational(c)?, n),
                _ => return Err(Error::Parse(format!("bad term {:?}", term.trim()))),
            };
            Ok((name.to_string(), if neg { -coef } else { coef }))
        })
        .collect()
}
