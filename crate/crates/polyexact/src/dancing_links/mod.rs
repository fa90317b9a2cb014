//! Exact cover for set-partition systems `Σ_{j ∈ row} x_j = 1` with dancing links.
//!
//! Equations are the rows. Their headers form a circular vertical list anchored at
//! the root, and each header starts a circular horizontal list of the row's data
//! nodes. Nodes of the same variable form a circular vertical list without header.
//! `COVER(r)` splices row `r` out of the header list and splices every other
//! occurrence of r's variables out of its row; `UNCOVER` undoes this in reverse.

mod milp;

#[cfg(test)]
mod tests;

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub use milp::{fix_and_reduce, solve_and_reduce, LinearConstraint, Milp, ReducedMilp, Relation};

const ROOT: usize = 0;

/// How `search` picks the next row from the header list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowSelection {
    /// The first live row (`D[root]`).
    First,
    /// The live row with the fewest live nodes, ties by lowest row id.
    #[default]
    FewestNodes,
}

/// Counters gathered by `search`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Calls of the recursive search procedure.
    pub nodes: usize,
    /// Variable choices that were undone.
    pub backtracks: usize,
    /// Snapshot comparisons made after undoing a choice (checked searches only).
    pub restore_checks: usize,
}

/// Outcome of `search`: the variables set to 1, or infeasibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Solution(BTreeSet<usize>),
    Infeasible,
}

/// The link arrays of a dancing-links matrix over an arena of nodes. Node 0 is the
/// root, nodes `1..=rows` are row headers, the rest are data nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlxMatrix {
    l: Vec<usize>,
    r: Vec<usize>,
    u: Vec<usize>,
    d: Vec<usize>,
    h: Vec<usize>,
    var: Vec<usize>,
    rows: usize,
    empty_rows: Vec<usize>,
    cover_stack: Vec<usize>,
}

/// The link state, for bit-exact restore comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Links {
    pub l: Vec<usize>,
    pub r: Vec<usize>,
    pub u: Vec<usize>,
    pub d: Vec<usize>,
}

impl DlxMatrix {
    /// Builds the linked structure. Rows with no variable are accepted and
    /// recorded, since they make the system infeasible at once; a variable repeated
    /// within a row is rejected because every coefficient is 1.
    pub fn build(rows: &[Vec<usize>]) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            let set: BTreeSet<&usize> = row.iter().collect();
            if set.len() != row.len() {
                return Err(Error::InvalidInput(format!("row {i} repeats a variable")));
            }
        }
        let nrows = rows.len();
        let total = 1 + nrows + rows.iter().map(Vec::len).sum::<usize>();
        let mut m = DlxMatrix {
            l: (0..total).collect(),
            r: (0..total).collect(),
            u: (0..total).collect(),
            d: (0..total).collect(),
            h: vec![0; total],
            var: vec![usize::MAX; total],
            rows: nrows,
            empty_rows: Vec::new(),
            cover_stack: Vec::new(),
        };
        // Header column: root, 1, 2, ..., nrows.
        for i in 0..=nrows {
            m.d[i] = (i + 1) % (nrows + 1);
            m.u[(i + 1) % (nrows + 1)] = i;
        }
        let mut last_of_var: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
        let mut next = nrows + 1;
        for (i, row) in rows.iter().enumerate() {
            let header = i + 1;
            if row.is_empty() {
                m.empty_rows.push(i);
            }
            let mut prev = header;
            for &v in row {
                let n = next;
                next += 1;
                m.h[n] = header;
                m.var[n] = v;
                // Horizontal: insert after prev.
                m.l[n] = prev;
                m.r[n] = header;
                m.r[prev] = n;
                m.l[header] = n;
                prev = n;
                // Vertical ring of the variable, in row order.
                match last_of_var.get(&v) {
                    Some(&above) => {
                        let first = m.d[above];
                        m.u[n] = above;
                        m.d[n] = first;
                        m.d[above] = n;
                        m.u[first] = n;
                    }
                    None => {
                        m.u[n] = n;
                        m.d[n] = n;
                    }
                }
                last_of_var.insert(v, n);
            }
        }
        Ok(m)
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn data_node_count(&self) -> usize {
        self.l.len() - 1 - self.rows
    }

    /// Rows (0-based) that had no variable at all.
    pub fn empty_rows(&self) -> &[usize] {
        &self.empty_rows
    }

    pub fn links(&self) -> Links {
        Links { l: self.l.clone(), r: self.r.clone(), u: self.u.clone(), d: self.d.clone() }
    }

    /// Live rows (0-based) in header-list order.
    pub fn live_rows(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = self.d[ROOT];
        while i != ROOT {
            out.push(i - 1);
            i = self.d[i];
        }
        out
    }

    /// Live variables of a row, in order.
    pub fn row_variables(&self, row: usize) -> Vec<usize> {
        let header = row + 1;
        let mut out = Vec::new();
        let mut i = self.r[header];
        while i != header {
            out.push(self.var[i]);
            i = self.r[i];
        }
        out
    }

    /// True when following `R` (and `L`) from every live data node of every live
    /// row returns to the node.
    pub fn is_circular(&self) -> bool {
        let limit = self.l.len() + 1;
        let ring = |start: usize, next: &Vec<usize>| {
            let mut i = next[start];
            for _ in 0..limit {
                if i == start {
                    return true;
                }
                i = next[i];
            }
            false
        };
        if !ring(ROOT, &self.d) || !ring(ROOT, &self.u) {
            return false;
        }
        self.live_rows().iter().all(|&row| ring(row + 1, &self.r) && ring(row + 1, &self.l))
    }

    /// `COVER` of a live row (0-based). Must be paired with `uncover` in LIFO order.
    pub fn cover(&mut self, row: usize) {
        self.cover_stack.push(row);
        self.cover_node(row + 1);
    }

    /// `UNCOVER` of the most recently covered row.
    pub fn uncover(&mut self, row: usize) {
        let top = self.cover_stack.pop();
        debug_assert_eq!(top, Some(row), "uncover must undo the most recent cover");
        self.uncover_node(row + 1);
    }

    fn cover_node(&mut self, n: usize) {
        let (un, dn) = (self.u[n], self.d[n]);
        self.d[un] = dn;
        self.u[dn] = un;
        let mut i = self.r[n];
        while i != n {
            let mut j = self.u[i];
            while j != i {
                let (lj, rj) = (self.l[j], self.r[j]);
                self.l[rj] = lj;
                self.r[lj] = rj;
                j = self.u[j];
            }
            i = self.r[i];
        }
    }

    fn uncover_node(&mut self, n: usize) {
        let mut i = self.l[n];
        while i != n {
            let mut j = self.d[i];
            while j != i {
                let (lj, rj) = (self.l[j], self.r[j]);
                self.l[rj] = j;
                self.r[lj] = j;
                j = self.d[j];
            }
            i = self.l[i];
        }
        let (un, dn) = (self.u[n], self.d[n]);
        self.d[un] = n;
        self.u[dn] = n;
    }

    fn select(&self, policy: RowSelection) -> usize {
        match policy {
            RowSelection::First => self.d[ROOT],
            RowSelection::FewestNodes => {
                let mut best = self.d[ROOT];
                let mut best_len = usize::MAX;
                let mut i = self.d[ROOT];
                while i != ROOT {
                    let mut len = 0;
                    let mut j = self.r[i];
                    while j != i && len < best_len {
                        len += 1;
                        j = self.r[j];
                    }
                    // Header order is row order, so ties keep the lowest row id.
                    if len < best_len {
                        best_len = len;
                        best = i;
                    }
                    i = self.d[i];
                }
                best
            }
        }
    }

    /// Finds a 0/1 solution in which every row sums to exactly 1. The matrix is
    /// returned to its initial links before this returns.
    pub fn search(&mut self, policy: RowSelection) -> (SearchResult, SearchStats) {
        self.run(policy, false)
    }

    /// As `search`, also comparing a snapshot of all links before each variable
    /// choice with the links after the choice is undone.
    pub fn search_checked(&mut self, policy: RowSelection) -> (SearchResult, SearchStats) {
        self.run(policy, true)
    }

    fn run(&mut self, policy: RowSelection, check: bool) -> (SearchResult, SearchStats) {
        let mut stats = SearchStats::default();
        if !self.empty_rows.is_empty() {
            return (SearchResult::Infeasible, stats);
        }
        let mut stack = Vec::new();
        let found = self.search_rec(policy, check, &mut stack, &mut stats);
        debug_assert!(self.cover_stack.is_empty());
        match found {
            Some(sol) => (SearchResult::Solution(sol), stats),
            None => (SearchResult::Infeasible, stats),
        }
    }

    fn search_rec(
        &mut self,
        policy: RowSelection,
        check: bool,
        stack: &mut Vec<usize>,
        stats: &mut SearchStats,
    ) -> Option<BTreeSet<usize>> {
        stats.nodes += 1;
        if self.d[ROOT] == ROOT {
            return Some(stack.iter().map(|&n| self.var[n]).collect());
        }
        let r = self.select(policy);
        self.cover(r - 1);
        let mut result = None;
        let mut n = self.r[r];
        while n != r {
            let snapshot = check.then(|| self.links());
            stack.push(n);
            let mut j = self.u[n];
            while j != n {
                self.cover(self.h[j] - 1);
                j = self.u[j];
            }
            result = self.search_rec(policy, check, stack, stats);
            let n_popped = stack.pop().expect("stack holds the current choice");
            let mut j = self.d[n_popped];
            while j != n_popped {
                self.uncover(self.h[j] - 1);
                j = self.d[j];
            }
            if let Some(before) = snapshot {
                stats.restore_checks += 1;
                assert_eq!(before, self.links(), "uncover did not restore the links");
            }
            if result.is_some() {
                break;
            }
            stats.backtracks += 1;
            n = self.r[n];
        }
        self.uncover(r - 1);
        result
    }
}

/// Exhaustive check over all `2^n` assignments of the variables that occur.
pub fn brute_force_feasible(rows: &[Vec<usize>]) -> bool {
    let vars: Vec<usize> = rows.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    assert!(vars.len() <= 24, "brute force limited to 24 variables");
    (0u32..1 << vars.len()).any(|mask| {
        rows.iter().all(|row| {
            row.iter().filter(|v| mask >> vars.iter().position(|w| w == *v).unwrap() & 1 == 1).count() == 1
        })
    })
}

/// True when `solution` sets exactly one variable of every row.
pub fn is_exact_cover(rows: &[Vec<usize>], solution: &BTreeSet<usize>) -> bool {
    rows.iter().all(|row| row.iter().filter(|v| solution.contains(v)).count() == 1)
}

/// Parses the set-partition format: a line `R V`, then `R` lines listing the
/// variable ids (1..=V, an optional `x` prefix is allowed) of each row. A row with
/// no variables is written `-`. Lines starting with `#` are ignored.
pub fn parse_set_partition(text: &str) -> Result<(Vec<Vec<usize>>, usize)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty set-partition file".into()))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
        .collect::<Result<_>>()?;
    let [r, v] = nums[..] else {
        return Err(Error::Parse(format!("header must be 'R V', got {header:?}")));
    };
    let mut rows = Vec::with_capacity(r);
    for line in lines {
        if line == "-" {
            rows.push(Vec::new());
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                let id: usize = t
                    .trim_start_matches('x')
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable {t:?}")))?;
                if id == 0 || id > v {
                    return Err(Error::Parse(format!("variable {t} outside 1..={v}")));
                }
                Ok(id)
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.len() != r {
        return Err(Error::Parse(format!("expected {r} rows, found {}", rows.len())));
    }
    Ok((rows, v))
}

/// Formats a solution as `SOLUTION x3 x4`.
pub fn format_solution(result: &SearchResult) -> String {
    match result {
        SearchResult::Solution(s) => {
            let vars: Vec<String> = s.iter().map(|v| format!("x{v}")).collect();
            if vars.is_empty() {
                "SOLUTION".into()
            } else {
                format!("SOLUTION {}", vars.join(" "))
            }
        }
        SearchResult::Infeasible => "INFEASIBLE".into(),
    }
}
