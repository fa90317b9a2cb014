//! Sparse multivariate polynomials stored in burst tries, and powers of linear forms.

mod format;
mod linear_forms;
mod sparse;
mod trie;

pub use format::{format_polynomial, parse_polynomial};
pub use linear_forms::{LinearForm, LinearFormSum};
pub use sparse::SparsePolynomial;
pub use trie::{BurstTrie, TrieShape, BURST_THRESHOLD};

/// All exponent vectors of length `n` with total degree at most `max_total`, in
/// graded order (by total degree, then lexicographically).
pub fn exponent_vectors(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=max_total {
        let mut level = Vec::new();
        rec(n, total, &mut Vec::with_capacity(n), &mut level);
        level.sort();
        out.extend(level);
    }
    out
}
