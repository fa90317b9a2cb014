use num_traits::Zero;

use super::{Q, Z};
use crate::scalar::{dot, to_rationals};

/// A vector `a` with `⟨a, u⟩ ≠ 0` for every ray of every cone and every forbidden
/// form. Candidates `(1, M, M^2, ...)` are tried for `M = 1, 2, ...`; each ray rules
/// out at most `d - 1` values of `M`, so the search terminates.
pub fn find_regular_vector(cones: &[Vec<Vec<Z>>], forbidden: &[Vec<Q>], d: usize) -> Vec<Q> {
    let mut forms: Vec<Vec<Q>> = cones.iter().flatten().map(|r| to_rationals(r)).collect();
    forms.extend(forbidden.iter().cloned());
    forms.retain(|f| f.iter().any(|c| !c.is_zero()));
    let mut m = 1i64;
    loop {
        let mut a = Vec::with_capacity(d);
        let mut p = Q::from(Z::from(1));
        for _ in 0..d {
            a.push(p.clone());
            p *= Q::from(Z::from(m));
        }
        if forms.iter().all(|f| !dot(f, &a).is_zero()) {
            return a;
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn zv(v: &[i64]) -> Vec<Z> {
        v.iter().map(|&x| Z::from(x)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(find_regular_vector(&[vec![zv(&[1, 0])]], &[], 2), vec![int(1), int(1)]);
        let a = find_regular_vector(&[vec![zv(&[1, 0]), zv(&[0, 1]), zv(&[1, 1])]], &[], 2);
        for u in [[1, 0], [0, 1], [1, 1]] {
            assert!(!dot(&to_rationals(&zv(&u)), &a).is_zero());
        }
        assert_eq!(find_regular_vector(&[], &[], 3), vec![int(1); 3]);
        // (1,-1) kills M = 1, (2,-1) would need M = 2, so M = 3 is chosen.
        let a = find_regular_vector(&[vec![zv(&[1, -1]), zv(&[2, -1])]], &[], 2);
        assert_eq!(a, vec![int(1), int(3)]);
        let a = find_regular_vector(&[], &[vec![int(1), int(-1)]], 2);
        assert_eq!(a, vec![int(1), int(2)]);
    }
}
