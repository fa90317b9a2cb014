use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::scalar::{int, rat};

/// (A) x2 + x4, (B) x3 + x5, (C) x1 + x3, (D) x1 + x2 + x3.
fn worked() -> Vec<Vec<usize>> {
    vec![vec![2, 4], vec![3, 5], vec![1, 3], vec![1, 2, 3]]
}

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

#[test]
fn build_worked_system() {
    let m = DlxMatrix::build(&worked()).unwrap();
    assert_eq!(m.row_count(), 4);
    // Nine variable occurrences; with the root, the ten nodes outside the row headers.
    assert_eq!(m.data_node_count(), 9);
    assert!(m.is_circular());
    assert_eq!(m.row_variables(3), vec![1, 2, 3]);
    let single = DlxMatrix::build(&[vec![1]]).unwrap();
    assert_eq!(single.data_node_count(), 1);
    assert!(DlxMatrix::build(&[vec![1, 1]]).is_err());
    let empty = DlxMatrix::build(&[vec![1], vec![]]).unwrap();
    assert_eq!(empty.empty_rows(), &[1]);
}

#[test]
fn cover_row_a() {
    let mut m = DlxMatrix::build(&worked()).unwrap();
    let before = m.links();
    m.cover(0);
    // Row A leaves the header list; x2 leaves row D, x4 occurs nowhere else.
    assert_eq!(m.live_rows(), vec![1, 2, 3]);
    assert_eq!(m.row_variables(3), vec![1, 3]);
    assert_eq!(m.row_variables(0), vec![2, 4]);
    assert!(m.is_circular());
    m.uncover(0);
    assert_eq!(m.links(), before);
}

#[test]
fn covering_last_row_empties_root() {
    let mut m = DlxMatrix::build(&[vec![1, 2]]).unwrap();
    m.cover(0);
    assert!(m.live_rows().is_empty());
    m.uncover(0);
    assert_eq!(m.live_rows(), vec![0]);
}

#[test]
fn branch_x2_contradiction_at_row_c() {
    let mut m = DlxMatrix::build(&worked()).unwrap();
    // Choose x2 from row A: cover A, then row D which also holds x2.
    m.cover(0);
    m.cover(3);
    assert_eq!(m.live_rows(), vec![1, 2]);
    assert!(m.row_variables(2).is_empty(), "row C has no nodes left");
    m.uncover(3);
    m.uncover(0);
}

#[test]
fn worked_system_solution() {
    for policy in [RowSelection::First, RowSelection::FewestNodes] {
        let mut m = DlxMatrix::build(&worked()).unwrap();
        let before = m.links();
        let (res, stats) = m.search_checked(policy);
        assert_eq!(res, SearchResult::Solution(set(&[3, 4])));
        assert_eq!(format_solution(&res), "SOLUTION x3 x4");
        assert_eq!(m.links(), before);
        assert!(stats.restore_checks > 0);
    }
    let mut m = DlxMatrix::build(&worked()).unwrap();
    // After x2 the fewest-nodes rule picks the empty row C, so only x2 is undone.
    let (_, stats) = m.search_checked(RowSelection::FewestNodes);
    assert_eq!(stats.backtracks, 1);
    // Taking rows in order visits B before C, so x5 is undone as well.
    let mut m = DlxMatrix::build(&worked()).unwrap();
    assert_eq!(m.search_checked(RowSelection::First).1.backtracks, 2);
}

#[test]
fn infeasible_systems() {
    let rows = vec![vec![1], vec![1, 2], vec![2]];
    assert!(!brute_force_feasible(&rows));
    let mut m = DlxMatrix::build(&rows).unwrap();
    let before = m.links();
    assert_eq!(m.search_checked(RowSelection::default()).0, SearchResult::Infeasible);
    assert_eq!(m.links(), before);
    let mut e = DlxMatrix::build(&[vec![1], vec![]]).unwrap();
    assert_eq!(e.search(RowSelection::default()).0, SearchResult::Infeasible);
    assert_eq!(format_solution(&SearchResult::Infeasible), "INFEASIBLE");
}

#[test]
fn no_rows_is_trivially_feasible() {
    let mut m = DlxMatrix::build(&[]).unwrap();
    assert_eq!(m.search(RowSelection::default()).0, SearchResult::Solution(BTreeSet::new()));
}

#[test]
fn set_partition_format() {
    let (rows, v) = parse_set_partition("# worked\n4 5\n2 4\nx3 x5\n1 3\n1 2 3\n").unwrap();
    assert_eq!((rows, v), (worked(), 5));
    assert_eq!(parse_set_partition("2 3\n1\n-\n").unwrap().0, vec![vec![1], vec![]]);
    assert!(parse_set_partition("2 3\n1\n").is_err());
    assert!(parse_set_partition("1 3\n4\n").is_err());
    assert!(parse_set_partition("1 3\n0\n").is_err());
    assert!(parse_set_partition("1\n1\n").is_err());
    assert!(parse_set_partition("").is_err());
}

const SAMPLE: &str = "\
OBJECTIVE
min: 2 x1 + 3 x2 - y1 + 5 y3
CONSTRAINTS
c1: x1 + y1 <= 4
c2: x2 - 2*y2 + 1/2 y3 >= -3/2
c3: x1 + x2 <= 10
PARTITION
p1: y1 + y2 = 1
p2: y2 + y3 = 1
INTEGERS
x1 y1
";

#[test]
fn milp_fix_and_reduce() {
    let milp = Milp::parse(SAMPLE).unwrap();
    assert_eq!(milp.names, vec!["y1", "y2", "y3", "x1", "x2"]);
    assert_eq!(milp.partition_rows(), &[vec![0, 1], vec![1, 2]]);
    // y1 = y3 = 1 satisfies both partition rows.
    let red = fix_and_reduce(&milp, &set(&[0, 2])).unwrap();
    assert_eq!(red.objective_offset, int(4));
    assert_eq!(red.constraints[0].rhs, int(3));
    assert_eq!(red.constraints[1].rhs, int(-2));
    assert_eq!(red.constraints[2].rhs, int(10));
    assert_eq!(red.integers, vec!["x1"]);
    let text = red.to_string();
    assert!(text.contains("OBJECTIVE\nmin: 2 x1 + 3 x2\nCONSTRAINTS\nc1: x1 <= 3\nc2: x2 >= -2\nc3: x1 + x2 <= 10\nINTEGERS\nx1\n"));
    // The reduced text parses again.
    let again = Milp::parse(&text).unwrap();
    assert_eq!(again.names, vec!["x1", "x2"]);
    assert!(again.partition.is_empty());
    // y0 violating Cy = 1 is a contract error.
    assert!(fix_and_reduce(&milp, &set(&[0, 1])).is_err());
    assert!(fix_and_reduce(&milp, &set(&[0])).is_err());
    assert!(fix_and_reduce(&milp, &set(&[3])).is_err());
    // The search path finds y2 = 1 or y1 = y3 = 1, both valid.
    let solved = solve_and_reduce(&milp, RowSelection::default()).unwrap();
    assert_eq!(solved.constraints.len(), 3);
}

#[test]
fn milp_trivial_cases() {
    // B = 0: constraints unchanged.
    let m = Milp::parse("OBJECTIVE\nmin: x + y\nCONSTRAINTS\nx <= 7/3\nPARTITION\ny = 1\n").unwrap();
    let r = fix_and_reduce(&m, &set(&[0])).unwrap();
    assert_eq!(r.constraints[0].rhs, rat(7, 3));
    assert_eq!(r.constraints[0].coeffs, vec![int(1)]);
    // B = identity with y0 = e_1: the first right-hand side drops by one.
    let m = Milp::parse(
        "OBJECTIVE\nmin: x\nCONSTRAINTS\nx + y1 <= 5\nx + y2 <= 5\nPARTITION\ny1 + y2 = 1\n",
    )
    .unwrap();
    let r = fix_and_reduce(&m, &set(&[0])).unwrap();
    assert_eq!((r.constraints[0].rhs.clone(), r.constraints[1].rhs.clone()), (int(4), int(5)));
    // An infeasible partition block emits nothing.
    let m = Milp::parse("OBJECTIVE\nmin: x\nPARTITION\ny1 = 1\ny1 + y2 = 1\ny2 = 1\n").unwrap();
    assert!(matches!(solve_and_reduce(&m, RowSelection::First), Err(Error::Infeasible { .. })));
    assert!(Milp::parse("OBJECTIVE\nmax: x\n").is_err());
    assert!(Milp::parse("OBJECTIVE\nmin: x\nPARTITION\n2 y = 1\n").is_err());
    assert!(Milp::parse("x <= 1\n").is_err());
}

fn random_system() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (1usize..=12).prop_flat_map(|nv| {
        proptest::collection::vec(proptest::collection::btree_set(1..=nv, 1..=nv.min(4)), 0..=8)
            .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().collect()).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_enumeration(rows in random_system()) {
        let feasible = brute_force_feasible(&rows);
        let mut verdicts = Vec::new();
        for policy in [RowSelection::First, RowSelection::FewestNodes] {
            let mut m = DlxMatrix::build(&rows).unwrap();
            let before = m.links();
            let (res, _) = m.search_checked(policy);
            prop_assert_eq!(&m.links(), &before);
            if let SearchResult::Solution(s) = &res {
                prop_assert!(is_exact_cover(&rows, s));
            }
            verdicts.push(matches!(res, SearchResult::Solution(_)));
        }
        prop_assert_eq!(verdicts[0], feasible);
        prop_assert_eq!(verdicts[1], feasible);
    }

    #[test]
    fn cover_uncover_restores(rows in random_system(), picks in proptest::collection::vec(0usize..8, 1..5)) {
        let mut m = DlxMatrix::build(&rows).unwrap();
        let before = m.links();
        let mut covered = Vec::new();
        for p in picks {
            let live = m.live_rows();
            if live.is_empty() {
                break;
            }
            let r = live[p % live.len()];
            m.cover(r);
            prop_assert!(m.is_circular());
            covered.push(r);
        }
        while let Some(r) = covered.pop() {
            m.uncover(r);
        }
        prop_assert_eq!(m.links(), before);
    }
}
