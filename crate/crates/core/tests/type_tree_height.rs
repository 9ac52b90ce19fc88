//! A ten-vertex graph of tree rank 2 carrying a type tree of height 4.
//! Then `(h-1)^t = 9 < 10 = n (t-2)!`, so the height inequality fails at
//! `t = 2` even though `h >= 2t`.

mod common;

use std::collections::BTreeMap;

use shatterlab::banseq::{solutions, type_tree_level_problem};
use shatterlab::combin::binomial_prefix_sum;
use shatterlab::typetree::{check_height_bound, tree_rank, Graph, HeightStatus, TypeTree};
use shatterlab::Caps;

fn graph() -> Graph {
    Graph::new(10, &[(0, 7), (0, 8), (0, 9), (1, 3), (2, 5), (2, 6), (3, 4), (3, 9), (4, 7)]).unwrap()
}

fn tree() -> TypeTree {
    let nodes: BTreeMap<String, usize> = [
        ("", 3),
        ("0", 0),
        ("00", 5),
        ("000", 6),
        ("001", 2),
        ("01", 8),
        ("010", 7),
        ("1", 1),
        ("10", 9),
        ("100", 4),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    TypeTree::new(nodes).unwrap()
}

#[test]
fn the_tree_is_a_spanning_type_tree_of_height_four() {
    let (g, tt) = (graph(), tree());
    assert!(tt.validate(&g).is_ok());
    assert_eq!(tt.height(), 4);
    assert_eq!(tt.len(), 10);
    assert_eq!(tt.level_counts(), vec![1, 2, 3, 4]);
}

#[test]
fn tree_rank_is_two_by_exhaustive_labeling() {
    let g = graph();
    assert!(common::has_full_type_tree(&g, 2));
    assert!(!common::has_full_type_tree(&g, 3));
    let rank = tree_rank(&g, &Caps::default()).unwrap();
    assert!(rank.exact);
    assert_eq!(rank.lower, 2);
}

#[test]
fn height_inequality_fails() {
    let report = check_height_bound(&graph(), &tree(), &Caps::default()).unwrap();
    assert_eq!(report.status, HeightStatus::Fails);
    assert_eq!(report.checks.len(), 1);
    let c = &report.checks[0];
    assert!(c.applicable);
    assert_eq!((c.lhs.as_str(), c.rhs.as_str()), ("9", "10"));
}

/// The per-level counts still respect the 2-fold ban problem bound; it is the
/// final summation step that overshoots.
#[test]
fn level_counts_respect_the_ban_problem_bound() {
    let (g, tt) = (graph(), tree());
    for len in 2..tt.height() {
        let p = type_tree_level_problem(&g, &tt, 2, len).unwrap();
        let count = solutions(&p, &Caps::default()).unwrap().len();
        assert_eq!(count, tt.level_counts()[len]);
        assert!(count as u128 <= binomial_prefix_sum(len as u64, 1));
    }
    // The level bounds 1 + l over l < 4 sum to 10 = n, but the inequality
    // estimates that sum by (h-1)^t / (t-2)! = 9.
    let total: usize = tt.level_counts().iter().sum();
    assert_eq!(total, 10);
}
