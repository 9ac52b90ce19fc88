//! Property tests for the stated invariants of every module.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shatterlab::banseq::{
    banned_count, check_counting_inequality, from_element_tree, from_type_tree, from_vc, is_hereditary,
    is_independent, random_problem, reduce_hat, reduce_prime, solutions, type_tree_level_problem, BanProblem,
    BanRule, BanTable, Shape,
};
use shatterlab::combin::{binomial, binomial_prefix_sum};
use shatterlab::dims::{
    count_children_dropping, op_rank, op_shatter, thicket_dimension, thicket_shatter, vc_dimension, ElementTree,
    RankValue,
};
use shatterlab::formats;
use shatterlab::setsystem::geometry::{line_arrangement_cells, random_general_lines, region_count_general_position};
use shatterlab::thicketvc::{exact_expectation, ProbSpace, TestTree};
use shatterlab::typetree::{
    build_type_tree, build_type_tree_shuffled, extract_clique_or_independent, tree_rank, Graph,
};
use shatterlab::{rational, Caps, SetSystem};

fn family(max_universe: usize, max_sets: usize) -> impl Strategy<Value = SetSystem> {
    (1..=max_universe).prop_flat_map(move |u| {
        prop::collection::vec(0u128..(1 << u), 0..=max_sets)
            .prop_map(move |sets| SetSystem::new(u, sets).unwrap())
    })
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..1.0, any::<u64>())
        .prop_map(|(n, p, seed)| Graph::random(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap())
}

fn problem(max_n: usize, max_k: usize, js: &'static [usize]) -> impl Strategy<Value = BanProblem> {
    (1..=max_n, 1..=max_k, prop::sample::select(js), 0.0f64..0.8, any::<u64>()).prop_map(
        |(n, k, j, density, seed)| {
            let shape = Shape::new(n, k.min(n), j).unwrap();
            random_problem(shape, density, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
        },
    )
}

fn caps() -> Caps {
    Caps::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    // ---- set systems ----

    #[test]
    fn projection_composes(f in family(6, 20), keep in any::<u8>(), inner in any::<u8>()) {
        let y: Vec<usize> = (0..f.universe()).filter(|i| keep >> i & 1 == 1).collect();
        let y2: Vec<usize> = y.iter().copied().enumerate().filter(|(p, _)| inner >> p & 1 == 1).map(|(_, x)| x).collect();
        let positions: Vec<usize> = (0..y.len()).filter(|p| inner >> p & 1 == 1).collect();
        let twice = f.project(&y).unwrap().project(&positions).unwrap();
        prop_assert_eq!(twice, f.project(&y2).unwrap());
    }

    #[test]
    fn dual_is_no_larger_than_universe(f in family(6, 20)) {
        prop_assert!(f.dual().unwrap().len() <= f.universe());
    }

    #[test]
    fn children_partition(f in family(6, 20), xs_mask in 1u8..64) {
        let xs: Vec<usize> = (0..f.universe()).filter(|i| xs_mask >> i & 1 == 1).collect();
        prop_assume!(!xs.is_empty() && xs.len() <= 3);
        let total: usize = (0..1u32 << xs.len())
            .map(|c| {
                let sigma: Vec<bool> = (0..xs.len()).map(|i| c >> i & 1 == 1).collect();
                f.child(&xs, &sigma).unwrap().len()
            })
            .sum();
        prop_assert_eq!(total, f.len());
    }

    #[test]
    fn random_lines_meet_region_formula(s in 0usize..=8, seed in any::<u64>()) {
        let lines = random_general_lines(s, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(line_arrangement_cells(&lines).unwrap(), region_count_general_position(2, s));
    }

    #[test]
    fn set_system_json_round_trips(f in family(8, 20)) {
        let text = formats::set_system_to_json(&f);
        prop_assert_eq!(formats::parse_set_system(&text).unwrap(), f);
    }

    // ---- dimensions ----

    #[test]
    fn thicket_dominates_vc(f in family(6, 24)) {
        prop_assume!(!f.is_empty());
        prop_assert!(thicket_dimension(&f) >= vc_dimension(&f, &caps()).unwrap());
    }

    #[test]
    fn op_one_is_thicket(f in family(6, 24)) {
        prop_assert_eq!(op_rank(&f, 1, &caps()).unwrap(), thicket_dimension(&f));
    }

    #[test]
    fn op_rank_zero_iff_small_vc(f in family(5, 24), r in 1usize..=3) {
        let zero = op_rank(&f, r, &caps()).unwrap() == RankValue::Finite(0);
        let vc = vc_dimension(&f, &caps()).unwrap();
        prop_assert_eq!(zero, !f.is_empty() && vc.as_i64() < r as i64);
    }

    #[test]
    fn op_rank_monotone_in_family(f in family(5, 24), keep in any::<u32>(), s in 1usize..=3) {
        let mut i = 0;
        let sub = f.filter(|_| { i += 1; keep >> (i % 32) & 1 == 1 });
        prop_assert!(op_rank(&sub, s, &caps()).unwrap() <= op_rank(&f, s, &caps()).unwrap());
    }

    #[test]
    fn shatter_functions_grow_and_stay_bounded(f in family(4, 12), s in 1usize..=2) {
        let mut prev_rho = 0;
        let mut prev_psi = 0;
        for n in 0..=4usize {
            let rho = thicket_shatter(&f, n);
            let psi = op_shatter(&f, s, n, &caps()).unwrap();
            prop_assert!(rho >= prev_rho && rho <= 1 << n);
            prop_assert!(psi >= prev_psi && psi <= 1 << (s * n));
            prev_rho = rho;
            prev_psi = psi;
        }
    }

    #[test]
    fn enough_children_drop_rank(f in family(5, 24), xs_mask in 1u8..32, r in 1usize..=2, l in 1u32..=2) {
        prop_assume!(!f.is_empty());
        let xs: Vec<usize> = (0..f.universe()).filter(|i| xs_mask >> i & 1 == 1).collect();
        prop_assume!(!xs.is_empty() && xs.len() <= 4);
        let s = xs.len() as u64;
        let need = (1u128 << s) as i128 - binomial_prefix_sum(s, l as i64 * r as i64 - 1) as i128;
        let got = count_children_dropping(&f, &xs, r, l, &caps()).unwrap() as i128;
        prop_assert!(got >= need, "got {} need {}", got, need);
    }

    // ---- ban problems ----

    #[test]
    fn solutions_and_banned_partition(f in problem(7, 4, &[2, 3])) {
        let sh = f.shape();
        let sols = solutions(&f, &caps()).unwrap();
        prop_assert_eq!(sols.len() as u128 + sols.banned, sh.sequence_count());
        prop_assert!(sols.len() as u128 <= sh.trivial_upper_bound());
    }

    #[test]
    fn counting_inequality(f in problem(7, 4, &[2, 3])) {
        prop_assume!(f.shape().k >= 2);
        let report = check_counting_inequality(&f, &caps()).unwrap();
        prop_assert!(report.holds);
        prop_assert_eq!(report.banned_hat, banned_count(&reduce_hat(&f).unwrap(), &caps()).unwrap());
        if f.shape().k < f.shape().n {
            prop_assert_eq!(report.banned_prime, banned_count(&reduce_prime(&f).unwrap(), &caps()).unwrap());
        }
    }

    #[test]
    fn hereditary_problems_meet_the_bound(f in problem(6, 3, &[2, 3])) {
        let sh = f.shape();
        let hereditary = is_hereditary(&f, &caps()).unwrap().hereditary;
        if is_independent(&f, &caps()).unwrap() {
            prop_assert!(hereditary);
        }
        if hereditary {
            prop_assert!(solutions(&f, &caps()).unwrap().len() as u128 <= sh.hereditary_bound());
        }
    }

    #[test]
    fn ban_table_json_round_trips(f in problem(5, 3, &[2, 3, 4])) {
        let text = formats::ban_problem_to_json(&f).unwrap();
        let back = formats::parse_ban_problem(&text, &caps()).unwrap();
        prop_assert_eq!(back.to_table().unwrap(), f.to_table().unwrap());
    }

    #[test]
    fn vc_problem_admits_every_trace(f in family(7, 24), base_mask in any::<u8>()) {
        let d = vc_dimension(&f, &caps()).unwrap().as_i64();
        let m = (d + 1).max(1) as usize;
        prop_assume!(m <= f.universe());
        let base: Vec<usize> = (0..f.universe()).filter(|i| base_mask >> i & 1 == 1).collect();
        prop_assume!(base.len() >= m);
        let sub = f.project(&base).unwrap();
        let p = from_vc(&sub, m, &caps()).unwrap();
        let sols = solutions(&p, &caps()).unwrap();
        let strings = sols.strings();
        for &a in sub.sets() {
            let seq: String = (0..sub.universe()).map(|i| if a >> i & 1 == 1 { '1' } else { '0' }).collect();
            prop_assert!(strings.contains(&seq), "trace {} missing", seq);
        }
        prop_assert!(sols.len() as u128 <= binomial_prefix_sum(sub.universe() as u64, m as i64 - 1));
    }

    #[test]
    fn element_tree_problem_bounds_labeled_leaves(f in family(5, 20), h in 1usize..=6, s in 1usize..=2, seed in any::<u64>()) {
        let rank = op_rank(&f, s, &caps()).unwrap().as_i64();
        let m = (rank + 1).max(1) as usize;
        prop_assume!(m <= h);
        let tree = ElementTree::random(s, h, f.universe(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let p = from_element_tree(&tree, &f, m, &caps()).unwrap();
        let sols = solutions(&p, &caps()).unwrap();
        prop_assert!(tree.properly_labeled_leaves(&f) <= sols.len() as u128);
        for &a in f.sets() {
            let leaf: String = tree.path_of(a).iter().map(|&d| std::char::from_digit(d as u32, 36).unwrap()).collect();
            prop_assert!(sols.strings().contains(&leaf));
        }
    }

    // ---- type trees ----

    #[test]
    fn built_trees_are_type_trees(g in graph(30), seed in any::<u64>()) {
        let tt = build_type_tree_shuffled(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(tt.validate(&g).is_ok());
        // Along any branch, adjacency to a deeper node follows the direction taken.
        for (node, &v) in tt.nodes() {
            for m in 0..node.len() {
                let anc = tt.vertex(&node[..m]).unwrap();
                prop_assert_eq!(g.adjacent(anc, v), &node[m..=m] == "1");
            }
        }
        let text = formats::type_tree_to_json(&tt);
        prop_assert_eq!(formats::parse_type_tree(&text).unwrap(), tt);
    }

    #[test]
    fn extracted_sets_are_clique_and_independent(g in graph(40), seed in any::<u64>()) {
        let tt = build_type_tree_shuffled(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        let ex = extract_clique_or_independent(&tt);
        let h = tt.height();
        prop_assert!(g.is_clique(&ex.clique));
        prop_assert!(g.is_independent(&ex.independent));
        prop_assert!(ex.clique.len() + ex.independent.len() >= h + 1);
        prop_assert!(ex.largest() >= h.div_ceil(2));
    }

    #[test]
    fn tree_rank_at_most_thicket_plus_one(g in graph(14)) {
        let rank = tree_rank(&g, &caps()).unwrap();
        let k = thicket_dimension(&g.neighborhood_system().unwrap()).as_i64();
        prop_assert!(rank.lower as i64 <= k + 1);
    }

    #[test]
    fn levels_are_solutions_of_the_level_problem(g in graph(14), seed in any::<u64>()) {
        let tt = build_type_tree_shuffled(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        let t = tree_rank(&g, &caps()).unwrap().lower as usize;
        prop_assume!(t >= 2);
        let counts = tt.level_counts();
        for len in t..tt.height() {
            let p = type_tree_level_problem(&g, &tt, t, len).unwrap();
            let sols = solutions(&p, &caps()).unwrap();
            prop_assert_eq!(sols.len(), counts[len]);
            prop_assert!(counts[len] as u128 <= binomial_prefix_sum(len as u64, t as i64 - 1));
        }
        if tt.height() >= 2 {
            prop_assert!(from_type_tree(&g, &tt, t).is_ok() || tt.height() - 1 < t);
        }
    }

    // ---- test trees ----

    #[test]
    fn estimate_is_path_popcount(points in 1usize..=6, n in 1usize..=30, s in any::<u8>(), seed in any::<u64>()) {
        let space = ProbSpace::uniform(points).unwrap();
        let s = (s as u128) & ((1 << points) - 1);
        let mut tree = TestTree::new(&space, n, seed).unwrap();
        let ones = tree.characteristic_path(s).iter().filter(|&&b| b == 1).count();
        prop_assert_eq!(tree.estimate(s), rational::from_ratio(ones as i64, n as i64));
    }

    #[test]
    fn exact_expectation_is_the_measure(points in 1usize..=4, n in 1usize..=5, s in any::<u8>()) {
        let space = ProbSpace::uniform(points).unwrap();
        let s = (s as u128) & ((1 << points) - 1);
        prop_assert_eq!(exact_expectation(&space, s, n, &caps()).unwrap(), space.measure(s));
    }
}

#[test]
fn natural_insertion_builds_chain_on_clique() {
    let g = Graph::complete(6).unwrap();
    let tt = build_type_tree(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
    assert_eq!(tt.height(), 6);
    assert_eq!(extract_clique_or_independent(&tt).clique.len(), 6);
}

#[test]
fn size_bounded_subsets_meet_sauer_shelah_with_equality() {
    use shatterlab::dims::vc_shatter_function;
    use shatterlab::setsystem::{generate, Kind};
    for n in 1..=7usize {
        for d in 0..=n {
            let f = generate(&Kind::SubsetsOfSizeAtMost(n, d)).unwrap();
            let pi = vc_shatter_function(&f, n, &caps()).unwrap();
            assert_eq!(pi, (0..=d as u64).map(|i| binomial(n as u64, i)).sum::<u128>());
        }
    }
}

#[test]
fn relaxed_reductions_count_as_tables() {
    let p = random_problem(Shape::new(5, 3, 2).unwrap(), 0.3, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let hat = reduce_hat(&p).unwrap();
    let table: &BanTable = hat.table();
    assert_eq!(table.shape(), Shape::new(4, 2, 2).unwrap());
    assert_eq!(
        banned_count(&hat, &caps()).unwrap(),
        common::all_sequences(4, 2)
            .iter()
            .filter(|q| shatterlab::banseq::all_subsets(4, 2).iter().any(|s| hat.bans(s, q)))
            .count() as u128
    );
}
