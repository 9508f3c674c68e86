mod common;

use common::{q, Case};
use fairdense::aux::{relaxation_bound, solve_bnb, solve_enum, AuxProblem, Budget};
use fairdense::densest::{flatten, peel_baseline, tds_exact};
use fairdense::flow::FlowNetwork;
use fairdense::io::{parse_edge_list, save};
use fairdense::rational::parse_rational;
use fairdense::view::IncrementalView;
use fairdense::{Rational, VertexSet};
use proptest::prelude::*;

/// Edge lists for `r` snapshots on `n` vertices, as pair masks.
fn case_strategy(max_n: usize, max_r: usize) -> impl Strategy<Value = Case> {
    (2..=max_n, 1..=max_r).prop_flat_map(|(n, r)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let pick = proptest::collection::vec(any::<bool>(), pairs.len());
        proptest::collection::vec(pick, r).prop_map(move |masks| {
            let snapshots = masks
                .iter()
                .map(|mask| pairs.iter().zip(mask).filter(|(_, &keep)| keep).map(|(&e, _)| e).collect())
                .collect();
            Case::new(n, snapshots)
        })
    })
}

fn set_of(mask: u32) -> VertexSet {
    VertexSet::new((0..32).filter(|v| mask >> v & 1 == 1))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (0i128..40, 1i128..5).prop_map(|(a, b)| q(a, b))
}

fn aux_problem() -> impl Strategy<Value = AuxProblem> {
    (0u8..3, small_rational(), small_rational()).prop_map(|(kind, gamma, c)| match kind {
        0 => AuxProblem::fds(gamma, c / q(4, 1)),
        1 => AuxProblem::sds(gamma / q(4, 1), c),
        _ => AuxProblem::mds(gamma / q(2, 1)),
    })
}

/// Brute-force minimum cut with source 0 and sink `n - 1`: the smallest
/// capacity over all source sides, and the intersection of all minimizing
/// source sides without the source itself.
fn brute_min_cut(n: usize, arcs: &[(usize, usize, i128)]) -> (i128, Vec<usize>) {
    let mut best = i128::MAX;
    let mut meet = u32::MAX;
    for inner in 0u32..1 << (n - 2) {
        let side = 1 | inner << 1;
        let cap: i128 = arcs
            .iter()
            .filter(|&&(u, v, _)| side >> u & 1 == 1 && side >> v & 1 == 0)
            .map(|a| a.2)
            .sum();
        if cap < best {
            best = cap;
            meet = side;
        } else if cap == best {
            meet &= side;
        }
    }
    (best, (1..n).filter(|&v| meet >> v & 1 == 1).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn incremental_view_matches_recount(case in case_strategy(10, 3), moves in proptest::collection::vec(0usize..10, 0..40)) {
        let mut view = IncrementalView::new(&case.graph, &VertexSet::empty()).unwrap();
        let mut mask = 0u32;
        for v in moves.into_iter().filter(|&v| v < case.n) {
            if mask >> v & 1 == 1 { view.remove(v).unwrap() } else { view.add(v).unwrap() }
            mask ^= 1 << v;
            let counts: Vec<i128> = view.edge_counts().iter().map(|&m| m as i128).collect();
            prop_assert_eq!(counts, case.counts(mask));
            prop_assert_eq!(view.profile(), case.graph.profile(&set_of(mask)).unwrap());
        }
    }

    #[test]
    fn profile_identities(case in case_strategy(10, 4), mask in 1u32..1024) {
        let mask = mask & ((1 << case.n) - 1);
        prop_assume!(mask != 0);
        let set = set_of(mask);
        let p = case.graph.profile(&set).unwrap();
        let brute = case.stats(mask);
        prop_assert_eq!(p.total, brute.total);
        prop_assert_eq!(p.gap, brute.gap);
        prop_assert_eq!(p.min_density(), brute.min);
        let size = q(set.len() as i128, 1);
        prop_assert_eq!(p.gap * size, q(p.edge_gap as i128, 1));
        prop_assert!(p.min_density() <= p.avg_density() && p.avg_density() <= p.max_density());
        prop_assert_eq!(p.avg_density() * q(case.r() as i128, 1), p.total);
        let cap = q(set.len() as i128 - 1, 2);
        for d in &p.densities {
            prop_assert!(*d >= q(0, 1) && *d <= cap);
        }
    }

    #[test]
    fn flattened_weight_is_edge_total(case in case_strategy(10, 4), mask in 0u32..1024) {
        let mask = mask & ((1 << case.n) - 1);
        let wg = flatten(&case.graph);
        let total: i128 = case.counts(mask).iter().sum();
        prop_assert_eq!(wg.induced_weight(&set_of(mask)) as i128, total);
    }

    #[test]
    fn max_flow_matches_brute_force_cut(
        n in 2usize..=8,
        arcs in proptest::collection::vec((0usize..8, 0usize..8, 0i128..=10), 0..24),
    ) {
        let arcs: Vec<_> = arcs.into_iter().filter(|&(u, v, _)| u < n && v < n && u != v).collect();
        let mut net = FlowNetwork::new(n, 0, n - 1);
        for &(u, v, c) in &arcs {
            net.add_arc(u, v, c);
        }
        let cut = net.max_flow_min_cut();
        let (value, side) = brute_min_cut(n, &arcs);
        prop_assert_eq!(cut.value, value);
        prop_assert_eq!(cut.source_side, side);
    }

    #[test]
    fn tds_matches_enumeration_and_peel_is_half(case in case_strategy(12, 3)) {
        let oracle = case.oracle();
        let tds = tds_exact(&case.graph);
        prop_assert_eq!(tds.objective, oracle.tds());
        let peel = peel_baseline(&case.graph);
        prop_assert!(peel.objective * q(2, 1) >= oracle.tds());
        prop_assert!(peel.objective <= oracle.tds());
    }

    #[test]
    fn relaxation_bound_dominates_completions(
        case in case_strategy(8, 3),
        problem in aux_problem(),
        labels in proptest::collection::vec(0u8..3, 8),
    ) {
        let n = case.n;
        let include: u32 = (0..n).filter(|&v| labels[v] == 1).fold(0, |m, v| m | 1 << v);
        let exclude: u32 = (0..n).filter(|&v| labels[v] == 2).fold(0, |m, v| m | 1 << v);
        let bound = relaxation_bound(&case.graph, &problem, &set_of(include), &set_of(exclude)).unwrap();
        let free = ((1u32 << n) - 1) & !include & !exclude;
        // Walk every subset of the free vertices.
        let mut sub = free;
        loop {
            let mask = include | sub;
            if mask != 0 {
                if let Some(value) = problem.evaluate(&case.graph, &set_of(mask)).unwrap() {
                    if problem.maximizes() {
                        prop_assert!(value <= bound, "completion {:b} scores {} above bound {}", mask, value, bound);
                    } else {
                        prop_assert!(value >= bound, "completion {:b} scores {} below bound {}", mask, value, bound);
                    }
                }
            }
            if sub == 0 { break; }
            sub = (sub - 1) & free;
        }
    }

    #[test]
    fn parser_never_panics(text in "[0-9 #nr=\\-x\n]{0,120}") {
        let _ = parse_edge_list(&text);
    }

    #[test]
    fn parser_never_panics_on_arbitrary_text(text in any::<String>()) {
        let _ = parse_edge_list(&text);
        let _ = parse_rational(&text);
    }

    #[test]
    fn rationals_round_trip(num in 0i128..1_000_000, den in 1i128..1000) {
        let value = q(num, den);
        prop_assert_eq!(parse_rational(&value.to_string()).unwrap(), value);
    }

    #[test]
    fn save_then_load_is_identity(case in case_strategy(12, 4)) {
        let mut buf = Vec::new();
        save(&case.graph, &mut buf).unwrap();
        let parsed = parse_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(parsed.graph, case.graph);
        prop_assert_eq!(parsed.duplicates, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn bnb_agrees_with_enumeration(case in case_strategy(14, 4), problem in aux_problem()) {
        let a = solve_enum(&case.graph, &problem).unwrap();
        let b = solve_bnb(&case.graph, &problem, Budget::unlimited()).unwrap();
        prop_assert!(b.proven_optimal);
        prop_assert_eq!(&a.objective, &b.objective);
        prop_assert_eq!(&a.set, &b.set);
        if !a.set.is_empty() {
            prop_assert_eq!(problem.evaluate(&case.graph, &a.set).unwrap(), Some(a.objective));
        }
    }
}
