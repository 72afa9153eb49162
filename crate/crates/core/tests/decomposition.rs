mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use vcp3::decomposition::{heuristic_decompose, make_nice, make_nice_rooted, validate_nice, NodeKind, Strategy as Heuristic};
use vcp3::format::{emit_gr, emit_td, parse_graph, parse_td, GraphFormat};
use vcp3::generate::{generate, Family, InstanceSpec};
use vcp3::Graph;

#[test]
fn heuristics_and_nice_forms_are_valid() {
    for (name, g) in common::corpus(150, 16, 0) {
        for strategy in [Heuristic::MinDegree, Heuristic::MinFill] {
            let td = heuristic_decompose(&g, strategy);
            assert!(td.validate(&g).is_valid(), "{name}: {:?}", td.validate(&g));
            let nd = make_nice(&td, &g).unwrap();
            assert!(validate_nice(&nd, &g).is_empty(), "{name}");
            assert_eq!(nd.width(), td.width(), "{name}");
        }
    }
}

#[test]
fn every_edge_introduced_once() {
    for (name, g) in common::corpus(60, 14, 100) {
        let nd = common::nice(&g);
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for node in nd.nodes() {
            if let NodeKind::IntroduceEdge(u, v) = node.kind {
                *seen.entry((u, v)).or_default() += 1;
            }
        }
        assert_eq!(seen.len(), g.edge_count(), "{name}");
        assert!(seen.values().all(|&c| c == 1), "{name}");
        assert!(g.edges().iter().all(|e| seen.contains_key(e)), "{name}");
    }
}

#[test]
fn trees_have_width_one() {
    for seed in 0..40 {
        let (g, _) = generate(&InstanceSpec::new(Family::Tree, 2 + seed as usize, seed)).unwrap();
        for strategy in [Heuristic::MinDegree, Heuristic::MinFill] {
            assert_eq!(heuristic_decompose(&g, strategy).width(), 1);
        }
    }
}

#[test]
fn heuristics_match_planted_width_on_full_k_trees() {
    for k in 1..=5 {
        for seed in 0..10 {
            let (g, td) = generate(&InstanceSpec::partial_k_tree(25, k, 0.0, seed)).unwrap();
            assert_eq!(td.unwrap().width(), k);
            for strategy in [Heuristic::MinDegree, Heuristic::MinFill] {
                let w = heuristic_decompose(&g, strategy).width();
                assert!(w <= k, "k={k} seed={seed} {strategy}: width {w}");
            }
        }
    }
}

#[test]
fn planted_decompositions_survive_round_trip() {
    for k in 1..=4 {
        for seed in 0..10 {
            let (g, td) = generate(&InstanceSpec::partial_k_tree(20, k, 0.3, seed)).unwrap();
            let td = td.unwrap();
            assert!(td.width() <= k);
            let g2 = parse_graph(&emit_gr(&g), GraphFormat::PaceGr).unwrap();
            assert_eq!(g, g2);
            let td2 = parse_td(&emit_td(&td, g.vertex_count())).unwrap();
            assert!(td2.validate(&g2).is_valid());
            assert_eq!(td2.width(), td.width());
            let nd = make_nice(&td2, &g2).unwrap();
            assert!(validate_nice(&nd, &g2).is_empty());
        }
    }
}

#[test]
fn every_root_gives_a_valid_nice_form() {
    let (g, td) = generate(&InstanceSpec::partial_k_tree(12, 2, 0.2, 5)).unwrap();
    let td = td.unwrap();
    for root in 0..td.node_count() {
        let nd = make_nice_rooted(&td, &g, root).unwrap();
        assert!(validate_nice(&nd, &g).is_empty(), "root {root}");
        let last = nd.node(nd.root());
        assert!(last.bag.is_empty());
    }
}

#[test]
fn broken_decompositions_are_rejected() {
    let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let missing_edge = parse_td("s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n").unwrap();
    let report = missing_edge.validate(&g);
    assert!(!report.is_valid());
    assert!(make_nice(&missing_edge, &g).is_err());
    let split = parse_td("s td 3 2 3\nb 1 1 2\nb 2 2 3\nb 3 1\n1 2\n2 3\n").unwrap();
    assert!(!split.validate(&g).is_valid());
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..12).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..2 * n).prop_map(move |pairs| {
            Graph::from_edges(n, pairs.into_iter().filter(|(u, v)| u != v)).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn nice_form_preserves_width(g in arb_graph(), fill in any::<bool>()) {
        let strategy = if fill { Heuristic::MinFill } else { Heuristic::MinDegree };
        let td = heuristic_decompose(&g, strategy);
        prop_assert!(td.validate(&g).is_valid());
        let nd = make_nice(&td, &g).unwrap();
        prop_assert!(validate_nice(&nd, &g).is_empty());
        prop_assert_eq!(nd.width(), td.width());
        prop_assert!(nd.len() <= 16 * (td.width() + 1) * g.vertex_count().max(1));
        prop_assert!(nd.to_tree_decomposition().validate(&g).is_valid());
    }

    #[test]
    fn graph_format_round_trip(g in arb_graph()) {
        prop_assert_eq!(parse_graph(&emit_gr(&g), GraphFormat::PaceGr).unwrap(), g);
    }
}
