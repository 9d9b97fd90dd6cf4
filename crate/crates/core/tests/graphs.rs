mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use strata_core::{enumerate_stable_graphs, StableGraph};
use strata_oracle::stable_graphs;

#[test]
fn matches_brute_force_with_automorphisms() {
    for (g, n) in [(0u32, 3usize), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1)] {
        let ours = enumerate_stable_graphs(g, n, g).unwrap();
        let theirs = stable_graphs(g, n);
        assert_eq!(ours.len(), theirs.len(), "count for ({g}, {n})");
        let converted: BTreeSet<_> = ours.iter().map(common::to_plain).collect();
        assert_eq!(converted, theirs.iter().cloned().collect::<BTreeSet<_>>());
        for graph in &ours {
            let aut = graph.canonical_form().unwrap().automorphism_count;
            assert_eq!(aut, common::to_plain(graph).automorphisms(), "{graph:?}");
        }
    }
}

#[test]
fn every_enumerated_graph_validates() {
    for graph in enumerate_stable_graphs(2, 2, 2).unwrap() {
        assert_eq!(graph.validate(Some(2)), Ok(()));
        assert_eq!(graph.num_legs(), 2);
    }
}

#[test]
fn json_of_every_small_graph_round_trips() {
    for graph in enumerate_stable_graphs(1, 3, 1).unwrap() {
        let text = serde_json::to_string(&graph.to_json()).unwrap();
        let back = StableGraph::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, graph);
    }
}

fn shuffled(seed: &[usize], len: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    for (i, s) in seed.iter().enumerate().take(len) {
        p.swap(i, s % len);
    }
    p
}

fn genus_two_three_legs() -> &'static [StableGraph] {
    static ALL: OnceLock<Vec<StableGraph>> = OnceLock::new();
    ALL.get_or_init(|| enumerate_stable_graphs(2, 3, 2).unwrap())
}

proptest! {
    #[test]
    fn canonical_form_ignores_relabelling(idx in 0usize..555, vs in prop::collection::vec(0usize..64, 8), hs in prop::collection::vec(0usize..64, 24)) {
        let all = genus_two_three_legs();
        let graph = &all[idx % all.len()];
        let vperm = shuffled(&vs, graph.num_vertices());
        let hperm = shuffled(&hs, graph.num_half_edges());
        let moved = graph.relabeled(&vperm, &hperm);
        prop_assert!(moved.validate(Some(2)).is_ok());
        let a = graph.canonical_form().unwrap();
        let b = moved.canonical_form().unwrap();
        prop_assert_eq!(a.canonical_bytes, b.canonical_bytes);
        prop_assert_eq!(a.automorphism_count, b.automorphism_count);
        prop_assert_eq!(a.representative, b.representative);
    }
}
