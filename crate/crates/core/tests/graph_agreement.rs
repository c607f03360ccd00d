use defset::graph::{brute_force_even_circuit_exists, even_circuit_threshold, find_even_circuit, SimpleGraph};
use proptest::prelude::*;

fn all_pairs(v: usize) -> Vec<(usize, usize)> {
    (0..v).flat_map(|a| ((a + 1)..v).map(move |b| (a, b))).collect()
}

fn graph_from_mask(v: usize, pairs: &[(usize, usize)], mask: u64) -> SimpleGraph {
    SimpleGraph::from_edges(v, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e))
}

fn check(g: &SimpleGraph) {
    let found = find_even_circuit(g);
    let brute = brute_force_even_circuit_exists(g).unwrap();
    assert_eq!(found.is_some(), brute, "{:?}", g.edges().collect::<Vec<_>>());
    if let Some(trail) = found {
        assert!(trail.is_even());
        trail.validate_in(g).unwrap();
        // a trail never beats the deterministic answer on a re-run
        assert_eq!(find_even_circuit(g), Some(trail));
    }
}

#[test]
fn exhaustive_agreement_up_to_six_vertices() {
    for v in 1..=6 {
        let pairs = all_pairs(v);
        for mask in 0..(1u64 << pairs.len()) {
            check(&graph_from_mask(v, &pairs, mask));
        }
    }
}

#[test]
fn extremal_threshold_is_tight_up_to_six_vertices() {
    for v in 1..=6 {
        let pairs = all_pairs(v);
        let threshold = even_circuit_threshold(v);
        let mut densest_without = 0;
        for mask in 0..(1u64 << pairs.len()) {
            let g = graph_from_mask(v, &pairs, mask);
            if find_even_circuit(&g).is_none() {
                densest_without = densest_without.max(g.edge_count());
            }
        }
        assert_eq!(densest_without, threshold, "v = {v}");
    }
}

fn random_graph() -> impl Strategy<Value = SimpleGraph> {
    (7usize..=8).prop_flat_map(|v| {
        let pairs = all_pairs(v);
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            SimpleGraph::from_edges(v, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e))
        })
    })
}

fn sparse_graph() -> impl Strategy<Value = SimpleGraph> {
    (7usize..=8, 0usize..=12).prop_flat_map(|(v, m)| {
        proptest::collection::vec((0..v, 0..v), m)
            .prop_map(move |es| SimpleGraph::from_edges(v, es.into_iter().filter(|(a, b)| a != b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn random_graphs_agree_with_brute_force(g in random_graph()) {
        check(&g);
    }

    #[test]
    fn sparse_graphs_agree_with_brute_force(g in sparse_graph()) {
        check(&g);
    }
}
