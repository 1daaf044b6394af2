mod common;

use lpa_core::graph::{builtin, graph_isomorphic, is_spi, parse_graph, render_graph, Graph, BUILTIN_NAMES};
use lpa_core::verify::oracle::spi_by_hereditary_saturated;
use proptest::prelude::*;

/// The same graph with vertices and edges listed in reverse and renamed.
fn relabel_reversed(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut h = Graph::new();
    for v in (0..n).rev() {
        h.add_vertex(&format!("r{v}")).unwrap();
    }
    for (i, e) in g.edges().iter().enumerate().rev() {
        h.add_edge(&format!("b{i}"), n - 1 - e.source, n - 1 - e.range).unwrap();
    }
    h
}

#[test]
fn builtins_round_trip() {
    for name in BUILTIN_NAMES {
        let g = builtin(name).unwrap();
        assert_eq!(parse_graph(&render_graph(&g)).unwrap(), g, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn render_then_parse_is_identity(g in common::graphs(7, 12, false)) {
        prop_assert_eq!(parse_graph(&render_graph(&g)).unwrap(), g);
    }

    #[test]
    fn spi_agrees_with_ideal_oracle(g in common::graphs(5, 8, false)) {
        prop_assert_eq!(is_spi(&g).is_spi, spi_by_hereditary_saturated(&g));
    }

    #[test]
    fn relabelled_graphs_are_isomorphic(g in common::graphs(6, 8, false)) {
        let h = relabel_reversed(&g);
        let iso = graph_isomorphic(&g, &h).unwrap();
        prop_assert!(iso.as_ref().is_some_and(|m| m.is_valid(&g, &h)));
    }

    #[test]
    fn edge_count_distinguishes(g in common::graphs(5, 6, true)) {
        // Adding a loop changes the edge count, so no isomorphism exists.
        let mut h = g.clone();
        h.add_edge("extra", 0, 0).unwrap();
        prop_assert!(graph_isomorphic(&g, &h).unwrap().is_none());
    }
}
