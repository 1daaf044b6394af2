#![allow(dead_code)]

use lpa_core::graph::Graph;
use proptest::prelude::*;

/// Graphs on `1..=max_vertices` vertices `x1..`, edges `a1..` with
/// arbitrary endpoints. With `sink_free`, every vertex gets a first edge.
pub fn graphs(max_vertices: usize, max_extra_edges: usize, sink_free: bool) -> impl Strategy<Value = Graph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        let first = proptest::collection::vec(0..n, n);
        let extra = proptest::collection::vec((0..n, 0..n), 0..=max_extra_edges);
        (Just(n), first, extra).prop_map(move |(n, first, extra)| {
            let mut g = Graph::new();
            for i in 1..=n {
                g.add_vertex(&format!("x{i}")).unwrap();
            }
            let mut k = 0;
            let mut add = |g: &mut Graph, s: usize, r: usize| {
                k += 1;
                g.add_edge(&format!("a{k}"), s, r).unwrap();
            };
            if sink_free {
                for (v, &w) in first.iter().enumerate() {
                    add(&mut g, v, w);
                }
            }
            for (s, r) in extra {
                add(&mut g, s, r);
            }
            g
        })
    })
}
