//! Seeded inputs shared by the benchmarks.

use std::sync::Arc;

use lpa_core::algebra::{rational, Letter};
use lpa_core::graph::is_spi;
use lpa_core::verify::random::{random_graph, random_word, rng};
use lpa_core::{CohnAlgebra, Graph};
use num_rational::BigRational;

const SEED: u64 = 0xbe_7c4;

/// `count` sink-free SPI graphs on `vertices` vertices.
pub fn spi_graphs(vertices: usize, count: usize) -> Vec<Graph> {
    let mut r = rng(SEED ^ vertices as u64);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = random_graph(&mut r, vertices, 3, true);
        if is_spi(&g).is_spi {
            out.push(g);
        }
    }
    out
}

/// `count` random words of length exactly `len`, each with coefficient 1.
pub fn words(ctx: &Arc<CohnAlgebra>, len: usize, count: usize) -> Vec<Vec<(BigRational, Vec<Letter>)>> {
    let mut r = rng(SEED ^ len as u64);
    (0..count)
        .map(|_| loop {
            let w = random_word(&mut r, ctx.graph(), len);
            if w.len() == len {
                break vec![(rational(1), w)];
            }
        })
        .collect()
}
