//! Seeded generators for graphs, matrices, words and algebra elements.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rational, AlgebraError, CohnAlgebra, Element, Letter, Strategy};
use crate::graph::{is_spi, supports_two_return_paths, Graph};
use crate::linalg::IntMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vertices `x1..xn`, edges `a1..`; each vertex emits `0..=max_out` edges
/// with uniformly chosen ranges (or `1..=max_out` when `sink_free`).
pub fn random_graph(rng: &mut impl Rng, vertices: usize, max_out: usize, sink_free: bool) -> Graph {
    let mut g = Graph::new();
    for i in 1..=vertices {
        g.add_vertex(&format!("x{i}")).expect("valid identifier");
    }
    let mut k = 0;
    for v in 0..vertices {
        let low = usize::from(sink_free);
        for _ in 0..rng.gen_range(low..=max_out.max(low)) {
            k += 1;
            let w = rng.gen_range(0..vertices);
            g.add_edge(&format!("a{k}"), v, w).expect("valid identifier");
        }
    }
    g
}

/// A graph with at most `max_vertices` vertices that is SPI, together with a
/// vertex at which it can be spliced.
pub fn random_spliceable_spi(rng: &mut impl Rng, max_vertices: usize) -> (Graph, String) {
    loop {
        let n = rng.gen_range(1..=max_vertices);
        let g = random_graph(rng, n, 3, true);
        if !is_spi(&g).is_spi {
            continue;
        }
        let candidates: Vec<usize> = (0..n).filter(|&v| supports_two_return_paths(&g, v)).collect();
        if let Some(&u) = candidates.choose(rng) {
            let id = g.vertex_id(u).to_string();
            return (g, id);
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

pub fn random_letter(rng: &mut impl Rng, g: &Graph) -> Letter {
    let (n, m) = (g.vertex_count(), g.edge_count());
    match rng.gen_range(0..5) {
        0 => Letter::Vertex(rng.gen_range(0..n)),
        1 | 2 => Letter::Edge(rng.gen_range(0..m)),
        _ => Letter::Ghost(rng.gen_range(0..m)),
    }
}

pub fn random_word(rng: &mut impl Rng, g: &Graph, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| random_letter(rng, g)).collect()
}

/// A combination of up to three random words with coefficients in `-3..=3`.
pub fn random_element(rng: &mut impl Rng, ctx: &Arc<CohnAlgebra>, max_len: usize) -> Result<Element, AlgebraError> {
    let words: Vec<_> = (0..rng.gen_range(1..=3))
        .map(|_| (rational(rng.gen_range(-3..=3)), random_word(rng, ctx.graph(), max_len)))
        .collect();
    ctx.normalize(&words, Strategy::Leftmost)
}
