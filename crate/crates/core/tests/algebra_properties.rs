use std::sync::Arc;

use lpa_core::algebra::{parse_expression, rational, CohnAlgebra, Element, Letter, Strategy as Order};
use lpa_core::graph::builtin;
use lpa_core::verify::oracle::normal_monomial_rank;
use proptest::prelude::*;

fn contexts() -> Vec<Arc<CohnAlgebra>> {
    vec![
        CohnAlgebra::leavitt(builtin("E_star").unwrap()),
        CohnAlgebra::new(builtin("E_star").unwrap(), &["v2"]).unwrap(),
        CohnAlgebra::new(builtin("E_star_star").unwrap(), &["w2", "w3"]).unwrap(),
        CohnAlgebra::new(builtin("R3").unwrap(), &[]).unwrap(),
    ]
}

/// Raw letters as indices, resolved modulo the graph's sizes.
fn raw_word() -> impl Strategy<Value = Vec<(u8, usize)>> {
    proptest::collection::vec((0u8..5, 0usize..64), 1..=7)
}

fn resolve(ctx: &CohnAlgebra, raw: &[(u8, usize)]) -> Vec<Letter> {
    let g = ctx.graph();
    raw.iter()
        .map(|&(kind, i)| match kind {
            0 => Letter::Vertex(i % g.vertex_count()),
            1 | 2 => Letter::Edge(i % g.edge_count()),
            _ => Letter::Ghost(i % g.edge_count()),
        })
        .collect()
}

fn element(ctx: &Arc<CohnAlgebra>, words: &[(i64, Vec<(u8, usize)>)]) -> Element {
    let words: Vec<_> = words.iter().map(|(c, w)| (rational(*c), resolve(ctx, w))).collect();
    ctx.normalize(&words, Order::Leftmost).unwrap()
}

fn elements() -> impl Strategy<Value = Vec<(i64, Vec<(u8, usize)>)>> {
    proptest::collection::vec(
        (-3i64..=3, proptest::collection::vec((0u8..5, 0usize..64), 1..=4)),
        1..=3,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normalization_is_idempotent_and_confluent(which in 0usize..4, raw in raw_word()) {
        let ctx = &contexts()[which];
        let word = resolve(ctx, &raw);
        let left = ctx.normalize(&[(rational(1), word.clone())], Order::Leftmost).unwrap();
        let right = ctx.normalize(&[(rational(1), word.clone())], Order::Rightmost).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(ctx.normalize(&left.to_words(), Order::Rightmost).unwrap(), left.clone());
        // Normal forms consist of normal monomials only.
        for (m, _) in left.terms() {
            prop_assert!(ctx.is_normal(m));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn ring_axioms(which in 0usize..4, x in elements(), y in elements(), z in elements()) {
        let ctx = &contexts()[which];
        let (x, y, z) = (element(ctx, &x), element(ctx, &y), element(ctx, &z));
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().mul(&z).unwrap(), x.mul(&z).unwrap().add(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(ctx.unit().mul(&x).unwrap(), x.clone());
        prop_assert_eq!(x.mul(&ctx.unit()).unwrap(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap().star(), y.star().mul(&x.star()).unwrap());
        prop_assert_eq!(x.star().star(), x.clone());
        prop_assert!(x.sub(&x).unwrap().is_zero());
    }

    #[test]
    fn printed_elements_parse_back(which in 0usize..4, x in elements()) {
        let ctx = &contexts()[which];
        let x = element(ctx, &x);
        prop_assert_eq!(parse_expression(ctx, &x.to_string()).unwrap(), x);
    }
}

#[test]
fn normal_monomials_are_independent() {
    for (graph, complete) in [
        ("E_star", &["v2"][..]),
        ("E_star", &[][..]),
        ("E_star_star", &["w2", "w3", "w4"][..]),
    ] {
        let c = CohnAlgebra::new(builtin(graph).unwrap(), complete).unwrap();
        let (count, rank) = normal_monomial_rank(&c, 3, 5);
        assert_eq!(count, rank, "{graph} at {complete:?}");
    }
}
