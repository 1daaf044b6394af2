mod common;

use lpa_core::linalg::{
    graph_determinant, has_trivial_k_theory, identity_minus_transpose, k0_presentation, pointed_iso_exists_with_cap,
    smith_normal_form, IntMatrix, K0Element, PointedAbelianGroup, PointedIsoVerdict,
};
use lpa_core::verify::oracle::{brute_force_pointed_iso, determinant_by_cofactors, invariant_factors_by_minors};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrices(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c)
            .prop_map(move |data| IntMatrix::from_fn(r, c, |i, j| BigInt::from(data[i * c + j])))
    })
}

/// Finite groups of small order with an arbitrary unit.
fn finite_groups() -> impl Strategy<Value = PointedAbelianGroup> {
    prop_oneof![
        Just(vec![2u64]),
        Just(vec![4]),
        Just(vec![6]),
        Just(vec![8]),
        Just(vec![9]),
        Just(vec![12]),
        Just(vec![2, 2]),
        Just(vec![2, 4]),
        Just(vec![2, 6]),
        Just(vec![3, 3]),
        Just(vec![2, 8]),
        Just(vec![2, 2, 2]),
        Just(vec![2, 2, 4]),
    ]
    .prop_flat_map(|orders| {
        let coords: Vec<_> = orders.iter().map(|&d| 0..d as i64).collect();
        (Just(orders), coords)
    })
    .prop_map(|(orders, unit)| {
        PointedAbelianGroup::new(
            0,
            orders.into_iter().map(BigInt::from).collect(),
            K0Element::from_i64(&unit),
        )
        .unwrap()
    })
}

fn with_unit(p: &PointedAbelianGroup, unit: Vec<BigInt>) -> PointedAbelianGroup {
    PointedAbelianGroup::new(p.free_rank, p.invariant_factors.clone(), K0Element::new(unit)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_correct(m in matrices(4, 4, 6)) {
        let snf = smith_normal_form(&m);
        prop_assert!(snf.left.is_unimodular());
        prop_assert!(snf.right.is_unimodular());
        prop_assert!(snf.diagonal.is_diagonal());
        prop_assert_eq!(&(&snf.left * &m) * &snf.right, snf.diagonal.clone());
        let factors = snf.factors();
        for w in factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(factors.iter().all(|d| !d.is_zero() && d > &BigInt::zero()));
        prop_assert_eq!(factors, invariant_factors_by_minors(&m));
    }

    #[test]
    fn determinant_matches_cofactors(m in (1usize..=5).prop_flat_map(|n| matrices(n, n, 4).prop_filter("square", |m| m.is_square()))) {
        prop_assert_eq!(m.determinant().unwrap(), determinant_by_cofactors(&m));
    }

    #[test]
    fn vertex_classes_satisfy_the_relations(g in common::graphs(5, 8, false)) {
        let p = k0_presentation(&g);
        let n = g.vertex_count();
        for v in g.regular_vertices() {
            // [v] = Σ_{s(e) = v} [r(e)]
            let mut rhs = p.group.zero();
            for e in g.out_edges(v) {
                rhs = rhs.checked_add(&p.vertex_classes[g.range(e)]).unwrap();
            }
            prop_assert!(p.equal(&p.vertex_classes[v], &rhs).unwrap());
        }
        let sum = (0..n).fold(p.group.zero(), |acc, v| acc.checked_add(&p.vertex_classes[v]).unwrap());
        prop_assert!(p.equal(&sum, &p.group.unit_class).unwrap());
        if !g.has_sinks() {
            let det = graph_determinant(&g).unwrap();
            let order = p.group.order();
            match order {
                Some(o) => prop_assert_eq!(o, num_traits::Signed::abs(&det)),
                None => prop_assert!(det.is_zero()),
            }
        }
    }

    #[test]
    fn trivial_k_theory_matches_determinant(g in common::graphs(5, 8, true)) {
        let snf = smith_normal_form(&identity_minus_transpose(&g.adjacency_matrix()));
        let all_ones = snf.diagonal.diagonal().iter().all(One::is_one);
        let det = graph_determinant(&g).unwrap();
        let trivial = has_trivial_k_theory(&g).unwrap();
        prop_assert_eq!(trivial, all_ones);
        prop_assert_eq!(trivial, det == BigInt::one() || det == -BigInt::one());
    }

    #[test]
    fn pointed_iso_matches_brute_force(p in finite_groups(), q in finite_groups()) {
        let verdict = pointed_iso_exists_with_cap(&p, &q, 10_000).unwrap();
        let expected = brute_force_pointed_iso(&p, &q, 64).unwrap();
        prop_assert_eq!(verdict.is_yes(), expected, "{} vs {}: {}", p, q, verdict);
        if let PointedIsoVerdict::Yes(w) = verdict {
            prop_assert!(w.validate(&p, &q));
        }
    }

    #[test]
    fn automorphic_units_are_pointed_isomorphic(
        rank in 0usize..=2,
        torsion in prop_oneof![Just(vec![]), Just(vec![2u64]), Just(vec![2, 4]), Just(vec![3, 6]), Just(vec![5])],
        unit in proptest::collection::vec(-6i64..=6, 4),
        ops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..8),
    ) {
        let k = rank + torsion.len();
        let orders: Vec<BigInt> = torsion.iter().copied().map(BigInt::from).collect();
        let p = with_unit(
            &PointedAbelianGroup::new(rank, orders.clone(), K0Element::zero(k)).unwrap(),
            unit[..k].iter().copied().map(BigInt::from).collect(),
        );
        // Apply elementary automorphisms to the unit coordinates.
        let mut u = p.unit_class.coords.clone();
        for (i, j, c, negate) in ops {
            if k == 0 {
                break;
            }
            let (i, j) = (i % k, j % k);
            if negate && i < rank {
                u[i] = -u[i].clone();
            } else if i != j {
                // x_i += c·m·x_j is an automorphism when it is a homomorphism.
                let m = match (i < rank, j < rank) {
                    (true, false) => continue,
                    (_, true) => BigInt::one(),
                    (false, false) => {
                        let (di, dj) = (&orders[i - rank], &orders[j - rank]);
                        di / di.gcd(dj)
                    }
                };
                let add = &u[j] * BigInt::from(c) * m;
                u[i] += add;
            }
        }
        let q = with_unit(&p, u);
        let verdict = pointed_iso_exists_with_cap(&p, &q, 10_000).unwrap();
        match verdict {
            PointedIsoVerdict::Yes(w) => prop_assert!(w.validate(&p, &q)),
            other => prop_assert!(false, "{} vs {}: {}", p, q, other),
        }
    }
}
