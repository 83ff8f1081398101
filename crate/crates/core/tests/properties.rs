mod common;

use common::{normalize, permutation, q, weighted_orientation};
use fdf_core::certifier::{bernstein_lower_bound, in_domain, interval_lower_bound, Cell, Point3};
use fdf_core::enumerate::orientation_count;
use fdf_core::graph::{build_bf, build_cf, build_f, OrientedGraph, UndirectedGraph};
use fdf_core::lagrangian::{lagrangian_bf, lagrangian_cf, step_gap, WeightVector};
use fdf_core::poly::expand_h;
use fdf_core::reduction::{merge, merge_identity_check, reduce_to_complete, Keep};
use fdf_core::simplex::{closed_form_unchecked, majorization_bound_check, project_to_simplex, rationalize_point};
use fdf_core::{Rational, Scalar, WeightedGraph};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn delete_vertex(g: &OrientedGraph, v: usize) -> OrientedGraph {
    let relabel = |x: usize| if x > v { x - 1 } else { x };
    OrientedGraph::new(
        g.n() - 1,
        g.arcs().filter(|&(a, b)| a != v && b != v).map(|(a, b)| (relabel(a), relabel(b))),
    )
    .unwrap()
}

fn drop_weight(w: &WeightVector<Rational>, v: usize) -> WeightVector<Rational> {
    let mut x = w.as_slice().to_vec();
    x.remove(v);
    WeightVector::new(x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lagrangians_are_permutation_invariant(
        (g, w, perm) in weighted_orientation(7)
            .prop_flat_map(|(g, w)| { let n = g.n(); (Just(g), Just(w), permutation(n)) })
    ) {
        let (pg, pw) = (g.permuted(&perm), w.permuted(&perm));
        prop_assert_eq!(lagrangian_cf(&g, &w).unwrap(), lagrangian_cf(&pg, &pw).unwrap());
        prop_assert_eq!(
            lagrangian_bf(&g.underlying(), &w).unwrap(),
            lagrangian_bf(&pg.underlying(), &pw).unwrap()
        );
        prop_assert_eq!(build_cf(&g).permuted(&perm), build_cf(&pg));
        prop_assert_eq!(build_f(&g).permuted(&perm), build_f(&pg));
    }

    #[test]
    fn zero_weight_vertex_can_be_deleted(
        (g, w, v) in weighted_orientation(7)
            .prop_filter("needs two vertices", |(g, _)| g.n() >= 2)
            .prop_flat_map(|(g, w)| { let n = g.n(); (Just(g), Just(w), 0..n) })
    ) {
        // move the mass of v onto another vertex so v carries zero weight
        let mut x = w.as_slice().to_vec();
        let other = (v + 1) % x.len();
        let moved = std::mem::replace(&mut x[v], q(0, 1));
        x[other] += moved;
        let w = WeightVector::new(x).unwrap();
        let small = delete_vertex(&g, v);
        let sw = drop_weight(&w, v);
        prop_assert_eq!(lagrangian_cf(&g, &w).unwrap().value, lagrangian_cf(&small, &sw).unwrap().value);
        prop_assert_eq!(
            lagrangian_bf(&g.underlying(), &w).unwrap().value,
            lagrangian_bf(&small.underlying(), &sw).unwrap().value
        );
    }

    #[test]
    fn step_inequality_and_gap((g, w) in weighted_orientation(8)) {
        let cf = lagrangian_cf(&g, &w).unwrap().value;
        let bf = lagrangian_bf(&g.underlying(), &w).unwrap().value;
        prop_assert!(!cf.is_negative());
        prop_assert!(cf <= bf);
        prop_assert_eq!(step_gap(&g, &w).unwrap(), bf - cf);
    }

    #[test]
    fn merge_identity_and_reduction((g, w) in weighted_orientation(8)) {
        let wg = WeightedGraph::new(g.underlying(), w).unwrap();
        for (a, b) in wg.graph().non_edges() {
            let id = merge_identity_check(&wg, a, b).unwrap();
            prop_assert_eq!(&id.lhs, &id.rhs);
            let best = merge(&wg, a, b, Keep::A).unwrap().lagrangian().max(merge(&wg, a, b, Keep::B).unwrap().lagrangian());
            prop_assert!(best >= wg.lagrangian());
        }
        let r = reduce_to_complete(&wg);
        prop_assert!(r.final_graph.graph().is_complete());
        prop_assert!(r.trace.len() < wg.n());
        prop_assert_eq!(r.final_graph.n() + r.trace.len(), wg.n());
        prop_assert!(r.final_graph.lagrangian() >= wg.lagrangian());
        for s in &r.trace {
            prop_assert!(s.lagrangian_after >= s.lagrangian_before);
        }
        prop_assert_eq!(r.final_graph.lagrangian(), closed_form_unchecked(r.final_graph.weights().as_slice()));
    }

    #[test]
    fn majorization_holds_on_sorted_weights(mut m in prop::collection::vec(0u32..=50, 3..=10)) {
        prop_assume!(m.iter().any(|&x| x > 0));
        m.sort_unstable_by(|a, b| b.cmp(a));
        let c = majorization_bound_check(&normalize(&m)).unwrap();
        prop_assert!(c.holds);
        prop_assert!(c.power_sum <= c.power_sum_bound);
        prop_assert!(c.trivariate <= q(3, 32));
        if m[0] != m[m.len() - 1] {
            m.reverse();
            prop_assert!(majorization_bound_check(&normalize(&m)).is_err());
        }
    }

    #[test]
    fn projection_lands_on_simplex(v in prop::collection::vec(-3.0f64..3.0, 1..12)) {
        let p = project_to_simplex(&v);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // idempotent
        let pp = project_to_simplex(&p);
        for (a, b) in p.iter().zip(&pp) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let r = rationalize_point(&p, 1_000_000);
        prop_assert_eq!(r.iter().fold(q(0, 1), |acc, x| acc + x), q(1, 1));
    }

    #[test]
    fn box_bounds_enclose_values(
        lo in prop::array::uniform3(0i64..60),
        w in prop::array::uniform3(1i64..20),
        t in prop::array::uniform3(0i64..=8),
    ) {
        let h = expand_h();
        let cell = Cell::new(lo.map(|l| q(l, 64)), [0, 1, 2].map(|k| q(lo[k] + w[k], 64)), 0);
        let x: Point3 = [0, 1, 2].map(|k| q(lo[k] * 8 + w[k] * t[k], 512));
        let value = h.eval_exact(&x);
        prop_assert!(interval_lower_bound(&h, &cell) <= value);
        prop_assert!(bernstein_lower_bound(&h, &cell) <= value);
    }
}

#[test]
fn triple_systems_exhaustive_n5() {
    for n in 3..=5 {
        for code in 0..orientation_count(n) {
            let g = OrientedGraph::from_code(n, code);
            let (f, cf, bf) = (build_f(&g), build_cf(&g), build_bf(&g.underlying()));
            assert!(f.is_disjoint(&cf));
            assert_eq!(cf, f.complement());
            assert!(cf.is_subset(&bf));
            // BF \ CF is exactly the dominated triples with at least two arcs
            for t in bf.difference(&cf).iter() {
                assert!(g.dominator(t).is_some() && g.arcs_within(t) >= 2, "code {code} {t:?}");
            }
        }
    }
}

#[test]
fn complete_graph_closed_form_at_uniform() {
    for n in 1..=10usize {
        let w = WeightVector::<Rational>::uniform(n).unwrap();
        let direct = lagrangian_bf(&UndirectedGraph::complete(n), &w).unwrap().value;
        let inv = q(1, n as i64);
        let expected = (q(1, 1) - inv.clone() * inv.clone()) / q(6, 1) - (q(1, 1) - inv.clone()).square() / q(8, 1);
        assert_eq!(direct, expected, "n = {n}");
    }
}

#[test]
fn certified_cells_cover_domain_samples() {
    let cert = fdf_core::certifier::certify(&q(1, 16), 30, fdf_core::certifier::Method::Both).unwrap();
    assert!(cert.is_certified());
    for a in 0..=20 {
        for b in 0..=a {
            for c in 0..=b {
                let x: Point3 = [q(a, 20), q(b, 20), q(c, 20)];
                if !in_domain(&x) {
                    continue;
                }
                let leaf = cert.locate(&x).expect("cover");
                if let Some(bound) = &leaf.bound {
                    assert!(*bound <= expand_h().eval_exact(&x));
                }
            }
        }
    }
    assert!(cert.leaves.iter().all(|l| l.bound.as_ref().is_none_or(|b| !b.is_negative() || l.excision.is_some())));
    assert!(!cert.leaves.is_empty() && !cert.delta.is_zero());
}
