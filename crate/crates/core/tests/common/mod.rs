#![allow(dead_code)]

use fdf_core::enumerate::orientation_count;
use fdf_core::graph::OrientedGraph;
use fdf_core::lagrangian::WeightVector;
use fdf_core::{Rational, Scalar};
use proptest::prelude::*;
use rand::Rng;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::from_ratio(p, d)
}

/// Exact simplex point from nonnegative integer masses, not all zero.
pub fn normalize(masses: &[u32]) -> WeightVector<Rational> {
    let total: u32 = masses.iter().sum();
    assert!(total > 0);
    WeightVector::new(masses.iter().map(|&m| q(m as i64, total as i64)).collect()).unwrap()
}

/// Random masses with a fair share of exact zeros.
pub fn random_weights(rng: &mut impl Rng, n: usize) -> WeightVector<Rational> {
    loop {
        let masses: Vec<u32> = (0..n)
            .map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(1..=30) })
            .collect();
        if masses.iter().any(|&m| m > 0) {
            return normalize(&masses);
        }
    }
}

pub fn random_orientation(rng: &mut impl Rng, n: usize) -> OrientedGraph {
    OrientedGraph::from_code(n, rng.gen_range(0..orientation_count(n)))
}

pub fn orientation(max_n: usize) -> impl Strategy<Value = OrientedGraph> {
    (1..=max_n).prop_flat_map(|n| (0..orientation_count(n)).prop_map(move |c| OrientedGraph::from_code(n, c)))
}

pub fn weighted_orientation(max_n: usize) -> impl Strategy<Value = (OrientedGraph, WeightVector<Rational>)> {
    orientation(max_n).prop_flat_map(|g| {
        let n = g.n();
        prop::collection::vec(0u32..=20, n)
            .prop_filter("some mass", |m| m.iter().any(|&x| x > 0))
            .prop_map(move |m| (g.clone(), normalize(&m)))
    })
}

pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}
