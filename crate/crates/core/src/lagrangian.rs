//! The two weighted Lagrangians and the uniform-weight density conversion.
//!
//! For an orientation `A` with complement construction `F = CF(A)`:
//!
//! ```text
//! L_CF = sum_{xyz in F} xyz + 1/2 sum_{(x,y) in A} x^2 y
//! ```
//!
//! and for a graph `B` with `E = BF(B)`:
//!
//! ```text
//! L_BF = sum_{xyz in E} xyz + 1/2 sum_{xy in B} (x^2 y + x y^2) - 1/2 (sum_{xy in B} xy)^2
//! ```

use num_traits::Zero;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{build_bf, build_cf, edge_density, OrientedGraph, UndirectedGraph};
use crate::scalar::Scalar;
use crate::{serde_scalar, Rational};

/// Nonnegative vertex weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent, bound = "")]
pub struct WeightVector<T: Scalar> {
    #[serde(serialize_with = "serde_scalar::many")]
    weights: Vec<T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return domain(format!("weight {i} is negative ({w})"));
        }
        let sum = weights.iter().fold(T::zero(), |acc, w| acc + w.clone());
        if !T::is_unit_sum(&sum) {
            return domain(format!("weights sum to {}, expected 1", sum.render()));
        }
        Ok(WeightVector { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("uniform weights need at least one vertex");
        }
        let w = T::one() / T::from_count(n);
        Ok(WeightVector { weights: vec![w; n] })
    }

    /// Bypasses validation; callers guarantee the invariants.
    pub(crate) fn from_trusted(weights: Vec<T>) -> Self {
        WeightVector { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.weights
    }

    pub fn into_inner(self) -> Vec<T> {
        self.weights
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = self.weights.clone();
        for (v, w) in self.weights.iter().enumerate() {
            out[perm[v]] = w.clone();
        }
        WeightVector { weights: out }
    }
}

impl<T: Scalar> std::ops::Index<usize> for WeightVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.weights[i]
    }
}

pub fn uniform_weights<T: Scalar>(n: usize) -> Result<WeightVector<T>> {
    WeightVector::uniform(n)
}

/// A Lagrangian value together with its three summands.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct LagrangianValue<T: Scalar> {
    #[serde(serialize_with = "serde_scalar::one")]
    pub value: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub triple_term: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub pair_term: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub quadratic_term: T,
}

impl<T: Scalar> LagrangianValue<T> {
    fn from_terms(triple_term: T, pair_term: T, quadratic_term: T) -> Self {
        LagrangianValue {
            value: triple_term.clone() + pair_term.clone() - quadratic_term.clone(),
            triple_term,
            pair_term,
            quadratic_term,
        }
    }
}

fn check_len<T: Scalar>(n: usize, w: &WeightVector<T>) -> Result<()> {
    if w.len() != n {
        return domain(format!("{} weights for a graph on {n} vertices", w.len()));
    }
    Ok(())
}

fn triple_sum<'a, T: Scalar>(triples: impl Iterator<Item = &'a [usize; 3]>, x: &[T]) -> T {
    triples.fold(T::zero(), |acc, t| {
        acc + x[t[0]].clone() * x[t[1]].clone() * x[t[2]].clone()
    })
}

pub fn lagrangian_cf<T: Scalar>(
    g: &OrientedGraph,
    w: &WeightVector<T>,
) -> Result<LagrangianValue<T>> {
    check_len(g.n(), w)?;
    let x = w.as_slice();
    let triple_term = triple_sum(build_cf(g).iter(), x);
    let arc_sum = g
        .arcs()
        .fold(T::zero(), |acc, (u, v)| acc + x[u].square() * x[v].clone());
    Ok(LagrangianValue::from_terms(triple_term, arc_sum * T::half(), T::zero()))
}

pub fn lagrangian_bf<T: Scalar>(
    g: &UndirectedGraph,
    w: &WeightVector<T>,
) -> Result<LagrangianValue<T>> {
    check_len(g.n(), w)?;
    let x = w.as_slice();
    let triple_term = triple_sum(build_bf(g).iter(), x);
    let mut pair_sum = T::zero();
    let mut edge_sum = T::zero();
    for (u, v) in g.edges() {
        let xy = x[u].clone() * x[v].clone();
        pair_sum = pair_sum + xy.clone() * (x[u].clone() + x[v].clone());
        edge_sum = edge_sum + xy;
    }
    Ok(LagrangianValue::from_terms(
        triple_term,
        pair_sum * T::half(),
        edge_sum.square() * T::half(),
    ))
}

/// Closed form of `L_BF(G(A)) - L_CF(A)`:
/// `1/2 sum_x x (sum_{x->y} y)^2 - 1/2 (sum_{(x,y) in A} xy)^2`.
pub fn step_gap<T: Scalar>(g: &OrientedGraph, w: &WeightVector<T>) -> Result<T> {
    check_len(g.n(), w)?;
    let x = w.as_slice();
    let mut spread = T::zero();
    for u in 0..g.n() {
        let out = g.out_neighbors(u).fold(T::zero(), |acc, v| acc + x[v].clone());
        spread = spread + x[u].clone() * out.square();
    }
    let arc_sum = g
        .arcs()
        .fold(T::zero(), |acc, (u, v)| acc + x[u].clone() * x[v].clone());
    Ok((spread - arc_sum.square()) * T::half())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    #[serde(serialize_with = "serde_scalar::one")]
    pub density: Rational,
    #[serde(serialize_with = "serde_scalar::one")]
    pub uniform_lagrangian: Rational,
    /// Finite-n upper bound `6 L n^3 / (n (n-1) (n-2))` on the density.
    #[serde(serialize_with = "serde_scalar::one")]
    pub implied_bound: Rational,
}

pub fn density_from_uniform(g: &OrientedGraph) -> Result<DensityReport> {
    let n = g.n();
    if n < 3 {
        return domain(format!("density needs at least 3 vertices, got {n}"));
    }
    let density = edge_density(&build_cf(g))?;
    let uniform_lagrangian = lagrangian_cf(g, &WeightVector::<Rational>::uniform(n)?)?.value;
    let n3 = Rational::from_count(n * n * n);
    let falling = Rational::from_count(n * (n - 1) * (n - 2));
    let implied_bound = Rational::from_count(6) * &uniform_lagrangian * n3 / falling;
    debug_assert!(density <= implied_bound || uniform_lagrangian.is_zero());
    Ok(DensityReport {
        density,
        uniform_lagrangian,
        implied_bound,
    })
}
