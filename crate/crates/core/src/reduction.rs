//! Symmetrization: merge a non-adjacent pair `a, b` into one vertex of
//! weight `w_a + w_b`, keeping whichever of the two merged graphs has the
//! larger `L_BF`, until the graph is complete.
//!
//! With `S_a`, `S_b` the neighbor weight sums and `S_ab` the common
//! neighbor weight,
//!
//! ```text
//! a L(G_a) + b L(G_b) - (a + b) L(G) = ab(a+b) (1/2 (S_a + S_b - (S_a - S_b)^2) - S_ab)
//! ```
//!
//! and the right side is nonnegative because `(S_a - S_b)^2 <= |S_a - S_b|`,
//! so at least one branch does not decrease the Lagrangian.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{UndirectedGraph, Vertex};
use crate::lagrangian::{lagrangian_bf, WeightVector};
use crate::scalar::Scalar;
use crate::serde_scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct WeightedGraph<T: Scalar> {
    #[serde(serialize_with = "serialize_edges")]
    graph: UndirectedGraph,
    weights: WeightVector<T>,
}

fn serialize_edges<S: serde::Serializer>(g: &UndirectedGraph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(g.edges().map(|(u, v)| [u, v]))
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn new(graph: UndirectedGraph, weights: WeightVector<T>) -> Result<Self> {
        if graph.n() != weights.len() {
            return domain(format!(
                "{} weights for a graph on {} vertices",
                weights.len(),
                graph.n()
            ));
        }
        Ok(WeightedGraph { graph, weights })
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn weights(&self) -> &WeightVector<T> {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn lagrangian(&self) -> T {
        lagrangian_bf(&self.graph, &self.weights)
            .expect("lengths agree by construction")
            .value
    }

    fn check_pair(&self, a: Vertex, b: Vertex) -> Result<()> {
        if a == b {
            return domain(format!("cannot merge vertex {a} with itself"));
        }
        if a >= self.n() || b >= self.n() {
            return domain(format!("pair ({a},{b}) out of range for {} vertices", self.n()));
        }
        if self.graph.has_edge(a, b) {
            return domain(format!("({a},{b}) is an edge; only non-adjacent pairs merge"));
        }
        Ok(())
    }
}

/// Which endpoint of the merged pair survives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Keep {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct NeighborSums<T: Scalar> {
    #[serde(serialize_with = "serde_scalar::one")]
    pub s_a: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub s_b: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub s_ab: T,
}

pub fn neighbor_sums<T: Scalar>(wg: &WeightedGraph<T>, a: Vertex, b: Vertex) -> Result<NeighborSums<T>> {
    wg.check_pair(a, b)?;
    let x = wg.weights.as_slice();
    let g = &wg.graph;
    let mut sums = NeighborSums {
        s_a: T::zero(),
        s_b: T::zero(),
        s_ab: T::zero(),
    };
    for (v, xv) in x.iter().enumerate() {
        let (na, nb) = (g.has_edge(a, v), g.has_edge(b, v));
        if na {
            sums.s_a = sums.s_a.clone() + xv.clone();
        }
        if nb {
            sums.s_b = sums.s_b.clone() + xv.clone();
        }
        // a, b non-adjacent: {a, b, v} spans two edges iff v is a common neighbor
        if na && nb {
            sums.s_ab = sums.s_ab.clone() + xv.clone();
        }
    }
    Ok(sums)
}

fn merge_unchecked<T: Scalar>(wg: &WeightedGraph<T>, keep: Vertex, drop: Vertex) -> WeightedGraph<T> {
    let mut weights = wg.weights.as_slice().to_vec();
    weights[keep] = weights[keep].clone() + weights[drop].clone();
    weights.remove(drop);
    WeightedGraph {
        graph: wg.graph.without_vertex(drop),
        weights: WeightVector::from_trusted(weights),
    }
}

/// Deletes the discarded endpoint and moves its weight onto the kept one.
/// Labels above the deleted vertex shift down by one.
pub fn merge<T: Scalar>(wg: &WeightedGraph<T>, a: Vertex, b: Vertex, keep: Keep) -> Result<WeightedGraph<T>> {
    wg.check_pair(a, b)?;
    Ok(match keep {
        Keep::A => merge_unchecked(wg, a, b),
        Keep::B => merge_unchecked(wg, b, a),
    })
}

/// Both sides of the merge identity, left unevaluated against each other.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct MergeIdentity<T: Scalar> {
    #[serde(serialize_with = "serde_scalar::one")]
    pub lhs: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub rhs: T,
}

pub fn merge_identity_check<T: Scalar>(wg: &WeightedGraph<T>, a: Vertex, b: Vertex) -> Result<MergeIdentity<T>> {
    let sums = neighbor_sums(wg, a, b)?;
    let (wa, wb) = (wg.weights[a].clone(), wg.weights[b].clone());
    let l = wg.lagrangian();
    let la = merge_unchecked(wg, a, b).lagrangian();
    let lb = merge_unchecked(wg, b, a).lagrangian();
    let total = wa.clone() + wb.clone();
    let lhs = wa.clone() * la + wb.clone() * lb - total.clone() * l;
    let gap = sums.s_a.clone() - sums.s_b.clone();
    let bracket = (sums.s_a + sums.s_b - gap.square()) * T::half() - sums.s_ab;
    let rhs = wa * wb * total * bracket;
    Ok(MergeIdentity { lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct MergeStep<T: Scalar> {
    /// The merged pair in the labels of the graph at this step.
    pub pair: (Vertex, Vertex),
    /// The same pair in the input graph's labels.
    pub original_pair: (Vertex, Vertex),
    pub kept: Vertex,
    pub branch: Keep,
    #[serde(flatten)]
    pub sums: NeighborSums<T>,
    #[serde(serialize_with = "serde_scalar::one")]
    pub lagrangian_keep_a: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub lagrangian_keep_b: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub lagrangian_before: T,
    #[serde(serialize_with = "serde_scalar::one")]
    pub lagrangian_after: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct Reduction<T: Scalar> {
    #[serde(rename = "final")]
    pub final_graph: WeightedGraph<T>,
    /// Input label of each surviving vertex.
    pub origin: Vec<Vertex>,
    pub trace: Vec<MergeStep<T>>,
}

/// Merges the lexicographically first non-edge until the graph is
/// complete. Each step keeps the branch with the larger Lagrangian; ties
/// keep the smaller label.
pub fn reduce_to_complete<T: Scalar>(wg: &WeightedGraph<T>) -> Reduction<T> {
    let mut current = wg.clone();
    let mut origin: Vec<Vertex> = (0..wg.n()).collect();
    let mut trace = Vec::new();
    loop {
        let Some((a, b)) = current.graph.non_edges().next() else {
            break;
        };
        let sums = neighbor_sums(&current, a, b).expect("non-edge");
        let before = current.lagrangian();
        let keep_a = merge_unchecked(&current, a, b);
        let keep_b = merge_unchecked(&current, b, a);
        let (la, lb) = (keep_a.lagrangian(), keep_b.lagrangian());
        let branch = if lb > la { Keep::B } else { Keep::A };
        let (kept, dropped, next, after) = match branch {
            Keep::A => (a, b, keep_a, la.clone()),
            Keep::B => (b, a, keep_b, lb.clone()),
        };
        trace.push(MergeStep {
            pair: (a, b),
            original_pair: (origin[a], origin[b]),
            kept: origin[kept],
            branch,
            sums,
            lagrangian_keep_a: la,
            lagrangian_keep_b: lb,
            lagrangian_before: before,
            lagrangian_after: after,
        });
        origin.remove(dropped);
        current = next;
    }
    Reduction {
        final_graph: current,
        origin,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn wg(n: usize, edges: &[(usize, usize)], w: &[(i64, i64)]) -> WeightedGraph<Rational> {
        let g = UndirectedGraph::new(n, edges.iter().copied()).unwrap();
        let w = WeightVector::new(w.iter().map(|&(p, d)| q(p, d)).collect()).unwrap();
        WeightedGraph::new(g, w).unwrap()
    }

    fn cherry() -> WeightedGraph<Rational> {
        wg(3, &[(0, 2), (1, 2)], &[(1, 4), (1, 4), (1, 2)])
    }

    #[test]
    fn neighbor_sum_examples() {
        let s = neighbor_sums(&cherry(), 0, 1).unwrap();
        assert_eq!((s.s_a, s.s_b, s.s_ab), (q(1, 2), q(1, 2), q(1, 2)));
        let empty = wg(3, &[], &[(1, 5), (3, 5), (1, 5)]);
        let s = neighbor_sums(&empty, 0, 1).unwrap();
        assert!(s.s_a.is_zero() && s.s_b.is_zero() && s.s_ab.is_zero());
        let star = wg(4, &[(2, 0), (2, 1), (2, 3)], &[(1, 4); 4]);
        let s = neighbor_sums(&star, 0, 1).unwrap();
        assert_eq!((s.s_a, s.s_b, s.s_ab), (q(1, 4), q(1, 4), q(1, 4)));
    }

    #[test]
    fn neighbor_sums_reject_edges() {
        assert!(neighbor_sums(&cherry(), 0, 2).is_err());
        assert!(neighbor_sums(&cherry(), 1, 1).is_err());
    }

    #[test]
    fn merge_examples() {
        let two = wg(2, &[], &[(1, 2), (1, 2)]);
        let m = merge(&two, 0, 1, Keep::A).unwrap();
        assert_eq!(m.n(), 1);
        assert_eq!(m.weights().as_slice(), &[q(1, 1)]);

        let m = merge(&cherry(), 0, 1, Keep::A).unwrap();
        assert_eq!(m.graph(), &UndirectedGraph::complete(2));
        assert_eq!(m.weights().as_slice(), &[q(1, 2), q(1, 2)]);
        assert_eq!(m.lagrangian(), q(3, 32));
    }

    #[test]
    fn merge_errors() {
        assert!(merge(&cherry(), 0, 2, Keep::A).is_err());
        assert!(merge(&cherry(), 1, 1, Keep::B).is_err());
    }

    #[test]
    fn zero_weight_merge_preserves_lagrangian() {
        let g = wg(4, &[(0, 2), (1, 3), (2, 3)], &[(1, 3), (0, 1), (1, 3), (1, 3)]);
        let m = merge(&g, 0, 1, Keep::A).unwrap();
        assert_eq!(m.lagrangian(), g.lagrangian());
    }

    #[test]
    fn identity_examples() {
        let id = merge_identity_check(&cherry(), 0, 1).unwrap();
        assert!(id.lhs.is_zero() && id.rhs.is_zero());
        let id = merge_identity_check(&wg(2, &[], &[(1, 2), (1, 2)]), 0, 1).unwrap();
        assert!(id.lhs.is_zero() && id.rhs.is_zero());
        let g = wg(4, &[(0, 2), (0, 3), (1, 3)], &[(1, 6), (1, 3), (1, 12), (5, 12)]);
        let id = merge_identity_check(&g, 0, 1).unwrap();
        assert_eq!(id.lhs, id.rhs);
    }

    #[test]
    fn reduce_examples() {
        let k3 = wg(3, &[(0, 1), (0, 2), (1, 2)], &[(1, 3); 3]);
        let r = reduce_to_complete(&k3);
        assert!(r.trace.is_empty());
        assert_eq!(r.final_graph, k3);

        let empty = wg(3, &[], &[(1, 2), (1, 4), (1, 4)]);
        let r = reduce_to_complete(&empty);
        assert_eq!(r.final_graph.n(), 1);
        assert!(r.final_graph.lagrangian().is_zero());
        assert_eq!(r.trace.len(), 2);

        let r = reduce_to_complete(&cherry());
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.final_graph.graph(), &UndirectedGraph::complete(2));
        assert_eq!(r.final_graph.lagrangian(), q(3, 32));
        assert_eq!(r.trace[0].lagrangian_before, q(3, 32));
        // symmetric pair: tie resolved toward the smaller label
        assert_eq!(r.trace[0].branch, Keep::A);
        assert_eq!(r.origin, vec![0, 2]);
    }

    #[test]
    fn trace_tracks_original_labels() {
        let g = wg(4, &[(0, 1), (2, 3), (1, 2)], &[(1, 4); 4]);
        let r = reduce_to_complete(&g);
        assert!(r.final_graph.graph().is_complete());
        for step in &r.trace {
            assert!(step.lagrangian_after >= step.lagrangian_before);
        }
        assert_eq!(r.trace[0].pair, (0, 2));
        assert_eq!(r.trace[0].original_pair, (0, 2));
        assert_eq!(r.origin.len(), r.final_graph.n());
    }
}
