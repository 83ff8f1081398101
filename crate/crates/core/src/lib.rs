//! Exact verification toolkit for the bound `L <= 3/32` on Lagrangians of
//! Fon-der-Flaass type 3-graphs, and the density bound `9/16` it implies.
//!
//! Every evaluator is generic over [`Scalar`]; the aliases below fix the
//! exact rational instantiation used for verification and the `f64`
//! instantiation used by the optimizer.

pub mod certifier;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
pub mod lagrangian;
pub mod pipeline;
pub mod poly;
pub mod reduction;
pub mod scalar;
pub mod serde_scalar;
pub mod simplex;

pub use error::{Error, Result};
pub use graph::{OrientedGraph, TripleSystem, UndirectedGraph};
pub use lagrangian::{LagrangianValue, WeightVector};
pub use reduction::WeightedGraph;
pub use scalar::Scalar;

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type ExactWeights = WeightVector<Rational>;
pub type FloatWeights = WeightVector<f64>;
pub type ExactLagrangian = LagrangianValue<Rational>;
pub type ExactWeightedGraph = WeightedGraph<Rational>;
pub type FloatWeightedGraph = WeightedGraph<f64>;
pub type ExactInterval = certifier::Interval<Rational>;

/// The extremal Lagrangian value `3/32`.
pub fn lagrangian_bound() -> Rational {
    Scalar::from_ratio(3, 32)
}
