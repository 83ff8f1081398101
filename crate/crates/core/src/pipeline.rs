//! End-to-end chain for one weighted orientation:
//!
//! ```text
//! L_CF(A, w) <= L_BF(G(A), w) <= L_BF(K_m, merged w) = closed form
//!            <= g(x1, x2, x3) <= 3/32
//! ```
//!
//! Every link is compared in exact arithmetic.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::certifier::{check_point_exact, CertStatus, Certificate, Leaf, LeafMethod, Point3};
use crate::error::Result;
use crate::graph::OrientedGraph;
use crate::lagrangian::{lagrangian_bf, lagrangian_cf, LagrangianValue, WeightVector};
use crate::reduction::{reduce_to_complete, Reduction, WeightedGraph};
use crate::simplex::{closed_form, majorization_bound_check, ClosedFormInput, MajorizationCheck};
use crate::{lagrangian_bound, serde_scalar, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainLink {
    pub name: &'static str,
    #[serde(serialize_with = "serde_scalar::one")]
    pub lhs: Rational,
    pub relation: &'static str,
    #[serde(serialize_with = "serde_scalar::one")]
    pub rhs: Rational,
    pub pass: bool,
}

impl ChainLink {
    fn le(name: &'static str, lhs: Rational, rhs: Rational) -> Self {
        let pass = lhs <= rhs;
        ChainLink { name, lhs, relation: "<=", rhs, pass }
    }

    fn eq(name: &'static str, lhs: Rational, rhs: Rational) -> Self {
        let pass = lhs == rhs;
        ChainLink { name, lhs, relation: "=", rhs, pass }
    }
}

/// How the certificate accounts for the trivariate point, when one is supplied.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateCover {
    pub status: CertStatus,
    pub leaf_method: Option<LeafMethod>,
    pub covered: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub lagrangian_cf: LagrangianValue<Rational>,
    pub lagrangian_bf: LagrangianValue<Rational>,
    pub reduction: Reduction<Rational>,
    /// Merged weights sorted descending and padded with zeros to length 3.
    #[serde(serialize_with = "serde_scalar::many")]
    pub sorted_weights: Vec<Rational>,
    pub majorization: MajorizationCheck,
    #[serde(serialize_with = "serde_scalar::one")]
    pub h_at_point: Rational,
    pub certificate: Option<CertificateCover>,
    pub links: Vec<ChainLink>,
    pub all_pass: bool,
}

/// A point is covered when some closed leaf holding it is discharged by a
/// bound or lies in an excision whose grid minimum is nonnegative. Leaves
/// outside `D` may touch the point on its boundary, so the first leaf found
/// is not enough.
fn cover(cert: &Certificate, x: &Point3) -> CertificateCover {
    let discharges = |l: &Leaf| match l.method {
        LeafMethod::IntervalBound | LeafMethod::BernsteinBound => true,
        LeafMethod::ExcisedBall => l
            .excision
            .and_then(|i| cert.excisions.get(i))
            .and_then(|e| e.evidence.minimum.as_ref())
            .is_some_and(|m| !m.is_negative()),
        _ => false,
    };
    let leaf = cert.leaves.iter().find(|l| l.cell.contains(x) && discharges(l));
    CertificateCover {
        status: cert.status,
        leaf_method: leaf.or_else(|| cert.locate(x)).map(|l| l.method),
        covered: cert.is_certified() && leaf.is_some(),
    }
}

pub fn run_pipeline(
    g: &OrientedGraph,
    w: &WeightVector<Rational>,
    certificate: Option<&Certificate>,
) -> Result<PipelineReport> {
    let l_cf = lagrangian_cf(g, w)?;
    let l_bf = lagrangian_bf(&g.underlying(), w)?;
    let reduction = reduce_to_complete(&WeightedGraph::new(g.underlying(), w.clone())?);
    let reduced = &reduction.final_graph;
    let l_reduced = reduced.lagrangian();
    let monotone = reduction
        .trace
        .iter()
        .all(|s| s.lagrangian_after >= s.lagrangian_before);
    let closed = closed_form(&ClosedFormInput::from_weights(reduced.weights()));

    let mut sorted = reduced.weights().as_slice().to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    while sorted.len() < 3 {
        sorted.push(Rational::zero());
    }
    let majorization = majorization_bound_check(&WeightVector::new(sorted.clone())?)?;
    let point: Point3 = [sorted[0].clone(), sorted[1].clone(), sorted[2].clone()];
    let h = check_point_exact(&point[0], &point[1], &point[2])?;
    let bound = lagrangian_bound();
    let certificate = certificate.map(|c| cover(c, &point));

    let mut links = vec![
        ChainLink::le("L_CF <= L_BF(underlying)", l_cf.value.clone(), l_bf.value.clone()),
        ChainLink::le("L_BF(underlying) <= L_BF(reduced)", l_bf.value.clone(), l_reduced.clone()),
        ChainLink::eq("L_BF(reduced) = closed form", l_reduced, closed.clone()),
        ChainLink::le("closed form <= g(x1, x2, x3)", closed, majorization.trivariate.clone()),
        ChainLink::le("g(x1, x2, x3) <= 3/32", majorization.trivariate.clone(), bound.clone()),
    ];
    links[1].pass &= monotone;
    links[3].pass &= majorization.holds;
    links[4].pass &= !h.is_negative() && certificate.as_ref().is_none_or(|c| c.covered);
    let all_pass = links.iter().all(|l| l.pass);
    debug_assert_eq!(h, bound - &majorization.trivariate);

    Ok(PipelineReport {
        n: g.n(),
        lagrangian_cf: l_cf,
        lagrangian_bf: l_bf,
        reduction,
        sorted_weights: sorted,
        majorization,
        h_at_point: h,
        certificate,
        links,
        all_pass,
    })
}
