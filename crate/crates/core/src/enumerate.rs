//! Exhaustive checks over every labeled orientation on `n` vertices.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{
    build_bf, build_cf, build_f, edge_density, has_independent_4set, has_induced_directed_c4,
    OrientedGraph, Vertex,
};
use crate::lagrangian::{lagrangian_bf, lagrangian_cf, WeightVector};
use crate::scalar::binomial;
use crate::{lagrangian_bound, serde_scalar, Rational};

const VIOLATIONS_KEPT: usize = 100;

pub fn orientation_count(n: usize) -> u64 {
    3u64.pow(binomial(n, 2) as u32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: u64,
    pub arcs: Vec<(Vertex, Vertex)>,
    pub check: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub orientations: u64,
    #[serde(serialize_with = "serde_scalar::one")]
    pub max_cf_density: Rational,
    pub max_cf_density_witness: Vec<(Vertex, Vertex)>,
    #[serde(serialize_with = "serde_scalar::one")]
    pub max_uniform_lagrangian: Rational,
    pub max_uniform_lagrangian_witness: Vec<(Vertex, Vertex)>,
    pub violation_count: u64,
    /// At most the first hundred, by orientation code.
    pub violations: Vec<Violation>,
    /// Excluded from serialized reports so they stay reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl EnumerationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.orientations == orientation_count(self.n)
    }

    pub const CSV_HEADER: &'static str =
        "n,orientations,max_cf_density,max_cf_density_witness,max_uniform_lagrangian,max_uniform_lagrangian_witness,violations";

    pub fn csv_row(&self) -> String {
        let arcs = |a: &[(Vertex, Vertex)]| {
            a.iter()
                .map(|(u, v)| format!("{u}>{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.orientations,
            crate::Scalar::render(&self.max_cf_density),
            arcs(&self.max_cf_density_witness),
            crate::Scalar::render(&self.max_uniform_lagrangian),
            arcs(&self.max_uniform_lagrangian_witness),
            self.violation_count
        )
    }
}

/// Maximum with ties broken toward the smaller orientation code.
#[derive(Clone)]
struct Best {
    value: Rational,
    code: u64,
}

impl Best {
    fn pick(a: Option<Best>, b: Option<Best>) -> Option<Best> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(if b.value > a.value || (b.value == a.value && b.code < a.code) {
                b
            } else {
                a
            }),
        }
    }
}

#[derive(Default)]
struct Summary {
    count: u64,
    density: Option<Best>,
    lagrangian: Option<Best>,
    violation_count: u64,
    violations: Vec<Violation>,
}

impl Summary {
    fn combine(mut self, other: Summary) -> Summary {
        self.count += other.count;
        self.density = Best::pick(self.density, other.density);
        self.lagrangian = Best::pick(self.lagrangian, other.lagrangian);
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.violations.sort_by_key(|v| v.code);
        self.violations.truncate(VIOLATIONS_KEPT);
        self
    }
}

fn examine(n: usize, code: u64, uniform: &WeightVector<Rational>, bound: &Rational) -> Summary {
    let g = OrientedGraph::from_code(n, code);
    let f = build_f(&g);
    let cf = build_cf(&g);
    let bf = build_bf(&g.underlying());
    let l_cf = lagrangian_cf(&g, uniform).expect("uniform weights match").value;
    let l_bf = lagrangian_bf(&g.underlying(), uniform).expect("uniform weights match").value;

    let mut failed = Vec::new();
    if !(f.is_disjoint(&cf) && (f.len() + cf.len()) as u64 == binomial(n, 3)) {
        failed.push("F and CF partition all triples");
    }
    if !cf.is_subset(&bf) {
        failed.push("CF contained in BF(underlying)");
    }
    if l_cf > *bound {
        failed.push("uniform L_CF <= 3/32");
    }
    if l_cf > l_bf {
        failed.push("uniform L_CF <= uniform L_BF");
    }
    let violations: Vec<Violation> = failed
        .into_iter()
        .map(|check| Violation {
            code,
            arcs: g.arcs().collect(),
            check,
        })
        .collect();
    Summary {
        count: 1,
        density: Some(Best {
            value: edge_density(&cf).expect("n >= 3"),
            code,
        }),
        lagrangian: Some(Best { value: l_cf, code }),
        violation_count: violations.len() as u64,
        violations,
    }
}

pub fn enumerate_orientations(n: usize) -> Result<EnumerationReport> {
    if !(3..=6).contains(&n) {
        return domain(format!("enumeration supports 3 <= n <= 6, got {n}"));
    }
    let start = Instant::now();
    let total = orientation_count(n);
    let uniform = WeightVector::<Rational>::uniform(n)?;
    let bound = lagrangian_bound();
    let summary = (0..total)
        .into_par_iter()
        .fold(Summary::default, |acc, code| acc.combine(examine(n, code, &uniform, &bound)))
        .reduce(Summary::default, Summary::combine);
    let density = summary.density.expect("at least one orientation");
    let lagrangian = summary.lagrangian.expect("at least one orientation");
    let witness = |code| OrientedGraph::from_code(n, code).arcs().collect();
    Ok(EnumerationReport {
        n,
        orientations: summary.count,
        max_cf_density_witness: witness(density.code),
        max_cf_density: density.value,
        max_uniform_lagrangian_witness: witness(lagrangian.code),
        max_uniform_lagrangian: lagrangian.value,
        violation_count: summary.violation_count,
        violations: summary.violations,
        wall_time: start.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FdfCounterexample {
    pub code: u64,
    pub arcs: Vec<(Vertex, Vertex)>,
    pub independent_set: [Vertex; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FdfReport {
    pub n: usize,
    pub orientations: u64,
    pub c4_free: u64,
    /// Orientations with an induced directed 4-cycle, not examined.
    pub skipped: u64,
    pub counterexamples: Vec<FdfCounterexample>,
}

impl FdfReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub const CSV_HEADER: &'static str = "n,orientations,c4_free,skipped,counterexamples";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.n,
            self.orientations,
            self.c4_free,
            self.skipped,
            self.counterexamples.len()
        )
    }
}

/// For every orientation without an induced directed 4-cycle, checks that
/// `build_f` leaves no 4-set independent.
pub fn validate_fdf_family(n: usize) -> Result<FdfReport> {
    if !(4..=5).contains(&n) {
        return domain(format!("family validation supports 4 <= n <= 5, got {n}"));
    }
    let total = orientation_count(n);
    let rows: Vec<(bool, Option<FdfCounterexample>)> = (0..total)
        .into_par_iter()
        .map(|code| {
            let g = OrientedGraph::from_code(n, code);
            if has_induced_directed_c4(&g).is_some() {
                return (false, None);
            }
            let found = has_independent_4set(&build_f(&g)).expect("n >= 4");
            let counterexample = found.map(|set| FdfCounterexample {
                code,
                arcs: g.arcs().collect(),
                independent_set: set,
            });
            (true, counterexample)
        })
        .collect();
    let c4_free = rows.iter().filter(|(free, _)| *free).count() as u64;
    Ok(FdfReport {
        n,
        orientations: total,
        c4_free,
        skipped: total - c4_free,
        counterexamples: rows.into_iter().filter_map(|(_, c)| c).collect(),
    })
}
