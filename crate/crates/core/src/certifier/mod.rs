//! Branch-and-bound certificate that `h = 3/32 - g >= 0` on
//! `D = {x1 >= x2 >= x3 >= 0, x1 + x2 + x3 <= 1}`.
//!
//! All arithmetic is exact. The unit cube is bisected along longest edges;
//! a cell is discharged when its interior misses `D`, when an interval or
//! Bernstein bound is nonnegative, or when it sits inside the excision box
//! of a declared zero of `h`. Inside each excision the polynomial is
//! evaluated exactly on a fine grid and the minimum is reported.

mod bernstein;
mod interval;

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use bernstein::{bernstein_coefficients, bernstein_lower_bound, BernsteinTensor};
pub use interval::{eval_interval, interval_lower_bound, Interval};

use crate::error::{domain, Error, Result};
use crate::poly::{expand_h, Poly3};
use crate::scalar::{best_rational, Scalar};
use crate::simplex::maximize;
use crate::{serde_scalar, Rational};

pub type Point3 = [Rational; 3];

/// Axis-aligned box with rational corners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    #[serde(serialize_with = "serde_scalar::point3")]
    lo: Point3,
    #[serde(serialize_with = "serde_scalar::point3")]
    hi: Point3,
    depth: u32,
}

impl Cell {
    pub fn new(lo: Point3, hi: Point3, depth: u32) -> Self {
        assert!((0..3).all(|k| lo[k] <= hi[k]), "inverted cell");
        Cell { lo, hi, depth }
    }

    pub fn unit() -> Self {
        let z = Rational::zero();
        let o = Rational::one();
        Cell::new([z.clone(), z.clone(), z], [o.clone(), o.clone(), o], 0)
    }

    pub fn lo(&self) -> &Point3 {
        &self.lo
    }

    pub fn hi(&self) -> &Point3 {
        &self.hi
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn widths(&self) -> Point3 {
        [0, 1, 2].map(|k| &self.hi[k] - &self.lo[k])
    }

    pub fn volume(&self) -> Rational {
        let [a, b, c] = self.widths();
        a * b * c
    }

    pub fn intervals(&self) -> [Interval<Rational>; 3] {
        [0, 1, 2].map(|k| Interval::new(self.lo[k].clone(), self.hi[k].clone()))
    }

    /// Splits the longest edge (lowest axis on ties) at its midpoint.
    pub fn bisect(&self) -> (Cell, Cell) {
        let w = self.widths();
        let axis = (0..3).fold(0, |best, k| if w[k] > w[best] { k } else { best });
        let mid = (&self.lo[axis] + &self.hi[axis]) / Rational::from_count(2);
        let mut left_hi = self.hi.clone();
        left_hi[axis] = mid.clone();
        let mut right_lo = self.lo.clone();
        right_lo[axis] = mid;
        (
            Cell::new(self.lo.clone(), left_hi, self.depth + 1),
            Cell::new(right_lo, self.hi.clone(), self.depth + 1),
        )
    }

    pub fn contains(&self, x: &Point3) -> bool {
        (0..3).all(|k| self.lo[k] <= x[k] && x[k] <= self.hi[k])
    }

    /// Whether the cell lies in the box of half-width `radius` about `center`.
    pub fn within(&self, center: &Point3, radius: &Rational) -> bool {
        (0..3).all(|k| self.lo[k] >= &center[k] - radius && self.hi[k] <= &center[k] + radius)
    }

    /// True when some single constraint of `D` fails on the open cell.
    pub fn misses_domain(&self) -> bool {
        let (lo, hi) = (&self.lo, &self.hi);
        hi[0] <= lo[1]
            || hi[1] <= lo[2]
            || hi[2].is_negative()
            || hi[2].is_zero()
            || &lo[0] + &lo[1] + &lo[2] >= Rational::one()
    }

    fn sort_key(&self) -> (&Point3, &Point3) {
        (&self.lo, &self.hi)
    }
}

pub fn in_domain(x: &Point3) -> bool {
    x[0] >= x[1] && x[1] >= x[2] && !x[2].is_negative() && &x[0] + &x[1] + &x[2] <= Rational::one()
}

/// Exact `h(x1, x2, x3)` for a point of `D`.
pub fn check_point_exact(x1: &Rational, x2: &Rational, x3: &Rational) -> Result<Rational> {
    let x = [x1.clone(), x2.clone(), x3.clone()];
    if !in_domain(&x) {
        return domain(format!(
            "({}, {}, {}) is outside x1 >= x2 >= x3 >= 0, x1 + x2 + x3 <= 1",
            x1.render(),
            x2.render(),
            x3.render()
        ));
    }
    Ok(expand_h().eval_exact(&x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Interval,
    Bernstein,
    Both,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" => Ok(Method::Interval),
            "bernstein" => Ok(Method::Bernstein),
            "both" => Ok(Method::Both),
            other => domain(format!("unknown method {other:?}; expected interval, bernstein or both")),
        }
    }
}

/// How a leaf was discharged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafMethod {
    IntervalBound,
    BernsteinBound,
    OutsideDomain,
    ExcisedBall,
    /// Reserved for a local expansion proof inside excisions; not emitted yet.
    LocalExpansion,
    /// Depth limit reached with a negative bound.
    Undischarged,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Leaf {
    #[serde(flatten)]
    pub cell: Cell,
    pub method: LeafMethod,
    #[serde(serialize_with = "opt_rational")]
    pub bound: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excision: Option<usize>,
}

fn opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.render()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridEvidence {
    #[serde(serialize_with = "serde_scalar::one")]
    pub pitch: Rational,
    pub points_evaluated: u64,
    #[serde(serialize_with = "opt_rational")]
    pub minimum: Option<Rational>,
    /// Number of grid points attaining the minimum.
    pub minimizer_count: u64,
    /// The first few minimizers in lexicographic order.
    #[serde(serialize_with = "points")]
    pub minimizers: Vec<Point3>,
}

fn points<S: serde::Serializer>(v: &[Point3], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.iter().map(Scalar::render).collect::<Vec<_>>()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Excision {
    #[serde(serialize_with = "serde_scalar::point3")]
    pub center: Point3,
    #[serde(serialize_with = "serde_scalar::one")]
    pub radius: Rational,
    pub excised_cells: usize,
    pub evidence: GridEvidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum CertStatus {
    CertifiedOutsideExcisions,
    /// Depth limit reached with cells neither excised nor bounded.
    Indeterminate,
    /// A grid point inside an excision has `h < 0`.
    Violated,
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertStatus::CertifiedOutsideExcisions => "CERTIFIED-OUTSIDE-EXCISIONS",
            CertStatus::Indeterminate => "INDETERMINATE",
            CertStatus::Violated => "VIOLATED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub status: CertStatus,
    pub polynomial: String,
    #[serde(serialize_with = "serde_scalar::one")]
    pub delta: Rational,
    pub max_depth: u32,
    pub method: Method,
    pub cells_processed: usize,
    pub deepest_leaf: u32,
    pub excisions: Vec<Excision>,
    /// Cells left at the depth limit.
    pub undischarged: Vec<Cell>,
    pub limitation: &'static str,
    pub leaves: Vec<Leaf>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertStatus::CertifiedOutsideExcisions
    }

    /// The first leaf (in canonical order) whose closed cell holds `x`.
    pub fn locate(&self, x: &Point3) -> Option<&Leaf> {
        self.leaves.iter().find(|l| l.cell.contains(x))
    }
}

const EXCISION_LIMITATION: &str =
    "inside excisions nonnegativity is supported by exact grid evaluation only";

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub delta: Rational,
    pub max_depth: u32,
    pub method: Method,
    pub excision_centers: Vec<Point3>,
    /// Grid pitch inside excisions is `delta / grid_divisions`.
    pub grid_divisions: u32,
}

impl CertifyConfig {
    pub fn new(delta: Rational, max_depth: u32) -> Self {
        CertifyConfig {
            delta,
            max_depth,
            method: Method::Both,
            excision_centers: Vec::new(),
            grid_divisions: 64,
        }
    }
}

struct Pending {
    bound: Rational,
    seq: usize,
    cell: Cell,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    // worst (lowest) bound first, then creation order
    fn cmp(&self, other: &Self) -> Ordering {
        Reverse(&self.bound)
            .cmp(&Reverse(&other.bound))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

enum Assessment {
    Discharged(LeafMethod, Option<Rational>),
    Open(Rational),
}

fn assess(p: &Poly3, cell: &Cell, method: Method) -> Assessment {
    if cell.misses_domain() {
        return Assessment::Discharged(LeafMethod::OutsideDomain, None);
    }
    let mut best: Option<Rational> = None;
    if matches!(method, Method::Interval | Method::Both) {
        let b = interval_lower_bound(p, cell);
        if !b.is_negative() {
            return Assessment::Discharged(LeafMethod::IntervalBound, Some(b));
        }
        best = Some(b);
    }
    if matches!(method, Method::Bernstein | Method::Both) {
        let b = bernstein_lower_bound(p, cell);
        if !b.is_negative() {
            return Assessment::Discharged(LeafMethod::BernsteinBound, Some(b));
        }
        best = Some(best.map_or(b.clone(), |a| a.max(b)));
    }
    Assessment::Open(best.expect("some method ran"))
}

/// Equality candidates for `h` from the 3-coordinate simplex optimizer:
/// the sorted argmax, snapped to small denominators, kept only if `h`
/// vanishes there exactly.
pub fn equality_candidates(h: &Poly3, restarts: usize, seed: u64) -> Result<Vec<Point3>> {
    let opt = maximize(3, restarts, seed, 1e-12)?;
    let mut x = opt.point.clone();
    x.sort_by(|a, b| b.total_cmp(a));
    let p: Point3 = [0, 1, 2].map(|k| best_rational(x[k], 1000));
    Ok(if in_domain(&p) && h.eval_exact(&p).is_zero() {
        vec![p]
    } else {
        Vec::new()
    })
}

/// Certifies `h >= 0` on `D` with excisions at the optimizer's zeros.
pub fn certify(delta: &Rational, max_depth: u32, method: Method) -> Result<Certificate> {
    let h = expand_h();
    let mut cfg = CertifyConfig::new(delta.clone(), max_depth);
    cfg.method = method;
    cfg.excision_centers = equality_candidates(&h, 100, 0)?;
    certify_polynomial(&h, &cfg)
}

pub fn certify_polynomial(p: &Poly3, cfg: &CertifyConfig) -> Result<Certificate> {
    if !cfg.delta.is_positive() {
        return domain(format!("delta must be positive, got {}", cfg.delta.render()));
    }
    if cfg.grid_divisions == 0 {
        return domain("grid divisions must be positive");
    }
    let mut leaves = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut processed = 0usize;
    let mut push = |cell: Cell, leaves: &mut Vec<Leaf>, heap: &mut BinaryHeap<Pending>| {
        processed += 1;
        match assess(p, &cell, cfg.method) {
            Assessment::Discharged(method, bound) => leaves.push(Leaf {
                cell,
                method,
                bound,
                excision: None,
            }),
            Assessment::Open(bound) => {
                seq += 1;
                heap.push(Pending { bound, seq, cell });
            }
        }
    };
    push(Cell::unit(), &mut leaves, &mut heap);
    let mut undischarged = Vec::new();
    while let Some(Pending { bound, cell, .. }) = heap.pop() {
        if let Some(i) = cfg
            .excision_centers
            .iter()
            .position(|c| cell.within(c, &cfg.delta))
        {
            leaves.push(Leaf {
                cell,
                method: LeafMethod::ExcisedBall,
                bound: Some(bound),
                excision: Some(i),
            });
        } else if cell.depth >= cfg.max_depth {
            undischarged.push(cell.clone());
            leaves.push(Leaf {
                cell,
                method: LeafMethod::Undischarged,
                bound: Some(bound),
                excision: None,
            });
        } else {
            let (l, r) = cell.bisect();
            push(l, &mut leaves, &mut heap);
            push(r, &mut leaves, &mut heap);
        }
    }
    leaves.sort_by(|a, b| a.cell.sort_key().cmp(&b.cell.sort_key()));
    undischarged.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));

    let excisions: Vec<Excision> = cfg
        .excision_centers
        .iter()
        .enumerate()
        .map(|(i, c)| Excision {
            center: c.clone(),
            radius: cfg.delta.clone(),
            excised_cells: leaves.iter().filter(|l| l.excision == Some(i)).count(),
            evidence: grid_evidence(p, c, &cfg.delta, cfg.grid_divisions),
        })
        .collect();
    let violated = excisions
        .iter()
        .any(|e| e.evidence.minimum.as_ref().is_some_and(Signed::is_negative));
    let status = if violated {
        CertStatus::Violated
    } else if undischarged.is_empty() {
        CertStatus::CertifiedOutsideExcisions
    } else {
        CertStatus::Indeterminate
    };
    Ok(Certificate {
        status,
        polynomial: p.to_string(),
        delta: cfg.delta.clone(),
        max_depth: cfg.max_depth,
        method: cfg.method,
        cells_processed: processed,
        deepest_leaf: leaves.iter().map(|l| l.cell.depth).max().unwrap_or(0),
        excisions,
        undischarged,
        limitation: EXCISION_LIMITATION,
        leaves,
    })
}

const MINIMIZERS_KEPT: usize = 16;

/// `p` scaled to integer arithmetic on the lattice `N / scale`.
struct LatticePoly {
    terms: Vec<([u32; 3], BigInt)>,
    small: Option<Vec<([u32; 3], i128)>>,
    denominator: Rational,
}

impl LatticePoly {
    fn new(p: &Poly3, scale: &BigInt, max_numerator: &BigInt) -> Self {
        let degree = p.total_degree();
        let coef_lcm = p
            .terms()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let terms: Vec<([u32; 3], BigInt)> = p
            .terms()
            .map(|(e, c)| {
                let shift = degree - e.iter().sum::<u32>();
                let k = c * Rational::from_integer(coef_lcm.clone()) * Rational::from_integer(scale.pow(shift));
                (*e, k.to_integer())
            })
            .collect();
        // every partial sum stays below sum |K_e| * max^|e|
        let bound = terms.iter().fold(BigInt::zero(), |acc, (e, k)| {
            acc + k.abs() * max_numerator.pow(e.iter().sum::<u32>())
        });
        let small = (bound.bits() < 120)
            .then(|| terms.iter().map(|(e, k)| (*e, k.to_i128().expect("fits"))).collect());
        LatticePoly {
            terms,
            small,
            denominator: Rational::from_integer(coef_lcm * scale.pow(degree)),
        }
    }

    fn eval(&self, n: &[i128; 3]) -> Rational {
        let raw = match &self.small {
            Some(small) => BigInt::from(small.iter().fold(0i128, |acc, (e, k)| {
                acc + k * n[0].pow(e[0]) * n[1].pow(e[1]) * n[2].pow(e[2])
            })),
            None => {
                let big = n.map(BigInt::from);
                self.terms.iter().fold(BigInt::zero(), |acc, (e, k)| {
                    acc + k * big[0].pow(e[0]) * big[1].pow(e[1]) * big[2].pow(e[2])
                })
            }
        };
        Rational::from_integer(raw) / &self.denominator
    }
}

#[derive(Default)]
struct GridStats {
    points: u64,
    minimum: Option<Rational>,
    count: u64,
    minimizers: Vec<[i128; 3]>,
}

impl GridStats {
    fn observe(&mut self, value: Rational, n: [i128; 3]) {
        self.points += 1;
        match self.minimum.as_ref().map(|m| value.cmp(m)) {
            Some(Ordering::Greater) => {}
            Some(Ordering::Equal) => {
                self.count += 1;
                if self.minimizers.len() < MINIMIZERS_KEPT {
                    self.minimizers.push(n);
                }
            }
            _ => {
                self.minimum = Some(value);
                self.count = 1;
                self.minimizers = vec![n];
            }
        }
    }

    fn merge(mut self, other: GridStats) -> GridStats {
        let points = self.points + other.points;
        let mut merged = match (self.minimum.as_ref(), other.minimum.as_ref()) {
            (None, _) => other,
            (_, None) => self,
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => self,
                Ordering::Greater => other,
                Ordering::Equal => {
                    self.count += other.count;
                    self.minimizers.extend(other.minimizers);
                    self.minimizers.sort();
                    self.minimizers.truncate(MINIMIZERS_KEPT);
                    self
                }
            },
        };
        merged.points = points;
        merged
    }
}

/// Exact evaluation of `p` on the grid of pitch `delta / divisions` over
/// the excision box, restricted to `D`.
pub fn grid_evidence(p: &Poly3, center: &Point3, delta: &Rational, divisions: u32) -> GridEvidence {
    let pitch = delta / Rational::from_count(divisions as usize);
    let origin: Point3 = [0, 1, 2].map(|k| &center[k] - delta);
    let scale = origin
        .iter()
        .fold(pitch.denom().clone(), |acc, o| acc.lcm(o.denom()));
    let scaled = |r: &Rational| (r * Rational::from_integer(scale.clone())).to_integer();
    let step = scaled(&pitch).to_i128().expect("pitch numerator fits");
    let base = origin.clone().map(|o| scaled(&o).to_i128().expect("grid fits in i128"));
    let top = scale.to_i128().expect("scale fits in i128");
    let steps = 2 * divisions as i128;
    let max_numerator = BigInt::from(top.max(base.iter().map(|b| (b + steps * step).abs()).max().unwrap_or(0)));
    let lattice = LatticePoly::new(p, &scale, &max_numerator);

    let stats = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let mut stats = GridStats::default();
            let n0 = base[0] + i * step;
            for j in 0..=steps {
                let n1 = base[1] + j * step;
                for k in 0..=steps {
                    let n2 = base[2] + k * step;
                    let inside = n0 >= n1 && n1 >= n2 && n2 >= 0 && n0 + n1 + n2 <= top;
                    if inside {
                        let n = [n0, n1, n2];
                        stats.observe(lattice.eval(&n), n);
                    }
                }
            }
            stats
        })
        .reduce(GridStats::default, GridStats::merge);
    let unscale = |n: i128| Rational::new(BigInt::from(n), scale.clone());
    let mut minimizers: Vec<Point3> = stats
        .minimizers
        .iter()
        .map(|n| n.map(unscale))
        .collect();
    minimizers.sort();
    GridEvidence {
        pitch,
        points_evaluated: stats.points,
        minimum: stats.minimum,
        minimizer_count: stats.count,
        minimizers,
    }
}
