//! `L_BF` of a complete graph as a function of power sums, and its
//! maximization over the probability simplex.
//!
//! On `K_n` with weights summing to one,
//! `L_BF = 1/6 (1 - sum x^3) - 1/8 (1 - sum x^2)^2`.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::UndirectedGraph;
use crate::lagrangian::{lagrangian_bf, WeightVector};
use crate::scalar::{best_rational, Scalar};
use crate::{serde_scalar, Rational};

/// A simplex point with cached power sums.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormInput<T: Scalar> {
    x: Vec<T>,
    s2: T,
    s3: T,
}

impl<T: Scalar> ClosedFormInput<T> {
    pub fn new(x: Vec<T>) -> Result<Self> {
        let w = WeightVector::new(x)?;
        Ok(Self::from_weights(&w))
    }

    pub fn from_weights(w: &WeightVector<T>) -> Self {
        let x = w.as_slice().to_vec();
        let (s2, s3) = power_sums(&x);
        ClosedFormInput { x, s2, s3 }
    }

    pub fn point(&self) -> &[T] {
        &self.x
    }

    pub fn s2(&self) -> &T {
        &self.s2
    }

    pub fn s3(&self) -> &T {
        &self.s3
    }
}

fn power_sums<T: Scalar>(x: &[T]) -> (T, T) {
    x.iter().fold((T::zero(), T::zero()), |(s2, s3), v| {
        let sq = v.square();
        (s2 + sq.clone(), s3 + sq * v.clone())
    })
}

fn from_power_sums<T: Scalar>(s2: T, s3: T) -> T {
    let one = T::one();
    (one.clone() - s3) / T::from_count(6) - (one - s2).square() / T::from_count(8)
}

pub fn closed_form<T: Scalar>(input: &ClosedFormInput<T>) -> T {
    from_power_sums(input.s2.clone(), input.s3.clone())
}

/// The closed-form polynomial at any point of `R^n`, simplex or not.
pub fn closed_form_unchecked<T: Scalar>(x: &[T]) -> T {
    let (s2, s3) = power_sums(x);
    from_power_sums(s2, s3)
}

/// Exact agreement of `L_BF(K_n, w)` with the closed form.
pub fn closed_form_matches_definition(w: &WeightVector<Rational>) -> bool {
    let direct = lagrangian_bf(&UndirectedGraph::complete(w.len()), w)
        .expect("lengths agree")
        .value;
    direct == closed_form(&ClosedFormInput::from_weights(w))
}

/// Euclidean gradient of [`closed_form_unchecked`]:
/// `-x_i^2 / 2 + (1 - sum x^2) x_i / 2`.
pub fn gradient<T: Scalar>(x: &[T]) -> Vec<T> {
    let (s2, _) = power_sums(x);
    let slack = T::one() - s2;
    x.iter()
        .map(|v| (slack.clone() * v.clone() - v.square()) * T::half())
        .collect()
}

/// Euclidean projection onto `{x >= 0, sum x = 1}` (sort-based).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let candidate = (cumulative - 1.0) / (i as f64 + 1.0);
        if s - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// `|| P(x + grad f(x)) - x ||`, zero exactly at KKT points.
pub fn projected_residual(x: &[f64]) -> f64 {
    let g = gradient(x);
    let stepped: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + b).collect();
    let p = project_to_simplex(&stepped);
    p.iter()
        .zip(x)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct OptResult {
    pub n: usize,
    pub value: f64,
    pub point: Vec<f64>,
    pub restarts: usize,
    pub seed: u64,
    pub residual: f64,
    pub converged: bool,
    /// `point` rounded to denominators at most `10^6`, summing to one.
    #[serde(serialize_with = "serde_scalar::many")]
    pub exact_point: Vec<Rational>,
    #[serde(serialize_with = "serde_scalar::one")]
    pub exact_value: Rational,
}

struct Ascent {
    point: Vec<f64>,
    value: f64,
    residual: f64,
    converged: bool,
}

const MAX_ITERS: usize = 20_000;
const ARMIJO: f64 = 1e-4;

fn dirichlet_start(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

fn ascend(mut x: Vec<f64>, tol: f64) -> Ascent {
    let mut fx = closed_form_unchecked(&x);
    let mut step: f64 = 1.0;
    let mut residual = projected_residual(&x);
    let mut iters = 0;
    while residual >= tol && iters < MAX_ITERS {
        let g = gradient(&x);
        let mut t = (step * 2.0).min(64.0);
        loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + t * b).collect();
            let y = project_to_simplex(&trial);
            let fy = closed_form_unchecked(&y);
            let ascent: f64 = g.iter().zip(y.iter().zip(&x)).map(|(gi, (yi, xi))| gi * (yi - xi)).sum();
            if fy >= fx + ARMIJO * ascent || t < 1e-12 {
                step = t;
                x = y;
                fx = fy;
                break;
            }
            t *= 0.5;
        }
        residual = projected_residual(&x);
        iters += 1;
    }
    Ascent {
        point: x,
        value: fx,
        converged: residual < tol,
        residual,
    }
}

/// Rounds a float simplex point to rationals with denominator at most
/// `max_denom`, then repairs the sum on the largest coordinate.
pub fn rationalize_point(x: &[f64], max_denom: u64) -> Vec<Rational> {
    let mut r: Vec<Rational> = x
        .iter()
        .map(|&v| best_rational(v.max(0.0), max_denom))
        .collect();
    if r.is_empty() {
        return r;
    }
    let sum = r.iter().fold(Rational::zero(), |acc, v| acc + v);
    let largest = (0..r.len())
        .max_by(|&i, &j| r[i].cmp(&r[j]).then(j.cmp(&i)))
        .expect("nonempty");
    r[largest] = r[largest].clone() + (Rational::from_count(1) - sum);
    r
}

/// Projected-gradient ascent of the closed form from `restarts` flat
/// Dirichlet starts. Restart `k` uses the ChaCha stream `k` of `seed`, so
/// the result does not depend on scheduling.
pub fn maximize(n: usize, restarts: usize, seed: u64, tol: f64) -> Result<OptResult> {
    if n == 0 {
        return domain("the simplex needs at least one coordinate");
    }
    if restarts == 0 {
        return domain("at least one restart is required");
    }
    if tol.is_nan() || tol <= 0.0 {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let runs: Vec<Ascent> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            ascend(dirichlet_start(n, &mut rng), tol)
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, run| {
            let better = run.value > best.value
                || (run.value == best.value && lex_less(&run.point, &best.point));
            if better {
                run
            } else {
                best
            }
        })
        .expect("restarts >= 1");
    let exact_point = rationalize_point(&best.point, 1_000_000);
    let exact_value = closed_form_unchecked(&exact_point);
    Ok(OptResult {
        n,
        value: best.value,
        point: best.point,
        restarts,
        seed,
        residual: best.residual,
        converged: best.converged,
        exact_point,
        exact_value,
    })
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .find(|(x, y)| x != y)
        .is_some_and(|(x, y)| x < y)
}

fn in_trivariate_domain<T: Scalar>(x1: &T, x2: &T, x3: &T) -> bool {
    x1 >= x2 && x2 >= x3 && !x3.is_negative() && x1.clone() + x2.clone() + x3.clone() <= T::one()
}

/// `1/6 (1 - x1^3 - x2^3 - x3^3) - 1/8 (1 - x1^2 - x2^2 - x3 (1 - x1 - x2))^2`
/// without the domain check.
pub fn trivariate_g_unchecked<T: Scalar>(x1: &T, x2: &T, x3: &T) -> T {
    let one = T::one();
    let cubes = x1.cube() + x2.cube() + x3.cube();
    let tail = x3.clone() * (one.clone() - x1.clone() - x2.clone());
    let squares = x1.square() + x2.square() + tail;
    (one.clone() - cubes) / T::from_count(6) - (one - squares).square() / T::from_count(8)
}

/// The trivariate upper bound on `D = {x1 >= x2 >= x3 >= 0, x1 + x2 + x3 <= 1}`.
pub fn trivariate_g<T: Scalar>(x1: &T, x2: &T, x3: &T) -> Result<T> {
    if !in_trivariate_domain(x1, x2, x3) {
        return domain(format!(
            "({}, {}, {}) is outside x1 >= x2 >= x3 >= 0, x1 + x2 + x3 <= 1",
            x1.render(),
            x2.render(),
            x3.render()
        ));
    }
    Ok(trivariate_g_unchecked(x1, x2, x3))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorizationCheck {
    #[serde(serialize_with = "serde_scalar::one")]
    pub power_sum: Rational,
    #[serde(serialize_with = "serde_scalar::one")]
    pub power_sum_bound: Rational,
    #[serde(serialize_with = "serde_scalar::one")]
    pub closed_form: Rational,
    #[serde(serialize_with = "serde_scalar::one")]
    pub trivariate: Rational,
    pub holds: bool,
}

/// For weights sorted descending: `sum x^2 <= x1^2 + x2^2 + x3 (1 - x1 - x2)`
/// and hence `closed_form(w) <= g(x1, x2, x3)`.
pub fn majorization_bound_check(w: &WeightVector<Rational>) -> Result<MajorizationCheck> {
    let x = w.as_slice();
    if x.len() < 3 {
        return domain(format!("need at least 3 weights, got {}", x.len()));
    }
    if x.windows(2).any(|p| p[0] < p[1]) {
        return domain("weights must be sorted in descending order");
    }
    let input = ClosedFormInput::from_weights(w);
    let one = Rational::from_count(1);
    let bound = x[0].square() + x[1].square() + &x[2] * (one - &x[0] - &x[1]);
    let cf = closed_form(&input);
    let g = trivariate_g_unchecked(&x[0], &x[1], &x[2]);
    let holds = *input.s2() <= bound && cf <= g;
    Ok(MajorizationCheck {
        power_sum: input.s2().clone(),
        power_sum_bound: bound,
        closed_form: cf,
        trivariate: g,
        holds,
    })
}
