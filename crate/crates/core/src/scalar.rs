//! Numeric abstraction shared by every evaluator in the crate.
//!
//! Exact verification runs over [`BigRational`]; the optimizer and quick
//! sampling run over `f64` (or `f32`). Anything written against [`Scalar`]
//! works for both.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// True for arithmetic without rounding.
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn to_f64(&self) -> f64;

    /// Whether `sum` is acceptably close to one for a weight vector.
    fn is_unit_sum(sum: &Self) -> bool;

    /// Text form used in reports; `p/q` for rationals.
    fn render(&self) -> String {
        self.to_string()
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn cube(&self) -> Self {
        self.clone() * self.clone() * self.clone()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_unit_sum(sum: &Self) -> bool {
        (sum - 1.0).abs() <= 1e-12
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f32 / denom as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn is_unit_sum(sum: &Self) -> bool {
        (sum - 1.0).abs() <= 1e-6
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_unit_sum(sum: &Self) -> bool {
        sum.is_one()
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

/// Exact rational closest to `x` among those with denominator at most
/// `max_denom` (continued-fraction convergents and semiconvergents).
pub fn best_rational(x: f64, max_denom: u64) -> BigRational {
    assert!(x.is_finite(), "cannot approximate a non-finite value");
    assert!(max_denom >= 1);
    let negative = x < 0.0;
    let target = BigRational::from_f64(x.abs()).expect("finite");
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = target.clone();
    loop {
        let a = rest.floor().to_integer().to_u64().unwrap_or(u64::MAX);
        let q2 = a.checked_mul(q1).and_then(|v| v.checked_add(q0));
        match q2 {
            Some(q2) if q2 <= max_denom => {
                let p2 = a.saturating_mul(p1).saturating_add(p0);
                (p0, q0, p1, q1) = (p1, q1, p2, q2);
            }
            _ => {
                // semiconvergent with the largest admissible partial quotient
                let k = (max_denom - q0).checked_div(q1).unwrap_or(0);
                let semi = ratio(k * p1 + p0, k * q1 + q0);
                let conv = ratio(p1, q1.max(1));
                let best = if (semi.clone() - &target).abs() < (conv.clone() - &target).abs() {
                    semi
                } else {
                    conv
                };
                return if negative { -best } else { best };
            }
        }
        let frac = rest.clone() - rest.floor();
        if frac.is_zero() {
            let best = ratio(p1, q1);
            return if negative { -best } else { best };
        }
        rest = frac.recip();
    }
}

fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `n` choose `k`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::from_ratio(p, d)
    }

    #[test]
    fn render_is_always_p_over_q() {
        assert_eq!(q(3, 32).render(), "3/32");
        assert_eq!(q(0, 5).render(), "0/1");
        assert_eq!(q(-4, 2).render(), "-2/1");
    }

    #[test]
    fn best_rational_snaps_near_halves() {
        assert_eq!(best_rational(0.50003, 1000), q(1, 2));
        assert_eq!(best_rational(0.0, 1000), q(0, 1));
        assert_eq!(best_rational(std::f64::consts::PI, 1000), q(355, 113));
        assert_eq!(best_rational(-0.25, 10), q(-1, 4));
        assert_eq!(best_rational(1.0, 7), q(1, 1));
    }

    #[test]
    fn best_rational_respects_denominator_bound() {
        for &x in &[0.123456789, 0.999999, 1e-9, 0.333333] {
            let r = best_rational(x, 1_000_000);
            assert!(r.denom() <= &BigInt::from(1_000_000));
            assert!((Scalar::to_f64(&r) - x).abs() < 1e-6);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
