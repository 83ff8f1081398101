//! Closed intervals over any [`Scalar`]. Over [`Rational`] there is no
//! rounding, so every enclosure is exact-endpoint and sound.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use super::Cell;
use crate::poly::Poly3;
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Interval<T: Scalar> {
    lo: T,
    hi: T,
}

fn min2<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

fn max2<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: T) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn scale(&self, c: &T) -> Self {
        let a = self.lo.clone() * c.clone();
        let b = self.hi.clone() * c.clone();
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::point(T::one());
        }
        let p = |x: &T| (1..k).fold(x.clone(), |acc, _| acc * x.clone());
        let (a, b) = (p(&self.lo), p(&self.hi));
        if k % 2 == 1 || !self.lo.is_negative() {
            Interval { lo: a, hi: b }
        } else if !self.hi.is_positive() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: T::zero(), hi: max2(a, b) }
        }
    }
}

impl<T: Scalar> Add for &Interval<T> {
    type Output = Interval<T>;

    fn add(self, rhs: &Interval<T>) -> Interval<T> {
        Interval {
            lo: self.lo.clone() + rhs.lo.clone(),
            hi: self.hi.clone() + rhs.hi.clone(),
        }
    }
}

impl<T: Scalar> Sub for &Interval<T> {
    type Output = Interval<T>;

    fn sub(self, rhs: &Interval<T>) -> Interval<T> {
        Interval {
            lo: self.lo.clone() - rhs.hi.clone(),
            hi: self.hi.clone() - rhs.lo.clone(),
        }
    }
}

impl<T: Scalar> Mul for &Interval<T> {
    type Output = Interval<T>;

    fn mul(self, rhs: &Interval<T>) -> Interval<T> {
        let products = [
            self.lo.clone() * rhs.lo.clone(),
            self.lo.clone() * rhs.hi.clone(),
            self.hi.clone() * rhs.lo.clone(),
            self.hi.clone() * rhs.hi.clone(),
        ];
        let lo = products.iter().cloned().reduce(min2).expect("four products");
        let hi = products.into_iter().reduce(max2).expect("four products");
        Interval { lo, hi }
    }
}

/// Natural interval extension of `p`, monomial by monomial.
pub fn eval_interval<T: Scalar>(
    p: &Poly3,
    boxes: &[Interval<T>; 3],
    convert: impl Fn(&Rational) -> T,
) -> Interval<T> {
    p.terms().fold(Interval::point(T::zero()), |acc, (e, c)| {
        let mono = (0..3).fold(Interval::point(T::one()), |m, k| &m * &boxes[k].pow(e[k]));
        &acc + &mono.scale(&convert(c))
    })
}

/// A rational no larger than the minimum of `p` on the cell.
pub fn interval_lower_bound(p: &Poly3, cell: &Cell) -> Rational {
    let boxes = cell.intervals();
    let enclosure = eval_interval(p, &boxes, Clone::clone);
    debug_assert!(enclosure.lo() <= enclosure.hi() || enclosure.lo().is_zero());
    enclosure.lo
}
