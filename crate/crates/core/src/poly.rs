//! Sparse trivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Scalar;
use crate::Rational;

pub type Exponent = [u32; 3];

/// Canonical form: no zero coefficients, monomials sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly3 {
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: Rational, e: Exponent) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// The coordinate `x_{i+1}`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(Rational::one(), e)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of each variable.
    pub fn degrees(&self) -> [u32; 3] {
        let mut d = [0; 3];
        for e in self.terms.keys() {
            for k in 0..3 {
                d[k] = d[k].max(e[k]);
            }
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    /// Evaluation in any scalar type; coefficients are converted first.
    pub fn eval<T: Scalar>(&self, x: &[T; 3], convert: impl Fn(&Rational) -> T) -> T {
        let max = self.degrees();
        let powers: Vec<Vec<T>> = (0..3)
            .map(|k| {
                let mut p = vec![T::one()];
                for _ in 0..max[k] {
                    let next = p.last().expect("nonempty").clone() * x[k].clone();
                    p.push(next);
                }
                p
            })
            .collect();
        self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            acc + convert(c)
                * powers[0][e[0] as usize].clone()
                * powers[1][e[1] as usize].clone()
                * powers[2][e[2] as usize].clone()
        })
    }

    pub fn eval_exact(&self, x: &[Rational; 3]) -> Rational {
        self.eval(x, Clone::clone)
    }

    pub fn eval_f64(&self, x: &[f64; 3]) -> f64 {
        self.eval(x, |c| c.to_f64())
    }
}

impl Add for &Poly3 {
    type Output = Poly3;

    fn add(self, rhs: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly3 {
    type Output = Poly3;

    fn sub(self, rhs: &Poly3) -> Poly3 {
        self + &(-rhs)
    }
}

impl Neg for &Poly3 {
    type Output = Poly3;

    fn neg(self) -> Poly3 {
        Poly3::from_terms(self.terms.iter().map(|(e, c)| (*e, -c)))
    }
}

impl Mul for &Poly3 {
    type Output = Poly3;

    fn mul(self, rhs: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{}", k + 1)?,
                    _ => write!(f, "*x{}^{p}", k + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// `h = 3/32 - g`, expanded from
/// `g = 1/6 (1 - x1^3 - x2^3 - x3^3) - 1/8 (1 - x1^2 - x2^2 - x3 (1 - x1 - x2))^2`.
pub fn expand_h() -> Poly3 {
    let q = |p: i64, d: i64| Poly3::constant(Rational::from_ratio(p, d));
    let one = q(1, 1);
    let (x1, x2, x3) = (Poly3::var(0), Poly3::var(1), Poly3::var(2));
    let cubes = &(&x1.pow(3) + &x2.pow(3)) + &x3.pow(3);
    let tail = &x3 * &(&(&one - &x1) - &x2);
    let squares = &(&x1.pow(2) + &x2.pow(2)) + &tail;
    let first = &q(1, 6) * &(&one - &cubes);
    let second = &q(1, 8) * &(&one - &squares).pow(2);
    let g = &first - &second;
    &q(3, 32) - &g
}
