//! Tensor-product Bernstein coefficients of a [`Poly3`] over a box.
//!
//! After the affine change `x_k = l_k + (u_k - l_k) t_k` the polynomial is
//! written in the Bernstein basis of multidegree `degrees()`. Its range on
//! the box lies within the coefficient range, and the coefficients at
//! corner indices are the values at the corners.

use num_traits::Zero;

use super::Cell;
use crate::poly::Poly3;
use crate::scalar::binomial;
use crate::Rational;

#[derive(Clone, Debug)]
pub struct BernsteinTensor {
    degrees: [usize; 3],
    coefficients: Vec<Rational>,
}

impl BernsteinTensor {
    fn index(&self, i: [usize; 3]) -> usize {
        let d = self.degrees;
        (i[0] * (d[1] + 1) + i[1]) * (d[2] + 1) + i[2]
    }

    pub fn degrees(&self) -> [usize; 3] {
        self.degrees
    }

    pub fn get(&self, i: [usize; 3]) -> &Rational {
        &self.coefficients[self.index(i)]
    }

    /// Coefficient at the corner selecting `hi` on the axes where `upper` is set.
    pub fn corner(&self, upper: [bool; 3]) -> &Rational {
        let mut i = [0; 3];
        for k in 0..3 {
            if upper[k] {
                i[k] = self.degrees[k];
            }
        }
        self.get(i)
    }

    pub fn min(&self) -> &Rational {
        self.coefficients.iter().min().expect("at least one coefficient")
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }
}

/// Applies `f` to every fiber of the dense tensor along `axis`.
fn map_fibers(data: &mut [Rational], dims: [usize; 3], axis: usize, f: impl Fn(&[Rational]) -> Vec<Rational>) {
    let strides = [dims[1] * dims[2], dims[2], 1];
    let others: Vec<usize> = (0..3).filter(|&k| k != axis).collect();
    for a in 0..dims[others[0]] {
        for b in 0..dims[others[1]] {
            let base = a * strides[others[0]] + b * strides[others[1]];
            let fiber: Vec<Rational> = (0..dims[axis])
                .map(|j| data[base + j * strides[axis]].clone())
                .collect();
            for (j, v) in f(&fiber).into_iter().enumerate() {
                data[base + j * strides[axis]] = v;
            }
        }
    }
}

/// Power coefficients of `p(l + w t)` in `t`.
fn affine_substitute(a: &[Rational], l: &Rational, w: &Rational) -> Vec<Rational> {
    let m = a.len();
    let mut l_pow = vec![Rational::from_integer(1.into())];
    let mut w_pow = vec![Rational::from_integer(1.into())];
    for _ in 1..m {
        l_pow.push(l_pow.last().expect("nonempty") * l);
        w_pow.push(w_pow.last().expect("nonempty") * w);
    }
    (0..m)
        .map(|k| {
            let mut acc = Rational::zero();
            for j in k..m {
                if !a[j].is_zero() {
                    acc += &a[j] * &l_pow[j - k] * Rational::from_integer(binomial(j, k).into());
                }
            }
            acc * &w_pow[k]
        })
        .collect()
}

/// Power basis on `[0, 1]` to Bernstein basis of the same degree.
fn power_to_bernstein(b: &[Rational]) -> Vec<Rational> {
    let d = b.len() - 1;
    (0..=d)
        .map(|i| {
            (0..=i).fold(Rational::zero(), |acc, k| {
                if b[k].is_zero() {
                    acc
                } else {
                    acc + &b[k] * Rational::new(binomial(i, k).into(), binomial(d, k).into())
                }
            })
        })
        .collect()
}

pub fn bernstein_coefficients(p: &Poly3, cell: &Cell) -> BernsteinTensor {
    let deg = p.degrees().map(|d| d as usize);
    let dims = [deg[0] + 1, deg[1] + 1, deg[2] + 1];
    let mut data = vec![Rational::zero(); dims[0] * dims[1] * dims[2]];
    for (e, c) in p.terms() {
        data[(e[0] as usize * dims[1] + e[1] as usize) * dims[2] + e[2] as usize] = c.clone();
    }
    let widths = cell.widths();
    for (axis, (l, w)) in cell.lo().iter().zip(&widths).enumerate() {
        map_fibers(&mut data, dims, axis, |fiber| power_to_bernstein(&affine_substitute(fiber, l, w)));
    }
    BernsteinTensor {
        degrees: deg,
        coefficients: data,
    }
}

/// Minimum Bernstein coefficient of `p` on the cell.
pub fn bernstein_lower_bound(p: &Poly3, cell: &Cell) -> Rational {
    bernstein_coefficients(p, cell).min().clone()
}
