//! Exact rational arithmetic, used as the ground truth for the floating-point
//! kernels at small degree.
//!
//! Factorials up to `(2n+1)!` overflow 64-bit integers around `n = 10`, so
//! everything here runs on arbitrary-precision integers.

use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::dense::Matrix;
use crate::error::{Error, Result};

/// Reduced fraction with a positive denominator.
pub type Rational = BigRational;

pub type RationalMatrix = Matrix<Rational>;

/// Default degree ceiling for oracle computations.
pub const DEFAULT_ORACLE_CEILING: usize = 12;

/// Field in which the closed-form formulas can be evaluated: `f64` for the
/// production path, [`Rational`] for exact checks.
pub trait Scalar: Clone + Num + Neg<Output = Self> + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;

    /// Binomial coefficient, zero outside `0 <= k <= n`.
    fn binom(n: i64, k: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn sign(parity: i64) -> Self {
        if parity.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn binom(n: i64, k: i64) -> Self {
        if n < 0 || k < 0 || k > n {
            return 0.0;
        }
        let k = k.min(n - k) as u128;
        let n = n as u128;
        let mut exact: u128 = 1;
        for t in 1..=k {
            match exact.checked_mul(n - k + t) {
                Some(v) => exact = v / t,
                None => {
                    // Out of integer range: finish with a ratio product.
                    let mut acc = exact as f64;
                    for s in t..=k {
                        acc = acc * (n - k + s) as f64 / s as f64;
                    }
                    return acc;
                }
            }
        }
        exact as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn binom(n: i64, k: i64) -> Self {
        if n < 0 {
            return Rational::zero();
        }
        Rational::from_integer(binom_int(n as u64, k))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Exact binomial coefficient as a big integer.
pub fn binom_int(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for t in 1..=k {
        // Exact at every step: acc * (n-k+t) is divisible by t.
        acc = acc * BigInt::from(n - k + t) / BigInt::from(t);
    }
    acc
}

pub fn binom(n: u64, k: i64) -> Rational {
    Rational::from_integer(binom_int(n, k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}

pub fn mass_entry_exact(n: usize, i: usize, j: usize) -> Result<Rational> {
    if i > n || j > n {
        return Err(Error::IndexOutOfRange { n, i, j });
    }
    let (nn, ii, jj) = (n as u64, i as u64, j as u64);
    let num = binom_int(nn, i as i64)
        * binom_int(nn, j as i64)
        * factorial(2 * nn - ii - jj)
        * factorial(ii + jj);
    Ok(Rational::new(num, factorial(2 * nn + 1)))
}

pub fn mass_exact(n: usize) -> RationalMatrix {
    Matrix::from_fn(n + 1, n + 1, |i, j| mass_entry_exact(n, i, j).unwrap())
}

/// The Hankel factor `M̃ⁿ` with entries `(2n-i-j)!(i+j)!/(2n+1)!`.
pub fn hankel_factor_exact(n: usize) -> RationalMatrix {
    let nn = n as u64;
    let denom = factorial(2 * nn + 1);
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        let s = (i + j) as u64;
        Rational::new(factorial(2 * nn - s) * factorial(s), denom.clone())
    })
}

/// Exact inverse by Gauss–Jordan elimination over the rationals. The pivot is
/// the first nonzero entry in the column; exact arithmetic needs no magnitude
/// heuristic.
pub fn rational_inverse(a: &RationalMatrix) -> Result<RationalMatrix> {
    if !a.is_square() {
        return Err(Error::LengthMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    eliminate(&mut rows, n)?;
    Ok(Matrix::from_fn(n, n, |i, j| rows[i][n + j].clone()))
}

/// Exact solution of `a · x = b`.
pub fn rational_solve(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    eliminate(&mut rows, n)?;
    Ok(rows.into_iter().map(|r| r[n].clone()).collect())
}

fn eliminate(rows: &mut [Vec<Rational>], n: usize) -> Result<()> {
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(Error::Singular { column: col })?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut().skip(col) {
            *v = &*v * &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *v = &*v - &(&factor * p);
            }
        }
    }
    Ok(())
}

pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite value")
}

pub fn to_f64_matrix(a: &RationalMatrix) -> Matrix<f64> {
    a.map(Scalar::to_f64)
}
