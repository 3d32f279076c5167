//! Closed-form inverse of the Bernstein mass matrix.
//!
//! Two independent expressions are provided: the compact binomial-sum form
//! and the dual-basis form. Both are generic over [`Scalar`] so they can be
//! checked against each other in exact arithmetic.

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

#[derive(Debug, Clone)]
pub struct InverseMatrix {
    n: usize,
    entries: Matrix,
}

impl InverseMatrix {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn apply(&self, b: &[f64]) -> Vec<f64> {
        self.entries.matvec(b)
    }
}

fn check_index(n: usize, i: usize, j: usize) -> Result<()> {
    if i > n || j > n {
        Err(Error::IndexOutOfRange { n, i, j })
    } else {
        Ok(())
    }
}

/// `(Mⁿ)⁻¹_{ij} = (-1)^{i+j} / (C(n,i) C(n,j)) · Σ_k (2k+1-i+j) C(n+1,i-k)² C(n+1,j+k+1)²`.
///
/// Terms vanish unless `k <= i` and `k <= n - j`, so the sum stops there.
pub fn inverse_entry_in<T: Scalar>(n: usize, i: usize, j: usize) -> T {
    let (nn, ii, jj) = (n as i64, i as i64, j as i64);
    let mut sum = T::zero();
    for k in 0..=i.min(n - j) as i64 {
        let a = T::binom(nn + 1, ii - k);
        let b = T::binom(nn + 1, jj + k + 1);
        sum = sum + T::from_i64(2 * k + 1 - ii + jj) * a.clone() * a * b.clone() * b;
    }
    T::sign(ii + jj) * sum / (T::binom(nn, ii) * T::binom(nn, jj))
}

/// Dual-basis form:
/// `(-1)^{i+j} / (C(n,i) C(n,j)) · Σ_k (2k+1) C(n+k+1,n-j) C(n-k,n-j) C(n+k+1,n-i) C(n-k,n-i)`.
///
/// `C(n-k, n-j)` vanishes for `k > j`, so the sum stops at `min(i, j)`.
pub fn inverse_entry_dual_in<T: Scalar>(n: usize, i: usize, j: usize) -> T {
    let (nn, ii, jj) = (n as i64, i as i64, j as i64);
    let mut sum = T::zero();
    for k in 0..=i.min(j) as i64 {
        sum = sum
            + T::from_i64(2 * k + 1)
                * T::binom(nn + k + 1, nn - jj)
                * T::binom(nn - k, nn - jj)
                * T::binom(nn + k + 1, nn - ii)
                * T::binom(nn - k, nn - ii);
    }
    T::sign(ii + jj) * sum / (T::binom(nn, ii) * T::binom(nn, jj))
}

pub fn inverse_entry(n: usize, i: usize, j: usize) -> Result<f64> {
    check_index(n, i, j)?;
    Ok(inverse_entry_in(n, i, j))
}

pub fn inverse_entry_dual(n: usize, i: usize, j: usize) -> Result<f64> {
    check_index(n, i, j)?;
    Ok(inverse_entry_dual_in(n, i, j))
}

/// Dense inverse in any field, `O(n³)` work.
pub fn inverse_dense_in<T: Scalar>(n: usize) -> Matrix<T> {
    let mut m = Matrix::from_fn(n + 1, n + 1, |_, _| T::zero());
    for i in 0..=n {
        for j in i..=n {
            let v = inverse_entry_in::<T>(n, i, j);
            m[(j, i)] = v.clone();
            m[(i, j)] = v;
        }
    }
    m
}

pub fn inverse_matrix(n: usize) -> InverseMatrix {
    InverseMatrix {
        n,
        entries: inverse_dense_in(n),
    }
}

/// Last column of `(Mⁿ)⁻¹`: `y_i = (-1)^{n+i} (n+1) C(n+1, i)`.
pub fn last_column_y_in<T: Scalar>(n: usize) -> Vec<T> {
    (0..=n)
        .map(|i| {
            T::sign((n + i) as i64) * T::from_i64(n as i64 + 1) * T::binom(n as i64 + 1, i as i64)
        })
        .collect()
}

pub fn last_column_y(n: usize) -> Vec<f64> {
    last_column_y_in(n)
}
