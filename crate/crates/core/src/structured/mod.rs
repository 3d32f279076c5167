//! Structured representations of the inverse mass matrix.
//!
//! `(Mⁿ)⁻¹ = (Δⁿ)⁻¹ [T̃ⁿ Hⁿ - Tⁿ H̃ⁿ] (Δⁿ)⁻¹` with Toeplitz `T`, `T̃` and Hankel
//! `H`, `H̃`. Every factor is applied through a circulant embedding, giving an
//! O(n log n) solve. The method is numerically unstable (the factors have
//! entries of size `C(n+1, (n+1)/2)²` and the result comes from massive
//! cancellation), and is kept for comparison.

pub mod bezout;
pub mod fft;

use num_complex::Complex64;

pub use bezout::{
    bezout_coeff_u, bezout_coeff_u_in, bezout_coeff_v, bezout_coeff_v_in, bezout_matrix,
    exchange_padded, hankel_extension, heinig_rost_inverse, HankelMatrix, PolyCoeffs,
};
pub use fft::{hankel_matvec, toeplitz_matvec};

use crate::bernstein::binomial_row;
use crate::dense::Matrix;
use crate::exactnum::Scalar;

/// `Tⁿ_{ij} = (-1)^{i-j} C(n+1, i-j)²` indexed by `d = i - j`.
fn toeplitz_value<T: Scalar>(n: usize, d: i64) -> T {
    let b = T::binom(n as i64 + 1, d);
    T::sign(d) * b.clone() * b
}

/// `Hⁿ_{ij} = (-1)^{i+j+1} C(n+1, i+j+1)²` indexed by `s = i + j`.
fn hankel_value<T: Scalar>(n: usize, s: i64) -> T {
    let b = T::binom(n as i64 + 1, s + 1);
    T::sign(s + 1) * b.clone() * b
}

/// The four dense factors `(T, T̃, H, H̃)` in any field.
pub fn structured_factors_in<T: Scalar>(n: usize) -> [Matrix<T>; 4] {
    let size = n + 1;
    let t = Matrix::from_fn(size, size, |i, j| {
        toeplitz_value::<T>(n, i as i64 - j as i64)
    });
    let tt = Matrix::from_fn(size, size, |i, j| {
        let d = i as i64 - j as i64;
        T::from_i64(d) * toeplitz_value::<T>(n, d)
    });
    let h = Matrix::from_fn(size, size, |i, j| hankel_value::<T>(n, (i + j) as i64));
    let ht = Matrix::from_fn(size, size, |i, j| {
        let s = (i + j) as i64;
        T::from_i64(s + 1) * hankel_value::<T>(n, s)
    });
    [t, tt, h, ht]
}

/// `T̃H - TH̃` formed with dense products.
pub fn hankel_inverse_split_in<T: Scalar>(n: usize) -> Matrix<T>
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let [t, tt, h, ht] = structured_factors_in::<T>(n);
    &tt.matmul(&h) - &t.matmul(&ht)
}

/// Closed form of `(M̃ⁿ)⁻¹_{ij}`:
/// `(-1)^{i+j} Σ_{k=0}^{n} (2k+1-i+j) C(n+1,i-k)² C(n+1,j+k+1)²`.
pub fn hankel_inverse_entry_in<T: Scalar>(n: usize, i: usize, j: usize) -> T {
    let (nn, ii, jj) = (n as i64, i as i64, j as i64);
    let mut sum = T::zero();
    for k in 0..=nn {
        let a = T::binom(nn + 1, ii - k);
        let b = T::binom(nn + 1, jj + k + 1);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        sum = sum + T::from_i64(2 * k + 1 - ii + jj) * a.clone() * a * b.clone() * b;
    }
    T::sign(ii + jj) * sum
}

pub fn hankel_inverse_dense_in<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n + 1, n + 1, |i, j| hankel_inverse_entry_in::<T>(n, i, j))
}

/// Dense `(Δⁿ)⁻¹ [T̃H - TH̃] (Δⁿ)⁻¹`.
pub fn structured_inverse_dense_in<T: Scalar>(n: usize) -> Matrix<T>
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let core = hankel_inverse_split_in::<T>(n);
    let nn = n as i64;
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        core[(i, j)].clone() / (T::binom(nn, i as i64) * T::binom(nn, j as i64))
    })
}

/// Compressed `T`, `T̃`, `H`, `H̃`, `Δ` with precomputed circulant spectra.
#[derive(Debug, Clone)]
pub struct StructuredInverse {
    n: usize,
    binom_diag: Vec<f64>,
    t_col: Vec<f64>,
    t_row: Vec<f64>,
    tt_col: Vec<f64>,
    tt_row: Vec<f64>,
    h: Vec<f64>,
    ht: Vec<f64>,
    fft_len: usize,
    t_hat: Vec<Complex64>,
    tt_hat: Vec<Complex64>,
    h_hat: Vec<Complex64>,
    ht_hat: Vec<Complex64>,
}

impl StructuredInverse {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn binom_diag(&self) -> &[f64] {
        &self.binom_diag
    }

    /// `(first column, first row)` of `Tⁿ`.
    pub fn t(&self) -> (&[f64], &[f64]) {
        (&self.t_col, &self.t_row)
    }

    /// `(first column, first row)` of `T̃ⁿ`.
    pub fn t_tilde(&self) -> (&[f64], &[f64]) {
        (&self.tt_col, &self.tt_row)
    }

    /// Anti-diagonals of `Hⁿ`.
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Anti-diagonals of `H̃ⁿ`.
    pub fn h_tilde(&self) -> &[f64] {
        &self.ht
    }

    pub fn fft_len(&self) -> usize {
        self.fft_len
    }

    /// Applies `(Mⁿ)⁻¹` in O(n log n). The forward transform of the reversed,
    /// descaled right-hand side is shared between both Hankel products.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let size = self.n + 1;
        assert_eq!(b.len(), size, "vector length must be n + 1");
        let z: Vec<f64> = b.iter().zip(&self.binom_diag).map(|(v, d)| v / d).collect();
        let reversed: Vec<f64> = z.iter().rev().copied().collect();
        let z_hat = fft::forward(&reversed, self.fft_len);

        let hz = fft::convolve_truncate(&self.h_hat, &z_hat, size);
        let htz = fft::convolve_truncate(&self.ht_hat, &z_hat, size);

        let first = fft::convolve_truncate(&self.tt_hat, &fft::forward(&hz, self.fft_len), size);
        let second = fft::convolve_truncate(&self.t_hat, &fft::forward(&htz, self.fft_len), size);

        first
            .iter()
            .zip(&second)
            .zip(&self.binom_diag)
            .map(|((a, c), d)| (a - c) / d)
            .collect()
    }

    /// Dense `T̃H - TH̃` rebuilt from the compressed factors.
    pub fn core_dense(&self) -> Matrix {
        let size = self.n + 1;
        let toeplitz = |col: &[f64], row: &[f64]| {
            Matrix::from_fn(
                size,
                size,
                |i, j| if i >= j { col[i - j] } else { row[j - i] },
            )
        };
        let hankel = |h: &[f64]| Matrix::from_fn(size, size, |i, j| h[i + j]);
        let a = toeplitz(&self.tt_col, &self.tt_row).matmul(&hankel(&self.h));
        let c = toeplitz(&self.t_col, &self.t_row).matmul(&hankel(&self.ht));
        &a - &c
    }
}

pub fn structured_inverse(n: usize) -> StructuredInverse {
    let size = n + 1;
    let t_col: Vec<f64> = (0..size)
        .map(|d| toeplitz_value::<f64>(n, d as i64))
        .collect();
    let t_row: Vec<f64> = (0..size)
        .map(|d| toeplitz_value::<f64>(n, -(d as i64)))
        .collect();
    let tt_col: Vec<f64> = t_col
        .iter()
        .enumerate()
        .map(|(d, v)| d as f64 * v)
        .collect();
    let tt_row: Vec<f64> = t_row
        .iter()
        .enumerate()
        .map(|(d, v)| -(d as f64) * v)
        .collect();
    let h: Vec<f64> = (0..2 * n + 1)
        .map(|s| hankel_value::<f64>(n, s as i64))
        .collect();
    let ht: Vec<f64> = h
        .iter()
        .enumerate()
        .map(|(s, v)| (s + 1) as f64 * v)
        .collect();

    let fft_len = fft::embedding_size(size);
    let spectrum =
        |col: &[f64], row: &[f64]| fft::forward(&fft::circulant_column(col, row, fft_len), fft_len);
    let hankel_spectrum = |anti: &[f64]| {
        let (col, row) = fft::hankel_as_toeplitz(anti);
        spectrum(&col, &row)
    };

    StructuredInverse {
        n,
        binom_diag: binomial_row(n),
        t_hat: spectrum(&t_col, &t_row),
        tt_hat: spectrum(&tt_col, &tt_row),
        h_hat: hankel_spectrum(&h),
        ht_hat: hankel_spectrum(&ht),
        t_col,
        t_row,
        tt_col,
        tt_row,
        h,
        ht,
        fft_len,
    }
}

pub fn solve_dft(si: &StructuredInverse, b: &[f64]) -> Vec<f64> {
    si.solve(b)
}
