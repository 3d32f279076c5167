//! Spectral decomposition `Mⁿ = Qⁿ Λⁿ (Qⁿ)ᵀ`.
//!
//! Eigenvalues are known in closed form. The eigenvectors are the elevated
//! shifted Legendre polynomials, so `Qⁿ` is built column by column with the
//! Legendre three-term recurrence carried out directly in the degree-`n`
//! Bernstein basis: multiply by `x` (one degree up), then reduce back down.
//! Each step costs O(n), so the whole matrix costs O(n²).

use crate::bernstein::{degree_reduce, elevate, legendre_coeffs, multiply_by_x, BernsteinPoly};
use crate::dense::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    n: usize,
    q: Matrix,
    lambda: Vec<f64>,
}

impl SpectralDecomp {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    /// `Q Λ⁻¹ Qᵀ b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.apply_diagonal(b, |l| 1.0 / l)
    }

    /// `Q Λ Qᵀ c`.
    pub fn apply_mass(&self, c: &[f64]) -> Vec<f64> {
        self.apply_diagonal(c, |l| l)
    }

    /// `‖Λ^{1/2} Qᵀ c‖₂`, the M-norm of `c` evaluated through the orthogonal
    /// factor.
    pub fn m_norm(&self, c: &[f64]) -> f64 {
        let d = self.q.matvec_transpose(c);
        d.iter()
            .zip(&self.lambda)
            .map(|(v, l)| l * v * v)
            .sum::<f64>()
            .sqrt()
    }

    fn apply_diagonal(&self, v: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
        assert_eq!(v.len(), self.n + 1, "vector length must be n + 1");
        let mut d = self.q.matvec_transpose(v);
        for (x, &l) in d.iter_mut().zip(&self.lambda) {
            *x *= f(l);
        }
        self.q.matvec(&d)
    }
}

/// `λⁿ_i = (n!)² / ((n+i+1)! (n-i)!)`.
pub fn eigenvalue(n: usize, i: usize) -> Result<f64> {
    if i > n {
        return Err(Error::IndexOutOfRange { n, i, j: i });
    }
    Ok(eigenvalues(n)[i])
}

/// All eigenvalues, from `λ₀ = 1/(n+1)` by `λ_{i+1} = λ_i (n-i)/(n+i+2)`.
pub fn eigenvalues(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut value = 1.0 / (n + 1) as f64;
    out.push(value);
    for i in 0..n {
        value = value * (n - i) as f64 / (n + i + 2) as f64;
        out.push(value);
    }
    out
}

/// Column scales `sqrt((2j+1) λⁿ_j)` by a ratio recurrence so that they stay
/// representable even where `λⁿ_j` itself underflows.
pub fn column_scales(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut value = (1.0 / (n + 1) as f64).sqrt();
    out.push(value);
    for j in 0..n {
        let ratio =
            ((2 * j + 3) as f64 / (2 * j + 1) as f64) * ((n - j) as f64 / (n + j + 2) as f64);
        value *= ratio.sqrt();
        out.push(value);
    }
    out
}

/// Builds `Qⁿ` with the three-term recurrence in O(n²).
///
/// Orthogonality degrades with degree: about 1e-11 at n = 30, 1e-8 at
/// n = 50, and the columns are meaningless past n ≈ 75. Use
/// [`build_q_by_elevation`] when accuracy at high degree matters.
pub fn build_q(n: usize) -> SpectralDecomp {
    let size = n + 1;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(size);
    columns.push(vec![1.0; size]);
    if n >= 1 {
        // L¹ = 2x - 1 elevated to degree n has coefficients 2i/n - 1.
        columns.push((0..size).map(|i| 2.0 * i as f64 / n as f64 - 1.0).collect());
    }
    for j in 2..n {
        let prev = BernsteinPoly::new(columns[j - 1].clone()).expect("nonempty column");
        let x_prev = degree_reduce(&multiply_by_x(&prev));
        let a = (2 * j - 1) as f64 / j as f64;
        let b = (j - 1) as f64 / j as f64;
        let col = x_prev
            .coeffs()
            .iter()
            .zip(&columns[j - 1])
            .zip(&columns[j - 2])
            .map(|((&xq, &p1), &p2)| a * (2.0 * xq - p1) - b * p2)
            .collect();
        columns.push(col);
    }
    if n >= 2 {
        columns.push(legendre_coeffs(n, n).expect("k == n").into_coeffs());
    }

    let scales = column_scales(n);
    let q = Matrix::from_fn(size, size, |i, j| scales[j] * columns[j][i]);
    SpectralDecomp {
        n,
        q,
        lambda: eigenvalues(n),
    }
}

/// Reference construction by elevating every `Π(L^j)` to degree `n`: O(n³).
pub fn build_q_by_elevation(n: usize) -> SpectralDecomp {
    let size = n + 1;
    let scales = column_scales(n);
    let mut q = Matrix::zeros(size, size);
    for (j, scale) in scales.iter().enumerate() {
        let native = legendre_coeffs(j, j).expect("k == n");
        let col = elevate(&native, n).expect("n >= j");
        let scaled: Vec<f64> = col.coeffs().iter().map(|v| v * scale).collect();
        q.set_column(j, &scaled);
    }
    SpectralDecomp {
        n,
        q,
        lambda: eigenvalues(n),
    }
}

pub fn solve_spectral(d: &SpectralDecomp, b: &[f64]) -> Vec<f64> {
    d.solve(b)
}

pub fn apply_mass_spectral(d: &SpectralDecomp, c: &[f64]) -> Vec<f64> {
    d.apply_mass(c)
}
