//! Bézout matrices and the Heinig–Rost inversion of Hankel matrices.

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// Monomial-basis coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs<T = f64>(pub Vec<T>);

impl<T: Scalar> PolyCoeffs<T> {
    pub fn degree_bound(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn padded(&self, len: usize) -> Vec<T> {
        let mut v = self.0.clone();
        v.resize(len, T::zero());
        v
    }
}

/// Square Hankel matrix given by its anti-diagonals `h_0..=h_{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    h: Vec<f64>,
}

impl HankelMatrix {
    pub fn new(h: Vec<f64>) -> Result<Self> {
        if h.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch {
                expected: h.len() + 1,
                found: h.len(),
            });
        }
        Ok(Self { h })
    }

    pub fn size(&self) -> usize {
        self.h.len() / 2 + 1
    }

    pub fn antidiagonals(&self) -> &[f64] {
        &self.h
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.h[i + j]
    }

    pub fn to_dense(&self) -> Matrix {
        let n = self.size();
        Matrix::from_fn(n, n, |i, j| self.h[i + j])
    }

    fn is_persymmetric(&self) -> bool {
        let len = self.h.len();
        let scale = self.h.iter().map(|v| v.abs()).fold(0.0, f64::max);
        (0..len / 2).all(|s| (self.h[s] - self.h[len - 1 - s]).abs() <= 1e-14 * scale)
    }
}

/// `Bez(u, v)` with `b_ij = Σ_{k=0}^{min(i, n-j)} (u_{j+k+1} v_{i-k} - u_{i-k} v_{j+k+1})`,
/// where both polynomials are padded to the common length `n + 2`.
pub fn bezout_matrix<T: Scalar>(u: &PolyCoeffs<T>, v: &PolyCoeffs<T>) -> Result<Matrix<T>> {
    let len = u.0.len().max(v.0.len());
    if len < 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            found: len,
        });
    }
    let (u, v) = (u.padded(len), v.padded(len));
    let n = len - 2;
    Ok(Matrix::from_fn(n + 1, n + 1, |i, j| {
        let mut acc = T::zero();
        for k in 0..=i.min(n - j) {
            acc = acc + u[j + k + 1].clone() * v[i - k].clone()
                - u[i - k].clone() * v[j + k + 1].clone();
        }
        acc
    }))
}

/// `uⁿ_i = (-1)^{n+i} (n+1) C(n,i) C(n+1,i)` for `i = 0..=n`, with a trailing
/// zero so that it has length `n + 2`.
pub fn bezout_coeff_u_in<T: Scalar>(n: usize) -> PolyCoeffs<T> {
    let nn = n as i64;
    let mut c: Vec<T> = (0..=nn)
        .map(|i| T::sign(nn + i) * T::from_i64(nn + 1) * T::binom(nn, i) * T::binom(nn + 1, i))
        .collect();
    c.push(T::zero());
    PolyCoeffs(c)
}

/// `v^{n+1}_i = (-1)^{i+1} (n+1) C(n+1,i) C(n,i-1)` for `i = 0..=n+1`.
pub fn bezout_coeff_v_in<T: Scalar>(n: usize) -> PolyCoeffs<T> {
    let nn = n as i64;
    PolyCoeffs(
        (0..=nn + 1)
            .map(|i| {
                T::sign(i + 1) * T::from_i64(nn + 1) * T::binom(nn + 1, i) * T::binom(nn, i - 1)
            })
            .collect(),
    )
}

pub fn bezout_coeff_u(n: usize) -> PolyCoeffs {
    bezout_coeff_u_in(n)
}

pub fn bezout_coeff_v(n: usize) -> PolyCoeffs {
    bezout_coeff_v_in(n)
}

/// Anti-diagonals `(α, β)` appended to `H` so that the extended Hankel
/// matrix `Ĥ` satisfies `Ĥ xᴾ = e^{n+1}`, where `xᴾ` is `[x; 0]` reversed.
///
/// `x` must solve `H x = eⁿ` with `x_0 != 0`. The construction relies on
/// `H` being persymmetric (`h_s = h_{2n-s}`), which holds for `M̃ⁿ`.
pub fn hankel_extension(h: &HankelMatrix, x: &[f64]) -> Result<(f64, f64)> {
    let n = h.size() - 1;
    if x.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            found: x.len(),
        });
    }
    if !h.is_persymmetric() {
        return Err(Error::NotPersymmetric);
    }
    if x[0] == 0.0 {
        return Err(Error::ZeroLeadingComponent);
    }
    let hv = h.antidiagonals();
    let alpha = -(0..n).map(|i| hv[i] * x[i + 1]).sum::<f64>() / x[0];
    let tail: f64 = (0..n.saturating_sub(1)).map(|i| hv[i] * x[i + 2]).sum();
    let x1 = if n >= 1 { x[1] } else { 0.0 };
    let beta = (1.0 - alpha * x1 - tail) / x[0];
    Ok((alpha, beta))
}

/// `xᴾ`: append a zero and reverse.
pub fn exchange_padded(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.push(0.0);
    v.reverse();
    v
}

/// Inverse of a nonsingular persymmetric Hankel matrix from its Bézoutian.
///
/// With `u = [x; 0]` (the last column of `H⁻¹`) and `v = xᴾ` (the last column
/// of the extension's inverse), `H⁻¹ = -Bez(u, v) / v_{n+1}` under the
/// Bézout convention used by [`bezout_matrix`].
pub fn heinig_rost_inverse(h: &HankelMatrix) -> Result<Matrix> {
    let n = h.size() - 1;
    let mut e_last = vec![0.0; n + 1];
    e_last[n] = 1.0;
    let x = h.to_dense().lu_solve(&e_last)?;
    // Validates persymmetry and x_0 != 0; the extension itself is implied
    // by v, which is the last column of its inverse.
    hankel_extension(h, &x)?;
    let v = exchange_padded(&x);

    let mut u = x.clone();
    u.push(0.0);
    let lead = v[n + 1];
    let bez = bezout_matrix(&PolyCoeffs(u), &PolyCoeffs(v))?;
    Ok(bez.map(|b| -b / lead))
}
