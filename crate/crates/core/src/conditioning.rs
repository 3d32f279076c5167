//! Condition numbers of the mass matrix in the 2-norm and in the mixed
//! M→2 norm, plus empirical operator norms by power iteration.

use crate::dense::{dot_compensated, norm2, Matrix};
use crate::error::{Error, Result};
use crate::rng::Xorshift64Star;
use crate::solvers::cholesky_dense;
use crate::spectral::{build_q, eigenvalues};

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 50_000;
const POWER_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionRecord {
    pub n: usize,
    pub kappa_2: f64,
    pub kappa_m_to_2: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// `κ₂(Mⁿ) = (2n+1)! / ((n+1)! n!) = C(2n+1, n)`.
///
/// Built as `C(n+1+k, k)` for k = 1..n; every partial product is an integer,
/// so the result is exact while it fits in 53 bits.
pub fn kappa2(n: usize) -> f64 {
    let mut value = 1.0f64;
    for k in 1..=n {
        value = value * (n + 1 + k) as f64 / k as f64;
    }
    value
}

pub fn kappa_m_to_2(n: usize) -> f64 {
    kappa2(n).sqrt()
}

pub fn condition_record(n: usize) -> ConditionRecord {
    let lambda = eigenvalues(n);
    ConditionRecord {
        n,
        kappa_2: kappa2(n),
        kappa_m_to_2: kappa_m_to_2(n),
        lambda_min: lambda[n],
        lambda_max: lambda[0],
    }
}

pub fn condition_table(max_degree: usize) -> Vec<ConditionRecord> {
    (0..=max_degree).map(condition_record).collect()
}

/// `‖(Mⁿ)⁻¹‖_{2→M} = λ_min^{-1/2}`.
pub fn inverse_norm_2_to_m(n: usize) -> f64 {
    1.0 / eigenvalues(n)[n].sqrt()
}

/// `‖Mⁿ‖_{M→2} = λ_max^{1/2}`.
pub fn mass_norm_m_to_2(n: usize) -> f64 {
    eigenvalues(n)[0].sqrt()
}

/// `xᵀ M x` with compensated row and outer sums. The iterates of interest
/// sit along small eigenvalues of `M`, where the plain form cancels.
fn quadratic_form(m: &Matrix, x: &[f64]) -> f64 {
    let mx: Vec<f64> = (0..m.rows())
        .map(|i| dot_compensated(m.row(i), x))
        .collect();
    dot_compensated(&mx, x).max(0.0)
}

fn check_square(a: &Matrix, m: &Matrix) -> Result<usize> {
    let size = m.rows();
    if !a.is_square() || !m.is_square() || a.rows() != size {
        return Err(Error::LengthMismatch {
            expected: size,
            found: a.rows(),
        });
    }
    Ok(size)
}

/// Power iteration on `x ↦ op(x)` with Rayleigh quotient `rayleigh(x)`,
/// stopping once the quotient changes by less than `POWER_TOL` relative on
/// three consecutive steps.
fn power_iterate(
    size: usize,
    mut op: impl FnMut(&[f64]) -> Vec<f64>,
    mut normalize: impl FnMut(&mut Vec<f64>),
    mut rayleigh: impl FnMut(&[f64]) -> f64,
) -> Result<f64> {
    let mut rng = Xorshift64Star::new(POWER_SEED);
    let mut x = rng.uniform_vec(size, 0.5, 1.5);
    normalize(&mut x);
    let mut mu = rayleigh(&x);
    let mut settled = 0;
    for _ in 0..POWER_MAX_ITER {
        x = op(&x);
        normalize(&mut x);
        let next = rayleigh(&x);
        if (next - mu).abs() <= POWER_TOL * next.abs() {
            settled += 1;
            if settled >= 3 {
                return Ok(next);
            }
        } else {
            settled = 0;
        }
        mu = next;
    }
    Err(Error::NoConvergence {
        iterations: POWER_MAX_ITER,
    })
}

/// `‖A‖_{M→2} = max ‖Ax‖₂ / ‖x‖_M`, the square root of the largest `μ` in
/// `AᵀA v = μ M v`.
pub fn op_norm_m_to_2(a: &Matrix, m: &Matrix) -> Result<f64> {
    let size = check_square(a, m)?;
    let chol = cholesky_dense(m)?;
    let m_norm = |x: &[f64]| quadratic_form(m, x).sqrt();
    let mu = power_iterate(
        size,
        |x| chol.solve(&a.matvec_transpose(&a.matvec(x))),
        |x| {
            let s = m_norm(x);
            x.iter_mut().for_each(|v| *v /= s);
        },
        |x| {
            let ax = norm2(&a.matvec(x));
            let xm = m_norm(x);
            (ax * ax) / (xm * xm)
        },
    )?;
    Ok(mu.sqrt())
}

/// `‖A‖_{2→M} = max ‖Ax‖_M / ‖x‖₂`, the square root of the largest
/// eigenvalue of `AᵀMA`.
pub fn op_norm_2_to_m(a: &Matrix, m: &Matrix) -> Result<f64> {
    let size = check_square(a, m)?;
    let mu = power_iterate(
        size,
        |x| a.matvec_transpose(&m.matvec(&a.matvec(x))),
        |x| {
            let s = norm2(x);
            x.iter_mut().for_each(|v| *v /= s);
        },
        |x| {
            let ax = a.matvec(x);
            quadratic_form(m, &ax) / dot_compensated(x, x)
        },
    )?;
    Ok(mu.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationStudy {
    pub n: usize,
    pub samples: usize,
    /// Largest observed `‖M⁻¹δb‖_M / ‖δb‖₂`.
    pub max_ratio: f64,
    /// `λ_min^{-1/2}`.
    pub bound: f64,
}

/// Amplification `‖M⁻¹δb‖_M / ‖δb‖₂` over `samples` perturbations.
///
/// The first perturbation is the eigenvector of the smallest eigenvalue, where
/// the bound is attained; the rest are uniform in `[-1, 1]^{n+1}` from the
/// seeded generator. `‖M⁻¹δb‖_M² = δbᵀM⁻¹δb = ‖L⁻¹δb‖₂²` with `M = LLᵀ`.
pub fn perturbation_study(n: usize, samples: usize, seed: u64) -> Result<PerturbationStudy> {
    let m = crate::bernstein::mass_matrix(n)?;
    let chol = cholesky_dense(m.entries())?;
    let ratio = |db: &[f64]| norm2(&chol.forward(db)) / norm2(db);

    let mut max_ratio = 0.0f64;
    if samples > 0 {
        max_ratio = ratio(&build_q(n).q().column(n));
    }
    let mut rng = Xorshift64Star::new(seed);
    for _ in 1..samples {
        let db = rng.uniform_vec(n + 1, -1.0, 1.0);
        max_ratio = max_ratio.max(ratio(&db));
    }
    Ok(PerturbationStudy {
        n,
        samples,
        max_ratio,
        bound: inverse_norm_2_to_m(n),
    })
}
