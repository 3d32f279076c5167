//! Bernstein–Bézier polynomials on `[0, 1]`: evaluation, degree elevation and
//! reduction, shifted Legendre coefficients and mass-matrix assembly.

use crate::dense::{dot, Matrix};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// A polynomial of degree `n` stored by its `n + 1` Bernstein coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinPoly {
    coeffs: Vec<f64>,
}

impl BernsteinPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn constant(value: f64, degree: usize) -> Self {
        Self {
            coeffs: vec![value; degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }
}

/// Dense mass matrix `Mⁿ` together with its factorisation `Mⁿ = Δⁿ M̃ⁿ Δⁿ`.
#[derive(Debug, Clone)]
pub struct MassMatrix {
    n: usize,
    entries: Matrix,
    hankel_factor: Vec<f64>,
    binom_diag: Vec<f64>,
}

impl MassMatrix {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    /// Anti-diagonal values `h_s = (2n-s)! s! / (2n+1)!`, `s = 0..=2n`.
    pub fn hankel_factor(&self) -> &[f64] {
        &self.hankel_factor
    }

    /// Diagonal of `Δⁿ`, i.e. `binom(n, i)`.
    pub fn binom_diag(&self) -> &[f64] {
        &self.binom_diag
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        self.entries.matvec(c)
    }
}

/// Rectangular `(n+1) × (m+1)` elevation matrix `E^{m,n}`.
#[derive(Debug, Clone)]
pub struct ElevationMatrix {
    from: usize,
    to: usize,
    entries: Matrix,
}

impl ElevationMatrix {
    pub fn from_degree(&self) -> usize {
        self.from
    }

    pub fn to_degree(&self) -> usize {
        self.to
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        self.entries.matvec(c)
    }
}

/// `binom(n, i)` for `i = 0..=n` by the ratio recurrence.
pub fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut value = 1.0;
    row.push(value);
    for i in 0..n {
        value = value * (n - i) as f64 / (i + 1) as f64;
        row.push(value);
    }
    row
}

/// Anti-diagonals of `M̃ⁿ`, generated by
/// `h(s+1) = h(s) · (s+1) / (2n-s)` from `h(0) = 1/(2n+1)`.
pub fn hankel_antidiagonals(n: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(2 * n + 1);
    let mut value = 1.0 / (2 * n + 1) as f64;
    h.push(value);
    for s in 0..2 * n {
        value = value * (s + 1) as f64 / (2 * n - s) as f64;
        h.push(value);
    }
    h
}

pub fn mass_matrix(n: usize) -> Result<MassMatrix> {
    let hankel_factor = hankel_antidiagonals(n);
    let binom_diag = binomial_row(n);
    // Same product order for (i, j) and (j, i) so the matrix is exactly symmetric.
    let entries = Matrix::from_fn(n + 1, n + 1, |i, j| {
        let (a, b) = (i.min(j), i.max(j));
        binom_diag[a] * hankel_factor[i + j] * binom_diag[b]
    });
    if entries
        .as_slice()
        .iter()
        .any(|v| !v.is_normal() || *v <= 0.0)
    {
        return Err(Error::DegreeTooLarge { n });
    }
    Ok(MassMatrix {
        n,
        entries,
        hankel_factor,
        binom_diag,
    })
}

/// Entry `(i, j)` of `E^{m,n}` evaluated in any [`Scalar`] field.
pub fn elevation_entry<T: Scalar>(m: usize, n: usize, i: usize, j: usize) -> T {
    let (m, n, i, j) = (m as i64, n as i64, i as i64, j as i64);
    T::binom(m, j) * T::binom(n - m, i - j) / T::binom(n, i)
}

pub fn elevation_matrix(m: usize, n: usize) -> Result<ElevationMatrix> {
    if m > n {
        return Err(Error::ElevationOrder { from: m, to: n });
    }
    let entries = Matrix::from_fn(n + 1, m + 1, |i, j| {
        if j <= i && i - j <= n - m {
            elevation_entry::<f64>(m, n, i, j)
        } else {
            0.0
        }
    });
    Ok(ElevationMatrix {
        from: m,
        to: n,
        entries,
    })
}

/// One step of degree elevation, `n -> n+1`.
pub fn elevate_once(c: &[f64]) -> Vec<f64> {
    let n1 = c.len() as f64;
    let mut out = Vec::with_capacity(c.len() + 1);
    out.push(c[0]);
    for i in 1..c.len() {
        let t = i as f64 / n1;
        out.push(t * c[i - 1] + (1.0 - t) * c[i]);
    }
    out.push(c[c.len() - 1]);
    out
}

pub fn elevate(p: &BernsteinPoly, n: usize) -> Result<BernsteinPoly> {
    if n < p.degree() {
        return Err(Error::ElevationOrder {
            from: p.degree(),
            to: n,
        });
    }
    let mut coeffs = p.coeffs.clone();
    while coeffs.len() < n + 1 {
        coeffs = elevate_once(&coeffs);
    }
    Ok(BernsteinPoly { coeffs })
}

/// De Casteljau evaluation; valid for any real `x`.
pub fn evaluate(p: &BernsteinPoly, x: f64) -> f64 {
    let mut work = p.coeffs.clone();
    let s = 1.0 - x;
    for level in (1..work.len()).rev() {
        for i in 0..level {
            work[i] = s * work[i] + x * work[i + 1];
        }
    }
    work[0]
}

/// Values `B^n_i(x)` for `i = 0..=n`, built by the triangular recurrence
/// `B^{k+1}_i = (1-x) B^k_i + x B^k_{i-1}`.
pub fn basis_values(n: usize, x: f64) -> Vec<f64> {
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    let s = 1.0 - x;
    for k in 1..=n {
        for i in (1..=k).rev() {
            b[i] = s * b[i] + x * b[i - 1];
        }
        b[0] *= s;
    }
    b
}

/// Native coefficients of the shifted Legendre polynomial `L^k`:
/// `(-1)^{k+i} binom(k, i)`.
pub fn legendre_native<T: Scalar>(k: usize) -> Vec<T> {
    (0..=k)
        .map(|i| T::sign((k + i) as i64) * T::binom(k as i64, i as i64))
        .collect()
}

/// Degree-`n` Bernstein coefficients of `L^k`.
pub fn legendre_coeffs(k: usize, n: usize) -> Result<BernsteinPoly> {
    if k > n {
        return Err(Error::ElevationOrder { from: k, to: n });
    }
    elevate(
        &BernsteinPoly {
            coeffs: legendre_native::<f64>(k),
        },
        n,
    )
}

/// `x · p(x)` in the Bernstein basis of one degree higher.
pub fn multiply_by_x(p: &BernsteinPoly) -> BernsteinPoly {
    let n1 = p.coeffs.len() as f64;
    let mut coeffs = Vec::with_capacity(p.coeffs.len() + 1);
    coeffs.push(0.0);
    coeffs.extend(
        p.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (i + 1) as f64 * c / n1),
    );
    BernsteinPoly { coeffs }
}

/// Degree reduction `n+1 -> n` by solving the normal equations
/// `(EᵀE) q = Eᵀ p̃` with `E = E^{n,n+1}`.
///
/// `EᵀE` is symmetric positive definite and tridiagonal, so this is an O(n)
/// Thomas sweep. If `p̃` really has degree `<= n` the result reproduces it
/// exactly; otherwise it is the least-squares fit of the coefficient vectors.
pub fn degree_reduce(p: &BernsteinPoly) -> BernsteinPoly {
    if p.degree() == 0 {
        return p.clone();
    }
    let n = p.degree() - 1;
    let n1 = (n + 1) as f64;
    // E_{i,i} = (n+1-i)/(n+1), E_{i+1,i} = (i+1)/(n+1).
    let diag_e = |i: usize| (n + 1 - i) as f64 / n1;
    let sub_e = |i: usize| (i + 1) as f64 / n1;

    let mut diag: Vec<f64> = (0..=n)
        .map(|j| diag_e(j).powi(2) + sub_e(j).powi(2))
        .collect();
    let off: Vec<f64> = (0..n).map(|j| sub_e(j) * diag_e(j + 1)).collect();
    let mut rhs: Vec<f64> = (0..=n)
        .map(|j| diag_e(j) * p.coeffs[j] + sub_e(j) * p.coeffs[j + 1])
        .collect();

    for j in 1..=n {
        let w = off[j - 1] / diag[j - 1];
        diag[j] -= w * off[j - 1];
        rhs[j] -= w * rhs[j - 1];
    }
    rhs[n] /= diag[n];
    for j in (0..n).rev() {
        rhs[j] = (rhs[j] - off[j] * rhs[j + 1]) / diag[j];
    }
    BernsteinPoly { coeffs: rhs }
}

/// L² inner product `pᵀ Mⁿ q`.
pub fn m_inner(p: &BernsteinPoly, q: &BernsteinPoly) -> Result<f64> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    let m = mass_matrix(p.degree())?;
    Ok(dot(&p.coeffs, &m.apply(&q.coeffs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{mass_entry_exact, Rational};
    use crate::quadrature::gauss_legendre;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn poly(c: &[f64]) -> BernsteinPoly {
        BernsteinPoly::new(c.to_vec()).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol * (1.0 + y.abs()), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn mass_matrix_small_degrees() {
        assert_eq!(mass_matrix(0).unwrap().entries().as_slice(), &[1.0]);
        assert_close(
            mass_matrix(1).unwrap().entries().as_slice(),
            &[1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0],
            1e-16,
        );
        assert_close(
            mass_matrix(2).unwrap().entries().as_slice(),
            &[
                0.2,
                0.1,
                1.0 / 30.0, //
                0.1,
                2.0 / 15.0,
                0.1, //
                1.0 / 30.0,
                0.1,
                0.2,
            ],
            1e-16,
        );
    }

    #[test]
    fn mass_matrix_matches_exact_entries() {
        for n in 0..=25 {
            let m = mass_matrix(n).unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    let exact = mass_entry_exact(n, i, j).unwrap().to_f64();
                    assert_relative_eq!(m.get(i, j), exact, max_relative = 1e-14);
                    let factored = m.binom_diag()[i] * m.hankel_factor()[i + j] * m.binom_diag()[j];
                    assert_relative_eq!(m.get(i, j), factored, max_relative = 1e-15);
                }
            }
        }
    }

    #[test]
    fn mass_matrix_reports_underflow() {
        let err = (0..2000).find_map(|n| mass_matrix(n).err()).unwrap();
        let Error::DegreeTooLarge { n } = err else {
            panic!("unexpected {err:?}")
        };
        assert!(n > 400, "underflow reported too early at {n}");
    }

    #[test]
    fn elevation_examples() {
        let e = elevation_matrix(2, 2).unwrap();
        assert_eq!(e.entries(), &Matrix::identity(3));
        let e = elevation_matrix(1, 2).unwrap();
        assert_eq!(e.entries().as_slice(), &[1.0, 0.0, 0.5, 0.5, 0.0, 1.0]);
        let e = elevation_matrix(0, 3).unwrap();
        assert_eq!(e.entries().as_slice(), &[1.0; 4]);
        assert!(elevation_matrix(3, 2).is_err());
    }

    #[test]
    fn elevation_rows_sum_to_one_and_are_banded() {
        for n in 0..=20 {
            for m in 0..=n {
                let e = elevation_matrix(m, n).unwrap();
                for i in 0..=n {
                    let row = e.entries().row(i);
                    assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
                    let nnz = row.iter().filter(|v| **v != 0.0).count();
                    assert!(nnz <= m.min(n - m) + 1);
                }
            }
        }
    }

    #[test]
    fn elevation_preserves_mass_matrix() {
        for n in 0..=12 {
            let mn = mass_matrix(n).unwrap();
            for m in 0..=n {
                let e = elevation_matrix(m, n).unwrap();
                let et = e.entries().transpose();
                let projected = et.matmul(mn.entries()).matmul(e.entries());
                let mm = mass_matrix(m).unwrap();
                for i in 0..=m {
                    for j in 0..=m {
                        assert_relative_eq!(projected[(i, j)], mm.get(i, j), max_relative = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn elevate_examples() {
        assert_eq!(elevate(&poly(&[2.5]), 4).unwrap().coeffs(), &[2.5; 5]);
        assert_eq!(
            elevate(&poly(&[0.0, 1.0]), 2).unwrap().coeffs(),
            &[0.0, 0.5, 1.0]
        );
        let p = poly(&[1.0, -2.0, 1.0]);
        assert_eq!(elevate(&p, 2).unwrap(), p);
        assert!(elevate(&p, 1).is_err());
    }

    #[test]
    fn elevate_matches_elevation_matrix() {
        let p = poly(&[0.3, -1.0, 2.0, 0.5]);
        let direct = elevation_matrix(3, 9).unwrap().apply(p.coeffs());
        assert_close(elevate(&p, 9).unwrap().coeffs(), &direct, 1e-14);
    }

    #[test]
    fn evaluate_examples() {
        let p = poly(&[3.0, -1.0, 4.0, 1.5]);
        assert_eq!(evaluate(&p, 0.0), 3.0);
        assert_eq!(evaluate(&p, 1.0), 1.5);
        assert_eq!(evaluate(&poly(&[1.0, -2.0, 1.0]), 0.5), -0.5);
    }

    #[test]
    fn basis_values_match_definition() {
        let n = 7;
        let x: f64 = 0.3;
        let b = basis_values(n, x);
        for (i, v) in b.iter().enumerate() {
            let expected = <f64 as Scalar>::binom(n as i64, i as i64)
                * x.powi(i as i32)
                * (1.0 - x).powi((n - i) as i32);
            assert_relative_eq!(*v, expected, max_relative = 1e-14);
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_coeffs(0, 3).unwrap().coeffs(), &[1.0; 4]);
        assert_eq!(legendre_coeffs(2, 2).unwrap().coeffs(), &[1.0, -2.0, 1.0]);
        assert_eq!(legendre_coeffs(1, 2).unwrap().coeffs(), &[-1.0, 0.0, 1.0]);
        assert!(legendre_coeffs(3, 2).is_err());
        let native: Vec<Rational> = legendre_native(3);
        assert_eq!(native[0], Rational::from_integer((-1).into()));
    }

    #[test]
    fn multiply_by_x_examples() {
        assert_eq!(multiply_by_x(&poly(&[1.0])).coeffs(), &[0.0, 1.0]);
        assert_eq!(multiply_by_x(&poly(&[0.0, 1.0])).coeffs(), &[0.0, 0.0, 1.0]);
        assert_eq!(multiply_by_x(&poly(&[1.0, 1.0])).coeffs(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn degree_reduce_examples() {
        assert_close(degree_reduce(&poly(&[0.7; 5])).coeffs(), &[0.7; 4], 1e-15);
        assert_close(
            degree_reduce(&poly(&[0.0, 0.5, 1.0])).coeffs(),
            &[0.0, 1.0],
            1e-15,
        );
        assert_close(
            degree_reduce(&poly(&[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0])).coeffs(),
            &[0.0, 0.5, 1.0],
            1e-15,
        );
    }

    #[test]
    fn degree_reduce_returns_least_squares_fit_for_inconsistent_input() {
        // x² has true degree 2; its degree-1 "reduction" is the normal-equations fit.
        let q = degree_reduce(&poly(&[0.0, 0.0, 1.0]));
        let e = elevation_matrix(1, 2).unwrap();
        let residual: Vec<f64> = e
            .apply(q.coeffs())
            .iter()
            .zip(&[0.0, 0.0, 1.0])
            .map(|(a, b)| a - b)
            .collect();
        // Residual must be orthogonal to the columns of E.
        let normal = e.entries().matvec_transpose(&residual);
        assert!(normal.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn m_inner_examples() {
        let one = legendre_coeffs(0, 0).unwrap();
        assert_relative_eq!(m_inner(&one, &one).unwrap(), 1.0);
        let l1 = legendre_coeffs(1, 1).unwrap();
        assert_relative_eq!(m_inner(&l1, &l1).unwrap(), 1.0 / 3.0, max_relative = 1e-15);
        let a = legendre_coeffs(1, 2).unwrap();
        let b = legendre_coeffs(2, 2).unwrap();
        assert!(m_inner(&a, &b).unwrap().abs() < 1e-16);
        assert!(matches!(
            m_inner(&a, &l1),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    fn coeffs_strategy(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
        (0..=max_degree).prop_flat_map(|n| prop::collection::vec(-10.0..10.0f64, n + 1))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn elevation_preserves_values(c in coeffs_strategy(15), x in 0.0..=1.0f64) {
            let p = poly(&c);
            let q = elevate(&p, p.degree() + 3).unwrap();
            let (a, b) = (evaluate(&q, x), evaluate(&p, x));
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }

        #[test]
        fn reduce_inverts_single_elevation(c in coeffs_strategy(50)) {
            let p = poly(&c);
            let back = degree_reduce(&elevate(&p, p.degree() + 1).unwrap());
            for (a, b) in back.coeffs().iter().zip(&c) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }

        #[test]
        fn m_inner_is_l2_norm(c in coeffs_strategy(15)) {
            let p = poly(&c);
            let rule = gauss_legendre(64);
            let quad: f64 = rule
                .nodes()
                .iter()
                .zip(rule.weights())
                .map(|(&x, &w)| w * evaluate(&p, x).powi(2))
                .sum();
            let inner = m_inner(&p, &p).unwrap();
            prop_assert!(inner >= 0.0);
            prop_assert!((inner - quad).abs() <= 1e-10 * quad.max(1e-300));
        }
    }
}
