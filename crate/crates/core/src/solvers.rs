//! Cholesky factorization, a common interface over the four solution
//! strategies, and the error/residual metrics used by the experiments.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use crate::bernstein::{mass_matrix, MassMatrix};
use crate::dense::{norm2, sub, Matrix};
use crate::error::{Error, Result};
use crate::inverse_exact::{inverse_matrix, InverseMatrix};
use crate::spectral::{build_q, SpectralDecomp};
use crate::structured::{structured_inverse, StructuredInverse};

pub const DEFAULT_MAX_DEGREE: usize = 25;

#[cfg(test)]
const BACKWARD_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    n: usize,
    l: Matrix,
}

impl CholeskyFactor {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Lower-triangular factor, row-major.
    pub fn l(&self) -> &Matrix {
        &self.l
    }

    /// `L⁻¹ b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let size = self.n + 1;
        assert_eq!(b.len(), size, "vector length must be n + 1");
        let l = &self.l;
        let mut y = b.to_vec();
        for i in 0..size {
            let mut s = y[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        y
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let size = self.n + 1;
        let l = &self.l;
        let mut y = self.forward(b);
        for i in (0..size).rev() {
            let mut s = y[i];
            for k in i + 1..size {
                s -= l[(k, i)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        y
    }
}

/// Right-looking Cholesky factorization without pivoting.
pub fn cholesky_factor(m: &MassMatrix) -> Result<CholeskyFactor> {
    cholesky_dense(m.entries())
}

/// Cholesky factorization of any symmetric positive-definite matrix.
pub fn cholesky_dense(m: &Matrix) -> Result<CholeskyFactor> {
    assert!(m.is_square(), "matrix must be square");
    let size = m.rows();
    let n = size.saturating_sub(1);
    let mut a = m.clone();
    for k in 0..size {
        let pivot = a[(k, k)];
        if pivot.is_nan() || pivot <= 0.0 {
            return Err(Error::NotPositiveDefinite { n, row: k, pivot });
        }
        let d = pivot.sqrt();
        a[(k, k)] = d;
        for i in k + 1..size {
            a[(i, k)] /= d;
        }
        for j in k + 1..size {
            let ljk = a[(j, k)];
            for i in j..size {
                let v = a[(i, k)] * ljk;
                a[(i, j)] -= v;
            }
        }
    }
    let l = Matrix::from_fn(size, size, |i, j| if i >= j { a[(i, j)] } else { 0.0 });
    Ok(CholeskyFactor { n, l })
}

pub fn solve_cholesky(l: &CholeskyFactor, b: &[f64]) -> Vec<f64> {
    l.solve(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ExactInverse,
    Dft,
    Spectral,
    Cholesky,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::ExactInverse,
        Method::Dft,
        Method::Spectral,
        Method::Cholesky,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::ExactInverse => "exact-inverse",
            Method::Dft => "dft",
            Method::Spectral => "spectral",
            Method::Cholesky => "cholesky",
        }
    }

    /// Column prefix used in the experiment CSV files.
    pub fn column_prefix(self) -> &'static str {
        match self {
            Method::ExactInverse => "direct",
            Method::Dft => "DFT",
            Method::Spectral => "Eig",
            Method::Cholesky => "cho",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" | "exact-inverse" | "inverse" => Ok(Method::ExactInverse),
            "dft" | "fft" => Ok(Method::Dft),
            "eig" | "spectral" => Ok(Method::Spectral),
            "cho" | "cholesky" => Ok(Method::Cholesky),
            _ => Err(Error::UnknownMethod(s.to_string())),
        }
    }
}

/// Parses a comma-separated method list such as `direct,dft,eig,cho`.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Method = part.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(Error::UnknownMethod(list.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub solution: Vec<f64>,
    pub residual: f64,
    pub err_2: Option<f64>,
    pub err_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub rel_err_2: f64,
    pub rel_err_m: f64,
    pub rel_residual_2: f64,
}

fn quadratic_form(m: &MassMatrix, x: &[f64]) -> f64 {
    let mx = m.apply(x);
    mx.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().max(0.0)
}

fn relative_residual(m: &MassMatrix, x: &[f64], b: &[f64]) -> f64 {
    let r = sub(&m.apply(x), b);
    let nb = norm2(b);
    if nb > 0.0 {
        norm2(&r) / nb
    } else {
        norm2(&r)
    }
}

/// Relative 2-norm error, relative M-norm error and relative residual.
pub fn metrics(x_hat: &[f64], x_ref: &[f64], b: &[f64], m: &MassMatrix) -> Result<Metrics> {
    let size = m.size();
    for len in [x_hat.len(), x_ref.len(), b.len()] {
        if len != size {
            return Err(Error::LengthMismatch {
                expected: size,
                found: len,
            });
        }
    }
    let ref2 = norm2(x_ref);
    let ref_m = quadratic_form(m, x_ref).sqrt();
    if ref2 == 0.0 || ref_m == 0.0 {
        return Err(Error::ZeroNormReference);
    }
    let d = sub(x_hat, x_ref);
    Ok(Metrics {
        rel_err_2: norm2(&d) / ref2,
        rel_err_m: quadratic_form(m, &d).sqrt() / ref_m,
        rel_residual_2: relative_residual(m, x_hat, b),
    })
}

#[derive(Debug)]
enum Decomposition {
    Inverse(InverseMatrix),
    Dft(Box<StructuredInverse>),
    Spectral(SpectralDecomp),
    Cholesky(CholeskyFactor),
}

impl Decomposition {
    fn apply(&self, b: &[f64]) -> Vec<f64> {
        match self {
            Decomposition::Inverse(inv) => inv.apply(b),
            Decomposition::Dft(si) => si.solve(b),
            Decomposition::Spectral(d) => d.solve(b),
            Decomposition::Cholesky(l) => l.solve(b),
        }
    }
}

/// Lazily built, shared decompositions keyed by `(method, n)`.
///
/// Entries are immutable once inserted; insertion happens under the write
/// lock, so concurrent callers see either nothing or a complete factor.
#[derive(Debug)]
pub struct SolverRegistry {
    max_degree: usize,
    factors: RwLock<HashMap<(Method, usize), Arc<Decomposition>>>,
    masses: RwLock<HashMap<usize, Arc<MassMatrix>>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl SolverRegistry {
    pub fn new() -> Self {
        Self::with_max_degree(DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(max_degree: usize) -> Self {
        Self {
            max_degree,
            factors: RwLock::new(HashMap::new()),
            masses: RwLock::new(HashMap::new()),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            Err(Error::UnsupportedDegree {
                n,
                max: self.max_degree,
            })
        } else {
            Ok(())
        }
    }

    pub fn mass(&self, n: usize) -> Result<Arc<MassMatrix>> {
        self.check_degree(n)?;
        if let Some(m) = self.masses.read().unwrap().get(&n) {
            return Ok(Arc::clone(m));
        }
        let m = Arc::new(mass_matrix(n)?);
        let mut guard = self.masses.write().unwrap();
        Ok(Arc::clone(guard.entry(n).or_insert(m)))
    }

    fn decomposition(&self, method: Method, n: usize) -> Result<Arc<Decomposition>> {
        self.check_degree(n)?;
        if let Some(d) = self.factors.read().unwrap().get(&(method, n)) {
            return Ok(Arc::clone(d));
        }
        let built = match method {
            Method::ExactInverse => Decomposition::Inverse(inverse_matrix(n)),
            Method::Dft => Decomposition::Dft(Box::new(structured_inverse(n))),
            Method::Spectral => Decomposition::Spectral(build_q(n)),
            Method::Cholesky => Decomposition::Cholesky(cholesky_factor(&*self.mass(n)?)?),
        };
        let mut guard = self.factors.write().unwrap();
        Ok(Arc::clone(
            guard.entry((method, n)).or_insert(Arc::new(built)),
        ))
    }

    /// Applies `(Mⁿ)⁻¹` with the chosen strategy.
    pub fn apply(&self, method: Method, n: usize, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                found: b.len(),
            });
        }
        Ok(self.decomposition(method, n)?.apply(b))
    }

    pub fn solve(&self, method: Method, n: usize, b: &[f64]) -> Result<SolveReport> {
        let solution = self.apply(method, n, b)?;
        let residual = relative_residual(&*self.mass(n)?, &solution, b);
        Ok(SolveReport {
            method,
            solution,
            residual,
            err_2: None,
            err_m: None,
        })
    }

    pub fn solve_with_reference(
        &self,
        method: Method,
        n: usize,
        b: &[f64],
        x_ref: &[f64],
    ) -> Result<SolveReport> {
        let solution = self.apply(method, n, b)?;
        let m = metrics(&solution, x_ref, b, &*self.mass(n)?)?;
        Ok(SolveReport {
            method,
            solution,
            residual: m.rel_residual_2,
            err_2: Some(m.rel_err_2),
            err_m: Some(m.rel_err_m),
        })
    }
}

fn global_registry() -> &'static SolverRegistry {
    static REGISTRY: OnceLock<SolverRegistry> = OnceLock::new();
    REGISTRY.get_or_init(SolverRegistry::new)
}

/// Solves `Mⁿ x = b` through the process-wide registry.
pub fn solve(method: Method, n: usize, b: &[f64]) -> Result<SolveReport> {
    global_registry().solve(method, n, b)
}
