//! Projection and random-system experiments, and their CSV tables.

use std::fmt;
use std::str::FromStr;

use crate::bernstein::{basis_values, evaluate, legendre_coeffs, BernsteinPoly};
use crate::conditioning::ConditionRecord;
use crate::dense::{dot_compensated, norm2, sub};
use crate::error::{Error, Result};
use crate::exactnum::{from_f64, mass_exact, rational_solve, DEFAULT_ORACLE_CEILING};
use crate::parallel::{map_range, Execution};
use crate::quadrature::{moment_rule, QuadratureRule};
use crate::rng::Xorshift64Star;
use crate::solvers::{cholesky_factor, Method, SolverRegistry};

/// Runge-type bump `1 / (1 + 396 (x - 1/2)²)`.
pub fn f1(x: f64) -> f64 {
    let d = x - 0.5;
    1.0 / (1.0 + 396.0 * d * d)
}

/// `0.01 + x / (x² + 1)`.
pub fn f2(x: f64) -> f64 {
    0.01 + x / (x * x + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuncTag {
    F1,
    F2,
}

impl FuncTag {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            FuncTag::F1 => f1(x),
            FuncTag::F2 => f2(x),
        }
    }
}

impl fmt::Display for FuncTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FuncTag::F1 => "f1",
            FuncTag::F2 => "f2",
        })
    }
}

impl FromStr for FuncTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(FuncTag::F1),
            "f2" => Ok(FuncTag::F2),
            _ => Err(Error::Parse(format!(
                "unknown function `{s}` (expected f1 or f2)"
            ))),
        }
    }
}

/// `b_i = ∫₀¹ f Bⁿ_i` with the given rule.
pub fn moments_with(rule: &QuadratureRule, f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let wf: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| w * f(x))
        .collect();
    let basis: Vec<Vec<f64>> = rule.nodes().iter().map(|&x| basis_values(n, x)).collect();
    (0..=n)
        .map(|i| {
            let column: Vec<f64> = basis.iter().map(|row| row[i]).collect();
            dot_compensated(&column, &wf)
        })
        .collect()
}

pub fn moments(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    moments_with(&moment_rule(), f, n)
}

/// Best `L²` approximation `Πf = Σ_k (2k+1) (f, L^k) L^k` in the degree-`n`
/// Bernstein basis.
pub fn legendre_reference(f: impl Fn(f64) -> f64, n: usize) -> BernsteinPoly {
    let rule = moment_rule();
    let mut c = vec![0.0; n + 1];
    for k in 0..=n {
        let native = legendre_coeffs(k, k).expect("k == n");
        let proj = rule.integrate(|x| f(x) * evaluate(&native, x));
        let lk = legendre_coeffs(k, n).expect("k <= n");
        let scale = (2 * k + 1) as f64 * proj;
        for (ci, v) in c.iter_mut().zip(lk.coeffs()) {
            *ci += scale * v;
        }
    }
    BernsteinPoly::new(c).expect("n + 1 coefficients")
}

/// `‖f‖_{L²(0,1)}` by the moment rule.
pub fn l2_norm(f: impl Fn(f64) -> f64) -> f64 {
    moment_rule().integrate(|x| f(x).powi(2)).sqrt()
}

/// `L²` norm of the polynomial with Bernstein coefficients `c`, i.e. `‖c‖_M`.
///
/// Quadrature on the evaluated polynomial avoids the cancellation in
/// `cᵀMc` when `c` lies along the small eigenvalues.
pub fn poly_l2_norm(c: &[f64]) -> f64 {
    let p = BernsteinPoly::new(c.to_vec()).expect("nonempty coefficients");
    l2_norm(|x| evaluate(&p, x))
}

/// `max_i |(f - p, Bⁿ_i)|`, the normal-equations residual of a projection.
pub fn orthogonality_residual(f: impl Fn(f64) -> f64, p: &BernsteinPoly) -> f64 {
    let n = p.degree();
    moments(|x| f(x) - evaluate(p, x), n)
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Projection {
        /// `‖f - p‖ / ‖f‖`.
        fp: f64,
        /// `‖Πf - p‖ / ‖f‖`.
        pifp: f64,
        /// `‖c - c_Π‖₂ / ‖c_Π‖₂`.
        err: f64,
        /// `‖Mc - b‖₂ / ‖b‖₂`.
        res: f64,
    },
    Random {
        l2err: f64,
        merr: f64,
        res: f64,
    },
}

impl Metric {
    fn values(&self) -> Vec<f64> {
        match *self {
            Metric::Projection { fp, pifp, err, res } => vec![fp, pifp, err, res],
            Metric::Random { l2err, merr, res } => vec![l2err, merr, res],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    /// Failed solves are kept so the rest of the sweep still runs.
    pub outcome: Result<Metric>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub n: usize,
    pub results: Vec<MethodResult>,
}

impl ExperimentRecord {
    pub fn get(&self, method: Method) -> Option<&Metric> {
        self.results
            .iter()
            .find(|r| r.method == method)
            .and_then(|r| r.outcome.as_ref().ok())
    }
}

fn projection_record(
    registry: &SolverRegistry,
    f: &(dyn Fn(f64) -> f64 + Sync),
    n: usize,
    methods: &[Method],
) -> Result<ExperimentRecord> {
    let b = moments(f, n);
    let reference = legendre_reference(f, n);
    let c_ref = reference.coeffs();
    let f_norm = l2_norm(f);
    let mass = registry.mass(n)?;
    let results = methods
        .iter()
        .map(|&method| {
            let outcome = registry.apply(method, n, &b).map(|c| {
                let p = BernsteinPoly::new(c.clone()).expect("n + 1 coefficients");
                Metric::Projection {
                    fp: l2_norm(|x| f(x) - evaluate(&p, x)) / f_norm,
                    pifp: poly_l2_norm(&sub(c_ref, &c)) / f_norm,
                    err: norm2(&sub(&c, c_ref)) / norm2(c_ref),
                    res: norm2(&sub(&mass.apply(&c), &b)) / norm2(&b),
                }
            });
            MethodResult { method, outcome }
        })
        .collect();
    Ok(ExperimentRecord { n, results })
}

/// Projection experiment for `f` over degrees `0..=n_max`.
pub fn run_projection_with(
    registry: &SolverRegistry,
    f: &(dyn Fn(f64) -> f64 + Sync),
    n_max: usize,
    methods: &[Method],
    exec: Execution,
) -> Result<Vec<ExperimentRecord>> {
    if n_max > registry.max_degree() {
        return Err(Error::UnsupportedDegree {
            n: n_max,
            max: registry.max_degree(),
        });
    }
    map_range(exec, 0..n_max + 1, |n| {
        projection_record(registry, f, n, methods)
    })
    .into_iter()
    .collect()
}

pub fn run_projection(
    tag: FuncTag,
    n_max: usize,
    methods: &[Method],
    exec: Execution,
) -> Result<Vec<ExperimentRecord>> {
    let registry = SolverRegistry::new();
    run_projection_with(&registry, &|x| tag.eval(x), n_max, methods, exec)
}

/// Reference solution of `Mⁿ x = b`: exact rational elimination up to
/// `oracle_ceiling`, above it Cholesky with one step of iterative refinement
/// whose residual is accumulated with compensated dot products.
pub fn reference_solution(n: usize, b: &[f64], oracle_ceiling: usize) -> Result<Vec<f64>> {
    if b.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            found: b.len(),
        });
    }
    if n <= oracle_ceiling {
        let rb: Vec<_> = b.iter().map(|&v| from_f64(v)).collect();
        let x = rational_solve(&mass_exact(n), &rb)?;
        return Ok(x.iter().map(crate::exactnum::Scalar::to_f64).collect());
    }
    let mass = crate::bernstein::mass_matrix(n)?;
    let chol = cholesky_factor(&mass)?;
    let x = chol.solve(b);
    let r: Vec<f64> = (0..=n)
        .map(|i| {
            let mut row = mass.entries().row(i).to_vec();
            row.push(b[i]);
            let mut xe = x.clone();
            xe.push(-1.0);
            -dot_compensated(&row, &xe)
        })
        .collect();
    let dx = chol.solve(&r);
    Ok(x.iter().zip(&dx).map(|(a, d)| a + d).collect())
}

/// Random-system metrics for one right-hand side.
pub fn random_record(
    registry: &SolverRegistry,
    n: usize,
    b: &[f64],
    methods: &[Method],
    oracle_ceiling: usize,
) -> Result<ExperimentRecord> {
    let x_ref = reference_solution(n, b, oracle_ceiling)?;
    let mass = registry.mass(n)?;
    let ref_2 = norm2(&x_ref);
    let ref_m = poly_l2_norm(&x_ref);
    if ref_2 == 0.0 || ref_m == 0.0 {
        return Err(Error::ZeroNormReference);
    }
    let results = methods
        .iter()
        .map(|&method| {
            let outcome = registry.apply(method, n, b).map(|x| {
                let d = sub(&x, &x_ref);
                Metric::Random {
                    l2err: norm2(&d) / ref_2,
                    merr: poly_l2_norm(&d) / ref_m,
                    res: norm2(&sub(&mass.apply(&x), b)) / norm2(b),
                }
            });
            MethodResult { method, outcome }
        })
        .collect();
    Ok(ExperimentRecord { n, results })
}

/// How random systems are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhsMode {
    /// `b` uniform in `[-0.5, 0.5]^{n+1}`.
    #[default]
    Uniform,
    /// `x` uniform in `[-0.5, 0.5]^{n+1}` and `b = Mx`.
    FromSolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomConfig {
    pub oracle_ceiling: usize,
    pub rhs: RhsMode,
}

impl Default for RandomConfig {
    fn default() -> Self {
        Self {
            oracle_ceiling: DEFAULT_ORACLE_CEILING,
            rhs: RhsMode::Uniform,
        }
    }
}

fn random_rhs(rng: &mut Xorshift64Star, n: usize, mode: RhsMode) -> Result<Vec<f64>> {
    let v = rng.uniform_vec(n + 1, -0.5, 0.5);
    match mode {
        RhsMode::Uniform => Ok(v),
        RhsMode::FromSolution => {
            let m = crate::bernstein::mass_matrix(n)?;
            Ok((0..=n)
                .map(|i| dot_compensated(m.entries().row(i), &v))
                .collect())
        }
    }
}

/// Random experiment over degrees `0..=n_max`.
///
/// All right-hand sides are drawn up front in degree order from one stream,
/// so the output does not depend on the execution mode.
pub fn run_random_with(
    registry: &SolverRegistry,
    n_max: usize,
    seed: u64,
    methods: &[Method],
    config: RandomConfig,
    exec: Execution,
) -> Result<Vec<ExperimentRecord>> {
    if n_max > registry.max_degree() {
        return Err(Error::UnsupportedDegree {
            n: n_max,
            max: registry.max_degree(),
        });
    }
    let mut rng = Xorshift64Star::new(seed);
    let rhs = (0..=n_max)
        .map(|n| random_rhs(&mut rng, n, config.rhs))
        .collect::<Result<Vec<_>>>()?;
    map_range(exec, 0..n_max + 1, |n| {
        random_record(registry, n, &rhs[n], methods, config.oracle_ceiling)
    })
    .into_iter()
    .collect()
}

pub fn run_random(n_max: usize, seed: u64, exec: Execution) -> Result<Vec<ExperimentRecord>> {
    run_random_with(
        &SolverRegistry::new(),
        n_max,
        seed,
        &Method::ALL,
        RandomConfig::default(),
        exec,
    )
}

/// A CSV table whose first column is the integer degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<(usize, Vec<f64>)>,
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for (n, values) in &self.rows {
            out.push_str(&n.to_string());
            for v in values {
                out.push(',');
                out.push_str(&format_float(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let mut fields = line.split(',');
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 2));
            let n = fields
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| bad("bad degree"))?;
            let values = fields
                .map(|s| s.parse::<f64>().map_err(|_| bad(s)))
                .collect::<Result<Vec<f64>>>()?;
            if values.len() + 1 != header.len() {
                return Err(bad("wrong number of fields"));
            }
            rows.push((n, values));
        }
        Ok(Table { header, rows })
    }
}

fn metric_table(records: &[ExperimentRecord], methods: &[Method], names: &[&str]) -> Table {
    let mut header = vec!["n".to_string()];
    for name in names {
        for m in methods {
            header.push(format!("{}{name}", m.column_prefix()));
        }
    }
    let rows = records
        .iter()
        .map(|rec| {
            let per_method: Vec<Vec<f64>> = methods
                .iter()
                .map(|&m| match rec.get(m) {
                    Some(metric) => metric.values(),
                    None => vec![f64::NAN; names.len()],
                })
                .collect();
            let values = (0..names.len())
                .flat_map(|k| per_method.iter().map(move |v| v[k]))
                .collect();
            (rec.n, values)
        })
        .collect();
    Table { header, rows }
}

/// Columns `{method}fp`, `{method}Pifp`, `{method}err`, `{method}res`.
pub fn projection_table(records: &[ExperimentRecord], methods: &[Method]) -> Table {
    metric_table(records, methods, &["fp", "Pifp", "err", "res"])
}

/// Columns `{method}L2err`, `{method}Merr`, `{method}res`.
pub fn random_table(records: &[ExperimentRecord], methods: &[Method]) -> Table {
    metric_table(records, methods, &["L2err", "Merr", "res"])
}

/// Columns `n,kappa2,kappam2`.
pub fn conditioning_table(records: &[ConditionRecord]) -> Table {
    Table {
        header: vec!["n".into(), "kappa2".into(), "kappam2".into()],
        rows: records
            .iter()
            .map(|r| (r.n, vec![r.kappa_2, r.kappa_m_to_2]))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditioning::condition_table;
    use crate::quadrature::gauss_legendre;

    #[test]
    fn moment_examples() {
        for n in 0..=6 {
            for v in moments(|_| 1.0, n) {
                assert!((v - 1.0 / (n + 1) as f64).abs() <= 1e-15);
            }
        }
        let b = moments(|x| x, 1);
        assert!((b[0] - 1.0 / 6.0).abs() <= 1e-15 && (b[1] - 1.0 / 3.0).abs() <= 1e-15);
        let reg = SolverRegistry::new();
        let c = reg.apply(Method::Cholesky, 1, &b).unwrap();
        assert!(c[0].abs() <= 1e-14 && (c[1] - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn moments_are_converged_for_both_functions() {
        let fine = gauss_legendre(32).composite(16);
        for f in [f1 as fn(f64) -> f64, f2] {
            for n in [0, 5, 12, 20] {
                let a = moments(f, n);
                let b = moments_with(&fine, f, n);
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() <= 1e-15, "n={n}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn legendre_reference_examples() {
        let c = legendre_reference(|_| 1.0, 4);
        assert!(c.coeffs().iter().all(|v| (v - 1.0).abs() <= 1e-14));
        let c = legendre_reference(|x| x, 2);
        for (a, e) in c.coeffs().iter().zip(&[0.0, 0.5, 1.0]) {
            assert!((a - e).abs() <= 1e-14);
        }
        let errs: Vec<f64> = [2, 4, 8, 16]
            .iter()
            .map(|&n| {
                let p = legendre_reference(f2, n);
                l2_norm(|x| f2(x) - evaluate(&p, x))
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn degree_zero_projection_is_the_mean() {
        let recs =
            run_projection(FuncTag::F2, 1, &[Method::Cholesky], Execution::Sequential).unwrap();
        assert_eq!(recs.len(), 2);
        let mean = moment_rule().integrate(f2);
        let p0 = legendre_reference(f2, 0);
        assert!((p0.coeffs()[0] - mean).abs() <= 1e-15);
        match recs[0].get(Method::Cholesky).unwrap() {
            Metric::Projection { fp, .. } => assert!(*fp > 0.0),
            _ => panic!("wrong metric kind"),
        }
    }

    #[test]
    fn degree_zero_methods_agree() {
        let recs = run_projection(FuncTag::F2, 0, &Method::ALL, Execution::Sequential).unwrap();
        let reg = SolverRegistry::new();
        let b = moments(f2, 0);
        let sols: Vec<f64> = Method::ALL
            .iter()
            .map(|&m| reg.apply(m, 0, &b).unwrap()[0])
            .collect();
        for s in &sols {
            assert!((s - sols[0]).abs() <= 1e-15);
        }
        assert_eq!(recs.len(), 1);
    }

    #[test]
    fn projection_is_orthogonal_to_the_basis() {
        let reg = SolverRegistry::new();
        for n in 0..=10 {
            let c = reg.apply(Method::Cholesky, n, &moments(f2, n)).unwrap();
            let p = BernsteinPoly::new(c).unwrap();
            let r = orthogonality_residual(f2, &p);
            assert!(r <= 1e-10, "n={n}: {r}");
        }
    }

    #[test]
    fn forced_random_path() {
        let reg = SolverRegistry::new();
        let rec =
            random_record(&reg, 1, &[1.0, 0.0], &Method::ALL, DEFAULT_ORACLE_CEILING).unwrap();
        for m in Method::ALL {
            match rec.get(m).unwrap() {
                Metric::Random { l2err, merr, res } => {
                    assert!(*l2err <= 1e-14 && *merr <= 1e-14 && *res <= 1e-14, "{m}");
                }
                _ => panic!("wrong metric kind"),
            }
        }
        assert_eq!(
            reference_solution(1, &[1.0, 0.0], 12).unwrap(),
            vec![4.0, -2.0]
        );
    }

    #[test]
    fn refined_reference_matches_oracle() {
        let mut rng = Xorshift64Star::new(17);
        for n in [8, 12, 14] {
            let b = rng.uniform_vec(n + 1, -0.5, 0.5);
            let exact = reference_solution(n, &b, 20).unwrap();
            let refined = reference_solution(n, &b, 0).unwrap();
            let rel = norm2(&sub(&refined, &exact)) / norm2(&exact);
            assert!(rel <= 1e-9, "n={n}: {rel}");
        }
    }

    #[test]
    fn random_runs_are_deterministic_across_modes() {
        let a = run_random(8, 42, Execution::Sequential).unwrap();
        let b = run_random(8, 42, Execution::Parallel).unwrap();
        assert_eq!(
            random_table(&a, &Method::ALL).to_csv(),
            random_table(&b, &Method::ALL).to_csv()
        );
        let c = run_random(8, 43, Execution::Sequential).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn residuals_when_b_comes_from_a_solution() {
        let config = RandomConfig {
            rhs: RhsMode::FromSolution,
            ..RandomConfig::default()
        };
        let reg = SolverRegistry::new();
        let recs = run_random_with(&reg, 20, 7, &Method::ALL, config, Execution::Parallel).unwrap();
        for rec in &recs {
            for m in [Method::Cholesky, Method::Spectral] {
                match rec.get(m).unwrap() {
                    Metric::Random { res, .. } => assert!(*res <= 1e-13, "{m} n={}: {res}", rec.n),
                    _ => panic!("wrong metric kind"),
                }
            }
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let recs = run_projection(FuncTag::F1, 6, &Method::ALL, Execution::Parallel).unwrap();
        let table = projection_table(&recs, &Method::ALL);
        let text = table.to_csv();
        let parsed = Table::parse_csv(&text).unwrap();
        assert_eq!(parsed.to_csv(), text);
        assert_eq!(parsed, table);
        assert_eq!(
            &table.header[..5],
            &["n", "directfp", "DFTfp", "Eigfp", "chofp"]
        );
        assert_eq!(table.header.len(), 17);
        assert!(Table::parse_csv("n,a\n1,2,3\n").is_err());
        assert!(Table::parse_csv("n,a\nx,2\n").is_err());
    }

    #[test]
    fn table_headers() {
        let t = conditioning_table(&condition_table(20));
        assert_eq!(t.header, vec!["n", "kappa2", "kappam2"]);
        assert_eq!(t.rows.len(), 21);
        let recs = run_random(1, 1, Execution::Sequential).unwrap();
        let t = random_table(&recs, &Method::ALL);
        assert_eq!(
            &t.header[1..5],
            &["directL2err", "DFTL2err", "EigL2err", "choL2err"]
        );
        assert_eq!(t.header[5], "directMerr");
        assert_eq!(t.header[12], "chores");
    }

    #[test]
    fn unsupported_degree_is_rejected() {
        assert_eq!(
            run_random(26, 1, Execution::Sequential),
            Err(Error::UnsupportedDegree { n: 26, max: 25 })
        );
        assert!("f3".parse::<FuncTag>().is_err());
        assert_eq!("f1".parse::<FuncTag>().unwrap().to_string(), "f1");
    }
}
