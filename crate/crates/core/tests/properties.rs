use bernstein_mass::bernstein::elevation_matrix;
use bernstein_mass::conditioning::kappa2;
use bernstein_mass::dense::{norm2, sub, Matrix};
use bernstein_mass::exactnum::{binom_int, mass_entry_exact, Rational};
use bernstein_mass::experiments::{format_float, Table};
use bernstein_mass::solvers::metrics;
use bernstein_mass::structured::{hankel_matvec, toeplitz_matvec};
use bernstein_mass::{mass_matrix, Method, SolverRegistry};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    norm2(&sub(a, b)) / norm2(b)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..1000).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn reduced(r: &Rational) -> bool {
    use num_integer::Integer;
    r.denom().is_positive() && r.numer().gcd(r.denom()) == BigInt::from(1) || r.numer().is_zero()
}

proptest! {
    #[test]
    fn rational_ops_stay_reduced(a in rational(), b in rational()) {
        prop_assert!(reduced(&(&a + &b)));
        prop_assert!(reduced(&(&a - &b)));
        prop_assert!(reduced(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(reduced(&(&a / &b)));
        }
    }

    #[test]
    fn pascal_rule(n in 1u64..=50, k in 0i64..=50) {
        prop_assume!(k as u64 <= n);
        prop_assert_eq!(binom_int(n, k), binom_int(n - 1, k - 1) + binom_int(n - 1, k));
    }

    #[test]
    fn exact_mass_is_symmetric_hankel(n in 0usize..=10, i in 0usize..=10, j in 0usize..=10) {
        prop_assume!(i <= n && j <= n);
        let a = mass_entry_exact(n, i, j).unwrap();
        prop_assert_eq!(&a, &mass_entry_exact(n, j, i).unwrap());
        // Descaled entries depend on i + j only.
        let s = i + j;
        let (i2, j2) = if s <= n { (0, s) } else { (s - n, n) };
        let scale = |a: usize, b: usize| {
            Rational::from_integer(binom_int(n as u64, a as i64) * binom_int(n as u64, b as i64))
        };
        prop_assert_eq!(
            a / scale(i, j),
            mass_entry_exact(n, i2, j2).unwrap() / scale(i2, j2)
        );
    }

    #[test]
    fn float_mass_matches_factored_form(n in 0usize..=40) {
        let m = mass_matrix(n).unwrap();
        let d = m.binom_diag();
        let h = m.hankel_factor();
        for i in 0..=n {
            prop_assert!(m.get(i, i) > 0.0);
            for j in 0..=n {
                prop_assert_eq!(m.get(i, j), m.get(j, i));
                let f = d[i] * h[i + j] * d[j];
                prop_assert!((m.get(i, j) - f).abs() <= 1e-15 * f.abs());
            }
        }
    }

    #[test]
    fn elevation_rows_sum_to_one(m in 0usize..=20, extra in 0usize..=20) {
        let e = elevation_matrix(m, m + extra).unwrap();
        for i in 0..e.entries().rows() {
            let s: f64 = e.entries().row(i).iter().sum();
            prop_assert!((s - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn fft_matvecs_match_dense(
        (col, row, h, x) in (1usize..=64).prop_flat_map(|n| (
            prop::collection::vec(-1.0..1.0f64, n),
            prop::collection::vec(-1.0..1.0f64, n),
            prop::collection::vec(-1.0..1.0f64, 2 * n - 1),
            prop::collection::vec(-1.0..1.0f64, n),
        ))
    ) {
        let n = x.len();
        let mut row = row;
        row[0] = col[0];
        let t = Matrix::from_fn(n, n, |i, j| if i >= j { col[i - j] } else { row[j - i] });
        let hk = Matrix::from_fn(n, n, |i, j| h[i + j]);
        prop_assert!(rel_diff(&toeplitz_matvec(&col, &row, &x), &t.matvec(&x)) <= 1e-11);
        prop_assert!(rel_diff(&hankel_matvec(&h, &x), &hk.matvec(&x)) <= 1e-11);
    }

    #[test]
    fn stable_methods_agree(
        b in (0usize..=12).prop_flat_map(|n| prop::collection::vec(-0.5..0.5f64, n + 1))
    ) {
        let n = b.len() - 1;
        let reg = SolverRegistry::new();
        let tol = 1e3 * f64::EPSILON * kappa2(n);
        let cho = reg.apply(Method::Cholesky, n, &b).unwrap();
        let eig = reg.apply(Method::Spectral, n, &b).unwrap();
        let inv = reg.apply(Method::ExactInverse, n, &b).unwrap();
        prop_assert!(rel_diff(&eig, &cho) <= tol);
        prop_assert!(rel_diff(&inv, &cho) <= tol);
        prop_assert!(rel_diff(&inv, &eig) <= tol);
    }

    #[test]
    fn metrics_are_nonnegative_and_bounded(
        (x_hat, x) in (0usize..=15).prop_flat_map(|n| (
            prop::collection::vec(-1.0..1.0f64, n + 1),
            prop::collection::vec(-1.0..1.0f64, n + 1),
        ))
    ) {
        prop_assume!(norm2(&x) > 1e-3);
        let n = x.len() - 1;
        let m = mass_matrix(n).unwrap();
        let b = m.apply(&x);
        let r = metrics(&x_hat, &x, &b, &m).unwrap();
        prop_assert!(r.rel_err_2 >= 0.0 && r.rel_err_m >= 0.0 && r.rel_residual_2 >= 0.0);
        let lam = bernstein_mass::spectral::eigenvalues(n);
        prop_assert!(r.rel_err_m <= (lam[0] / lam[n]).sqrt() * r.rel_err_2 * (1.0 + 1e-10) + 1e-12);
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(prop::collection::vec(any::<f64>(), 3), 0..20)) {
        let table = Table {
            header: ["n", "a", "b", "c"].map(String::from).to_vec(),
            rows: rows.into_iter().enumerate().collect(),
        };
        let text = table.to_csv();
        let back = Table::parse_csv(&text).unwrap();
        prop_assert_eq!(&back.header, &table.header);
        for ((n1, v1), (n2, v2)) in back.rows.iter().zip(&table.rows) {
            prop_assert_eq!(n1, n2);
            let s1: Vec<String> = v1.iter().map(|v| format_float(*v)).collect();
            let s2: Vec<String> = v2.iter().map(|v| format_float(*v)).collect();
            prop_assert_eq!(s1, s2);
        }
        prop_assert_eq!(back.to_csv(), text);
    }
}
