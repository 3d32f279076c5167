//! Gauss–Legendre quadrature on `[0, 1]`.

use std::f64::consts::PI;

use crate::dense::dot_compensated;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_k f(x_k)` with compensated accumulation.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let values: Vec<f64> = self.nodes.iter().map(|&x| f(x)).collect();
        dot_compensated(&self.weights, &values)
    }

    /// Copies of this rule on `panels` equal subintervals of `[0, 1]`.
    pub fn composite(&self, panels: usize) -> Self {
        let h = 1.0 / panels as f64;
        let mut nodes = Vec::with_capacity(self.len() * panels);
        let mut weights = Vec::with_capacity(self.len() * panels);
        for p in 0..panels {
            let a = p as f64 * h;
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                nodes.push(a + h * x);
                weights.push(h * w);
            }
        }
        Self { nodes, weights }
    }
}

/// `(P_m(t), P_{m-1}(t))` for the Legendre polynomials on `[-1, 1]`.
fn legendre_pair(m: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// `m`-point Gauss–Legendre rule mapped to `[0, 1]`.
///
/// Roots are found in the angle `θ` with `t = cos θ`, starting from the
/// Chebyshev-type guess `π(k + 3/4)/(m + 1/2)` and isolated in the bracket
/// `[kπ/m, (k+1)π/m]`. Newton steps fall back to bisection whenever an
/// iterate leaves the bracket. Working in `θ` keeps `1 - t² = sin²θ` and the
/// mapped nodes `sin²(θ/2)`, `cos²(θ/2)` accurate near the endpoints.
pub fn gauss_legendre(m: usize) -> QuadratureRule {
    assert!(m >= 1, "quadrature needs at least one point");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m / 2 + m % 2;
    let mf = m as f64;
    for k in 0..half {
        let mut lo = PI * k as f64 / mf;
        let mut hi = PI * (k + 1) as f64 / mf;
        let mut theta = PI * (k as f64 + 0.75) / (mf + 0.5);
        if m % 2 == 1 && k == half - 1 {
            theta = 0.5 * PI;
        }
        let sign_lo = legendre_pair(m, lo.cos()).0.signum();
        for _ in 0..100 {
            let (t, s) = (theta.cos(), theta.sin());
            let (p, q) = legendre_pair(m, t);
            if p == 0.0 {
                break;
            }
            if p.signum() == sign_lo {
                lo = theta;
            } else {
                hi = theta;
            }
            // d/dθ P_m(cos θ) = -sin θ P'_m(t) = -m (P_{m-1} - t P_m) / sin θ.
            let dg = -mf * (q - t * p) / s;
            let mut next = theta - p / dg;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - theta).abs() <= 1e-17;
            theta = next;
            if done {
                break;
            }
        }
        let (t, s) = (theta.cos(), theta.sin());
        let (p, q) = legendre_pair(m, t);
        let d = mf * (q - t * p);
        let w = s * s / (d * d);
        let (sh, ch) = ((0.5 * theta).sin(), (0.5 * theta).cos());
        if m % 2 == 1 && k == half - 1 {
            nodes[k] = 0.5;
        } else {
            nodes[m - 1 - k] = ch * ch;
            nodes[k] = sh * sh;
        }
        weights[m - 1 - k] = w;
        weights[k] = w;
    }
    QuadratureRule { nodes, weights }
}

/// The fixed rule used for every moment integral: 32 points on each of 8
/// uniform panels.
pub fn moment_rule() -> QuadratureRule {
    gauss_legendre(32).composite(8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn one_and_two_point_rules() {
        let r = gauss_legendre(1);
        assert_eq!(r.nodes(), &[0.5]);
        assert_eq!(r.weights(), &[1.0]);

        let r = gauss_legendre(2);
        let d = 0.5 / 3f64.sqrt();
        assert_relative_eq!(r.nodes()[0], 0.5 - d, max_relative = 1e-15);
        assert_relative_eq!(r.nodes()[1], 0.5 + d, max_relative = 1e-15);
        assert_relative_eq!(r.weights()[0], 0.5, max_relative = 1e-15);
        assert_relative_eq!(r.weights()[1], 0.5, max_relative = 1e-15);
        assert_relative_eq!(r.integrate(|x| x * x), 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn weights_are_positive_and_sum_to_one() {
        for m in 1..=80 {
            let r = gauss_legendre(m);
            assert!(r.weights().iter().all(|w| *w > 0.0));
            assert!(
                (r.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-14,
                "m={m}"
            );
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rules_are_exact_to_degree_2m_minus_1() {
        for m in 1..=40 {
            let r = gauss_legendre(m);
            for k in 0..2 * m {
                let got = r.integrate(|x| x.powi(k as i32));
                assert_relative_eq!(got, 1.0 / (k + 1) as f64, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn composite_rule_integrates_smooth_functions() {
        let r = moment_rule();
        assert_eq!(r.len(), 256);
        assert_relative_eq!(
            r.integrate(f64::exp),
            std::f64::consts::E - 1.0,
            max_relative = 1e-15
        );
    }
}
