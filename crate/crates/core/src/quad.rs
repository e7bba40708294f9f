//! Composite Gauss-Legendre quadrature with adaptive bisection.
//!
//! The adaptive driver splits a panel when the two-half refinement disagrees
//! with the whole-panel estimate beyond its share of the tolerance, so kinks
//! and endpoint-vanishing weights are handled by subdivision rather than by
//! evaluating anything outside the open panels.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Nodes and weights on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre polynomial P_n; exact for
    /// polynomials of degree 2n-1.
    pub fn new(points: usize) -> Self {
        assert!(points >= 1, "quadrature rule needs at least one point");
        let n = points;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    let (p2, d2) = legendre_and_derivative(n, x);
                    dp = d2;
                    x -= p2 / d2;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
            let (_, d) = legendre_and_derivative(n, 0.0);
            weights[n / 2] = 2.0 / (d * d);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// (node, weight) on the reference interval [-1, 1].
    pub fn node_weight(&self, i: usize) -> (f64, f64) {
        (self.nodes[i], self.weights[i])
    }

    /// ∫_a^b f dx with a single application of the rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn base_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(15))
}

/// Adaptive integration parameters. `max_panels` is the subdivision budget;
/// exceeding it yields [`Error::QuadratureNonConvergence`].
#[derive(Clone, Copy, Debug)]
pub struct Adaptive {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_panels: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive {
            rel_tol: 1e-11,
            abs_floor: 1e-300,
            max_panels: 100_000,
        }
    }
}

impl Adaptive {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Adaptive {
            rel_tol,
            ..Adaptive::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> Result<f64> {
        self.integrate_with_breakpoints(f, a, b, &[])
    }

    /// Integrate with forced initial subdivision at the interior breakpoints
    /// (density sample grids, integrand kinks).
    pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        breakpoints: &[f64],
    ) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bad integration bounds [{a}, {b}]"
            )));
        }
        let rule = base_rule();
        let mut cuts: Vec<f64> = vec![a];
        for &p in breakpoints {
            if p > a && p < b {
                cuts.push(p);
            }
        }
        cuts.push(b);
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.dedup();

        let mut rough = 0.0;
        let mut segments = Vec::with_capacity(cuts.len() - 1);
        for w in cuts.windows(2) {
            let est = rule.integrate(f, w[0], w[1]);
            rough += est;
            segments.push((w[0], w[1], est));
        }
        let tol_total = (self.rel_tol * rough.abs()).max(self.abs_floor);

        let mut budget = self.max_panels as isize;
        let mut total = 0.0;
        for (lo, hi, est) in segments {
            let share = tol_total * (hi - lo) / (b - a);
            total += refine(f, rule, lo, hi, est, share.max(self.abs_floor), 0, &mut budget)?;
        }
        Ok(total)
    }
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    budget: &mut isize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(f, a, mid);
    let right = rule.integrate(f, mid, b);
    let two = left + right;
    if (two - whole).abs() <= tol || depth >= 52 || mid <= a || mid >= b {
        return Ok(two);
    }
    *budget -= 2;
    if *budget < 0 {
        return Err(Error::QuadratureNonConvergence(0));
    }
    Ok(refine(f, rule, a, mid, left, 0.5 * tol, depth + 1, budget)?
        + refine(f, rule, mid, b, right, 0.5 * tol, depth + 1, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_rule_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(5);
        // degree 9 polynomial, exact antiderivative oracle
        let f = |x: f64| 3.0 * x.powi(9) - x.powi(4) + 2.0 * x + 1.0;
        let exact = |x: f64| 0.3 * x.powi(10) - x.powi(5) / 5.0 + x * x + x;
        let got = rule.integrate(f, -0.7, 1.3);
        assert_relative_eq!(got, exact(1.3) - exact(-0.7), max_relative = 1e-14);
    }

    #[test]
    fn adaptive_handles_kinks_and_tight_tolerance() {
        let q = Adaptive::with_rel_tol(1e-12);
        let f = |x: f64| (x - 0.3).abs();
        // oracle: split the antiderivative at the kink
        let exact = 0.5 * 0.3f64.powi(2) + 0.5 * 0.7f64.powi(2);
        let got = q.integrate(&f, 0.0, 1.0).unwrap();
        assert_relative_eq!(got, exact, max_relative = 1e-11);
        let got2 = q
            .integrate_with_breakpoints(&f, 0.0, 1.0, &[0.3])
            .unwrap();
        assert_relative_eq!(got2, exact, max_relative = 1e-13);
    }

    #[test]
    fn adaptive_integrates_vanishing_endpoint_weight() {
        let q = Adaptive::with_rel_tol(1e-12);
        // sin^3 on [0, pi]: antiderivative oracle gives 4/3
        let got = q.integrate(&|x: f64| x.sin().powi(3), 0.0, std::f64::consts::PI).unwrap();
        assert_relative_eq!(got, 4.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_nonconvergence() {
        let q = Adaptive {
            rel_tol: 1e-14,
            abs_floor: 1e-300,
            max_panels: 4,
        };
        let f = |x: f64| if x < 0.123456789 { 0.0 } else { 1.0 };
        assert!(matches!(
            q.integrate(&f, 0.0, 1.0),
            Err(Error::QuadratureNonConvergence(_))
        ));
    }
}
