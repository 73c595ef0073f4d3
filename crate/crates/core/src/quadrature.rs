//! Adaptive one-dimensional quadrature with an embedded error estimate:
//! each panel is integrated by two Gauss-Legendre rules of different order
//! and bisected until the difference meets the proportional local budget.
//! Known kink locations are supplied as panel breakpoints so every panel
//! sees a smooth integrand.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const LOW_ORDER: usize = 10;
const HIGH_ORDER: usize = 20;

type Rule = (Vec<f64>, Vec<f64>);

#[derive(Clone, Copy, Debug)]
pub struct QuadratureOutcome {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration from Chebyshev initial guesses.
fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rules() -> &'static (Rule, Rule) {
    static RULES: OnceLock<(Rule, Rule)> = OnceLock::new();
    RULES.get_or_init(|| (gauss_legendre(LOW_ORDER), gauss_legendre(HIGH_ORDER)))
}

fn apply_rule(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64, rule: &Rule) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for (&x, &w) in rule.0.iter().zip(&rule.1) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// `breakpoints` inside `(a, b)` become initial panel boundaries. Fails with
/// [`Error::ToleranceUnachievable`] if the evaluation budget runs out first.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    max_evals: u64,
) -> Result<QuadratureOutcome> {
    if !(a.is_finite() && b.is_finite()) || abs_tol <= 0.0 {
        return Err(Error::invalid("quadrature needs finite bounds and a positive tolerance"));
    }
    if a >= b {
        return Ok(QuadratureOutcome {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut edges: Vec<f64> = vec![a, b];
    edges.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let (low, high) = rules();
    let span = b - a;
    let mut stack: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations: u64 = 0;

    while let Some((lo, hi)) = stack.pop() {
        let coarse = apply_rule(&mut f, lo, hi, low);
        let fine = apply_rule(&mut f, lo, hi, high);
        evaluations += (LOW_ORDER + HIGH_ORDER) as u64;
        if evaluations > max_evals {
            return Err(Error::ToleranceUnachievable {
                tol: abs_tol,
                max_evals,
            });
        }
        let err = (fine - coarse).abs();
        let local_budget = abs_tol * (hi - lo) / span;
        // the f64 spacing floor stops infinite bisection on hard kinks
        if err <= local_budget || (hi - lo) < 1e-14 * span {
            value += fine;
            error += err;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    Ok(QuadratureOutcome {
        value,
        error_estimate: error,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let out = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, &[], 1e-12, 1_000_000)
            .unwrap();
        // antiderivative x^4/4 - x^2 + x evaluated at the ends
        let exact = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0);
        assert!((out.value - exact).abs() < 1e-11);
    }

    #[test]
    fn oscillatory_integral() {
        let out = integrate(f64::sin, 0.0, 20.0, &[], 1e-10, 10_000_000).unwrap();
        let exact = 1.0 - 20.0f64.cos();
        assert!((out.value - exact).abs() < 1e-9);
    }

    #[test]
    fn kink_with_breakpoint() {
        let f = |x: f64| (x - 1.0).abs();
        let out = integrate(f, 0.0, 2.0, &[1.0], 1e-12, 1_000_000).unwrap();
        assert!((out.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kink_without_breakpoint_still_converges() {
        let f = |x: f64| (x - 0.3).abs().sqrt();
        let out = integrate(f, 0.0, 1.0, &[], 1e-9, 10_000_000).unwrap();
        // 2/3 * (0.3^1.5 + 0.7^1.5)
        let exact = 2.0 / 3.0 * (0.3f64.powf(1.5) + 0.7f64.powf(1.5));
        assert!((out.value - exact).abs() < 1e-7);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let f = |x: f64| (x - 0.29783).abs().sqrt();
        assert!(matches!(
            integrate(f, 0.0, 1.0, &[], 1e-14, 200),
            Err(Error::ToleranceUnachievable { .. })
        ));
    }

    #[test]
    fn empty_interval() {
        let out = integrate(|_| 1.0, 2.0, 2.0, &[], 1e-9, 100).unwrap();
        assert_eq!(out.value, 0.0);
    }
}
