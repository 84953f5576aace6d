use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A Gauss–Legendre rule on `[-1, 1]`.
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

    /// Maps the rule onto `[a, b]` and returns `(node, weight)` pairs.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over `panels` equal panels of `[a, b]`.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + h * p as f64;
                let hi = if p + 1 == panels { b } else { lo + h };
                self.integrate(lo, hi, &mut f)
            })
            .sum()
    }
}

/// Evaluates `P_m(x)` and `P_m'(x)` by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule with `m` nodes.
///
/// Nodes are the roots of `P_m`, found by Newton iteration from Chebyshev-like
/// initial guesses; weights are `2 / ((1 - x²) P_m'(x)²)`. Only the positive
/// half is computed, the other half is mirrored so the rule is exactly
/// symmetric.
pub fn gauss_legendre_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > 100_000 {
        return Err(Error::domain(
            "gauss_legendre_rule",
            format!("m = {m} not in [1, 100000]"),
        ));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m / 2 {
        // i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    if m % 2 == 1 {
        let (_, d) = legendre_with_derivative(m, 0.0);
        nodes[m / 2] = 0.0;
        weights[m / 2] = 2.0 / (d * d);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// The 32-point rule used by all composite integrators in the crate.
pub fn gl32() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_rule(32).expect("32 is a valid order"))
}

const GRADED_LEVELS: usize = 64;

/// Integrates `f` over `[a, b]` when `f` is bounded but non-smooth at `b`
/// (logarithmic endpoint behaviour such as `(1-t) ln(1-t)`).
///
/// The interval is cut geometrically toward `b` (each panel half the width of
/// its left neighbour), every graded panel is split into `p` equal
/// sub-panels, and `p` is doubled until two successive results differ by less
/// than `tol`. Returns the value and the last difference.
pub fn integrate_graded<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    tol: f64,
    mut f: F,
) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let rule = gl32();
    let width = b - a;
    let floor = 64.0 * f64::EPSILON * b.abs();
    let mut eval = |p: usize| -> f64 {
        let mut sum = 0.0;
        let mut lo = a;
        for level in 1..=GRADED_LEVELS {
            let hi = b - width * 0.5f64.powi(level as i32);
            if (b - hi).abs() <= floor {
                // nodes this close to b would round onto b itself
                return sum;
            }
            sum += rule.integrate_composite(lo, hi, p, &mut f);
            lo = hi;
        }
        sum + rule.integrate(lo, b, &mut f)
    };
    let mut prev = eval(1);
    let mut p = 2;
    while p <= 256 {
        let cur = eval(p);
        let diff = (cur - prev).abs();
        if diff < tol {
            return Ok((cur, diff));
        }
        prev = cur;
        p *= 2;
    }
    Err(Error::Convergence {
        what: "graded Gauss-Legendre quadrature",
        diagnostics: format!("interval [{a}, {b}] not resolved to {tol:e} with 256 sub-panels"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_and_two_point_rules() {
        let r = gauss_legendre_rule(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);

        let r = gauss_legendre_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[0] + s).abs() < 1e-15 && (r.nodes()[1] - s).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15 && (r.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_order_is_rejected() {
        assert!(matches!(gauss_legendre_rule(0), Err(Error::Domain { .. })));
    }

    #[test]
    fn high_moment_is_exact() {
        let r = gauss_legendre_rule(20).unwrap();
        let got = r.integrate(-1.0, 1.0, |t| t.powi(38));
        assert!((got - 2.0 / 39.0).abs() < 1e-13);
    }

    #[test]
    fn weights_sum_to_two_and_nodes_are_symmetric() {
        for m in [3, 7, 32, 101, 640] {
            let r = gauss_legendre_rule(m).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "m={m}: {s}");
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            for i in 0..m {
                assert_eq!(r.nodes()[i], -r.nodes()[m - 1 - i]);
            }
            let odd: f64 = r.integrate(-1.0, 1.0, |t| t.powi(5));
            assert!(odd.abs() < 1e-14);
        }
    }

    #[test]
    fn graded_rule_handles_log_endpoint() {
        // ∫_0^1 (1-t) ln(1-t) dt = -1/4
        let (v, _) = integrate_graded(0.0, 1.0, 1e-14, |t| (1.0 - t) * (1.0 - t).ln()).unwrap();
        assert!((v + 0.25).abs() < 1e-13, "{v}");
    }
}
