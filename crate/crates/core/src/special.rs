//! Complete Legendre elliptic integrals, the ratio map `Ψ(k) = k/E(k)` and its
//! inverse `Φ`, and the decay integral `J`.
//!
//! Everything here uses the **modulus** convention `K(k)`, `E(k)`. Libraries
//! that take the parameter `m = k²` (scipy's `ellipk`, Abramowitz–Stegun) are
//! not interchangeable with these functions: a caller holding `q = c²/χ`
//! must pass `√q`.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::error::{Error, Result};
use crate::linalg::integrate_graded;

/// Elliptic modulus `k ∈ [0, 1]`.
///
/// Construction rejects anything outside the closed unit interval. This is the
/// modulus, not the parameter `m = k²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::domain(
                "Modulus::new",
                format!("k = {k} not in [0, 1]"),
            ));
        }
        Ok(Modulus(k))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary modulus `√(1 − k²)`, formed as `√((1−k)(1+k))`.
    pub fn complement(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }
}

/// `(K, E)` by the arithmetic–geometric mean, given `k` and `k' = √(1−k²)`.
///
/// Taking `k'` separately keeps full relative accuracy close to `k = 1`.
pub(crate) fn agm_ke(k: f64, kp: f64) -> (f64, f64) {
    if kp == 0.0 {
        return (f64::INFINITY, 1.0);
    }
    let mut a = 1.0;
    let mut b = kp;
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..64 {
        if c.abs() <= 1e-17 * a {
            break;
        }
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = a_next;
        b = b_next;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let kk = FRAC_PI_2 / a;
    (kk, kk * (1.0 - sum))
}

/// Complete elliptic integral of the first kind,
/// `K(k) = ∫₀¹ dt / √((1−t²)(1−k²t²))`, for `0 ≤ k < 1`.
pub fn complete_elliptic_k(k: Modulus) -> Result<f64> {
    if k.0 >= 1.0 {
        return Err(Error::domain("complete_elliptic_k", "K diverges at k = 1"));
    }
    Ok(agm_ke(k.0, k.complement()).0)
}

/// Complete elliptic integral of the second kind,
/// `E(k) = ∫₀¹ √((1−k²t²)/(1−t²)) dt`, for `0 ≤ k ≤ 1`.
pub fn complete_elliptic_e(k: Modulus) -> f64 {
    if k.0 == 1.0 {
        return 1.0;
    }
    agm_ke(k.0, k.complement()).1.clamp(1.0, FRAC_PI_2)
}

/// `Ψ(k) = k / E(k)`: increasing from `Ψ(0) = 0` to `Ψ(1) = 1`.
pub fn psi_ratio(k: Modulus) -> f64 {
    k.0 / complete_elliptic_e(k)
}

/// `Φ = Ψ⁻¹` on `[0, 1]`.
///
/// Newton's method with `Ψ'(k) = K(k)/E(k)²`, safeguarded by the bracket
/// `x ≤ Φ(x) ≤ min(1, πx/2)`; bisection takes over if Newton has not
/// converged after 50 steps.
pub fn phi_inverse(x: f64) -> Result<Modulus> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(
            "phi_inverse",
            format!("x = {x} not in [0, 1]"),
        ));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(Modulus(x));
    }
    let mut lo = x;
    let mut hi = (FRAC_PI_2 * x).min(1.0);
    let residual = |k: f64| -> (f64, f64) {
        let (kk, e) = agm_ke(k, ((1.0 - k) * (1.0 + k)).sqrt());
        (k / e - x, kk / (e * e))
    };
    let mut k = if 0.99 * hi > lo {
        0.99 * hi
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..50 {
        let (r, dr) = residual(k);
        if r == 0.0 {
            return Ok(Modulus(k));
        }
        if r > 0.0 {
            hi = hi.min(k);
        } else {
            lo = lo.max(k);
        }
        let mut next = k - r / dr;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - k).abs() <= 2.0 * f64::EPSILON * k {
            return Ok(Modulus(next));
        }
        k = next;
    }
    // bisection fallback
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid).0 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Modulus(0.5 * (lo + hi)))
}

/// Value of the decay integral together with the quadrature's own error
/// estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JValue {
    pub x: f64,
    pub value: f64,
    pub quadrature_error_estimate: f64,
}

const J_TOL: f64 = 1e-13;

/// `∫_a^1 dt / (t E(t)²)` computed as `∫_{ln a}^0 du / E(eᵘ)²`.
fn log_measure_integral(a: f64) -> Result<(f64, f64)> {
    if a >= 1.0 {
        return Ok((0.0, 0.0));
    }
    integrate_graded(a.ln(), 0.0, J_TOL, |u| {
        let t = u.exp();
        let kp = (-(2.0 * u).exp_m1()).sqrt();
        let (_, e) = agm_ke(t, kp);
        1.0 / (e * e)
    })
}

/// `J(x) = (π²/4) ∫_{Φ(2x/π)}^1 dt / (t E(t)²)` for `0 < x ≤ π/2`.
///
/// Satisfies `ln⁺(1/x) ≤ J(x) ≤ (π²/4) ln(π/(2x))` and
/// `|J(x) − ln(4/(e x))| ≤ π²x²/8`.
pub fn j_integral(x: f64) -> Result<JValue> {
    let arg = 2.0 * x / PI;
    if !(x > 0.0) || arg > 1.0 + 4.0 * f64::EPSILON {
        return Err(Error::domain(
            "j_integral",
            format!("x = {x} not in (0, π/2]"),
        ));
    }
    let lower = phi_inverse(arg.min(1.0))?.value();
    let (v, err) = log_measure_integral(lower)?;
    let scale = PI * PI / 4.0;
    Ok(JValue {
        x,
        value: scale * v,
        quadrature_error_estimate: scale * err,
    })
}

/// Small-`x` form `J(x) ≈ ln(4/(e x))`.
pub fn j_asymptotic(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "j_asymptotic",
            format!("x = {x} must be positive"),
        ));
    }
    Ok((4.0 / x).ln() - 1.0)
}

/// `Δ = ∫₀¹ (π²/4 − E(t)²) / (t E(t)²) dt`, by quadrature.
///
/// The integrand is `O(t)` at the origin; Gauss nodes never touch `t = 0`.
/// Analytically `Δ = ln(4/e) = 2 ln 2 − 1`.
pub fn delta_constant() -> Result<f64> {
    let quarter_pi_sq = PI * PI / 4.0;
    let (v, _) = integrate_graded(0.0, 1.0, J_TOL, |t| {
        let (_, e) = agm_ke(t, ((1.0 - t) * (1.0 + t)).sqrt());
        let e2 = e * e;
        (quarter_pi_sq - e2) / (t * e2)
    })?;
    Ok(v)
}

/// `J_l(c) = l·J(c/l)` for `0 < c ≤ πl/2`.
pub fn j_l(l: f64, c: f64) -> Result<f64> {
    check_j_l(l, c)?;
    if c >= FRAC_PI_2 * l {
        return Ok(0.0);
    }
    Ok(l * j_integral(c / l)?.value)
}

/// `J_l(c) = (π/2) ∫_c^{πl/2} dτ / (Φ(s) K(Φ(s)))`, `s = 2τ/(πl)`, evaluated
/// directly in `τ`. Exists to cross-check [`j_l`].
pub fn j_l_direct(l: f64, c: f64) -> Result<f64> {
    check_j_l(l, c)?;
    let upper = FRAC_PI_2 * l;
    if c >= upper {
        return Ok(0.0);
    }
    let mut failure = None;
    let (v, _) = integrate_graded(c, upper, 1e-12, |tau| {
        let s = (tau / upper).min(1.0);
        match phi_inverse(s) {
            Ok(k) if k.value() < 1.0 => {
                let (kk, _) = agm_ke(k.value(), k.complement());
                1.0 / (k.value() * kk)
            }
            Ok(_) => 0.0,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(FRAC_PI_2 * v),
    }
}

fn check_j_l(l: f64, c: f64) -> Result<()> {
    if !(l > 0.0) || !(c > 0.0) || c > FRAC_PI_2 * l * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::domain(
            "j_l",
            format!("need 0 < c ≤ πl/2, got l = {l}, c = {c}"),
        ));
    }
    Ok(())
}

/// `2 ln 2 − 1`, the closed form of [`delta_constant`].
pub const LN_4_OVER_E: f64 = 2.0 * LN_2 - 1.0;

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: f64) -> Modulus {
        Modulus::new(k).unwrap()
    }

    /// Direct quadrature of the defining integrals after `t = sin θ`, which
    /// removes the endpoint singularity: K = ∫ dθ/√(1−k²sin²θ),
    /// E = ∫ √(1−k²sin²θ) dθ over [0, π/2].
    fn quad_ke(k: f64) -> (f64, f64) {
        let rule = crate::linalg::gauss_legendre_rule(64).unwrap();
        let kk = rule.integrate_composite(0.0, FRAC_PI_2, 8, |th| {
            1.0 / (1.0 - k * k * th.sin().powi(2)).sqrt()
        });
        let e = rule.integrate_composite(0.0, FRAC_PI_2, 8, |th| {
            (1.0 - k * k * th.sin().powi(2)).sqrt()
        });
        (kk, e)
    }

    #[test]
    fn modulus_rejects_out_of_range() {
        assert!(Modulus::new(-0.1).is_err());
        assert!(Modulus::new(1.000001).is_err());
        assert!(Modulus::new(f64::NAN).is_err());
    }

    #[test]
    fn k_and_e_at_zero_and_one() {
        assert!((complete_elliptic_k(m(0.0)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((complete_elliptic_e(m(0.0)) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(complete_elliptic_e(m(1.0)), 1.0);
        assert!(complete_elliptic_k(m(1.0)).is_err());
        assert!(complete_elliptic_k(m(0.99)).unwrap() > complete_elliptic_k(m(0.5)).unwrap());
    }

    #[test]
    fn k_and_e_match_quadrature() {
        for k in [0.1, 0.5, 0.8, 0.95] {
            let (kq, eq) = quad_ke(k);
            let kk = complete_elliptic_k(m(k)).unwrap();
            let e = complete_elliptic_e(m(k));
            assert!((kk - kq).abs() < 1e-12 * kq, "K({k}) {kk} vs {kq}");
            assert!((e - eq).abs() < 1e-12 * eq, "E({k}) {e} vs {eq}");
        }
    }

    #[test]
    fn psi_endpoints_and_midpoint() {
        assert_eq!(psi_ratio(m(0.0)), 0.0);
        assert_eq!(psi_ratio(m(1.0)), 1.0);
        let (_, eq) = quad_ke(0.5);
        assert!((psi_ratio(m(0.5)) - 0.5 / eq).abs() < 1e-13);
    }

    #[test]
    fn phi_endpoints_and_round_trip() {
        assert_eq!(phi_inverse(0.0).unwrap().value(), 0.0);
        assert_eq!(phi_inverse(1.0).unwrap().value(), 1.0);
        let x = psi_ratio(m(0.5));
        assert!((phi_inverse(x).unwrap().value() - 0.5).abs() < 1e-12);
        assert!(phi_inverse(1.5).is_err());
        assert!(phi_inverse(-0.1).is_err());
    }

    #[test]
    fn phi_near_one_is_accurate() {
        for k in [0.999, 0.999_999, 0.999_999_99] {
            let x = psi_ratio(m(k));
            let back = phi_inverse(x).unwrap();
            assert!((psi_ratio(back) - x).abs() <= 1e-13);
        }
    }

    #[test]
    fn j_at_half_pi_is_zero() {
        assert_eq!(j_integral(FRAC_PI_2).unwrap().value, 0.0);
        assert!(j_integral(0.0).is_err());
        assert!(j_integral(1.6).is_err());
    }

    #[test]
    fn j_bounds_at_tenth() {
        let j = j_integral(0.1).unwrap().value;
        assert!(j >= 10f64.ln());
        assert!(j <= PI * PI / 4.0 * (5.0 * PI).ln());
    }

    #[test]
    fn j_asymptotic_values() {
        assert!(j_asymptotic(4.0 / std::f64::consts::E).unwrap().abs() < 1e-15);
        assert!((j_asymptotic(1.0).unwrap() - LN_4_OVER_E).abs() < 1e-15);
        assert!(j_asymptotic(0.0).is_err());
        for x in [0.05, 0.01] {
            let j = j_integral(x).unwrap().value;
            assert!((j - j_asymptotic(x).unwrap()).abs() <= PI * PI * x * x / 8.0);
        }
    }

    #[test]
    fn delta_is_ln_four_over_e() {
        assert!((delta_constant().unwrap() - LN_4_OVER_E).abs() < 1e-10);
    }

    #[test]
    fn delta_via_j_machinery() {
        // (π²/4)∫_y^1 dt/(tE²) + ln y → Δ as y → 0; the gap is at most π²y²/8
        let y = 1e-4;
        let (v, _) = log_measure_integral(y).unwrap();
        let approx = PI * PI / 4.0 * v + y.ln();
        assert!((approx - LN_4_OVER_E).abs() <= PI * PI * y * y / 8.0 + 1e-11);
    }

    #[test]
    fn j_l_identity_and_monotonicity() {
        assert_eq!(j_l(3.0, 1.5 * PI).unwrap(), 0.0);
        let a = j_l(7.0, 2.0).unwrap();
        let b = j_l_direct(7.0, 2.0).unwrap();
        assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        let mut prev = 0.0;
        for l in [2.0, 3.0, 5.0, 8.0, 13.0] {
            let v = j_l(l, 2.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(j_l(1.0, 2.0).is_err());
    }
}
