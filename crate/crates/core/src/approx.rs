//! Closed-form approximations of `q`, `χ_n`, `ψ_n(1)²` and `λ_n`, their
//! error brackets, and the validity conditions attached to them.
//!
//! Everything eigenvalue-like is returned as a natural logarithm.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{prolate_solve, ProlateEigenpair, SpectralPoint};
use crate::special::{complete_elliptic_k, j_integral, phi_inverse, Modulus};

fn phi_argument(point: SpectralPoint, shift: f64) -> f64 {
    2.0 * point.c / (PI * (point.n as f64 + shift))
}

/// True when `2c/(π(n+½)) ≤ 1`, i.e. `q̃` is defined.
pub fn q_valid(point: SpectralPoint) -> bool {
    phi_argument(point, 0.5) <= 1.0
}

fn require_valid(point: SpectralPoint, what: &str) -> Result<f64> {
    let x = phi_argument(point, 0.5);
    if x > 1.0 {
        return Err(Error::Validity(format!(
            "{what}: 2c/(π(n+½)) = {x} > 1 at n = {}, c = {}",
            point.n, point.c
        )));
    }
    Ok(x)
}

/// `√q̃ = Φ(2c/(π(n+½)))`.
pub fn sqrt_q_tilde(point: SpectralPoint) -> Result<f64> {
    let x = require_valid(point, "sqrt_q_tilde")?;
    let k = phi_inverse(x)?.value();
    debug_assert!(k >= x * (1.0 - 1e-15) && k <= (FRAC_PI_2 * x).min(1.0) * (1.0 + 1e-15));
    Ok(k)
}

pub fn q_tilde(point: SpectralPoint) -> Result<f64> {
    sqrt_q_tilde(point).map(|s| s * s)
}

/// `√χ̃ = c / √q̃`.
pub fn sqrt_chi_tilde(point: SpectralPoint) -> Result<f64> {
    sqrt_q_tilde(point).map(|s| point.c / s)
}

pub fn chi_tilde(point: SpectralPoint) -> Result<f64> {
    sqrt_chi_tilde(point).map(|s| s * s)
}

/// `(1 − q̃)√χ̃`, the approximate counterpart of `1/ε_n`.
pub fn kappa_tilde(point: SpectralPoint) -> Result<f64> {
    let s = sqrt_q_tilde(point)?;
    Ok((1.0 - s) * (1.0 + s) * point.c / s)
}

/// Which `q` fed an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QSource {
    Oracle,
    Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Psi1Estimate {
    pub value: f64,
    pub sqrt_q: f64,
    pub source: QSource,
}

/// `πc / (2√q K(√q))`, which equals `π√χ/(2K(√q))` for `q = c²/χ`.
pub fn psi1_sq_from_sqrt_q(c: f64, sqrt_q: f64) -> Result<f64> {
    if !(sqrt_q > 0.0 && sqrt_q < 1.0) {
        return Err(Error::Validity(format!("√q = {sqrt_q} outside (0, 1)")));
    }
    Ok(PI * c / (2.0 * sqrt_q * complete_elliptic_k(Modulus::new(sqrt_q)?)?))
}

/// Estimate of `ψ_n(1)²` from either the oracle `q` or `q̃`.
pub fn psi1_sq_estimate(point: SpectralPoint, source: QSource) -> Result<Psi1Estimate> {
    let sqrt_q = match source {
        QSource::Oracle => prolate_solve(point)?.sqrt_q(),
        QSource::Tilde => sqrt_q_tilde(point)?,
    };
    Ok(Psi1Estimate {
        value: psi1_sq_from_sqrt_q(point.c, sqrt_q)?,
        sqrt_q,
        source,
    })
}

const ALPHA: f64 = 1.5;
const BETA: f64 = 0.35;

/// `δ(κ) = η(2 + η/κ)` with
/// `C(κ)⁻¹ = (1−β/κ)^½ − √2 α κ⁻¹ (1 + α/κ)` and
/// `η = C(κ)(β/(1 + (1−β/κ)^½) + √2 α (1 + α/κ))`, `α = 1.5`, `β = 0.35`.
pub fn delta_kappa(kappa: f64) -> Result<f64> {
    if !(kappa >= 4.0) || !kappa.is_finite() {
        return Err(Error::domain(
            "delta_kappa",
            format!("κ = {kappa} must be ≥ 4"),
        ));
    }
    let root = (1.0 - BETA / kappa).sqrt();
    let grow = 1.0 + ALPHA / kappa;
    let c_inv = root - 2f64.sqrt() * ALPHA / kappa * grow;
    if c_inv <= 0.0 {
        return Err(Error::domain(
            "delta_kappa",
            format!("C(κ)⁻¹ = {c_inv} ≤ 0 at κ = {kappa}"),
        ));
    }
    let eta = (BETA / (1.0 + root) + 2f64.sqrt() * ALPHA * grow) / c_inv;
    Ok(eta * (2.0 + eta / kappa))
}

/// Bracket on `ψ_n(1)²`: `(π√χ/(2K(√q)))(1 ∓ δ(κ)ε_n)`, `ε_n = ((1−q)√χ)⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaBound {
    pub kappa: f64,
    pub epsilon_n: f64,
    pub delta_of_kappa: f64,
    pub lower: f64,
    pub upper: f64,
}

impl KappaBound {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// The `ψ_n(1)²` bracket at an oracle eigenpair, valid when `(1−q)√χ > κ ≥ 4`.
pub fn psi1_sq_bracket(pair: &ProlateEigenpair, kappa: f64) -> Result<KappaBound> {
    let delta_of_kappa = delta_kappa(kappa)?;
    let q = pair.q();
    if q >= 1.0 {
        return Err(Error::Validity(format!(
            "q = {q} ≥ 1 at n = {}, c = {}",
            pair.point.n, pair.point.c
        )));
    }
    let measure = pair.kappa_measure();
    if !(measure > kappa) {
        let cond = kappa_condition(pair.point, kappa).ok();
        let which = match cond {
            Some(k) if k.satisfied => {
                "the sufficient conditions hold but the oracle value does not"
            }
            Some(_) => {
                "none of c ≤ n − κ, πn/2 − c > (κ/4)(ln n + 9), πn/2 − c > (κ/4)(ln n + 6) holds"
            }
            None => "n < 3, so the sufficient conditions do not apply",
        };
        return Err(Error::Validity(format!(
            "(1−q)√χ = {measure} ≤ κ = {kappa} at n = {}, c = {} ({which})",
            pair.point.n, pair.point.c
        )));
    }
    let epsilon_n = 1.0 / measure;
    let centre = psi1_sq_from_sqrt_q(pair.point.c, pair.sqrt_q())?;
    Ok(KappaBound {
        kappa,
        epsilon_n,
        delta_of_kappa,
        lower: centre * (1.0 - delta_of_kappa * epsilon_n),
        upper: centre * (1.0 + delta_of_kappa * epsilon_n),
    })
}

/// Which sufficient condition for `(1−q)√χ > κ` fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaBranch {
    /// `c ≤ n − κ`
    SmallC,
    /// `πn/2 − c > (κ/4)(ln n + 9)`
    Margin9,
    /// `c > (n+1)/2` and `πn/2 − c > (κ/4)(ln n + 6)`
    Margin6,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaCondition {
    pub satisfied: bool,
    pub branch: Option<KappaBranch>,
    /// `c_n^κ = max(πn/2 − (κ/4)(ln n + 6), (n+1)/2)`
    pub c_n_kappa: f64,
    /// `((n − 2c/π) − e⁻¹)/(ln n + 5)`, a lower bound on `(1−q)√χ` when `q < 1`.
    pub crude_lower_bound: f64,
}

/// Sufficient conditions in `(n, c)` for `(1−q)√χ_n(c) > κ`.
pub fn kappa_condition(point: SpectralPoint, kappa: f64) -> Result<KappaCondition> {
    let SpectralPoint { n, c } = point;
    if n < 3 || !(kappa >= 4.0) {
        return Err(Error::domain(
            "kappa_condition",
            format!("need n ≥ 3 and κ ≥ 4, got n = {n}, κ = {kappa}"),
        ));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let margin = FRAC_PI_2 * nf - c;
    let branch = if c <= nf - kappa {
        Some(KappaBranch::SmallC)
    } else if margin > 0.25 * kappa * (ln_n + 9.0) {
        Some(KappaBranch::Margin9)
    } else if c > 0.5 * (nf + 1.0) && margin > 0.25 * kappa * (ln_n + 6.0) {
        Some(KappaBranch::Margin6)
    } else {
        None
    };
    Ok(KappaCondition {
        satisfied: branch.is_some(),
        branch,
        c_n_kappa: (FRAC_PI_2 * nf - 0.25 * kappa * (ln_n + 6.0)).max(0.5 * (nf + 1.0)),
        crude_lower_bound: ((nf - 2.0 * c / PI) - (-1f64).exp()) / (ln_n + 5.0),
    })
}

/// `ln λ̃_n(c) = ln ½ − (2n+1) J(c/(n+½))`.
pub fn lambda_tilde(point: SpectralPoint) -> Result<f64> {
    require_valid(point, "lambda_tilde")?;
    let l = point.n as f64 + 0.5;
    Ok(-LN_2 - 2.0 * l * j_integral(point.c / l)?.value)
}

/// `ln λ̂_n(c) = ln 2 + ln λ̃_n(c)`.
pub fn lambda_hat(point: SpectralPoint) -> Result<f64> {
    lambda_tilde(point).map(|v| v + LN_2)
}

/// `ln λ^W_n(c) = (2n+1) ln(ec/(4(n+½)))`.
pub fn lambda_widom(point: SpectralPoint) -> f64 {
    let l = point.n as f64 + 0.5;
    2.0 * l * ((point.c / (4.0 * l)).ln() + 1.0)
}

/// `ln|μ| = ½(ln(2π/c) + ln λ)`.
pub fn mu_abs_from_loglambda(c: f64, log_lambda: f64) -> f64 {
    0.5 * ((2.0 * PI / c).ln() + log_lambda)
}

/// Inverse of [`mu_abs_from_loglambda`].
pub fn loglambda_from_mu_abs(c: f64, log_mu: f64) -> f64 {
    2.0 * log_mu - (2.0 * PI / c).ln()
}

/// `ln ½ + ln λ^W ∓ π²c²/(4(n+½))`, which must contain `ln λ̃`.
pub fn tilde_bracket(point: SpectralPoint) -> Result<(f64, f64)> {
    require_valid(point, "tilde_bracket")?;
    let centre = -LN_2 + lambda_widom(point);
    let half = PI * PI * point.c * point.c / (4.0 * (point.n as f64 + 0.5));
    Ok((centre - half, centre + half))
}

/// The explicit `δ1, δ2, δ3` for a given `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorConstants {
    pub kappa: f64,
    pub delta_of_kappa: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
}

pub fn error_constants(kappa: f64) -> Result<ErrorConstants> {
    let d = delta_kappa(kappa)?;
    let pk = PI * kappa;
    let shared = PI * PI / 8.0 + 2.0 * d * (1.0 + pk / 4.0);
    Ok(ErrorConstants {
        kappa,
        delta_of_kappa: d,
        delta1: 22.0 + 3.0 * pk * (2.0 + d),
        delta2: shared + pk,
        delta3: shared,
    })
}

impl ErrorConstants {
    /// Bound on `|ℰ|`, the gap between `∫_c^{c*} ψ_τ(1)²/τ dτ` and
    /// `(n+½)J(c/(n+½))`, assembled from the tail, bracket and comparison
    /// pieces.
    pub fn error_budget(&self, n: usize, c: f64) -> f64 {
        let (k, d) = (self.kappa, self.delta_of_kappa);
        let ln_n = (n as f64).ln();
        let ln_plus = (1.0 / c).ln().max(0.0);
        let tail = PI * k * ln_n + 6.0 * PI * k + 2.0 * PI * PI;
        let bracket = 2.0 * d * ((1.0 + PI * k / 4.0) * ln_n + ln_plus + 1.5 * PI * k);
        let comparison =
            PI * PI / 8.0 * (PI * (n as f64 + 0.5) / (2.0 * c)).ln() + PI.powi(3) / 16.0;
        tail + bracket + comparison
    }
}

/// Empirical counterpart of `(κ, δ(κ))` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservedKappa {
    pub n: usize,
    /// `(1−q)√χ_n`
    pub kappa_obs: f64,
    /// Smallest `δ` turning the `ψ_n(1)²` bracket into an equality.
    pub delta_obs: f64,
}

pub fn observed_kappa_delta(c: f64, n: usize) -> Result<ObservedKappa> {
    let pair = prolate_solve(SpectralPoint::new(n, c)?)?;
    observed_from_pair(&pair)
}

fn observed_from_pair(pair: &ProlateEigenpair) -> Result<ObservedKappa> {
    let q = pair.q();
    if q >= 1.0 {
        return Err(Error::Validity(format!(
            "q = {q} ≥ 1 at n = {}, c = {}",
            pair.point.n, pair.point.c
        )));
    }
    let kappa_obs = pair.kappa_measure();
    let estimate = psi1_sq_from_sqrt_q(pair.point.c, pair.sqrt_q())?;
    let ratio = pair.psi_at_1 * pair.psi_at_1 / estimate;
    Ok(ObservedKappa {
        n: pair.point.n,
        kappa_obs,
        delta_obs: (ratio - 1.0).abs() * kappa_obs,
    })
}

/// `⌊2c/π⌋`, robust to `c` being a float multiple of `π`.
pub fn plunge_start(c: f64) -> usize {
    (2.0 * c / PI + 1e-9).floor() as usize
}

/// One row of the critical-`κ` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalKappa {
    pub c: f64,
    pub n_c: usize,
    pub kappa_c: f64,
    pub delta_c: f64,
    pub max_delta: f64,
    pub argmax_delta: usize,
    /// Index minimising `κ_obs` over the window.
    pub argmin_kappa: usize,
}

/// `κ_obs(n_c)`, `δ_obs(n_c)` and `max δ_obs` over `n ∈ [n_c, n_c + window]`.
pub fn critical_kappa(c: f64, window: usize) -> Result<CriticalKappa> {
    let n_c = plunge_start(c);
    let rows = (n_c..=n_c + window)
        .map(|n| observed_kappa_delta(c, n))
        .collect::<Result<Vec<_>>>()?;
    let first = rows[0];
    let max = rows
        .iter()
        .copied()
        .fold(first, |a, b| if b.delta_obs > a.delta_obs { b } else { a });
    let min = rows
        .iter()
        .copied()
        .fold(first, |a, b| if b.kappa_obs < a.kappa_obs { b } else { a });
    Ok(CriticalKappa {
        c,
        n_c,
        kappa_c: first.kappa_obs,
        delta_c: first.delta_obs,
        max_delta: max.delta_obs,
        argmax_delta: max.n,
        argmin_kappa: min.n,
    })
}

/// All approximants at one point; fields depending on `q̃` are `None`
/// outside its validity region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxBundle {
    pub point: SpectralPoint,
    pub q_valid: bool,
    pub sqrt_q_tilde: Option<f64>,
    pub chi_tilde: Option<f64>,
    pub kappa_tilde: Option<f64>,
    pub psi1_sq_estimate: Option<f64>,
    pub log_lambda_tilde: Option<f64>,
    pub log_lambda_hat: Option<f64>,
    pub log_lambda_widom: f64,
}

pub fn approx_bundle(point: SpectralPoint) -> Result<ApproxBundle> {
    let widom = lambda_widom(point);
    if !q_valid(point) {
        return Ok(ApproxBundle {
            point,
            q_valid: false,
            sqrt_q_tilde: None,
            chi_tilde: None,
            kappa_tilde: None,
            psi1_sq_estimate: None,
            log_lambda_tilde: None,
            log_lambda_hat: None,
            log_lambda_widom: widom,
        });
    }
    let s = sqrt_q_tilde(point)?;
    let tilde = lambda_tilde(point)?;
    Ok(ApproxBundle {
        point,
        q_valid: true,
        sqrt_q_tilde: Some(s),
        chi_tilde: Some((point.c / s).powi(2)),
        kappa_tilde: Some((1.0 - s) * (1.0 + s) * point.c / s),
        psi1_sq_estimate: if s < 1.0 {
            Some(psi1_sq_from_sqrt_q(point.c, s)?)
        } else {
            None
        },
        log_lambda_tilde: Some(tilde),
        log_lambda_hat: Some(tilde + LN_2),
        log_lambda_widom: widom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, c: f64) -> SpectralPoint {
        SpectralPoint::new(n, c).unwrap()
    }

    #[test]
    fn sqrt_q_tilde_printed_values() {
        assert!((sqrt_q_tilde(p(10, 10.0)).unwrap() - 0.782942846).abs() < 1e-8);
        assert!((sqrt_q_tilde(p(100, 100.0)).unwrap() - 0.80540660).abs() < 1e-8);
    }

    #[test]
    fn large_c_columns() {
        let pt = p(179, 250.0);
        assert!((q_tilde(pt).unwrap() / 0.924218 - 1.0).abs() < 1e-5);
        assert!((kappa_tilde(pt).unwrap() / 19.707014 - 1.0).abs() < 1e-5);
        let mu = mu_abs_from_loglambda(250.0, lambda_hat(pt).unwrap()).exp();
        assert!((mu / 0.18948e-7 - 1.0).abs() < 5e-4, "{mu:e}");
    }

    #[test]
    fn validity_is_typed() {
        assert!(matches!(sqrt_q_tilde(p(2, 10.0)), Err(Error::Validity(_))));
        assert!(!approx_bundle(p(2, 10.0)).unwrap().q_valid);
    }

    #[test]
    fn widom_base_one() {
        let n = 7;
        let c = 2.0 * (2.0 * n as f64 + 1.0) / std::f64::consts::E;
        assert!(lambda_widom(p(n, c)).abs() < 1e-13);
    }

    #[test]
    fn mu_round_trip() {
        let c = 31.4;
        assert!(mu_abs_from_loglambda(c, (c / (2.0 * PI)).ln()).abs() < 1e-15);
        let l = -123.456;
        assert!((loglambda_from_mu_abs(c, mu_abs_from_loglambda(c, l)) - l).abs() < 1e-13);
    }

    #[test]
    fn tilde_bracket_contains_and_width() {
        for &(n, c) in &[(5usize, 1.0), (30, 10.0), (40, 10.0 * PI)] {
            let pt = p(n, c);
            let (lo, hi) = tilde_bracket(pt).unwrap();
            let t = lambda_tilde(pt).unwrap();
            assert!(lo <= t && t <= hi);
            let width = PI * PI * c * c / (2.0 * (n as f64 + 0.5));
            assert!(((hi - lo) - width).abs() <= 1e-12 * width);
        }
    }

    #[test]
    fn psi1_estimate_direct_formula() {
        let (c, sq) = (10.0, 0.5f64.sqrt());
        let k = complete_elliptic_k(Modulus::new(sq).unwrap()).unwrap();
        let v = psi1_sq_from_sqrt_q(c, sq).unwrap();
        assert!((v - PI * c / (2.0 * sq * k)).abs() < 1e-14 * v);
        // tends to √(n(n+1)) ≈ n + ½
        let small = psi1_sq_estimate(p(5, 1e-3), QSource::Oracle).unwrap();
        assert!((small.value - 30f64.sqrt()).abs() < 1e-6);
        assert!((small.value - 5.5).abs() < 0.03);
    }

    #[test]
    fn delta_kappa_domain_and_monotone() {
        assert!(delta_kappa(3.9).is_err());
        let mut prev = delta_kappa(4.0).unwrap();
        for k in 5..60 {
            let d = delta_kappa(k as f64).unwrap();
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn kappa_condition_branches() {
        let a = kappa_condition(p(100, 50.0), 12.0).unwrap();
        assert_eq!(a.branch, Some(KappaBranch::SmallC));
        let b = kappa_condition(p(25, FRAC_PI_2 * 25.0), 4.0).unwrap();
        assert!(!b.satisfied);
        assert!(kappa_condition(p(2, 1.0), 4.0).is_err());
    }

    #[test]
    fn bracket_contains_oracle() {
        for n in [30, 45, 120] {
            let pair = prolate_solve(p(n, 10.0 * PI)).unwrap();
            let b = psi1_sq_bracket(&pair, 12.0).unwrap();
            assert!(b.lower <= b.upper);
            assert!(b.contains(pair.psi_at_1 * pair.psi_at_1), "n={n}");
        }
        let pair = prolate_solve(p(21, 10.0 * PI)).unwrap();
        assert!(matches!(
            psi1_sq_bracket(&pair, 4.0),
            Err(Error::Validity(_))
        ));
    }

    #[test]
    fn error_constants_relations() {
        let t = error_constants(12.0).unwrap();
        assert!((t.delta2 - t.delta3 - PI * 12.0).abs() < 1e-12);
        assert!(t.delta1 >= 1.0);
        assert!(t.error_budget(100, 10.0) > 0.0);
    }
}
