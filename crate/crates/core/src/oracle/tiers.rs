use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::sync::OnceLock;

use rayon::prelude::*;

use super::{
    default_nystrom_size, nystrom_spectrum, prolate_solve, LogLambda, NystromSpectrum, Parity,
    ProlateEigenpair, SpectralPoint, Tier,
};
use crate::approx;
use crate::error::{Error, Result};
use crate::linalg::gl32;
use crate::roots::brent;

/// The ratio tier refuses leading coefficients smaller than this.
pub const RATIO_FLOOR: f64 = 1e-13;

/// `λ_n` from `F_c ψ_n = μ_n ψ_n` evaluated at `x = 0`.
///
/// Even `n`: `∫ψ = √2 β_0 = μ ψ(0)`, so `|μ| = √2 |β_0| / |ψ(0)|`.
/// Odd `n`: differentiating once, `ic ∫ y ψ(y) dy = μ ψ'(0)` and
/// `∫ y P̄_1 = √(2/3)`, so `|μ| = c √(2/3) |β_1| / |ψ'(0)|`.
/// Then `λ = (c/2π) |μ|²`.
pub fn mu_ratio(pair: &ProlateEigenpair) -> Result<LogLambda> {
    let c = pair.point.c;
    let lead = pair.beta[0].abs();
    if lead < RATIO_FLOOR {
        return Err(Error::BelowFloor {
            tier: "ratio",
            detail: format!(
                "leading Legendre coefficient {lead:e} < {RATIO_FLOOR:e} at n = {}, c = {c}",
                pair.point.n
            ),
        });
    }
    let log_mu = match pair.parity {
        Parity::Even => (2f64.sqrt() * lead / pair.psi_at_0.abs()).ln(),
        Parity::Odd => (c * (2.0f64 / 3.0).sqrt() * lead / pair.dpsi_at_0.abs()).ln(),
    };
    Ok(LogLambda {
        log_value: 2.0 * log_mu + (c / (2.0 * PI)).ln(),
        method: Tier::Ratio,
        // the twisted factorisation keeps small components relatively accurate
        error_estimate: 8.0 * f64::EPSILON * pair.truncation as f64,
    })
}

/// Ratio-tier `ln λ_n(c)`.
pub fn lambda_ratio_at(point: SpectralPoint) -> Result<LogLambda> {
    mu_ratio(&prolate_solve(point)?)
}

/// Oracle used to evaluate `λ_n(c)` inside the `c*_n` root search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CStarMethod {
    Ratio,
    Nystrom,
}

/// `c*_n`, the bandwidth where `λ_n = ½`, with the ratio tier as evaluator.
pub fn c_star(n: usize) -> Result<f64> {
    c_star_with(n, CStarMethod::Ratio)
}

/// Brent search for `ln λ_n(c) = ln ½` over `[π(n−1)/2, π(n+1)/2]`.
pub fn c_star_with(n: usize, method: CStarMethod) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("c_star", "n must be at least 1"));
    }
    let lo = (FRAC_PI_2 * (n as f64 - 1.0)).max(0.5);
    let hi = FRAC_PI_2 * (n as f64 + 1.0);
    let f = |c: f64| -> Result<f64> {
        let log = match method {
            CStarMethod::Ratio => lambda_ratio_at(SpectralPoint::new(n, c)?)?.log_value,
            CStarMethod::Nystrom => {
                nystrom_spectrum(c, default_nystrom_size(c, n + 1))?
                    .log_lambda(n)?
                    .log_value
            }
        };
        Ok(log + LN_2)
    };
    brent(f, lo, hi, 1e-13 * hi).map_err(|e| match e {
        Error::Convergence { diagnostics, .. } => Error::Convergence {
            what: "c* root search",
            diagnostics: format!("n = {n}: {diagnostics}"),
        },
        other => other,
    })
}

const INTEGRAL_TOL: f64 = 1e-8;
const MAX_PANELS: usize = 1024;

/// `ln λ_n(c) = ln ½ − 2 ∫_c^{c*_n} ψ_{n,τ}(1)² / τ dτ`.
///
/// The integral is taken in `s = ln τ` with composite 32-point Gauss–Legendre
/// panels, doubling the panel count until the result moves by less than
/// `1e-8`. Only logarithms are formed, so there is no floor.
pub fn log_lambda_integral(point: SpectralPoint) -> Result<LogLambda> {
    let cs = c_star(point.n)?;
    integral_with_c_star(point, cs)
}

pub(crate) fn integral_with_c_star(point: SpectralPoint, cs: f64) -> Result<LogLambda> {
    let SpectralPoint { n, c } = point;
    if c > cs * (1.0 + 1e-13) {
        return Err(Error::domain(
            "log_lambda_integral",
            format!("c = {c} exceeds c*_{n} = {cs}; use the nystrom tier"),
        ));
    }
    if c >= cs {
        return Ok(LogLambda {
            log_value: -LN_2,
            method: Tier::Integral,
            error_estimate: 0.0,
        });
    }
    let (s0, s1) = (c.ln(), cs.ln());
    let rule = gl32();
    let mut previous: Option<f64> = None;
    let mut panels = 1;
    while panels <= MAX_PANELS {
        let h = (s1 - s0) / panels as f64;
        let nodes: Vec<(f64, f64)> = (0..panels)
            .flat_map(|p| {
                let lo = s0 + h * p as f64;
                let hi = if p + 1 == panels { s1 } else { lo + h };
                rule.mapped(lo, hi).collect::<Vec<_>>()
            })
            .collect();
        let values: Vec<f64> = nodes
            .par_iter()
            .map(|&(s, w)| {
                let pair = prolate_solve(SpectralPoint { n, c: s.exp() })?;
                Ok(w * pair.psi_at_1 * pair.psi_at_1)
            })
            .collect::<Result<_>>()?;
        let integral: f64 = values.iter().sum();
        let log_value = -LN_2 - 2.0 * integral;
        if let Some(prev) = previous {
            let change = (log_value - prev).abs();
            if change < INTEGRAL_TOL {
                return Ok(LogLambda {
                    log_value,
                    method: Tier::Integral,
                    error_estimate: change,
                });
            }
        }
        previous = Some(log_value);
        panels *= 2;
    }
    Err(Error::Convergence {
        what: "log-domain τ integral",
        diagnostics: format!("n = {n}, c = {c}: not converged with {MAX_PANELS} panels"),
    })
}

/// Tier thresholds on the predicted `λ`.
const NYSTROM_MIN: f64 = 1e-8;
const RATIO_MIN: f64 = 1e-24;
/// Half-width (in `ln`) of the overlap bands around each threshold.
const OVERLAP: f64 = 4.605_170_185_988_091; // ln 100

/// Evaluates `λ_n(c)` at fixed `c` for many `n`, sharing one Nyström
/// spectrum and one `c*_n` per `n`.
pub struct LambdaOracle {
    c: f64,
    nystrom: OnceLock<Result<NystromSpectrum>>,
}

impl LambdaOracle {
    pub fn new(c: f64) -> Result<Self> {
        SpectralPoint::new(0, c)?;
        Ok(LambdaOracle {
            c,
            nystrom: OnceLock::new(),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn spectrum(&self) -> Result<&NystromSpectrum> {
        self.nystrom
            .get_or_init(|| nystrom_spectrum(self.c, default_nystrom_size(self.c, 0)))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `ln λ_n` from one specific tier.
    pub fn tier(&self, n: usize, tier: Tier) -> Result<LogLambda> {
        let point = SpectralPoint::new(n, self.c)?;
        match tier {
            Tier::Nystrom => {
                let s = self.spectrum()?;
                if n + 10 > s.size {
                    return Err(Error::BelowFloor {
                        tier: "nystrom",
                        detail: format!("n = {n} too close to rule size {}", s.size),
                    });
                }
                s.log_lambda(n)
            }
            Tier::Ratio => lambda_ratio_at(point),
            Tier::Integral => log_lambda_integral(point),
        }
    }

    /// Tier chosen from the `λ̂` prediction; see [`lambda_best`].
    pub fn best(&self, n: usize) -> Result<LogLambda> {
        let point = SpectralPoint::new(n, self.c)?;
        // outside q̃-validity λ is O(1)
        let predicted = approx::lambda_hat(point).unwrap_or(0.0);
        let order = if predicted >= NYSTROM_MIN.ln() {
            [Tier::Nystrom, Tier::Ratio, Tier::Integral]
        } else if predicted >= RATIO_MIN.ln() {
            [Tier::Ratio, Tier::Integral, Tier::Nystrom]
        } else {
            [Tier::Integral, Tier::Ratio, Tier::Nystrom]
        };
        let mut result = None;
        let mut last_err = None;
        for (i, &tier) in order.iter().enumerate() {
            match self.tier(n, tier) {
                Ok(v) => {
                    result = Some((i, v));
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        let Some((_, mut best)) = result else {
            return Err(last_err.expect("at least one tier was tried"));
        };

        let second = if (predicted - NYSTROM_MIN.ln()).abs() <= OVERLAP {
            Some(if best.method == Tier::Nystrom {
                Tier::Ratio
            } else {
                Tier::Nystrom
            })
        } else if (predicted - RATIO_MIN.ln()).abs() <= OVERLAP {
            Some(if best.method == Tier::Ratio {
                Tier::Integral
            } else {
                Tier::Ratio
            })
        } else {
            None
        };
        if let Some(other) = second.filter(|&t| t != best.method) {
            if let Ok(v) = self.tier(n, other) {
                best.error_estimate = best
                    .error_estimate
                    .max((v.log_value - best.log_value).abs());
            }
        }
        Ok(best)
    }
}

/// `ln λ_n(c)` from the most suitable tier.
///
/// The tier is chosen from the closed-form prediction `λ̂`: Nyström when
/// `λ̂ ≥ 1e-8` (or when `λ̂` is undefined because `q̃ ≥ 1`), ratio when
/// `λ̂ ≥ 1e-24`, the log-domain integral otherwise. A tier that fails falls
/// through to the next. Within a factor 100 of either threshold a second tier
/// is also evaluated and the discrepancy folded into `error_estimate`.
pub fn lambda_best(point: SpectralPoint) -> Result<LogLambda> {
    let oracle = LambdaOracle {
        c: point.c,
        nystrom: OnceLock::new(),
    };
    oracle
        .nystrom
        .get_or_init(|| nystrom_spectrum(point.c, default_nystrom_size(point.c, point.n + 1)));
    oracle.best(point.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_tier_matches_nystrom() {
        let c = 10.0;
        let spectrum = nystrom_spectrum(c, default_nystrom_size(c, 13)).unwrap();
        for n in 0..=12 {
            let nys = spectrum.eigenvalues[n];
            if nys < 1e-8 {
                continue;
            }
            let ratio = lambda_ratio_at(SpectralPoint::new(n, c).unwrap())
                .unwrap()
                .value();
            assert!(
                (ratio - nys).abs() <= 1e-6 * nys,
                "n={n}: {ratio:e} vs {nys:e}"
            );
        }
    }

    #[test]
    fn c_star_in_landau_bracket() {
        let cs = c_star(2).unwrap();
        assert!((FRAC_PI_2..=3.0 * FRAC_PI_2).contains(&cs));
        assert!(c_star(0).is_err());
    }

    #[test]
    fn integral_at_c_star_is_log_half() {
        let cs = c_star(4).unwrap();
        let v = integral_with_c_star(SpectralPoint::new(4, cs).unwrap(), cs).unwrap();
        assert_eq!(v.log_value, -LN_2);
        assert!(log_lambda_integral(SpectralPoint::new(4, cs * 1.1).unwrap()).is_err());
    }

    #[test]
    fn integral_tier_agrees_with_ratio() {
        let p = SpectralPoint::new(14, 6.0).unwrap();
        let a = log_lambda_integral(p).unwrap();
        let b = lambda_ratio_at(p).unwrap();
        assert!((a.log_value - b.log_value).abs() < 1e-6, "{a:?} {b:?}");
    }
}
