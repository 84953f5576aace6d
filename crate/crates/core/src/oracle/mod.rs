//! Reference values of `χ_n(c)`, `ψ_n(1)`, `λ_n(c)` and `c*_n`, computed
//! without any of the closed-form approximations.
//!
//! Three independent tiers produce `ln λ_n(c)`:
//!
//! | tier       | method                                              | usable range          |
//! |------------|-----------------------------------------------------|-----------------------|
//! | `nystrom`  | Gauss–Legendre Nyström matrix of the sinc kernel    | `λ ≳ 1e-10`           |
//! | `ratio`    | `F_c ψ = μ ψ` at `x = 0` from Galerkin coefficients | `\|μ\| ≳ 1e-13`       |
//! | `integral` | `ln λ = ln ½ − 2∫_c^{c*} ψ_{n,τ}(1)²/τ dτ`          | any `c ≤ c*_n`        |

mod galerkin;
mod nystrom;
mod tiers;

use serde::Serialize;

use crate::error::{Error, Result};

pub use galerkin::{galerkin_matrix, prolate_solve, ProlateEigenpair};
pub use nystrom::{
    default_nystrom_size, nystrom_lambda, nystrom_spectrum, NystromSpectrum, NYSTROM_FLOOR,
};
pub use tiers::{
    c_star, c_star_with, lambda_best, lambda_ratio_at, log_lambda_integral, mu_ratio, CStarMethod,
    LambdaOracle, RATIO_FLOOR,
};

/// One eigenvalue problem: index `n` and bandwidth `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub n: usize,
    pub c: f64,
}

impl SpectralPoint {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain(
                "SpectralPoint::new",
                format!("bandwidth c = {c} must be positive"),
            ));
        }
        Ok(SpectralPoint { n, c })
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Lowest Legendre degree of the parity class.
    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Which oracle produced a [`LogLambda`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Nystrom,
    Ratio,
    Integral,
}

impl std::fmt::Display for Tier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tier::Nystrom => "nystrom",
            Tier::Ratio => "ratio",
            Tier::Integral => "integral",
        })
    }
}

/// An eigenvalue of `Q_c` carried as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLambda {
    pub log_value: f64,
    pub method: Tier,
    /// Estimated absolute error of `log_value`.
    pub error_estimate: f64,
}

impl LogLambda {
    /// `λ` itself; underflows to 0 below ~1e-308.
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    /// `ln |μ_n|` with `|μ_n| = √((2π/c) λ_n)`.
    pub fn log_mu_abs(&self, c: f64) -> f64 {
        0.5 * ((2.0 * std::f64::consts::PI / c).ln() + self.log_value)
    }
}
