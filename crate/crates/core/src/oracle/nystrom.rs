use std::f64::consts::PI;

use super::{LogLambda, Tier};
use crate::error::{Error, Result};
use crate::linalg::{dense_sym_eigenvalues, gauss_legendre_rule, SymDenseMatrix};

/// Eigenvalues below this are reported as errors instead of being returned.
pub const NYSTROM_FLOOR: f64 = 1e-12;

/// Default rule size: `max(⌈1.5c⌉ + 60, 2·count + 40)`.
pub fn default_nystrom_size(c: f64, count: usize) -> usize {
    ((1.5 * c).ceil() as usize + 60).max(2 * count + 40)
}

/// Full spectrum of the symmetrised Nyström matrix
/// `A_ij = √(w_i w_j) sin(c(x_i − x_j)) / (π(x_i − x_j))`.
#[derive(Debug, Clone)]
pub struct NystromSpectrum {
    pub c: f64,
    pub size: usize,
    /// Descending; index equals `n`.
    pub eigenvalues: Vec<f64>,
}

impl NystromSpectrum {
    /// Absolute accuracy of the eigenvalues, `~1e-14·(2c/π)`.
    pub fn absolute_error(&self) -> f64 {
        1e-14 * (2.0 * self.c / PI).max(1.0)
    }

    pub fn log_lambda(&self, n: usize) -> Result<LogLambda> {
        let value = *self.eigenvalues.get(n).ok_or_else(|| {
            Error::domain(
                "NystromSpectrum::log_lambda",
                format!("n = {n} beyond matrix order {}", self.size),
            )
        })?;
        if value < NYSTROM_FLOOR {
            return Err(Error::BelowFloor {
                tier: "nystrom",
                detail: format!("λ_{n}({}) ≈ {value:e} < {NYSTROM_FLOOR:e}", self.c),
            });
        }
        Ok(LogLambda {
            // rounding can push λ_0 ≈ 1 − tiny above 1
            log_value: value.min(1.0 - f64::EPSILON).ln(),
            method: Tier::Nystrom,
            error_estimate: self.absolute_error() / value,
        })
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Builds and diagonalises the Nyström matrix on an `m`-point Gauss–Legendre
/// rule.
pub fn nystrom_spectrum(c: f64, m: usize) -> Result<NystromSpectrum> {
    if !(c > 0.0) {
        return Err(Error::domain(
            "nystrom_spectrum",
            format!("c = {c} must be positive"),
        ));
    }
    let rule = gauss_legendre_rule(m)?;
    let (x, w) = (rule.nodes(), rule.weights());
    let matrix = SymDenseMatrix::from_fn(m, |i, j| {
        let scale = (w[i] * w[j]).sqrt();
        if i == j {
            scale * c / PI
        } else {
            let d = x[i] - x[j];
            scale * (c * d).sin() / (PI * d)
        }
    })?;
    let eigenvalues = dense_sym_eigenvalues(&matrix)?;
    Ok(NystromSpectrum {
        c,
        size: m,
        eigenvalues,
    })
}

/// The `count` largest eigenvalues `λ_0 … λ_{count−1}` of `Q_c`.
///
/// `m` defaults to [`default_nystrom_size`] and must be at least
/// `count + 10`. Fails with [`Error::BelowFloor`] if any requested eigenvalue
/// is under [`NYSTROM_FLOOR`].
pub fn nystrom_lambda(c: f64, m: Option<usize>, count: usize) -> Result<Vec<LogLambda>> {
    let m = m.unwrap_or_else(|| default_nystrom_size(c, count));
    if m < count + 10 {
        return Err(Error::domain(
            "nystrom_lambda",
            format!("rule size {m} < count + 10 = {}", count + 10),
        ));
    }
    let spectrum = nystrom_spectrum(c, m)?;
    (0..count).map(|n| spectrum.log_lambda(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_is_two_c_over_pi() {
        let s = nystrom_spectrum(7.5, 60).unwrap();
        assert!((s.trace() - 15.0 / PI).abs() < 1e-10 * 15.0 / PI);
    }

    #[test]
    fn eigenvalues_strictly_decrease() {
        let c = 10.0 * PI;
        let s = nystrom_spectrum(c, default_nystrom_size(c, 25)).unwrap();
        let e = &s.eigenvalues[..25];
        assert!(e.windows(2).all(|w| w[0] >= w[1]));
        // strict wherever the gap is resolvable in double precision
        assert!(e
            .windows(2)
            .filter(|w| 1.0 - w[0] > 1e-10)
            .all(|w| w[0] > w[1]));
        let l = nystrom_lambda(c, None, 25).unwrap();
        assert!(l.iter().all(|v| v.log_value < 0.0));
    }

    #[test]
    fn floor_is_reported() {
        let err = nystrom_lambda(1.0, None, 12).unwrap_err();
        assert!(matches!(err, Error::BelowFloor { .. }));
    }

    #[test]
    fn undersized_rule_rejected() {
        assert!(nystrom_lambda(5.0, Some(15), 10).is_err());
    }
}
