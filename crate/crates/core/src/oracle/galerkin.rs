use serde::Serialize;

use super::{Parity, SpectralPoint};
use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;

/// Matrix of `L_c ψ = −((1−x²)ψ')' + c²x²ψ` in the normalised Legendre basis
/// `P̄_k`, restricted to degrees of one parity below `truncation`.
///
/// With `x P̄_k = a_{k+1} P̄_{k+1} + a_k P̄_{k−1}` and
/// `a_k = k / √((2k−1)(2k+1))`:
/// `⟨x²P̄_k, P̄_k⟩ = a_k² + a_{k+1}²` and `⟨x²P̄_k, P̄_{k+2}⟩ = a_{k+1} a_{k+2}`.
pub fn galerkin_matrix(c: f64, parity: Parity, truncation: usize) -> SymTridiagonal {
    let c2 = c * c;
    let a = |k: usize| -> f64 {
        let kf = k as f64;
        if k == 0 {
            0.0
        } else {
            kf / ((2.0 * kf - 1.0) * (2.0 * kf + 1.0)).sqrt()
        }
    };
    let degrees: Vec<usize> = (parity.offset()..truncation.max(parity.offset() + 1))
        .step_by(2)
        .collect();
    let diag = degrees
        .iter()
        .map(|&k| {
            let kf = k as f64;
            kf * (kf + 1.0) + c2 * (a(k) * a(k) + a(k + 1) * a(k + 1))
        })
        .collect();
    let offdiag = degrees[..degrees.len() - 1]
        .iter()
        .map(|&k| c2 * a(k + 1) * a(k + 2))
        .collect();
    SymTridiagonal::new(diag, offdiag).expect("sizes are consistent by construction")
}

/// Galerkin solution for one `(n, c)`: `χ_n(c)`, Legendre coefficients and
/// boundary values of `ψ_{n,c}` under the `L²[−1,1]` normalisation and the
/// sign convention `ψ(0) > 0` (even `n`), `ψ'(0) > 0` (odd `n`).
#[derive(Debug, Clone, Serialize)]
pub struct ProlateEigenpair {
    pub point: SpectralPoint,
    pub parity: Parity,
    pub chi: f64,
    /// `beta[j]` multiplies `P̄_{2j + parity offset}`.
    pub beta: Vec<f64>,
    pub psi_at_1: f64,
    /// `ψ(0)`; exactly zero for odd `n`.
    pub psi_at_0: f64,
    /// `ψ'(0)`; exactly zero for even `n`.
    pub dpsi_at_0: f64,
    pub truncation: usize,
}

impl ProlateEigenpair {
    /// Legendre degree of `beta[j]`.
    pub fn degree(&self, j: usize) -> usize {
        2 * j + self.parity.offset()
    }

    /// `q = c²/χ`.
    pub fn q(&self) -> f64 {
        self.point.c * self.point.c / self.chi
    }

    pub fn sqrt_q(&self) -> f64 {
        self.point.c / self.chi.sqrt()
    }

    /// `(1 − q)√χ`, the quantity compared against `κ`.
    pub fn kappa_measure(&self) -> f64 {
        (1.0 - self.q()) * self.chi.sqrt()
    }
}

const TAIL_RATIO: f64 = 1e-15;
const MAX_DOUBLINGS: usize = 4;

/// Solves the parity block of the Galerkin matrix for `χ_n(c)` and `ψ_{n,c}`.
///
/// The truncation starts at `max(2n+30, ⌈2c⌉+30)` Legendre degrees and is
/// doubled until the last retained coefficient is below `1e-15` of the
/// largest.
pub fn prolate_solve(point: SpectralPoint) -> Result<ProlateEigenpair> {
    let SpectralPoint { n, c } = point;
    let parity = point.parity();
    let index = n / 2;
    let mut truncation = (2 * n + 30).max((2.0 * c).ceil() as usize + 30);
    let mut last_tail = f64::NAN;
    for _ in 0..=MAX_DOUBLINGS {
        let t = galerkin_matrix(c, parity, truncation);
        let chi = t.eigenvalue(index);
        let mut beta = t.eigenvector(chi);
        let peak = beta.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        let tail = beta.last().map_or(0.0, |b| b.abs());
        if tail <= TAIL_RATIO * peak {
            let (mut psi1, mut psi0, mut dpsi0) = boundary_values(&beta, parity);
            let flip = match parity {
                Parity::Even => psi0 < 0.0,
                Parity::Odd => dpsi0 < 0.0,
            };
            if flip {
                beta.iter_mut().for_each(|b| *b = -*b);
                psi1 = -psi1;
                psi0 = -psi0;
                dpsi0 = -dpsi0;
            }
            return Ok(ProlateEigenpair {
                point,
                parity,
                chi,
                beta,
                psi_at_1: psi1,
                psi_at_0: psi0,
                dpsi_at_0: dpsi0,
                truncation,
            });
        }
        last_tail = tail / peak;
        truncation *= 2;
    }
    Err(Error::Convergence {
        what: "Legendre-Galerkin truncation",
        diagnostics: format!(
            "n = {n}, c = {c}: tail ratio {last_tail:e} after {MAX_DOUBLINGS} doublings (truncation {})",
            truncation / 2
        ),
    })
}

/// `(ψ(1), ψ(0), ψ'(0))` from coefficients of one parity class.
fn boundary_values(beta: &[f64], parity: Parity) -> (f64, f64, f64) {
    let offset = parity.offset();
    let mut psi1 = 0.0;
    let mut psi0 = 0.0;
    let mut dpsi0 = 0.0;
    // P_{2j}(0) = (−1)^j (2j)! / (4^j (j!)²);  P'_{2j+1}(0) = (2j+1) P_{2j}(0)
    let mut p_even_at_0 = 1.0;
    for (j, &b) in beta.iter().enumerate() {
        let k = 2 * j + offset;
        let norm = (k as f64 + 0.5).sqrt();
        psi1 += b * norm;
        match parity {
            Parity::Even => psi0 += b * norm * p_even_at_0,
            Parity::Odd => dpsi0 += b * norm * (k as f64) * p_even_at_0,
        }
        let m = 2 * j;
        p_even_at_0 *= -((m + 1) as f64) / ((m + 2) as f64);
    }
    (psi1, psi0, dpsi0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gauss_legendre_rule, legendre_eval};

    #[test]
    fn zero_bandwidth_matrix_is_diagonal() {
        let t = galerkin_matrix(0.0, Parity::Even, 12);
        for (j, &d) in t.diag().iter().enumerate() {
            let k = (2 * j) as f64;
            assert_eq!(d, k * (k + 1.0));
        }
        assert!(t.offdiag().iter().all(|&e| e == 0.0));
    }

    #[test]
    fn entries_match_quadrature_inner_products() {
        let c = 2.0;
        let rule = gauss_legendre_rule(40).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            let t = galerkin_matrix(c, parity, 12);
            let deg = |j: usize| 2 * j + parity.offset();
            for j in 0..t.order() {
                let k = deg(j);
                let ip = rule.integrate(-1.0, 1.0, |x| x * x * legendre_eval(k, x).0.powi(2));
                let expect = (k * (k + 1)) as f64 + c * c * ip;
                assert!((t.diag()[j] - expect).abs() < 1e-13 * expect.max(1.0));
                if j + 1 < t.order() {
                    let ip = rule.integrate(-1.0, 1.0, |x| {
                        x * x * legendre_eval(k, x).0 * legendre_eval(k + 2, x).0
                    });
                    assert!((t.offdiag()[j] - c * c * ip).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn small_bandwidth_limit() {
        let p = prolate_solve(SpectralPoint::new(5, 1e-8).unwrap()).unwrap();
        assert!((p.chi - 30.0).abs() < 1e-9);
        assert!((p.psi_at_1.powi(2) - 5.5).abs() < 1e-9);
        assert!(p.dpsi_at_0 > 0.0);
    }

    #[test]
    fn printed_sqrt_q_values() {
        for (n, expect) in [(6, 0.99486271), (15, 0.58583492)] {
            let p = prolate_solve(SpectralPoint::new(n, 10.0).unwrap()).unwrap();
            assert!((p.sqrt_q() - expect).abs() < 5e-6, "n={n}: {}", p.sqrt_q());
        }
    }

    #[test]
    fn normalisation_sign_and_bounds() {
        for (n, c) in [(0, 3.0), (1, 3.0), (8, 12.0), (31, 40.0), (90, 31.4)] {
            let p = prolate_solve(SpectralPoint::new(n, c).unwrap()).unwrap();
            let norm: f64 = p.beta.iter().map(|b| b * b).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            let nn = (n * (n + 1)) as f64;
            assert!(p.chi >= nn && p.chi <= nn + c * c);
            match p.parity {
                Parity::Even => assert!(p.psi_at_0 > 0.0 && p.dpsi_at_0 == 0.0),
                Parity::Odd => assert!(p.dpsi_at_0 > 0.0 && p.psi_at_0 == 0.0),
            }
        }
    }

    #[test]
    fn boundary_value_matches_direct_evaluation() {
        let p = prolate_solve(SpectralPoint::new(7, 6.0).unwrap()).unwrap();
        let direct: f64 = p
            .beta
            .iter()
            .enumerate()
            .map(|(j, b)| b * legendre_eval(p.degree(j), 1.0).0)
            .sum();
        assert!((direct - p.psi_at_1).abs() < 1e-12);
        let slope: f64 = p
            .beta
            .iter()
            .enumerate()
            .map(|(j, b)| b * legendre_eval(p.degree(j), 0.0).1)
            .sum();
        assert!((slope - p.dpsi_at_0).abs() < 1e-12);
    }
}
