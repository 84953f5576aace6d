use std::f64::consts::{E, FRAC_PI_2, LN_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{self, plunge_start};
use crate::error::{Error, Result};
use crate::linalg::{
    dense_sym_eigen, gauss_legendre_rule, tridiag_eigen, SymDenseMatrix, SymTridiagonal,
};
use crate::oracle::{
    c_star, default_nystrom_size, lambda_ratio_at, log_lambda_integral, nystrom_spectrum,
    prolate_solve, LambdaOracle, SpectralPoint, Tier,
};
use crate::special::{
    complete_elliptic_e, complete_elliptic_k, delta_constant, j_integral, j_l, j_l_direct,
    phi_inverse, psi_ratio, Modulus,
};

/// Suite names accepted by [`validate_all`], in run order.
pub const SUITES: [&str; 6] = ["elliptic", "linalg", "oracle", "approx", "tiers", "claims"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub pass: bool,
    pub seconds: f64,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub suites: Vec<SuiteResult>,
    pub failing: usize,
}

impl ValidationSummary {
    /// 0 when every suite passes, otherwise `2 + failing`, capped at 125.
    pub fn exit_code(&self) -> i32 {
        if self.failing == 0 {
            0
        } else {
            (2 + self.failing).min(125) as i32
        }
    }

    /// One line per check plus a pass/fail matrix.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for suite in &self.suites {
            s.push_str(&format!(
                "[{}] {} ({:.1} s)\n",
                if suite.pass { "PASS" } else { "FAIL" },
                suite.name,
                suite.seconds
            ));
            for c in &suite.checks {
                s.push_str(&format!(
                    "    {} {}: {}\n",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
        }
        s.push_str(&format!(
            "{} of {} suites failing\n",
            self.failing,
            self.suites.len()
        ));
        s
    }
}

/// Runs every suite, or only `suite` when given.
pub fn validate_all(suite: Option<&str>) -> Result<ValidationSummary> {
    let selected: Vec<&str> = match suite {
        None => SUITES.to_vec(),
        Some(name) if SUITES.contains(&name) => vec![name],
        Some(name) => {
            return Err(Error::domain(
                "validate_all",
                format!(
                    "unknown suite {name:?}; expected one of {}",
                    SUITES.join(", ")
                ),
            ))
        }
    };
    let suites: Vec<SuiteResult> = selected
        .into_iter()
        .map(|name| {
            let start = Instant::now();
            let checks = match name {
                "elliptic" => elliptic(),
                "linalg" => linalg(),
                "oracle" => oracle(),
                "approx" => approx_suite(),
                "tiers" => tiers(),
                _ => claims(),
            };
            SuiteResult {
                name: name.to_string(),
                pass: checks.iter().all(|c| c.pass),
                seconds: start.elapsed().as_secs_f64(),
                checks,
            }
        })
        .collect();
    let failing = suites.iter().filter(|s| !s.pass).count();
    Ok(ValidationSummary { suites, failing })
}

/// Runs `f`; an error counts as a failure carrying the error text.
fn check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        name: name.to_string(),
        pass,
        detail,
    }
}

/// Tracks the worst violation over a sweep.
struct Worst {
    count: usize,
    failures: usize,
    first: Option<String>,
    max: f64,
}

impl Worst {
    fn new() -> Self {
        Worst {
            count: 0,
            failures: 0,
            first: None,
            max: 0.0,
        }
    }

    fn record(&mut self, ok: bool, metric: f64, what: impl FnOnce() -> String) {
        self.count += 1;
        self.max = self.max.max(metric);
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn finish(self, label: &str) -> (bool, String) {
        let mut detail = format!("{} points, max {label} {:.3e}", self.count, self.max);
        if let Some(f) = self.first {
            detail.push_str(&format!(", {} violations, first: {f}", self.failures));
        }
        (self.failures == 0 && self.count > 0, detail)
    }
}

fn m(k: f64) -> Result<Modulus> {
    Modulus::new(k)
}

fn elliptic() -> Vec<CheckResult> {
    let j_grid: Vec<f64> = (1..=40)
        .map(|i| FRAC_PI_2 * i as f64 / 41.0)
        .chain([1e-3, 1e-2, FRAC_PI_2 - 1e-4])
        .collect();
    vec![
        check("K and E against direct quadrature", || {
            let rule = gauss_legendre_rule(64)?;
            let mut w = Worst::new();
            for &k in &[0.0, 0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99] {
                let kk = complete_elliptic_k(m(k)?)?;
                let ee = complete_elliptic_e(m(k)?);
                let qk = rule.integrate_composite(0.0, FRAC_PI_2, 16, |t| {
                    1.0 / (1.0 - (k * t.sin()).powi(2)).sqrt()
                });
                let qe = rule.integrate_composite(0.0, FRAC_PI_2, 16, |t| {
                    (1.0 - (k * t.sin()).powi(2)).sqrt()
                });
                let dev = ((kk - qk) / qk).abs().max(((ee - qe) / qe).abs());
                w.record(dev <= 1e-12, dev, || format!("k = {k}"));
            }
            Ok(w.finish("relative deviation"))
        }),
        check("2k/π ≤ Ψ(k) ≤ k, Ψ increasing", || {
            let mut w = Worst::new();
            let mut prev = -1.0;
            for i in 0..=200 {
                let k = i as f64 / 200.0;
                let p = psi_ratio(m(k)?);
                let ok = 2.0 * k / PI <= p * (1.0 + 1e-15) && p <= k * (1.0 + 1e-15) && p > prev;
                w.record(ok, 0.0, || format!("k = {k}"));
                prev = p;
            }
            Ok(w.finish("-"))
        }),
        check(
            "Φ round trip to 1e-12 and x ≤ Φ(x) ≤ min(1, πx/2)",
            || {
                let mut w = Worst::new();
                let xs =
                    (1..200)
                        .map(|i| i as f64 / 200.0)
                        .chain([1e-6, 0.999, 0.99999, 1.0 - 1e-9]);
                for x in xs {
                    let k = phi_inverse(x)?.value();
                    let dev = (psi_ratio(m(k)?) - x).abs();
                    let ok = dev <= 1e-12
                        && x <= k * (1.0 + 1e-15)
                        && k <= (FRAC_PI_2 * x).min(1.0) * (1.0 + 1e-15);
                    w.record(ok, dev, || format!("x = {x}"));
                }
                Ok(w.finish("round-trip error"))
            },
        ),
        check("ln⁺(1/x) ≤ J(x) ≤ (π²/4) ln(π/(2x))", || {
            let mut w = Worst::new();
            for &x in &j_grid {
                let j = j_integral(x)?.value;
                let lo = (1.0 / x).ln().max(0.0);
                let hi = PI * PI / 4.0 * (PI / (2.0 * x)).ln();
                w.record(lo - 1e-12 <= j && j <= hi + 1e-12, 0.0, || {
                    format!("x = {x}, J = {j}")
                });
            }
            Ok(w.finish("-"))
        }),
        check("|J(x) − ln(4/(ex))| ≤ π²x²/8", || {
            let mut w = Worst::new();
            for &x in &j_grid {
                let dev = (j_integral(x)?.value - (4.0 / (E * x)).ln()).abs();
                let bound = PI * PI * x * x / 8.0;
                w.record(dev <= bound + 1e-12, dev / bound.max(1e-300), || {
                    format!("x = {x}")
                });
            }
            Ok(w.finish("deviation / bound"))
        }),
        check("Δ = 2 ln 2 − 1 to 1e-10", || {
            let d = delta_constant()?;
            let dev = (d - (2.0 * LN_2 - 1.0)).abs();
            Ok((dev <= 1e-10, format!("Δ = {d:.15}, deviation {dev:.2e}")))
        }),
        check("J_l(c) = l·J(c/l) to 1e-10", || {
            let mut w = Worst::new();
            for &(l, frac) in &[
                (3.0, 0.2),
                (7.0, 0.5),
                (7.5, 0.9),
                (20.0, 0.3),
                (40.5, 0.7),
                (100.0, 0.95),
            ] {
                let c = FRAC_PI_2 * l * frac;
                let a = j_l(l, c)?;
                let b = j_l_direct(l, c)?;
                let dev = (a - b).abs() / a.abs().max(1.0);
                w.record(dev <= 1e-10, dev, || format!("l = {l}, c = {c}"));
            }
            Ok(w.finish("deviation"))
        }),
        check(
            "J_{n+1} − (π²/8)ln(π(n+1)/2c) − π³/16 ≤ J_{n+½} ≤ J_n + (π²/8)ln(π(n+½)/2c) + π³/16",
            || {
                let mut w = Worst::new();
                for (n, c, [j0, jh, j1]) in j_comparison_grid()? {
                    let nf = n as f64;
                    let lo =
                        j1 - PI * PI / 8.0 * (PI * (nf + 1.0) / (2.0 * c)).ln() - PI.powi(3) / 16.0;
                    let hi =
                        j0 + PI * PI / 8.0 * (PI * (nf + 0.5) / (2.0 * c)).ln() + PI.powi(3) / 16.0;
                    w.record(lo <= jh && jh <= hi, 0.0, || format!("n = {n}, c = {c}"));
                }
                Ok(w.finish("-"))
            },
        ),
    ]
}

/// `(n, c, [J_n(c), J_{n+½}(c), J_{n+1}(c)])` over `c = (π/2)·n·frac`.
fn j_comparison_grid() -> Result<Vec<(usize, f64, [f64; 3])>> {
    let mut out = Vec::new();
    for &n in &[3usize, 5, 10, 20, 50, 100] {
        let nf = n as f64;
        for &frac in &[0.05, 0.3, 0.6, 0.9, 1.0] {
            let c = FRAC_PI_2 * nf * frac;
            out.push((n, c, [j_l(nf, c)?, j_l(nf + 0.5, c)?, j_l(nf + 1.0, c)?]));
        }
    }
    Ok(out)
}

fn random_symmetric(rng: &mut ChaCha8Rng, order: usize) -> Result<SymDenseMatrix> {
    let mut a = vec![0.0; order * order];
    for i in 0..order {
        for j in 0..=i {
            let v: f64 = rng.gen_range(-1.0..1.0);
            a[i * order + j] = v;
            a[j * order + i] = v;
        }
    }
    SymDenseMatrix::new(order, a)
}

fn linalg() -> Vec<CheckResult> {
    vec![
        check(
            "Gauss–Legendre: Σw = 2, odd moments vanish, degree 2m−1 exact",
            || {
                let mut w = Worst::new();
                for &mm in &[1usize, 2, 5, 16, 32, 77, 200] {
                    let r = gauss_legendre_rule(mm)?;
                    let s: f64 = r.weights().iter().sum();
                    let odd = r
                        .integrate(-1.0, 1.0, |t| t.powi(2 * mm.min(40) as i32 - 1))
                        .abs();
                    let deg = 2 * mm - 2;
                    let even =
                        r.integrate(-1.0, 1.0, |t| t.powi(deg as i32)) - 2.0 / (deg as f64 + 1.0);
                    let dev = (s - 2.0).abs().max(odd).max(even.abs());
                    w.record(dev <= 1e-13, dev, || format!("m = {mm}"));
                }
                Ok(w.finish("deviation"))
            },
        ),
        check(
            "Jacobi: Σλ = trace, Σλ² = ‖A‖_F², ‖AV − VΛ‖ small (random, order ≤ 50)",
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                let mut w = Worst::new();
                for &order in &[1usize, 2, 5, 8, 13, 30, 50] {
                    let a = random_symmetric(&mut rng, order)?;
                    let e = dense_sym_eigen(&a)?;
                    let tr: f64 = e.values.iter().sum();
                    let fro: f64 = e.values.iter().map(|v| v * v).sum();
                    let scale = a.frobenius().max(1.0);
                    let mut res: f64 = 0.0;
                    for (k, &lam) in e.values.iter().enumerate() {
                        for i in 0..order {
                            let av: f64 = (0..order).map(|j| a.get(i, j) * e.vectors[k][j]).sum();
                            res = res.max((av - lam * e.vectors[k][i]).abs());
                        }
                    }
                    let dev = ((tr - a.trace()).abs() / scale)
                        .max((fro - a.frobenius().powi(2)).abs() / (scale * scale))
                        .max(res / scale * 1e-1);
                    w.record(dev <= 1e-12, dev, || format!("order = {order}"));
                }
                Ok(w.finish("relative deviation"))
            },
        ),
        check(
            "tridiagonal bisection agrees with Jacobi (order ≤ 30)",
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(0x7d1a);
                let mut w = Worst::new();
                for &order in &[1usize, 2, 3, 12, 30] {
                    let d: Vec<f64> = (0..order).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    let o: Vec<f64> = (1..order).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let t = SymTridiagonal::new(d.clone(), o.clone())?;
                    let dense = SymDenseMatrix::from_fn(order, |i, j| {
                        if i == j {
                            d[i]
                        } else if i + 1 == j {
                            o[i]
                        } else if j + 1 == i {
                            o[j]
                        } else {
                            0.0
                        }
                    })?;
                    let mut reference = dense_sym_eigen(&dense)?.values;
                    reference.reverse();
                    let got = tridiag_eigen(&t, true, 0..order)?;
                    let mut dev: f64 = 0.0;
                    for (k, (&a, &b)) in got.values.iter().zip(&reference).enumerate() {
                        dev = dev.max((a - b).abs());
                        let v = &got.vectors.as_ref().expect("vectors requested")[k];
                        let tv = t.apply(v);
                        for i in 0..order {
                            dev = dev.max((tv[i] - a * v[i]).abs() * 0.1);
                        }
                    }
                    w.record(dev <= 1e-12 * t.norm().max(1.0), dev, || {
                        format!("order = {order}")
                    });
                }
                Ok(w.finish("deviation"))
            },
        ),
    ]
}

const BANDS: [f64; 4] = [10.0, 25.0, 50.0, 100.0];

fn oracle() -> Vec<CheckResult> {
    vec![
        check(
            "n(n+1) ≤ χ ≤ n(n+1) + c², Σβ² = 1, tail decay, |ψ(1)| ≤ 2χ^¼",
            || {
                let mut w = Worst::new();
                for &c in &[0.5, 5.0, 10.0, 10.0 * PI, 100.0] {
                    for n in (0..=(2.0 * c) as usize + 20).step_by(3) {
                        let p = prolate_solve(SpectralPoint::new(n, c)?)?;
                        let nn = (n * (n + 1)) as f64;
                        let norm: f64 = p.beta.iter().map(|b| b * b).sum();
                        let maxb = p.beta.iter().fold(0.0f64, |a, b| a.max(b.abs()));
                        let tail = p.beta.last().map_or(0.0, |b| b.abs());
                        let mut ok =
                            nn <= p.chi * (1.0 + 1e-14) && p.chi <= (nn + c * c) * (1.0 + 1e-14);
                        ok &= (norm - 1.0).abs() <= 1e-12 && tail <= 1e-15 * maxb;
                        if c <= FRAC_PI_2 * (n as f64 + 1.0) {
                            ok &= p.psi_at_1.abs() <= 2.0 * p.chi.powf(0.25);
                        }
                        w.record(ok, (norm - 1.0).abs(), || format!("n = {n}, c = {c}"));
                    }
                }
                Ok(w.finish("normalisation error"))
            },
        ),
        check(
            "Φ(2c/(π(n+1))) < c/√χ < Φ(2c/(πn)) and πn/(2E(√q)) < √χ < π(n+1)/(2E(√q))",
            || {
                let mut w = Worst::new();
                for &c in &BANDS {
                    let n0 = (2.0 * c / PI).ceil() as usize;
                    for n in n0.max(2)..=n0 + 40 {
                        let p = prolate_solve(SpectralPoint::new(n, c)?)?;
                        let nf = n as f64;
                        let s = p.sqrt_q();
                        let lo = phi_inverse(2.0 * c / (PI * (nf + 1.0)))?.value();
                        let hi = phi_inverse((2.0 * c / (PI * nf)).min(1.0))?.value();
                        let e = complete_elliptic_e(m(s.min(1.0))?);
                        let root = p.chi.sqrt();
                        let ok = lo < s
                            && s < hi
                            && PI * nf / (2.0 * e) < root
                            && root < PI * (nf + 1.0) / (2.0 * e);
                        w.record(ok, 0.0, || format!("n = {n}, c = {c}"));
                    }
                }
                Ok(w.finish("-"))
            },
        ),
        check("1 − 2c/(πn) ≤ 2(1−q)K(√q) where q < 1", || {
            let mut w = Worst::new();
            for &c in &BANDS {
                let n0 = plunge_start(c);
                for n in n0.max(1)..=n0 + 40 {
                    let p = prolate_solve(SpectralPoint::new(n, c)?)?;
                    let q = p.q();
                    if q >= 1.0 {
                        continue;
                    }
                    let rhs = 2.0 * (1.0 - q) * complete_elliptic_k(m(p.sqrt_q())?)?;
                    let lhs = 1.0 - 2.0 * c / (PI * n as f64);
                    w.record(lhs <= rhs, lhs - rhs, || format!("n = {n}, c = {c}"));
                }
            }
            Ok(w.finish("lhs − rhs"))
        }),
        check("Σ Nyström eigenvalues = 2c/π to 1e-10", || {
            let mut w = Worst::new();
            for &c in &[1.0, 10.0, 10.0 * PI] {
                let s = nystrom_spectrum(c, default_nystrom_size(c, 0))?;
                let dev = (s.trace() - 2.0 * c / PI).abs() / (2.0 * c / PI);
                w.record(dev <= 1e-10, dev, || format!("c = {c}"));
            }
            Ok(w.finish("relative deviation"))
        }),
        check(
            "c*_n in [π(n−1)/2, π(n+1)/2], increasing, λ_n(c*_n) = ½ (Nyström)",
            || {
                let mut w = Worst::new();
                let mut prev = 0.0;
                for n in 2..=20usize {
                    let cs = c_star(n)?;
                    let nf = n as f64;
                    let s = nystrom_spectrum(cs, default_nystrom_size(cs, n + 1))?;
                    let dev = (s.eigenvalues[n] - 0.5).abs();
                    let ok = FRAC_PI_2 * (nf - 1.0) <= cs
                        && cs <= FRAC_PI_2 * (nf + 1.0)
                        && cs > prev
                        && dev <= 1e-9;
                    w.record(ok, dev, || format!("n = {n}, c* = {cs}"));
                    prev = cs;
                }
                Ok(w.finish("|λ − ½|"))
            },
        ),
        check(
            "∂_c ln λ_n = 2ψ_n(1)²/c by central differences (Nyström)",
            || {
                let mut w = Worst::new();
                for &(n, c) in &[
                    (3usize, 4.0),
                    (6, 8.0),
                    (10, 12.0),
                    (12, 20.0),
                    (25, 10.0 * PI),
                    (18, 25.0),
                ] {
                    match ode_residual(n, c)? {
                        Some(dev) => w.record(dev <= 1e-3, dev, || format!("n = {n}, c = {c}")),
                        None => continue,
                    }
                }
                Ok(w.finish("relative deviation"))
            },
        ),
        check(
            "λ_n(c)/c^(2n+1) constant within 5% on [0.05, 0.3], n = 1, 2, 3",
            || {
                let mut w = Worst::new();
                for n in 1..=3usize {
                    let ratios = [0.05, 0.1, 0.2, 0.3]
                        .iter()
                        .map(|&c| {
                            lambda_ratio_at(SpectralPoint::new(n, c)?)
                                .map(|l| (l.log_value - (2 * n + 1) as f64 * f64::ln(c)).exp())
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    let (lo, hi) = ratios
                        .iter()
                        .fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
                    let spread = hi / lo - 1.0;
                    w.record(spread <= 0.05, spread, || format!("n = {n}"));
                }
                Ok(w.finish("spread"))
            },
        ),
    ]
}

/// Relative gap between the central difference of `ln λ_n` (step `1e-3·c`)
/// and `2ψ_n(1)²/c`, or `None` when `λ_n` is outside `[1e-8, 0.3]`.
pub fn ode_residual(n: usize, c: f64) -> Result<Option<f64>> {
    let h = 1e-3 * c;
    let at = |x: f64| -> Result<f64> {
        let s = nystrom_spectrum(x, default_nystrom_size(x, n + 1))?;
        Ok(s.eigenvalues[n])
    };
    let mid = at(c)?;
    if !(1e-8..=0.3).contains(&mid) {
        return Ok(None);
    }
    let deriv = (at(c + h)?.ln() - at(c - h)?.ln()) / (2.0 * h);
    let p = prolate_solve(SpectralPoint::new(n, c)?)?;
    let expected = 2.0 * p.psi_at_1 * p.psi_at_1 / c;
    Ok(Some((deriv - expected).abs() / expected))
}

fn approx_suite() -> Vec<CheckResult> {
    vec![
        check(
            "ψ_n(1)² inside the κ = 12 bracket wherever (1−q)√χ > 12",
            || {
                let mut w = Worst::new();
                for &c in &[10.0, 10.0 * PI, 50.0, 100.0] {
                    let n0 = plunge_start(c);
                    for n in n0..=n0 + 80 {
                        let p = prolate_solve(SpectralPoint::new(n, c)?)?;
                        if p.q() >= 1.0 || p.kappa_measure() <= 12.0 {
                            continue;
                        }
                        let b = approx::psi1_sq_bracket(&p, 12.0)?;
                        let v = p.psi_at_1 * p.psi_at_1;
                        w.record(
                            b.contains(v),
                            (v / ((b.lower + b.upper) / 2.0) - 1.0).abs(),
                            || format!("n = {n}, c = {c}"),
                        );
                    }
                }
                Ok(w.finish("relative offset from centre"))
            },
        ),
        check("sufficient conditions imply (1−q)√χ > κ", || {
            let mut w = Worst::new();
            for &c in &[10.0, 25.0, 50.0, 100.0] {
                for n in (3..=(2.0 * c) as usize).step_by(2) {
                    for &kappa in &[4.0, 12.0] {
                        let cond = approx::kappa_condition(SpectralPoint::new(n, c)?, kappa)?;
                        if !cond.satisfied {
                            continue;
                        }
                        let p = prolate_solve(SpectralPoint::new(n, c)?)?;
                        let ok = p.q() < 1.0 && p.kappa_measure() > kappa;
                        w.record(ok, 0.0, || format!("n = {n}, c = {c}, κ = {kappa}"));
                    }
                }
            }
            Ok(w.finish("-"))
        }),
        check(
            "(1−q)√χ ≥ ((n − 2c/π) − e⁻¹)/(ln n + 5) where q < 1",
            || {
                let mut w = Worst::new();
                for &c in &[10.0, 25.0, 50.0, 100.0] {
                    for n in (3..=(2.0 * c) as usize).step_by(3) {
                        let point = SpectralPoint::new(n, c)?;
                        let p = prolate_solve(point)?;
                        if p.q() >= 1.0 {
                            continue;
                        }
                        let bound = approx::kappa_condition(point, 4.0)?.crude_lower_bound;
                        w.record(p.kappa_measure() >= bound, 0.0, || {
                            format!("n = {n}, c = {c}")
                        });
                    }
                }
                Ok(w.finish("-"))
            },
        ),
        check(
            "|√q − √q̃| ≤ c/(2√χ√χ̃) and |√χ − √χ̃| ≤ ½",
            || {
                let mut w = Worst::new();
                for &c in &BANDS {
                    let n0 = (2.0 * c / PI).ceil() as usize;
                    for n in n0..=n0 + 40 {
                        let point = SpectralPoint::new(n, c)?;
                        let p = prolate_solve(point)?;
                        let st = approx::sqrt_q_tilde(point)?;
                        let ct = c / st;
                        let root = p.chi.sqrt();
                        let ok = (p.sqrt_q() - st).abs() <= c / (2.0 * root * ct)
                            && (root - ct).abs() <= 0.5;
                        w.record(ok, (root - ct).abs(), || format!("n = {n}, c = {c}"));
                    }
                }
                Ok(w.finish("|√χ − √χ̃|"))
            },
        ),
        check(
            "ln λ̃ inside ln ½ + ln λ^W ∓ π²c²/(4(n+½)); ln λ̂ − ln λ̃ = ln 2",
            || {
                let mut w = Worst::new();
                for &c in &[1.0, 10.0, 10.0 * PI] {
                    let n0 = (2.0 * c / PI).ceil() as usize;
                    for n in n0..=n0 + 100 {
                        let point = SpectralPoint::new(n, c)?;
                        let (lo, hi) = approx::tilde_bracket(point)?;
                        let t = approx::lambda_tilde(point)?;
                        let h = approx::lambda_hat(point)?;
                        let ok = lo - 1e-9 <= t
                            && t <= hi + 1e-9
                            && (h - t - LN_2).abs() <= 1e-12 * t.abs().max(1.0);
                        w.record(ok, 0.0, || format!("n = {n}, c = {c}"));
                    }
                }
                Ok(w.finish("-"))
            },
        ),
        check(
            "δ3 < δ2, δ2 increasing for κ ≥ 12, δ(κ) decreasing",
            || {
                let mut w = Worst::new();
                let mut prev = approx::error_constants(12.0)?;
                for k in 13..=200 {
                    let t = approx::error_constants(k as f64)?;
                    let ok = t.delta3 < t.delta2
                        && t.delta2 > prev.delta2
                        && t.delta_of_kappa < prev.delta_of_kappa;
                    w.record(ok, 0.0, || format!("κ = {k}"));
                    prev = t;
                }
                Ok(w.finish("-"))
            },
        ),
    ]
}

/// `ln λ` from every applicable tier on `c = 10π`, `n ∈ [20, 60]`.
pub fn cross_tier_deviation() -> Result<Vec<(usize, f64)>> {
    let c = 10.0 * PI;
    let oracle = LambdaOracle::new(c)?;
    let mut out = Vec::new();
    for n in 20..=60usize {
        let mut values = Vec::new();
        for tier in [Tier::Nystrom, Tier::Ratio, Tier::Integral] {
            if let Ok(v) = oracle.tier(n, tier) {
                // Nyström is trusted down to 1e-8
                if tier == Tier::Nystrom && v.value() < 1e-8 {
                    continue;
                }
                values.push(v.log_value);
            }
        }
        let spread = values.iter().fold(f64::MIN, |a, &b| a.max(b))
            - values.iter().fold(f64::MAX, |a, &b| a.min(b));
        if values.len() >= 2 {
            out.push((n, spread.exp_m1()));
        }
    }
    Ok(out)
}

fn tiers() -> Vec<CheckResult> {
    vec![
        check(
            "cross-tier |Δλ|/λ ≤ 1e-3 on c = 10π, n ∈ [20, 60]",
            || {
                let mut w = Worst::new();
                for (n, dev) in cross_tier_deviation()? {
                    w.record(dev <= 1e-3, dev, || format!("n = {n}"));
                }
                Ok(w.finish("relative deviation"))
            },
        ),
        check(
            "|ln(λ̂/λ)| ≤ ln 2 + 0.5 for c ∈ {10π, 20π, 30π}, λ ≥ 1e-60",
            || {
                let mut w = Worst::new();
                for k in 1..=3 {
                    let c = 10.0 * PI * k as f64;
                    let report = super::run_figure(super::ReproId::Figure2, c, None)?;
                    for row in &report.rows {
                        if let Some(cell) = row.cell("ln_hat_over_lambda").filter(|c| c.checked) {
                            w.record(cell.pass, cell.abs_dev.unwrap_or(f64::INFINITY), || {
                                format!("n = {}, c = {c}", row.n)
                            });
                        }
                    }
                }
                Ok(w.finish("|ln ratio|"))
            },
        ),
        check(
            "|ℰ| = |∫_c^{c*} ψ_τ(1)²/τ dτ − (n+½)J(c/(n+½))| within the κ = 12 error budget",
            || {
                let mut w = Worst::new();
                let t = approx::error_constants(12.0)?;
                for &(n, c) in &[
                    (30usize, 10.0 * PI),
                    (60, 10.0 * PI),
                    (90, 10.0 * PI),
                    (50, 20.0 * PI),
                    (20, 1.0),
                    (10, 0.5),
                ] {
                    let point = SpectralPoint::new(n, c)?;
                    let l = log_lambda_integral(point)?;
                    let integral = 0.5 * (-LN_2 - l.log_value);
                    let e = integral - 0.5 * (-LN_2 - approx::lambda_tilde(point)?);
                    let budget = t.error_budget(n, c);
                    w.record(e.abs() <= budget, e.abs() / budget, || {
                        format!("n = {n}, c = {c}")
                    });
                }
                Ok(w.finish("|ℰ| / budget"))
            },
        ),
        check(
            "λ_n/λ̃_n nondecreasing in n on c = 10π, n ∈ [n_c + 4, 90] (slack 1e-3)",
            || {
                let c = 10.0 * PI;
                let oracle = LambdaOracle::new(c)?;
                let mut w = Worst::new();
                let mut prev = f64::MIN;
                for n in plunge_start(c) + 4..=90 {
                    let r = oracle.best(n)?.log_value
                        - approx::lambda_tilde(SpectralPoint::new(n, c)?)?;
                    w.record(r >= prev - 1e-3, (prev - r).max(0.0), || format!("n = {n}"));
                    prev = r;
                }
                Ok(w.finish("decrease"))
            },
        ),
    ]
}

/// `||μ̂| − |μ|| / |μ|` for every `n` with `|μ_n| ≤ 0.15` and `λ_n ≥ 1e-40`.
pub fn three_percent_rows(c: f64) -> Result<Vec<(usize, f64)>> {
    let oracle = LambdaOracle::new(c)?;
    let mut out = Vec::new();
    for n in 0..=plunge_start(c) + 60 {
        let l = oracle.best(n)?;
        if l.log_value < (1e-40f64).ln() {
            break;
        }
        let log_mu = l.log_mu_abs(c);
        if log_mu > 0.15f64.ln() {
            continue;
        }
        let hat = approx::lambda_hat(SpectralPoint::new(n, c)?)?;
        let log_mu_hat = approx::mu_abs_from_loglambda(c, hat);
        out.push((n, (log_mu_hat - log_mu).exp_m1().abs()));
    }
    Ok(out)
}

fn claims() -> Vec<CheckResult> {
    vec![
        check(
            "J_{n+½} ≤ J_n − (π²/8)ln(π(n+½)/2c) + π³/16 as printed",
            || {
                let mut w = Worst::new();
                for (n, c, [j0, jh, _]) in j_comparison_grid()? {
                    let nf = n as f64;
                    let hi =
                        j0 - PI * PI / 8.0 * (PI * (nf + 0.5) / (2.0 * c)).ln() + PI.powi(3) / 16.0;
                    w.record(jh <= hi, (jh - hi).max(0.0), || format!("n = {n}, c = {c}"));
                }
                Ok(w.finish("excess"))
            },
        ),
        check(
            "||μ̂| − |μ||/|μ| < 3% where |μ| ≤ 0.15, λ ≥ 1e-40 (c = 10π, 20π)",
            || {
                let mut w = Worst::new();
                for k in 1..=2 {
                    let c = 10.0 * PI * k as f64;
                    for (n, dev) in three_percent_rows(c)? {
                        w.record(dev < 0.03, dev, || format!("n = {n}, c = {c}: {dev:.3}"));
                    }
                }
                Ok(w.finish("relative deviation"))
            },
        ),
    ]
}
