//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prolate::approx::delta_kappa;
use prolate::oracle::{c_star, default_nystrom_size, nystrom_spectrum};
use prolate::repro::{
    ode_residual, query, run_table, three_percent_rows, validate_all, ReproId, ReproOptions,
    ReproReport,
};
use prolate::{SpectralPoint, Tier};

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Every checked value of `column` within `tol` (absolute or relative).
fn within(report: &ReproReport, column: &str, tol: f64, relative: bool) -> (bool, f64) {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for row in &report.rows {
        let dev = row
            .cell(column)
            .and_then(|c| if relative { c.rel_dev } else { c.abs_dev });
        match dev {
            Some(d) => {
                worst = worst.max(d);
                ok &= d <= tol;
            }
            None => ok = false,
        }
    }
    (ok, worst)
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f()?;
    let t = start.elapsed();
    Ok((
        pass && t <= limit,
        format!("{detail}; {:.2} s", t.as_secs_f64()),
    ))
}

fn criterion1() -> Outcome {
    timed(Duration::from_secs(30), || {
        let r = run_table(ReproId::Table2, &ReproOptions::default()).map_err(|e| e.to_string())?;
        let (a, wa) = within(&r, "sqrt_q_tilde", 1e-8, false);
        let (b, wb) = within(&r, "sqrt_q", 5e-6, false);
        let bad: Vec<String> = r
            .failures()
            .map(|row| format!("(c={}, n={})", row.c, row.n))
            .collect();
        Ok((
            a && b && r.rows.len() == 12,
            format!("max |Δ√q̃| {wa:.2e}, max |Δ√q| {wb:.2e}, failing rows {bad:?}"),
        ))
    })
}

fn criterion2() -> Outcome {
    timed(Duration::from_secs(10), || {
        let options = ReproOptions {
            oracle_max_c: 0.0,
            ..ReproOptions::default()
        };
        let r = run_table(ReproId::Table3, &options).map_err(|e| e.to_string())?;
        let (a, wa) = within(&r, "q_tilde", 1e-5, true);
        let (b, wb) = within(&r, "kappa_tilde", 1e-5, true);
        let (c, wc) = within(&r, "mu_hat", 5e-4, true);
        Ok((
            a && b && c && r.rows.len() == 15,
            format!("max rel: q̃ {wa:.2e}, κ̃ {wb:.2e}, |μ̂| {wc:.2e}"),
        ))
    })
}

fn criterion3() -> Outcome {
    timed(Duration::from_secs(600), || {
        let r = run_table(ReproId::Table3, &ReproOptions::default()).map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        let mut ok = true;
        let mut count = 0;
        for row in r
            .rows
            .iter()
            .filter(|row| row.c == 250.0 || row.c == 1000.0)
        {
            count += 1;
            let cell = row.cell("mu");
            ok &= row.method == Some(Tier::Integral);
            match cell.and_then(|c| c.rel_dev) {
                Some(d) => {
                    worst = worst.max(d);
                    ok &= d <= 1e-3;
                }
                None => ok = false,
            }
        }
        Ok((
            ok && count == 6,
            format!("{count} rows, max rel |μ| deviation {worst:.2e}"),
        ))
    })
}

fn criterion4() -> Outcome {
    let point = SpectralPoint::new(90, 10.0 * PI).map_err(|e| e.to_string())?;
    let r = query(point, Some(Tier::Integral)).map_err(|e| e.to_string())?;
    let mu = r.log_mu_abs.ok_or("no oracle value")?.exp();
    let rel = (mu - 8.64288e-57).abs() / 8.64288e-57;
    let dev = r.mu_hat_rel_dev.ok_or("no |μ̂|")?;
    let factor = (dev / 7.71e-5).max(7.71e-5 / dev);
    Ok((
        rel <= 1e-3 && factor <= 3.0,
        format!("|μ| = {mu:.6e} (rel {rel:.2e}), |μ̂| deviation {dev:.3e} (factor {factor:.1})"),
    ))
}

fn criterion5() -> Outcome {
    let mut worst = (0.0, 0, 0.0);
    let mut count = 0;
    let mut bad = 0;
    for c in [10.0 * PI, 20.0 * PI] {
        for (n, dev) in three_percent_rows(c).map_err(|e| e.to_string())? {
            count += 1;
            if dev >= 0.03 {
                bad += 1;
            }
            if dev > worst.0 {
                worst = (dev, n, c);
            }
        }
    }
    Ok((
        bad == 0 && count > 0,
        format!(
            "{count} rows, {bad} at or above 3%, worst {:.3} at n = {}, c = {:.4}",
            worst.0, worst.1, worst.2
        ),
    ))
}

fn criterion6() -> Outcome {
    let r = run_table(ReproId::Table1, &ReproOptions::default()).map_err(|e| e.to_string())?;
    let mut ok = r.rows.len() == 4;
    let mut detail = Vec::new();
    for col in ["kappa_c", "delta_c", "max_delta"] {
        let (pass, worst) = within(&r, col, 2e-3, false);
        ok &= pass;
        detail.push(format!("{col} max |Δ| {worst:.3}"));
    }
    let computed: Vec<String> = r
        .rows
        .iter()
        .map(|row| {
            let v = |c: &str| row.cell(c).and_then(|x| x.computed).unwrap_or(f64::NAN);
            format!(
                "({:.3}, {:.3}, {:.3})",
                v("kappa_c"),
                v("delta_c"),
                v("max_delta")
            )
        })
        .collect();
    Ok((
        ok,
        format!("{}; computed {}", detail.join(", "), computed.join(" ")),
    ))
}

fn criterion7() -> Outcome {
    let d4 = delta_kappa(4.0).map_err(|e| e.to_string())?;
    let d12 = delta_kappa(12.0).map_err(|e| e.to_string())?;
    Ok((
        (d4 - 77.2).abs() <= 0.1 && (d12 - 7.6).abs() <= 0.1,
        format!("δ(4) = {d4:.4}, δ(12) = {d12:.4}"),
    ))
}

fn criterion8() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for n in 2..=40usize {
        let cs = c_star(n).map_err(|e| e.to_string())?;
        let nf = n as f64;
        ok &= FRAC_PI_2 * (nf - 1.0) <= cs && cs <= FRAC_PI_2 * (nf + 1.0);
        let s = nystrom_spectrum(cs, default_nystrom_size(cs, n + 1)).map_err(|e| e.to_string())?;
        let dev = (s.eigenvalues[n] - 0.5).abs();
        worst = worst.max(dev);
        ok &= dev <= 1e-9;
    }
    Ok((ok, format!("n = 2..40, max |λ_n(c*_n) − ½| = {worst:.2e}")))
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < 20 {
        attempts += 1;
        if attempts > 2000 {
            return Ok((
                false,
                format!("only {accepted} samples with λ in [1e-8, 0.3]"),
            ));
        }
        let n = rng.gen_range(1..=24usize);
        let centre = FRAC_PI_2 * n as f64;
        let c = rng.gen_range((centre - 12.0).max(0.3)..centre);
        if let Some(dev) = ode_residual(n, c).map_err(|e| e.to_string())? {
            accepted += 1;
            worst = worst.max(dev);
        }
    }
    Ok((
        worst <= 1e-3,
        format!("20 samples, max relative deviation {worst:.2e}"),
    ))
}

fn criterion10() -> Outcome {
    timed(Duration::from_secs(1200), || {
        let summary = validate_all(None).map_err(|e| e.to_string())?;
        let mut ok = true;
        let mut parts = Vec::new();
        for s in &summary.suites {
            if s.name != "claims" {
                ok &= s.pass;
            }
            parts.push(format!(
                "{} {}",
                s.name,
                if s.pass { "pass" } else { "FAIL" }
            ));
        }
        Ok((
            ok,
            format!("{} (claims suite is informational)", parts.join(", ")),
        ))
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table 2 √q̃ and √q", criterion1),
        ("table 3 approximation columns", criterion2),
        ("table 3 oracle |μ| at c = 250, 1000", criterion3),
        ("deep-decay point c = 10π, n = 90", criterion4),
        ("3% claim for |μ| ≤ 0.15", criterion5),
        ("table 1 critical κ", criterion6),
        ("δ(κ) at 4 and 12", criterion7),
        ("c*_n bracket and λ_n(c*_n) = ½", criterion8),
        ("eigenvalue ODE by finite differences", criterion9),
        ("property suites", criterion10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
