//! Reproduction of the reference tables and figure data, the validation
//! suites, and the record types printed by the `prolate` binary.

mod data;
mod validate;

use std::f64::consts::{LN_2, PI};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{self, approx_bundle, critical_kappa, plunge_start, ApproxBundle};
use crate::error::{Error, Result};
use crate::oracle::{
    log_lambda_integral, prolate_solve, LambdaOracle, LogLambda, SpectralPoint, Tier,
};

pub use data::{RefTable, TolKind, Tolerance};
pub use validate::{cross_tier_deviation, ode_residual, three_percent_rows};
pub use validate::{validate_all, CheckResult, SuiteResult, ValidationSummary, SUITES};

/// Rows of the figure sweeps and the envelope guard use oracle values above this.
pub const FIGURE_LAMBDA_MIN: f64 = 1e-60;
/// Bound on `|ln(λ̂/λ)|` for the figure sweeps.
pub const ENVELOPE: f64 = LN_2 + 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReproId {
    Table1,
    Table2,
    Table3,
    Figure1,
    Figure2,
    Sweep,
}

impl std::fmt::Display for ReproId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ReproId::Table1 => "table1",
            ReproId::Table2 => "table2",
            ReproId::Table3 => "table3",
            ReproId::Figure1 => "figure1",
            ReproId::Figure2 => "figure2",
            ReproId::Sweep => "sweep",
        })
    }
}

/// One computed quantity, optionally checked against a reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub column: String,
    pub computed: Option<f64>,
    pub reference: Option<f64>,
    pub abs_dev: Option<f64>,
    pub rel_dev: Option<f64>,
    pub checked: bool,
    pub pass: bool,
}

impl Cell {
    fn plain(column: &str, computed: Option<f64>) -> Self {
        Cell {
            column: column.to_string(),
            computed,
            reference: None,
            abs_dev: None,
            rel_dev: None,
            checked: false,
            pass: true,
        }
    }

    fn compared(
        column: &str,
        computed: Option<f64>,
        reference: f64,
        tol: Option<&Tolerance>,
    ) -> Self {
        let abs_dev = computed.map(|x| (x - reference).abs());
        let rel_dev = abs_dev.map(|d| {
            if reference != 0.0 {
                d / reference.abs()
            } else {
                d
            }
        });
        let (checked, pass) = match (tol, computed) {
            (Some(t), Some(x)) => (true, t.accepts(x, reference)),
            (Some(_), None) => (true, false),
            (None, _) => (false, true),
        };
        Cell {
            column: column.to_string(),
            computed,
            reference: Some(reference),
            abs_dev,
            rel_dev,
            checked,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproRow {
    pub c: f64,
    pub n: usize,
    /// `q̃` is defined at this point.
    pub valid: bool,
    pub method: Option<Tier>,
    pub cells: Vec<Cell>,
    pub pass: bool,
    pub reason: Option<String>,
}

impl ReproRow {
    fn new(
        c: f64,
        n: usize,
        valid: bool,
        method: Option<Tier>,
        cells: Vec<Cell>,
        reason: Option<String>,
    ) -> Self {
        let pass = reason.is_none() && cells.iter().all(|c| c.pass);
        ReproRow {
            c,
            n,
            valid,
            method,
            cells,
            pass,
            reason,
        }
    }

    pub fn cell(&self, column: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.column == column)
    }

    fn failed(c: f64, n: usize, err: &Error) -> Self {
        ReproRow {
            c,
            n,
            valid: false,
            method: None,
            cells: Vec::new(),
            pass: false,
            reason: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproReport {
    pub table_id: ReproId,
    pub rows: Vec<ReproRow>,
    pub pass: bool,
    pub tolerances: Vec<Tolerance>,
}

impl ReproReport {
    fn new(table_id: ReproId, rows: Vec<ReproRow>, tolerances: Vec<Tolerance>) -> Self {
        let pass = rows.iter().all(|r| r.pass);
        ReproReport {
            table_id,
            rows,
            pass,
            tolerances,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReproRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// CSV with a fixed column order; floats in scientific notation with
    /// `digits` significant digits.
    pub fn write_csv<W: Write>(&self, out: W, digits: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Data(e.to_string());
        let columns: Vec<String> = self
            .rows
            .iter()
            .find(|r| !r.cells.is_empty())
            .map_or_else(Vec::new, |r| {
                r.cells.iter().map(|c| c.column.clone()).collect()
            });
        let mut header = vec![
            "c".to_string(),
            "n".to_string(),
            "valid".to_string(),
            "method".to_string(),
        ];
        for col in &columns {
            header.push(col.clone());
            header.push(format!("{col}_ref"));
            header.push(format!("{col}_abs_dev"));
            header.push(format!("{col}_rel_dev"));
            header.push(format!("{col}_pass"));
        }
        header.push("pass".into());
        header.push("reason".into());
        w.write_record(&header).map_err(io)?;
        for row in &self.rows {
            let mut rec = vec![
                fmt_float(row.c, digits),
                row.n.to_string(),
                row.valid.to_string(),
                row.method.map(|m| m.to_string()).unwrap_or_default(),
            ];
            for col in &columns {
                match row.cell(col) {
                    Some(cell) => {
                        rec.push(fmt_opt(cell.computed, digits));
                        rec.push(fmt_opt(cell.reference, digits));
                        rec.push(fmt_opt(cell.abs_dev, digits));
                        rec.push(fmt_opt(cell.rel_dev, digits));
                        rec.push(if cell.checked {
                            cell.pass.to_string()
                        } else {
                            String::new()
                        });
                    }
                    None => rec.extend(std::iter::repeat_n(String::new(), 5)),
                }
            }
            rec.push(row.pass.to_string());
            rec.push(row.reason.clone().unwrap_or_default());
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Data(e.to_string()))
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        let mut s = format!(
            "{}: {} rows, {} failed, {}\n",
            self.table_id,
            self.rows.len(),
            failed,
            if self.pass { "PASS" } else { "FAIL" }
        );
        for row in self.failures() {
            s.push_str(&format!("  c = {}, n = {}:", row.c, row.n));
            if let Some(r) = &row.reason {
                s.push_str(&format!(" {r}"));
            }
            for cell in row.cells.iter().filter(|c| !c.pass) {
                s.push_str(&format!(
                    " {} = {} vs {} (abs {}, rel {});",
                    cell.column,
                    fmt_opt(cell.computed, 8),
                    fmt_opt(cell.reference, 8),
                    fmt_opt(cell.abs_dev, 3),
                    fmt_opt(cell.rel_dev, 3)
                ));
            }
            s.push('\n');
        }
        s
    }
}

pub fn fmt_float(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.max(1) - 1, x)
}

fn fmt_opt(x: Option<f64>, digits: usize) -> String {
    x.map(|v| fmt_float(v, digits)).unwrap_or_default()
}

/// Knobs shared by the table runners.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproOptions {
    /// Oracle columns of the large-bandwidth table are evaluated up to this `c`.
    pub oracle_max_c: f64,
    /// Width of the `n` window for the critical-`κ` table.
    pub kappa_window: usize,
    /// Replacement tolerances, matched by column name.
    pub tolerance_overrides: Vec<Tolerance>,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions {
            oracle_max_c: 1000.0,
            kappa_window: 40,
            tolerance_overrides: Vec::new(),
        }
    }
}

impl ReproOptions {
    fn tolerances(&self, table: &RefTable) -> Vec<Tolerance> {
        table
            .tolerances
            .iter()
            .map(|t| {
                self.tolerance_overrides
                    .iter()
                    .find(|o| o.column == t.column)
                    .unwrap_or(t)
                    .clone()
            })
            .collect()
    }
}

fn find<'a>(tols: &'a [Tolerance], column: &str) -> Option<&'a Tolerance> {
    tols.iter().find(|t| t.column == column)
}

/// Reproduces one of the three reference tables.
pub fn run_table(id: ReproId, options: &ReproOptions) -> Result<ReproReport> {
    match id {
        ReproId::Table1 => table1(options),
        ReproId::Table2 => table2(options),
        ReproId::Table3 => table3(options),
        _ => Err(Error::domain("run_table", format!("{id} is not a table"))),
    }
}

fn table1(options: &ReproOptions) -> Result<ReproReport> {
    let table = RefTable::parse(data::TABLE1)?;
    let tols = options.tolerances(&table);
    let rows = (0..table.len())
        .into_par_iter()
        .map(|i| -> Result<ReproRow> {
            let c = table.get(i, "c_over_pi")? * PI;
            Ok(match critical_kappa(c, options.kappa_window) {
                Ok(k) => {
                    let cells = vec![
                        Cell::compared(
                            "kappa_c",
                            Some(k.kappa_c),
                            table.get(i, "kappa_c")?,
                            find(&tols, "kappa_c"),
                        ),
                        Cell::compared(
                            "delta_c",
                            Some(k.delta_c),
                            table.get(i, "delta_c")?,
                            find(&tols, "delta_c"),
                        ),
                        Cell::compared(
                            "max_delta",
                            Some(k.max_delta),
                            table.get(i, "max_delta")?,
                            find(&tols, "max_delta"),
                        ),
                        Cell::plain("argmax_delta", Some(k.argmax_delta as f64)),
                        Cell::plain("argmin_kappa", Some(k.argmin_kappa as f64)),
                    ];
                    ReproRow::new(c, k.n_c, true, None, cells, None)
                }
                Err(e) => ReproRow::failed(c, plunge_start(c), &e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReproReport::new(ReproId::Table1, rows, tols))
}

fn table2(options: &ReproOptions) -> Result<ReproReport> {
    let table = RefTable::parse(data::TABLE2)?;
    let tols = options.tolerances(&table);
    let rows = (0..table.len())
        .into_par_iter()
        .map(|i| -> Result<ReproRow> {
            let c = table.get(i, "c")?;
            let n = table.get(i, "n")? as usize;
            let point = SpectralPoint::new(n, c)?;
            let tilde = approx::sqrt_q_tilde(point);
            let oracle = prolate_solve(point);
            let reason = tilde
                .as_ref()
                .err()
                .or(oracle.as_ref().err())
                .map(|e| e.to_string());
            let cells = vec![
                Cell::compared(
                    "sqrt_q_tilde",
                    tilde.ok(),
                    table.get(i, "sqrt_q_tilde")?,
                    find(&tols, "sqrt_q_tilde"),
                ),
                Cell::compared(
                    "sqrt_q",
                    oracle.ok().map(|p| p.sqrt_q()),
                    table.get(i, "sqrt_q")?,
                    find(&tols, "sqrt_q"),
                ),
            ];
            Ok(ReproRow::new(
                c,
                n,
                approx::q_valid(point),
                None,
                cells,
                reason,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReproReport::new(ReproId::Table2, rows, tols))
}

fn table3(options: &ReproOptions) -> Result<ReproReport> {
    let table = RefTable::parse(data::TABLE3)?;
    let tols = options.tolerances(&table);
    let rows = (0..table.len())
        .into_par_iter()
        .map(|i| -> Result<ReproRow> {
            let c = table.get(i, "c")?;
            let n = table.get(i, "n")? as usize;
            let point = SpectralPoint::new(n, c)?;
            let row = (|| -> Result<ReproRow> {
                let q = approx::q_tilde(point)?;
                let kappa = approx::kappa_tilde(point)?;
                let mu_hat = approx::mu_abs_from_loglambda(c, approx::lambda_hat(point)?).exp();
                let mut cells = vec![
                    Cell::compared(
                        "q_tilde",
                        Some(q),
                        table.get(i, "q_tilde")?,
                        find(&tols, "q_tilde"),
                    ),
                    Cell::compared(
                        "kappa_tilde",
                        Some(kappa),
                        table.get(i, "kappa_tilde")?,
                        find(&tols, "kappa_tilde"),
                    ),
                    Cell::compared(
                        "mu_hat",
                        Some(mu_hat),
                        table.get(i, "mu_hat")?,
                        find(&tols, "mu_hat"),
                    ),
                ];
                let reference = table.get(i, "mu")?;
                let mut method = None;
                let mut reason = None;
                if c <= options.oracle_max_c {
                    match log_lambda_integral(point) {
                        Ok(l) => {
                            method = Some(l.method);
                            cells.push(Cell::compared(
                                "mu",
                                Some(l.log_mu_abs(c).exp()),
                                reference,
                                find(&tols, "mu"),
                            ));
                        }
                        Err(e) => reason = Some(e.to_string()),
                    }
                } else {
                    cells.push(Cell::compared("mu", None, reference, None));
                }
                Ok(ReproRow::new(c, n, true, method, cells, reason))
            })();
            Ok(row.unwrap_or_else(|e| ReproRow::failed(c, n, &e)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReproReport::new(ReproId::Table3, rows, tols))
}

/// Per-`n` plot data at fixed `c`: oracle `ln λ`, `ln λ̂`, `ln λ^W` and
/// `ln(λ̂/λ)`.
///
/// `figure1` checks that `λ̂` is closer to the oracle than `λ^W`;
/// `figure2` checks `|ln(λ̂/λ)| ≤ ln 2 + 0.5`. Both checks apply to rows
/// where `q̃` is defined and `λ ≥ 1e-60`. `n` runs over `0..=n_max`, by
/// default `⌊2c/π⌋ + 70`.
pub fn run_figure(id: ReproId, c: f64, n_max: Option<usize>) -> Result<ReproReport> {
    if !matches!(id, ReproId::Figure1 | ReproId::Figure2) {
        return Err(Error::domain("run_figure", format!("{id} is not a figure")));
    }
    let oracle = LambdaOracle::new(c)?;
    let n_max = n_max.unwrap_or(plunge_start(c) + 70);
    // the shared Nyström spectrum is computed once, before the parallel sweep
    oracle.spectrum()?;
    let rows: Vec<ReproRow> = (0..=n_max)
        .into_par_iter()
        .map(|n| figure_row(id, &oracle, n))
        .collect();
    let tolerances = match id {
        ReproId::Figure1 => vec![Tolerance::new("hat_error", TolKind::Below, 0.0)],
        _ => vec![Tolerance::new("ln_hat_over_lambda", TolKind::Abs, ENVELOPE)],
    };
    Ok(ReproReport::new(id, rows, tolerances))
}

fn figure_row(id: ReproId, oracle: &LambdaOracle, n: usize) -> ReproRow {
    let c = oracle.c();
    let point = SpectralPoint { n, c };
    let widom = approx::lambda_widom(point);
    let hat = approx::lambda_hat(point).ok();
    let lambda = match oracle.best(n) {
        Ok(l) => l,
        Err(e) => return ReproRow::failed(c, n, &e),
    };
    let l = lambda.log_value;
    let checked = hat.is_some() && l >= FIGURE_LAMBDA_MIN.ln();
    let mut cells = vec![
        Cell::plain("ln_lambda", Some(l)),
        Cell::plain("ln_lambda_hat", hat),
        Cell::plain("ln_lambda_widom", Some(widom)),
    ];
    let ratio = hat.map(|h| h - l);
    match id {
        ReproId::Figure1 => {
            cells.push(Cell::plain("ln_hat_over_lambda", ratio));
            let hat_err = ratio.map(f64::abs);
            let widom_err = (widom - l).abs();
            cells.push(if checked {
                Cell::compared(
                    "hat_error",
                    hat_err,
                    widom_err,
                    Some(&Tolerance::new("hat_error", TolKind::Below, 0.0)),
                )
            } else {
                Cell::plain("hat_error", hat_err)
            });
        }
        _ => {
            cells.push(if checked {
                Cell::compared(
                    "ln_hat_over_lambda",
                    ratio,
                    0.0,
                    Some(&Tolerance::new(
                        "ln_hat_over_lambda",
                        TolKind::Abs,
                        ENVELOPE,
                    )),
                )
            } else {
                Cell::plain("ln_hat_over_lambda", ratio)
            });
        }
    }
    ReproRow::new(c, n, hat.is_some(), Some(lambda.method), cells, None)
}

/// Oracle quantities at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub chi: f64,
    pub sqrt_q: f64,
    pub psi1_sq: f64,
    /// `(1−q)√χ`
    pub kappa_measure: f64,
    pub truncation: usize,
}

/// Everything known about one `(n, c)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryRecord {
    pub approx: ApproxBundle,
    pub oracle: Option<OracleSummary>,
    pub oracle_error: Option<String>,
    pub log_lambda: Option<LogLambda>,
    pub lambda_error: Option<String>,
    pub log_mu_abs: Option<f64>,
    pub log_mu_hat_abs: Option<f64>,
    /// `||μ̂| − |μ|| / |μ|`
    pub mu_hat_rel_dev: Option<f64>,
}

/// One-shot evaluation. The tier is chosen by [`crate::oracle::lambda_best`]
/// unless `tier` is given.
pub fn query(point: SpectralPoint, tier: Option<Tier>) -> Result<QueryRecord> {
    let approx = approx_bundle(point)?;
    let (oracle, oracle_error) = match prolate_solve(point) {
        Ok(p) => (
            Some(OracleSummary {
                chi: p.chi,
                sqrt_q: p.sqrt_q(),
                psi1_sq: p.psi_at_1 * p.psi_at_1,
                kappa_measure: p.kappa_measure(),
                truncation: p.truncation,
            }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    let lambda = match tier {
        None => crate::oracle::lambda_best(point),
        Some(t) => LambdaOracle::new(point.c)?.tier(point.n, t),
    };
    let (log_lambda, lambda_error) = match lambda {
        Ok(l) => (Some(l), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let log_mu_abs = log_lambda.map(|l| l.log_mu_abs(point.c));
    let log_mu_hat_abs = approx
        .log_lambda_hat
        .map(|h| approx::mu_abs_from_loglambda(point.c, h));
    let mu_hat_rel_dev = match (log_mu_abs, log_mu_hat_abs) {
        (Some(m), Some(h)) => Some((h - m).exp_m1().abs()),
        _ => None,
    };
    Ok(QueryRecord {
        approx,
        oracle,
        oracle_error,
        log_lambda,
        lambda_error,
        log_mu_abs,
        log_mu_hat_abs,
        mu_hat_rel_dev,
    })
}

/// `n`-sweep at fixed `c`, reported through the same row structure as the
/// figures (no checks).
pub fn sweep(c: f64, n_from: usize, n_to: usize) -> Result<ReproReport> {
    if n_to < n_from {
        return Err(Error::domain(
            "sweep",
            format!("empty range {n_from}..={n_to}"),
        ));
    }
    let oracle = LambdaOracle::new(c)?;
    let rows = (n_from..=n_to)
        .into_par_iter()
        .map(|n| {
            let point = SpectralPoint { n, c };
            let b = approx_bundle(point);
            let l = oracle.best(n);
            let (method, ln_lambda, reason) = match &l {
                Ok(v) => (Some(v.method), Some(v.log_value), None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            let b = b.ok();
            let pair = prolate_solve(point).ok();
            let cells = vec![
                Cell::plain("ln_lambda", ln_lambda),
                Cell::plain("ln_lambda_error", l.as_ref().ok().map(|v| v.error_estimate)),
                Cell::plain(
                    "ln_lambda_tilde",
                    b.as_ref().and_then(|b| b.log_lambda_tilde),
                ),
                Cell::plain("ln_lambda_hat", b.as_ref().and_then(|b| b.log_lambda_hat)),
                Cell::plain("ln_lambda_widom", b.as_ref().map(|b| b.log_lambda_widom)),
                Cell::plain("sqrt_q", pair.as_ref().map(|p| p.sqrt_q())),
                Cell::plain("sqrt_q_tilde", b.as_ref().and_then(|b| b.sqrt_q_tilde)),
                Cell::plain("chi", pair.as_ref().map(|p| p.chi)),
                Cell::plain("psi1_sq", pair.as_ref().map(|p| p.psi_at_1 * p.psi_at_1)),
            ];
            let valid = b.as_ref().is_some_and(|b| b.q_valid);
            let mut row = ReproRow::new(c, n, valid, method, cells, None);
            // an unavailable oracle value is informational in a sweep
            row.reason = reason;
            row
        })
        .collect();
    Ok(ReproReport::new(ReproId::Sweep, rows, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_float_significant_digits() {
        assert_eq!(fmt_float(PI, 3), "3.14e0");
        assert_eq!(fmt_float(-1.5e-300, 2), "-1.5e-300");
        assert_eq!(fmt_float(2.0, 17).len(), "2.0000000000000000e0".len());
    }

    #[test]
    fn figure_rows_below_validity_carry_no_hat() {
        let r = run_figure(ReproId::Figure2, 10.0, Some(12)).unwrap();
        assert_eq!(r.rows.len(), 13);
        let first = &r.rows[0];
        assert!(!first.valid);
        assert_eq!(first.cell("ln_lambda_hat").and_then(|c| c.computed), None);
        assert!(r.rows.last().unwrap().valid);
    }

    #[test]
    fn run_table_rejects_figures() {
        assert!(run_table(ReproId::Figure1, &ReproOptions::default()).is_err());
        assert!(run_figure(ReproId::Table1, 10.0, None).is_err());
    }

    #[test]
    fn sweep_range_checked() {
        assert!(sweep(5.0, 4, 3).is_err());
        assert_eq!(sweep(5.0, 3, 4).unwrap().rows.len(), 2);
    }

    #[test]
    fn csv_columns_are_stable() {
        let r = run_table(ReproId::Table2, &ReproOptions::default()).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf, 6).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "c,n,valid,method,sqrt_q_tilde,sqrt_q_tilde_ref,sqrt_q_tilde_abs_dev,\
             sqrt_q_tilde_rel_dev,sqrt_q_tilde_pass,sqrt_q,sqrt_q_ref,sqrt_q_abs_dev,\
             sqrt_q_rel_dev,sqrt_q_pass,pass,reason"
        );
        assert_eq!(text.lines().count(), 13);
    }

    #[test]
    fn override_replaces_tolerance() {
        let options = ReproOptions {
            tolerance_overrides: vec![
                Tolerance::new("sqrt_q_tilde", TolKind::Abs, 1e-2),
                Tolerance::new("sqrt_q", TolKind::Abs, 1e-2),
            ],
            ..ReproOptions::default()
        };
        assert!(run_table(ReproId::Table2, &options).unwrap().pass);
    }
}
