use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use prolate::repro::{self, fmt_float, QueryRecord, ReproId, ReproOptions, ReproReport};
use prolate::{Error, SpectralPoint, Tier};

/// Eigenvalues of the time-frequency limiting operator.
#[derive(Parser)]
#[command(name = "prolate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Emit JSON instead of CSV / text.
    #[arg(long, global = true)]
    json: bool,

    /// Significant digits of printed floats.
    #[arg(long, global = true, default_value_t = 17, value_parser = clap::value_parser!(u8).range(1..=17))]
    digits: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce a reference table (1, 2 or 3).
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        /// Largest c whose oracle columns are computed (table 3).
        #[arg(long, default_value_t = 1000.0)]
        oracle_max_c: f64,
    },
    /// Per-n figure data at bandwidth c (1 or 2).
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        id: u8,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// Last n of the sweep (default: plunge start + 70).
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Evaluate every approximation and oracle quantity at one (n, c).
    Query {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, value_enum)]
        tier: Option<TierArg>,
        /// Print natural logarithms of λ and μ.
        #[arg(long)]
        log_domain: bool,
    },
    /// Run the invariant suites.
    Validate {
        #[arg(long)]
        suite: Option<String>,
    },
    /// Approximations and oracle values for n in [n_from, n_to] at fixed c.
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Nystrom,
    Ratio,
    Integral,
}

impl From<TierArg> for Tier {
    fn from(t: TierArg) -> Self {
        match t {
            TierArg::Nystrom => Tier::Nystrom,
            TierArg::Ratio => Tier::Ratio,
            TierArg::Integral => Tier::Integral,
        }
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_FAIL: u8 = 3;

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_domain() {
                EXIT_DOMAIN
            } else {
                EXIT_FAIL
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let digits = cli.digits as usize;
    match &cli.command {
        Command::Table { id, oracle_max_c } => {
            let id = [ReproId::Table1, ReproId::Table2, ReproId::Table3][*id as usize - 1];
            let options = ReproOptions {
                oracle_max_c: *oracle_max_c,
                ..ReproOptions::default()
            };
            emit_report(cli, &repro::run_table(id, &options)?, digits)
        }
        Command::Figure { id, c, n_max } => {
            let id = [ReproId::Figure1, ReproId::Figure2][*id as usize - 1];
            emit_report(cli, &repro::run_figure(id, *c, *n_max)?, digits)
        }
        Command::Sweep { c, n_from, n_to } => {
            let report = repro::sweep(*c, *n_from, *n_to)?;
            emit_report(cli, &report, digits)?;
            Ok(0)
        }
        Command::Query {
            n,
            c,
            tier,
            log_domain,
        } => {
            let record = repro::query(SpectralPoint::new(*n, *c)?, tier.map(Tier::from))?;
            let mut w = sink(&cli.out)?;
            if cli.json {
                serde_json::to_writer_pretty(&mut w, &record).map_err(io::Error::from)?;
                writeln!(w)?;
            } else {
                write_query(&mut w, &record, *log_domain, digits)?;
            }
            w.flush()?;
            Ok(0)
        }
        Command::Validate { suite } => {
            let summary = repro::validate_all(suite.as_deref())?;
            let mut w = sink(&cli.out)?;
            if cli.json {
                serde_json::to_writer_pretty(&mut w, &summary).map_err(io::Error::from)?;
                writeln!(w)?;
            } else {
                w.write_all(summary.render().as_bytes())?;
            }
            w.flush()?;
            Ok(summary.exit_code() as u8)
        }
    }
}

fn emit_report(cli: &Cli, report: &ReproReport, digits: usize) -> Result<u8, Failure> {
    let mut w = sink(&cli.out)?;
    if cli.json {
        serde_json::to_writer_pretty(&mut w, report).map_err(io::Error::from)?;
        writeln!(w)?;
    } else {
        report.write_csv(&mut w, digits)?;
    }
    w.flush()?;
    eprint!("{}", report.summary());
    Ok(if report.pass { 0 } else { EXIT_FAIL })
}

fn write_query(
    w: &mut dyn Write,
    r: &QueryRecord,
    log_domain: bool,
    digits: usize,
) -> io::Result<()> {
    let f = |x: f64| fmt_float(x, digits);
    let opt = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), f);
    // log quantities are shown as values unless asked otherwise
    let logq = |x: Option<f64>| -> String {
        match x {
            Some(v) if log_domain => f(v),
            Some(v) => f(v.exp()),
            None => "n/a".into(),
        }
    };
    let (pre, muname) = if log_domain {
        ("ln_", "ln_abs_mu")
    } else {
        ("", "abs_mu")
    };
    let a = &r.approx;
    writeln!(w, "n = {}", a.point.n)?;
    writeln!(w, "c = {}", f(a.point.c))?;
    writeln!(w, "q_valid = {}", a.q_valid)?;
    writeln!(w, "sqrt_q_tilde = {}", opt(a.sqrt_q_tilde))?;
    writeln!(w, "chi_tilde = {}", opt(a.chi_tilde))?;
    writeln!(w, "kappa_tilde = {}", opt(a.kappa_tilde))?;
    writeln!(w, "psi1_sq_estimate = {}", opt(a.psi1_sq_estimate))?;
    writeln!(w, "{pre}lambda_tilde = {}", logq(a.log_lambda_tilde))?;
    writeln!(w, "{pre}lambda_hat = {}", logq(a.log_lambda_hat))?;
    writeln!(w, "{pre}lambda_widom = {}", logq(Some(a.log_lambda_widom)))?;
    writeln!(w, "{muname}_hat = {}", logq(r.log_mu_hat_abs))?;
    match &r.oracle {
        Some(o) => {
            writeln!(w, "chi = {}", f(o.chi))?;
            writeln!(w, "sqrt_q = {}", f(o.sqrt_q))?;
            writeln!(w, "psi1_sq = {}", f(o.psi1_sq))?;
            writeln!(w, "kappa = {}", f(o.kappa_measure))?;
            writeln!(w, "q_below_one = {}", o.sqrt_q < 1.0)?;
        }
        None => writeln!(
            w,
            "oracle_error = {}",
            r.oracle_error.as_deref().unwrap_or("")
        )?,
    }
    match &r.log_lambda {
        Some(l) => {
            writeln!(w, "{pre}lambda = {}", logq(Some(l.log_value)))?;
            writeln!(w, "lambda_tier = {}", l.method)?;
            writeln!(w, "ln_lambda_error_estimate = {}", f(l.error_estimate))?;
            writeln!(w, "{muname} = {}", logq(r.log_mu_abs))?;
            writeln!(w, "mu_hat_rel_dev = {}", opt(r.mu_hat_rel_dev))?;
        }
        None => writeln!(
            w,
            "lambda_error = {}",
            r.lambda_error.as_deref().unwrap_or("")
        )?,
    }
    Ok(())
}
