//! `quad` command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{apply_overrides, parse_config};
use crate::design::{DesignKind, DesignSet};
use crate::error::{QuadError, Result};
use crate::kernel::{Order, DEFAULT_SCALE};
use crate::quadrature::{abs_weight_sum, bq_weights_with, quadrature_estimate, worst_case_error, SolveOptions};
use crate::rates::RateInputs;
use crate::report::write_study_outputs;
use crate::study::{run_study, summarize, RowStatus, StudyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
/// Outputs were written but at least one cell's weight solve failed.
pub const EXIT_SOLVE_FAILED: i32 = 3;

pub const THREADS_ENV: &str = "QUAD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "quad", version, about = "Bayesian quadrature with Wendland kernels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DesignArg {
    Uniform,
    Nonuniform,
}

impl From<DesignArg> for DesignKind {
    fn from(arg: DesignArg) -> Self {
        match arg {
            DesignArg::Uniform => DesignKind::Uniform,
            DesignArg::Nonuniform => DesignKind::NonUniform,
        }
    }
}

fn order_arg() -> clap::builder::RangedI64ValueParser<i64> {
    clap::value_parser!(i64).range(1..=4)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full sweep and write rows.csv, summary.md and plotdata/.
    Study {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "study_out")]
        out: PathBuf,
        /// Configuration override, repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Print Bayesian-quadrature weights for one design.
    Weights {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = order_arg())]
        r: i64,
        #[arg(long, value_enum)]
        design: DesignArg,
        #[arg(long, default_value_t = DEFAULT_SCALE)]
        delta: f64,
        /// Diagonal jitter for exploratory solves.
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
    },
    /// Worst-case error of the order-r rule in the order-s RKHS.
    Wce {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = order_arg())]
        r: i64,
        #[arg(long, value_parser = order_arg())]
        s: i64,
        #[arg(long, value_enum)]
        design: DesignArg,
        #[arg(long, default_value_t = DEFAULT_SCALE)]
        delta: f64,
    },
    /// Fill distance, separation radius and their ratio.
    Geometry {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        design: DesignArg,
    },
    /// Predicted decay exponents p (error = O(n^-p)).
    Rates {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        s: f64,
        /// Worst-case error exponent; default r/d.
        #[arg(long)]
        b: Option<f64>,
        /// Absolute weight-sum growth exponent; default 0.
        #[arg(long)]
        c: Option<f64>,
        /// Separation-radius exponent; default b/r.
        #[arg(long)]
        a: Option<f64>,
        /// Fill-distance exponent; default 1/d.
        #[arg(long)]
        alpha: Option<f64>,
        /// Quasi-uniformity exponent; default 1.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| QuadError::Domain(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| QuadError::Domain(format!("cannot start worker pool: {e}")))
}

fn load_config(path: Option<&PathBuf>, overrides: &[String]) -> Result<StudyConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| QuadError::io(p, e))?;
            parse_config(&text)?
        }
        None => StudyConfig::default(),
    };
    apply_overrides(&mut cfg, overrides)?;
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_study(
    config: Option<&PathBuf>,
    out_dir: &std::path::Path,
    overrides: &[String],
    out: &mut dyn Write,
) -> Result<i32> {
    let cfg = load_config(config, overrides)?;
    let rows = thread_pool()?.install(|| run_study(&cfg))?;
    let summary = summarize(&rows);
    write_study_outputs(out_dir, &rows, &summary)?;

    let count = |st: RowStatus| rows.iter().filter(|r| r.status == st).count();
    let failed = count(RowStatus::SolveFailed);
    let _ = writeln!(
        out,
        "{} rows written to {} (ok {}, clamped {}, skipped-floor {}, solve-failed {})",
        rows.len(),
        out_dir.display(),
        count(RowStatus::Ok),
        count(RowStatus::Clamped),
        count(RowStatus::SkippedFloor),
        failed
    );
    Ok(if failed > 0 { EXIT_SOLVE_FAILED } else { EXIT_OK })
}

fn cmd_weights(n: usize, r: i64, design: DesignArg, delta: f64, jitter: f64, out: &mut dyn Write) -> Result<()> {
    let order = Order::new(r)?;
    let design = DesignSet::generate(design.into(), n)?;
    let rule = bq_weights_with(order, delta, &design, SolveOptions { jitter })?;
    let kernel = rule.kernel();
    let _ = writeln!(out, "# i, X_i, w_i");
    for (i, (x, w)) in design.points().iter().zip(rule.weights()).enumerate() {
        let _ = writeln!(out, "{}, {:.11e}, {:.11e}", i + 1, x, w);
    }
    let zw = quadrature_estimate(&rule, |x| kernel.mean_uniform01(x).unwrap_or(f64::NAN));
    let _ = writeln!(out, "sum |w_i| = {:.11e}", abs_weight_sum(&rule));
    let _ = writeln!(out, "sum w_i = {:.11e}", rule.weights().iter().sum::<f64>());
    let _ = writeln!(out, "z^T w = {:.11e} (nonnegative: {})", zw, zw >= 0.0);
    let _ = writeln!(out, "condition proxy = {:.11e}", rule.condition_proxy().unwrap_or(f64::NAN));
    Ok(())
}

fn cmd_wce(n: usize, r: i64, s: i64, design: DesignArg, delta: f64, out: &mut dyn Write) -> Result<()> {
    let design = DesignSet::generate(design.into(), n)?;
    let rule = bq_weights_with(Order::new(r)?, delta, &design, SolveOptions::default())?;
    let report = worst_case_error(&rule, Order::new(s)?)?;
    let _ = writeln!(out, "wce = {:.11e}", report.wce);
    let _ = writeln!(out, "raw e^2 = {:.11e}", report.raw_square);
    let _ = writeln!(out, "clamped = {}", report.clamped());
    let _ = writeln!(out, "resolved above rounding = {}", report.resolved());
    let _ = writeln!(out, "condition proxy = {:.11e}", report.condition_proxy);
    Ok(())
}

fn cmd_geometry(n: usize, design: DesignArg, out: &mut dyn Write) -> Result<()> {
    let design = DesignSet::generate(design.into(), n)?;
    let _ = writeln!(out, "fill distance h = {:.11e}", design.fill_distance());
    let _ = writeln!(out, "separation radius q = {:.11e}", design.separation_radius());
    let _ = writeln!(out, "h / q = {:.11e}", design.quasi_uniformity_ratio());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_rates(
    r: f64,
    s: f64,
    b: Option<f64>,
    c: Option<f64>,
    a: Option<f64>,
    alpha: Option<f64>,
    delta: Option<f64>,
    d: u32,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    if d == 0 {
        let _ = writeln!(err, "error: dimension d must be at least 1");
        return EXIT_USAGE;
    }
    let mut inputs = RateInputs::quasi_uniform(r, s, d);
    if let Some(b) = b {
        inputs.b = b;
        inputs.a = b / r;
    }
    inputs.c = c.unwrap_or(inputs.c);
    inputs.a = a.unwrap_or(inputs.a);
    inputs.alpha = alpha.unwrap_or(inputs.alpha);
    inputs.delta = delta.unwrap_or(inputs.delta);

    let _ = writeln!(
        out,
        "# decay exponents p (error = O(n^-p)); r={} s={} b={} c={} a={} alpha={} delta={} d={}",
        inputs.r, inputs.s, inputs.b, inputs.c, inputs.a, inputs.alpha, inputs.delta, inputs.d
    );
    let p = inputs.predictions();
    let mut code = EXIT_OK;
    for (name, formula, value) in [
        ("weight_bound", "b s/r - c (r-s)/r", p.weight_bound),
        ("sep_bound", "min(b - a (r-s), a s)", p.sep_bound),
        ("bq_misspecified", "alpha (r - (r-s)/delta)", p.bq_misspecified),
        ("bq_wellspecified", "alpha r", p.bq_wellspecified),
    ] {
        match value {
            Ok(v) => {
                let _ = writeln!(out, "{name} [{formula}] = {v:.6}");
            }
            Err(e) => {
                let _ = writeln!(out, "{name} [{formula}] = unavailable");
                let _ = writeln!(err, "error: {name}: {e}");
                code = EXIT_USAGE;
            }
        }
    }
    code
}

/// Runs a parsed invocation and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Study { config, out: dir, overrides } => cmd_study(config.as_ref(), &dir, &overrides, out),
        Command::Weights { n, r, design, delta, jitter } => cmd_weights(n, r, design, delta, jitter, out).map(|_| EXIT_OK),
        Command::Wce { n, r, s, design, delta } => cmd_wce(n, r, s, design, delta, out).map(|_| EXIT_OK),
        Command::Geometry { n, design } => cmd_geometry(n, design, out).map(|_| EXIT_OK),
        Command::Rates { r, s, b, c, a, alpha, delta, d } => {
            return cmd_rates(r, s, b, c, a, alpha, delta, d, out, err);
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let QuadError::WeightSolve { source, .. } = &e {
                if let QuadError::NotPositiveDefinite { index, value } = source.as_ref() {
                    let _ = writeln!(err, "pivot {index} of the Gram factorization was {value:e}");
                }
            }
            match e {
                QuadError::Config { .. } | QuadError::InvalidDesign(_) | QuadError::UnsupportedOrder(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}
