//! `hqc`: evaluate corpus maps, run check suites and write reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hqc_core::johndisk::{self, JohnOptions};
use hqc_core::radial::RadialProfile;
use hqc_core::suite::{self, Overrides, RunManifest};
use hqc_core::{Config, Corpus, Error};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hqc", version, about = "Harmonic quasiconformal mappings of the unit disk")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Corpus JSON file; the built-in corpus when omitted.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Configuration JSON file; flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    bigk: Option<f64>,
    /// Output directory (report) or file (other commands).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Doubles every grid density this many times.
    #[arg(long, global = true)]
    grid_level: Option<u32>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Value and derivative data of a map at one point.
    Eval {
        label: String,
        /// Point as `a+bi` or `a,b`.
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Radial length profile as CSV.
    Radial {
        label: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Comma-separated radii; a grid clustered toward the boundary when omitted.
        #[arg(long, value_delimiter = ',')]
        r: Vec<f64>,
    },
    /// Run check suites and print one JSON report per line.
    Check {
        #[arg(required = true)]
        suites: Vec<String>,
    },
    /// John-disk estimate as JSON.
    John { label: String },
    /// Poisson functional supremum trace as JSON, or the sample rows as CSV.
    Poisson {
        label: String,
        #[arg(long)]
        csv: bool,
    },
    /// Write the full deterministic report set into `--out`.
    Report {
        #[arg(default_value = "full")]
        suites: Vec<String>,
    },
}

enum Failure {
    Usage(String),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    let overrides = Overrides {
        alpha: g.alpha,
        big_k: g.bigk,
        eps: g.eps,
        tol: g.tol,
        grid_level: g.grid_level,
    };
    let cfg: Config = overrides.apply(suite::load_config(g.config.as_deref())?)?;
    let corpus = match &g.corpus {
        Some(p) => Corpus::load(p)?,
        None => hqc_core::corpus::builtin(),
    };

    match cli.command {
        Command::Eval { label, z } => {
            let map = corpus.get(&label)?;
            let z = suite::parse_complex(&z)?;
            let (w, warnings) = map.eval_with_warnings(z)?;
            let d = map.wirtinger(z)?;
            let line = json!({
                "map": label,
                "z": [z.re, z.im],
                "f": [w.re, w.im],
                "fz": [d.fz.re, d.fz.im],
                "fzbar": [d.fzb.re, d.fzb.im],
                "dnorm": d.dnorm(),
                "dmin": d.dmin(),
                "jacobian": d.jacobian(),
                "dilatation": finite_or_string(d.dilatation()),
                "warnings": warnings,
            });
            emit(&g.out, &format!("{line}\n"))
        }
        Command::Radial { label, theta, r } => {
            let map = corpus.get(&label)?;
            let grid = if r.is_empty() { suite::radial_grid(&cfg) } else { r };
            let profile = RadialProfile::build(map, theta, &grid, cfg.abs_tol.max(1e-10))?;
            emit(&g.out, &profile.to_csv())
        }
        Command::Check { suites } => {
            let mut reports = Vec::new();
            for s in &suites {
                reports.extend(suite::run_suite(s, &corpus, &cfg, g.seed)?);
            }
            emit(&g.out, &suite::reports_to_jsonl(&reports))?;
            let failed = reports.iter().filter(|r| r.is_failure()).count();
            if failed > 0 {
                return Err(Failure::Checks(format!("{failed} of {} checks failed", reports.len())));
            }
            Ok(())
        }
        Command::John { label } => {
            let est = johndisk::john_estimate(corpus.get(&label)?, &JohnOptions::from(&cfg))?;
            emit(&g.out, &(est.to_json() + "\n"))
        }
        Command::Poisson { label, csv } => {
            let sup = suite::poisson_summary(corpus.get(&label)?, &cfg)?;
            emit(&g.out, &if csv { sup.to_csv() } else { sup.to_json() + "\n" })
        }
        Command::Report { suites } => {
            let out = g.out.ok_or_else(|| Failure::Usage("report needs --out DIR".into()))?;
            let manifest = RunManifest {
                corpus: g.corpus,
                config: cfg,
                suites,
                out,
                seed: g.seed,
            };
            let summary = suite::write_report(&manifest)?;
            eprintln!("wrote {} files to {}", summary.files.len(), manifest.out.display());
            if summary.failures > 0 {
                return Err(Failure::Checks(format!("{} of {} checks failed", summary.failures, summary.checks)));
            }
            Ok(())
        }
    }
}

fn finite_or_string(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(msg)) => {
            eprintln!("hqc: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("hqc: {msg}");
            ExitCode::from(2)
        }
    }
}
