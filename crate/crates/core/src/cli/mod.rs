//! Command-line driver: `check`, `demo` and `evolve`.

mod check;
mod config;
mod demo;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

pub use check::{run_checks, CheckLine, CheckReport};
pub use config::{GridSpec, RunConfig, StateSpec, Tolerances};
pub use demo::{hyperplane_scan, run_demo, Demo, DemoManifest, DemoParams};

use crate::error::{Error, Result};
use crate::operators::evolve;
use crate::products::{weighted_product, ProductKind};
use crate::synthesis::synthesize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_VAR: &str = "MAXWELLQM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "maxwellqm", version, about = "Photon wave mechanics on a spectral lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the invariant suite and write report.json
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write one experiment's CSV/JSON outputs
    Demo {
        #[arg(value_enum)]
        name: Demo,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default: <config output>/<demo>)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        ct: Option<f64>,
        /// Smoothing length
        #[arg(long)]
        s: Option<f64>,
        /// Band limit
        #[arg(long)]
        k: Option<f64>,
        /// Boost rapidities along e3, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rapidity: Option<Vec<f64>>,
    },
    /// Evolve the configured state and dump snapshots
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        /// Dump times, comma separated (default: tau)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        dump_times: Option<Vec<f64>>,
    },
}

fn set_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| Error::InvalidArgument(format!("{THREADS_VAR}={v} is not a count")))?;
    if n == 0 {
        return Err(Error::InvalidArgument(format!("{THREADS_VAR} must be >= 1")));
    }
    // a pool built earlier in the same process wins
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn cmd_check(config: &Path) -> Result<i32> {
    let cfg = RunConfig::load(config)?;
    let report = run_checks(&cfg)?;
    write_json(&cfg.output.join("report.json"), &report)?;
    for c in &report.checks {
        println!("{:<22} {:>10.3e} < {:.1e}  {}", c.name, c.value, c.tolerance, if c.pass { "pass" } else { "FAIL" });
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILED })
}

#[derive(serde::Serialize)]
struct Dump {
    t: f64,
    norm: f64,
    dir: String,
}

/// Snapshots of `U(t)` applied to the configured state; norms are logged per dump.
pub fn cmd_evolve(cfg: &RunConfig, tau: f64, dump_times: &[f64], dir: &Path) -> Result<bool> {
    if !tau.is_finite() {
        return Err(Error::InvalidArgument("tau must be finite".into()));
    }
    let (lo, hi) = (tau.min(0.0), tau.max(0.0));
    if dump_times.iter().any(|t| !(t.is_finite() && *t >= lo && *t <= hi)) {
        return Err(Error::InvalidArgument(format!("dump times must lie between 0 and tau = {tau}")));
    }
    let grid = cfg.build_grid()?;
    let s = cfg.build_state(&grid)?;
    if !s.is_normalizable() {
        return Err(Error::NonNormalizable);
    }
    let kind = ProductKind::of(s.normalization());
    let n0 = weighted_product(&s, &s, kind)?.value().re;
    std::fs::create_dir_all(dir)?;
    let mut dumps = Vec::new();
    let mut now = 0.0;
    let mut state = s;
    for (i, &t) in dump_times.iter().enumerate() {
        state = evolve(&state, t - now);
        now = t;
        let name = format!("snap_{i:03}");
        synthesize(&state, 0.0)?.save(&dir.join(&name), &grid)?;
        let norm = weighted_product(&state, &state, kind)?.value().re;
        println!("t = {t:<12} norm = {norm:.15e}");
        dumps.push(Dump { t, norm, dir: name });
    }
    let drift = dumps.iter().map(|d| (d.norm - n0).abs() / n0.abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
    let pass = drift < cfg.tolerances.unitarity;
    write_json(&dir.join("evolve.json"), &json!({ "tau": tau, "initial_norm": n0, "dumps": dumps, "max_norm_drift": drift, "pass": pass }))?;
    Ok(pass)
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Check { config } => cmd_check(&config),
        Command::Demo { name, config, out, t, ct, s, k, rapidity } => {
            let cfg = match config {
                Some(p) => RunConfig::load(&p)?,
                None => RunConfig::default(),
            };
            let dir = out.unwrap_or_else(|| demo::default_dir(&cfg, name));
            let params = DemoParams { t, ct, s, k, rapidities: rapidity };
            let m = run_demo(name, &cfg, &params, &dir)?;
            println!("{}", serde_json::to_string_pretty(&m.summary)?);
            Ok(EXIT_OK)
        }
        Command::Evolve { config, tau, dump_times } => {
            let cfg = RunConfig::load(&config)?;
            let times = dump_times.unwrap_or_else(|| vec![tau]);
            let ok = cmd_evolve(&cfg, tau, &times, &cfg.output.join("evolve"))?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(e) = set_threads() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
