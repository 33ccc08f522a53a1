//! `ogplab` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ExperimentConfig, Kind};
use crate::error::{LabError, Result};
use crate::experiments::Outcome;
use crate::runner::{execute, run_to_dir};
use crate::verify::{run_suite, SUITES};

pub const DEFAULT_OUT: &str = "ogplab-out";

/// Tables with at most this many rows are echoed to stdout.
const PRINT_ROWS: usize = 40;

#[derive(Debug, Parser)]
#[command(name = "ogplab", version, about = "Overlap-gap experiments: dynamics, stability, rounding, graphs")]
pub struct Cli {
    /// Master seed; overrides the config.
    #[arg(long, global = true, env = "OGPLAB_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "OGPLAB_THREADS")]
    pub threads: Option<usize>,
    /// Output directory; overrides the config.
    #[arg(long, global = true, env = "OGPLAB_OUT")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment config file.
    Run {
        config: PathBuf,
        /// Override a key, e.g. `--set n=200`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
    /// Log first moment of independent-set pairs along the resampling path.
    FirstMoment(FirstMomentArgs),
    /// Overlap-gap band for `k = alpha (ln d / d) n`.
    OgpBand {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        resolution: Option<String>,
    },
    /// Spherical Langevin dynamics on p-spin instances.
    Langevin(LangevinArgs),
    /// Algorithm outputs along an interpolation path.
    Interpolate(InterpolateArgs),
    /// Stability of random polynomials.
    Stability(StabilityArgs),
}

#[derive(Debug, Args)]
pub struct FirstMomentArgs {
    #[arg(long)]
    n: String,
    #[arg(long)]
    d: String,
    #[arg(long)]
    k1: String,
    #[arg(long)]
    k2: String,
    #[arg(long)]
    l: String,
    #[arg(long)]
    j1: String,
    #[arg(long)]
    j2: String,
}

#[derive(Debug, Args)]
pub struct LangevinArgs {
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    n: String,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    record_every: Option<String>,
    /// gaussian or rademacher.
    #[arg(long)]
    disorder: Option<String>,
    /// Energy threshold for the failure fraction.
    #[arg(long)]
    mu_hat: Option<String>,
    #[arg(long)]
    replicas: Option<String>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// power-iteration, amp-lite or langevin.
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    rounds: Option<String>,
    /// Number of path steps.
    #[arg(long = "steps", id = "L")]
    l: Option<String>,
    #[arg(long)]
    domain: Option<String>,
    /// Forbidden overlap band `lo,hi`.
    #[arg(long)]
    band: Option<String>,
    #[arg(long)]
    replicas: Option<String>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StabilityBasis {
    Gaussian,
    Boolean,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    basis: StabilityBasis,
    #[arg(long)]
    degree: Option<String>,
    /// Gaussian input dimension.
    #[arg(long)]
    dim: Option<String>,
    /// Boolean input dimension.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Number of random polynomials.
    #[arg(long)]
    replicas: Option<String>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

fn apply(cfg: &mut ExperimentConfig, flags: &[(&str, &Option<String>)], sets: &[String]) -> Result<()> {
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    for s in sets {
        cfg.set_pair(s)?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match dispatch(&cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writing human output to `w`.
pub fn dispatch(cli: &Cli, w: &mut impl Write) -> Result<i32> {
    let cfg = match &cli.command {
        Command::Verify { suite } => return verify(suite, cli.threads, w),
        Command::Run { config, sets } => {
            let text = std::fs::read_to_string(config)?;
            let mut cfg = ExperimentConfig::parse(&text)?;
            apply(&mut cfg, &[], sets)?;
            cfg
        }
        Command::FirstMoment(a) => {
            let mut cfg = ExperimentConfig::new(Kind::FirstMoment);
            let f = [
                ("n", Some(a.n.clone())),
                ("d", Some(a.d.clone())),
                ("k1", Some(a.k1.clone())),
                ("k2", Some(a.k2.clone())),
                ("l", Some(a.l.clone())),
                ("j1", Some(a.j1.clone())),
                ("j2", Some(a.j2.clone())),
            ];
            apply(&mut cfg, &f.iter().map(|(k, v)| (*k, v)).collect::<Vec<_>>(), &[])?;
            cfg
        }
        Command::OgpBand { alpha, resolution } => {
            let mut cfg = ExperimentConfig::new(Kind::OgpBand);
            apply(&mut cfg, &[("alpha", &Some(alpha.clone())), ("resolution", resolution)], &[])?;
            cfg
        }
        Command::Langevin(a) => {
            let mut cfg = ExperimentConfig::new(Kind::Langevin);
            let n = Some(a.n.clone());
            let flags = [
                ("p", &a.p),
                ("n", &n),
                ("sigma", &a.sigma),
                ("horizon", &a.horizon),
                ("dt", &a.dt),
                ("record_every", &a.record_every),
                ("disorder", &a.disorder),
                ("mu_hat", &a.mu_hat),
                ("replicas", &a.replicas),
            ];
            apply(&mut cfg, &flags, &a.sets)?;
            cfg
        }
        Command::Interpolate(a) => {
            let mut cfg = ExperimentConfig::new(Kind::Interpolation);
            let flags = [
                ("p", &a.p),
                ("n", &a.n),
                ("algorithm", &a.algorithm),
                ("rounds", &a.rounds),
                ("L", &a.l),
                ("domain", &a.domain),
                ("band", &a.band),
                ("replicas", &a.replicas),
            ];
            apply(&mut cfg, &flags, &a.sets)?;
            cfg
        }
        Command::Stability(a) => {
            let kind = match a.basis {
                StabilityBasis::Gaussian => Kind::StabilityGaussian,
                StabilityBasis::Boolean => Kind::StabilityBoolean,
            };
            let mut cfg = ExperimentConfig::new(kind);
            let flags = [
                ("degree", &a.degree),
                ("dim", &a.dim),
                ("m", &a.m),
                ("rho", &a.rho),
                ("c", &a.c),
                ("samples", &a.samples),
                ("replicas", &a.replicas),
            ];
            apply(&mut cfg, &flags, &a.sets)?;
            cfg
        }
    };
    run_config(cli, cfg, w)?;
    Ok(0)
}

fn run_config(cli: &Cli, mut cfg: ExperimentConfig, w: &mut impl Write) -> Result<()> {
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let is_run = matches!(cli.command, Command::Run { .. });
    // `run` always writes artifacts; the shortcuts only when asked to.
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .or_else(|| is_run.then(|| PathBuf::from(DEFAULT_OUT)));
    if let Some(d) = &dir {
        cfg.out = Some(d.display().to_string());
    }
    let outcome = match &dir {
        Some(d) => run_to_dir(&cfg, cli.threads, d)?,
        None => execute(&cfg, cli.threads)?,
    };
    print_outcome(&outcome, w)?;
    if let Some(d) = dir {
        writeln!(w, "wrote {} files to {}", outcome.tables.len() + 1, d.display())?;
    }
    Ok(())
}

fn print_outcome(outcome: &Outcome, w: &mut impl Write) -> Result<()> {
    for t in &outcome.tables {
        if t.rows.len() <= PRINT_ROWS {
            writeln!(w, "== {}", t.name)?;
            w.write_all(&t.to_bytes(&[])?)?;
        } else {
            writeln!(w, "== {} ({} rows)", t.name, t.rows.len())?;
        }
    }
    Ok(())
}

fn verify(suite: &str, threads: Option<usize>, w: &mut impl Write) -> Result<i32> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    if let Some(bad) = names.iter().find(|s| !SUITES.contains(s)) {
        return Err(LabError::invalid("suite", format!("`{bad}`: expected all or one of {}", SUITES.join(", "))));
    }
    let mut failed = 0usize;
    for name in names {
        let checks = crate::parallel::with_threads(threads, || run_suite(name))??;
        let bad = checks.iter().filter(|c| !c.pass).count();
        for c in &checks {
            let tag = if c.pass { "ok  " } else { "FAIL" };
            writeln!(w, "{tag} {name}: {} value {:.6e} bound {:.6e} margin {:.3e}", c.name, c.value, c.bound, c.margin)?;
        }
        writeln!(w, "{name}: {} checks, {bad} failed", checks.len())?;
        failed += bad;
    }
    Ok(if failed == 0 { 0 } else { 1 })
}
