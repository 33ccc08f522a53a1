//! Runs a config and writes its tables plus a manifest to a directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::experiments::{run_experiment, Outcome};
use crate::parallel::with_threads;

pub const MANIFEST: &str = "manifest.txt";

pub fn execute(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<Outcome> {
    with_threads(threads, || run_experiment(cfg))?
}

/// Writes every table; CSV echoes leave out `out` so that identical runs
/// produce identical bytes wherever they are written.
pub fn write_outcome(cfg: &ExperimentConfig, outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let echo = cfg.echo_lines(false);
    outcome
        .tables
        .iter()
        .map(|t| {
            let path = dir.join(&t.name);
            fs::write(&path, t.to_bytes(&echo)?)?;
            Ok(path)
        })
        .collect()
}

/// The manifest is the full config, so `ogplab run manifest.txt` repeats
/// the run, followed by comment lines with run metadata.
pub fn manifest_text(cfg: &ExperimentConfig, outcome: &Outcome, threads: Option<usize>, wall_seconds: f64) -> String {
    let mut s = cfg.to_text(true);
    s.push_str(&format!("# ogplab {}\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("# ogplab-core {}\n", ogplab_core::VERSION));
    let t = threads.map_or_else(|| format!("default ({})", rayon::current_num_threads()), |t| t.to_string());
    s.push_str(&format!("# threads {t}\n"));
    s.push_str(&format!("# wall_seconds {wall_seconds:.3}\n"));
    for table in &outcome.tables {
        s.push_str(&format!("# file {}\n", table.name));
    }
    s
}

/// `execute` followed by `write_outcome` and the manifest.
pub fn run_to_dir(cfg: &ExperimentConfig, threads: Option<usize>, dir: &Path) -> Result<Outcome> {
    let start = Instant::now();
    let outcome = execute(cfg, threads)?;
    write_outcome(cfg, &outcome, dir)?;
    let wall = start.elapsed().as_secs_f64();
    fs::write(dir.join(MANIFEST), manifest_text(cfg, &outcome, threads, wall))?;
    Ok(outcome)
}
