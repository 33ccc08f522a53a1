//! The experiment kinds behind `ogplab run`.
//!
//! Replica `r` draws its instance from `instance_seed(seed, r)` (or
//! `2r`, `2r + 1` for pairs) and its internal randomness from
//! `derive_seed(seed, r)`, so tables depend only on the config.

use ogplab_core::dynamics::{langevin_simulate, replica_terminal_energy, Disorder, FailureReport, InitialLaw, LangevinConfig};
use ogplab_core::graph::{
    empirical_pair_overlap_scan, first_moment_t, greedy_indep, local_indep, ogp_band_solve, band_certificate,
    FirstMomentQuery, GraphSample, LocalRule, ScanConfig,
};
use ogplab_core::poly::{character_indices, hermite_indices, random_poly, Basis, BiasVector};
use ogplab_core::rng::derive_seed;
use ogplab_core::rounding::{check_success, round_sign, round_sphere, Instance, Replica, SuccessSpec, Target};
use ogplab_core::stability::{
    boolean_path_run, boolean_path_stability, gaussian_pair_stability, interpolation_path_run, tensor_algorithm,
    GraphAlgorithm, GreedyIndicator, LocalIndicator, PathMode,
};
use ogplab_core::stats::Moments;
use ogplab_core::tensor::{
    amp_lite_opt, energy, exhaustive_ground_state, instance_seed, power_iteration_opt, softmax_search_poly, Domain,
    EntrywisePoly, PTensor,
};

use crate::config::{ExperimentConfig, Kind};
use crate::error::{LabError, Result};
use crate::parallel::try_ordered_map;
use crate::table::{margin_sigmas, summary_table, Cell, Table};

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub tables: Vec<Table>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.check_required()?;
    let tables = match cfg.kind {
        Kind::Langevin => langevin(cfg)?,
        Kind::StabilityGaussian => stability_gaussian(cfg)?,
        Kind::StabilityBoolean => stability_boolean(cfg)?,
        Kind::Interpolation => interpolation(cfg)?,
        Kind::FirstMoment => first_moment(cfg)?,
        Kind::OgpBand => ogp_band(cfg)?,
        Kind::Optimize => optimize(cfg)?,
        Kind::GraphScan => graph_scan(cfg)?,
    };
    Ok(Outcome { tables })
}

fn domain(cfg: &ExperimentConfig) -> Result<Domain> {
    match cfg.raw("domain")? {
        "spherical" => Ok(Domain::Spherical),
        "ising" => Ok(Domain::Ising),
        other => Err(LabError::invalid("domain", format!("`{other}`: expected spherical or ising"))),
    }
}

fn langevin_config(cfg: &ExperimentConfig, record_every: usize) -> Result<LangevinConfig> {
    let lc = LangevinConfig {
        sigma: cfg.get("sigma")?,
        horizon: cfg.get("horizon")?,
        dt: cfg.get("dt")?,
        init: InitialLaw::UniformSphere,
        seed: cfg.seed,
        record_every,
    };
    lc.validate()?;
    Ok(lc)
}

fn labelled(name: &str, ctx: &str) -> String {
    format!("{name}[{ctx}]")
}

fn langevin(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let p: usize = cfg.get("p")?;
    let n: usize = cfg.get("n")?;
    let lc = langevin_config(cfg, cfg.get("record_every")?)?;
    let disorder = match cfg.raw("disorder")? {
        "gaussian" => Disorder::Gaussian,
        "zero" => Disorder::Zero,
        other => return Err(LabError::invalid("disorder", format!("`{other}`: expected gaussian or zero"))),
    };
    let mu_hat: Option<f64> = cfg.get_opt("mu_hat")?;

    let y = match disorder {
        Disorder::Gaussian => PTensor::sample(p, n, instance_seed(cfg.seed, 0))?,
        Disorder::Zero => PTensor::zeros(p, n)?,
    };
    let traj = langevin_simulate(&y, &LangevinConfig { seed: derive_seed(cfg.seed, 0), ..lc.clone() })?;
    let mut trajectory = Table::new("trajectory.csv", &["t", "energy", "overlap_with_start"]);
    for ((t, e), r) in traj.times.iter().zip(&traj.energies).zip(traj.overlaps_with_start()) {
        trajectory.push(vec![(*t).into(), (*e).into(), r.into()]);
    }

    let energies = try_ordered_map(cfg.replicas, |r| Ok(replica_terminal_energy(p, n, disorder, &lc, r as u64)?))?;
    let mut ensemble = Table::new("ensemble.csv", &["seed", "terminal_energy"]);
    for (r, e) in energies.iter().enumerate() {
        ensemble.push(vec![derive_seed(cfg.seed, r as u64).into(), (*e).into()]);
    }

    let m: Moments = energies.iter().copied().collect();
    let mut summary = summary_table("summary.csv");
    summary.push(vec!["mean_terminal_energy".into(), m.mean().into(), Cell::Empty, Cell::Empty]);
    summary.push(vec!["stdev_terminal_energy".into(), m.stdev().into(), Cell::Empty, Cell::Empty]);
    summary.push(vec![
        "scaled_stdev_terminal_energy".into(),
        m.stdev().map(|s| s * (n as f64).sqrt()).into(),
        Cell::Empty,
        Cell::Empty,
    ]);
    if let Some(mu) = mu_hat {
        let f = FailureReport::from_energies(mu, energies);
        summary.push(vec![labelled("failure_fraction", &format!("mu_hat={mu}")).into(), f.fraction.into(), Cell::Empty, Cell::Empty]);
        summary.push(vec!["failure_std_error".into(), f.std_error.into(), Cell::Empty, Cell::Empty]);
    }
    Ok(vec![trajectory, ensemble, summary])
}

fn stability_gaussian(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let dim: usize = cfg.get("dim")?;
    let degree: u32 = cfg.get("degree")?;
    let outputs: usize = cfg.get("outputs")?;
    let rhos: Vec<f64> = cfg.get_list("rho")?;
    let samples: usize = cfg.get("samples")?;
    let t_grid: Vec<f64> = cfg.get_list("t")?;
    if rhos.is_empty() {
        return Err(LabError::invalid("rho", "need at least one value"));
    }
    let idx = hermite_indices(dim, degree);
    let nr = rhos.len();
    let reports = try_ordered_map(cfg.replicas * nr, |job| {
        let (i, j) = (job / nr, job % nr);
        let pseed = derive_seed(cfg.seed, i as u64);
        let f = random_poly(Basis::Hermite { dim }, outputs, &idx, 1.0, pseed)?;
        Ok(gaussian_pair_stability(&f, rhos[j], &t_grid, samples, derive_seed(pseed, j as u64 + 1))?)
    })?;
    let mut summary = summary_table("summary.csv");
    for (job, r) in reports.iter().enumerate() {
        let ctx = format!("poly={},rho={}", job / nr, r.rho);
        summary.push(vec![
            labelled("mean_displacement", &ctx).into(),
            r.mean_displacement.into(),
            r.displacement_bound.into(),
            margin_sigmas(r.mean_displacement, r.displacement_bound, r.displacement_std_error).into(),
        ]);
        for t in &r.tails {
            summary.push(vec![
                labelled("tail", &format!("{ctx},t={}", t.t)).into(),
                t.frequency.into(),
                t.bound.into(),
                margin_sigmas(t.frequency, t.bound, t.std_error).into(),
            ]);
        }
    }
    Ok(vec![summary])
}

fn stability_boolean(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let m: usize = cfg.get("m")?;
    let degree: usize = cfg.get("degree")?;
    let outputs: usize = cfg.get("outputs")?;
    let bias = BiasVector::uniform(m, cfg.get("bias")?)?;
    let cs: Vec<f64> = cfg.get_list("c")?;
    let mode = match cfg.raw("mode")? {
        "exact" => PathMode::Exact,
        "monte-carlo" => PathMode::MonteCarlo { samples: cfg.get("samples")? },
        other => return Err(LabError::invalid("mode", format!("`{other}`: expected exact or monte-carlo"))),
    };
    if cs.is_empty() {
        return Err(LabError::invalid("c", "need at least one value"));
    }
    let idx = character_indices(m, degree);
    let nc = cs.len();
    let reports = try_ordered_map(cfg.replicas * nc, |job| {
        let (i, j) = (job / nc, job % nc);
        let pseed = derive_seed(cfg.seed, i as u64);
        let f = random_poly(Basis::Boolean(bias.clone()), outputs, &idx, 1.0, pseed)?;
        Ok(boolean_path_stability(&f, cs[j], mode, derive_seed(pseed, j as u64 + 1))?)
    })?;
    let mut summary = summary_table("summary.csv");
    for (job, r) in reports.iter().enumerate() {
        let ctx = format!("poly={},c={}", job / nc, r.c);
        // lower bound: margin measures estimate above bound
        summary.push(vec![
            labelled("no_bad_edge", &ctx).into(),
            r.estimate.into(),
            r.bound.into(),
            margin_sigmas(r.bound, r.estimate, r.std_error).into(),
        ]);
        summary.push(vec![
            labelled("total_influence", &ctx).into(),
            r.influence_lhs.into(),
            (r.degree as f64).into(),
            margin_sigmas(r.influence_lhs, r.degree as f64, 0.0).into(),
        ]);
        if let Some(pot) = r.potential_lhs {
            summary.push(vec![
                labelled("potential", &ctx).into(),
                pot.into(),
                r.potential_rhs.into(),
                margin_sigmas(pot, r.potential_rhs, 0.0).into(),
            ]);
        }
        summary.push(vec![
            labelled("entropy", &ctx).into(),
            r.potential_rhs.into(),
            r.entropy_rhs.into(),
            margin_sigmas(r.potential_rhs, r.entropy_rhs, 0.0).into(),
        ]);
    }
    Ok(vec![summary])
}

fn interpolation(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let p: usize = cfg.get("p")?;
    let n: usize = cfg.get("n")?;
    let l: usize = cfg.get("L")?;
    let rounds: usize = cfg.get("rounds")?;
    let amp_degree: u32 = cfg.get("amp_degree")?;
    let dom = domain(cfg)?;
    let band = cfg.get_band("band")?;
    let lc = langevin_config(cfg, usize::MAX)?;
    let name = cfg.raw("algorithm")?;
    let alg = tensor_algorithm(name, rounds, amp_degree, &lc)
        .ok_or_else(|| LabError::invalid("algorithm", format!("`{name}`: expected power-iteration, amp-lite or langevin")))?;
    if p != 2 && name == "power-iteration" {
        return Err(LabError::invalid("p", "power iteration needs p = 2"));
    }
    let reports = try_ordered_map(cfg.replicas, |r| {
        let r = r as u64;
        let y = PTensor::sample(p, n, instance_seed(cfg.seed, 2 * r))?;
        let yp = PTensor::sample(p, n, instance_seed(cfg.seed, 2 * r + 1))?;
        Ok(interpolation_path_run(&y, &yp, alg.as_ref(), l, dom, band, derive_seed(cfg.seed, r))?)
    })?;
    let mut steps = Table::new("steps.csv", &["replica", "ell", "tau", "overlap", "displacement", "success"]);
    let mut summary = summary_table("summary.csv");
    let mut endpoint = Moments::new();
    for (r, rep) in reports.iter().enumerate() {
        for s in &rep.steps {
            steps.push(vec![r.into(), s.ell.into(), s.tau.into(), s.overlap.into(), s.displacement.into(), s.success.into()]);
        }
        let ctx = format!("replica={r}");
        summary.push(vec![
            labelled("continuity_violations", &ctx).into(),
            rep.continuity_violations.into(),
            0usize.into(),
            Cell::Empty,
        ]);
        summary.push(vec![labelled("band_crossings", &ctx).into(), rep.band_crossings.len().into(), Cell::Empty, Cell::Empty]);
        if let Some(o) = rep.steps.last().and_then(|s| s.overlap) {
            endpoint.push(o);
        }
    }
    summary.push(vec!["mean_endpoint_overlap".into(), endpoint.mean().into(), Cell::Empty, Cell::Empty]);
    Ok(vec![steps, summary])
}

fn first_moment(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let q = FirstMomentQuery {
        n: cfg.get("n")?,
        d: cfg.get("d")?,
        k1: cfg.get("k1")?,
        k2: cfg.get("k2")?,
        l: cfg.get("l")?,
        j1: cfg.get("j1")?,
        j2: cfg.get("j2")?,
    };
    let r = first_moment_t(&q)?;
    let mut t = Table::new("first_moment.csv", &["n", "d", "k1", "k2", "l", "j1", "j2", "exponent_variant", "logT"]);
    t.push(vec![
        q.n.into(),
        q.d.into(),
        q.k1.into(),
        q.k2.into(),
        q.l.into(),
        q.j1.into(),
        q.j2.into(),
        r.variant.as_str().into(),
        r.log_t.into(),
    ]);
    Ok(vec![t])
}

fn ogp_band(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let alpha: f64 = cfg.get("alpha")?;
    let resolution: f64 = cfg.get("resolution")?;
    if !(resolution > 0.0 && resolution < 1.0) {
        return Err(LabError::invalid("resolution", "must lie in (0, 1)"));
    }
    let b = ogp_band_solve(alpha)?;
    let cert = if resolution == b.certificate.resolution { b.certificate.clone() } else { band_certificate(alpha, b.delta, resolution) };
    let mut t = Table::new(
        "ogp_band.csv",
        &["alpha", "delta", "nu_tilde1", "nu_tilde2", "grid_max", "resolution", "certified"],
    );
    t.push(vec![
        alpha.into(),
        b.delta.into(),
        b.band.nu_tilde1.into(),
        b.band.nu_tilde2.into(),
        cert.grid_max.into(),
        resolution.into(),
        (cert.grid_max <= -b.delta).into(),
    ]);
    Ok(vec![t])
}

fn optimize(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let p: usize = cfg.get("p")?;
    let n: usize = cfg.get("n")?;
    let dom = domain(cfg)?;
    let rounds: usize = cfg.get("rounds")?;
    let amp_degree: u32 = cfg.get("amp_degree")?;
    let k: u32 = cfg.get("softmax_k")?;
    let mu: f64 = cfg.get("mu")?;
    let spec = SuccessSpec {
        target: match dom {
            Domain::Ising => Target::Ising { mu },
            _ => Target::Sphere { mu },
        },
        delta: cfg.get("delta")?,
        gamma: cfg.get("gamma")?,
        eta: cfg.get("eta")?,
    };
    spec.validate()?;
    let lc = langevin_config(cfg, usize::MAX)?;
    let method = cfg.raw("method")?.to_string();
    let sinh = EntrywisePoly::truncated_sinh(amp_degree.max(1));
    let runs = try_ordered_map(cfg.replicas, |r| {
        let y = PTensor::sample(p, n, instance_seed(cfg.seed, r as u64))?;
        let omega = derive_seed(cfg.seed, r as u64);
        let (out, ground) = match method.as_str() {
            "power-iteration" => (power_iteration_opt(&y, rounds, omega)?.state.into_values(), None),
            "amp-lite" => (amp_lite_opt(&y, rounds, &sinh, omega)?.state.into_values(), None),
            "langevin" => {
                let alg = tensor_algorithm("langevin", rounds, amp_degree, &lc).expect("known algorithm");
                (alg.run(&y, omega)?, None)
            }
            "exhaustive" => {
                let g = exhaustive_ground_state(&y, dom, omega)?;
                (g.argmax.values().to_vec(), Some(g))
            }
            "softmax" => (softmax_search_poly(&y, k)?.into_values(), None),
            other => {
                return Err(LabError::invalid(
                    "method",
                    format!("`{other}`: expected power-iteration, amp-lite, langevin, exhaustive or softmax"),
                ))
            }
        };
        Ok((y, out, ground))
    })?;
    let replicas: Vec<Replica<'_>> =
        runs.iter().map(|(y, out, _)| Replica { instance: Instance::Tensor(y), output: out.clone() }).collect();
    let report = check_success(&replicas, &spec)?;
    let spec_str = format!(
        "mu={};delta={};gamma={};eta={}",
        cfg.raw("mu")?,
        cfg.raw("delta")?,
        cfg.raw("gamma")?,
        cfg.raw("eta")?
    );
    let mut verdict = Table::new("verdict.csv", &["spec", "domain", "n", "replicas", "success_freq", "normalization", "verdict"]);
    verdict.push(vec![
        spec_str.into(),
        spec.domain_name().into(),
        n.into(),
        report.replicas.into(),
        report.success_freq.into(),
        report.normalization.into(),
        report.verdict.as_str().into(),
    ]);
    let mut values = Table::new("values.csv", &["seed", "value"]);
    let mut ground = Table::new("ground_states.csv", &["n", "p", "domain", "method", "value_per_site", "seed"]);
    for (r, (y, out, g)) in runs.iter().enumerate() {
        let rounded = match dom {
            Domain::Ising => Some(round_sign(out).into_values()),
            _ => round_sphere(out).state().map(|s| s.values().to_vec()),
        };
        let value = rounded.map(|x| energy(y, &x)).transpose()?;
        values.push(vec![instance_seed(cfg.seed, r as u64).into(), value.into()]);
        if let Some(g) = g {
            ground.push(vec![
                g.n.into(),
                g.p.into(),
                g.domain.as_str().into(),
                g.method.as_str().into(),
                g.value_per_site.into(),
                instance_seed(cfg.seed, r as u64).into(),
            ]);
        }
    }
    let mut tables = vec![verdict, values];
    if !ground.rows.is_empty() {
        tables.push(ground);
    }
    Ok(tables)
}

fn graph_algorithm(cfg: &ExperimentConfig) -> Result<Box<dyn GraphAlgorithm + Sync>> {
    match cfg.raw("algorithm")? {
        "greedy" => Ok(Box::new(GreedyIndicator)),
        "local" => Ok(Box::new(LocalIndicator { rule: local_rule(cfg)? })),
        other => Err(LabError::invalid("algorithm", format!("`{other}`: expected greedy or local"))),
    }
}

fn local_rule(cfg: &ExperimentConfig) -> Result<LocalRule> {
    match cfg.raw("rule")? {
        "min-label" => Ok(LocalRule::MinLabel { radius: cfg.get("radius")? }),
        "threshold" => Ok(LocalRule::Threshold { threshold: cfg.get("threshold")? }),
        other => Err(LabError::invalid("rule", format!("`{other}`: expected min-label or threshold"))),
    }
}

fn graph_scan(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let n: usize = cfg.get("n")?;
    let d: f64 = cfg.get("d")?;
    let eta: f64 = cfg.get("eta")?;
    let alg = graph_algorithm(cfg)?;
    let greedy = cfg.raw("algorithm")? == "greedy";
    let rule = local_rule(cfg)?;
    let stride: Option<usize> = cfg.get_opt("stride")?;
    let k: Option<usize> = cfg.get_opt("k")?;
    let scan = ScanConfig {
        k: k.unwrap_or(0),
        samples: cfg.get("scan_samples")?,
        bins: cfg.get("bins")?,
        restarts: cfg.get("restarts")?,
        band: cfg.get_band("band")?,
    };
    let scale = d / (n as f64 * d.ln());
    let runs = try_ordered_map(cfg.replicas, |r| {
        let r = r as u64;
        let g = GraphSample::sample(n, d, instance_seed(cfg.seed, 2 * r))?;
        let gp = GraphSample::sample(n, d, instance_seed(cfg.seed, 2 * r + 1))?;
        let omega = derive_seed(cfg.seed, r);
        let size = if greedy { greedy_indep(&g, omega).len() } else { local_indep(&g, rule, omega).len() };
        let path = boolean_path_run(&g, &gp, alg.as_ref(), eta, stride.unwrap_or(g.m()).max(1), omega)?;
        let overlaps = match k {
            Some(_) => Some(empirical_pair_overlap_scan(&g, &gp, (0, g.m()), &scan, omega)?),
            None => None,
        };
        Ok((size, path, overlaps))
    })?;
    let mut sizes = Table::new("sizes.csv", &["seed", "size", "scaled"]);
    let mut path = Table::new(
        "path.csv",
        &["replica", "position", "set_size", "overlap", "displacement", "symmetric_difference", "big_moves", "success"],
    );
    let mut overlaps = Table::new("overlaps.csv", &["replica", "overlap"]);
    let mut summary = summary_table("summary.csv");
    let mut scaled = Moments::new();
    let (mut checks, mut violations, mut failures) = (0usize, 0usize, 0usize);
    let mut in_band = Moments::new();
    for (r, (size, rep, ov)) in runs.iter().enumerate() {
        sizes.push(vec![instance_seed(cfg.seed, 2 * r as u64).into(), (*size).into(), (*size as f64 * scale).into()]);
        scaled.push(*size as f64 * scale);
        for s in &rep.steps {
            path.push(vec![
                r.into(),
                s.position.into(),
                s.set_size.into(),
                s.overlap.into(),
                s.displacement.into(),
                s.symmetric_difference.into(),
                s.big_moves.into(),
                s.success.into(),
            ]);
        }
        checks += rep.difference_checks;
        violations += rep.difference_violations;
        if let Some(ov) = ov {
            for o in &ov.overlaps {
                overlaps.push(vec![r.into(), (*o).into()]);
            }
            failures += ov.failures;
            if let Some(mb) = ov.mass_in_band {
                in_band.push(mb);
            }
        }
    }
    summary.push(vec!["mean_scaled_size".into(), scaled.mean().into(), Cell::Empty, Cell::Empty]);
    summary.push(vec!["symmetric_difference_checks".into(), checks.into(), Cell::Empty, Cell::Empty]);
    summary.push(vec!["symmetric_difference_violations".into(), violations.into(), 0usize.into(), Cell::Empty]);
    let mut tables = vec![sizes, path];
    if k.is_some() {
        summary.push(vec!["scan_failures".into(), failures.into(), Cell::Empty, Cell::Empty]);
        if in_band.count() > 0 {
            summary.push(vec!["mass_in_band".into(), in_band.mean().into(), Cell::Empty, Cell::Empty]);
        }
        tables.push(overlaps);
    }
    tables.push(summary);
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: Kind, pairs: &[(&str, &str)]) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(kind);
        for (k, v) in pairs {
            c.set(k, v).unwrap();
        }
        c
    }

    #[test]
    fn first_moment_row() {
        let c = cfg(Kind::FirstMoment, &[("n", "5"), ("d", "2.5"), ("k1", "2"), ("k2", "2"), ("l", "1"), ("j1", "0"), ("j2", "0")]);
        let out = run_experiment(&c).unwrap();
        let t = &out.tables[0];
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0][7], Cell::from("diagonal"));
        let Cell::Float(lt) = t.rows[0][8] else { panic!() };
        // 5 * 4 * 3 = 60 ordered (S1, S2) with |S1 ∩ S2| = 1, 2 edges absent
        assert!((lt - (60.0f64.ln() + 2.0 * (0.5f64).ln())).abs() < 1e-12);
    }

    #[test]
    fn ogp_band_row_and_failure() {
        let out = run_experiment(&cfg(Kind::OgpBand, &[("alpha", "1.75")])).unwrap();
        assert_eq!(out.tables[0].rows[0][6], Cell::from(true));
        let err = run_experiment(&cfg(Kind::OgpBand, &[("alpha", "1.70")])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_and_invalid_keys() {
        let e = run_experiment(&ExperimentConfig::new(Kind::Langevin)).unwrap_err();
        assert!(matches!(e, LabError::Missing(k) if k == "n"));
        let e = run_experiment(&cfg(Kind::Optimize, &[("n", "6"), ("mu", "0.1"), ("domain", "torus")])).unwrap_err();
        assert!(matches!(e, LabError::Invalid { key, .. } if key == "domain"));
    }

    #[test]
    fn every_kind_runs_at_small_scale() {
        let mut all = vec![
            cfg(Kind::Langevin, &[("n", "8"), ("sigma", "0.3"), ("horizon", "0.2"), ("mu_hat", "0.1")]),
            cfg(Kind::StabilityGaussian, &[("dim", "2"), ("degree", "2"), ("samples", "2000")]),
            cfg(Kind::StabilityBoolean, &[("m", "5")]),
            cfg(Kind::Interpolation, &[("p", "3"), ("n", "8"), ("L", "4")]),
            cfg(Kind::Optimize, &[("n", "20"), ("mu", "0.5")]),
            cfg(Kind::Optimize, &[("p", "3"), ("n", "8"), ("mu", "0.3"), ("domain", "ising"), ("method", "exhaustive")]),
            cfg(Kind::GraphScan, &[("n", "60"), ("d", "4"), ("k", "5"), ("stride", "300"), ("band", "0.02,0.05")]),
            cfg(Kind::GraphScan, &[("n", "60"), ("d", "4"), ("algorithm", "local")]),
        ];
        for c in &mut all {
            c.replicas = 3;
            let out = run_experiment(c).unwrap_or_else(|e| panic!("{}: {e}", c.kind));
            assert!(out.tables.iter().all(|t| !t.rows.is_empty()), "{}", c.kind);
        }
    }
}
