//! Langevin dynamics `dX = sigma dB + grad H_n(X) dt` on the sphere of
//! radius `sqrt(n)`: tangent-space Euler–Maruyama followed by
//! renormalization.
//!
//! The Brownian increment of step `k` is the `k`-th block of `n` Gaussians of
//! the noise stream of `seed`, so runs with equal seeds share the noise path
//! regardless of the potential.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::{dist, ln, sqrt};
use crate::rng::{derive_seed, uniform_sphere, Stream};
use crate::stats::{frequency_std_error, Moments};
use crate::tensor::{instance_seed, overlap, project_tangent, Interpolated, PTensor, Potential};

#[derive(Clone, Debug, PartialEq)]
pub enum InitialLaw {
    UniformSphere,
    Fixed(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LangevinConfig {
    pub sigma: f64,
    pub horizon: f64,
    pub dt: f64,
    pub init: InitialLaw,
    pub seed: u64,
    /// Keep every `record_every`-th step (and the last one).
    pub record_every: usize,
}

impl Default for LangevinConfig {
    fn default() -> Self {
        Self { sigma: 0.0, horizon: 1.0, dt: 1e-3, init: InitialLaw::UniformSphere, seed: 0, record_every: 10 }
    }
}

impl LangevinConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(invalid("sigma", "must be nonnegative"));
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return Err(invalid("horizon", "must be nonnegative"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("dt", "must be positive"));
        }
        if self.record_every == 0 {
            return Err(invalid("record_every", "must be positive"));
        }
        Ok(())
    }

    /// `round(T / dt)`.
    pub fn steps(&self) -> usize {
        libm::round(self.horizon / self.dt) as usize
    }

    fn initial_state(&self, n: usize) -> Result<Vec<f64>> {
        match &self.init {
            InitialLaw::UniformSphere => Ok(uniform_sphere(n, &mut Stream::new(self.seed, 0))),
            InitialLaw::Fixed(x) => {
                if x.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, actual: x.len() });
                }
                crate::tensor::project_to_sphere(x).ok_or(invalid("init", "initial state is zero"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
}

impl Trajectory {
    pub fn terminal_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn terminal_energy(&self) -> f64 {
        *self.energies.last().expect("trajectory holds the initial state")
    }

    /// `R(X_0, X_t)` per recorded time.
    pub fn overlaps_with_start(&self) -> Vec<f64> {
        let x0 = &self.states[0];
        self.states.iter().map(|x| overlap(x0, x)).collect()
    }
}

struct Stepper {
    noise: Stream,
    xi: Vec<f64>,
    sqrt_n: f64,
}

impl Stepper {
    fn new(seed: u64, n: usize) -> Self {
        Self { noise: Stream::new(seed, 1), xi: vec![0.0; n], sqrt_n: sqrt(n as f64) }
    }

    fn draw(&mut self) {
        self.noise.fill_gaussian(&mut self.xi);
    }

    /// One step from `x` using the current increment.
    fn advance<P: Potential + ?Sized>(&self, pot: &P, x: &mut [f64], sigma: f64, dt: f64, step: usize) -> Result<()> {
        let g = pot.tangent_gradient(x);
        let mut xi = self.xi.clone();
        project_tangent(x, &mut xi);
        let s = sigma * sqrt(dt);
        for ((xk, gk), nk) in x.iter_mut().zip(&g).zip(&xi) {
            *xk += dt * gk + s * nk;
        }
        let nx = crate::math::norm(x);
        if !nx.is_finite() || nx == 0.0 {
            return Err(Error::NonFinite { step });
        }
        let r = self.sqrt_n / nx;
        x.iter_mut().for_each(|v| *v *= r);
        Ok(())
    }
}

pub fn langevin_simulate<P: Potential + ?Sized>(pot: &P, cfg: &LangevinConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let n = pot.sites();
    let mut x = cfg.initial_state(n)?;
    let steps = cfg.steps();
    let mut traj = Trajectory { times: vec![0.0], states: vec![x.clone()], energies: vec![pot.energy(&x)] };
    let mut stepper = Stepper::new(cfg.seed, n);
    for k in 1..=steps {
        stepper.draw();
        stepper.advance(pot, &mut x, cfg.sigma, cfg.dt, k)?;
        if k % cfg.record_every == 0 || k == steps {
            let e = pot.energy(&x);
            if !e.is_finite() {
                return Err(Error::NonFinite { step: k });
            }
            traj.times.push(k as f64 * cfg.dt);
            traj.states.push(x.clone());
            traj.energies.push(e);
        }
    }
    Ok(traj)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoupledReport {
    pub taus: Vec<f64>,
    /// `sup_s |X_s^{tau_i} - X_s^{tau_{i+1}}|` for each consecutive pair.
    pub distances: Vec<f64>,
    pub max_distance: f64,
    /// `max |tau_{i+1} - tau_i|`.
    pub mesh: f64,
    /// Smallest `C >= 0` with `max_distance <= T e^{CT} mesh`.
    pub fitted_c: f64,
}

/// Runs Langevin on `Y_tau` for every `tau` in the partition with shared
/// initial state and noise, in lockstep.
pub fn coupled_stability_run(y: &PTensor, y_prime: &PTensor, taus: &[f64], cfg: &LangevinConfig) -> Result<CoupledReport> {
    cfg.validate()?;
    if taus.len() < 2 {
        return Err(invalid("taus", "need at least two partition points"));
    }
    if taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("taus", "partition must be strictly increasing"));
    }
    if taus[0] < 0.0 || *taus.last().unwrap() > core::f64::consts::FRAC_PI_2 {
        return Err(invalid("taus", "partition must lie in [0, pi/2]"));
    }
    let n = y.sites();
    let pots: Vec<Interpolated> = taus.iter().map(|&tau| Interpolated { y, y_prime, tau }).collect();
    let x0 = cfg.initial_state(n)?;
    let mut xs: Vec<Vec<f64>> = vec![x0; taus.len()];
    let mut distances = vec![0.0f64; taus.len() - 1];
    let mut stepper = Stepper::new(cfg.seed, n);
    for k in 1..=cfg.steps() {
        stepper.draw();
        for (x, pot) in xs.iter_mut().zip(&pots) {
            stepper.advance(pot, x, cfg.sigma, cfg.dt, k)?;
        }
        for (i, d) in distances.iter_mut().enumerate() {
            *d = d.max(dist(&xs[i], &xs[i + 1]));
        }
    }
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    let mesh = taus.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let t = cfg.horizon;
    let fitted_c = if t > 0.0 && max_distance > 0.0 { (ln(max_distance / (t * mesh)) / t).max(0.0) } else { 0.0 };
    Ok(CoupledReport { taus: taus.to_vec(), distances, max_distance, mesh, fitted_c })
}

/// `L + 1` equally spaced points of `[0, pi/2]`.
pub fn uniform_partition(l: usize) -> Vec<f64> {
    let h = core::f64::consts::FRAC_PI_2;
    (0..=l).map(|i| if i == l { h } else { h * i as f64 / l as f64 }).collect()
}

/// Source of the instance for each replica.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Disorder {
    Gaussian,
    Zero,
}

fn replica_tensor(p: usize, n: usize, disorder: Disorder, master: u64, r: u64) -> Result<PTensor> {
    match disorder {
        Disorder::Gaussian => PTensor::sample(p, n, instance_seed(master, r)),
        Disorder::Zero => PTensor::zeros(p, n),
    }
}

fn replica_config(cfg: &LangevinConfig, r: u64) -> LangevinConfig {
    LangevinConfig { seed: derive_seed(cfg.seed, r), record_every: usize::MAX, ..cfg.clone() }
}

/// Terminal energy of replica `r` of an ensemble with master seed
/// `cfg.seed`: independent instance and noise per replica.
pub fn replica_terminal_energy(p: usize, n: usize, disorder: Disorder, cfg: &LangevinConfig, r: u64) -> Result<f64> {
    let y = replica_tensor(p, n, disorder, cfg.seed, r)?;
    Ok(langevin_simulate(&y, &replica_config(cfg, r))?.terminal_energy())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationReport {
    pub n: usize,
    pub replicas: usize,
    pub mean: f64,
    /// `None` for a single replica.
    pub stdev: Option<f64>,
    pub terminal_energies: Vec<f64>,
    /// Set when `stdev sqrt(n)` exceeds the flag multiple of the reference
    /// constant, or when the ensemble is degenerate.
    pub flagged: bool,
}

impl ConcentrationReport {
    pub fn from_energies(n: usize, terminal_energies: Vec<f64>) -> Self {
        let m: Moments = terminal_energies.iter().copied().collect();
        let stdev = m.stdev();
        Self {
            n,
            replicas: terminal_energies.len(),
            mean: m.mean(),
            flagged: stdev.is_none(),
            stdev,
            terminal_energies,
        }
    }

    /// `stdev sqrt(n)`, constant in `n` under `exp(-c eps^2 n)` tails.
    pub fn scaled_stdev(&self) -> Option<f64> {
        self.stdev.map(|s| s * sqrt(self.n as f64))
    }
}

/// Terminal-energy statistics over `replicas` independent `(Y, noise)`
/// draws.
pub fn energy_concentration(p: usize, n: usize, replicas: usize, disorder: Disorder, cfg: &LangevinConfig) -> Result<ConcentrationReport> {
    if replicas == 0 {
        return Err(Error::Empty("replicas"));
    }
    let e = (0..replicas as u64)
        .map(|r| replica_terminal_energy(p, n, disorder, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcentrationReport::from_energies(n, e))
}

/// Fits the sub-Gaussian constant as the mean of `stdev sqrt(n)` across
/// sizes and flags sizes exceeding `multiple` times it.
pub fn flag_concentration(reports: &mut [ConcentrationReport], multiple: f64) -> Option<f64> {
    let scaled: Vec<f64> = reports.iter().filter_map(|r| r.scaled_stdev()).collect();
    if scaled.is_empty() {
        return None;
    }
    let fit = scaled.iter().sum::<f64>() / scaled.len() as f64;
    for r in reports.iter_mut() {
        r.flagged = match r.scaled_stdev() {
            Some(s) => s > multiple * fit,
            None => true,
        };
    }
    Some(fit)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FailureReport {
    pub mu_hat: f64,
    pub fraction: f64,
    pub std_error: f64,
    pub terminal_energies: Vec<f64>,
}

impl FailureReport {
    pub fn from_energies(mu_hat: f64, terminal_energies: Vec<f64>) -> Self {
        let below = terminal_energies.iter().filter(|&&e| e <= mu_hat).count();
        let count = terminal_energies.len();
        let fraction = if count == 0 { 0.0 } else { below as f64 / count as f64 };
        Self { mu_hat, fraction, std_error: frequency_std_error(fraction, count as u64), terminal_energies }
    }
}

/// Frequency of `H_n(X_T; Y) <= mu_hat` from uniform starts.
pub fn langevin_failure_experiment(p: usize, n: usize, replicas: usize, cfg: &LangevinConfig, mu_hat: f64) -> Result<FailureReport> {
    let cfg = LangevinConfig { init: InitialLaw::UniformSphere, ..cfg.clone() };
    let e = (0..replicas as u64)
        .map(|r| replica_terminal_energy(p, n, Disorder::Gaussian, &cfg, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(FailureReport::from_energies(mu_hat, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{restarted_ascent, AscentConfig, Flat, SPHERE_TOL};

    fn diag(n: usize, top: f64) -> PTensor {
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            e[i * n + i] = if i == 0 { top } else { 1.0 };
        }
        PTensor::from_dense(2, n, e).unwrap()
    }

    #[test]
    fn zero_drift_without_noise_is_stationary() {
        let y = PTensor::zeros(3, 6).unwrap();
        let cfg = LangevinConfig { horizon: 0.5, seed: 3, ..Default::default() };
        let t = langevin_simulate(&y, &cfg).unwrap();
        assert!(t.states.iter().all(|x| x == &t.states[0]));
        assert!(t.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn gradient_flow_finds_top_eigenvector() {
        let n = 5;
        let y = diag(n, 2.0);
        let cfg = LangevinConfig { horizon: 400.0, dt: 0.05, seed: 1, ..Default::default() };
        let t = langevin_simulate(&y, &cfg).unwrap();
        let x = t.terminal_state();
        assert!((x[0].abs() - (n as f64).sqrt()).abs() < 1e-6);
        // H = x^T Y x / n^{3/2} at x = sqrt(n) e_1
        assert!((t.terminal_energy() - 2.0 / (n as f64).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn gradient_flow_energy_is_monotone() {
        let y = PTensor::sample(4, 12, 5).unwrap();
        let cfg = LangevinConfig { horizon: 2.0, dt: 1e-2, record_every: 1, seed: 7, ..Default::default() };
        let t = langevin_simulate(&y, &cfg).unwrap();
        assert!(t.energies.windows(2).all(|w| w[1] >= w[0] - 10.0 * cfg.dt * cfg.dt));
        let n = 12f64.sqrt();
        for x in &t.states {
            assert!((crate::math::norm(x) - n).abs() <= SPHERE_TOL * n);
        }
    }

    #[test]
    fn noise_path_is_shared_across_potentials() {
        let n = 8;
        let cfg = LangevinConfig { sigma: 1.0, horizon: 0.1, record_every: 1, seed: 9, ..Default::default() };
        let a = langevin_simulate(&Flat(n), &cfg).unwrap();
        let b = langevin_simulate(&Flat(n), &cfg).unwrap();
        assert_eq!(a, b);
        // the noise of step k does not depend on the drift
        let y = PTensor::sample(3, n, 1).unwrap();
        let mut s1 = Stepper::new(9, n);
        let mut s2 = Stepper::new(9, n);
        for _ in 0..5 {
            s1.draw();
            s2.draw();
        }
        assert_eq!(s1.xi, s2.xi);
        let c = langevin_simulate(&y, &cfg).unwrap();
        assert_eq!(c.states[0], a.states[0]);
    }

    #[test]
    fn coupled_runs() {
        let y = PTensor::sample(3, 8, 1).unwrap();
        let cfg = LangevinConfig { sigma: 0.5, horizon: 0.5, dt: 1e-2, seed: 2, ..Default::default() };
        let same = coupled_stability_run(&y, &y, &[0.0, core::f64::consts::FRAC_PI_2], &cfg).unwrap();
        assert_eq!(same.max_distance, 0.0);
        assert!(coupled_stability_run(&y, &y, &[0.3, 0.3], &cfg).is_err());

        let z = PTensor::sample(4, 14, 2).unwrap();
        let w = PTensor::sample(4, 14, 3).unwrap();
        let cfg = LangevinConfig { sigma: 0.0, horizon: 5.0, dt: 1e-2, seed: 4, ..Default::default() };
        let r = coupled_stability_run(&z, &w, &uniform_partition(16), &cfg).unwrap();
        assert!(r.max_distance.is_finite() && r.max_distance < 2.0 * 14f64.sqrt());
        let r2 = coupled_stability_run(&z, &w, &uniform_partition(32), &cfg).unwrap();
        let ratio = r2.max_distance / r.max_distance;
        assert!((0.25..=1.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn identical_potentials_zero_distance() {
        // one partition point repeated through identical potentials
        let y = PTensor::sample(3, 6, 1).unwrap();
        let cfg = LangevinConfig { sigma: 1.0, horizon: 0.2, seed: 5, ..Default::default() };
        let a = langevin_simulate(&Interpolated { y: &y, y_prime: &y, tau: 0.4 }, &cfg).unwrap();
        let b = langevin_simulate(&Interpolated { y: &y, y_prime: &y, tau: 0.4 }, &cfg).unwrap();
        assert_eq!(dist(a.terminal_state(), b.terminal_state()), 0.0);
    }

    #[test]
    fn concentration_examples() {
        let cfg = LangevinConfig { horizon: 0.2, dt: 1e-2, seed: 1, ..Default::default() };
        let r = energy_concentration(3, 5, 4, Disorder::Zero, &cfg).unwrap();
        assert_eq!(r.stdev, Some(0.0));
        let one = energy_concentration(3, 5, 1, Disorder::Gaussian, &cfg).unwrap();
        assert_eq!(one.stdev, None);
        assert!(one.flagged);

        let cfg = LangevinConfig { sigma: 1.0, horizon: 0.5, dt: 1e-2, seed: 11, ..Default::default() };
        let sd: Vec<f64> = [6, 12, 24]
            .iter()
            .map(|&n| energy_concentration(4, n, 40, Disorder::Gaussian, &cfg).unwrap().stdev.unwrap())
            .collect();
        assert!(sd[0] > sd[1] && sd[1] > sd[2], "{sd:?}");
    }

    #[test]
    fn failure_fraction_limits() {
        let cfg = LangevinConfig { sigma: 1.0, horizon: 0.1, dt: 1e-2, seed: 2, ..Default::default() };
        assert_eq!(langevin_failure_experiment(4, 6, 5, &cfg, f64::INFINITY).unwrap().fraction, 1.0);
        assert_eq!(langevin_failure_experiment(4, 6, 5, &cfg, f64::NEG_INFINITY).unwrap().fraction, 0.0);
    }

    #[test]
    fn langevin_fails_to_reach_near_ground_state() {
        let (p, n) = (4, 16);
        let cfg = LangevinConfig { sigma: 1.0, horizon: 10.0, dt: 1e-2, seed: 21, ..Default::default() };
        let e: Vec<f64> = (0..20u64)
            .map(|r| {
                let y = replica_tensor(p, n, Disorder::Gaussian, cfg.seed, r).unwrap();
                let (best, _) = restarted_ascent(&y, &AscentConfig { restarts: 5, ..Default::default() }, r);
                let t = langevin_simulate(&y, &replica_config(&cfg, r)).unwrap().terminal_energy();
                (t <= best - 0.05) as u8 as f64
            })
            .collect();
        let frac = e.iter().sum::<f64>() / e.len() as f64;
        assert!(frac >= 0.9, "{frac}");
    }

    #[test]
    fn diffusion_forgets_start() {
        let n = 10;
        let cfg = LangevinConfig { sigma: 1.0, horizon: 20.0, dt: 1e-2, record_every: 100, ..Default::default() };
        let mut late = Moments::new();
        for s in 0..200 {
            let t = langevin_simulate(&Flat(n), &LangevinConfig { seed: s, ..cfg.clone() }).unwrap();
            let r = *t.overlaps_with_start().last().unwrap();
            late.push(n as f64 * r * r);
        }
        assert!((late.mean() - 1.0).abs() < 5.0 * late.std_error(), "{}", late.mean());
    }

    #[test]
    fn time_step_refinement_is_first_order() {
        let y = PTensor::sample(4, 10, 8).unwrap();
        let run = |dt: f64| {
            let cfg = LangevinConfig { horizon: 5.0, dt, seed: 3, ..Default::default() };
            langevin_simulate(&y, &cfg).unwrap().terminal_energy()
        };
        let (a, b, c) = (run(0.04), run(0.02), run(0.01));
        let ratio = (a - b).abs() / (b - c).abs();
        assert!((0.3..=3.0).contains(&ratio), "ratio {ratio}");
    }
}
