//! Stability of low-degree polynomials under correlated Gaussian pairs and
//! along Boolean resampling paths, and runs of algorithms along
//! interpolation paths.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::{langevin_simulate, uniform_partition, LangevinConfig};
use crate::error::{invalid, Error, Result};
use crate::graph::{greedy_indep, local_indep, resample_path, GraphSample, LocalRule};
use crate::math::{abs, dist, dot, exp, ln, pow, sqrt, E, PI};
use crate::poly::{binary_entropy, Basis, FourierPoly};
use crate::rng::Stream;
use crate::rounding::{round_indep, round_sign, round_sphere, SphereRounding};
use crate::stats::{frequency_std_error, Moments};
use crate::tensor::{amp_lite_opt, interpolate, overlap, power_iteration_opt, Domain, EntrywisePoly, PTensor};

/// Tolerance on `E|f|^2 = 1` for normalized inputs.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Largest `m` for exact path enumeration.
pub const EXACT_PATH_LIMIT: usize = 20;

/// `(6e)^D`, the smallest admissible tail level.
pub fn tail_threshold(degree: u32) -> f64 {
    pow(6.0 * E, degree as f64)
}

/// `exp(-(D / 3e) t^{1/D})`.
pub fn tail_bound(degree: u32, t: f64) -> f64 {
    let d = degree as f64;
    exp(-(d / (3.0 * E)) * pow(t, 1.0 / d))
}

fn effective_degree(f: &FourierPoly) -> u32 {
    f.degree().max(1)
}

fn require_gaussian(f: &FourierPoly) -> Result<()> {
    match f.basis() {
        Basis::Hermite { .. } => Ok(()),
        Basis::Boolean(_) => Err(Error::BasisMismatch("needs a Gaussian (Hermite) polynomial")),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub t: f64,
    /// Frequency of `|f(X) - f(Y)|^2 >= 2t(1 - rho^D)`.
    pub frequency: f64,
    pub std_error: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianStabilityReport {
    pub rho: f64,
    pub degree: u32,
    pub samples: usize,
    pub tails: Vec<TailRow>,
    pub mean_displacement: f64,
    pub displacement_std_error: f64,
    /// `2(1 - rho^D)`.
    pub displacement_bound: f64,
}

impl GaussianStabilityReport {
    /// Every tail frequency and the mean displacement within bound plus
    /// `sigmas` standard errors.
    pub fn holds(&self, sigmas: f64) -> bool {
        self.tails.iter().all(|r| r.frequency <= r.bound + sigmas * r.std_error)
            && self.mean_displacement <= self.displacement_bound + sigmas * self.displacement_std_error
    }
}

/// Default tail levels `{1, 2, 4} (6e)^D`.
pub fn default_t_grid(degree: u32) -> Vec<f64> {
    let t0 = tail_threshold(degree);
    vec![t0, 2.0 * t0, 4.0 * t0]
}

/// Monte Carlo over `rho`-correlated pairs `(X, Y)` for a Gaussian polynomial
/// with `E|f|^2 = 1`. The degree used in the bounds is `max(D, 1)`. Pairs
/// with `f(X) = f(Y)` never count as tail events.
pub fn gaussian_pair_stability(f: &FourierPoly, rho: f64, t_grid: &[f64], n_samples: usize, seed: u64) -> Result<GaussianStabilityReport> {
    require_gaussian(f)?;
    let norm = f.parseval_norm();
    if abs(norm - 1.0) > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm });
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(invalid("rho", "must lie in [0, 1]"));
    }
    if n_samples == 0 {
        return Err(Error::Empty("samples"));
    }
    let degree = effective_degree(f);
    let grid = if t_grid.is_empty() { default_t_grid(degree) } else { t_grid.to_vec() };
    let t0 = tail_threshold(degree);
    if grid.iter().any(|&t| !(t >= t0 * (1.0 - 1e-12))) {
        return Err(invalid("t", "tail levels must be at least (6e)^D"));
    }
    let shrink = 1.0 - pow(rho, degree as f64);
    let levels: Vec<f64> = grid.iter().map(|t| 2.0 * t * shrink).collect();
    let dim = f.input_dim();
    let mut rng = Stream::new(seed, 0);
    let (mut y, mut z, mut x) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let (mut fy, mut fx) = (vec![0.0; f.n_out()], vec![0.0; f.n_out()]);
    let s = sqrt(1.0 - rho * rho);
    let mut disp = Moments::new();
    let mut hits = vec![0u64; grid.len()];
    for _ in 0..n_samples {
        rng.fill_gaussian(&mut y);
        rng.fill_gaussian(&mut z);
        for ((xi, yi), zi) in x.iter_mut().zip(&y).zip(&z) {
            *xi = rho * yi + s * zi;
        }
        f.eval_into(&y, &mut fy)?;
        f.eval_into(&x, &mut fx)?;
        let d2: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
        disp.push(d2);
        if d2 > 0.0 {
            for (h, &lv) in hits.iter_mut().zip(&levels) {
                if d2 >= lv {
                    *h += 1;
                }
            }
        }
    }
    let tails = grid
        .iter()
        .zip(&hits)
        .map(|(&t, &h)| {
            let freq = h as f64 / n_samples as f64;
            TailRow { t, frequency: freq, std_error: frequency_std_error(freq, n_samples as u64), bound: tail_bound(degree, t) }
        })
        .collect();
    Ok(GaussianStabilityReport {
        rho,
        degree,
        samples: n_samples,
        tails,
        mean_displacement: disp.mean(),
        displacement_std_error: disp.std_error(),
        displacement_bound: 2.0 * shrink,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub q: u32,
    /// Estimate of `E|f|^{2q}`.
    pub lhs: f64,
    pub std_error: f64,
    /// `[3(q-1)]^{qD} (E|f|^2)^q`.
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentTailReport {
    pub degree: u32,
    pub t: f64,
    /// Frequency of `|f|^2 >= t E|f|^2`.
    pub frequency: f64,
    pub std_error: f64,
    pub bound: f64,
    pub moments: Vec<MomentRow>,
}

impl MomentTailReport {
    pub fn holds(&self, sigmas: f64) -> bool {
        self.frequency <= self.bound + sigmas * self.std_error
            && self.moments.iter().all(|m| m.lhs - sigmas * m.std_error <= m.rhs)
    }
}

/// Norm tail of a vector-valued Gaussian polynomial at level `t`, and the
/// `2q`-th norm moments for `q in {2, 3}`.
pub fn moment_tail_check(f: &FourierPoly, t: f64, n_samples: usize, seed: u64) -> Result<MomentTailReport> {
    require_gaussian(f)?;
    if n_samples == 0 {
        return Err(Error::Empty("samples"));
    }
    let degree = f.degree();
    let second = f.parseval_norm();
    let mut rng = Stream::new(seed, 0);
    let mut y = vec![0.0; f.input_dim()];
    let mut fy = vec![0.0; f.n_out()];
    let qs = [2u32, 3];
    let mut mom = [Moments::new(), Moments::new()];
    let mut hits = 0u64;
    for _ in 0..n_samples {
        rng.fill_gaussian(&mut y);
        f.eval_into(&y, &mut fy)?;
        let sq = dot(&fy, &fy);
        if sq >= t * second && sq > 0.0 && !(degree == 0) {
            hits += 1;
        }
        for (m, &q) in mom.iter_mut().zip(&qs) {
            m.push(pow(sq, q as f64));
        }
    }
    let freq = hits as f64 / n_samples as f64;
    let moments = qs
        .iter()
        .zip(&mom)
        .map(|(&q, m)| MomentRow {
            q,
            lhs: m.mean(),
            std_error: m.std_error(),
            rhs: pow(3.0 * (q as f64 - 1.0), (q * degree) as f64) * pow(second, q as f64),
        })
        .collect();
    Ok(MomentTailReport {
        degree,
        t,
        frequency: freq,
        std_error: frequency_std_error(freq, n_samples as u64),
        bound: tail_bound(degree.max(1), t),
        moments,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    Exact,
    MonteCarlo { samples: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathStabilityReport {
    pub c: f64,
    pub degree: u32,
    pub lambda: f64,
    pub exact: bool,
    /// `P(Y -> Y' has no c-bad edge)`.
    pub estimate: f64,
    pub std_error: f64,
    /// `lambda^{4D/c}`.
    pub bound: f64,
    /// `P(B_i)`: flipping coordinate `i` of `Y` is a `c`-bad edge.
    pub bad_probs: Vec<f64>,
    /// `(c/2) sum (p_i ^ 1-p_i) P(B_i)`, at most `D`.
    pub influence_lhs: f64,
    /// `-E log q(Y)`; exact mode only.
    pub potential_lhs: Option<f64>,
    /// `sum S(p_i) P(B_i)`.
    pub potential_rhs: f64,
    /// `2 log(1/lambda) sum (p_i ^ 1-p_i) P(B_i)`.
    pub entropy_rhs: f64,
    /// `S(p_i) <= 2 (p_i ^ 1-p_i) log(1/lambda)` for every `i`.
    pub entropy_bound_holds: bool,
}

const ROUNDOFF: f64 = 1e-12;

fn le(a: f64, b: f64) -> bool {
    a <= b + ROUNDOFF * b.abs().max(1.0)
}

impl PathStabilityReport {
    pub fn stability_holds(&self) -> bool {
        if self.exact {
            le(self.bound, self.estimate)
        } else {
            self.bound <= self.estimate + 3.0 * self.std_error
        }
    }

    pub fn influence_holds(&self) -> bool {
        le(self.influence_lhs, self.degree as f64)
    }

    pub fn potential_holds(&self) -> bool {
        self.potential_lhs.is_none_or(|l| le(l, self.potential_rhs))
    }

    pub fn entropy_holds(&self) -> bool {
        self.entropy_bound_holds && le(self.potential_rhs, self.entropy_rhs)
    }
}

/// `c`-bad: `|f(x) - f(y)|^2 >= c E|f|^2` with `f(x) != f(y)`.
#[inline]
fn is_bad(d2: f64, level: f64) -> bool {
    d2 > 0.0 && d2 >= level
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Probability of a bad-edge-free path `Y -> Y'`, with the per-edge
/// quantities entering its lower bound.
///
/// Exact mode enumerates `{0,1}^m` once and computes
/// `q(x) = P(x -> Y' has no bad edge)` by conditioning on the coordinates in
/// path order: with `Q_m = 1`,
/// `Q_k(z) = P(Y'_k = z_k) Q_{k+1}(z) + P(Y'_k != z_k) 1{good} Q_{k+1}(z ^ e_k)`
/// and `q = Q_0`.
pub fn boolean_path_stability(f: &FourierPoly, c: f64, mode: PathMode, seed: u64) -> Result<PathStabilityReport> {
    let Basis::Boolean(bias) = f.basis() else {
        return Err(Error::BasisMismatch("needs a Boolean polynomial"));
    };
    if !(c > 0.0) {
        return Err(invalid("c", "must be positive"));
    }
    let m = bias.len();
    let p = bias.as_slice();
    let lambda = bias.lambda();
    let degree = f.degree();
    let level = c * f.parseval_norm();
    let k = f.n_out();
    let (estimate, std_error, bad_probs, potential_lhs, exact) = match mode {
        PathMode::Exact => {
            if m > EXACT_PATH_LIMIT {
                return Err(Error::TooLarge { size: m, bound: EXACT_PATH_LIMIT });
            }
            let size = 1usize << m;
            let mut values = vec![0.0; size * k];
            for (x, chunk) in values.chunks_exact_mut(k.max(1)).enumerate().take(size) {
                f.eval_bits(x as u64, chunk)?;
            }
            let val = |x: usize| &values[x * k..(x + 1) * k];
            let mut weight = vec![1.0; size];
            for (x, w) in weight.iter_mut().enumerate() {
                for (i, &pi) in p.iter().enumerate() {
                    *w *= if x >> i & 1 == 1 { pi } else { 1.0 - pi };
                }
            }
            // bad[x] bit i: edge (x, x ^ e_i) is bad
            let mut bad = vec![0u32; size];
            for x in 0..size {
                for i in 0..m {
                    let y = x ^ (1 << i);
                    if y > x && is_bad(sq_dist(val(x), val(y)), level) {
                        bad[x] |= 1 << i;
                        bad[y] |= 1 << i;
                    }
                }
            }
            let bad_probs: Vec<f64> = (0..m)
                .map(|i| (0..size).filter(|&x| bad[x] >> i & 1 == 1).map(|x| weight[x]).sum())
                .collect();
            let mut q = vec![1.0; size];
            for i in (0..m).rev() {
                let pi = p[i];
                for x in 0..size {
                    if x >> i & 1 == 1 {
                        continue;
                    }
                    let y = x | 1 << i;
                    let good = bad[x] >> i & 1 == 0;
                    let (qx, qy) = (q[x], q[y]);
                    let g = if good { 1.0 } else { 0.0 };
                    // z_i = 0 stays with prob 1 - p_i, flips with prob p_i
                    q[x] = (1.0 - pi) * qx + pi * g * qy;
                    q[y] = pi * qy + (1.0 - pi) * g * qx;
                }
            }
            let est: f64 = weight.iter().zip(&q).map(|(w, v)| w * v).sum();
            let pot: f64 = -weight.iter().zip(&q).map(|(w, v)| w * ln(*v)).sum::<f64>();
            (est, 0.0, bad_probs, Some(pot), true)
        }
        PathMode::MonteCarlo { samples } => {
            if samples == 0 {
                return Err(Error::Empty("samples"));
            }
            let mut rng = Stream::new(seed, 0);
            let mut ok = 0u64;
            let mut bad_hits = vec![0u64; m];
            let mut y = vec![0.0; m];
            let mut y2 = vec![0.0; m];
            let (mut a, mut b) = (vec![0.0; k], vec![0.0; k]);
            for _ in 0..samples {
                for i in 0..m {
                    y[i] = rng.bernoulli(p[i]) as u8 as f64;
                    y2[i] = rng.bernoulli(p[i]) as u8 as f64;
                }
                f.eval_into(&y, &mut a)?;
                for i in 0..m {
                    let mut z = y.clone();
                    z[i] = 1.0 - z[i];
                    f.eval_into(&z, &mut b)?;
                    if is_bad(sq_dist(&a, &b), level) {
                        bad_hits[i] += 1;
                    }
                }
                let mut z = y.clone();
                let mut clean = true;
                for i in 0..m {
                    if z[i] == y2[i] {
                        continue;
                    }
                    z[i] = y2[i];
                    f.eval_into(&z, &mut b)?;
                    if is_bad(sq_dist(&a, &b), level) {
                        clean = false;
                        break;
                    }
                    core::mem::swap(&mut a, &mut b);
                }
                ok += clean as u64;
            }
            let est = ok as f64 / samples as f64;
            let probs = bad_hits.iter().map(|&h| h as f64 / samples as f64).collect();
            (est, frequency_std_error(est, samples as u64), probs, None, false)
        }
    };
    let small: Vec<f64> = p.iter().map(|&pi| pi.min(1.0 - pi)).collect();
    let weighted: f64 = small.iter().zip(&bad_probs).map(|(s, b)| s * b).sum();
    let potential_rhs: f64 = p.iter().zip(&bad_probs).map(|(&pi, b)| binary_entropy(pi) * b).sum();
    let log_inv = ln(1.0 / lambda);
    let entropy_bound_holds = p.iter().zip(&small).all(|(&pi, &s)| le(binary_entropy(pi), 2.0 * s * log_inv));
    Ok(PathStabilityReport {
        c,
        degree,
        lambda,
        exact,
        estimate,
        std_error,
        bound: pow(lambda, 4.0 * degree as f64 / c),
        bad_probs,
        influence_lhs: 0.5 * c * weighted,
        potential_lhs,
        potential_rhs,
        entropy_rhs: 2.0 * log_inv * weighted,
        entropy_bound_holds,
    })
}

/// A procedure producing a raw output from a tensor and internal seed `omega`.
pub trait TensorAlgorithm {
    fn name(&self) -> &'static str;
    fn run(&self, y: &PTensor, omega: u64) -> Result<Vec<f64>>;
}

#[derive(Clone, Copy, Debug)]
pub struct PowerIteration {
    pub rounds: usize,
}

impl TensorAlgorithm for PowerIteration {
    fn name(&self) -> &'static str {
        "power-iteration"
    }

    fn run(&self, y: &PTensor, omega: u64) -> Result<Vec<f64>> {
        Ok(power_iteration_opt(y, self.rounds, omega)?.state.into_values())
    }
}

#[derive(Clone, Debug)]
pub struct AmpLite {
    pub iterations: usize,
    pub nonlinearity: EntrywisePoly,
}

impl TensorAlgorithm for AmpLite {
    fn name(&self) -> &'static str {
        "amp-lite"
    }

    fn run(&self, y: &PTensor, omega: u64) -> Result<Vec<f64>> {
        Ok(amp_lite_opt(y, self.iterations, &self.nonlinearity, omega)?.state.into_values())
    }
}

/// Terminal state of Langevin dynamics; `omega` seeds start and noise.
#[derive(Clone, Debug)]
pub struct LangevinTerminal {
    pub config: LangevinConfig,
}

impl TensorAlgorithm for LangevinTerminal {
    fn name(&self) -> &'static str {
        "langevin"
    }

    fn run(&self, y: &PTensor, omega: u64) -> Result<Vec<f64>> {
        let cfg = LangevinConfig { seed: omega, record_every: usize::MAX, ..self.config.clone() };
        Ok(langevin_simulate(y, &cfg)?.terminal_state().to_vec())
    }
}

/// A Gaussian polynomial in the `n^p` tensor entries.
#[derive(Clone, Debug)]
pub struct PolynomialMap {
    pub f: FourierPoly,
}

impl TensorAlgorithm for PolynomialMap {
    fn name(&self) -> &'static str {
        "polynomial"
    }

    fn run(&self, y: &PTensor, _omega: u64) -> Result<Vec<f64>> {
        require_gaussian(&self.f)?;
        self.f.eval(&y.to_dense()?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathStep {
    pub ell: usize,
    pub tau: f64,
    pub success: bool,
    pub error: Option<String>,
    /// `R(x_0, x_ell)`.
    pub overlap: Option<f64>,
    /// `|f(Y_{tau_ell}) - f(Y_{tau_{ell+1}})|`, raw outputs; `None` on the
    /// last step or on failure.
    pub displacement: Option<f64>,
    /// `|x_ell - x_{ell+1}|`, rounded outputs.
    pub rounded_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterpolationRunReport {
    pub l: usize,
    pub algorithm: &'static str,
    pub domain: Domain,
    pub steps: Vec<PathStep>,
    /// Steps at which `|R_l - R_{l+1}| <= |x_l - x_{l+1}| / sqrt(n)` was
    /// checked, and how often it failed.
    pub continuity_checks: usize,
    pub continuity_violations: usize,
    /// `ell` with `R_ell` and `R_{ell+1}` on opposite sides of the band.
    pub band_crossings: Vec<usize>,
}

fn crosses(a: f64, b: f64, band: (f64, f64)) -> bool {
    (a >= band.1 && b <= band.0) || (a <= band.0 && b >= band.1)
}

/// Runs `alg` on `Y_{tau_0}, ..., Y_{tau_L}` with the same `omega`, rounds
/// to `domain`, and records overlaps with the first output.
pub fn interpolation_path_run(
    y: &PTensor,
    y_prime: &PTensor,
    alg: &dyn TensorAlgorithm,
    l: usize,
    domain: Domain,
    band: Option<(f64, f64)>,
    omega: u64,
) -> Result<InterpolationRunReport> {
    if l == 0 {
        return Err(invalid("L", "need at least one sub-interval"));
    }
    if domain == Domain::Raw {
        return Err(invalid("domain", "outputs are rounded to the sphere or the cube"));
    }
    let taus = uniform_partition(l);
    let n = y.sites();
    let mut raw: Vec<Option<Vec<f64>>> = Vec::with_capacity(l + 1);
    let mut rounded: Vec<Option<Vec<f64>>> = Vec::with_capacity(l + 1);
    let mut errors: Vec<Option<String>> = Vec::with_capacity(l + 1);
    for &tau in &taus {
        let yt = interpolate(y, y_prime, tau)?;
        match alg.run(&yt, omega) {
            Ok(v) => {
                let r = match domain {
                    Domain::Spherical => match round_sphere(&v) {
                        SphereRounding::Point(s) => Some(s.into_values()),
                        SphereRounding::Infinity => None,
                    },
                    _ => Some(round_sign(&v).into_values()),
                };
                errors.push(r.is_none().then(|| "zero output".to_string()));
                rounded.push(r);
                raw.push(Some(v));
            }
            Err(e) => {
                errors.push(Some(e.to_string()));
                rounded.push(None);
                raw.push(None);
            }
        }
    }
    let x0 = rounded[0].clone();
    let overlaps: Vec<Option<f64>> =
        rounded.iter().map(|x| match (&x0, x) { (Some(a), Some(b)) => Some(overlap(a, b)), _ => None }).collect();
    let sqrt_n = sqrt(n as f64);
    let mut steps = Vec::with_capacity(l + 1);
    let (mut checks, mut violations) = (0, 0);
    let mut band_crossings = Vec::new();
    for i in 0..=l {
        let next = (i < l).then_some(i + 1);
        let displacement = next.and_then(|j| match (&raw[i], &raw[j]) {
            (Some(a), Some(b)) => Some(dist(a, b)),
            _ => None,
        });
        let rounded_distance = next.and_then(|j| match (&rounded[i], &rounded[j]) {
            (Some(a), Some(b)) => Some(dist(a, b)),
            _ => None,
        });
        if let (Some(j), Some(d)) = (next, rounded_distance) {
            if let (Some(a), Some(b)) = (overlaps[i], overlaps[j]) {
                checks += 1;
                if abs(a - b) > d / sqrt_n {
                    violations += 1;
                }
                if band.is_some_and(|bd| crosses(a, b, bd)) {
                    band_crossings.push(i);
                }
            }
        }
        steps.push(PathStep {
            ell: i,
            tau: taus[i],
            success: rounded[i].is_some(),
            error: errors[i].clone(),
            overlap: overlaps[i],
            displacement,
            rounded_distance,
        });
    }
    Ok(InterpolationRunReport {
        l,
        algorithm: alg.name(),
        domain,
        steps,
        continuity_checks: checks,
        continuity_violations: violations,
        band_crossings,
    })
}

/// A procedure producing a raw output in `R^n` from a graph.
pub trait GraphAlgorithm {
    fn name(&self) -> &'static str;
    fn run(&self, g: &GraphSample, omega: u64) -> Result<Vec<f64>>;
}

fn indicator(n: usize, set: &[usize]) -> Vec<f64> {
    let mut v = vec![0.0; n];
    set.iter().for_each(|&i| v[i] = 1.0);
    v
}

#[derive(Clone, Copy, Debug)]
pub struct GreedyIndicator;

impl GraphAlgorithm for GreedyIndicator {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn run(&self, g: &GraphSample, omega: u64) -> Result<Vec<f64>> {
        Ok(indicator(g.n(), &greedy_indep(g, omega)))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LocalIndicator {
    pub rule: LocalRule,
}

impl GraphAlgorithm for LocalIndicator {
    fn name(&self) -> &'static str {
        "local"
    }

    fn run(&self, g: &GraphSample, omega: u64) -> Result<Vec<f64>> {
        Ok(indicator(g.n(), &local_indep(g, self.rule, omega)))
    }
}

/// A Boolean polynomial in the edge bits.
#[derive(Clone, Debug)]
pub struct GraphPolynomial {
    pub f: FourierPoly,
}

impl GraphAlgorithm for GraphPolynomial {
    fn name(&self) -> &'static str {
        "polynomial"
    }

    fn run(&self, g: &GraphSample, _omega: u64) -> Result<Vec<f64>> {
        self.f.eval(&g.bits_f64())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphPathStep {
    pub position: usize,
    pub set_size: usize,
    pub success: bool,
    /// `|S_0 ∩ S_j| / n`.
    pub overlap: f64,
    /// To the next recorded position.
    pub displacement: Option<f64>,
    /// `|S_j △ S_j'|` to the next recorded position.
    pub symmetric_difference: Option<usize>,
    /// Coordinates with `|f_i(Z_j) - f_i(Z_j')| >= 1/2`.
    pub big_moves: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BooleanPathReport {
    pub algorithm: &'static str,
    pub eta: f64,
    pub steps: Vec<GraphPathStep>,
    /// Consecutive successful pairs checked against
    /// `|S_j △ S_j'| <= big_moves + 2 eta n`, and failures of that bound.
    pub difference_checks: usize,
    pub difference_violations: usize,
}

/// Recorded path positions `0, stride, 2 stride, ..., m`.
pub fn path_positions(m: usize, stride: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..=m).step_by(stride.max(1)).collect();
    if *v.last().unwrap() != m {
        v.push(m);
    }
    v
}

/// Runs `alg` at positions of the path `Y -> Y'`, rounding with `V^eta`.
pub fn boolean_path_run(
    y: &GraphSample,
    y_prime: &GraphSample,
    alg: &dyn GraphAlgorithm,
    eta: f64,
    stride: usize,
    omega: u64,
) -> Result<BooleanPathReport> {
    if stride == 0 {
        return Err(invalid("stride", "must be positive"));
    }
    let n = y.n();
    let positions = path_positions(y.m(), stride);
    let mut outs = Vec::with_capacity(positions.len());
    let mut sets = Vec::with_capacity(positions.len());
    for &j in &positions {
        let z = resample_path(y, y_prime, j)?;
        let v = alg.run(&z, omega)?;
        let r = round_indep(&v, &z, eta)?;
        outs.push(v);
        sets.push(r);
    }
    let mut mark0 = vec![false; n];
    sets[0].set.iter().for_each(|&i| mark0[i] = true);
    let (mut checks, mut violations) = (0, 0);
    let mut steps = Vec::with_capacity(positions.len());
    for (s, &pos) in positions.iter().enumerate() {
        let inter = sets[s].set.iter().filter(|&&i| mark0[i]).count();
        let (mut displacement, mut symmetric_difference, mut big_moves) = (None, None, None);
        if s + 1 < positions.len() {
            let (a, b) = (&outs[s], &outs[s + 1]);
            displacement = Some(dist(a, b));
            let big = a.iter().zip(b).filter(|(x, y)| abs(*x - *y) >= 0.5).count();
            let sym = symmetric_difference_size(&sets[s].set, &sets[s + 1].set, n);
            big_moves = Some(big);
            symmetric_difference = Some(sym);
            if !sets[s].failed && !sets[s + 1].failed {
                checks += 1;
                if sym as f64 > big as f64 + 2.0 * eta * n as f64 {
                    violations += 1;
                }
            }
        }
        steps.push(GraphPathStep {
            position: pos,
            set_size: sets[s].set.len(),
            success: !sets[s].failed,
            overlap: inter as f64 / n as f64,
            displacement,
            symmetric_difference,
            big_moves,
        });
    }
    Ok(BooleanPathReport { algorithm: alg.name(), eta, steps, difference_checks: checks, difference_violations: violations })
}

fn symmetric_difference_size(a: &[usize], b: &[usize], n: usize) -> usize {
    let mut mark = vec![0u8; n];
    a.iter().for_each(|&i| mark[i] |= 1);
    b.iter().for_each(|&i| mark[i] |= 2);
    mark.iter().filter(|&&m| m == 1 || m == 2).count()
}

/// Admissible number of sub-intervals of `[0, pi/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LPlan {
    /// `(pi / 2 gamma) sqrt(3D/c) (sqrt(6e))^D`.
    pub lower: f64,
    /// `min(1/(9 delta) - 1, e^{2D} / 3)`.
    pub upper: f64,
    /// Smallest integer in the window, `None` when empty.
    pub l: Option<u64>,
}

pub fn plan_l(degree: f64, gamma: f64, c: f64, delta: f64) -> Result<LPlan> {
    if !(degree > 0.0 && gamma > 0.0 && c > 0.0 && delta > 0.0) {
        return Err(invalid("plan_L", "D, gamma, c, delta must be positive"));
    }
    let lower = PI / (2.0 * gamma) * sqrt(3.0 * degree / c) * pow(sqrt(6.0 * E), degree);
    let upper = (1.0 / (9.0 * delta) - 1.0).min(exp(2.0 * degree) / 3.0);
    let cand = libm::ceil(lower).max(1.0);
    let l = (cand <= upper && cand < u64::MAX as f64).then_some(cand as u64);
    Ok(LPlan { lower, upper, l })
}

/// Boxed algorithm by name, for configuration-driven runs.
pub fn tensor_algorithm(name: &str, rounds: usize, degree: u32, langevin: &LangevinConfig) -> Option<Box<dyn TensorAlgorithm + Send + Sync>> {
    match name {
        "power-iteration" => Some(Box::new(PowerIteration { rounds })),
        "amp-lite" => Some(Box::new(AmpLite { iterations: rounds, nonlinearity: EntrywisePoly::truncated_sinh(degree.max(1)) })),
        "langevin" => Some(Box::new(LangevinTerminal { config: langevin.clone() })),
        _ => None,
    }
}
