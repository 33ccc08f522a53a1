//! p-spin coefficient tensors, the Hamiltonian
//! `H_n(x; Y) = n^{-(p+1)/2} <Y, x^{(x)p}>`, its spherical gradient,
//! interpolation between instances and a few optimizers that are
//! themselves (approximately) low-degree polynomials in `Y`.
//!
//! Entries are stored index-major (`i_1` most significant). Sampled tensors
//! are a seeded Gaussian stream; when `n^p` exceeds [`DENSE_LIMIT`] the
//! stream is regenerated on every pass instead of being stored.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::{abs, cos, dot, norm, pow, powi, sin, sqrt, PI};
use crate::rng::{derive_seed, uniform_sphere, Stream};

/// Largest entry count kept in memory.
pub const DENSE_LIMIT: usize = 100_000_000;
/// Largest `n` for exhaustive enumeration of the hypercube.
pub const ENUMERATION_LIMIT: usize = 24;
/// Largest `n` for the exhaustive-search polynomial.
pub const SOFTMAX_LIMIT: usize = 18;

#[derive(Clone, Debug, PartialEq)]
enum Storage {
    Dense(Vec<f64>),
    /// `sum_k c_k * gaussian_stream(seed_k)`, regenerated on demand.
    Streamed(Vec<(f64, u64)>),
}

/// Order-`p` tensor over `n` sites.
#[derive(Clone, Debug, PartialEq)]
pub struct PTensor {
    order: usize,
    sites: usize,
    len: usize,
    seed: Option<u64>,
    storage: Storage,
}

fn entry_count(p: usize, n: usize) -> Result<usize> {
    if p < 2 {
        return Err(invalid("p", "order must be at least 2"));
    }
    if n == 0 {
        return Err(invalid("n", "need at least one site"));
    }
    n.checked_pow(p as u32).ok_or(Error::TooLarge { size: usize::MAX, bound: DENSE_LIMIT })
}

impl PTensor {
    /// I.i.d. standard Gaussian entries, reproducible from `seed`.
    pub fn sample(p: usize, n: usize, seed: u64) -> Result<Self> {
        Self::sample_with_limit(p, n, seed, DENSE_LIMIT)
    }

    /// Like [`PTensor::sample`] with an explicit dense-storage cutoff. The
    /// entries do not depend on the cutoff.
    pub fn sample_with_limit(p: usize, n: usize, seed: u64, dense_limit: usize) -> Result<Self> {
        let len = entry_count(p, n)?;
        let storage = if len <= dense_limit {
            let mut rng = Stream::new(seed, 0);
            Storage::Dense((0..len).map(|_| rng.gaussian()).collect())
        } else {
            Storage::Streamed(vec![(1.0, seed)])
        };
        Ok(Self { order: p, sites: n, len, seed: Some(seed), storage })
    }

    pub fn from_dense(p: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        let len = entry_count(p, n)?;
        if entries.len() != len {
            return Err(Error::DimensionMismatch { expected: len, actual: entries.len() });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(invalid("entries", "tensor entries must be finite"));
        }
        Ok(Self { order: p, sites: n, len, seed: None, storage: Storage::Dense(entries) })
    }

    pub fn zeros(p: usize, n: usize) -> Result<Self> {
        let len = entry_count(p, n)?;
        if len > DENSE_LIMIT {
            return Ok(Self { order: p, sites: n, len, seed: None, storage: Storage::Streamed(Vec::new()) });
        }
        Self::from_dense(p, n, vec![0.0; len])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// `n^p`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Seed of a pure sample; `None` for constructed or combined tensors.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn dense_entries(&self) -> Option<&[f64]> {
        match &self.storage {
            Storage::Dense(v) => Some(v),
            Storage::Streamed(_) => None,
        }
    }

    /// Materializes every entry. Fails beyond [`DENSE_LIMIT`].
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        match &self.storage {
            Storage::Dense(v) => Ok(v.clone()),
            Storage::Streamed(_) => {
                if self.len > DENSE_LIMIT {
                    return Err(Error::TooLarge { size: self.len, bound: DENSE_LIMIT });
                }
                let mut out = Vec::with_capacity(self.len);
                self.for_each_row(|_, row| out.extend_from_slice(row));
                Ok(out)
            }
        }
    }

    /// Entry at flat index-major position `idx`.
    pub fn entry(&self, idx: usize) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v[idx],
            Storage::Streamed(terms) => terms
                .iter()
                .map(|&(c, s)| {
                    let mut rng = Stream::new(s, 0);
                    rng.seek_gaussian(idx as u64);
                    c * rng.gaussian()
                })
                .sum(),
        }
    }

    /// Calls `f(prefix, row)` for every fiber along the last index, in
    /// index-major order; `prefix` holds `(i_1, ..., i_{p-1})`.
    pub fn for_each_row(&self, mut f: impl FnMut(&[usize], &[f64])) {
        let n = self.sites;
        let mut prefix = vec![0usize; self.order - 1];
        let rows = self.len / n;
        match &self.storage {
            Storage::Dense(v) => {
                for (r, row) in v.chunks_exact(n).enumerate() {
                    if r > 0 {
                        advance(&mut prefix, n);
                    }
                    f(&prefix, row);
                }
            }
            Storage::Streamed(terms) => {
                let mut streams: Vec<(f64, Stream)> =
                    terms.iter().map(|&(c, s)| (c, Stream::new(s, 0))).collect();
                let mut row = vec![0.0; n];
                for r in 0..rows {
                    if r > 0 {
                        advance(&mut prefix, n);
                    }
                    row.iter_mut().for_each(|v| *v = 0.0);
                    for (c, rng) in streams.iter_mut() {
                        for v in row.iter_mut() {
                            *v += *c * rng.gaussian();
                        }
                    }
                    f(&prefix, &row);
                }
            }
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let storage = match &self.storage {
            Storage::Dense(v) => Storage::Dense(v.iter().map(|x| c * x).collect()),
            Storage::Streamed(t) => Storage::Streamed(t.iter().map(|&(a, s)| (c * a, s)).collect()),
        };
        Self { seed: None, storage, ..self.clone() }
    }

    /// `a * X + b * Y` entrywise.
    pub fn linear_combination(a: f64, x: &PTensor, b: f64, y: &PTensor) -> Result<PTensor> {
        if x.order != y.order || x.sites != y.sites {
            return Err(Error::DimensionMismatch { expected: x.len, actual: y.len });
        }
        let storage = match (&x.storage, &y.storage) {
            (Storage::Streamed(s), Storage::Streamed(t)) => Storage::Streamed(
                s.iter().map(|&(c, k)| (a * c, k)).chain(t.iter().map(|&(c, k)| (b * c, k))).collect(),
            ),
            _ => {
                let xs = x.to_dense()?;
                let ys = y.to_dense()?;
                Storage::Dense(xs.iter().zip(&ys).map(|(u, v)| a * u + b * v).collect())
            }
        };
        Ok(PTensor { order: x.order, sites: x.sites, len: x.len, seed: None, storage })
    }
}

fn advance(prefix: &mut [usize], n: usize) {
    for d in (0..prefix.len()).rev() {
        prefix[d] += 1;
        if prefix[d] < n {
            return;
        }
        prefix[d] = 0;
    }
}

/// `Y_tau = cos(tau) Y + sin(tau) Y'`; exact copies at the endpoints.
pub fn interpolate(y: &PTensor, y_prime: &PTensor, tau: f64) -> Result<PTensor> {
    if !(0.0..=PI / 2.0).contains(&tau) {
        return Err(invalid("tau", "must lie in [0, pi/2]"));
    }
    if y.order != y_prime.order || y.sites != y_prime.sites {
        return Err(Error::DimensionMismatch { expected: y.len, actual: y_prime.len });
    }
    if tau == 0.0 {
        return Ok(y.clone());
    }
    if tau == PI / 2.0 {
        return Ok(y_prime.clone());
    }
    PTensor::linear_combination(cos(tau), y, sin(tau), y_prime)
}

/// `X = rho Y + sqrt(1 - rho^2) Y''` with `Y''` sampled from `seed`.
pub fn correlated_pair(y: &PTensor, rho: f64, seed: u64) -> Result<PTensor> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(invalid("rho", "must lie in [0, 1]"));
    }
    if rho == 1.0 {
        return Ok(y.clone());
    }
    let fresh = PTensor::sample(y.order, y.sites, seed)?;
    if rho == 0.0 {
        return Ok(fresh);
    }
    PTensor::linear_combination(rho, y, sqrt(1.0 - rho * rho), &fresh)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Spherical,
    Ising,
    Raw,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Spherical => "spherical",
            Domain::Ising => "ising",
            Domain::Raw => "raw",
        }
    }
}

/// A point of `R^n` tagged with the domain it is known to lie in.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    x: Vec<f64>,
    domain: Domain,
}

/// Relative tolerance on `|x| = sqrt(n)` for spherical states.
pub const SPHERE_TOL: f64 = 1e-9;

impl State {
    pub fn spherical(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Empty("state"));
        }
        let r = sqrt(x.len() as f64);
        if !(abs(norm(&x) - r) <= SPHERE_TOL * r) {
            return Err(invalid("x", "not on the sphere of radius sqrt(n)"));
        }
        Ok(Self { x, domain: Domain::Spherical })
    }

    pub fn ising(x: Vec<f64>) -> Result<Self> {
        if x.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(invalid("x", "Ising states have entries +-1"));
        }
        Ok(Self { x, domain: Domain::Ising })
    }

    pub fn raw(x: Vec<f64>) -> Self {
        Self { x, domain: Domain::Raw }
    }

    pub fn values(&self) -> &[f64] {
        &self.x
    }

    pub fn into_values(self) -> Vec<f64> {
        self.x
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `R(x, y) = |<x, y>| / n`.
    pub fn overlap(&self, other: &State) -> f64 {
        overlap(&self.x, &other.x)
    }
}

pub fn overlap(x: &[f64], y: &[f64]) -> f64 {
    abs(dot(x, y)) / x.len() as f64
}

/// `sqrt(n) v / |v|`; `None` for the zero vector.
pub fn project_to_sphere(v: &[f64]) -> Option<Vec<f64>> {
    let nv = norm(v);
    if nv == 0.0 || !nv.is_finite() {
        return None;
    }
    let s = sqrt(v.len() as f64) / nv;
    Some(v.iter().map(|x| x * s).collect())
}

/// `<Y, x^{(x)p}>` without normalization.
pub fn contract(y: &PTensor, x: &[f64]) -> Result<f64> {
    check_len(y, x)?;
    let mut acc = 0.0;
    y.for_each_row(|prefix, row| {
        let pre: f64 = prefix.iter().map(|&i| x[i]).product();
        if pre != 0.0 {
            acc += pre * dot(row, x);
        }
    });
    Ok(acc)
}

fn check_len(y: &PTensor, x: &[f64]) -> Result<()> {
    if x.len() != y.sites {
        return Err(Error::DimensionMismatch { expected: y.sites, actual: x.len() });
    }
    Ok(())
}

fn hamiltonian_scale(p: usize, n: usize) -> f64 {
    1.0 / pow(n as f64, (p as f64 + 1.0) / 2.0)
}

/// `H_n(x; Y)` for any state, including raw and zero vectors.
pub fn hamiltonian(y: &PTensor, x: &State) -> Result<f64> {
    energy(y, x.values())
}

pub fn energy(y: &PTensor, x: &[f64]) -> Result<f64> {
    Ok(hamiltonian_scale(y.order, y.sites) * contract(y, x)?)
}

/// Partial contractions `A(x_1, .., ., .., x_p)` for every slot, and the
/// full value `A(x_1, ..., x_p)`.
fn multilinear_partials(y: &PTensor, xs: &[&[f64]]) -> (f64, Vec<Vec<f64>>) {
    let p = y.order;
    let n = y.sites;
    let mut parts = vec![vec![0.0; n]; p];
    let mut value = 0.0;
    let mut left = vec![1.0; p];
    let mut right = vec![1.0; p];
    let last = xs[p - 1];
    y.for_each_row(|prefix, row| {
        let k = p - 1;
        left[0] = 1.0;
        for j in 0..k {
            left[j + 1] = left[j] * xs[j][prefix[j]];
        }
        right[k - 1] = 1.0;
        for j in (0..k - 1).rev() {
            right[j] = right[j + 1] * xs[j + 1][prefix[j + 1]];
        }
        let s = dot(row, last);
        let full = left[k];
        value += full * s;
        if full != 0.0 {
            for (g, r) in parts[k].iter_mut().zip(row) {
                *g += full * r;
            }
        }
        if s != 0.0 {
            for j in 0..k {
                parts[j][prefix[j]] += left[j] * right[j] * s;
            }
        }
    });
    (value, parts)
}

/// Euclidean gradient of `H_n(.; Y)` at `x`.
pub fn euclidean_gradient(y: &PTensor, x: &[f64]) -> Result<Vec<f64>> {
    check_len(y, x)?;
    let xs = vec![x; y.order];
    let (_, parts) = multilinear_partials(y, &xs);
    let scale = hamiltonian_scale(y.order, y.sites);
    let mut g = vec![0.0; y.sites];
    for part in &parts {
        for (gi, v) in g.iter_mut().zip(part) {
            *gi += v;
        }
    }
    g.iter_mut().for_each(|v| *v *= scale);
    Ok(g)
}

/// Removes the radial component: `v - (<v, x> / |x|^2) x`.
pub fn project_tangent(x: &[f64], v: &mut [f64]) {
    let xx = dot(x, x);
    if xx == 0.0 {
        return;
    }
    let c = dot(v, x) / xx;
    for (vi, xi) in v.iter_mut().zip(x) {
        *vi -= c * xi;
    }
}

/// Riemannian gradient on the sphere of radius `sqrt(n)`.
pub fn spherical_gradient(y: &PTensor, x: &State) -> Result<Vec<f64>> {
    if x.domain() != Domain::Spherical {
        return Err(invalid("x", "spherical gradient needs a spherical state"));
    }
    let mut g = euclidean_gradient(y, x.values())?;
    project_tangent(x.values(), &mut g);
    Ok(g)
}

/// Smooth objective on the sphere: energy plus Euclidean gradient.
pub trait Potential {
    fn sites(&self) -> usize;
    fn energy(&self, x: &[f64]) -> f64;
    fn euclidean_gradient(&self, x: &[f64]) -> Vec<f64>;

    fn tangent_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.euclidean_gradient(x);
        project_tangent(x, &mut g);
        g
    }
}

impl Potential for PTensor {
    fn sites(&self) -> usize {
        self.sites
    }

    fn energy(&self, x: &[f64]) -> f64 {
        energy(self, x).expect("potential evaluated at a state of matching length")
    }

    fn euclidean_gradient(&self, x: &[f64]) -> Vec<f64> {
        euclidean_gradient(self, x).expect("potential evaluated at a state of matching length")
    }
}

/// `H_n(.; Y_tau)` evaluated through linearity, without forming `Y_tau`.
#[derive(Clone, Copy, Debug)]
pub struct Interpolated<'a> {
    pub y: &'a PTensor,
    pub y_prime: &'a PTensor,
    pub tau: f64,
}

impl Interpolated<'_> {
    fn weights(&self) -> (f64, f64) {
        if self.tau == 0.0 {
            (1.0, 0.0)
        } else if self.tau == PI / 2.0 {
            (0.0, 1.0)
        } else {
            (cos(self.tau), sin(self.tau))
        }
    }
}

impl Potential for Interpolated<'_> {
    fn sites(&self) -> usize {
        self.y.sites
    }

    fn energy(&self, x: &[f64]) -> f64 {
        let (a, b) = self.weights();
        let mut e = 0.0;
        if a != 0.0 {
            e += a * self.y.energy(x);
        }
        if b != 0.0 {
            e += b * self.y_prime.energy(x);
        }
        e
    }

    fn euclidean_gradient(&self, x: &[f64]) -> Vec<f64> {
        let (a, b) = self.weights();
        let mut g = vec![0.0; x.len()];
        for (w, t) in [(a, self.y), (b, self.y_prime)] {
            if w != 0.0 {
                for (gi, v) in g.iter_mut().zip(t.euclidean_gradient(x)) {
                    *gi += w * v;
                }
            }
        }
        g
    }
}

/// The zero potential, for diffusion-only runs.
#[derive(Clone, Copy, Debug)]
pub struct Flat(pub usize);

impl Potential for Flat {
    fn sites(&self) -> usize {
        self.0
    }

    fn energy(&self, _: &[f64]) -> f64 {
        0.0
    }

    fn euclidean_gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![0.0; x.len()]
    }
}

/// Lower estimate of `|Y|_op = sup_{|x_j| = 1} Y(x_1, ..., x_p)` by
/// alternating maximization from random unit starts.
pub fn operator_norm_estimate(y: &PTensor, restarts: usize, sweeps: usize, seed: u64) -> f64 {
    let p = y.order;
    let n = y.sites;
    let mut best = 0.0f64;
    for r in 0..restarts.max(1) {
        let mut rng = Stream::derived(seed, r as u64);
        let mut xs: Vec<Vec<f64>> = (0..p)
            .map(|_| {
                let v = uniform_sphere(n, &mut rng);
                let s = 1.0 / sqrt(n as f64);
                v.into_iter().map(|t| t * s).collect()
            })
            .collect();
        for _ in 0..sweeps.max(1) {
            for slot in 0..p {
                let refs: Vec<&[f64]> = xs.iter().map(|v| v.as_slice()).collect();
                let (_, parts) = multilinear_partials(y, &refs);
                let part = &parts[slot];
                let nv = norm(part);
                if nv == 0.0 {
                    continue;
                }
                // maximizing over x_slot gives |partial| exactly
                best = best.max(nv);
                xs[slot] = part.iter().map(|v| v / nv).collect();
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundStateMethod {
    Exhaustive,
    RestartedAscent,
}

impl GroundStateMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            GroundStateMethod::Exhaustive => "exhaustive",
            GroundStateMethod::RestartedAscent => "restarted-ascent",
        }
    }
}

/// Desk-scale estimate of `max H_n` over a domain.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateEstimate {
    pub n: usize,
    pub p: usize,
    pub domain: Domain,
    pub method: GroundStateMethod,
    pub value_per_site: f64,
    pub argmax: State,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AscentConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub initial_step: f64,
    /// Stop when the step falls below this.
    pub min_step: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self { restarts: 20, max_iters: 2_000, initial_step: 0.01, min_step: 1e-10 }
    }
}

/// Projected gradient ascent on the sphere with step doubling on success and
/// halving on decrease, restarted from uniform points.
pub fn restarted_ascent<P: Potential + ?Sized>(
    potential: &P,
    cfg: &AscentConfig,
    seed: u64,
) -> (f64, Vec<f64>) {
    let n = potential.sites();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for r in 0..cfg.restarts.max(1) {
        let mut rng = Stream::derived(seed, r as u64);
        let x0 = uniform_sphere(n, &mut rng);
        let (e, x) = ascend(potential, x0, cfg);
        if e > best.0 {
            best = (e, x);
        }
    }
    best
}

/// Single ascent run from `x`.
pub fn ascend<P: Potential + ?Sized>(potential: &P, mut x: Vec<f64>, cfg: &AscentConfig) -> (f64, Vec<f64>) {
    let mut e = potential.energy(&x);
    let mut step = cfg.initial_step;
    let mut trial = vec![0.0; x.len()];
    for _ in 0..cfg.max_iters {
        let g = potential.tangent_gradient(&x);
        if norm(&g) == 0.0 {
            break;
        }
        for ((t, xi), gi) in trial.iter_mut().zip(&x).zip(&g) {
            *t = xi + step * gi;
        }
        let Some(next) = project_to_sphere(&trial) else { break };
        let e_next = potential.energy(&next);
        if e_next >= e {
            x = next;
            e = e_next;
            step *= 2.0;
        } else {
            step *= 0.5;
            if step < cfg.min_step {
                break;
            }
        }
    }
    (e, x)
}

/// Multilinear form of `<Y, x^{(x)p}>` on `{+-1}^n`: since `x_i^2 = 1`, every
/// entry contributes to the monomial of indices that occur an odd number of
/// times.
struct IsingExpansion {
    terms: Vec<(Vec<usize>, f64)>,
    by_coord: Vec<Vec<usize>>,
}

impl IsingExpansion {
    fn new(y: &PTensor) -> Self {
        let n = y.sites;
        let mut map: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        let mut idx = vec![0usize; y.order];
        let mut parity = vec![false; n];
        y.for_each_row(|prefix, row| {
            idx[..prefix.len()].copy_from_slice(prefix);
            for (last, &v) in row.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                idx[y.order - 1] = last;
                for &i in idx.iter() {
                    parity[i] = !parity[i];
                }
                let mut key: Vec<usize> = Vec::new();
                for &i in idx.iter() {
                    if parity[i] {
                        key.push(i);
                        parity[i] = false;
                    }
                }
                key.sort_unstable();
                *map.entry(key).or_insert(0.0) += v;
            }
        });
        let terms: Vec<(Vec<usize>, f64)> = map.into_iter().filter(|(_, c)| *c != 0.0).collect();
        let mut by_coord = vec![Vec::new(); n];
        for (t, (s, _)) in terms.iter().enumerate() {
            for &i in s {
                by_coord[i].push(t);
            }
        }
        Self { terms, by_coord }
    }

    /// Gray-code walk over `x` with the coordinates in `free` flipping and
    /// the others held at +1. Calls `visit(x, <Y, x^p>)` for every point.
    fn walk(&self, n: usize, free: &[usize], mut visit: impl FnMut(&[f64], f64)) {
        let mut x = vec![1.0; n];
        let mut mono: Vec<f64> = vec![1.0; self.terms.len()];
        let mut value: f64 = self.terms.iter().map(|(_, c)| c).sum();
        visit(&x, value);
        let total: u64 = 1u64 << free.len();
        for g in 1..total {
            let i = free[g.trailing_zeros() as usize];
            x[i] = -x[i];
            for &t in &self.by_coord[i] {
                mono[t] = -mono[t];
                value += 2.0 * self.terms[t].1 * mono[t];
            }
            visit(&x, value);
        }
    }
}

/// Exact `max H_n` over `{+-1}^n` by enumeration (`n <= 24`), or
/// restarted ascent on the sphere.
pub fn exhaustive_ground_state(y: &PTensor, domain: Domain, seed: u64) -> Result<GroundStateEstimate> {
    let n = y.sites;
    match domain {
        Domain::Ising => {
            if n > ENUMERATION_LIMIT {
                return Err(Error::TooLarge { size: n, bound: ENUMERATION_LIMIT });
            }
            let exp = IsingExpansion::new(y);
            let free: Vec<usize> = (0..n).collect();
            let mut best_val = f64::NEG_INFINITY;
            let mut best_x = vec![1.0; n];
            exp.walk(n, &free, |x, v| {
                if v > best_val {
                    best_val = v;
                    best_x.copy_from_slice(x);
                }
            });
            let value = energy(y, &best_x)?;
            Ok(GroundStateEstimate {
                n,
                p: y.order,
                domain,
                method: GroundStateMethod::Exhaustive,
                value_per_site: value,
                argmax: State::ising(best_x)?,
            })
        }
        Domain::Spherical => {
            let (value, x) = restarted_ascent(y, &AscentConfig::default(), seed);
            Ok(GroundStateEstimate {
                n,
                p: y.order,
                domain,
                method: GroundStateMethod::RestartedAscent,
                value_per_site: value,
                argmax: State::spherical(x)?,
            })
        }
        Domain::Raw => Err(invalid("domain", "ground states are defined on the sphere or the cube")),
    }
}

/// Exhaustive-search polynomial `f(Y) = sum_x x <Y, x^p>^{2k}`, summed over
/// one representative of each pair `{x, -x}` (those with `x_1 = +1`); the
/// full-cube sum cancels identically. Weights are divided by
/// `max |<Y, x^p>|` before powering.
pub fn softmax_search_poly(y: &PTensor, k: u32) -> Result<State> {
    let n = y.sites;
    if n > SOFTMAX_LIMIT {
        return Err(Error::TooLarge { size: n, bound: SOFTMAX_LIMIT });
    }
    let exp = IsingExpansion::new(y);
    let free: Vec<usize> = (1..n).collect();
    let mut scale = 0.0f64;
    exp.walk(n, &free, |_, v| scale = scale.max(abs(v)));
    let mut f = vec![0.0; n];
    if scale == 0.0 {
        return Ok(State::raw(f));
    }
    exp.walk(n, &free, |x, v| {
        let w = powi(v / scale, 2 * k as i32);
        for (fi, xi) in f.iter_mut().zip(x) {
            *fi += w * xi;
        }
    });
    Ok(State::raw(f))
}

/// All representatives `x` (with `x_1 = +1`) maximizing `<Y, x^p>^2`, by
/// plain enumeration.
pub fn ising_abs_maximizers(y: &PTensor) -> Result<Vec<Vec<f64>>> {
    let n = y.sites;
    if n > SOFTMAX_LIMIT {
        return Err(Error::TooLarge { size: n, bound: SOFTMAX_LIMIT });
    }
    let exp = IsingExpansion::new(y);
    let free: Vec<usize> = (1..n).collect();
    let mut best = 0.0f64;
    exp.walk(n, &free, |_, v| best = best.max(abs(v)));
    let mut out = Vec::new();
    exp.walk(n, &free, |x, v| {
        if abs(v) >= best * (1.0 - 1e-12) {
            out.push(x.to_vec());
        }
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerIterationResult {
    pub state: State,
    /// `x^T M x / n` for the GOE-normalized `M = (Y + Y^T) / sqrt(2n)`.
    pub quadratic_form_per_site: f64,
    /// Shift `s` used for `M + s I`.
    pub shift: f64,
}

fn goe_apply(y: &PTensor, u: &[f64], out: &mut [f64]) {
    // (Y + Y^T) u / sqrt(2n)
    out.iter_mut().for_each(|v| *v = 0.0);
    y.for_each_row(|prefix, row| {
        let i = prefix[0];
        out[i] += dot(row, u);
        let ui = u[i];
        if ui != 0.0 {
            for (o, r) in out.iter_mut().zip(row) {
                *o += r * ui;
            }
        }
    });
    let s = 1.0 / sqrt(2.0 * y.sites as f64);
    out.iter_mut().for_each(|v| *v *= s);
}

const MAX_ZERO_RESTARTS: u64 = 16;

/// Power iteration on the GOE-normalized symmetrization of a matrix.
///
/// Iterates `u <- (M + s I) u` where `s` estimates the spectral radius of
/// `M`, so the top eigenvalue dominates instead of the largest in modulus.
/// The shift is estimated by 30 unshifted rounds from an independent vector.
pub fn power_iteration_opt(y: &PTensor, rounds: usize, seed: u64) -> Result<PowerIterationResult> {
    if y.order != 2 {
        return Err(invalid("p", "power iteration needs a matrix (p = 2)"));
    }
    let n = y.sites;
    let mut buf = vec![0.0; n];
    let shift = {
        let mut rng = Stream::derived(seed, u64::MAX);
        let mut v = uniform_sphere(n, &mut rng);
        let mut est = 0.0;
        for _ in 0..30 {
            goe_apply(y, &v, &mut buf);
            let nb = norm(&buf);
            if nb == 0.0 {
                break;
            }
            est = nb / norm(&v);
            v.iter_mut().zip(&buf).for_each(|(a, b)| *a = b / nb);
        }
        est
    };
    for attempt in 0..MAX_ZERO_RESTARTS {
        let mut rng = Stream::derived(seed, attempt);
        let mut u = vec![0.0; n];
        rng.fill_gaussian(&mut u);
        let mut zero = norm(&u) == 0.0;
        for _ in 0..rounds {
            if zero {
                break;
            }
            goe_apply(y, &u, &mut buf);
            for (b, ui) in buf.iter_mut().zip(&u) {
                *b += shift * ui;
            }
            let nb = norm(&buf);
            if nb == 0.0 || !nb.is_finite() {
                zero = true;
                break;
            }
            u.iter_mut().zip(&buf).for_each(|(a, b)| *a = b / nb);
        }
        if zero {
            continue;
        }
        let x = project_to_sphere(&u).ok_or(Error::Diverged { iteration: rounds })?;
        goe_apply(y, &x, &mut buf);
        let q = dot(&x, &buf) / n as f64;
        return Ok(PowerIterationResult { state: State::spherical(x)?, quadratic_form_per_site: q, shift });
    }
    Err(Error::Diverged { iteration: 0 })
}

/// Entrywise polynomial `sum_k c_k x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntrywisePoly {
    coeffs: Vec<f64>,
}

impl EntrywisePoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// Truncated `sinh`: `sum_{k odd <= g} x^k / k!`.
    pub fn truncated_sinh(g: u32) -> Self {
        let mut c = vec![0.0; g as usize + 1];
        let mut fact = 1.0;
        for (k, ck) in c.iter_mut().enumerate().skip(1) {
            fact *= k as f64;
            if k % 2 == 1 {
                *ck = 1.0 / fact;
            }
        }
        Self::new(c)
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0) as u32
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmpLiteResult {
    pub state: State,
    /// Exact degree in `Y` from `deg_{t+1} = g (1 + (p - 1) deg_t)`.
    pub degree: u64,
    /// `(p g)^T`, saturating.
    pub degree_bound: u64,
    pub iterations: usize,
    /// Shift `s`; 0 for odd `p` or `T = 0`.
    pub shift: f64,
}

/// `|grad H(w)| / |w|` after 10 unshifted power rounds from an independent
/// start; at an eigenvector this is `p |H| / n`.
fn tensor_shift(y: &PTensor, seed: u64) -> Result<f64> {
    let mut rng = Stream::derived(seed, u64::MAX);
    let mut w = uniform_sphere(y.sites, &mut rng);
    let mut est = 0.0;
    for _ in 0..10 {
        let v = euclidean_gradient(y, &w)?;
        est = norm(&v) / norm(&w);
        match project_to_sphere(&v) {
            Some(v) => w = v,
            None => break,
        }
    }
    Ok(est)
}

/// Shifted tensor power iteration followed by an entrywise polynomial:
/// `u^{t+1} = g(normalize(grad H(u^) + s u^))` from a Gaussian `u^0`, where
/// `u^` is `u^t` on the sphere of radius `sqrt(n)`. For even `p`,
/// `H(-x) = H(x)` and the unshifted iteration climbs `|H|`, landing on
/// minima as often as maxima; there `s` is [`tensor_shift`]. For odd `p`
/// every fixed point already has `H > 0` and `s = 0`. The normalizations are
/// positive scalars and leave the direction polynomial in `Y` for fixed `s`.
pub fn amp_lite_opt(y: &PTensor, iterations: usize, nonlinearity: &EntrywisePoly, seed: u64) -> Result<AmpLiteResult> {
    let n = y.sites;
    let p = y.order;
    let mut rng = Stream::derived(seed, 0);
    let mut u = vec![0.0; n];
    rng.fill_gaussian(&mut u);
    let g = nonlinearity.degree() as u64;
    let mut degree = 0u64;
    let shift = if iterations > 0 && p.is_multiple_of(2) { tensor_shift(y, seed)? } else { 0.0 };
    for t in 0..iterations {
        let Some(uh) = project_to_sphere(&u) else {
            return Err(Error::Diverged { iteration: t });
        };
        let mut v = euclidean_gradient(y, &uh)?;
        v.iter_mut().zip(&uh).for_each(|(a, b)| *a += shift * b);
        let Some(v) = project_to_sphere(&v) else {
            return Err(Error::Diverged { iteration: t });
        };
        u = v.iter().map(|&a| nonlinearity.apply(a)).collect();
        if u.iter().any(|a| !a.is_finite()) {
            return Err(Error::Diverged { iteration: t });
        }
        degree = g.saturating_mul(1u64.saturating_add((p as u64 - 1).saturating_mul(degree)));
    }
    let degree_bound = (p as u64)
        .saturating_mul(g.max(1))
        .checked_pow(iterations as u32)
        .unwrap_or(u64::MAX);
    Ok(AmpLiteResult { state: State::raw(u), degree, degree_bound, iterations, shift })
}

/// Seed for the `k`-th independent tensor of an experiment.
pub fn instance_seed(master: u64, k: u64) -> u64 {
    derive_seed(master, k.wrapping_add(0x7E45_0000))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Moments;

    fn brute_contract(y: &PTensor, x: &[f64]) -> f64 {
        let n = y.sites();
        let p = y.order();
        let mut acc = 0.0;
        for idx in 0..y.len() {
            let mut rem = idx;
            let mut prod = 1.0;
            for _ in 0..p {
                prod *= x[rem % n];
                rem /= n;
            }
            acc += y.entry(idx) * prod;
        }
        acc
    }

    #[test]
    fn sampling_is_deterministic_and_centered() {
        let a = PTensor::sample(2, 1, 42).unwrap();
        let b = PTensor::sample(2, 1, 42).unwrap();
        assert_eq!(a, b);
        let t = PTensor::sample(3, 10, 7).unwrap();
        let m: Moments = t.dense_entries().unwrap().iter().copied().collect();
        assert!(m.mean().abs() < 5.0 / 1000f64.sqrt());
    }

    #[test]
    fn streamed_storage_matches_dense() {
        let d = PTensor::sample(3, 6, 5).unwrap();
        let s = PTensor::sample_with_limit(3, 6, 5, 10).unwrap();
        assert!(d.is_dense() && !s.is_dense());
        assert_eq!(d.to_dense().unwrap(), s.to_dense().unwrap());
        assert_eq!(d.entry(100), s.entry(100));
        let x: Vec<f64> = (0..6).map(|i| (i as f64 * 0.7).sin()).collect();
        assert_eq!(contract(&d, &x).unwrap(), contract(&s, &x).unwrap());
    }

    #[test]
    fn hamiltonian_examples() {
        let y = PTensor::from_dense(2, 1, vec![1.0]).unwrap();
        assert_eq!(hamiltonian(&y, &State::ising(vec![1.0]).unwrap()).unwrap(), 1.0);
        let r = PTensor::sample(3, 4, 1).unwrap();
        assert_eq!(hamiltonian(&r, &State::raw(vec![0.0; 4])).unwrap(), 0.0);
        let ones = PTensor::from_dense(2, 2, vec![1.0; 4]).unwrap();
        let x = State::spherical(vec![2f64.sqrt(), 0.0]).unwrap();
        let h = hamiltonian(&ones, &x).unwrap();
        assert!((h - 2.0 * 2f64.powf(-1.5)).abs() < 1e-13, "{h}");
        assert!(energy(&ones, &[1.0]).is_err());
    }

    #[test]
    fn contraction_matches_brute_force() {
        let y = PTensor::sample(4, 5, 3).unwrap();
        let x: Vec<f64> = (0..5).map(|i| 0.3 * i as f64 - 0.5).collect();
        let a = contract(&y, &x).unwrap();
        let b = brute_contract(&y, &x);
        assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
    }

    #[test]
    fn scale_covariance_is_exact() {
        let y = PTensor::sample(3, 7, 11).unwrap();
        let mut rng = Stream::new(1, 0);
        let x = uniform_sphere(7, &mut rng);
        let h = energy(&y, &x).unwrap();
        for c in [-1.0, 2.0] {
            assert_eq!(energy(&y.scale(c), &x).unwrap(), c * h);
        }
    }

    #[test]
    fn gradient_of_identity_is_radial() {
        let n = 6;
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            e[i * n + i] = 1.0;
        }
        let y = PTensor::from_dense(2, n, e).unwrap();
        let mut rng = Stream::new(2, 0);
        let x = State::spherical(uniform_sphere(n, &mut rng)).unwrap();
        let g = spherical_gradient(&y, &x).unwrap();
        assert!(norm(&g) < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let y = PTensor::sample(4, 20, 9).unwrap();
        let mut rng = Stream::new(3, 0);
        let x = uniform_sphere(20, &mut rng);
        let g = euclidean_gradient(&y, &x).unwrap();
        for _ in 0..5 {
            let mut v = vec![0.0; 20];
            rng.fill_gaussian(&mut v);
            let h = 1e-5;
            let plus: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + h * b).collect();
            let minus: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a - h * b).collect();
            let fd = (energy(&y, &plus).unwrap() - energy(&y, &minus).unwrap()) / (2.0 * h);
            let an = dot(&g, &v);
            assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-12), "{fd} vs {an}");
        }
        let st = State::spherical(x.clone()).unwrap();
        let sg = spherical_gradient(&y, &st).unwrap();
        assert!(dot(&sg, &x).abs() <= 1e-8 * norm(&sg) * norm(&x));
        assert!(spherical_gradient(&y, &State::raw(x)).is_err());
    }

    #[test]
    fn interpolation_endpoints_and_variance() {
        let y = PTensor::sample(3, 8, 1).unwrap();
        let z = PTensor::sample(3, 8, 2).unwrap();
        assert_eq!(interpolate(&y, &z, 0.0).unwrap(), y);
        assert_eq!(interpolate(&y, &z, PI / 2.0).unwrap(), z);
        let mid = interpolate(&y, &z, PI / 4.0).unwrap();
        let m: Moments = mid.dense_entries().unwrap().iter().copied().collect();
        let var = m.variance().unwrap();
        assert!((var - 1.0).abs() < 5.0 * (2.0 / 512f64).sqrt());
        assert!(interpolate(&y, &z, 2.0).is_err());
        let w = PTensor::sample(3, 7, 2).unwrap();
        assert!(interpolate(&y, &w, 0.3).is_err());
    }

    #[test]
    fn correlated_pair_correlation() {
        let y = PTensor::sample(3, 20, 1).unwrap();
        assert_eq!(correlated_pair(&y, 1.0, 5).unwrap(), y);
        let n = y.len() as f64;
        for rho in [0.0, 0.6] {
            let x = correlated_pair(&y, rho, 5).unwrap();
            let a = y.dense_entries().unwrap();
            let b = x.dense_entries().unwrap();
            let c = a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>() / n;
            assert!((c - rho).abs() < 5.0 / n.sqrt(), "rho {rho}: {c}");
        }
        assert!(correlated_pair(&y, -0.1, 1).is_err());
    }

    #[test]
    fn exhaustive_matches_enumeration() {
        let y = PTensor::sample(3, 8, 4).unwrap();
        let gs = exhaustive_ground_state(&y, Domain::Ising, 0).unwrap();
        let mut best = f64::NEG_INFINITY;
        for mask in 0..256u32 {
            let x: Vec<f64> = (0..8).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
            best = best.max(energy(&y, &x).unwrap());
        }
        assert!((gs.value_per_site - best).abs() < 1e-12);
        assert_eq!(gs.method, GroundStateMethod::Exhaustive);
    }

    #[test]
    fn exhaustive_examples() {
        let y = PTensor::from_dense(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let gs = exhaustive_ground_state(&y, Domain::Ising, 0).unwrap();
        assert!((gs.value_per_site - 2f64.powf(-0.5)).abs() < 1e-14);
        let z = PTensor::zeros(3, 5).unwrap();
        assert_eq!(exhaustive_ground_state(&z, Domain::Ising, 0).unwrap().value_per_site, 0.0);
        let big = PTensor::zeros(2, 25).unwrap();
        assert!(exhaustive_ground_state(&big, Domain::Ising, 0).is_err());
    }

    #[test]
    fn exhaustive_beats_heuristics_n18_p4() {
        let y = PTensor::sample(4, 18, 8).unwrap();
        let gs = exhaustive_ground_state(&y, Domain::Ising, 0).unwrap();
        let sphere = restarted_ascent(&y, &AscentConfig { restarts: 4, ..Default::default() }, 1);
        let rounded: Vec<f64> = sphere.1.iter().map(|&v| if v >= 0.0 { 1.0 } else { -1.0 }).collect();
        assert!(gs.value_per_site >= energy(&y, &rounded).unwrap());
        let amp = amp_lite_opt(&y, 6, &EntrywisePoly::identity(), 2).unwrap();
        let amp_sign: Vec<f64> = amp.state.values().iter().map(|&v| if v >= 0.0 { 1.0 } else { -1.0 }).collect();
        assert!(gs.value_per_site >= energy(&y, &amp_sign).unwrap());
    }

    #[test]
    fn softmax_examples() {
        let y = PTensor::sample(2, 5, 3).unwrap();
        // k = 0 sums the representatives: only the pinned coordinate survives.
        let f0 = softmax_search_poly(&y, 0).unwrap();
        assert_eq!(f0.values()[0], 16.0);
        assert!(f0.values()[1..].iter().all(|&v| v == 0.0));
        let z = PTensor::zeros(2, 5).unwrap();
        for k in [0, 3, 40] {
            assert!(softmax_search_poly(&z, k).unwrap().values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn softmax_recovers_argmax() {
        let mut hits = 0;
        for seed in 0..100 {
            let y = PTensor::sample(2, 6, 1000 + seed).unwrap();
            let f = softmax_search_poly(&y, 40).unwrap();
            let s: Vec<f64> = f.values().iter().map(|&v| if v >= 0.0 { 1.0 } else { -1.0 }).collect();
            if ising_abs_maximizers(&y).unwrap().contains(&s) {
                hits += 1;
            }
        }
        assert!(hits >= 95, "hits {hits}");
    }

    #[test]
    fn power_iteration_examples() {
        let n = 8;
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            e[i * n + i] = if i == 0 { 5.0 } else { 1.0 };
        }
        let y = PTensor::from_dense(2, n, e).unwrap();
        let r = power_iteration_opt(&y, 200, 1).unwrap();
        assert!((r.state.values()[0].abs() - (n as f64).sqrt()).abs() < 1e-6);

        let g = PTensor::sample(2, 400, 3).unwrap();
        let r0 = power_iteration_opt(&g, 0, 5).unwrap();
        assert!(r0.quadratic_form_per_site.abs() < 5.0 / 20.0);
        assert!(power_iteration_opt(&PTensor::sample(3, 4, 1).unwrap(), 3, 0).is_err());
        assert!(power_iteration_opt(&PTensor::zeros(2, 4).unwrap(), 3, 0).is_err());
    }

    #[test]
    fn amp_lite_linear_is_power_iteration() {
        let y = PTensor::sample(2, 12, 6).unwrap();
        let r = amp_lite_opt(&y, 5, &EntrywisePoly::identity(), 4).unwrap();
        assert_eq!(r.degree, 5);
        assert_eq!(r.degree_bound, 32);
        let a = y.dense_entries().unwrap();
        let mut rng = Stream::derived(4, 0);
        let mut u = vec![0.0; 12];
        rng.fill_gaussian(&mut u);
        // shifted power iteration with the scaling of grad H
        let scale = 12f64.powf(-1.5);
        assert!(r.shift > 0.0);
        for _ in 0..5 {
            let uh = project_to_sphere(&u).unwrap();
            let v: Vec<f64> = (0..12)
                .map(|i| scale * (0..12).map(|j| (a[i * 12 + j] + a[j * 12 + i]) * uh[j]).sum::<f64>() + r.shift * uh[i])
                .collect();
            u = v;
        }
        let want = project_to_sphere(&u).unwrap();
        for (a, b) in want.iter().zip(r.state.values()) {
            assert!((a - b).abs() < 1e-10);
        }
        let t0 = amp_lite_opt(&y, 0, &EntrywisePoly::truncated_sinh(3), 4).unwrap();
        let mut rng = Stream::derived(4, 0);
        let mut u0 = vec![0.0; 12];
        rng.fill_gaussian(&mut u0);
        assert_eq!(t0.state.values(), u0.as_slice());
        assert_eq!(amp_lite_opt(&PTensor::zeros(3, 4).unwrap(), 2, &EntrywisePoly::identity(), 1),
            Err(Error::Diverged { iteration: 0 }));
    }

    #[test]
    fn entrywise_poly() {
        let s = EntrywisePoly::truncated_sinh(5);
        assert_eq!(s.degree(), 5);
        assert!((s.apply(1.0) - (1.0 + 1.0 / 6.0 + 1.0 / 120.0)).abs() < 1e-15);
        assert_eq!(EntrywisePoly::identity().apply(-3.5), -3.5);
    }

    #[test]
    fn interpolated_potential_matches_materialized() {
        let y = PTensor::sample(3, 6, 1).unwrap();
        let z = PTensor::sample(3, 6, 2).unwrap();
        let tau = 0.4;
        let t = interpolate(&y, &z, tau).unwrap();
        let ip = Interpolated { y: &y, y_prime: &z, tau };
        let mut rng = Stream::new(4, 0);
        let x = uniform_sphere(6, &mut rng);
        assert!((ip.energy(&x) - t.energy(&x)).abs() < 1e-12);
        for (a, b) in ip.euclidean_gradient(&x).iter().zip(t.euclidean_gradient(&x)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn operator_norm_of_rank_one() {
        // Y = u (x) u (x) u with |u| = 2 has operator norm 8.
        let n = 5;
        let u: Vec<f64> = (0..n).map(|i| if i == 1 { 2.0 } else { 0.0 }).collect();
        let mut e = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    e[(i * n + j) * n + k] = u[i] * u[j] * u[k];
                }
            }
        }
        let y = PTensor::from_dense(3, n, e).unwrap();
        assert!((operator_norm_estimate(&y, 3, 5, 1) - 8.0).abs() < 1e-9);
    }
}
