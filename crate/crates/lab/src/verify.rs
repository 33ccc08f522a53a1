//! Verification suites behind `ogplab verify`. Each check reports a value,
//! the bound it is held to, and how far inside the bound it landed.

use ogplab_core::dynamics::{langevin_simulate, InitialLaw, LangevinConfig};
use ogplab_core::graph::{edge_count, first_moment_t, FirstMomentQuery};
use ogplab_core::poly::{character_indices, hermite, hermite_indices, random_poly, Basis, BiasVector, FourierPoly};
use ogplab_core::rng::{derive_seed, uniform_sphere, Stream};
use ogplab_core::graph::GraphSample;
use ogplab_core::rounding::{norm_bound, round_indep, round_sign, round_sphere};
use ogplab_core::stability::{boolean_path_stability, gaussian_pair_stability, PathMode};
use ogplab_core::tensor::{energy, euclidean_gradient, project_tangent, spherical_gradient, PTensor, State};

use crate::error::{LabError, Result};
use crate::parallel::try_ordered_map;

pub const SUITES: [&str; 6] = ["hermite", "boolean-exact", "first-moment-exact", "gradient", "rounding", "stability"];

const ROUNDOFF: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    /// `bound - value` for upper bounds, `value - bound` for lower bounds.
    pub margin: f64,
    pub pass: bool,
}

impl Check {
    fn upper(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, margin: bound - value, pass: value <= bound }
    }

    /// Upper bound for quantities computed exactly, where equality cases
    /// (such as `p = 1/2` in the entropy bound) meet roundoff.
    fn upper_exact(name: impl Into<String>, value: f64, bound: f64) -> Self {
        let pass = value <= bound + ROUNDOFF * bound.abs().max(1.0);
        Self { name: name.into(), value, bound, margin: bound - value, pass }
    }

    fn lower_exact(name: impl Into<String>, value: f64, bound: f64) -> Self {
        let pass = value >= bound - ROUNDOFF * bound.abs().max(1.0);
        Self { name: name.into(), value, bound, margin: value - bound, pass }
    }

    fn lower(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, margin: value - bound, pass: value >= bound }
    }
}

pub fn run_suite(name: &str) -> Result<Vec<Check>> {
    match name {
        "hermite" => hermite_suite(),
        "boolean-exact" => boolean_exact_suite(),
        "first-moment-exact" => first_moment_suite(),
        "gradient" => gradient_suite(),
        "rounding" => rounding_suite(),
        "stability" => stability_suite(),
        other => Err(LabError::invalid("suite", format!("`{other}`: expected one of {}", SUITES.join(", ")))),
    }
}

/// Trapezoid rule for `E[g(Z)]` on `[-14, 14]`; spectrally accurate for
/// Gaussian-weighted polynomials.
fn gaussian_expectation(g: impl Fn(f64) -> f64) -> f64 {
    let h = 0.005;
    let k = (14.0 / h) as i64;
    let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    (-k..=k).map(|i| i as f64 * h).map(|x| g(x) * c * (-0.5 * x * x).exp()).sum::<f64>() * h
}

fn hermite_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for a in 0..=8 {
        for b in a..=8 {
            let ip = gaussian_expectation(|x| hermite(a, x) * hermite(b, x));
            worst = worst.max((ip - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    out.push(Check::upper("orthonormality residual, degree <= 8", worst, 1e-8));

    let idx = hermite_indices(4, 4);
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let f = random_poly(Basis::Hermite { dim: 4 }, 2, &idx, 1.0, seed)?;
        for rho in [0.0, 0.3, 0.7, 1.0] {
            let g = f.noise_operator(rho)?;
            for ((_, s), (_, t)) in f.terms().zip(g.terms()) {
                let want = s.coeff * rho.powi(s.index.total_degree() as i32);
                worst = worst.max((t.coeff - want).abs() / want.abs().max(f64::MIN_POSITIVE));
            }
        }
    }
    out.push(Check::upper("noise operator eigenrelation, relative", worst, 1e-15));

    let mut worst = 0.0f64;
    for m in [1usize, 3, 6, 8, 10] {
        let p: Vec<f64> = (0..m).map(|i| 0.1 + 0.8 * (i as f64 + 0.5) / m as f64).collect();
        let f = random_poly(Basis::Boolean(BiasVector::new(p.clone())?), 2, &character_indices(m, 3), 1.3, m as u64)?;
        let exact = enumerate_second_moment(&f, &p)?;
        worst = worst.max((exact - f.parseval_norm()).abs() / exact);
    }
    out.push(Check::upper("Parseval vs enumeration, m <= 10, relative", worst, 1e-12));
    Ok(out)
}

fn enumerate_second_moment(f: &FourierPoly, p: &[f64]) -> Result<f64> {
    let m = p.len();
    let mut v = vec![0.0; f.n_out()];
    let mut total = 0.0;
    for x in 0..1u64 << m {
        let w: f64 = (0..m).map(|i| if x >> i & 1 == 1 { p[i] } else { 1.0 - p[i] }).product();
        f.eval_bits(x, &mut v)?;
        total += w * v.iter().map(|a| a * a).sum::<f64>();
    }
    Ok(total)
}

/// `P(no c-bad edge on the path x -> y)` summed over all pairs.
fn brute_force_path(f: &FourierPoly, c: f64, p: &[f64]) -> Result<f64> {
    let m = p.len();
    let size = 1usize << m;
    let level = c * f.parseval_norm();
    let mut vals = vec![vec![0.0; f.n_out()]; size];
    for (x, v) in vals.iter_mut().enumerate() {
        f.eval_bits(x as u64, v)?;
    }
    let w = |x: usize| (0..m).map(|i| if x >> i & 1 == 1 { p[i] } else { 1.0 - p[i] }).product::<f64>();
    let d2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>();
    let mut total = 0.0;
    for x in 0..size {
        for y in 0..size {
            let mut z = x;
            let clean = (0..m).all(|i| {
                if (z ^ y) >> i & 1 == 0 {
                    return true;
                }
                let next = z ^ (1 << i);
                let e = d2(&vals[z], &vals[next]);
                z = next;
                !(e > 0.0 && e >= level)
            });
            if clean {
                total += w(x) * w(y);
            }
        }
    }
    Ok(total)
}

fn boolean_exact_suite() -> Result<Vec<Check>> {
    let m = 8;
    let bias = BiasVector::uniform(m, 0.5)?;
    let p = bias.as_slice().to_vec();
    let idx = character_indices(m, 2);
    let cs = [0.5, 1.0, 2.0];
    let rows = try_ordered_map(50, |i| {
        let f = random_poly(Basis::Boolean(bias.clone()), 1, &idx, 1.0, derive_seed(0xB001, i as u64))?;
        let mut checks = Vec::new();
        for &c in &cs {
            let r = boolean_path_stability(&f, c, PathMode::Exact, 0)?;
            let ctx = format!("poly {i}, c {c}");
            checks.push(Check::lower_exact(format!("{ctx}: P(no bad edge) vs lambda^(4D/c)"), r.estimate, r.bound));
            checks.push(Check::upper_exact(format!("{ctx}: (c/2) sum min(p, 1 - p) P(B_i) vs D"), r.influence_lhs, r.degree as f64));
            let pot = r.potential_lhs.expect("exact mode");
            checks.push(Check::upper_exact(format!("{ctx}: -E log q vs sum S(p)P(B_i)"), pot, r.potential_rhs));
            checks.push(Check::upper_exact(format!("{ctx}: sum S(p)P(B_i) vs entropy bound"), r.potential_rhs, r.entropy_rhs));
            if i < 4 {
                let bf = brute_force_path(&f, c, &p)?;
                checks.push(Check::upper(format!("{ctx}: recursion vs pair enumeration"), (bf - r.estimate).abs(), 1e-12));
            }
        }
        Ok(checks)
    })?;
    Ok(rows.into_iter().flatten().collect())
}

fn independent(n: usize, edges: u32, s: u32) -> bool {
    let mut e = 0;
    for i in 0..n {
        for j in i + 1..n {
            if edges >> e & 1 == 1 && s >> i & 1 == 1 && s >> j & 1 == 1 {
                return false;
            }
            e += 1;
        }
    }
    true
}

/// `E #{(S1, S2)}` at `j1 = j2` by summing over all graphs on 5 vertices.
pub fn enumerated_first_moment(n: usize, d: f64, k1: usize, k2: usize, l: usize) -> f64 {
    let m = edge_count(n);
    let q = d / n as f64;
    let sets = |k: usize| (0..1u32 << n).filter(move |s| s.count_ones() as usize == k).collect::<Vec<_>>();
    let (s1, s2) = (sets(k1), sets(k2));
    (0..1u32 << m)
        .map(|g| {
            let e = g.count_ones() as i32;
            let w = q.powi(e) * (1.0 - q).powi(m as i32 - e);
            let ok2: Vec<u32> = s2.iter().copied().filter(|&b| independent(n, g, b)).collect();
            let count: usize = s1
                .iter()
                .filter(|&&a| independent(n, g, a))
                .map(|&a| ok2.iter().filter(|&&b| (a & b).count_ones() as usize == l).count())
                .sum();
            w * count as f64
        })
        .sum()
}

fn first_moment_suite() -> Result<Vec<Check>> {
    let (n, d) = (5, 2.5);
    let m = edge_count(n);
    let mut combos = Vec::new();
    for k1 in 0..=n {
        for k2 in 0..=n {
            for l in 0..=k1.min(k2) {
                if k1 + k2 - l <= n {
                    combos.push((k1, k2, l));
                }
            }
        }
    }
    let rows = try_ordered_map(combos.len(), |i| {
        let (k1, k2, l) = combos[i];
        let want = enumerated_first_moment(n, d, k1, k2, l);
        let mut checks = Vec::new();
        for j in [0, m] {
            let got = first_moment_t(&FirstMomentQuery { n, d, k1, k2, l, j1: j, j2: j })?;
            let rel = (got.log_t.exp() - want).abs() / want;
            checks.push(Check::upper(format!("k1 {k1}, k2 {k2}, l {l}, j {j}: relative error"), rel, 1e-10));
        }
        Ok(checks)
    })?;
    Ok(rows.into_iter().flatten().collect())
}

/// Central differences of `H_n` along each coordinate, projected to the
/// tangent space.
pub fn fd_spherical_gradient(y: &PTensor, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let up = energy(y, &xp)?;
        xp[i] = x[i] - h;
        let down = energy(y, &xp)?;
        xp[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    project_tangent(x, &mut g);
    Ok(g)
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    num / den
}

fn gradient_suite() -> Result<Vec<Check>> {
    let mut out = try_ordered_map(20, |s| {
        let y = PTensor::sample(4, 20, derive_seed(0x6AD, s as u64))?;
        let x = uniform_sphere(20, &mut Stream::new(s as u64, 7));
        let g = spherical_gradient(&y, &State::spherical(x.clone())?)?;
        let fd = fd_spherical_gradient(&y, &x, 1e-5)?;
        Ok(Check::upper(format!("instance {s}: relative gradient error, p 4, n 20"), rel_err(&g, &fd), 1e-6))
    })?;
    let y0 = PTensor::sample(4, 20, 1)?;
    let x0 = uniform_sphere(20, &mut Stream::new(1, 9));
    let mut eg = euclidean_gradient(&y0, &x0)?;
    let radial: f64 = eg.iter().zip(&x0).map(|(a, b)| a * b).sum();
    // homogeneity: <grad H, x> = p H
    out.push(Check::upper("Euler identity <grad H, x> = p H", (radial - 4.0 * energy(&y0, &x0)?).abs(), 1e-12));
    project_tangent(&x0, &mut eg);
    let tangential: f64 = eg.iter().zip(&x0).map(|(a, b)| a * b).sum();
    out.push(Check::upper("projected gradient is tangent", tangential.abs(), 1e-12));

    let dt = 0.01;
    let mono = try_ordered_map(10, |s| {
        let y = PTensor::sample(3, 20, derive_seed(0x3C0, s as u64))?;
        let cfg = LangevinConfig { sigma: 0.0, horizon: 2.0, dt, init: InitialLaw::UniformSphere, seed: s as u64, record_every: 1 };
        let t = langevin_simulate(&y, &cfg)?;
        let worst = t.energies.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
        Ok(Check::upper(format!("seed {s}: largest per-step energy decrease, sigma 0"), worst, 10.0 * dt * dt))
    })?;
    out.extend(mono);
    Ok(out)
}

fn rounding_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut rng = Stream::new(0x40D, 0);
    let mut worst = f64::INFINITY;
    for case in 0..500 {
        let n = 1 + case % 40;
        let x = uniform_sphere(n, &mut rng);
        let y = uniform_sphere(n, &mut rng);
        let s = 1.0 / (n as f64).sqrt();
        let (x, y): (Vec<f64>, Vec<f64>) = (x.iter().map(|v| v * s).collect(), y.iter().map(|v| v * s).collect());
        let gamma = 0.05 + rng.uniform();
        let a = gamma * (1.0 + 5.0 * rng.uniform());
        let b = gamma * (1.0 + 5.0 * rng.uniform());
        let (lhs, rhs) = norm_bound(&x, &y, a, b, gamma)?;
        worst = worst.min(rhs - lhs + 1e-12 * rhs);
    }
    out.push(Check::lower("norm bound |x - y| <= |ax - by| / gamma, worst slack over 500 cases", worst, 0.0));

    let mut worst_norm = 0.0f64;
    let mut signs_ok = true;
    for case in 0..200 {
        let n = 1 + case % 50;
        let v: Vec<f64> = (0..n).map(|_| rng.gaussian() * 3.0).collect();
        if let Some(s) = round_sphere(&v).state() {
            let nn: f64 = s.values().iter().map(|a| a * a).sum();
            worst_norm = worst_norm.max((nn.sqrt() - (n as f64).sqrt()).abs());
        }
        signs_ok &= round_sign(&v).values().iter().all(|&a| a == 1.0 || a == -1.0);
    }
    out.push(Check::upper("sphere rounding radius error", worst_norm, 1e-12));
    out.push(Check::lower("sign rounding lands on the cube", signs_ok as u8 as f64, 1.0));

    let mut bad = 0usize;
    for case in 0..200u64 {
        let g = GraphSample::sample(30, 3.0, case)?;
        let v: Vec<f64> = (0..30).map(|_| rng.uniform() * 1.4).collect();
        let eta = rng.uniform() * 0.5;
        let r = round_indep(&v, &g, eta)?;
        let ok = g.is_independent(&r.set)
            && (r.failed || r.errors() as f64 <= eta * 30.0)
            && (!r.failed || r.set.is_empty())
            && r.set.iter().all(|&i| v[i] >= 1.0);
        bad += !ok as usize;
    }
    out.push(Check::upper("independent-set rounding invariants, violations in 200 cases", bad as f64, 0.0));
    Ok(out)
}

fn stability_suite() -> Result<Vec<Check>> {
    let rhos = [0.2, 0.5, 0.9];
    let rows = try_ordered_map(20 * rhos.len(), |job| {
        let (i, j) = (job / rhos.len(), job % rhos.len());
        let dim = 1 + i % 6;
        let degree = 1 + (i % 3) as u32;
        let f = random_poly(Basis::Hermite { dim }, 1, &hermite_indices(dim, degree), 1.0, derive_seed(0x57AB, i as u64))?;
        let r = gaussian_pair_stability(&f, rhos[j], &[], 100_000, derive_seed(0x57AC, job as u64))?;
        let ctx = format!("poly {i} (d {dim}, D {degree}), rho {}", rhos[j]);
        let mut checks = vec![Check::upper(
            format!("{ctx}: mean displacement - 3 SE vs 2(1 - rho^D)"),
            r.mean_displacement - 3.0 * r.displacement_std_error,
            r.displacement_bound,
        )];
        let t0 = &r.tails[0];
        checks.push(Check::upper(format!("{ctx}: tail frequency - 3 SE at t = (6e)^D"), t0.frequency - 3.0 * t0.std_error, t0.bound));
        Ok(checks)
    })?;
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        for s in ["hermite", "rounding", "first-moment-exact"] {
            let checks = run_suite(s).unwrap();
            assert!(!checks.is_empty());
            for c in &checks {
                assert!(c.pass, "{s}: {c:?}");
            }
        }
        assert!(run_suite("nope").is_err());
    }

    #[test]
    fn enumerated_first_moment_small_cases() {
        // one vertex set of size 1 and no edges involved
        assert!((enumerated_first_moment(5, 2.5, 1, 0, 0) - 5.0).abs() < 1e-12);
        // pairs of vertices: 10 sets, each has its edge absent w.p. 1/2
        assert!((enumerated_first_moment(5, 2.5, 2, 0, 0) - 5.0).abs() < 1e-12);
    }
}
