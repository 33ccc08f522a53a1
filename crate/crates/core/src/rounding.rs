//! Rounding of raw polynomial outputs to the sphere, the cube and
//! independent sets, and the replica-averaged success predicates.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::graph::GraphSample;
use crate::math::{abs, dot, norm, sqrt};
use crate::stats::{frequency_std_error, Moments};
use crate::tensor::{energy, PTensor, State};

/// Outcome of normalizing to the sphere; the zero vector has no image.
#[derive(Clone, Debug, PartialEq)]
pub enum SphereRounding {
    Point(State),
    Infinity,
}

impl SphereRounding {
    pub fn state(&self) -> Option<&State> {
        match self {
            SphereRounding::Point(s) => Some(s),
            SphereRounding::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SphereRounding::Infinity)
    }
}

/// `sqrt(n) v / |v|`.
pub fn round_sphere(v: &[f64]) -> SphereRounding {
    let nv = norm(v);
    if nv == 0.0 || !nv.is_finite() || v.is_empty() {
        return SphereRounding::Infinity;
    }
    let s = sqrt(v.len() as f64) / nv;
    let x: Vec<f64> = v.iter().map(|a| a * s).collect();
    match State::spherical(x) {
        Ok(st) => SphereRounding::Point(st),
        Err(_) => SphereRounding::Infinity,
    }
}

/// Entrywise sign with `sgn(0) = +1`.
pub fn round_sign(v: &[f64]) -> State {
    let x = v.iter().map(|&a| if a >= 0.0 { 1.0 } else { -1.0 }).collect();
    State::ising(x).expect("signs are +-1")
}

/// The sets behind `V_f^eta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndepRounding {
    /// The returned set: `A~`, or empty on failure. Sorted.
    pub set: Vec<usize>,
    /// `|A|`, vertices with output `>= 1`.
    pub selected: usize,
    /// `|A \ A~|`, selected vertices with a selected neighbor.
    pub conflicts: usize,
    /// `|B|`, vertices with output in `(1/2, 1)`.
    pub undecided: usize,
    pub failed: bool,
}

impl IndepRounding {
    pub fn errors(&self) -> usize {
        self.conflicts + self.undecided
    }
}

/// `A~` if `|A \ A~| + |B| <= eta n`, else the empty set.
pub fn round_indep(v: &[f64], g: &GraphSample, eta: f64) -> Result<IndepRounding> {
    let n = g.n();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: v.len() });
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(invalid("eta", "must lie in [0, 1]"));
    }
    let in_a: Vec<bool> = v.iter().map(|&a| a >= 1.0).collect();
    let selected = in_a.iter().filter(|&&b| b).count();
    let undecided = v.iter().filter(|&&a| a > 0.5 && a < 1.0).count();
    let mut clash = alloc::vec![false; n];
    for (i, j) in g.edges() {
        if in_a[i] && in_a[j] {
            clash[i] = true;
            clash[j] = true;
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| in_a[i] && !clash[i]).collect();
    let conflicts = selected - kept.len();
    let failed = (conflicts + undecided) as f64 > eta * n as f64;
    let set = if failed { Vec::new() } else { kept };
    Ok(IndepRounding { set, selected, conflicts, undecided, failed })
}

/// The objective thresholds of the three success notions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    /// `H_n(g_f) >= mu` and `|f| >= gamma sqrt(n)`; `E|f|^2 = n`.
    Sphere { mu: f64 },
    /// `H_n(sgn f) >= mu` and `|f_i| >= gamma` on `(1 - eta) n` coordinates;
    /// `E|f|^2 = n`.
    Ising { mu: f64 },
    /// `|V_f^eta| >= k`; `E|f|^2 <= gamma k`.
    Indep { k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuccessSpec {
    pub target: Target,
    pub delta: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl SuccessSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(invalid("delta", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(invalid("eta", "must lie in [0, 1]"));
        }
        match self.target {
            Target::Indep { .. } if !(self.gamma >= 1.0) => Err(invalid("gamma", "must be at least 1")),
            Target::Sphere { .. } | Target::Ising { .. } if !(self.gamma > 0.0) => {
                Err(invalid("gamma", "must be positive"))
            }
            _ => Ok(()),
        }
    }

    pub fn domain_name(&self) -> &'static str {
        match self.target {
            Target::Sphere { .. } => "spherical",
            Target::Ising { .. } => "ising",
            Target::Indep { .. } => "indep",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Instance<'a> {
    Tensor(&'a PTensor),
    Graph(&'a GraphSample),
}

/// One draw of `(Y, omega)` and the raw output `f(Y, omega)`.
#[derive(Clone, Debug)]
pub struct Replica<'a> {
    pub instance: Instance<'a>,
    pub output: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Optimizing,
    NotOptimizing,
    /// The failure frequency is within three standard errors of `delta`.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Optimizing => "optimizing",
            Verdict::NotOptimizing => "not-optimizing",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuccessReport {
    pub replicas: usize,
    pub successes: usize,
    pub success_freq: f64,
    pub success_std_error: f64,
    /// Replica mean of `|f|^2`.
    pub normalization: f64,
    pub normalization_std_error: f64,
    pub normalization_ok: bool,
    pub verdict: Verdict,
}

/// Standard errors of slack for the verdict.
pub const VERDICT_SIGMAS: f64 = 3.0;

/// Replica-averaged success predicate. Normalization and the failure
/// frequency are judged with a three-standard-error margin; `delta >= 1`
/// passes unconditionally.
pub fn check_success(replicas: &[Replica<'_>], spec: &SuccessSpec) -> Result<SuccessReport> {
    spec.validate()?;
    if replicas.is_empty() {
        return Err(Error::Empty("replicas"));
    }
    let mut norms = Moments::default();
    let mut successes = 0;
    let mut n_out = 0;
    for r in replicas {
        let f = &r.output;
        let n = f.len();
        n_out = n;
        let sq = dot(f, f);
        norms.push(sq);
        let ok = match (spec.target, r.instance) {
            (Target::Sphere { mu }, Instance::Tensor(y)) => match round_sphere(f) {
                SphereRounding::Point(x) => {
                    energy(y, x.values())? >= mu && sqrt(sq) >= spec.gamma * sqrt(n as f64)
                }
                SphereRounding::Infinity => false,
            },
            (Target::Ising { mu }, Instance::Tensor(y)) => {
                let big = f.iter().filter(|&&a| abs(a) >= spec.gamma).count();
                energy(y, round_sign(f).values())? >= mu && big as f64 >= (1.0 - spec.eta) * n as f64
            }
            (Target::Indep { k }, Instance::Graph(g)) => round_indep(f, g, spec.eta)?.set.len() >= k,
            _ => return Err(invalid("instance", "instance type does not match the success target")),
        };
        successes += ok as usize;
    }
    let count = replicas.len();
    let success_freq = successes as f64 / count as f64;
    let success_std_error = frequency_std_error(success_freq, count as u64);
    let normalization = norms.mean();
    let normalization_std_error = norms.std_error();
    let slack = VERDICT_SIGMAS * normalization_std_error + 1e-9 * normalization.max(1.0);
    let normalization_ok = match spec.target {
        Target::Sphere { .. } | Target::Ising { .. } => abs(normalization - n_out as f64) <= slack,
        Target::Indep { k } => normalization <= spec.gamma * k as f64 + slack,
    };
    let failure = 1.0 - success_freq;
    let margin = VERDICT_SIGMAS * success_std_error;
    let verdict = if spec.delta >= 1.0 {
        Verdict::Optimizing
    } else if !normalization_ok || failure - margin > spec.delta {
        Verdict::NotOptimizing
    } else if failure + margin <= spec.delta {
        Verdict::Optimizing
    } else {
        Verdict::Inconclusive
    };
    Ok(SuccessReport {
        replicas: count,
        successes,
        success_freq,
        success_std_error,
        normalization,
        normalization_std_error,
        normalization_ok,
        verdict,
    })
}

/// Both sides of `|x - y| <= |a x - b y| / gamma` for unit `x, y` and
/// `a, b >= gamma`.
pub fn norm_bound(x: &[f64], y: &[f64], a: f64, b: f64, gamma: f64) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: y.len() });
    }
    if !(gamma > 0.0 && a >= gamma && b >= gamma) {
        return Err(invalid("gamma", "need a, b >= gamma > 0"));
    }
    let lhs = norm(&x.iter().zip(y).map(|(u, v)| u - v).collect::<Vec<_>>());
    let rhs = norm(&x.iter().zip(y).map(|(u, v)| a * u - b * v).collect::<Vec<_>>()) / gamma;
    Ok((lhs, rhs))
}
