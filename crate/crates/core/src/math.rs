//! Float functions for `no_std` builds.

pub(crate) use libm::{cos, exp, fabs as abs, lgamma, log as ln, pow, sin, sqrt};

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const E: f64 = core::f64::consts::E;

#[inline]
pub(crate) fn powi(x: f64, k: i32) -> f64 {
    let mut base = if k < 0 { 1.0 / x } else { x };
    let mut e = k.unsigned_abs();
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `ln C(n, k)` through log-gamma; `-inf` outside `0 <= k <= n`.
pub(crate) fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    lgamma(n + 1.0) - lgamma(k + 1.0) - lgamma(n - k + 1.0)
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}
