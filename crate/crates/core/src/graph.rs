//! Erdős–Rényi graphs `G(n, d/n)` as edge-indicator vectors, the
//! independent-set objective, greedy / local / exact solvers, the
//! coordinate resampling path, and the first-moment calculator for pairs of
//! independent sets.
//!
//! Edges are indexed lexicographically: `(0,1), (0,2), ..., (n-2,n-1)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::{ln, ln_binomial, powi, sqrt};
use crate::rng::{derive_seed, Stream};

/// Largest `n` accepted by [`exact_max_indep`].
pub const EXACT_MIS_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct GraphSample {
    n: usize,
    d: f64,
    seed: Option<u64>,
    words: Vec<u64>,
}

#[inline]
pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of edge `{i, j}` (`i != j`) in the lexicographic order.
#[inline]
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn word_count(m: usize) -> usize {
    m.div_ceil(64)
}

impl GraphSample {
    /// Independent edges with probability `d / n`, deterministic in `seed`.
    /// Absent edges are skipped geometrically, so the cost is proportional to
    /// the number of edges present.
    pub fn sample(n: usize, d: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "need at least one vertex"));
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(invalid("d", "must be positive"));
        }
        if d >= n as f64 {
            return Err(invalid("d", "must be smaller than n"));
        }
        let m = edge_count(n);
        let mut words = vec![0u64; word_count(m)];
        let log_q = libm::log1p(-d / n as f64);
        let mut rng = Stream::new(seed, 0);
        let mut pos: u64 = 0;
        loop {
            let gap = ln(rng.uniform_open()) / log_q;
            if !(gap < (m as u64 - pos.min(m as u64)) as f64) {
                break;
            }
            pos += gap as u64;
            if pos >= m as u64 {
                break;
            }
            words[(pos / 64) as usize] |= 1u64 << (pos % 64);
            pos += 1;
        }
        Ok(Self { n, d, seed: Some(seed), words })
    }

    /// Graph from packed edge bits (bit `e` of word `e / 64`).
    pub fn from_words(n: usize, d: f64, words: Vec<u64>) -> Result<Self> {
        let m = edge_count(n);
        if words.len() != word_count(m) {
            return Err(Error::DimensionMismatch { expected: word_count(m), actual: words.len() });
        }
        if !m.is_multiple_of(64) {
            if let Some(&last) = words.last() {
                if last >> (m % 64) != 0 {
                    return Err(invalid("words", "bits set beyond the last edge"));
                }
            }
        }
        Ok(Self { n, d, seed: None, words })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let m = edge_count(n);
        let mut words = vec![0u64; word_count(m)];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::OutOfRange { index: i.max(j), limit: n });
            }
            if i == j {
                return Err(invalid("edges", "self-loops are not allowed"));
            }
            let e = edge_index(n, i, j);
            words[e / 64] |= 1 << (e % 64);
        }
        Ok(Self { n, d: 0.0, seed: None, words })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, d: 0.0, seed: None, words: vec![0; word_count(edge_count(n))] }
    }

    pub fn complete(n: usize) -> Self {
        let m = edge_count(n);
        let mut words = vec![u64::MAX; word_count(m)];
        if !m.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (m % 64)) - 1;
            }
        }
        Self { n, d: 0.0, seed: None, words }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Average-degree parameter `d` (edge probability `d / n`).
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `n (n - 1) / 2`.
    pub fn m(&self) -> usize {
        edge_count(self.n)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn bit(&self, e: usize) -> bool {
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.bit(edge_index(self.n, i, j))
    }

    pub fn num_edges(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edge bits as `0.0 / 1.0`, the input of Boolean polynomials.
    pub fn bits_f64(&self) -> Vec<f64> {
        (0..self.m()).map(|e| if self.bit(e) { 1.0 } else { 0.0 }).collect()
    }

    /// Present edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        let mut row = 0usize;
        let mut row_end = n.saturating_sub(1);
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let e = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                while e >= row_end {
                    row += 1;
                    row_end += n - 1 - row;
                }
                let row_start = row_end - (n - 1 - row);
                out.push((row, row + 1 + (e - row_start)));
            }
        }
        out
    }

    pub fn adjacency(&self) -> Adjacency {
        let edges = self.edges();
        let mut deg = vec![0usize; self.n + 1];
        for &(i, j) in &edges {
            deg[i + 1] += 1;
            deg[j + 1] += 1;
        }
        for v in 0..self.n {
            deg[v + 1] += deg[v];
        }
        let offsets = deg.clone();
        let mut fill = deg;
        let mut neighbors = vec![0u32; 2 * edges.len()];
        for &(i, j) in &edges {
            neighbors[fill[i]] = j as u32;
            fill[i] += 1;
            neighbors[fill[j]] = i as u32;
            fill[j] += 1;
        }
        Adjacency { offsets, neighbors }
    }

    /// True when no two vertices of `set` are adjacent.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        if set.len() <= 64 {
            return set.iter().enumerate().all(|(a, &i)| set[a + 1..].iter().all(|&j| !self.has_edge(i, j)));
        }
        let mut mark = vec![false; self.n];
        for &v in set {
            mark[v] = true;
        }
        self.edges().iter().all(|&(i, j)| !(mark[i] && mark[j]))
    }
}

/// Compressed neighbor lists.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Adjacency {
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// `F(x; Y) = |S(x)| 1{S(x) independent}` for a 0/1 vector `x`.
pub fn objective_f(x: &[f64], g: &GraphSample) -> Result<usize> {
    if x.len() != g.n {
        return Err(Error::DimensionMismatch { expected: g.n, actual: x.len() });
    }
    if x.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(invalid("x", "entries must be 0 or 1"));
    }
    let set: Vec<usize> = (0..g.n).filter(|&i| x[i] == 1.0).collect();
    Ok(if g.is_independent(&set) { set.len() } else { 0 })
}

/// Random-order greedy. Vertices are returned in the order they were taken.
pub fn greedy_indep(g: &GraphSample, seed: u64) -> Vec<usize> {
    let adj = g.adjacency();
    greedy_with(&adj, g.n, seed)
}

fn greedy_with(adj: &Adjacency, n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    Stream::new(seed, 1).shuffle(&mut order);
    let mut blocked = vec![false; n];
    let mut out = Vec::new();
    for v in order {
        if blocked[v] {
            continue;
        }
        out.push(v);
        blocked[v] = true;
        for &u in adj.neighbors(v) {
            blocked[u as usize] = true;
        }
    }
    out
}

/// Vertex rule of a local algorithm, applied to i.i.d. uniform labels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LocalRule {
    /// Join when the own label is strictly smallest within graph distance
    /// `radius`.
    MinLabel { radius: usize },
    /// Join when the own label is below `threshold` (radius 0).
    Threshold { threshold: f64 },
}

impl Default for LocalRule {
    fn default() -> Self {
        LocalRule::MinLabel { radius: 1 }
    }
}

/// Factor-of-i.i.d. independent set. Candidates with a candidate neighbor
/// are discarded together with it. Returned sorted.
pub fn local_indep(g: &GraphSample, rule: LocalRule, seed: u64) -> Vec<usize> {
    let n = g.n;
    let adj = g.adjacency();
    let mut rng = Stream::new(seed, 2);
    let z: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let cand: Vec<bool> = match rule {
        LocalRule::Threshold { threshold } => z.iter().map(|&v| v < threshold).collect(),
        LocalRule::MinLabel { radius } => (0..n).map(|v| min_in_ball(&adj, &z, v, radius)).collect(),
    };
    (0..n)
        .filter(|&v| cand[v] && adj.neighbors(v).iter().all(|&u| !cand[u as usize]))
        .collect()
}

fn min_in_ball(adj: &Adjacency, z: &[f64], v: usize, radius: usize) -> bool {
    if radius == 1 {
        return adj.neighbors(v).iter().all(|&u| z[v] < z[u as usize]);
    }
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert(v);
    let mut frontier = vec![v];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &w in &frontier {
            for &u in adj.neighbors(w) {
                let u = u as usize;
                if seen.insert(u) {
                    if z[u] <= z[v] {
                        return false;
                    }
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    true
}

/// Independence number by branch and bound on 64-bit vertex masks, for
/// `n <= 40`.
pub fn exact_max_indep(g: &GraphSample) -> Result<usize> {
    let n = g.n;
    if n > EXACT_MIS_LIMIT {
        return Err(Error::TooLarge { size: n, bound: EXACT_MIS_LIMIT });
    }
    let mut adj = vec![0u64; n];
    for (i, j) in g.edges() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = greedy_mask(all, &adj);
    branch(all, 0, &adj, &mut best);
    Ok(best as usize)
}

fn greedy_mask(mut cands: u64, adj: &[u64]) -> u32 {
    let mut size = 0;
    while cands != 0 {
        // min-degree greedy
        let mut v = cands.trailing_zeros() as usize;
        let mut dv = u32::MAX;
        let mut it = cands;
        while it != 0 {
            let u = it.trailing_zeros() as usize;
            it &= it - 1;
            let du = (adj[u] & cands).count_ones();
            if du < dv {
                dv = du;
                v = u;
            }
        }
        size += 1;
        cands &= !(adj[v] | 1 << v);
    }
    size
}

/// Number of cliques in a greedy clique cover of `cands`, an upper bound on
/// the independence number of the induced subgraph.
fn clique_cover_bound(mut cands: u64, adj: &[u64]) -> u32 {
    let mut cliques = 0;
    while cands != 0 {
        let v = cands.trailing_zeros() as usize;
        cands &= !(1 << v);
        let mut common = adj[v] & cands;
        while common != 0 {
            let u = common.trailing_zeros() as usize;
            cands &= !(1 << u);
            common &= adj[u] & !(1 << u);
        }
        cliques += 1;
    }
    cliques
}

fn branch(mut cands: u64, mut size: u32, adj: &[u64], best: &mut u32) {
    // take vertices of degree <= 1 in the candidate graph; always optimal
    loop {
        let mut taken = false;
        let mut it = cands;
        while it != 0 {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            if cands >> v & 1 == 0 {
                continue;
            }
            if (adj[v] & cands).count_ones() <= 1 {
                size += 1;
                cands &= !(adj[v] | 1 << v);
                taken = true;
            }
        }
        if !taken {
            break;
        }
    }
    if cands == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + clique_cover_bound(cands, adj) <= *best {
        return;
    }
    let mut v = 0;
    let mut dv = 0;
    let mut it = cands;
    while it != 0 {
        let u = it.trailing_zeros() as usize;
        it &= it - 1;
        let du = (adj[u] & cands).count_ones();
        if du > dv {
            dv = du;
            v = u;
        }
    }
    branch(cands & !(adj[v] | 1 << v), size + 1, adj, best);
    branch(cands & !(1 << v), size, adj, best);
}

/// `Z_i`: the first `i` edges (in edge order) taken from `y_prime`, the rest
/// from `y`.
pub fn resample_path(y: &GraphSample, y_prime: &GraphSample, i: usize) -> Result<GraphSample> {
    if y.n != y_prime.n {
        return Err(Error::DimensionMismatch { expected: y.n, actual: y_prime.n });
    }
    let m = y.m();
    if i > m {
        return Err(Error::OutOfRange { index: i, limit: m + 1 });
    }
    let full = i / 64;
    let mut words = y.words.clone();
    words[..full].copy_from_slice(&y_prime.words[..full]);
    if !i.is_multiple_of(64) {
        let mask = (1u64 << (i % 64)) - 1;
        words[full] = (y_prime.words[full] & mask) | (y.words[full] & !mask);
    }
    Ok(GraphSample { n: y.n, d: y.d, seed: None, words })
}

/// Which exponent `E` of the edge factor is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentVariant {
    /// `j1 = j2`: both sets in the same graph.
    Diagonal,
    /// `{j1, j2} = {0, m}`: independent graphs.
    Independent,
    /// Interior positions; worst-case lower bound on `E`.
    InteriorLowerBound,
}

impl ExponentVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            ExponentVariant::Diagonal => "diagonal",
            ExponentVariant::Independent => "independent",
            ExponentVariant::InteriorLowerBound => "interior-lower-bound",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstMomentQuery {
    pub n: usize,
    pub d: f64,
    pub k1: usize,
    pub k2: usize,
    pub l: usize,
    pub j1: usize,
    pub j2: usize,
}

impl FirstMomentQuery {
    /// `(alpha_1, alpha_2, beta)` from `k = alpha (log d / d) n`.
    pub fn scaled(&self) -> (f64, f64, f64) {
        let s = self.d / (ln(self.d) * self.n as f64);
        (self.k1 as f64 * s, self.k2 as f64 * s, self.l as f64 * s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstMoment {
    pub log_t: f64,
    pub variant: ExponentVariant,
    /// Exponent `E` of `(1 - d/n)`.
    pub exponent: f64,
}

fn pairs(k: usize) -> f64 {
    (k as f64) * (k as f64 - 1.0) / 2.0
}

/// Log of `C(n,l) C(n-l,k1-l) C(n-k1,k2-l) (1 - d/n)^E`; `-inf` when no
/// such pair of sets exists.
pub fn first_moment_t(q: &FirstMomentQuery) -> Result<FirstMoment> {
    let FirstMomentQuery { n, d, k1, k2, l, j1, j2 } = *q;
    if n == 0 {
        return Err(invalid("n", "need at least one vertex"));
    }
    if !(0.0..=n as f64).contains(&d) {
        return Err(invalid("d", "must lie in [0, n]"));
    }
    let m = edge_count(n);
    if j1 > j2 {
        return Err(invalid("j1", "path positions need j1 <= j2"));
    }
    if j2 > m {
        return Err(Error::OutOfRange { index: j2, limit: m + 1 });
    }
    let variant = if j1 == j2 {
        ExponentVariant::Diagonal
    } else if j1 == 0 && j2 == m {
        ExponentVariant::Independent
    } else {
        ExponentVariant::InteriorLowerBound
    };
    let exponent = match variant {
        ExponentVariant::Independent => pairs(k1) + pairs(k2),
        _ => pairs(k1) + pairs(k2) - pairs(l),
    };
    if l > k1.min(k2) || k1 + k2 - l > n {
        return Ok(FirstMoment { log_t: f64::NEG_INFINITY, variant, exponent });
    }
    let (nf, k1f, k2f, lf) = (n as f64, k1 as f64, k2 as f64, l as f64);
    let counting = ln_binomial(nf, lf) + ln_binomial(nf - lf, k1f - lf) + ln_binomial(nf - k1f, k2f - lf);
    let edge = if exponent == 0.0 { 0.0 } else { exponent * libm::log1p(-d / nf) };
    Ok(FirstMoment { log_t: counting + edge, variant, exponent })
}

/// `a1 - a1^2/2 + a2 - a2^2/2 - b + b^2/2`.
pub fn rate_exponent(a1: f64, a2: f64, b: f64) -> Result<f64> {
    if !(a1 >= 0.0 && a2 >= 0.0) {
        return Err(invalid("alpha", "must be nonnegative"));
    }
    if !(b >= 0.0 && b <= a1.min(a2)) {
        return Err(invalid("beta", "must lie in [0, min(alpha_1, alpha_2)]"));
    }
    Ok(rate_unchecked(a1, a2, b))
}

#[inline]
fn rate_unchecked(a1: f64, a2: f64, b: f64) -> f64 {
    a1 - a1 * a1 / 2.0 + a2 - a2 * a2 / 2.0 - b + b * b / 2.0
}

/// `1 + 1/sqrt(2)`.
pub fn ogp_alpha_threshold() -> f64 {
    1.0 + 1.0 / sqrt(2.0)
}

/// Normalized overlap band `(nu~_1, nu~_2)`; actual overlaps are
/// `nu_j = nu~_j k / n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapBand {
    pub nu_tilde1: f64,
    pub nu_tilde2: f64,
}

impl OverlapBand {
    pub fn scaled(&self, k: f64, n: f64) -> (f64, f64) {
        (self.nu_tilde1 * k / n, self.nu_tilde2 * k / n)
    }
}

/// Grid evidence that the rate exponent stays below `-delta` on the box.
#[derive(Clone, Debug, PartialEq)]
pub struct BandCertificate {
    pub resolution: f64,
    /// Grid for `alpha_1` and `alpha_2` over `[alpha, 2 + delta]`.
    pub alpha_grid: Vec<f64>,
    /// Grid for `beta` over the clamped window.
    pub beta_grid: Vec<f64>,
    /// Largest rate exponent over the product grid.
    pub grid_max: f64,
    pub argmax: (f64, f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OgpBand {
    pub alpha: f64,
    pub delta: f64,
    pub band: OverlapBand,
    pub certificate: BandCertificate,
}

/// `beta` window `[max(1 - delta, delta), min(1 + delta, alpha - delta)]`.
pub fn beta_window(alpha: f64, delta: f64) -> (f64, f64) {
    ((1.0 - delta).max(delta), (1.0 + delta).min(alpha - delta))
}

fn grid(lo: f64, hi: f64, resolution: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let steps = libm::ceil((hi - lo) / resolution) as usize;
    let mut g: Vec<f64> = (0..steps).map(|i| lo + i as f64 * resolution).collect();
    g.push(hi);
    g
}

fn alpha_term(a: f64) -> f64 {
    a - a * a / 2.0
}

fn beta_term(b: f64) -> f64 {
    -b + b * b / 2.0
}

/// Separable grid maximum of the rate exponent over
/// `[alpha, 2+delta]^2 x beta_window`.
pub fn band_certificate(alpha: f64, delta: f64, resolution: f64) -> BandCertificate {
    let alpha_grid = grid(alpha, 2.0 + delta, resolution);
    let (blo, bhi) = beta_window(alpha, delta);
    let beta_grid = grid(blo, bhi, resolution);
    let (mut a_best, mut a_arg) = (f64::NEG_INFINITY, alpha);
    for &a in &alpha_grid {
        if alpha_term(a) > a_best {
            a_best = alpha_term(a);
            a_arg = a;
        }
    }
    let (mut b_best, mut b_arg) = (f64::NEG_INFINITY, blo);
    for &b in &beta_grid {
        if beta_term(b) > b_best {
            b_best = beta_term(b);
            b_arg = b;
        }
    }
    BandCertificate {
        resolution,
        grid_max: rate_unchecked(a_arg, a_arg, b_arg),
        argmax: (a_arg, a_arg, b_arg),
        alpha_grid,
        beta_grid,
    }
}

/// Supremum of the rate exponent over the box. The `alpha` terms decrease
/// on `[1, inf)`, so they peak at the left endpoint; the convex `beta` term
/// peaks at a window endpoint.
fn band_sup(alpha: f64, delta: f64) -> f64 {
    let (blo, bhi) = beta_window(alpha, delta);
    let a = if alpha >= 1.0 { alpha_term(alpha) } else { 0.5 };
    2.0 * a + beta_term(blo).max(beta_term(bhi))
}

/// Largest `delta in (0, alpha - 1]` for which the rate exponent is at most
/// `-delta` on the band, found by bisection and certified on a grid.
pub fn ogp_band_solve(alpha: f64) -> Result<OgpBand> {
    if !(alpha > ogp_alpha_threshold()) || !alpha.is_finite() {
        return Err(Error::NoBand("alpha must exceed 1 + 1/sqrt(2)"));
    }
    let feasible = |delta: f64| band_sup(alpha, delta) <= -delta;
    let hi_cap = alpha - 1.0;
    let delta = if feasible(hi_cap) {
        hi_cap
    } else {
        let (mut lo, mut hi) = (0.0, hi_cap);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    if !(delta > 0.0) {
        return Err(Error::NoBand("no positive delta satisfies the exponent bound"));
    }
    let certificate = band_certificate(alpha, delta, 1e-3);
    if certificate.grid_max > -delta {
        return Err(Error::NoBand("grid certificate failed"));
    }
    let band = OverlapBand { nu_tilde1: (1.0 - delta) / alpha, nu_tilde2: (1.0 + delta) / alpha };
    Ok(OgpBand { alpha, delta, band, certificate })
}

/// `exp(-96 gamma D k log(n/d) / ((nu2 - nu1)^2 n))`.
pub fn delta_condition_threshold(n: f64, d: f64, k: f64, degree: f64, gamma: f64, nu1: f64, nu2: f64) -> Result<f64> {
    if !(n > 0.0 && d > 0.0 && k > 0.0 && gamma > 0.0 && degree >= 0.0) {
        return Err(invalid("delta-condition", "parameters must be positive"));
    }
    if !(nu2 > nu1) {
        return Err(invalid("nu2", "must exceed nu1"));
    }
    let gap = nu2 - nu1;
    Ok(libm::exp(-96.0 * gamma * degree * k * ln(n / d) / (gap * gap * n)))
}

/// Result of [`empirical_pair_overlap_scan`].
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapScan {
    /// `|S_1 ∩ S_2| / n` for each successful pair.
    pub overlaps: Vec<f64>,
    /// Histogram over `[0, 1]`.
    pub counts: Vec<u64>,
    /// Pairs for which a generator did not reach size `k`.
    pub failures: usize,
    /// Fraction of overlaps strictly inside the band, if supplied.
    pub mass_in_band: Option<f64>,
}

/// Greedy with up to `restarts` attempts until size `k`; truncated to the
/// first `k` vertices taken.
pub fn greedy_of_size(g: &GraphSample, adj: &Adjacency, k: usize, restarts: usize, seed: u64) -> Option<Vec<usize>> {
    (0..restarts.max(1)).find_map(|r| {
        let mut s = greedy_with(adj, g.n, derive_seed(seed, r as u64));
        (s.len() >= k).then(|| {
            s.truncate(k);
            s
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanConfig {
    pub k: usize,
    pub samples: usize,
    pub bins: usize,
    pub restarts: usize,
    pub band: Option<(f64, f64)>,
}

/// Overlaps of size-`k` independent sets drawn at two path positions. The
/// generator for sample `s` uses the same seed at both positions.
pub fn empirical_pair_overlap_scan(
    y: &GraphSample,
    y_prime: &GraphSample,
    positions: (usize, usize),
    cfg: &ScanConfig,
    seed: u64,
) -> Result<OverlapScan> {
    if cfg.bins == 0 {
        return Err(invalid("bins", "need at least one bin"));
    }
    let z1 = resample_path(y, y_prime, positions.0)?;
    let z2 = resample_path(y, y_prime, positions.1)?;
    let (a1, a2) = (z1.adjacency(), z2.adjacency());
    let n = y.n;
    let mut overlaps = Vec::with_capacity(cfg.samples);
    let mut failures = 0;
    let mut mark = vec![false; n];
    for s in 0..cfg.samples {
        let sd = derive_seed(seed, s as u64);
        let (Some(s1), Some(s2)) =
            (greedy_of_size(&z1, &a1, cfg.k, cfg.restarts, sd), greedy_of_size(&z2, &a2, cfg.k, cfg.restarts, sd))
        else {
            failures += 1;
            continue;
        };
        s1.iter().for_each(|&v| mark[v] = true);
        let inter = s2.iter().filter(|&&v| mark[v]).count();
        s1.iter().for_each(|&v| mark[v] = false);
        overlaps.push(inter as f64 / n as f64);
    }
    let mut counts = vec![0u64; cfg.bins];
    for &o in &overlaps {
        let b = ((o * cfg.bins as f64) as usize).min(cfg.bins - 1);
        counts[b] += 1;
    }
    let mass_in_band = cfg.band.map(|(lo, hi)| {
        if overlaps.is_empty() {
            0.0
        } else {
            overlaps.iter().filter(|&&o| o > lo && o < hi).count() as f64 / overlaps.len() as f64
        }
    });
    Ok(OverlapScan { overlaps, counts, failures, mass_in_band })
}

/// `n E[1/(deg + 1)]` for `deg ~ Bin(n - 1, d/n)`, the expected size of the
/// radius-1 min-label set.
pub fn min_label_expected_size(n: usize, d: f64) -> f64 {
    let p = d / n as f64;
    if p == 0.0 {
        return n as f64;
    }
    let nn = n as f64;
    nn * (1.0 - powi(1.0 - p, n as i32)) / (nn * p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Moments;

    fn cycle(n: usize) -> GraphSample {
        let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        GraphSample::from_edges(n, &e).unwrap()
    }

    #[test]
    fn edge_order_is_lexicographic() {
        let n = 6;
        let mut e = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(edge_index(n, i, j), e);
                assert_eq!(edge_index(n, j, i), e);
                e += 1;
            }
        }
        let g = GraphSample::complete(n);
        let edges = g.edges();
        assert_eq!(edges.len(), 15);
        assert_eq!(edges[0], (0, 1));
        assert_eq!(edges[14], (4, 5));
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sampling_examples() {
        let g = GraphSample::sample(50, 1e-9, 3).unwrap();
        assert_eq!(g.num_edges(), 0);
        let g = GraphSample::sample(1000, 5.0, 7).unwrap();
        let m = g.m() as f64;
        let p = 5.0 / 1000.0;
        let (mean, sd) = (m * p, (m * p * (1.0 - p)).sqrt());
        assert!((g.num_edges() as f64 - mean).abs() < 5.0 * sd);
        assert_eq!(g, GraphSample::sample(1000, 5.0, 7).unwrap());
        assert!(GraphSample::sample(10, 10.0, 1).is_err());
        assert!(GraphSample::sample(10, 0.0, 1).is_err());
    }

    #[test]
    fn edge_bits_are_uniform_over_positions() {
        // edges in the first and second half of the order
        let mut first = 0;
        let mut total = 0;
        for s in 0..20 {
            let g = GraphSample::sample(200, 10.0, s).unwrap();
            let half = g.m() / 2;
            for (i, j) in g.edges() {
                total += 1;
                if edge_index(200, i, j) < half {
                    first += 1;
                }
            }
        }
        let f = first as f64 / total as f64;
        assert!((f - 0.5).abs() < 5.0 * (0.25 / total as f64).sqrt());
    }

    #[test]
    fn objective_examples() {
        let g = GraphSample::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(objective_f(&[0.0, 0.0, 0.0], &g).unwrap(), 0);
        assert_eq!(objective_f(&[0.0, 1.0, 0.0], &g).unwrap(), 1);
        assert_eq!(objective_f(&[1.0, 1.0, 0.0], &g).unwrap(), 0);
        assert_eq!(objective_f(&[1.0, 0.0, 1.0], &g).unwrap(), 2);
        assert!(objective_f(&[0.5, 0.0, 0.0], &g).is_err());
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_indep(&GraphSample::empty(9), 1).len(), 9);
        assert_eq!(greedy_indep(&GraphSample::complete(9), 1).len(), 1);
        let g = GraphSample::sample(300, 6.0, 2).unwrap();
        assert!(g.is_independent(&greedy_indep(&g, 5)));
    }

    #[test]
    fn local_examples() {
        assert_eq!(local_indep(&GraphSample::empty(7), LocalRule::default(), 1).len(), 7);
        let g = GraphSample::from_edges(2, &[(0, 1)]).unwrap();
        for seed in 0..10 {
            let s = local_indep(&g, LocalRule::default(), seed);
            let mut rng = Stream::new(seed, 2);
            let z = [rng.uniform(), rng.uniform()];
            assert_eq!(s, vec![if z[0] < z[1] { 0 } else { 1 }]);
        }
        let g = GraphSample::sample(500, 8.0, 4).unwrap();
        for rule in [LocalRule::MinLabel { radius: 2 }, LocalRule::Threshold { threshold: 0.3 }] {
            assert!(g.is_independent(&local_indep(&g, rule, 9)));
        }
    }

    #[test]
    fn exact_mis_examples() {
        assert_eq!(exact_max_indep(&GraphSample::empty(7)).unwrap(), 7);
        assert_eq!(exact_max_indep(&cycle(5)).unwrap(), 2);
        assert_eq!(exact_max_indep(&cycle(8)).unwrap(), 4);
        assert_eq!(exact_max_indep(&GraphSample::complete(12)).unwrap(), 1);
        for seed in 0..20 {
            let g = GraphSample::sample(20, 5.0, seed).unwrap();
            let e = exact_max_indep(&g).unwrap();
            assert!(e >= greedy_indep(&g, seed).len());
            assert!(!greedy_indep(&g, seed).is_empty());
        }
        assert!(exact_max_indep(&GraphSample::empty(41)).is_err());
    }

    #[test]
    fn exact_mis_matches_brute_force() {
        for seed in 0..10 {
            let g = GraphSample::sample(14, 4.0, 100 + seed).unwrap();
            let mut best = 0;
            for mask in 0u32..1 << 14 {
                let set: Vec<usize> = (0..14).filter(|&i| mask >> i & 1 == 1).collect();
                if set.len() > best && g.is_independent(&set) {
                    best = set.len();
                }
            }
            assert_eq!(exact_max_indep(&g).unwrap(), best);
        }
    }

    #[test]
    fn exact_mis_at_forty_vertices() {
        let g = GraphSample::sample(40, 5.0, 1).unwrap();
        let e = exact_max_indep(&g).unwrap();
        assert!(e >= greedy_indep(&g, 0).len());
    }

    #[test]
    fn resample_path_examples() {
        let y = GraphSample::sample(12, 3.0, 1).unwrap();
        let z = GraphSample::sample(12, 3.0, 2).unwrap();
        let m = y.m();
        assert_eq!(resample_path(&y, &z, 0).unwrap().words(), y.words());
        assert_eq!(resample_path(&y, &z, m).unwrap().words(), z.words());
        assert!(resample_path(&y, &z, m + 1).is_err());
        for i in 0..m {
            let a = resample_path(&y, &z, i).unwrap();
            let b = resample_path(&y, &z, i + 1).unwrap();
            let diff: Vec<usize> = (0..m).filter(|&e| a.bit(e) != b.bit(e)).collect();
            assert!(diff.is_empty() || diff == vec![i]);
        }
        // differ only in edge 3 (1-based); position 5 is already past it
        let base = GraphSample::from_edges(5, &[(0, 1), (2, 4)]).unwrap();
        let other = GraphSample::from_edges(5, &[(0, 1), (2, 4), (0, 3)]).unwrap();
        assert_eq!(edge_index(5, 0, 3), 2);
        assert_eq!(resample_path(&base, &other, 5).unwrap().words(), other.words());
    }

    #[test]
    fn first_moment_counting() {
        let q = FirstMomentQuery { n: 4, d: 0.0, k1: 1, k2: 1, l: 0, j1: 0, j2: 0 };
        let r = first_moment_t(&q).unwrap();
        assert!((r.log_t - 12f64.ln()).abs() < 1e-12);
        let bad = FirstMomentQuery { l: 2, ..q };
        assert_eq!(first_moment_t(&bad).unwrap().log_t, f64::NEG_INFINITY);
        let over = FirstMomentQuery { k1: 3, k2: 3, l: 1, ..q };
        assert_eq!(first_moment_t(&over).unwrap().log_t, f64::NEG_INFINITY);
        let v = |j1, j2| first_moment_t(&FirstMomentQuery { n: 5, d: 1.0, k1: 2, k2: 2, l: 1, j1, j2 }).unwrap().variant;
        assert_eq!(v(3, 3), ExponentVariant::Diagonal);
        assert_eq!(v(0, 10), ExponentVariant::Independent);
        assert_eq!(v(2, 7), ExponentVariant::InteriorLowerBound);
    }

    #[test]
    fn rate_exponent_examples() {
        assert!((rate_exponent(1.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let a = ogp_alpha_threshold();
        assert!((a - a * a / 2.0 - 0.25).abs() < 1e-15);
        assert_eq!(beta_term(1.0), -0.5);
        let (x, y) = (rate_exponent(1.3, 2.1, 0.7).unwrap(), rate_exponent(2.1, 1.3, 0.7).unwrap());
        assert!((x - y).abs() < 1e-15);
        assert!(rate_exponent(1.0, 1.0, 1.5).is_err());
        assert!(rate_exponent(-1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn ogp_band_examples() {
        assert!(ogp_band_solve(ogp_alpha_threshold()).is_err());
        assert!(ogp_band_solve(1.70).is_err());
        let b = ogp_band_solve(1.75).unwrap();
        // closed form: delta^2/2 + delta = 1/2 - 2 a(alpha)
        let want = -1.0 + (1.0f64 + 2.0 * (0.5 - 2.0 * alpha_term(1.75))).sqrt();
        assert!((b.delta - want).abs() < 1e-12, "{}", b.delta);
        assert!(b.certificate.grid_max <= -b.delta);
        let b2 = ogp_band_solve(2.0).unwrap();
        assert!(b2.delta > b.delta);
        assert!((b.band.nu_tilde1 - (1.0 - b.delta) / 1.75).abs() < 1e-15);
    }

    #[test]
    fn delta_condition_examples() {
        assert_eq!(delta_condition_threshold(1e6, 20.0, 50.0, 0.0, 1.0, 0.1, 0.2).unwrap(), 1.0);
        let a = delta_condition_threshold(1e6, 20.0, 50.0, 1.0, 1.0, 0.1, 0.2).unwrap().ln();
        let b = delta_condition_threshold(1e6, 20.0, 50.0, 2.0, 1.0, 0.1, 0.2).unwrap().ln();
        assert!(a < 0.0 && a.is_finite());
        assert!((b - 2.0 * a).abs() < 1e-12 * b.abs());
        assert!(delta_condition_threshold(1e3, 20.0, 50.0, 1.0, 1.0, 0.2, 0.2).is_err());
    }

    #[test]
    fn min_label_baseline_matches_simulation() {
        let sizes: Moments = (0..40)
            .map(|s| {
                let g = GraphSample::sample(2000, 10.0, s).unwrap();
                local_indep(&g, LocalRule::default(), s + 50).len() as f64
            })
            .collect();
        let want = min_label_expected_size(2000, 10.0);
        assert!((sizes.mean() - want).abs() < 4.0 * sizes.std_error(), "{} vs {want}", sizes.mean());
        assert!((sizes.mean() / want - 1.0).abs() < 0.05);
    }

    #[test]
    fn overlap_scan_examples() {
        let y = GraphSample::sample(300, 5.0, 1).unwrap();
        let cfg = ScanConfig { k: 20, samples: 10, bins: 50, restarts: 3, band: Some((0.01, 0.05)) };
        let r = empirical_pair_overlap_scan(&y, &y, (0, 0), &cfg, 3).unwrap();
        assert_eq!(r.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert!(r.overlaps.iter().all(|&o| o == 20.0 / 300.0));
        assert_eq!(r.mass_in_band, Some(0.0));
        let big = ScanConfig { k: 1000, ..cfg };
        assert_eq!(empirical_pair_overlap_scan(&y, &y, (0, 0), &big, 3).unwrap().failures, 10);
    }
}
