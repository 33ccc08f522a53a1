//! Low-degree polynomials in orthonormal bases.
//!
//! Inputs are either standard Gaussian vectors, expanded in products of
//! normalized Hermite polynomials, or independent Bernoulli vectors with
//! biases `p_i`, expanded in the characters
//! `phi_S(y) = prod_{i in S} (y_i - p_i) / sqrt(p_i (1 - p_i))`.
//! Both bases are orthonormal, so second moments, noise operators and
//! influences are exact coefficient manipulations.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::{abs, ln, pow, sqrt};
use crate::rng::Stream;
use crate::stats::Moments;

/// Largest total degree a polynomial may declare.
pub const MAX_DEGREE: u32 = 16;
/// Largest number of stored terms across all outputs.
pub const MAX_TERMS: usize = 10_000;

/// Normalized probabilists' Hermite polynomial `h_l(x)`, `E[h_l(Z)^2] = 1`.
///
/// Uses the recurrence `h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k + 1)`.
pub fn hermite(degree: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..degree {
        let next = (x * cur - sqrt(k as f64) * prev) / sqrt(k as f64 + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Writes `h_0(x), ..., h_{out.len()-1}(x)` into `out`.
pub fn hermite_table(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 1..out.len().saturating_sub(1) {
        out[k + 1] = (x * out[k] - sqrt(k as f64) * out[k - 1]) / sqrt(k as f64 + 1.0);
    }
}

/// Binary entropy in nats with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * ln(q) };
    term(p) + term(1.0 - p)
}

/// A basis element: sorted `(coordinate, degree)` pairs with positive degrees.
///
/// On the Boolean cube every degree is 1 and the index is a subset `S`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex {
    factors: Vec<(usize, u32)>,
}

impl MultiIndex {
    pub fn constant() -> Self {
        Self::default()
    }

    /// Hermite product `prod_j h_{l_j}(y_j)`. Repeated coordinates add up.
    pub fn hermite(factors: &[(usize, u32)]) -> Self {
        let mut f: Vec<(usize, u32)> = factors.iter().copied().filter(|&(_, l)| l > 0).collect();
        f.sort_unstable();
        let mut merged: Vec<(usize, u32)> = Vec::with_capacity(f.len());
        for (c, l) in f {
            match merged.last_mut() {
                Some((lc, ll)) if *lc == c => *ll += l,
                _ => merged.push((c, l)),
            }
        }
        Self { factors: merged }
    }

    /// Character `phi_S`. Fails on repeated coordinates.
    pub fn character(subset: &[usize]) -> Result<Self> {
        let mut s = subset.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("subset", "repeated coordinate"));
        }
        Ok(Self { factors: s.into_iter().map(|c| (c, 1)).collect() })
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|&(_, l)| l).sum()
    }

    /// Number of distinct coordinates, `|S|` for characters.
    pub fn support_size(&self) -> usize {
        self.factors.len()
    }

    pub fn contains(&self, coord: usize) -> bool {
        self.factors.binary_search_by_key(&coord, |&(c, _)| c).is_ok()
    }

    pub fn max_coord(&self) -> Option<usize> {
        self.factors.last().map(|&(c, _)| c)
    }

    fn is_multilinear(&self) -> bool {
        self.factors.iter().all(|&(_, l)| l == 1)
    }
}

/// Bernoulli biases `p_i in (0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasVector {
    p: Vec<f64>,
}

impl BiasVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
            return Err(invalid("bias", "every p_i must lie in (0, 1)"));
        }
        Ok(Self { p })
    }

    pub fn uniform(m: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; m])
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// `min_i min(p_i, 1 - p_i)`; 1/2 for an empty vector.
    pub fn lambda(&self) -> f64 {
        self.p.iter().map(|&q| q.min(1.0 - q)).fold(0.5, f64::min)
    }

    /// `phi_i(y_i)` for `y_i in {0, 1}`.
    #[inline]
    pub fn character_value(&self, i: usize, bit: bool) -> f64 {
        let p = self.p[i];
        let y = if bit { 1.0 } else { 0.0 };
        (y - p) / sqrt(p * (1.0 - p))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Basis {
    /// Hermite products on `R^dim` under the standard Gaussian.
    Hermite { dim: usize },
    /// Biased characters on `{0,1}^m`.
    Boolean(BiasVector),
}

impl Basis {
    pub fn input_dim(&self) -> usize {
        match self {
            Basis::Hermite { dim } => *dim,
            Basis::Boolean(b) => b.len(),
        }
    }

    pub fn is_boolean(&self) -> bool {
        matches!(self, Basis::Boolean(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub index: MultiIndex,
    pub coeff: f64,
}

impl Term {
    pub fn new(index: MultiIndex, coeff: f64) -> Self {
        Self { index, coeff }
    }
}

/// Vector-valued polynomial `f = (f_1, ..., f_k)` with orthonormal-basis
/// coefficients per output coordinate.
#[derive(Clone, Debug)]
pub struct FourierPoly {
    basis: Basis,
    outputs: Vec<Vec<Term>>,
    degree: u32,
    // per input coordinate, the largest degree that appears (Hermite tables)
    coord_degree: Vec<u32>,
}

impl PartialEq for FourierPoly {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.outputs == other.outputs
    }
}

impl FourierPoly {
    pub fn new(basis: Basis, outputs: Vec<Vec<Term>>) -> Result<Self> {
        let dim = basis.input_dim();
        let mut coord_degree = vec![0u32; dim];
        let mut degree = 0;
        let mut n_terms = 0usize;
        for term in outputs.iter().flatten() {
            n_terms += 1;
            if let Some(c) = term.index.max_coord() {
                if c >= dim {
                    return Err(Error::OutOfRange { index: c, limit: dim });
                }
            }
            if basis.is_boolean() && !term.index.is_multilinear() {
                return Err(Error::BasisMismatch("Boolean characters are multilinear"));
            }
            if !term.coeff.is_finite() {
                return Err(invalid("coeff", "coefficients must be finite"));
            }
            for &(c, l) in term.index.factors() {
                coord_degree[c] = coord_degree[c].max(l);
            }
            degree = degree.max(term.index.total_degree());
        }
        if degree > MAX_DEGREE {
            return Err(Error::TooLarge { size: degree as usize, bound: MAX_DEGREE as usize });
        }
        if n_terms > MAX_TERMS {
            return Err(Error::TooLarge { size: n_terms, bound: MAX_TERMS });
        }
        Ok(Self { basis, outputs, degree, coord_degree })
    }

    /// Scalar polynomial from a single list of terms.
    pub fn scalar(basis: Basis, terms: Vec<Term>) -> Result<Self> {
        Self::new(basis, vec![terms])
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn outputs(&self) -> &[Vec<Term>] {
        &self.outputs
    }

    pub fn n_out(&self) -> usize {
        self.outputs.len()
    }

    pub fn input_dim(&self) -> usize {
        self.basis.input_dim()
    }

    /// Largest total degree over all stored terms.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Term)> {
        self.outputs
            .iter()
            .enumerate()
            .flat_map(|(j, ts)| ts.iter().map(move |t| (j, t)))
    }

    /// `E |f(Y)|_2^2`, the sum of squared coefficients.
    pub fn parseval_norm(&self) -> f64 {
        self.terms().map(|(_, t)| t.coeff * t.coeff).sum()
    }

    /// Evaluates `f(y)`. Boolean inputs must be 0/1 valued.
    pub fn eval(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n_out()];
        self.eval_into(y, &mut out)?;
        Ok(out)
    }

    pub fn eval_into(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        if y.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: y.len() });
        }
        if out.len() != self.n_out() {
            return Err(Error::DimensionMismatch { expected: self.n_out(), actual: out.len() });
        }
        match &self.basis {
            Basis::Hermite { .. } => {
                let (offsets, table) = self.hermite_values(y);
                for (o, terms) in out.iter_mut().zip(&self.outputs) {
                    *o = terms
                        .iter()
                        .map(|t| {
                            t.index
                                .factors()
                                .iter()
                                .fold(t.coeff, |acc, &(c, l)| acc * table[offsets[c] + l as usize])
                        })
                        .sum();
                }
            }
            Basis::Boolean(bias) => {
                if y.iter().any(|&v| v != 0.0 && v != 1.0) {
                    return Err(Error::BasisMismatch("Boolean input must be 0/1 valued"));
                }
                let phi: Vec<f64> = y
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| bias.character_value(i, v == 1.0))
                    .collect();
                self.eval_with_characters(&phi, out);
            }
        }
        Ok(())
    }

    /// Boolean evaluation at the point whose coordinate `i` is bit `i` of
    /// `mask`; requires `m <= 64`.
    pub fn eval_bits(&self, mask: u64, out: &mut [f64]) -> Result<()> {
        let Basis::Boolean(bias) = &self.basis else {
            return Err(Error::BasisMismatch("bit evaluation needs the Boolean basis"));
        };
        if bias.len() > 64 {
            return Err(Error::TooLarge { size: bias.len(), bound: 64 });
        }
        let phi: Vec<f64> = (0..bias.len())
            .map(|i| bias.character_value(i, mask >> i & 1 == 1))
            .collect();
        self.eval_with_characters(&phi, out);
        Ok(())
    }

    fn eval_with_characters(&self, phi: &[f64], out: &mut [f64]) {
        for (o, terms) in out.iter_mut().zip(&self.outputs) {
            *o = terms
                .iter()
                .map(|t| t.index.factors().iter().fold(t.coeff, |acc, &(c, _)| acc * phi[c]))
                .sum();
        }
    }

    fn hermite_values(&self, y: &[f64]) -> (Vec<usize>, Vec<f64>) {
        let mut offsets = Vec::with_capacity(y.len());
        let mut len = 0;
        for &l in &self.coord_degree {
            offsets.push(len);
            len += l as usize + 1;
        }
        let mut table = vec![0.0; len];
        for (c, &l) in self.coord_degree.iter().enumerate() {
            if l > 0 {
                hermite_table(y[c], &mut table[offsets[c]..offsets[c] + l as usize + 1]);
            }
        }
        (offsets, table)
    }

    /// Ornstein-Uhlenbeck noise operator: each term of degree `D` scales by `rho^D`.
    pub fn noise_operator(&self, rho: f64) -> Result<Self> {
        if !matches!(self.basis, Basis::Hermite { .. }) {
            return Err(Error::BasisMismatch("noise operator acts on the Hermite basis"));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(invalid("rho", "must lie in [0, 1]"));
        }
        Ok(self.map_terms(|t| Some(t.coeff * pow(rho, t.index.total_degree() as f64))))
    }

    /// `I(f) = sum_S |S| f_hat(S)^2`, summed over outputs.
    pub fn total_influence(&self) -> Result<f64> {
        if !self.basis.is_boolean() {
            return Err(Error::BasisMismatch("total influence is defined on the Boolean basis"));
        }
        Ok(self
            .terms()
            .map(|(_, t)| t.index.support_size() as f64 * t.coeff * t.coeff)
            .sum())
    }

    /// `L_i f = sum_{S containing i} f_hat(S) phi_S`.
    pub fn laplacian(&self, i: usize) -> Result<Self> {
        if !self.basis.is_boolean() {
            return Err(Error::BasisMismatch("Laplacian is defined on the Boolean basis"));
        }
        if i >= self.input_dim() {
            return Err(Error::OutOfRange { index: i, limit: self.input_dim() });
        }
        Ok(self.map_terms(|t| t.index.contains(i).then_some(t.coeff)))
    }

    /// Rescales so that `E|f|^2 = target`. Fails on the zero polynomial.
    pub fn normalized_to(&self, target: f64) -> Result<Self> {
        let norm = self.parseval_norm();
        if norm <= 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        let s = sqrt(target / norm);
        Ok(self.map_terms(|t| Some(t.coeff * s)))
    }

    fn map_terms(&self, mut f: impl FnMut(&Term) -> Option<f64>) -> Self {
        let outputs: Vec<Vec<Term>> = self
            .outputs
            .iter()
            .map(|ts| {
                ts.iter()
                    .filter_map(|t| f(t).map(|c| Term::new(t.index.clone(), c)))
                    .collect()
            })
            .collect();
        let mut poly = self.clone();
        poly.outputs = outputs;
        poly.degree = poly.terms().map(|(_, t)| t.index.total_degree()).max().unwrap_or(0);
        poly
    }
}

/// All Hermite multi-indices on `dim` coordinates with total degree `<= max_degree`.
pub fn hermite_indices(dim: usize, max_degree: u32) -> Vec<MultiIndex> {
    fn rec(c: usize, dim: usize, left: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<MultiIndex>) {
        if c == dim {
            out.push(MultiIndex::hermite(cur));
            return;
        }
        for l in 0..=left {
            if l > 0 {
                cur.push((c, l));
            }
            rec(c + 1, dim, left - l, cur, out);
            if l > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, dim, max_degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All subsets of `0..m` with size `<= max_size`.
pub fn character_indices(m: usize, max_size: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        out.push(MultiIndex::character(cur).expect("distinct by construction"));
        if left == 0 {
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(0, m, max_size, &mut Vec::new(), &mut out);
    out
}

/// Random polynomial: i.i.d. standard Gaussian coefficients on `indices` for
/// every output, rescaled so that `E|f|^2 = target_norm`.
pub fn random_poly(
    basis: Basis,
    n_out: usize,
    indices: &[MultiIndex],
    target_norm: f64,
    seed: u64,
) -> Result<FourierPoly> {
    if indices.is_empty() || n_out == 0 {
        return Err(Error::Empty("random polynomial needs indices and outputs"));
    }
    let mut rng = Stream::new(seed, 0);
    let outputs = (0..n_out)
        .map(|_| indices.iter().map(|ix| Term::new(ix.clone(), rng.gaussian())).collect())
        .collect();
    FourierPoly::new(basis, outputs)?.normalized_to(target_norm)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypercontractivityReport {
    pub q: f64,
    pub degree: u32,
    /// Monte Carlo estimate of `E|f(Y)|^q`.
    pub lhs: f64,
    pub lhs_std_error: f64,
    /// `(q-1)^{qD/2} (E f^2)^{q/2}` with the exact Parseval second moment.
    pub rhs: f64,
    /// `lhs <= rhs` up to three standard errors.
    pub holds: bool,
    /// Relative standard error stayed within the configured bound.
    pub converged: bool,
}

/// Monte Carlo check of `E|f|^q <= (q-1)^{qD/2} (E f^2)^{q/2}` for a scalar
/// Gaussian polynomial.
pub fn hypercontractivity_check(
    f: &FourierPoly,
    q: f64,
    n_samples: usize,
    seed: u64,
    max_rel_std_error: f64,
) -> Result<HypercontractivityReport> {
    if !matches!(f.basis, Basis::Hermite { .. }) {
        return Err(Error::BasisMismatch("hypercontractivity check needs a Gaussian polynomial"));
    }
    if f.n_out() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, actual: f.n_out() });
    }
    if !(q >= 2.0) {
        return Err(invalid("q", "must be at least 2"));
    }
    if n_samples == 0 {
        return Err(Error::Empty("no samples"));
    }
    let mut rng = Stream::new(seed, 0);
    let mut y = vec![0.0; f.input_dim()];
    let mut out = [0.0];
    let mut m = Moments::new();
    for _ in 0..n_samples {
        rng.fill_gaussian(&mut y);
        f.eval_into(&y, &mut out)?;
        m.push(pow(abs(out[0]), q));
    }
    let d = f.degree() as f64;
    let rhs = pow(q - 1.0, q * d / 2.0) * pow(f.parseval_norm(), q / 2.0);
    let lhs = m.mean();
    let se = m.std_error();
    let converged = lhs == 0.0 || se / lhs <= max_rel_std_error;
    Ok(HypercontractivityReport {
        q,
        degree: f.degree(),
        lhs,
        lhs_std_error: se,
        rhs,
        holds: lhs - 3.0 * se <= rhs * (1.0 + 1e-12),
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(factors: &[(usize, u32)]) -> MultiIndex {
        MultiIndex::hermite(factors)
    }

    fn gauss_poly(dim: usize, terms: Vec<(MultiIndex, f64)>) -> FourierPoly {
        FourierPoly::scalar(
            Basis::Hermite { dim },
            terms.into_iter().map(|(i, c)| Term::new(i, c)).collect(),
        )
        .unwrap()
    }

    fn bool_poly(m: usize, p: f64, terms: Vec<(&[usize], f64)>) -> FourierPoly {
        FourierPoly::scalar(
            Basis::Boolean(BiasVector::uniform(m, p).unwrap()),
            terms
                .into_iter()
                .map(|(s, c)| Term::new(MultiIndex::character(s).unwrap(), c))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 3.7), 1.0);
        assert_eq!(hermite(1, 2.0), 2.0);
        assert!((hermite(2, 0.0) + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        // h_3(x) = (x^3 - 3x)/sqrt(6)
        let x = 1.3f64;
        assert!((hermite(3, x) - (x.powi(3) - 3.0 * x) / 6f64.sqrt()).abs() < 1e-14);
        let mut t = [0.0; 5];
        hermite_table(x, &mut t);
        for (l, v) in t.iter().enumerate() {
            assert!((v - hermite(l as u32, x)).abs() < 1e-14);
        }
    }

    #[test]
    fn eval_examples() {
        let f = gauss_poly(2, vec![(h(&[(0, 1)]), 1.0)]);
        assert_eq!(f.eval(&[3.0, 0.5]).unwrap(), vec![3.0]);

        let g = bool_poly(1, 0.5, vec![(&[0], 1.0)]);
        assert!((g.eval(&[1.0]).unwrap()[0] - 1.0).abs() < 1e-15);

        let k = gauss_poly(2, vec![(h(&[(0, 2), (1, 1)]), 2.0)]);
        assert!(k.eval(&[1.0, 1.0]).unwrap()[0].abs() < 1e-15);

        assert!(matches!(f.eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(g.eval(&[0.5]), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn parseval_examples() {
        assert_eq!(gauss_poly(1, vec![(MultiIndex::constant(), 3.0)]).parseval_norm(), 9.0);
        let f = gauss_poly(2, vec![(h(&[(0, 1)]), 1.0), (h(&[(1, 2)]), 1.0)]);
        assert_eq!(f.parseval_norm(), 2.0);
    }

    #[test]
    fn noise_operator_examples() {
        let f = gauss_poly(2, vec![(h(&[(0, 2)]), 1.0)]);
        assert_eq!(f.noise_operator(1.0).unwrap(), f);
        assert!((f.noise_operator(0.5).unwrap().outputs()[0][0].coeff - 0.25).abs() < 1e-15);
        let g = gauss_poly(2, vec![(h(&[(0, 1), (1, 1)]), 1.0)]);
        assert!((g.noise_operator(0.3).unwrap().outputs()[0][0].coeff - 0.09).abs() < 1e-15);
        assert!(f.noise_operator(1.5).is_err());
        let b = bool_poly(1, 0.5, vec![(&[0], 1.0)]);
        assert!(b.noise_operator(0.5).is_err());
    }

    #[test]
    fn influence_and_laplacian_examples() {
        assert_eq!(bool_poly(2, 0.3, vec![(&[], 2.0)]).total_influence().unwrap(), 0.0);
        assert_eq!(bool_poly(2, 0.3, vec![(&[0], 1.0)]).total_influence().unwrap(), 1.0);
        assert_eq!(bool_poly(2, 0.3, vec![(&[0, 1], 2.0)]).total_influence().unwrap(), 8.0);

        let f = bool_poly(3, 0.5, vec![(&[0], 1.0), (&[1], 1.0)]);
        assert_eq!(f.laplacian(0).unwrap(), bool_poly(3, 0.5, vec![(&[0], 1.0)]));
        let c = bool_poly(3, 0.5, vec![(&[], 1.0)]);
        assert_eq!(c.laplacian(2).unwrap().parseval_norm(), 0.0);
        let g = bool_poly(3, 0.5, vec![(&[0, 1], 1.0), (&[1, 2], 1.0)]);
        assert_eq!(g.laplacian(1).unwrap(), g);
        assert!(matches!(g.laplacian(3), Err(Error::OutOfRange { .. })));
        assert!(gauss_poly(1, vec![]).total_influence().is_err());
    }

    #[test]
    fn binary_entropy_examples() {
        assert!((binary_entropy(0.5) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!(binary_entropy(0.1) <= 2.0 * 0.1 * 10f64.ln());
    }

    #[test]
    fn hypercontractivity_examples() {
        let f = gauss_poly(1, vec![(h(&[(0, 1)]), 1.0)]);
        let r = hypercontractivity_check(&f, 4.0, 400_000, 5, 0.05).unwrap();
        assert!((r.lhs - 3.0).abs() < 4.0 * r.lhs_std_error, "{r:?}");
        assert!((r.rhs - 9.0).abs() < 1e-12);
        assert!(r.holds && r.converged);

        let c = gauss_poly(1, vec![(MultiIndex::constant(), -1.5)]);
        let r = hypercontractivity_check(&c, 3.0, 10, 1, 0.05).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-12 && r.holds);

        let g = gauss_poly(1, vec![(h(&[(0, 2)]), 1.0)]);
        let r = hypercontractivity_check(&g, 2.0, 200_000, 9, 0.05).unwrap();
        assert_eq!(r.rhs, 1.0);
        assert!((r.lhs - 1.0).abs() < 4.0 * r.lhs_std_error);
    }

    #[test]
    fn monte_carlo_parseval_degree_three() {
        let f = random_poly(Basis::Hermite { dim: 4 }, 1, &hermite_indices(4, 3), 1.7, 11).unwrap();
        let mut rng = Stream::new(99, 0);
        let mut y = [0.0; 4];
        let mut m = Moments::new();
        for _ in 0..1_000_000 {
            rng.fill_gaussian(&mut y);
            let v = f.eval(&y).unwrap()[0];
            m.push(v * v);
        }
        assert!((m.mean() - f.parseval_norm()).abs() < 3.0 * m.std_error(), "{} vs {}", m.mean(), 1.7);
    }

    #[test]
    fn index_enumeration_counts() {
        // C(d + D, D) multi-indices of total degree <= D
        assert_eq!(hermite_indices(4, 3).len(), 35);
        assert_eq!(character_indices(5, 2).len(), 1 + 5 + 10);
        assert!(hermite_indices(3, 2).iter().all(|i| i.total_degree() <= 2));
    }

    #[test]
    fn construction_validates() {
        let bad = FourierPoly::scalar(
            Basis::Boolean(BiasVector::uniform(2, 0.5).unwrap()),
            vec![Term::new(h(&[(0, 2)]), 1.0)],
        );
        assert!(bad.is_err());
        let oob = FourierPoly::scalar(Basis::Hermite { dim: 2 }, vec![Term::new(h(&[(2, 1)]), 1.0)]);
        assert!(matches!(oob, Err(Error::OutOfRange { .. })));
        assert!(BiasVector::new(vec![0.0]).is_err());
        assert!(MultiIndex::character(&[1, 1]).is_err());
        assert_eq!(BiasVector::new(vec![0.2, 0.9, 0.5]).unwrap().lambda(), 0.09999999999999998);
    }
}
