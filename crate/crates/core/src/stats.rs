//! Running moments and standard errors.

/// Welford accumulator.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan's parallel merge.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance, `None` below two observations.
    pub fn variance(&self) -> Option<f64> {
        (self.count >= 2).then(|| self.m2 / (self.count - 1) as f64)
    }

    pub fn stdev(&self) -> Option<f64> {
        self.variance().map(crate::math::sqrt)
    }

    /// Standard error of the mean; zero for fewer than two observations.
    pub fn std_error(&self) -> f64 {
        self.variance()
            .map(|v| crate::math::sqrt(v / self.count as f64))
            .unwrap_or(0.0)
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::new();
        iter.into_iter().for_each(|x| m.push(x));
        m
    }
}

/// Standard error of a Bernoulli frequency estimate.
pub fn frequency_std_error(freq: f64, samples: u64) -> f64 {
    if samples == 0 {
        return 0.0;
    }
    crate::math::sqrt((freq * (1.0 - freq)).max(0.0) / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.0, 4.0, 2.5, -3.0, 7.25];
        let m: Moments = xs.iter().copied().collect();
        let mean = xs.iter().sum::<f64>() / 5.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 4.0;
        assert!((m.mean() - mean).abs() < 1e-14);
        assert!((m.variance().unwrap() - var).abs() < 1e-12);
    }

    #[test]
    fn merge_is_associative_enough() {
        let a: Moments = [1.0, 2.0, 3.0].into_iter().collect();
        let b: Moments = [10.0, -4.0].into_iter().collect();
        let mut ab = a;
        ab.merge(&b);
        let all: Moments = [1.0, 2.0, 3.0, 10.0, -4.0].into_iter().collect();
        assert_eq!(ab.count(), 5);
        assert!((ab.mean() - all.mean()).abs() < 1e-14);
        assert!((ab.variance().unwrap() - all.variance().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn single_observation_has_no_stdev() {
        let m: Moments = [2.0].into_iter().collect();
        assert_eq!(m.stdev(), None);
        assert_eq!(m.std_error(), 0.0);
    }
}
