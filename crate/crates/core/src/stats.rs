//! Running moments, the two-sample Kolmogorov–Smirnov statistic and
//! chi-square goodness of fit.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// One-sided tail probability of a 3σ Gaussian deviation.
pub const THREE_SIGMA_TAIL: f64 = 0.001_349_898_031_630_094_5;

/// Sum and sum of squares of a stream of samples.
///
/// Partial accumulators from parallel chunks are merged in chunk order so
/// that results do not depend on the thread count.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let m = self.sum / n;
        ((self.sum_sq - n * m * m) / (n - 1.0)).max(0.0)
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F₁ − F₂|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample KS statistic at level 1%.
pub fn ks_critical_1pct(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.627_6 * ((n + m) / (n * m)).sqrt()
}

/// Pearson chi-square statistic of observed counts against expected
/// probabilities, and its degrees of freedom. Outcomes with zero expected
/// probability are skipped when empty; a count there makes the statistic
/// infinite.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> (f64, usize) {
    let n: u64 = counts.iter().sum();
    let n = n as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in counts.iter().zip(probs) {
        let e = n * p;
        if e <= 0.0 {
            if o > 0 {
                return (f64::INFINITY, cells.saturating_sub(1));
            }
            continue;
        }
        cells += 1;
        stat += (o as f64 - e).powi(2) / e;
    }
    (stat, cells.saturating_sub(1))
}

/// Upper-tail probability of a chi-square statistic.
pub fn chi_square_p_value(stat: f64, dof: usize) -> f64 {
    if dof == 0 {
        return if stat > 0.0 { 0.0 } else { 1.0 };
    }
    if !stat.is_finite() {
        return 0.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    dist.sf(stat)
}
