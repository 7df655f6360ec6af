//! Empirical distribution helpers: sorted-sample CDFs and the
//! Kolmogorov–Smirnov statistic against an analytic CDF.

use alloc::vec::Vec;

/// An empirical CDF over a sorted sample.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    /// Builds from raw observations (sorts internally; NaNs are not allowed).
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("NaN in sample"));
        EmpiricalCdf { sorted: values }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Sorted observations.
    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// F̂(x) = fraction of observations ≤ x.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.sorted.len();
        if n == 0 {
            return 0.0;
        }
        let idx = self.sorted.partition_point(|&v| v <= x);
        idx as f64 / n as f64
    }

    /// Kolmogorov–Smirnov statistic against an analytic CDF.
    pub fn ks_against<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        ks_statistic(&self.sorted, cdf)
    }
}

/// KS statistic sup|F̂ − F| for a pre-sorted sample against an analytic CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return 0.0;
    }
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        d = d.max(libm::fabs(f - lo)).max(libm::fabs(f - hi));
    }
    d
}
