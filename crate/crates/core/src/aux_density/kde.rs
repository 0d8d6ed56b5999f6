use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Kernel weights are below `exp(-WINDOW^2 / 2) ~ 1e-314` past this many
/// bandwidths and are skipped.
const WINDOW: f64 = 38.0;

/// Gaussian kernel density estimate with a fixed bandwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelDensityEstimate {
    sorted: Vec<f64>,
    bandwidth: f64,
}

impl KernelDensityEstimate {
    pub fn new(sample: &[f64], bandwidth: f64) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::InvalidConfig(format!("bandwidth must be positive, got {bandwidth}")));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted, bandwidth })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// `(1 / (n h)) sum_i K((y - Y_i) / h)` with `K` the standard normal density.
    pub fn eval(&self, y: f64) -> f64 {
        let h = self.bandwidth;
        let lo = self.sorted.partition_point(|&v| v < y - WINDOW * h);
        let hi = self.sorted.partition_point(|&v| v <= y + WINDOW * h);
        let total: f64 = self.sorted[lo..hi]
            .iter()
            .map(|&v| {
                let z = (y - v) / h;
                (-0.5 * z * z).exp()
            })
            .sum();
        total * INV_SQRT_2PI / (self.sorted.len() as f64 * h)
    }
}

/// Free-function form of [`KernelDensityEstimate::eval`].
pub fn kde_eval(kde: &KernelDensityEstimate, y: f64) -> f64 {
    kde.eval(y)
}
