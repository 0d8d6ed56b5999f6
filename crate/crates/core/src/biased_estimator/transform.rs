use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Affine map `t(y) = (y - q) / s` sending the sample range onto
/// `[epsilon, 1 - epsilon]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainTransform {
    pub q: f64,
    pub s: f64,
    pub epsilon: f64,
}

impl DomainTransform {
    pub fn apply(&self, y: f64) -> f64 {
        (y - self.q) / self.s
    }

    pub fn inverse(&self, u: f64) -> f64 {
        self.q + self.s * u
    }

    /// Original-scale interval mapped onto `[0, 1]`.
    pub fn support(&self) -> (f64, f64) {
        (self.q, self.q + self.s)
    }
}

/// Solves `t(y_(1)) = epsilon` and `t(y_(n)) = 1 - epsilon`.
pub fn compute_transform(sample: &[f64], epsilon: f64) -> Result<DomainTransform> {
    if sample.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: sample.len() });
    }
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::InvalidConfig(format!("epsilon {epsilon} must lie in [0, 0.5)")));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &y in sample {
        if !y.is_finite() {
            return Err(Error::DegenerateSample(format!("non-finite observation {y}")));
        }
        lo = lo.min(y);
        hi = hi.max(y);
    }
    let r = hi - lo;
    if !(r > 0.0) {
        return Err(Error::DegenerateSample("sample has zero range".into()));
    }
    let s = r / (1.0 - 2.0 * epsilon);
    Ok(DomainTransform { q: lo - epsilon * s, s, epsilon })
}

/// `1.9^-J1`, the default margin.
pub fn default_epsilon(j1: u32) -> f64 {
    1.9f64.powi(-(j1 as i32))
}
