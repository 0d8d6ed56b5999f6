//! Sheather-Jones "solve-the-equation" plug-in bandwidth.
//!
//! Density functionals are computed from binned pairwise distances (1000
//! bins), so each evaluation of the fixed-point equation is `O(bins)` after a
//! single `O(n^2)` pass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::quantile_sorted;

const N_BINS: usize = 1000;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const DELTA_MAX: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthMethod {
    SheatherJones,
    /// No sign change on the search bracket; Silverman's rule was used.
    SilvermanFallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthSelection {
    pub bandwidth: f64,
    pub method: BandwidthMethod,
}

struct Spread {
    sd: f64,
    iqr: f64,
}

fn spread(sample: &[f64]) -> Result<Spread> {
    let n = sample.len();
    if n < 10 {
        return Err(Error::InsufficientData { needed: 10, got: n });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (_, sd) = crate::numeric::mean_sd(sample);
    if sorted[0] == sorted[n - 1] || !(sd > 0.0) {
        return Err(Error::DegenerateSample("zero sample variance".into()));
    }
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    Ok(Spread { sd, iqr })
}

/// Silverman's rule `0.9 min(sd, IQR / 1.34) n^(-1/5)`.
pub fn silverman_bandwidth(sample: &[f64]) -> Result<f64> {
    let s = spread(sample)?;
    Ok(0.9 * robust_scale(&s, 1.34) * (sample.len() as f64).powf(-0.2))
}

fn robust_scale(s: &Spread, divisor: f64) -> f64 {
    if s.iqr > 0.0 {
        s.sd.min(s.iqr / divisor)
    } else {
        s.sd
    }
}

/// Pair counts of binned absolute differences.
struct PairBins {
    n: usize,
    width: f64,
    counts: Vec<f64>,
}

impl PairBins {
    fn new(sample: &[f64]) -> Self {
        let lo = sample.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let width = 1.01 * (hi - lo) / N_BINS as f64;
        let idx: Vec<i64> = sample.iter().map(|&v| ((v - lo) / width) as i64).collect();
        let mut counts = vec![0.0; N_BINS];
        for i in 1..idx.len() {
            for j in 0..i {
                counts[(idx[i] - idx[j]).unsigned_abs() as usize] += 1.0;
            }
        }
        Self { n: sample.len(), width, counts }
    }

    fn sum_over_pairs(&self, h: f64, term: impl Fn(f64) -> f64) -> f64 {
        let mut total = 0.0;
        for (i, &c) in self.counts.iter().enumerate() {
            let delta = (i as f64 * self.width / h).powi(2);
            if delta >= DELTA_MAX {
                break;
            }
            total += term(delta) * c;
        }
        total
    }

    /// Estimate of `int f''(x)^2 dx` with a Gaussian pilot of width `h`.
    fn phi4(&self, h: f64) -> f64 {
        let n = self.n as f64;
        let sum = self.sum_over_pairs(h, |d| (-0.5 * d).exp() * (d * d - 6.0 * d + 3.0));
        (2.0 * sum + 3.0 * n) / (n * (n - 1.0) * h.powi(5) * SQRT_2PI)
    }

    /// Estimate of `-int f'''(x)^2 dx` with a Gaussian pilot of width `h`.
    fn phi6(&self, h: f64) -> f64 {
        let n = self.n as f64;
        let sum = self.sum_over_pairs(h, |d| (-0.5 * d).exp() * (d * d * d - 15.0 * d * d + 45.0 * d - 15.0));
        (2.0 * sum - 15.0 * n) / (n * (n - 1.0) * h.powi(7) * SQRT_2PI)
    }
}

/// Sheather-Jones bandwidth, falling back to Silverman's rule when the
/// fixed-point equation has no bracketed root.
pub fn sj_bandwidth_detailed(sample: &[f64]) -> Result<BandwidthSelection> {
    let s = spread(sample)?;
    let n = sample.len() as f64;
    let silverman = 0.9 * robust_scale(&s, 1.34) * n.powf(-0.2);
    let fallback = BandwidthSelection { bandwidth: silverman, method: BandwidthMethod::SilvermanFallback };

    let bins = PairBins::new(sample);
    let scale = robust_scale(&s, 1.349);
    let a = 1.24 * scale * n.powf(-1.0 / 7.0);
    let b = 1.23 * scale * n.powf(-1.0 / 9.0);
    let c1 = 1.0 / (2.0 * std::f64::consts::PI.sqrt() * n);
    let td = -bins.phi6(b);
    if !(td > 0.0 && td.is_finite()) {
        return Ok(fallback);
    }
    let alpha2 = 1.357 * (bins.phi4(a) / td).powf(1.0 / 7.0);
    if !alpha2.is_finite() {
        return Ok(fallback);
    }
    let equation = |h: f64| (c1 / bins.phi4(alpha2 * h.powf(5.0 / 7.0))).powf(0.2) - h;

    let (mut lo, mut hi) = (silverman / 50.0, silverman * 50.0);
    let (f_lo, f_hi) = (equation(lo), equation(hi));
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Ok(fallback);
    }
    let lo_positive = f_lo > 0.0;
    while hi - lo > 1e-8 * hi {
        let mid = 0.5 * (lo + hi);
        let f_mid = equation(mid);
        if !f_mid.is_finite() {
            return Ok(fallback);
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BandwidthSelection { bandwidth: 0.5 * (lo + hi), method: BandwidthMethod::SheatherJones })
}

pub fn sj_bandwidth(sample: &[f64]) -> Result<f64> {
    sj_bandwidth_detailed(sample).map(|s| s.bandwidth)
}
