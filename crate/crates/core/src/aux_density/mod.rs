//! Estimates of the biased density `g`, needed whenever `a != 1` or the
//! basis is warped by the empirical CDF.

mod bandwidth;
mod kde;
mod wavelet_density;

use serde::{Deserialize, Serialize};

pub use bandwidth::{silverman_bandwidth, sj_bandwidth, sj_bandwidth_detailed, BandwidthMethod, BandwidthSelection};
pub use kde::{kde_eval, KernelDensityEstimate};
pub use wavelet_density::{wavelet_density, WaveletDensityEstimate};

use crate::error::Result;
use crate::wavelet::WaveletFilter;

/// Which auxiliary estimator to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuxKind {
    #[default]
    KdeSj,
    /// Linear wavelet estimate; `level = None` picks `ceil(0.45 log2 n)`.
    Wavelet { level: Option<u32> },
    None,
}

/// A fitted estimate of `g` on the transformed scale.
#[derive(Debug, Clone)]
pub enum AuxDensity {
    Kde { kde: KernelDensityEstimate, selection: BandwidthSelection },
    Wavelet(WaveletDensityEstimate),
}

impl AuxDensity {
    /// Fits the requested estimator; `Ok(None)` for [`AuxKind::None`].
    pub fn fit(kind: AuxKind, sample: &[f64], filter: &WaveletFilter) -> Result<Option<Self>> {
        match kind {
            AuxKind::None => Ok(None),
            AuxKind::KdeSj => {
                let selection = sj_bandwidth_detailed(sample)?;
                let kde = KernelDensityEstimate::new(sample, selection.bandwidth)?;
                Ok(Some(AuxDensity::Kde { kde, selection }))
            }
            AuxKind::Wavelet { level } => {
                let n = sample.len().max(1);
                let level = level.unwrap_or_else(|| (0.45 * (n as f64).log2()).ceil() as u32);
                Ok(Some(AuxDensity::Wavelet(wavelet_density(sample, filter, level)?)))
            }
        }
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            AuxDensity::Kde { kde, .. } => kde.eval(y),
            AuxDensity::Wavelet(w) => w.eval(y),
        }
    }

    pub fn summary(&self) -> AuxSummary {
        match self {
            AuxDensity::Kde { selection, .. } => AuxSummary::Kde { bandwidth: selection.bandwidth, method: selection.method },
            AuxDensity::Wavelet(w) => AuxSummary::Wavelet { level: w.level() },
        }
    }
}

/// Serializable description of a fitted auxiliary estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuxSummary {
    Kde { bandwidth: f64, method: BandwidthMethod },
    Wavelet { level: u32 },
}
