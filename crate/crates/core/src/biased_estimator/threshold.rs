use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::median;

/// Normalizing constant turning a MAD into a Gaussian standard deviation.
pub const MAD_SCALE: f64 = 0.6745;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShrinkMode {
    Hard,
    Soft,
}

impl ShrinkMode {
    pub fn apply(self, d: f64, lambda: f64) -> f64 {
        match self {
            ShrinkMode::Hard => {
                if d.abs() > lambda {
                    d
                } else {
                    0.0
                }
            }
            ShrinkMode::Soft => d.signum() * (d.abs() - lambda).max(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thresholded {
    pub d_star: Vec<Vec<f64>>,
    pub sigma_hat: f64,
    pub lambda: f64,
}

/// Median absolute deviation about the median.
pub fn mad(values: &[f64]) -> f64 {
    let m = median(values);
    let dev: Vec<f64> = values.iter().map(|v| (v - m).abs()).collect();
    median(&dev)
}

/// Noise scale and universal threshold from the finest detail level.
///
/// The finest level holds `2^(J1-1)` coefficients, which fixes the `log`
/// term. With `mad_normalize = false` the raw MAD is used as the scale.
pub fn universal_lambda(d: &[Vec<f64>], mad_normalize: bool) -> Result<(f64, f64)> {
    let finest = d.last().filter(|l| !l.is_empty()).ok_or(Error::EmptyDetails)?;
    if !finest.len().is_power_of_two() {
        return Err(Error::InvalidConfig(format!("finest detail level has {} coefficients", finest.len())));
    }
    let raw = mad(finest);
    let sigma_hat = if mad_normalize { raw / MAD_SCALE } else { raw };
    let log_count = finest.len().trailing_zeros() as f64 * std::f64::consts::LN_2;
    Ok((sigma_hat, sigma_hat * (2.0 * log_count).sqrt()))
}

/// Applies one universal `lambda` to every detail level.
pub fn universal_threshold(d: &[Vec<f64>], mode: ShrinkMode, mad_normalize: bool) -> Result<Thresholded> {
    let (sigma_hat, lambda) = universal_lambda(d, mad_normalize)?;
    let d_star = d.iter().map(|level| level.iter().map(|&v| mode.apply(v, lambda)).collect()).collect();
    Ok(Thresholded { d_star, sigma_hat, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_details() {
        let d = vec![vec![0.0], vec![0.0; 2]];
        let t = universal_threshold(&d, ShrinkMode::Hard, true).unwrap();
        assert_eq!(t.lambda, 0.0);
        assert_eq!(t.d_star, d);
    }

    #[test]
    fn alternating_finest_level() {
        let d = vec![vec![0.5], vec![3.0, -0.1], vec![1.0, -1.0, 1.0, -1.0]];
        let t = universal_threshold(&d, ShrinkMode::Hard, true).unwrap();
        assert!((t.sigma_hat - 1.0 / 0.6745).abs() < 1e-12);
        let expected = (1.0 / 0.6745) * (2.0 * 4f64.ln()).sqrt();
        assert!((t.lambda - expected).abs() < 1e-12);
        assert!((t.lambda - 2.4687).abs() < 1e-4);
        assert_eq!(t.d_star[2], vec![0.0; 4]);
        assert_eq!(t.d_star[1], vec![3.0, 0.0]);
        assert_eq!(t.d_star[0], vec![0.0]);
    }

    #[test]
    fn raw_mad_mode() {
        let d = vec![vec![1.0, -1.0, 1.0, -1.0]];
        let (sigma, _) = universal_lambda(&d, false).unwrap();
        assert_eq!(sigma, 1.0);
    }

    #[test]
    fn soft_shrinks_toward_zero() {
        assert_eq!(ShrinkMode::Soft.apply(3.0, 1.0), 2.0);
        assert_eq!(ShrinkMode::Soft.apply(-3.0, 1.0), -2.0);
        assert_eq!(ShrinkMode::Soft.apply(0.5, 1.0), 0.0);
        assert_eq!(ShrinkMode::Hard.apply(1.0, 1.0), 0.0);
    }

    #[test]
    fn empty_details_error() {
        assert_eq!(universal_threshold(&[], ShrinkMode::Hard, true), Err(Error::EmptyDetails));
    }

    fn ragged() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..6).prop_flat_map(|levels| {
            (0..levels).map(|j| prop::collection::vec(-10.0f64..10.0, 1usize << j)).collect::<Vec<_>>()
        })
    }

    proptest! {
        #[test]
        fn shrinkage_never_grows(d in ragged(), soft in any::<bool>()) {
            let mode = if soft { ShrinkMode::Soft } else { ShrinkMode::Hard };
            let t = universal_threshold(&d, mode, true).unwrap();
            for (a, b) in d.iter().zip(&t.d_star) {
                prop_assert_eq!(a.len(), b.len());
                for (x, y) in a.iter().zip(b) {
                    prop_assert!(y.abs() <= x.abs());
                }
            }
        }
    }
}
