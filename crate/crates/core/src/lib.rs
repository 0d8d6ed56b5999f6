//! Density estimation from size-biased samples with warped, periodized
//! wavelet bases.
//!
//! The observed sample has density `g = w f / mu`; the estimators here expand
//! the power density `f^a` (`a >= 1/2`) in a wavelet basis composed with a
//! warping CDF, optionally thresholding the detail coefficients.

pub mod aux_density;
pub mod biased_estimator;
pub mod error;
pub mod experiments;
pub mod numeric;
pub mod warp;
pub mod wavelet;
pub mod weight;

pub use error::{Error, Result};
