use serde::{Deserialize, Serialize};

use super::config::EstimatorConfig;
use crate::aux_density::AuxDensity;
use crate::error::{Error, Result};
use crate::warp::WarpFunction;
use crate::wavelet::{EvalPrecision, Evaluator};

/// Scaling, raw detail and thresholded detail coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub j0: u32,
    pub c: Vec<f64>,
    pub d: Vec<Vec<f64>>,
    pub d_star: Vec<Vec<f64>>,
    pub sigma_hat: Option<f64>,
    pub lambda: Option<f64>,
}

impl CoefficientSet {
    /// Sum of squares of the coefficients used in synthesis.
    pub fn retained_energy(&self) -> f64 {
        self.c.iter().chain(self.d_star.iter().flatten()).map(|v| v * v).sum()
    }

    pub fn j1(&self) -> u32 {
        self.j0 + self.d.len() as u32
    }
}

/// Per-observation warped location `H(t(Y_i))` and coefficient weight.
pub(crate) struct SampleTerms {
    pub u: Vec<f64>,
    pub factor: Vec<f64>,
    pub g_clamped: usize,
}

pub(crate) fn mu_hat_from_weights(w_orig: &[f64]) -> Result<f64> {
    if w_orig.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut inv = 0.0;
    for &w in w_orig {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::NonPositiveWeight { x: f64::NAN, value: w });
        }
        inv += 1.0 / w;
    }
    Ok(w_orig.len() as f64 / inv)
}

/// `mu^a / n * g^(a-1) h / w^a` for every observation, with `h = g` under the
/// empirical warp and `h = 1` under the identity.
pub(crate) fn sample_terms(
    tsample: &[f64],
    w_orig: &[f64],
    config: &EstimatorConfig,
    warp: &WarpFunction,
    aux: Option<&AuxDensity>,
) -> Result<SampleTerms> {
    if tsample.len() != w_orig.len() {
        return Err(Error::InvalidConfig(format!(
            "{} transformed observations but {} weights",
            tsample.len(),
            w_orig.len()
        )));
    }
    let a = config.a;
    let n = tsample.len();
    let mu_hat = mu_hat_from_weights(w_orig)?;
    let scale = mu_hat.powf(a) / n as f64;
    let empirical = matches!(warp, WarpFunction::Empirical(_));
    let needs_g = a != 1.0 || empirical;
    let aux = match (needs_g, aux) {
        (true, None) => return Err(Error::MissingAux),
        (_, aux) => aux,
    };
    let mut u = Vec::with_capacity(n);
    let mut factor = Vec::with_capacity(n);
    let mut g_clamped = 0;
    for (&t, &w) in tsample.iter().zip(w_orig) {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfDomain { what: "transformed observation", value: t });
        }
        u.push(warp.cdf_unchecked(t));
        let g = match aux.filter(|_| needs_g) {
            Some(aux) => {
                let raw = aux.eval(t);
                if raw < config.g_floor {
                    g_clamped += 1;
                    config.g_floor
                } else {
                    raw
                }
            }
            None => 1.0,
        };
        let h = match warp {
            WarpFunction::Identity => 1.0,
            WarpFunction::Empirical(_) => g,
            WarpFunction::Sinusoidal { .. } => warp.density(t)?,
        };
        let g_term = if a == 1.0 { 1.0 } else { g.powf(a - 1.0) };
        factor.push(scale * g_term * h / w.powf(a));
    }
    Ok(SampleTerms { u, factor, g_clamped })
}

pub(crate) fn accumulate(
    terms: &SampleTerms,
    evaluator: &Evaluator,
    j0: u32,
    j1: u32,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut c = vec![0.0; 1 << j0];
    let mut d: Vec<Vec<f64>> = (j0..j1).map(|j| vec![0.0; 1 << j]).collect();
    let mut buf = vec![0.0; 1 << j1.max(j0)];
    for (&u, &f) in terms.u.iter().zip(&terms.factor) {
        let phi = &mut buf[..1 << j0];
        evaluator.periodized_phi_all(j0, u, phi);
        for (ck, p) in c.iter_mut().zip(phi.iter()) {
            *ck += f * p;
        }
        for (level, j) in d.iter_mut().zip(j0..j1) {
            let psi = &mut buf[..1 << j];
            evaluator.periodized_psi_all(j, u, psi);
            for (dk, p) in level.iter_mut().zip(psi.iter()) {
                *dk += f * p;
            }
        }
    }
    (c, d)
}

/// Scaling coefficients `c_{J0 k}`, `k = 0..2^J0`, and the number of
/// auxiliary-density evaluations raised to the floor.
pub fn scaling_coefficients(
    tsample: &[f64],
    w_orig: &[f64],
    config: &EstimatorConfig,
    warp: &WarpFunction,
    aux: Option<&AuxDensity>,
) -> Result<(Vec<f64>, usize)> {
    let terms = sample_terms(tsample, w_orig, config, warp, aux)?;
    let evaluator = Evaluator::new(&config.filter, EvalPrecision::new(config.precision_digits)?);
    let (c, _) = accumulate(&terms, &evaluator, config.j0, config.j0);
    Ok((c, terms.g_clamped))
}

/// Detail coefficients `d_{jk}` for `j = J0..J1-1`.
pub fn detail_coefficients(
    tsample: &[f64],
    w_orig: &[f64],
    config: &EstimatorConfig,
    warp: &WarpFunction,
    aux: Option<&AuxDensity>,
) -> Result<(Vec<Vec<f64>>, usize)> {
    let terms = sample_terms(tsample, w_orig, config, warp, aux)?;
    let evaluator = Evaluator::new(&config.filter, EvalPrecision::new(config.precision_digits)?);
    let (_, d) = accumulate(&terms, &evaluator, config.j0, config.j1);
    Ok((d, terms.g_clamped))
}
