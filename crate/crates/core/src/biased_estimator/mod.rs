//! Wavelet estimation of `f^a` from a size-biased sample `Y_i ~ g = w f / mu`.

mod coefficients;
mod config;
mod threshold;
mod transform;

use serde::{Deserialize, Serialize};

pub use coefficients::{detail_coefficients, scaling_coefficients, CoefficientSet};
pub use config::{resolve_j1, EstimatorConfig, Method, ThresholdChoice, WarpChoice, MAX_LEVEL};
pub use threshold::{mad, universal_lambda, universal_threshold, ShrinkMode, Thresholded, MAD_SCALE};
pub use transform::{compute_transform, default_epsilon, DomainTransform};

use crate::aux_density::{AuxDensity, AuxSummary};
use crate::error::{Error, Result};
use crate::numeric::trapezoid_values;
use crate::warp::{empirical_warp, WarpFunction};
use crate::wavelet::{EvalPrecision, Evaluator};
use crate::weight::WeightFunction;

/// `mu_hat = n / sum 1/w(Y_i)`.
pub fn estimate_mu_hat(sample: &[f64], w: &WeightFunction) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut inv = 0.0;
    for &y in sample {
        inv += 1.0 / w.eval(y)?;
    }
    Ok(sample.len() as f64 / inv)
}

/// Cox's estimate of the unbiased CDF `F` at `x`.
///
/// Written as a ratio of partial to total inverse-weight sums so that the
/// value at the sample maximum is exactly one.
pub fn cox_cdf(sample: &[f64], w: &WeightFunction, x: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut total = 0.0;
    let mut below = 0.0;
    for &y in sample {
        let inv = 1.0 / w.eval(y)?;
        total += inv;
        if y <= x {
            below += inv;
        }
    }
    Ok(below / total)
}

/// Fitting statistics that do not affect evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub n: usize,
    pub weight: String,
    /// Observations whose auxiliary density was raised to the floor.
    pub g_clamped: usize,
    pub aux: Option<AuxSummary>,
}

/// A fitted estimate of `f^a`, and through it of `f`.
#[derive(Debug, Clone)]
pub struct PowerDensityEstimate {
    config: EstimatorConfig,
    transform: DomainTransform,
    warp: WarpFunction,
    coeffs: CoefficientSet,
    mu_hat: f64,
    diagnostics: Diagnostics,
    aux: Option<AuxDensity>,
    evaluator: Evaluator,
    /// Detail levels with at least one nonzero thresholded coefficient.
    active: Vec<bool>,
}

/// Values of an estimate over a set of points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEvaluation {
    pub x: Vec<f64>,
    pub f_hat_a: Vec<f64>,
    pub f_hat: Vec<f64>,
    /// Points where a negative `f^a` was clamped before the `1/a` power.
    pub clamped: usize,
}

/// `v^(1/a)`, squaring directly when `1/a` is an even integer and clamping
/// negatives at zero otherwise. The flag reports a clamp.
pub fn back_transform(v: f64, a: f64) -> (f64, bool) {
    if a == 1.0 {
        return (v, false);
    }
    let p = 1.0 / a;
    if p.fract() == 0.0 && p % 2.0 == 0.0 {
        return (v.powi(p as i32), false);
    }
    if v < 0.0 {
        (0.0, true)
    } else {
        (v.powf(p), false)
    }
}

impl PowerDensityEstimate {
    fn assemble(
        config: EstimatorConfig,
        transform: DomainTransform,
        warp: WarpFunction,
        coeffs: CoefficientSet,
        mu_hat: f64,
        diagnostics: Diagnostics,
        aux: Option<AuxDensity>,
    ) -> Result<Self> {
        let evaluator = Evaluator::new(&config.filter, EvalPrecision::new(config.precision_digits)?);
        let active = coeffs.d_star.iter().map(|l| l.iter().any(|&v| v != 0.0)).collect();
        Ok(PowerDensityEstimate { config, transform, warp, coeffs, mu_hat, diagnostics, aux, evaluator, active })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    pub fn transform(&self) -> &DomainTransform {
        &self.transform
    }

    pub fn warp(&self) -> &WarpFunction {
        &self.warp
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn mu_hat(&self) -> f64 {
        self.mu_hat
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    /// The fitted auxiliary density; absent after reloading from JSON.
    pub fn aux(&self) -> Option<&AuxDensity> {
        self.aux.as_ref()
    }

    /// The wavelet sum at warped location `u` in `[0, 1]`.
    pub fn basis_sum(&self, u: f64) -> f64 {
        let j0 = self.coeffs.j0;
        let mut buf = vec![0.0; 1 << self.coeffs.j1().max(j0)];
        let phi = &mut buf[..1 << j0];
        self.evaluator.periodized_phi_all(j0, u, phi);
        let mut total: f64 = self.coeffs.c.iter().zip(phi.iter()).map(|(c, p)| c * p).sum();
        for ((level, &on), j) in self.coeffs.d_star.iter().zip(&self.active).zip(j0..) {
            if !on {
                continue;
            }
            let psi = &mut buf[..1 << j];
            self.evaluator.periodized_psi_all(j, u, psi);
            total += level.iter().zip(psi.iter()).map(|(d, p)| d * p).sum::<f64>();
        }
        total
    }

    /// `f^a` on the transformed scale at `t` in `[0, 1]`.
    pub fn eval_transformed(&self, t: f64) -> f64 {
        if !(0.0..=1.0).contains(&t) {
            return 0.0;
        }
        self.basis_sum(self.warp.cdf_unchecked(t))
    }

    /// `(f^a(x), f(x))` on the original scale, plus whether a clamp occurred.
    pub fn eval_point(&self, x: f64) -> (f64, f64, bool) {
        let t = self.transform.apply(x);
        if !(0.0..=1.0).contains(&t) {
            return (0.0, 0.0, false);
        }
        let a = self.config.a;
        let fa = self.eval_transformed(t) / self.transform.s.powf(a);
        let (f, clamped) = back_transform(fa, a);
        (fa, f, clamped)
    }

    /// `f_hat(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_point(x).1
    }

    pub fn eval_grid(&self, xs: &[f64]) -> GridEvaluation {
        let mut out = GridEvaluation {
            x: xs.to_vec(),
            f_hat_a: Vec::with_capacity(xs.len()),
            f_hat: Vec::with_capacity(xs.len()),
            clamped: 0,
        };
        for &x in xs {
            let (fa, f, c) = self.eval_point(x);
            out.f_hat_a.push(fa);
            out.f_hat.push(f);
            out.clamped += c as usize;
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = Document {
            format: FORMAT.to_string(),
            version: FORMAT_VERSION,
            config: self.config.clone(),
            transform: self.transform,
            warp: self.warp.clone(),
            coefficients: self.coeffs.clone(),
            mu_hat: self.mu_hat,
            diagnostics: self.diagnostics.clone(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        if doc.format != FORMAT {
            return Err(Error::Serialization(format!("unexpected document format `{}`", doc.format)));
        }
        if doc.version != FORMAT_VERSION {
            return Err(Error::Serialization(format!("unsupported document version {}", doc.version)));
        }
        doc.config.validate()?;
        let c = &doc.coefficients;
        let sized = c.c.len() == 1 << c.j0
            && c.d.len() == c.d_star.len()
            && c.d.iter().zip(&c.d_star).zip(c.j0..).all(|((d, s), j)| d.len() == 1 << j && s.len() == 1 << j);
        if !sized || c.j0 != doc.config.j0 || c.j1() != doc.config.j1 {
            return Err(Error::Serialization("coefficient arrays do not match the configured levels".into()));
        }
        Self::assemble(doc.config, doc.transform, doc.warp, doc.coefficients, doc.mu_hat, doc.diagnostics, None)
    }
}

const FORMAT: &str = "sbwave.power_density";
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Document {
    format: String,
    version: u32,
    config: EstimatorConfig,
    transform: DomainTransform,
    warp: WarpFunction,
    coefficients: CoefficientSet,
    mu_hat: f64,
    diagnostics: Diagnostics,
}

/// `(f_hat^a(x), f_hat(x))`; both zero outside the transformed unit interval.
pub fn synthesize(estimate: &PowerDensityEstimate, x: f64) -> (f64, f64) {
    let (fa, f, _) = estimate.eval_point(x);
    (fa, f)
}

/// Fits the estimator described by `config`.
pub fn estimate_density(sample: &[f64], w: &WeightFunction, config: &EstimatorConfig) -> Result<PowerDensityEstimate> {
    config.validate()?;
    if sample.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: sample.len() });
    }
    let w_orig = w.eval_all(sample)?;
    let epsilon = config.epsilon.unwrap_or_else(|| default_epsilon(config.j1));
    if epsilon >= 0.5 {
        return Err(Error::InvalidConfig(format!(
            "default margin 1.9^-{} = {epsilon:.4} is not below 1/2; set epsilon explicitly for J1 < 2",
            config.j1
        )));
    }
    let transform = compute_transform(sample, epsilon)?;
    let tsample: Vec<f64> = sample.iter().map(|&y| transform.apply(y).clamp(0.0, 1.0)).collect();

    let aux = if config.needs_aux() { AuxDensity::fit(config.aux, &tsample, &config.filter)? } else { None };
    let warp = match config.warp {
        WarpChoice::Identity => WarpFunction::Identity,
        WarpChoice::Empirical => empirical_warp(&tsample)?,
        WarpChoice::Sinusoidal { amplitude } => WarpFunction::sinusoidal(amplitude)?,
    };

    let terms = coefficients::sample_terms(&tsample, &w_orig, config, &warp, aux.as_ref())?;
    let evaluator = Evaluator::new(&config.filter, EvalPrecision::new(config.precision_digits)?);
    let (c, d) = coefficients::accumulate(&terms, &evaluator, config.j0, config.j1);
    let (d_star, sigma_hat, lambda) = if d.is_empty() {
        (Vec::new(), None, None)
    } else {
        match config.threshold.mode() {
            Some(mode) => {
                let t = universal_threshold(&d, mode, config.mad_normalize)?;
                (t.d_star, Some(t.sigma_hat), Some(t.lambda))
            }
            None => {
                let (sigma_hat, _) = universal_lambda(&d, config.mad_normalize)?;
                (d.clone(), Some(sigma_hat), None)
            }
        }
    };
    let coeffs = CoefficientSet { j0: config.j0, c, d, d_star, sigma_hat, lambda };
    let mu_hat = coefficients::mu_hat_from_weights(&w_orig)?;
    let diagnostics = Diagnostics {
        n: sample.len(),
        weight: w.description(),
        g_clamped: terms.g_clamped,
        aux: aux.as_ref().map(AuxDensity::summary),
    };
    PowerDensityEstimate::assemble(config.clone(), transform, warp, coeffs, mu_hat, diagnostics, aux)
}

/// Fits one of the named methods with `J0 = 0` and the given `J1`.
pub fn estimate_method(sample: &[f64], w: &WeightFunction, method: Method, j1: u32) -> Result<PowerDensityEstimate> {
    estimate_density(sample, w, &method.config(0, j1))
}

/// Clips negative values to zero and rescales so the trapezoid integral over
/// the equally spaced grid is one.
pub fn clip_and_renormalize(values: &[f64], step: f64) -> Vec<f64> {
    let clipped: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
    let mass = trapezoid_values(&clipped, step);
    if mass > 0.0 {
        clipped.iter().map(|v| v / mass).collect()
    } else {
        clipped
    }
}
