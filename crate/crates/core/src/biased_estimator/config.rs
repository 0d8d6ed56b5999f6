use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::threshold::ShrinkMode;
use crate::aux_density::AuxKind;
use crate::error::{Error, Result};
use crate::wavelet::{load_filter, WaveletFilter};

/// Largest finest level accepted; `2^J1` coefficients are allocated.
pub const MAX_LEVEL: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarpChoice {
    Identity,
    Empirical,
    /// Known warp `x + c sin(2 pi x) / (2 pi)` using its own density as `h`.
    Sinusoidal { amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdChoice {
    HardUniversal,
    SoftUniversal,
    None,
}

impl ThresholdChoice {
    pub fn mode(self) -> Option<ShrinkMode> {
        match self {
            ThresholdChoice::HardUniversal => Some(ShrinkMode::Hard),
            ThresholdChoice::SoftUniversal => Some(ShrinkMode::Soft),
            ThresholdChoice::None => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub a: f64,
    pub j0: u32,
    pub j1: u32,
    pub warp: WarpChoice,
    pub threshold: ThresholdChoice,
    pub aux: AuxKind,
    pub filter: WaveletFilter,
    /// Margin of the domain transform; `None` means `1.9^-J1`.
    pub epsilon: Option<f64>,
    /// Floor applied to auxiliary density evaluations.
    pub g_floor: f64,
    /// Divide the MAD by 0.6745.
    pub mad_normalize: bool,
    pub precision_digits: usize,
}

impl EstimatorConfig {
    pub fn new(a: f64, j0: u32, j1: u32) -> Self {
        EstimatorConfig {
            a,
            j0,
            j1,
            warp: WarpChoice::Identity,
            threshold: ThresholdChoice::HardUniversal,
            aux: AuxKind::KdeSj,
            filter: load_filter("sym10").expect("built-in filter"),
            epsilon: None,
            g_floor: 1e-6,
            mad_normalize: true,
            precision_digits: 30,
        }
    }

    pub fn with_filter(mut self, filter: WaveletFilter) -> Self {
        self.filter = filter;
        self
    }

    pub fn with_warp(mut self, warp: WarpChoice) -> Self {
        self.warp = warp;
        self
    }

    pub fn with_threshold(mut self, threshold: ThresholdChoice) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_aux(mut self, aux: AuxKind) -> Self {
        self.aux = aux;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    /// Whether `g` enters the coefficients.
    pub fn needs_aux(&self) -> bool {
        self.a != 1.0 || self.warp == WarpChoice::Empirical
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.5 && self.a.is_finite()) {
            return Err(Error::InvalidConfig(format!("power a = {} must be at least 1/2", self.a)));
        }
        if self.j0 > self.j1 {
            return Err(Error::InvalidConfig(format!("J0 = {} exceeds J1 = {}", self.j0, self.j1)));
        }
        if self.j1 > MAX_LEVEL {
            return Err(Error::InvalidConfig(format!("J1 = {} exceeds the supported maximum {MAX_LEVEL}", self.j1)));
        }
        if self.needs_aux() && self.aux == AuxKind::None {
            return Err(Error::MissingAux);
        }
        if let WarpChoice::Sinusoidal { amplitude } = self.warp {
            if !(amplitude.abs() < 1.0) {
                return Err(Error::InvalidConfig(format!("sinusoidal warp amplitude {amplitude} must satisfy |c| < 1")));
            }
        }
        if !(self.g_floor > 0.0) {
            return Err(Error::InvalidConfig(format!("density floor {} must be positive", self.g_floor)));
        }
        if self.precision_digits == 0 {
            return Err(Error::InvalidConfig("precision must be at least one dyadic digit".into()));
        }
        Ok(())
    }
}

/// The four named estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `a = 1/2`, `H(x) = x`.
    M1,
    /// `a = 1`, `H(x) = x`.
    M2,
    /// `a = 1/2`, `H` the empirical CDF.
    M3,
    /// `a = 1`, `H` the empirical CDF.
    M4,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::M1, Method::M2, Method::M3, Method::M4];

    pub fn power(self) -> f64 {
        match self {
            Method::M1 | Method::M3 => 0.5,
            Method::M2 | Method::M4 => 1.0,
        }
    }

    pub fn warp(self) -> WarpChoice {
        match self {
            Method::M1 | Method::M2 => WarpChoice::Identity,
            Method::M3 | Method::M4 => WarpChoice::Empirical,
        }
    }

    /// `p` in `J1 = ceil(p log2 n)` that worked best in simulations.
    pub fn default_p(self) -> f64 {
        match self {
            Method::M1 | Method::M2 => 0.45,
            Method::M3 | Method::M4 => 0.95,
        }
    }

    pub fn config(self, j0: u32, j1: u32) -> EstimatorConfig {
        let aux = if self == Method::M2 { AuxKind::None } else { AuxKind::KdeSj };
        EstimatorConfig::new(self.power(), j0, j1).with_warp(self.warp()).with_aux(aux)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::M1 => "m1",
            Method::M2 => "m2",
            Method::M3 => "m3",
            Method::M4 => "m4",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m1" => Ok(Method::M1),
            "m2" => Ok(Method::M2),
            "m3" => Ok(Method::M3),
            "m4" => Ok(Method::M4),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}` (expected m1, m2, m3 or m4)"))),
        }
    }
}

/// `J1 = ceil(p log2 n)`.
pub fn resolve_j1(p: f64, n: usize) -> Result<u32> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidConfig(format!("p = {p} must be positive")));
    }
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let level = (p * (n as f64).log2()).ceil();
    if level > MAX_LEVEL as f64 {
        return Err(Error::InvalidConfig(format!("J1 = {level} exceeds the supported maximum {MAX_LEVEL}")));
    }
    Ok(level as u32)
}
