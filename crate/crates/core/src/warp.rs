//! Warping CDFs `H` used to compose the wavelet basis, `phi_jk(H(x))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Separation applied to tied sample values before building knots.
pub const TIE_JITTER: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarpKind {
    Identity,
    Empirical,
    Parametric,
}

/// A continuous, strictly increasing CDF on `[0, 1]` with its density and
/// inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarpFunction {
    Identity,
    Empirical(EmpiricalWarp),
    /// `H(x) = x + c sin(2 pi x) / (2 pi)`, density `1 + c cos(2 pi x)`, `|c| < 1`.
    Sinusoidal { amplitude: f64 },
}

pub fn identity_warp() -> WarpFunction {
    WarpFunction::Identity
}

pub fn empirical_warp(sample: &[f64]) -> Result<WarpFunction> {
    EmpiricalWarp::new(sample).map(WarpFunction::Empirical)
}

fn check_unit(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { what, value: x })
    }
}

impl WarpFunction {
    pub fn sinusoidal(amplitude: f64) -> Result<Self> {
        if !(amplitude.abs() < 1.0) {
            return Err(Error::InvalidConfig(format!("sinusoidal warp amplitude {amplitude} must satisfy |c| < 1")));
        }
        Ok(WarpFunction::Sinusoidal { amplitude })
    }

    pub fn kind(&self) -> WarpKind {
        match self {
            WarpFunction::Identity => WarpKind::Identity,
            WarpFunction::Empirical(_) => WarpKind::Empirical,
            WarpFunction::Sinusoidal { .. } => WarpKind::Parametric,
        }
    }

    /// `H(x)` without range checking; callers guarantee `x` in `[0, 1]`.
    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        match self {
            WarpFunction::Identity => x,
            WarpFunction::Empirical(e) => e.cdf(x),
            WarpFunction::Sinusoidal { amplitude } => {
                let tau = std::f64::consts::TAU;
                (x + amplitude * (tau * x).sin() / tau).clamp(0.0, 1.0)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_unit("warp argument", x)?;
        Ok(self.cdf_unchecked(x))
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        check_unit("warp argument", x)?;
        Ok(match self {
            WarpFunction::Identity => 1.0,
            WarpFunction::Empirical(e) => e.slope(x),
            WarpFunction::Sinusoidal { amplitude } => 1.0 + amplitude * (std::f64::consts::TAU * x).cos(),
        })
    }

    pub fn inverse(&self, u: f64) -> Result<f64> {
        check_unit("inverse warp argument", u)?;
        Ok(match self {
            WarpFunction::Identity => u,
            WarpFunction::Empirical(e) => e.inverse(u),
            WarpFunction::Sinusoidal { .. } => {
                // monotone, so bisection always brackets
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.cdf_unchecked(mid) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-15 {
                        break;
                    }
                }
                0.5 * (lo + hi)
            }
        })
    }

    /// Minimum and maximum of the density over `grid + 1` equally spaced
    /// points; an error if it is not bounded away from zero and infinity.
    pub fn check_density_bounds(&self, grid: usize) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..=grid {
            let d = self.density(i as f64 / grid as f64)?;
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "warp density not bounded away from zero and infinity (min {lo}, max {hi})"
            )));
        }
        Ok((lo, hi))
    }
}

/// `y = H(x)`.
pub fn warp_point(warp: &WarpFunction, x: f64) -> Result<f64> {
    warp.cdf(x)
}

/// `x = H*(u)`.
pub fn unwarp_point(warp: &WarpFunction, u: f64) -> Result<f64> {
    warp.inverse(u)
}

/// Linearly interpolated empirical CDF through `(y_(k), k / n)`, extended by
/// straight segments to `(0, 0)` and `(1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalWarp {
    n: usize,
    xs: Vec<f64>,
    us: Vec<f64>,
}

impl EmpiricalWarp {
    pub fn new(sample: &[f64]) -> Result<Self> {
        let n = sample.len();
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        if let Some(&bad) = sample.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfDomain { what: "empirical warp sample", value: bad });
        }
        let mut knots = sample.to_vec();
        knots.sort_by(f64::total_cmp);
        // keep (0, 0) as its own knot and separate ties
        let mut prev = 0.0;
        for v in knots.iter_mut() {
            if *v <= prev {
                *v = prev + TIE_JITTER;
            }
            prev = *v;
        }
        if knots[n - 1] > 1.0 {
            let mut next = 1.0 + TIE_JITTER;
            for v in knots.iter_mut().rev() {
                if *v >= next {
                    *v = next - TIE_JITTER;
                }
                next = *v;
            }
        }
        let mut xs = Vec::with_capacity(n + 2);
        let mut us = Vec::with_capacity(n + 2);
        xs.push(0.0);
        us.push(0.0);
        for (k, &x) in knots.iter().enumerate() {
            xs.push(x);
            us.push((k + 1) as f64 / n as f64);
        }
        if xs[n] < 1.0 {
            xs.push(1.0);
            us.push(1.0);
        }
        Ok(Self { n, xs, us })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Sorted (tie-separated) sample values.
    pub fn knots(&self) -> &[f64] {
        &self.xs[1..=self.n]
    }

    fn segment(knots: &[f64], t: f64) -> usize {
        let idx = knots.partition_point(|&k| k <= t);
        idx.saturating_sub(1).min(knots.len() - 2)
    }

    fn cdf(&self, x: f64) -> f64 {
        let i = Self::segment(&self.xs, x);
        let (x0, x1, u0, u1) = (self.xs[i], self.xs[i + 1], self.us[i], self.us[i + 1]);
        if x == x0 {
            return u0;
        }
        (u0 + (x - x0) * (u1 - u0) / (x1 - x0)).min(u1)
    }

    fn inverse(&self, u: f64) -> f64 {
        let i = Self::segment(&self.us, u);
        let (x0, x1, u0, u1) = (self.xs[i], self.xs[i + 1], self.us[i], self.us[i + 1]);
        if u == u0 {
            return x0;
        }
        (x0 + (u - u0) * (x1 - x0) / (u1 - u0)).min(x1)
    }

    fn slope(&self, x: f64) -> f64 {
        let i = Self::segment(&self.xs, x);
        (self.us[i + 1] - self.us[i]) / (self.xs[i + 1] - self.xs[i])
    }
}
