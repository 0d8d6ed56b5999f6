use rand::Rng;

use crate::error::{Error, Result};

/// Grid points used to locate the envelope constant.
pub const ENVELOPE_GRID: usize = 4096;
/// Safety factor applied to the grid maximum.
pub const ENVELOPE_SAFETY: f64 = 1.01;

/// Draws and the number of proposals it took to get them.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptReject {
    pub draws: Vec<f64>,
    pub proposals: usize,
}

impl AcceptReject {
    pub fn acceptance_rate(&self) -> f64 {
        self.draws.len() as f64 / self.proposals.max(1) as f64
    }
}

/// `1.01 * max density` over an equally spaced grid on `[0, 1]`.
pub fn envelope_bound(density: impl Fn(f64) -> f64) -> Result<f64> {
    let mut m = 0.0f64;
    for i in 0..ENVELOPE_GRID {
        let v = density(i as f64 / (ENVELOPE_GRID - 1) as f64);
        if !v.is_finite() {
            return Err(Error::Sampling(format!("density is unbounded (value {v}); no accept-reject envelope")));
        }
        m = m.max(v);
    }
    if !(m > 0.0) {
        return Err(Error::Sampling("density vanishes on the envelope grid".into()));
    }
    Ok(m * ENVELOPE_SAFETY)
}

/// Accept-reject with uniform proposals on `[0, 1]`.
pub fn accept_reject_sample<R: Rng + ?Sized>(density: impl Fn(f64) -> f64, n: usize, rng: &mut R) -> Result<AcceptReject> {
    let bound = envelope_bound(&density)?;
    accept_reject_with_bound(density, bound, n, rng)
}

pub fn accept_reject_with_bound<R: Rng + ?Sized>(
    density: impl Fn(f64) -> f64,
    bound: f64,
    n: usize,
    rng: &mut R,
) -> Result<AcceptReject> {
    let limit = 1000 * n + 10_000;
    let mut draws = Vec::with_capacity(n);
    let mut proposals = 0;
    while draws.len() < n {
        if proposals >= limit {
            return Err(Error::Sampling(format!("accept-reject gave {} of {n} draws in {limit} proposals", draws.len())));
        }
        proposals += 1;
        let x: f64 = rng.random();
        let u: f64 = rng.random();
        if u * bound <= density(x) {
            draws.push(x);
        }
    }
    Ok(AcceptReject { draws, proposals })
}
