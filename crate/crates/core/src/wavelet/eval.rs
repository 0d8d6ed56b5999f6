//! Pointwise evaluation of compactly supported scaling functions and wavelets
//! by the Daubechies-Lagarias matrix-product expansion.
//!
//! For `x = m + t` with `t = 0.d1 d2 d3 ...` in binary, the vector
//! `v(t) = (phi(t), phi(t + 1), ..., phi(t + M - 1))` satisfies
//! `v(t) = T_{d1} T_{d2} ... T_{dn} v(tau^n t)`, and the product converges to a
//! rank-one matrix whose rows are constant. The row averages of the truncated
//! product are the values at the integer offsets of `t`.
//!
//! Applying the truncated product to the constant vector `e / M` (the plain
//! row average) only converges like `2^-n`. For filters that reproduce linear
//! polynomials the product is instead applied to the linear interpolant of
//! `v(0)` at the leftover fraction `tau^n t`; that start vector matches the
//! eigen-directions for eigenvalues 1 and 1/2 exactly, so the error decays at
//! the rate of the next contraction.

use serde::{Deserialize, Serialize};

use super::filters::WaveletFilter;
use crate::error::{Error, Result};

/// Number of binary digits consumed by the matrix-product expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPrecision {
    n_dyadic_digits: usize,
}

impl EvalPrecision {
    pub const DEFAULT_DIGITS: usize = 30;

    pub fn new(n_dyadic_digits: usize) -> Result<Self> {
        if n_dyadic_digits == 0 {
            return Err(Error::InvalidConfig("n_dyadic_digits must be at least 1".into()));
        }
        Ok(Self { n_dyadic_digits })
    }

    pub fn digits(&self) -> usize {
        self.n_dyadic_digits
    }
}

impl Default for EvalPrecision {
    fn default() -> Self {
        Self { n_dyadic_digits: Self::DEFAULT_DIGITS }
    }
}

/// Precomputed Daubechies-Lagarias matrices for one filter.
///
/// Cheap to build; the fitting code keeps one per estimate so the matrices are
/// not rebuilt for every sample point.
#[derive(Debug, Clone)]
pub struct Evaluator {
    support: usize,
    taps: usize,
    t0: Vec<f64>,
    t1: Vec<f64>,
    sqrt2_highpass: Vec<f64>,
    digits: usize,
    /// `phi(0), ..., phi(M)`, used for the start vector when `interpolate`.
    integer_values: Vec<f64>,
    interpolate: bool,
}

impl Evaluator {
    pub fn new(filter: &WaveletFilter, prec: EvalPrecision) -> Self {
        let h = filter.lowpass();
        let taps = h.len();
        let m = filter.support_length();
        // sqrt(2) h_k, rescaled so the even and odd taps each sum to exactly
        // one; otherwise the ulp error compounds over the matrix products.
        let mut c: Vec<f64> = h.iter().map(|v| std::f64::consts::SQRT_2 * v).collect();
        for parity in 0..2 {
            let total: f64 = c.iter().skip(parity).step_by(2).sum();
            c.iter_mut().skip(parity).step_by(2).for_each(|v| *v /= total);
        }
        let coef = |idx: isize| -> f64 {
            if (0..taps as isize).contains(&idx) {
                c[idx as usize]
            } else {
                0.0
            }
        };
        let mut t0 = vec![0.0; m * m];
        let mut t1 = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let base = 2 * i as isize - j as isize;
                t0[i * m + j] = coef(base);
                t1[i * m + j] = coef(base + 1);
            }
        }
        let sqrt2_highpass = (0..taps).map(|k| if k % 2 == 0 { c[taps - 1 - k] } else { -c[taps - 1 - k] }).collect();
        // v(0) is the fixed point of T_0; power iteration contracts by 1/2 per step.
        let mut integer_values = vec![1.0 / m as f64; m];
        let mut next = vec![0.0; m];
        for _ in 0..200 {
            mat_vec(&t0, m, &integer_values, &mut next);
            std::mem::swap(&mut integer_values, &mut next);
        }
        integer_values.push(0.0);
        Self {
            support: m,
            taps,
            t0,
            t1,
            sqrt2_highpass,
            digits: prec.digits(),
            integer_values,
            interpolate: filter.n_vanishing_moments() >= 2,
        }
    }

    /// `M = 2N - 1`; φ and ψ vanish outside `[0, M]`.
    pub fn support_length(&self) -> usize {
        self.support
    }

    /// Writes `phi(frac + i)` for `i = 0..M` into `out`.
    ///
    /// `frac` must lie in `[0, 1)`. Digits beyond the binary expansion of a
    /// dyadic rational are zero.
    pub fn phi_offsets(&self, frac: f64, out: &mut [f64]) {
        debug_assert!((0.0..1.0).contains(&frac));
        let m = self.support;
        debug_assert_eq!(out.len(), m);
        let mut digits = [false; 64];
        let n = self.digits.min(64);
        let mut t = frac;
        for d in digits.iter_mut().take(n) {
            t *= 2.0;
            if t >= 1.0 {
                *d = true;
                t -= 1.0;
            }
        }
        let mut cur: Vec<f64> = if self.interpolate {
            let z = &self.integer_values;
            (0..m).map(|i| (1.0 - t) * z[i] + t * z[i + 1]).collect()
        } else {
            vec![1.0 / m as f64; m]
        };
        // T_{d1} ... T_{dn} applied right to left.
        for &bit in digits[..n].iter().rev() {
            let mat = if bit { &self.t1 } else { &self.t0 };
            mat_vec(mat, m, &cur, out);
            cur.copy_from_slice(out);
        }
        out.copy_from_slice(&cur);
    }

    pub fn phi(&self, x: f64) -> f64 {
        if !(x >= 0.0 && x < self.support as f64) {
            return 0.0;
        }
        let base = x.floor();
        let mut v = vec![0.0; self.support];
        self.phi_offsets(x - base, &mut v);
        v[base as usize]
    }

    /// `psi(x) = sqrt(2) * sum_k g_k phi(2x - k)`.
    pub fn psi(&self, x: f64) -> f64 {
        if !(x >= 0.0 && x < self.support as f64) {
            return 0.0;
        }
        let y = 2.0 * x;
        let base = y.floor();
        let mut v = vec![0.0; self.support];
        self.phi_offsets(y - base, &mut v);
        let b = base as isize;
        (0..self.taps)
            .filter_map(|k| {
                let idx = b - k as isize;
                (0..self.support as isize).contains(&idx).then(|| self.sqrt2_highpass[k] * v[idx as usize])
            })
            .sum()
    }

    /// Fills `out[k] = phi^p_{jk}(y)` for all `k = 0..2^j`.
    pub fn periodized_phi_all(&self, j: u32, y: f64, out: &mut [f64]) {
        let period = 1usize << j;
        debug_assert_eq!(out.len(), period);
        out.fill(0.0);
        let t = y * period as f64;
        let base = t.floor();
        let mut v = vec![0.0; self.support];
        self.phi_offsets(t - base, &mut v);
        let scale = (period as f64).sqrt();
        let b = base as i64;
        for (i, &vi) in v.iter().enumerate() {
            let k = (b - i as i64).rem_euclid(period as i64) as usize;
            out[k] += scale * vi;
        }
    }

    /// Fills `out[k] = psi^p_{jk}(y)` for all `k = 0..2^j`.
    pub fn periodized_psi_all(&self, j: u32, y: f64, out: &mut [f64]) {
        let period = 1usize << j;
        debug_assert_eq!(out.len(), period);
        out.fill(0.0);
        let t = y * (2 * period) as f64;
        let base = t.floor();
        let mut u = vec![0.0; self.support];
        self.phi_offsets(t - base, &mut u);
        let scale = (period as f64).sqrt();
        let b = base as i64;
        for (i, &ui) in u.iter().enumerate() {
            for (m, &gm) in self.sqrt2_highpass.iter().enumerate() {
                let twice_k = b - i as i64 - m as i64;
                if twice_k.rem_euclid(2) != 0 {
                    continue;
                }
                let k = (twice_k / 2).rem_euclid(period as i64) as usize;
                out[k] += scale * gm * ui;
            }
        }
    }
}

fn mat_vec(mat: &[f64], m: usize, v: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = mat[i * m..(i + 1) * m].iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

/// φ(x) for the given filter; zero outside `[0, 2N - 1)`.
pub fn eval_phi(filter: &WaveletFilter, x: f64, prec: EvalPrecision) -> f64 {
    Evaluator::new(filter, prec).phi(x)
}

/// ψ(x) for the given filter; zero outside `[0, 2N - 1)`.
pub fn eval_psi(filter: &WaveletFilter, x: f64, prec: EvalPrecision) -> f64 {
    Evaluator::new(filter, prec).psi(x)
}

fn check_periodized_args(j: u32, k: i64, y: f64) -> Result<()> {
    let period = 1i64 << j;
    if !(0..period).contains(&k) {
        return Err(Error::IndexOutOfRange { what: "translation", index: k, bound: period });
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::OutOfDomain { what: "periodized evaluation point", value: y });
    }
    Ok(())
}

/// Sums `f(2^j (y - l) - k)` over the shifts `l` whose term can be nonzero.
fn lattice_sum(support: usize, j: u32, k: i64, y: f64, f: impl Fn(f64) -> f64) -> f64 {
    let period = (1i64 << j) as f64;
    let t = period * y - k as f64;
    // need 0 <= t - period * l < support
    let l_min = ((t - support as f64) / period).floor() as i64;
    let l_max = (t / period).ceil() as i64;
    let total: f64 = (l_min..=l_max).map(|l| f(t - period * l as f64)).sum();
    period.sqrt() * total
}

/// Periodized, dilated and translated scaling function φ^p_{jk}(y).
pub fn eval_periodized_phi(filter: &WaveletFilter, j: u32, k: i64, y: f64, prec: EvalPrecision) -> Result<f64> {
    check_periodized_args(j, k, y)?;
    let ev = Evaluator::new(filter, prec);
    Ok(lattice_sum(ev.support_length(), j, k, y, |x| ev.phi(x)))
}

/// Periodized, dilated and translated wavelet ψ^p_{jk}(y).
pub fn eval_periodized_psi(filter: &WaveletFilter, j: u32, k: i64, y: f64, prec: EvalPrecision) -> Result<f64> {
    check_periodized_args(j, k, y)?;
    let ev = Evaluator::new(filter, prec);
    Ok(lattice_sum(ev.support_length(), j, k, y, |x| ev.psi(x)))
}
