//! Cascade (two-scale refinement) evaluation of φ on dyadic grids.
//!
//! Independent of the matrix-product evaluator: integer values come from the
//! eigenvector of the two-scale operator restricted to the integers, then
//! each refinement level fills the odd grid points from the previous level.

use super::filters::WaveletFilter;
use crate::error::{Error, Result};

/// φ sampled at `i / 2^levels` for `i = 0..=M * 2^levels`.
#[derive(Debug, Clone)]
pub struct CascadeTable {
    levels: u32,
    values: Vec<f64>,
}

impl CascadeTable {
    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        1.0 / (1u64 << self.levels) as f64
    }

    /// Iterates `(x, phi(x))` over the grid.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let step = self.step();
        self.values.iter().enumerate().map(move |(i, &v)| (i as f64 * step, v))
    }

    /// Value at the grid point `x`, if `x` is on the grid.
    pub fn at(&self, x: f64) -> Option<f64> {
        let idx = x * (1u64 << self.levels) as f64;
        if idx.fract() != 0.0 || idx < 0.0 {
            return None;
        }
        self.values.get(idx as usize).copied()
    }
}

/// Values of φ at `0, 1, ..., M` (with `phi(M) = 0`), normalized to sum to one.
pub fn integer_values(filter: &WaveletFilter) -> Result<Vec<f64>> {
    let h = filter.lowpass();
    let m = filter.support_length();
    let sqrt2 = std::f64::consts::SQRT_2;
    // (A - I) v = 0 with A[i][j] = sqrt(2) h_{2i - j}, i, j = 0..M-1.
    let mut a = vec![vec![0.0; m]; m];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let idx = 2 * i as isize - j as isize;
            if (0..h.len() as isize).contains(&idx) {
                *entry = sqrt2 * h[idx as usize];
            }
            if i == j {
                *entry -= 1.0;
            }
        }
    }
    let mut values = null_vector(a)?;
    values.push(0.0);
    Ok(values)
}

/// Null vector `v` of `a` normalized by `sum(v) = 1`, from the nonsingular
/// bordered system `(a^T a + e e^T) v = e`.
fn null_vector(a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    let mut sys = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            sys[i][j] = (0..n).map(|r| a[r][i] * a[r][j]).sum::<f64>() + 1.0;
        }
        sys[i][n] = 1.0;
    }
    let v = solve_augmented(sys)
        .ok_or_else(|| Error::InvalidFilter("eigenvalue-1 eigenvector of the two-scale operator is not unique".into()))?;
    let residual = a
        .iter()
        .map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>().abs())
        .fold(0.0, f64::max);
    if residual > 1e-8 {
        return Err(Error::InvalidFilter(format!("two-scale operator has no eigenvalue 1 (residual {residual:e})")));
    }
    Ok(v)
}

/// Gaussian elimination with partial pivoting on an `n x (n + 1)` system.
fn solve_augmented(mut m: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-14 {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor != 0.0 {
                for c in col..=n {
                    m[r][c] -= factor * m[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][n] - tail) / m[r][r];
    }
    Some(x)
}

/// Cascade-algorithm table of φ on the level-`levels` dyadic grid.
pub fn cascade_oracle(filter: &WaveletFilter, levels: u32) -> Result<CascadeTable> {
    if levels == 0 {
        return Err(Error::InvalidConfig("cascade needs at least one refinement level".into()));
    }
    let h = filter.lowpass();
    let m = filter.support_length();
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut values = integer_values(filter)?;
    for s in 1..=levels {
        let half = 1usize << (s - 1);
        let len = m * (1 << s) + 1;
        let mut next = vec![0.0; len];
        for (i, slot) in next.iter_mut().enumerate() {
            if i % 2 == 0 {
                *slot = values[i / 2];
                continue;
            }
            // phi(i / 2^s) = sum_k sqrt(2) h_k phi(i / 2^(s-1) - k)
            *slot = h
                .iter()
                .enumerate()
                .filter_map(|(k, hk)| {
                    let idx = i as isize - (k * half) as isize;
                    (0..values.len() as isize).contains(&idx).then(|| sqrt2 * hk * values[idx as usize])
                })
                .sum();
        }
        values = next;
    }
    Ok(CascadeTable { levels, values })
}
