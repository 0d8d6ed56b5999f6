use crate::error::{Error, Result};
use crate::wavelet::{EvalPrecision, Evaluator, WaveletFilter};

/// Linear periodized wavelet estimate of a density on `[0, 1]`,
/// `sum_k alpha_k phi^p_{jk}(y)` with `alpha_k = (1/n) sum_i phi^p_{jk}(Y_i)`.
#[derive(Debug, Clone)]
pub struct WaveletDensityEstimate {
    filter: WaveletFilter,
    level: u32,
    alphas: Vec<f64>,
    evaluator: Evaluator,
}

impl WaveletDensityEstimate {
    pub fn filter(&self) -> &WaveletFilter {
        &self.filter
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Synthesis at `y`; zero outside `[0, 1]`.
    pub fn eval(&self, y: f64) -> f64 {
        if !(0.0..=1.0).contains(&y) {
            return 0.0;
        }
        let mut basis = vec![0.0; self.alphas.len()];
        self.evaluator.periodized_phi_all(self.level, y, &mut basis);
        basis.iter().zip(&self.alphas).map(|(b, a)| b * a).sum()
    }
}

pub fn wavelet_density(sample: &[f64], filter: &WaveletFilter, level: u32) -> Result<WaveletDensityEstimate> {
    let n = sample.len();
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if level >= 63 || (1u64 << level) > n as u64 {
        return Err(Error::InvalidConfig(format!("level {level} too fine for {n} observations (need 2^j <= n)")));
    }
    if let Some(&bad) = sample.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OutOfDomain { what: "wavelet density sample", value: bad });
    }
    let evaluator = Evaluator::new(filter, EvalPrecision::default());
    let size = 1usize << level;
    let mut alphas = vec![0.0; size];
    let mut basis = vec![0.0; size];
    for &y in sample {
        evaluator.periodized_phi_all(level, y, &mut basis);
        for (a, b) in alphas.iter_mut().zip(&basis) {
            *a += b;
        }
    }
    for a in alphas.iter_mut() {
        *a /= n as f64;
    }
    Ok(WaveletDensityEstimate { filter: filter.clone(), level, alphas, evaluator })
}
