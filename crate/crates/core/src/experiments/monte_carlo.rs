use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::simulation::{make_example_with, ExampleId, SimulationExample};
use crate::biased_estimator::{estimate_density, resolve_j1, Method};
use crate::error::{Error, Result};
use crate::numeric::mean_sd;

/// Mean squared difference over the grid.
pub fn ase(estimate: impl Fn(f64) -> f64, truth: impl Fn(f64) -> f64, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    Ok(grid.iter().map(|&x| (estimate(x) - truth(x)).powi(2)).sum::<f64>() / grid.len() as f64)
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Generator for replication `r` at sample size `n`.
pub fn replication_rng(base_seed: u64, replication: usize, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(replication as u64));
    rng.set_stream(n as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloPlan {
    pub example: ExampleId,
    /// Keep the third example's printed, unnormalized `f`.
    pub literal: bool,
    pub sizes: Vec<usize>,
    pub p_values: Vec<f64>,
    pub methods: Vec<Method>,
    pub replications: usize,
    pub base_seed: u64,
    pub n_grid: usize,
    pub keep_raw: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for MonteCarloPlan {
    fn default() -> Self {
        MonteCarloPlan {
            example: ExampleId::Ex1,
            literal: false,
            sizes: vec![250, 500, 750, 1000],
            p_values: vec![0.20, 0.45, 0.70, 0.95],
            methods: Method::ALL.to_vec(),
            replications: 100,
            base_seed: 1,
            n_grid: 250,
            keep_raw: false,
            threads: None,
        }
    }
}

impl MonteCarloPlan {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.replications == 0 {
            return bad("at least one replication is required");
        }
        if self.sizes.is_empty() || self.p_values.is_empty() || self.methods.is_empty() {
            return bad("sample sizes, p values and methods must be nonempty");
        }
        if self.sizes.iter().any(|&n| n < 10) {
            return bad("sample sizes must be at least 10");
        }
        if self.n_grid < 2 {
            return bad("the evaluation grid needs at least two points");
        }
        if self.threads == Some(0) {
            return bad("thread count must be positive");
        }
        for &n in &self.sizes {
            for &p in &self.p_values {
                resolve_j1(p, n)?;
            }
        }
        Ok(())
    }

    /// `(method, p)` pairs in output order.
    pub fn cells(&self) -> Vec<(Method, f64)> {
        self.methods.iter().flat_map(|&m| self.p_values.iter().map(move |&p| (m, p))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AseCell {
    pub example: ExampleId,
    pub method: Method,
    pub n: usize,
    pub p: f64,
    pub j1: u32,
    pub mean_ase: f64,
    pub sd_ase: f64,
    /// Successful replications.
    pub reps: usize,
    pub failures: usize,
    /// Grid evaluations with `f_hat < 0`, summed over replications.
    pub negative_evals: usize,
    /// Per-replication ASE in replication order; `None` marks a failure.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub raw: Option<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AseTable {
    pub example: ExampleId,
    pub base_seed: u64,
    pub replications: usize,
    pub grids: Vec<GridSpec>,
    pub cells: Vec<AseCell>,
}

/// 17 significant digits.
fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

impl AseTable {
    pub fn cell(&self, method: Method, n: usize, p: f64) -> Option<&AseCell> {
        self.cells.iter().find(|c| c.method == method && c.n == n && c.p == p)
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().map(|c| c.failures).sum()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(["example", "method", "n", "p", "mean_ase", "sd_ase", "reps"]).map_err(ser)?;
        for c in &self.cells {
            w.write_record([
                c.example.to_string(),
                c.method.to_string(),
                c.n.to_string(),
                c.p.to_string(),
                fmt_real(c.mean_ase),
                fmt_real(c.sd_ase),
                c.reps.to_string(),
            ])
            .map_err(ser)?;
        }
        finish(w)
    }

    /// One row per replication: `example,method,n,p,replication,ase`.
    pub fn raw_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(["example", "method", "n", "p", "replication", "ase"]).map_err(ser)?;
        for c in &self.cells {
            for (r, v) in c.raw.iter().flatten().enumerate() {
                let ase = v.map(fmt_real).unwrap_or_else(|| "NA".to_string());
                w.write_record([c.example.to_string(), c.method.to_string(), c.n.to_string(), c.p.to_string(), r.to_string(), ase])
                    .map_err(ser)?;
            }
        }
        finish(w)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

struct Outcome {
    ase: Option<f64>,
    negatives: usize,
}

fn run_cell(example: &SimulationExample, sample: &[f64], method: Method, j1: u32, grid: &[f64], truth: &[f64]) -> Outcome {
    let fit = match estimate_density(sample, example.weight(), &method.config(0, j1)) {
        Ok(fit) => fit,
        Err(_) => return Outcome { ase: None, negatives: 0 },
    };
    let values = fit.eval_grid(grid);
    let negatives = values.f_hat.iter().filter(|&&v| v < 0.0).count();
    let sse: f64 = values.f_hat.iter().zip(truth).map(|(e, t)| (e - t).powi(2)).sum();
    let ase = sse / grid.len() as f64;
    Outcome { ase: ase.is_finite().then_some(ase), negatives }
}

/// Runs every `(n, method, p)` cell of the plan.
///
/// All cells at one `n` share the replication samples, so comparisons between
/// methods are paired. Results do not depend on the number of threads.
pub fn run_monte_carlo(plan: &MonteCarloPlan) -> Result<AseTable> {
    plan.validate()?;
    match plan.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(|| run_plan(plan)),
        None => run_plan(plan),
    }
}

fn run_plan(plan: &MonteCarloPlan) -> Result<AseTable> {
    let example = make_example_with(plan.example, plan.literal)?;
    let cells = plan.cells();
    let mut table = AseTable {
        example: plan.example,
        base_seed: plan.base_seed,
        replications: plan.replications,
        grids: Vec::new(),
        cells: Vec::new(),
    };
    for &n in &plan.sizes {
        let samples: Vec<Option<Vec<f64>>> = (0..plan.replications)
            .into_par_iter()
            .map(|r| example.sample_biased(n, &mut replication_rng(plan.base_seed, r, n)).ok())
            .collect();
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for s in samples.iter().flatten() {
            lo = lo.max(s.iter().cloned().fold(f64::INFINITY, f64::min));
            hi = hi.min(s.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        }
        if !(lo < hi) {
            return Err(Error::DegenerateSample(format!("no common range across replications at n = {n}")));
        }
        let grid = linspace(lo, hi, plan.n_grid);
        let truth: Vec<f64> = grid.iter().map(|&x| example.f(x)).collect();
        table.grids.push(GridSpec { n, lo, hi, points: plan.n_grid });

        let j1s: Vec<u32> = cells.iter().map(|&(_, p)| resolve_j1(p, n)).collect::<Result<_>>()?;
        let outcomes: Vec<Vec<Outcome>> = samples
            .par_iter()
            .map(|sample| match sample {
                Some(sample) => cells
                    .iter()
                    .zip(&j1s)
                    .map(|(&(method, _), &j1)| run_cell(&example, sample, method, j1, &grid, &truth))
                    .collect(),
                None => cells.iter().map(|_| Outcome { ase: None, negatives: 0 }).collect(),
            })
            .collect();

        for (i, (&(method, p), &j1)) in cells.iter().zip(&j1s).enumerate() {
            let per_rep: Vec<Option<f64>> = outcomes.iter().map(|o| o[i].ase).collect();
            let ok: Vec<f64> = per_rep.iter().flatten().copied().collect();
            let (mean_ase, sd_ase) = if ok.is_empty() { (f64::NAN, f64::NAN) } else { mean_sd(&ok) };
            table.cells.push(AseCell {
                example: plan.example,
                method,
                n,
                p,
                j1,
                mean_ase,
                sd_ase,
                reps: ok.len(),
                failures: per_rep.len() - ok.len(),
                negative_evals: outcomes.iter().map(|o| o[i].negatives).sum(),
                raw: plan.keep_raw.then_some(per_rep),
            });
        }
    }
    Ok(table)
}
