use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;

use super::sampling::{accept_reject_with_bound, envelope_bound};
use crate::error::{Error, Result};
use crate::numeric::simpson;
use crate::weight::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex3,
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex3 => "ex3",
        })
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ex1" | "1" => Ok(ExampleId::Ex1),
            "ex2" | "2" => Ok(ExampleId::Ex2),
            "ex3" | "3" => Ok(ExampleId::Ex3),
            other => Err(Error::UnknownExample(other.to_string())),
        }
    }
}

fn beta_pdf(x: f64, a: f64, b: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - ln_beta(a, b)).exp()
}

fn beta_mean(a: f64, b: f64) -> f64 {
    a / (a + b)
}

/// Piece `k` of the third example's printed density, on `[k/4, (k+1)/4)`.
fn ex3_piece(k: usize, x: f64) -> f64 {
    let v = match k {
        0 => 64.0 * x + 1.0,
        1 => 32.0 * (1.0 - 2.0 * x) + 1.0,
        2 => x * (32.0 * x - 31.0) + 12.0,
        _ => x * (65.0 - 32.0 * x) - 24.0,
    };
    v / 9.0
}

/// Printed piecewise density of the third example; integrates to 7/8 and
/// jumps at `x = 1/2`.
pub fn ex3_printed_density(x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    ex3_piece(((x * 4.0) as usize).min(3), x)
}

/// `int_0^1 m(x) f(x) dx` for the printed `f`, piece by piece so the jump does
/// not spoil the quadrature.
fn ex3_integral(m: impl Fn(f64) -> f64) -> f64 {
    (0..4).map(|k| simpson(|x| m(x) * ex3_piece(k, x), k as f64 / 4.0, (k + 1) as f64 / 4.0, SIMPSON_INTERVALS / 4)).sum()
}

/// Densities on `[0, 1]` used by the examples.
#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    Beta { a: f64, b: f64 },
    BetaMixture(Vec<(f64, f64, f64)>),
    /// `scale * ex3_printed_density`.
    Piecewise { scale: f64 },
    /// `w(x) * scale * ex3_printed_density(x) / mu`.
    WeightedPiecewise { scale: f64, mu: f64 },
}

impl Law {
    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Law::Beta { a, b } => beta_pdf(x, *a, *b),
            Law::BetaMixture(parts) => parts.iter().map(|&(p, a, b)| p * beta_pdf(x, a, b)).sum(),
            Law::Piecewise { scale } => scale * ex3_printed_density(x),
            Law::WeightedPiecewise { scale, mu } => ex3_weight(x) * scale * ex3_printed_density(x) / mu,
        }
    }
}

fn ex3_weight(x: f64) -> f64 {
    0.1 + 2.0 * x * x
}

/// How draws from a law are produced.
#[derive(Debug, Clone)]
enum Sampler {
    Beta(Beta<f64>),
    Mixture(Vec<(f64, Beta<f64>)>),
    AcceptReject { bound: f64 },
}

impl Sampler {
    fn for_law(law: &Law) -> Result<Self> {
        let beta = |a, b| Beta::new(a, b).map_err(|e| Error::Sampling(e.to_string()));
        Ok(match law {
            Law::Beta { a, b } => Sampler::Beta(beta(*a, *b)?),
            Law::BetaMixture(parts) => {
                Sampler::Mixture(parts.iter().map(|&(p, a, b)| Ok((p, beta(a, b)?))).collect::<Result<_>>()?)
            }
            _ => Sampler::AcceptReject { bound: envelope_bound(|x| law.pdf(x))? },
        })
    }

    fn sample<R: Rng + ?Sized>(&self, law: &Law, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        match self {
            Sampler::Beta(d) => Ok((0..n).map(|_| d.sample(rng)).collect()),
            Sampler::Mixture(parts) => Ok((0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    let mut chosen = &parts[parts.len() - 1].1;
                    for (p, d) in parts {
                        acc += p;
                        if u < acc {
                            chosen = d;
                            break;
                        }
                    }
                    chosen.sample(rng)
                })
                .collect()),
            Sampler::AcceptReject { bound } => Ok(accept_reject_with_bound(|x| law.pdf(x), *bound, n, rng)?.draws),
        }
    }
}

/// One simulation setting: the target `f`, the bias `w`, and `g = w f / mu`.
#[derive(Debug, Clone)]
pub struct SimulationExample {
    id: ExampleId,
    weight: WeightFunction,
    mu: f64,
    f: Law,
    g: Law,
    /// Integral of the density as printed; `f` is divided by it unless literal.
    printed_mass: f64,
    f_sampler: Sampler,
    g_sampler: Sampler,
}

const SIMPSON_INTERVALS: usize = 4096;

impl SimulationExample {
    pub fn id(&self) -> ExampleId {
        self.id
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn f_law(&self) -> &Law {
        &self.f
    }

    pub fn g_law(&self) -> &Law {
        &self.g
    }

    pub fn printed_mass(&self) -> f64 {
        self.printed_mass
    }

    /// True density of interest.
    pub fn f(&self, x: f64) -> f64 {
        self.f.pdf(x)
    }

    /// Density of the observed, biased data.
    pub fn g(&self, y: f64) -> f64 {
        self.g.pdf(y)
    }

    /// Whether draws from `g` use accept-reject.
    pub fn uses_accept_reject(&self) -> bool {
        matches!(self.g_sampler, Sampler::AcceptReject { .. })
    }

    /// `n` observations from `g`.
    pub fn sample_biased<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.g_sampler.sample(&self.g, n, rng)
    }

    /// `n` observations from `f` itself.
    pub fn sample_unbiased<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.f_sampler.sample(&self.f, n, rng)
    }

    fn build(id: ExampleId, weight: &str, mu: f64, f: Law, g: Law, printed_mass: f64) -> Result<Self> {
        let weight = WeightFunction::parse(weight)?;
        let f_sampler = Sampler::for_law(&f)?;
        let g_sampler = Sampler::for_law(&g)?;
        Ok(SimulationExample { id, weight, mu, f, g, printed_mass, f_sampler, g_sampler })
    }
}

pub fn make_example(id: ExampleId) -> Result<SimulationExample> {
    make_example_with(id, false)
}

/// With `literal`, the third example keeps its printed (unnormalized) `f`.
pub fn make_example_with(id: ExampleId, literal: bool) -> Result<SimulationExample> {
    match id {
        ExampleId::Ex1 => {
            let mu = (ln_beta(0.5, 0.5) - ln_beta(2.5, 2.5)).exp();
            SimulationExample::build(
                id,
                "x^-2 * (1 - x)^-2",
                mu,
                Law::Beta { a: 2.5, b: 2.5 },
                Law::Beta { a: 0.5, b: 0.5 },
                1.0,
            )
        }
        ExampleId::Ex2 => {
            let comps = [(20.0, 3.0), (40.0, 40.0), (3.0, 20.0)];
            let pis = [1.0 / 3.0; 3];
            let mu: f64 = comps.iter().zip(pis).map(|(&(a, b), p)| p * beta_mean(a, b)).sum();
            let f = Law::BetaMixture(comps.iter().zip(pis).map(|(&(a, b), p)| (p, a, b)).collect());
            let g = Law::BetaMixture(ex2_biased_components(&comps, &pis, mu));
            SimulationExample::build(id, "x", mu, f, g, 1.0)
        }
        ExampleId::Ex3 => {
            let printed_mass = ex3_integral(|_| 1.0);
            let scale = if literal { 1.0 } else { 1.0 / printed_mass };
            let mu = scale * ex3_integral(ex3_weight);
            SimulationExample::build(
                id,
                "0.1 + 2*x^2",
                mu,
                Law::Piecewise { scale },
                Law::WeightedPiecewise { scale, mu },
                printed_mass,
            )
        }
    }
}

/// Under `w(y) = y`, component `Beta(a, b)` with weight `p` becomes
/// `Beta(a + 1, b)` with weight `p * mean / mu`.
fn ex2_biased_components(comps: &[(f64, f64)], pis: &[f64], mu: f64) -> Vec<(f64, f64, f64)> {
    comps.iter().zip(pis).map(|(&(a, b), &p)| (p * beta_mean(a, b) / mu, a + 1.0, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::trapezoid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn interior() -> impl Iterator<Item = f64> {
        (0..=980).map(|i| 0.01 + i as f64 * 0.001)
    }

    #[test]
    fn ex1_constants() {
        let ex = make_example(ExampleId::Ex1).unwrap();
        assert!((ex.mu() - 128.0 / 3.0).abs() < 1e-9);
        for y in interior() {
            let lhs = ex.weight().eval(y).unwrap() * ex.f(y) / (128.0 / 3.0);
            assert!((lhs - ex.g(y)).abs() < 1e-9, "{y}");
        }
        assert!(!ex.uses_accept_reject());
    }

    #[test]
    fn ex2_constants() {
        let ex = make_example(ExampleId::Ex2).unwrap();
        assert!((ex.mu() - 0.5).abs() < 1e-15);
        let Law::BetaMixture(parts) = ex.g_law() else { panic!() };
        let expected = [40.0 / 69.0, 1.0 / 3.0, 2.0 / 23.0];
        for (&(p, _, _), e) in parts.iter().zip(expected) {
            assert!((p - e).abs() < 1e-12);
        }
        assert!((parts.iter().map(|p| p.0).sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(parts.iter().map(|p| (p.1, p.2)).collect::<Vec<_>>(), vec![(21.0, 3.0), (41.0, 40.0), (4.0, 20.0)]);
    }

    #[test]
    fn ex3_renormalized() {
        let ex = make_example(ExampleId::Ex3).unwrap();
        assert!((ex.printed_mass() - 0.875).abs() < 1e-12);
        assert!((ex3_integral(|_| 1.0 / ex.printed_mass()) - 1.0).abs() < 1e-12);
        assert!((ex.f(0.5 - 1e-12) * 9.0 * 0.875 - 1.0).abs() < 1e-9);
        assert!((ex.f(0.5) * 9.0 * 0.875 - 4.5).abs() < 1e-9);
        assert!(ex.uses_accept_reject());
        let literal = make_example_with(ExampleId::Ex3, true).unwrap();
        assert!((literal.printed_mass() - 0.875).abs() < 1e-12);
        assert_eq!(literal.f(0.3), ex3_printed_density(0.3));
    }

    #[test]
    fn ex3_printed_pieces_integrate_as_derived() {
        let expected = [0.25, 0.25, 0.146991, 0.228009];
        for (k, v) in expected.into_iter().enumerate() {
            let got = simpson(|x| ex3_piece(k, x), k as f64 / 4.0, (k + 1) as f64 / 4.0, 1024);
            assert!((got - v).abs() < 1e-6, "{k}: {got}");
        }
    }

    #[test]
    fn biased_identity_and_mass() {
        for id in [ExampleId::Ex1, ExampleId::Ex2, ExampleId::Ex3] {
            let ex = make_example(id).unwrap();
            let max_err = interior()
                .map(|y| (ex.weight().eval(y).unwrap() * ex.f(y) / ex.mu() - ex.g(y)).abs())
                .fold(0.0, f64::max);
            assert!(max_err < 1e-9, "{id}: {max_err}");
            let mass = match id {
                // Integrable endpoint singularities; substitute y = sin^2(t).
                ExampleId::Ex1 => {
                    let edge = 1e-7;
                    trapezoid(|t: f64| ex.g(t.sin().powi(2)) * 2.0 * t.sin() * t.cos(), edge, std::f64::consts::FRAC_PI_2 - edge, 100_000)
                }
                ExampleId::Ex2 => simpson(|y| ex.g(y), 0.0, 1.0, 4096),
                ExampleId::Ex3 => ex3_integral(|y| ex3_weight(y) / (ex.printed_mass() * ex.mu())),
            };
            assert!((mass - 1.0).abs() < 1e-6, "{id}: {mass}");
        }
    }

    #[test]
    fn samplers_match_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for id in [ExampleId::Ex1, ExampleId::Ex2, ExampleId::Ex3] {
            let ex = make_example(id).unwrap();
            let ys = ex.sample_biased(50_000, &mut rng).unwrap();
            let mean = ys.iter().sum::<f64>() / ys.len() as f64;
            let exact = match id {
                ExampleId::Ex1 => 0.5,
                ExampleId::Ex2 => simpson(|y| y * ex.g(y), 0.0, 1.0, 4096),
                ExampleId::Ex3 => ex3_integral(|y| y * ex3_weight(y) / (ex.printed_mass() * ex.mu())),
            };
            let tol = 0.005;
            assert!((mean - exact).abs() < tol, "{id}: {mean} vs {exact}");
            assert!(ys.iter().all(|y| (0.0..=1.0).contains(y)));
            let xs = ex.sample_unbiased(50_000, &mut rng).unwrap();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let exact = match id {
                ExampleId::Ex3 => ex3_integral(|x| x / ex.printed_mass()),
                _ => simpson(|x| x * ex.f(x), 0.0, 1.0, 4096),
            };
            assert!((mean - exact).abs() < 0.005, "{id}: {mean} vs {exact}");
        }
    }

    #[test]
    fn parse_ids() {
        assert_eq!("EX2".parse::<ExampleId>().unwrap(), ExampleId::Ex2);
        assert!(matches!("ex9".parse::<ExampleId>(), Err(Error::UnknownExample(_))));
    }
}
