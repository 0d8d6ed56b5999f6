//! Simulation examples, Monte Carlo comparison of the estimators, and the
//! asymptotic efficiency curves.

mod efficiency;
mod monte_carlo;
mod sampling;
mod simulation;

pub use efficiency::{efficiency, efficiency_exponent, efficiency_table, EffCase, EffRow};
pub use monte_carlo::{ase, linspace, replication_rng, run_monte_carlo, AseCell, AseTable, GridSpec, MonteCarloPlan};
pub use sampling::{accept_reject_sample, accept_reject_with_bound, envelope_bound, AcceptReject, ENVELOPE_GRID, ENVELOPE_SAFETY};
pub use simulation::{ex3_printed_density, make_example, make_example_with, ExampleId, Law, SimulationExample};
