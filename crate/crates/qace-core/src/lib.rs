//! Simulation and causal-inference toolkit for the binary instrumental
//! scenario: two-qubit models of the observational p(a,b|x) and
//! interventional p(b|do(a)) statistics, classical and quantum lower bounds
//! on the average causal effect, an independent linear-programming
//! certificate over the 16 deterministic response strategies, measurement
//! setting families with their optimizers, and statistics for count data
//! (Monte Carlo error propagation and noise-model fitting).
//!
//! The numeric core is generic over the scalar type via [`scalar::Scalar`];
//! `f64` aliases for the main carriers are exported at the crate root.

pub mod causal;
pub mod error;
pub mod families;
pub mod measurement;
pub mod optim;
pub mod oracle;
pub mod qmath;
pub mod scalar;
pub mod scenario;
mod simplex;
pub mod states;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ComplexMatrix64 = qmath::ComplexMatrix<f64>;
pub type TwoQubitState64 = states::TwoQubitState<f64>;
pub type Settings64 = scenario::Settings<f64>;
pub type ObservedDistribution64 = scenario::ObservedDistribution<f64>;
pub type DoDistribution64 = scenario::DoDistribution<f64>;
pub type AceReport64 = causal::AceReport<f64>;

pub type ComplexMatrix32 = qmath::ComplexMatrix<f32>;
pub type TwoQubitState32 = states::TwoQubitState<f32>;
pub type Settings32 = scenario::Settings<f32>;
