//! Simulation and calibration toolkit for the NDHA nitrous-oxide process
//! model: a 20-process / 15-component biokinetic system integrated over
//! pulse-driven respirometric experiments, with the full parameter
//! estimation pipeline on top (global sensitivity analysis, subset
//! selection, weighted least-squares fitting, identifiability, residual
//! diagnostics, Monte-Carlo uncertainty propagation and scenario analysis).
//!
//! The model core is generic over the scalar type via `num-traits`; the
//! aliases below fix f64 for the numerics lane.

pub mod diagnostics;
pub mod error;
pub mod estimation;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod scenario;
pub mod sensitivity;
pub mod sim;
pub mod stats;
pub mod uncertainty;

pub use error::{Error, Result};

/// Concentrations of the 15 model components (f64).
pub type StateVector = model::State<f64>;
/// Full parameter set (f64).
pub type ParameterSet = model::Params<f64>;

pub use model::{Component, Environment};
pub use sim::{Experiment, MeasuredSeries, Observable, Pulse, Trajectory};
