use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("invalid {what}: {why}")]
    Invalid { what: String, why: String },

    #[error("process {process} ({name}) produced a non-finite rate")]
    NonFiniteRate { process: usize, name: &'static str },

    #[error("step size collapsed at t = {t_min} min (h = {h_min} min)")]
    StepSizeCollapse { t_min: f64, h_min: f64 },

    #[error("negative state at t = {t_min} min: component {component} = {value}")]
    NegativeState {
        t_min: f64,
        component: &'static str,
        value: f64,
    },

    #[error("time {t_min} min outside trajectory horizon [{start}, {end}]")]
    OutsideHorizon { t_min: f64, start: f64, end: f64 },

    #[error("Fisher information matrix is singular (condition number {condition:e})")]
    SingularFim { condition: f64 },

    #[error("all optimization starts failed to simulate")]
    AllStartsFailed,

    #[error("scenario did not reach pseudo-steady state (residual {residual:e})")]
    NotSteady { residual: f64 },

    #[error("{failed}/{total} Monte-Carlo simulations failed (limit 10%)")]
    TooManyFailures { failed: usize, total: usize },

    #[error("parse error in {path} line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(what: impl Into<String>, why: impl Into<String>) -> Self {
        Error::Invalid {
            what: what.into(),
            why: why.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
