//! Experiment simulation: integrates the model over a pulse-driven
//! timeline and extracts observable series and pathway fluxes.

pub mod solver;

pub use solver::{integrate_to, Rhs, SolverConfig, StepMemory};

use crate::error::{Error, Result};
use crate::model::{
    self, gujer_product, process_rates_unchecked, Component, Environment, SpeciationFractions,
    N_COMPONENTS, N_PROCESSES,
};
use crate::{ParameterSet, StateVector};
use nalgebra::SVector;
use serde::{Deserialize, Serialize};

/// Minutes per day; kinetic parameters are per day, the simulation clock
/// runs in minutes.
pub const MIN_PER_DAY: f64 = 1440.0;

/// Instantaneous substrate addition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub time_min: f64,
    pub species: Component,
    /// mgN/L for nitrogen species, mgCOD/L for S_S.
    pub delta: f64,
}

/// Species that may be pulsed.
pub const PULSABLE: [Component; 6] = [
    Component::STan,
    Component::SNh2oh,
    Component::STno2,
    Component::SNo3,
    Component::SN2o,
    Component::SS,
];

/// Observable series extractable from a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    #[serde(rename = "DO")]
    Do,
    #[serde(rename = "N2O")]
    N2o,
    #[serde(rename = "TAN")]
    Tan,
    #[serde(rename = "TNO2")]
    Tno2,
    #[serde(rename = "NH2OH")]
    Nh2oh,
}

impl Observable {
    pub fn component(self) -> Component {
        match self {
            Observable::Do => Component::SO2,
            Observable::N2o => Component::SN2o,
            Observable::Tan => Component::STan,
            Observable::Tno2 => Component::STno2,
            Observable::Nh2oh => Component::SNh2oh,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Observable::Do => "DO",
            Observable::N2o => "N2O",
            Observable::Tan => "TAN",
            Observable::Tno2 => "TNO2",
            Observable::Nh2oh => "NH2OH",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "DO" => Some(Observable::Do),
            "N2O" => Some(Observable::N2o),
            "TAN" => Some(Observable::Tan),
            "TNO2" => Some(Observable::Tno2),
            "NH2OH" => Some(Observable::Nh2oh),
            _ => None,
        }
    }
}

/// A measured time series with its noise level.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredSeries {
    pub observable: Observable,
    pub times_min: Vec<f64>,
    pub values: Vec<f64>,
    pub sigma: f64,
}

/// One respirometric assay: environment, initial state, pulses and
/// measured series.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub label: String,
    pub environment: Environment,
    pub initial: StateVector,
    pub pulses: Vec<Pulse>,
    pub horizon_min: f64,
    pub series: Vec<MeasuredSeries>,
    /// Uniform reporting-grid spacing (minutes).
    pub reporting_dt_min: f64,
}

impl Experiment {
    pub fn new(label: impl Into<String>, environment: Environment, initial: StateVector, horizon_min: f64) -> Self {
        Experiment {
            label: label.into(),
            environment,
            initial,
            pulses: Vec::new(),
            horizon_min,
            series: Vec::new(),
            reporting_dt_min: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.environment.validate()?;
        if !self.initial.is_nonnegative() || !self.initial.is_finite() {
            return Err(Error::invalid("initial state", "negative or non-finite"));
        }
        if !(self.horizon_min > 0.0) {
            return Err(Error::invalid("horizon", "must be positive"));
        }
        if !(self.reporting_dt_min > 0.0) {
            return Err(Error::invalid("reporting grid", "spacing must be positive"));
        }
        for p in &self.pulses {
            if !(p.delta > 0.0) {
                return Err(Error::invalid("pulse", "delta must be positive"));
            }
            if p.time_min < 0.0 || p.time_min > self.horizon_min {
                return Err(Error::invalid("pulse", "time outside horizon"));
            }
            if !PULSABLE.contains(&p.species) {
                return Err(Error::invalid(
                    "pulse",
                    format!("species {} cannot be pulsed", p.species.name()),
                ));
            }
        }
        for s in &self.series {
            if !(s.sigma > 0.0) {
                return Err(Error::invalid("series", "sigma must be positive"));
            }
            if s.times_min.len() != s.values.len() {
                return Err(Error::invalid("series", "times/values length mismatch"));
            }
            if s.times_min.iter().any(|t| *t < 0.0 || *t > self.horizon_min) {
                return Err(Error::invalid("series", "measurement time outside horizon"));
            }
        }
        Ok(())
    }
}

/// Time grid, states and process rates of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times_min: Vec<f64>,
    pub states: Vec<StateVector>,
    pub rates: Vec<[f64; N_PROCESSES]>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times_min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_min.is_empty()
    }

    /// Linear interpolation of one observable onto arbitrary times.
    pub fn observable_at(&self, obs: Observable, times_min: &[f64]) -> Result<Vec<f64>> {
        let comp = obs.component();
        let t0 = *self.times_min.first().unwrap();
        let t1 = *self.times_min.last().unwrap();
        let eps = 1e-9 * t1.abs().max(1.0);
        let mut out = Vec::with_capacity(times_min.len());
        for &t in times_min {
            if t < t0 - eps || t > t1 + eps {
                return Err(Error::OutsideHorizon {
                    t_min: t,
                    start: t0,
                    end: t1,
                });
            }
            let t = t.clamp(t0, t1);
            let idx = match self
                .times_min
                .binary_search_by(|v| v.partial_cmp(&t).unwrap())
            {
                Ok(i) => {
                    out.push(self.states[i][comp]);
                    continue;
                }
                Err(i) => i,
            };
            let (ia, ib) = (idx - 1, idx);
            let (ta, tb) = (self.times_min[ia], self.times_min[ib]);
            let w = (t - ta) / (tb - ta);
            out.push(self.states[ia][comp] * (1.0 - w) + self.states[ib][comp] * w);
        }
        Ok(out)
    }
}

/// RHS adapter: Gujer product scaled to the minute clock, with optional
/// per-component derivative zeroing (used by the scenario engine).
pub(crate) struct ModelRhs {
    pub matrix: [[f64; N_COMPONENTS]; N_PROCESSES],
    pub params: ParameterSet,
    pub fractions: SpeciationFractions<f64>,
    pub aeration: bool,
    pub stripping: bool,
    pub zero_derivative: [bool; N_COMPONENTS],
}

impl ModelRhs {
    pub fn new(params: &ParameterSet, env: &Environment) -> Self {
        ModelRhs {
            matrix: model::stoichiometric_matrix(params),
            params: *params,
            fractions: SpeciationFractions::for_env(env),
            aeration: env.aeration_enabled,
            stripping: env.stripping_enabled,
            zero_derivative: [false; N_COMPONENTS],
        }
    }

    pub fn rates_at(&self, state: &StateVector) -> [f64; N_PROCESSES] {
        process_rates_unchecked(
            &state.clamped_nonnegative(),
            &self.params,
            &self.fractions,
            self.aeration,
            self.stripping,
        )
    }

    /// Derivative in per-day units with the zero-mask applied.
    pub fn derivative_per_day(&self, state: &StateVector) -> StateVector {
        let rates = self.rates_at(state);
        let mut dy = gujer_product(&self.matrix, &rates);
        for (i, z) in self.zero_derivative.iter().enumerate() {
            if *z {
                dy.0[i] = 0.0;
            }
        }
        dy
    }
}

impl Rhs<N_COMPONENTS> for ModelRhs {
    fn eval(&self, y: &SVector<f64, N_COMPONENTS>, dy: &mut SVector<f64, N_COMPONENTS>) -> Result<()> {
        let state = StateVector((*y).into());
        let d = self.derivative_per_day(&state);
        for i in 0..N_COMPONENTS {
            let v = d.0[i] / MIN_PER_DAY;
            if !v.is_finite() {
                return Err(Error::NonFiniteRate {
                    process: 0,
                    name: Component::ALL[i].name(),
                });
            }
            dy[i] = v;
        }
        Ok(())
    }
}

fn build_output_grid(exp: &Experiment) -> Vec<f64> {
    let mut grid = Vec::new();
    let n = (exp.horizon_min / exp.reporting_dt_min).round() as usize;
    for i in 0..=n {
        grid.push((i as f64) * exp.reporting_dt_min);
    }
    if *grid.last().unwrap() < exp.horizon_min {
        grid.push(exp.horizon_min);
    }
    for s in &exp.series {
        grid.extend_from_slice(&s.times_min);
    }
    for p in &exp.pulses {
        grid.push(p.time_min);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    grid
}

/// Integrates an experiment. Pulses are instantaneous state jumps with an
/// integrator restart; output is sampled on the union of the reporting
/// grid, measurement times and pulse times. Values stored at a pulse time
/// are post-pulse.
pub fn simulate(
    exp: &Experiment,
    params: &ParameterSet,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    exp.validate()?;
    params.validate()?;
    let rhs = ModelRhs::new(params, &exp.environment);
    simulate_with_rhs(exp, &rhs, cfg)
}

pub(crate) fn simulate_with_rhs(
    exp: &Experiment,
    rhs: &ModelRhs,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    let grid = build_output_grid(exp);
    let mut pulses = exp.pulses.clone();
    pulses.sort_by(|a, b| a.time_min.partial_cmp(&b.time_min).unwrap());
    let mut next_pulse = 0usize;

    let mut y: SVector<f64, N_COMPONENTS> = SVector::from(exp.initial.0);
    let mut memory = StepMemory { h: cfg.h_init };
    let mut traj = Trajectory {
        times_min: Vec::with_capacity(grid.len()),
        states: Vec::with_capacity(grid.len()),
        rates: Vec::with_capacity(grid.len()),
    };

    let mut record = |t: f64, y: &SVector<f64, N_COMPONENTS>, traj: &mut Trajectory| {
        let state = StateVector((*y).into());
        let rates = rhs.rates_at(&state);
        traj.times_min.push(t);
        traj.states.push(state);
        traj.rates.push(rates);
    };

    let mut t = grid[0];
    debug_assert_eq!(t, 0.0);
    // apply any pulse scheduled exactly at t = 0
    while next_pulse < pulses.len() && pulses[next_pulse].time_min <= t {
        y[pulses[next_pulse].species as usize] += pulses[next_pulse].delta;
        next_pulse += 1;
    }
    record(t, &y, &mut traj);

    for &tg in grid.iter().skip(1) {
        integrate_to(rhs, t, tg, &mut y, cfg, &mut memory, None)?;
        t = tg;
        while next_pulse < pulses.len() && pulses[next_pulse].time_min <= t + 1e-12 {
            y[pulses[next_pulse].species as usize] += pulses[next_pulse].delta;
            next_pulse += 1;
            // fresh transient after the jump
            memory.h = cfg.h_init;
        }
        record(t, &y, &mut traj);
    }
    Ok(traj)
}

/// Integrates endogenous decay and hydrolysis dynamics (the full model
/// with no substrate additions) to produce a batch initial condition.
pub fn precondition_biomass(
    initial: &StateVector,
    params: &ParameterSet,
    env: &Environment,
    duration_min: f64,
    cfg: &SolverConfig,
) -> Result<StateVector> {
    if duration_min < 0.0 {
        return Err(Error::invalid("duration", "must be nonnegative"));
    }
    if duration_min == 0.0 {
        return Ok(*initial);
    }
    let rhs = ModelRhs::new(params, env);
    let mut y: SVector<f64, N_COMPONENTS> = SVector::from(initial.0);
    let mut memory = StepMemory { h: cfg.h_init };
    integrate_to(&rhs, 0.0, duration_min, &mut y, cfg, &mut memory, None)?;
    Ok(StateVector(y.into()))
}

/// Cumulative N2O attributed to the three biological pathways (mgN/L).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathwayFluxes {
    pub nn: f64,
    pub nd: f64,
    pub hd: f64,
}

impl PathwayFluxes {
    pub fn total(&self) -> f64 {
        self.nn + self.nd + self.hd
    }

    /// Normalized shares; None when there was no net production.
    pub fn shares(&self) -> Option<[f64; 3]> {
        let tot = self.total();
        if tot > 0.0 {
            Some([self.nn / tot, self.nd / tot, self.hd / tot])
        } else {
            None
        }
    }
}

/// Instantaneous pathway production rates (per day) from a rate vector.
pub fn pathway_rates(rates: &[f64; N_PROCESSES], params: &ParameterSet) -> [f64; 3] {
    let no_nn = rates[1] / params.y_aob; // NO from the NN branch
    let no_nd = 4.0 * rates[3]; // NO from the ND branch
    let n2o_auto = 3.0 * rates[4];
    let w_nn = if no_nn + no_nd > 0.0 {
        no_nn / (no_nn + no_nd)
    } else {
        0.5
    };
    let hb_e = (1.0 - params.y_hb) / (0.57 * params.y_hb);
    let hd = hb_e * (rates[9] - rates[10]);
    [n2o_auto * w_nn, n2o_auto * (1.0 - w_nn), hd]
}

/// Trapezoid integration of the pathway production rates over a stored
/// trajectory.
pub fn pathway_fluxes(traj: &Trajectory, params: &ParameterSet) -> PathwayFluxes {
    let mut acc = [0.0; 3];
    for i in 1..traj.len() {
        let dt_days = (traj.times_min[i] - traj.times_min[i - 1]) / MIN_PER_DAY;
        let a = pathway_rates(&traj.rates[i - 1], params);
        let b = pathway_rates(&traj.rates[i], params);
        for k in 0..3 {
            acc[k] += 0.5 * (a[k] + b[k]) * dt_days;
        }
    }
    PathwayFluxes {
        nn: acc[0],
        nd: acc[1],
        hd: acc[2],
    }
}

#[cfg(test)]
mod tests;
