//! Adaptive stiff integrator: two-stage L-stable Rosenbrock method (ROS2,
//! gamma = 1 - 1/sqrt(2)) with an embedded first-order error estimate and
//! a finite-difference Jacobian refreshed every step.
//!
//! Scheme, with W = I - gamma*h*J:
//!   W k1 = f(y)
//!   W k2 = f(y + h k1) + 2 f(y) - 2 k1     (J k1 eliminated through W k1 = f)
//!   y1   = y + h/2 (k1 + k2),   error = h/2 (k2 - k1)

use crate::error::{Error, Result};
use nalgebra::{SMatrix, SVector};

pub const ROS_GAMMA: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step (minutes) for a fresh segment.
    pub h_init: f64,
    /// Minimum step before the integration is declared stuck.
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rtol: 1e-6,
            atol: 1e-9,
            h_init: 1e-3,
            h_min: 1e-12,
            max_steps: 20_000_000,
        }
    }
}

impl SolverConfig {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        SolverConfig {
            rtol,
            atol,
            ..Default::default()
        }
    }
}

/// Right-hand side of an autonomous system; errors abort the integration.
pub trait Rhs<const D: usize> {
    fn eval(&self, y: &SVector<f64, D>, dy: &mut SVector<f64, D>) -> Result<()>;

    /// Components that must stay nonnegative (all by default).
    fn nonnegative(&self, _index: usize) -> bool {
        true
    }
}

fn weighted_error_norm<const D: usize>(
    err: &SVector<f64, D>,
    y0: &SVector<f64, D>,
    y1: &SVector<f64, D>,
    cfg: &SolverConfig,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..D {
        let scale = cfg.atol + cfg.rtol * y0[i].abs().max(y1[i].abs());
        let e = err[i] / scale;
        acc += e * e;
    }
    (acc / D as f64).sqrt()
}

fn fd_jacobian<const D: usize, F: Rhs<D>>(
    f: &F,
    y: &SVector<f64, D>,
    f0: &SVector<f64, D>,
) -> Result<SMatrix<f64, D, D>> {
    let mut jac = SMatrix::<f64, D, D>::zeros();
    let mut yp = *y;
    let mut fp = SVector::<f64, D>::zeros();
    let sqrt_eps = f64::EPSILON.sqrt();
    for j in 0..D {
        let delta = sqrt_eps * y[j].abs().max(1e-2);
        yp[j] = y[j] + delta;
        f.eval(&yp, &mut fp)?;
        yp[j] = y[j];
        for i in 0..D {
            jac[(i, j)] = (fp[i] - f0[i]) / delta;
        }
    }
    Ok(jac)
}

/// State carried across segments so the step size survives pulse restarts.
#[derive(Debug, Clone, Copy)]
pub struct StepMemory {
    pub h: f64,
}

/// Integrates dy/dt = f(y) from `t0` to `t1`, mutating `y` in place.
///
/// The endpoint is hit exactly. `on_step`, when given, is called after
/// every accepted step with (t, y). Components flagged nonnegative are
/// clipped at zero only when the undershoot is below the absolute
/// tolerance; deeper undershoots force a step rejection and, at the
/// minimum step, an error.
pub fn integrate_to<const D: usize, F: Rhs<D>>(
    f: &F,
    t0: f64,
    t1: f64,
    y: &mut SVector<f64, D>,
    cfg: &SolverConfig,
    memory: &mut StepMemory,
    mut on_step: Option<&mut dyn FnMut(f64, &SVector<f64, D>)>,
) -> Result<()> {
    debug_assert!(t1 >= t0);
    if t1 == t0 {
        return Ok(());
    }
    let gamma = ROS_GAMMA;
    let mut t = t0;
    let mut h = memory.h.min(t1 - t0).max(cfg.h_min);
    let mut f0 = SVector::<f64, D>::zeros();
    let mut f1 = SVector::<f64, D>::zeros();
    let mut steps = 0usize;

    while t < t1 {
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::StepSizeCollapse { t_min: t, h_min: h });
        }
        h = h.min(t1 - t);

        f.eval(y, &mut f0)?;
        let jac = fd_jacobian(f, y, &f0)?;
        let w = SMatrix::<f64, D, D>::identity() - jac * (gamma * h);
        let lu = w.lu();

        let k1 = match lu.solve(&f0) {
            Some(k) => k,
            None => {
                h *= 0.5;
                if h < cfg.h_min {
                    return Err(Error::StepSizeCollapse { t_min: t, h_min: h });
                }
                continue;
            }
        };
        let y_mid = *y + k1 * h;
        f.eval(&y_mid, &mut f1)?;
        let rhs2 = f1 + f0 * 2.0 - k1 * 2.0;
        let k2 = match lu.solve(&rhs2) {
            Some(k) => k,
            None => {
                h *= 0.5;
                if h < cfg.h_min {
                    return Err(Error::StepSizeCollapse { t_min: t, h_min: h });
                }
                continue;
            }
        };

        let y_new = *y + (k1 + k2) * (h / 2.0);
        let err_vec = (k2 - k1) * (h / 2.0);
        let err = weighted_error_norm(&err_vec, y, &y_new, cfg);

        if !err.is_finite() {
            h *= 0.1;
            if h < cfg.h_min {
                return Err(Error::StepSizeCollapse { t_min: t, h_min: h });
            }
            continue;
        }

        if err <= 1.0 {
            // accepted; enforce the negative-state guard
            let mut y_next = y_new;
            let mut too_negative = false;
            for i in 0..D {
                if f.nonnegative(i) && y_next[i] < 0.0 {
                    if y_next[i] >= -cfg.atol {
                        y_next[i] = 0.0;
                    } else {
                        too_negative = true;
                        break;
                    }
                }
            }
            if too_negative {
                if h <= cfg.h_min * 4.0 {
                    let (idx, val) = (0..D)
                        .map(|i| (i, y_new[i]))
                        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                        .unwrap();
                    return Err(Error::NegativeState {
                        t_min: t,
                        component: crate::model::Component::ALL
                            .get(idx)
                            .map(|c| c.name())
                            .unwrap_or("y"),
                        value: val,
                    });
                }
                h *= 0.5;
                continue;
            }
            t += h;
            *y = y_next;
            if let Some(cb) = on_step.as_deref_mut() {
                cb(t, y);
            }
            let factor = (0.9 * err.powf(-0.5)).clamp(0.2, 5.0);
            h = (h * factor).max(cfg.h_min);
            memory.h = h;
        } else {
            let factor = (0.9 * err.powf(-0.5)).clamp(0.2, 1.0);
            h *= factor;
            if h < cfg.h_min {
                return Err(Error::StepSizeCollapse { t_min: t, h_min: h });
            }
        }
    }
    Ok(())
}
