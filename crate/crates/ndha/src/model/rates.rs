use super::params::Params;
use super::state::{Component, State, N_COMPONENTS};
use super::{speciate, Environment};
use crate::error::{Error, Result};
use num_traits::{Float, FromPrimitive};

pub const N_PROCESSES: usize = 20;

pub const PROCESS_NAMES: [&str; N_PROCESSES] = [
    "Aerobic_AMO",
    "Aerobic_HAO_NN",
    "Aerobic_HAO",
    "Anox_A_NIR",
    "Anox_A_NOR",
    "Aer_NOB_growth",
    "Aerobic_H_growth",
    "Anox_H_NAR",
    "Anox_H_NIR",
    "Anox_H_NOR",
    "Anox_H_NOS",
    "Lysis_AOB",
    "Lysis_NOB",
    "Lysis_HB",
    "Hydrolysis_aerobic",
    "Hydrolysis_anoxic",
    "Hydrolysis_anaerobic",
    "Aeration",
    "Stripping_N2O",
    "Stripping_NO",
];

#[inline]
fn monod<T: Float>(s: T, k: T) -> T {
    s / (s + k)
}

#[inline]
fn inhibition<T: Float>(s: T, k: T) -> T {
    k / (s + k)
}

#[inline]
fn haldane<T: Float>(s: T, k: T, ki: T) -> T {
    s / (s + k + s * s / ki)
}

/// Fixed-pH fractions of the total pools held by the free species.
#[derive(Debug, Clone, Copy)]
pub struct SpeciationFractions<T> {
    pub nh3: T,
    pub hno2: T,
}

impl<T: Float + FromPrimitive> SpeciationFractions<T> {
    pub fn for_env(env: &Environment) -> Self {
        let one = T::one();
        let (nh3, hno2) = speciate(one, one, env);
        SpeciationFractions { nh3, hno2 }
    }
}

/// Evaluates the 20 process rates (per day) at the given state.
///
/// Laws that name free NH3 / HNO2 use the speciated fractions of the total
/// pools; heterotrophic laws sense NH4+ and NO2- (pool minus free species).
/// Rows 18-20 are zero when the corresponding environment flag is off.
/// The four anoxic heterotrophic reductions (rows 8-11) carry the eta_HD
/// reduction factor.
pub fn process_rates<T: Float + FromPrimitive>(
    state: &State<T>,
    params: &Params<T>,
    env: &Environment,
) -> Result<[T; N_PROCESSES]> {
    let rates = process_rates_unchecked(
        state,
        params,
        &SpeciationFractions::for_env(env),
        env.aeration_enabled,
        env.stripping_enabled,
    );
    for (j, v) in rates.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteRate {
                process: j + 1,
                name: PROCESS_NAMES[j],
            });
        }
    }
    Ok(rates)
}

/// Hot-path rate evaluation with precomputed speciation fractions and no
/// finiteness check.
pub fn process_rates_unchecked<T: Float + FromPrimitive>(
    state: &State<T>,
    params: &Params<T>,
    frac: &SpeciationFractions<T>,
    aeration: bool,
    stripping: bool,
) -> [T; N_PROCESSES] {
    let nh3 = state[Component::STan] * frac.nh3;
    let hno2 = state[Component::STno2] * frac.hno2;
    let nh4 = state[Component::STan] - nh3;
    let no2 = state[Component::STno2] - hno2;
    let nox = state[Component::STno2] + state[Component::SNo3];

    let s_s = state[Component::SS];
    let o2 = state[Component::SO2];
    let nh2oh = state[Component::SNh2oh];
    let no3 = state[Component::SNo3];
    let no = state[Component::SNo];
    let n2o = state[Component::SN2o];
    let x_aob = state[Component::XAob];
    let x_nob = state[Component::XNob];
    let x_hb = state[Component::XHb];
    let x_s = state[Component::XS];

    let p = params;
    let z = T::zero();
    let mut r = [z; N_PROCESSES];

    r[0] = p.mu_aob_amo
        * monod(o2, p.k_aob_o2_amo)
        * haldane(nh3, p.k_aob_nh3, p.k_aob_i_nh3)
        * inhibition(hno2, p.k_aob_i_hno2)
        * x_aob;
    r[1] = p.mu_aob_hao * p.eps_aob * monod(nh2oh, p.k_aob_nh2oh) * x_aob;
    r[2] = p.mu_aob_hao
        * (T::one() - p.eps_aob)
        * monod(o2, p.k_aob_o2_hao)
        * monod(nh2oh, p.k_aob_nh2oh)
        * x_aob;
    r[3] = p.mu_aob_hao
        * p.eta_nir
        * inhibition(o2, p.k_aob_o2_i)
        * monod(nh2oh, p.k_aob_nh2oh_nd)
        * monod(hno2, p.k_aob_hno2)
        * x_aob;
    r[4] = p.mu_aob_hao
        * p.eta_nor
        * monod(nh2oh, p.k_aob_nh2oh_nd)
        * monod(no, p.k_aob_no_nd)
        * x_aob;
    r[5] = p.mu_nob
        * monod(o2, p.k_nob_o2)
        * haldane(hno2, p.k_nob_hno2, p.k_nob_i_hno2)
        * inhibition(nh3, p.k_nob_i_nh3)
        * x_nob;
    r[6] = p.mu_hb
        * monod(o2, p.k_hb_o2)
        * monod(nh4, p.k_hb_nh4)
        * monod(s_s, p.k_hb_s)
        * x_hb;
    r[7] = p.mu_hb_nar
        * p.eta_hd
        * inhibition(o2, p.k_hb_o2_i_nar)
        * monod(s_s, p.k_hb_s_nar)
        * monod(nh4, p.k_hb_nh4)
        * monod(no3, p.k_hb_no3)
        * x_hb;
    r[8] = p.mu_hb_nir
        * p.eta_hd
        * inhibition(o2, p.k_hb_o2_i_nir)
        * inhibition(no, p.k_hb_no_i_nir)
        * monod(s_s, p.k_hb_s_nir)
        * monod(nh4, p.k_hb_nh4)
        * monod(no2, p.k_hb_no2)
        * x_hb;
    r[9] = p.mu_hb_nor
        * p.eta_hd
        * inhibition(o2, p.k_hb_o2_i_nor)
        * monod(s_s, p.k_hb_s_nor)
        * monod(nh4, p.k_hb_nh4)
        * haldane(no, p.k_hb_no, p.k_hb_no_i_nor)
        * x_hb;
    r[10] = p.mu_hb_nos
        * p.eta_hd
        * inhibition(o2, p.k_hb_o2_i_nos)
        * inhibition(no, p.k_hb_no_i_nos)
        * monod(s_s, p.k_hb_s_nos)
        * monod(nh4, p.k_hb_nh4)
        * monod(n2o, p.k_hb_n2o)
        * x_hb;

    let decay_env = monod(o2, p.k_o2_b)
        + p.eta_b * inhibition(o2, p.k_o2_b) * monod(nox, p.k_nox);
    r[11] = p.b_aob * decay_env * x_aob;
    r[12] = p.b_nob * decay_env * x_nob;
    r[13] = p.b_hb * decay_env * x_hb;

    // hydrolysis saturates in the X_S / X_HB ratio; zero without heterotrophs
    let hyd = if x_hb > z {
        monod(x_s / x_hb, p.k_x) * x_hb
    } else {
        z
    };
    r[14] = p.k_h * monod(o2, p.k_hb_o2) * hyd;
    r[15] = p.k_h * p.eta_anox * inhibition(o2, p.k_hb_o2) * monod(no3, p.k_hb_no3) * hyd;
    r[16] = p.k_h * p.eta_anaer * inhibition(o2, p.k_hb_o2) * inhibition(no3, p.k_hb_no3) * hyd;

    if aeration {
        r[17] = p.k_la_o2 * (p.sstar_o2 - o2);
    }
    if stripping {
        r[18] = p.k_la_n2o * (n2o - p.sstar_n2o);
        r[19] = p.k_la_no * (no - p.sstar_no);
    }

    r
}

/// Time derivative of the state: transpose(stoichiometric matrix) * rates.
pub fn derivatives<T: Float + FromPrimitive>(
    state: &State<T>,
    params: &Params<T>,
    env: &Environment,
) -> Result<State<T>> {
    let r = process_rates(state, params, env)?;
    let m = super::stoichiometric_matrix(params);
    Ok(gujer_product(&m, &r))
}

/// Applies the Gujer matrix product for a precomputed matrix.
pub fn gujer_product<T: Float>(
    matrix: &[[T; N_COMPONENTS]; N_PROCESSES],
    rates: &[T; N_PROCESSES],
) -> State<T> {
    let mut dy = State::zeros();
    for (row, rate) in matrix.iter().zip(rates.iter()) {
        for (i, s) in row.iter().enumerate() {
            dy.0[i] = dy.0[i] + *s * *rate;
        }
    }
    dy
}

/// Nitrogen content of each component (gN per unit of the component).
pub fn nitrogen_weights<T: Float>(params: &Params<T>) -> [T; N_COMPONENTS] {
    let z = T::zero();
    let one = T::one();
    let mut w = [z; N_COMPONENTS];
    for c in [
        Component::STan,
        Component::SNh2oh,
        Component::STno2,
        Component::SNo3,
        Component::SNo,
        Component::SN2o,
        Component::SN2,
    ] {
        w[c as usize] = one;
    }
    w[Component::XAob as usize] = params.i_nxb;
    w[Component::XNob as usize] = params.i_nxb;
    w[Component::XHb as usize] = params.i_nxb;
    w[Component::XS as usize] = params.i_nxs;
    w[Component::XI as usize] = params.i_nxi;
    w
}

/// Total nitrogen in a state, biomass contributions included.
pub fn total_nitrogen<T: Float>(state: &State<T>, params: &Params<T>) -> T {
    nitrogen_weights(params)
        .iter()
        .zip(state.0.iter())
        .fold(T::zero(), |acc, (w, v)| acc + *w * *v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_state() -> State<f64> {
        State([
            5.0, 2.0, 10.0, 0.5, 8.0, 3.0, 0.01, 0.8, 1.0, 0.05, 150.0, 10.0, 80.0, 40.0, 30.0,
        ])
    }

    fn open_env() -> Environment {
        Environment {
            ph: 7.5,
            temperature_c: 25.0,
            aeration_enabled: true,
            stripping_enabled: true,
        }
    }

    /// Frozen from tests/data/rate_oracle.py: independent re-evaluation of
    /// every published rate law at the reference state (gas transfer at
    /// K_La.O2 = 200, K_La.N2O = K_La.NO = 100 per day).
    const ORACLE_RATES: [f64; N_PROCESSES] = [
        9.190814423097e1,
        7.3125e-2,
        6.08765625e1,
        4.291039210663e-1,
        7.834821428571,
        2.950401784607,
        9.498902194132e1,
        2.503166233249e-1,
        1.456009402679e-1,
        5.500320543776e-2,
        1.531038859552e-1,
        1.351519480519e1,
        9.010129870130e-1,
        3.078461038961e1,
        1.295238095238e2,
        2.428571428571,
        1.619047619048e-1,
        1.2e3,
        8.0e1,
        1.0,
    ];

    fn oracle_params() -> Params<f64> {
        let mut p = Params::<f64>::defaults();
        p.k_la_o2 = 200.0;
        p.k_la_n2o = 100.0;
        p.k_la_no = 100.0;
        p
    }

    #[test]
    fn rates_match_spreadsheet_oracle() {
        let r = process_rates(&reference_state(), &oracle_params(), &open_env()).unwrap();
        for (j, (got, want)) in r.iter().zip(ORACLE_RATES.iter()).enumerate() {
            assert_relative_eq!(got, want, max_relative = 1e-12);
            let _ = j;
        }
    }

    #[test]
    fn all_zero_state_gives_zero_biological_rates() {
        let state = State::<f64>::zeros();
        let r = process_rates(&state, &Params::defaults(), &Environment::sealed(7.5, 25.0))
            .unwrap();
        for v in r.iter() {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn anoxia_stops_row1_but_not_row5() {
        let mut state = reference_state();
        state[Component::SO2] = 0.0;
        let r = process_rates(&state, &Params::defaults(), &Environment::sealed(7.5, 25.0))
            .unwrap();
        assert_eq!(r[0], 0.0, "AMO needs oxygen");
        assert!(r[4] > 0.0, "NO reduction carries no oxygen term");
    }

    #[test]
    fn gas_rows_zero_when_flags_off() {
        let env = Environment::sealed(7.5, 25.0);
        let r = process_rates(&reference_state(), &oracle_params(), &env).unwrap();
        assert_eq!(r[17], 0.0);
        assert_eq!(r[18], 0.0);
        assert_eq!(r[19], 0.0);
    }

    #[test]
    fn rates_linear_in_their_own_biomass() {
        // doubling X_AOB doubles rows 1-5 and 12, leaves the others untouched
        let p = Params::defaults();
        let env = Environment::sealed(7.5, 25.0);
        let s1 = reference_state();
        let mut s2 = s1;
        s2[Component::XAob] = 2.0 * s1[Component::XAob];
        let r1 = process_rates(&s1, &p, &env).unwrap();
        let r2 = process_rates(&s2, &p, &env).unwrap();
        for j in [0, 1, 2, 3, 4, 11] {
            assert_relative_eq!(r2[j], 2.0 * r1[j], max_relative = 1e-12);
        }
        for j in [5, 6, 7, 8, 9, 10, 12, 13, 14, 15, 16] {
            assert_relative_eq!(r2[j], r1[j], max_relative = 1e-12);
        }
    }

    #[test]
    fn derivatives_match_oracle_and_conserve_nitrogen() {
        // closed-vessel derivative frozen from the oracle script
        let want = [
            -2.720745861290e1,
            -9.348171249238e2,
            -9.637783288296e1,
            -2.549651561187e2,
            2.877185406529e2,
            4.902697908654e1,
            -1.344101490992e1,
            2.338972664768e1,
            1.790688724622e-1,
            1.680540420655e1,
            4.743449269481e1,
            2.049388797594,
            6.480843620670e1,
            -9.052953298701e1,
            3.616065454545,
        ];
        let p = oracle_params();
        let env = Environment::sealed(7.5, 25.0);
        let dy = derivatives(&reference_state(), &p, &env).unwrap();
        for (got, want) in dy.0.iter().zip(want.iter()) {
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
        let w = nitrogen_weights(&p);
        let dn: f64 = w.iter().zip(dy.0.iter()).map(|(w, v)| w * v).sum();
        assert!(dn.abs() < 1e-8, "total N derivative {dn:e}");
    }

    #[test]
    fn zero_rates_give_zero_derivative() {
        let state = State::<f64>::zeros();
        let env = Environment::sealed(7.5, 25.0);
        let dy = derivatives(&state, &Params::defaults(), &env).unwrap();
        assert!(dy.0.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn n2o_reduction_swaps_pools_in_equal_n_units() {
        // only row 11 active: anoxic, closed vessel, N2O + HB + substrate
        let mut state = State::<f64>::zeros();
        state[Component::SN2o] = 1.5;
        state[Component::SS] = 30.0;
        state[Component::STan] = 0.5;
        state[Component::XHb] = 100.0;
        let mut p = Params::<f64>::defaults();
        p.b_hb = 0.0; // silence decay so rows 11 is the only N2O actor
        let env = Environment::sealed(7.5, 25.0);
        let dy = derivatives(&state, &p, &env).unwrap();
        assert!(dy[Component::SN2o] < 0.0);
        assert!(dy[Component::SN2] > 0.0);
        assert_relative_eq!(
            dy[Component::SN2],
            -dy[Component::SN2o],
            max_relative = 1e-12
        );
    }

    #[test]
    fn non_finite_rate_is_reported_with_its_row() {
        let mut p = Params::<f64>::defaults();
        p.k_aob_o2_amo = f64::NAN;
        let err = process_rates(&reference_state(), &p, &Environment::sealed(7.5, 25.0))
            .unwrap_err();
        match err {
            crate::error::Error::NonFiniteRate { process, .. } => assert_eq!(process, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
