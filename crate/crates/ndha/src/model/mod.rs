//! NDHA model core: state, parameters, speciation, stoichiometry and
//! kinetic rate laws. Everything here is generic over the scalar type;
//! concrete f64 aliases live at the crate root.

mod params;
mod rates;
mod state;
mod stoich;

pub use params::{param_meta, ParamKind, ParamMeta, Params, UncertaintyClass, PARAM_TABLE};
pub use rates::{
    derivatives, gujer_product, nitrogen_weights, process_rates, process_rates_unchecked,
    total_nitrogen, SpeciationFractions, PROCESS_NAMES, N_PROCESSES,
};
pub use state::{Component, State, N_COMPONENTS};
pub use stoich::stoichiometric_matrix;

use crate::error::{Error, Result};
use num_traits::{Float, FromPrimitive};

/// Fixed per-experiment environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub ph: f64,
    pub temperature_c: f64,
    pub aeration_enabled: bool,
    pub stripping_enabled: bool,
}

impl Environment {
    pub fn sealed(ph: f64, temperature_c: f64) -> Self {
        Environment {
            ph,
            temperature_c,
            aeration_enabled: false,
            stripping_enabled: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(3.0..=12.0).contains(&self.ph) {
            return Err(Error::invalid("pH", format!("{} outside [3, 12]", self.ph)));
        }
        if !(0.0..=45.0).contains(&self.temperature_c) {
            return Err(Error::invalid(
                "temperature",
                format!("{} C outside [0, 45]", self.temperature_c),
            ));
        }
        Ok(())
    }
}

/// NH4+ pKa, Emerson et al. (1975) correlation: 0.09018 + 2729.92 / T_K.
pub fn pka_nh4(temperature_c: f64) -> f64 {
    0.09018 + 2729.92 / (273.15 + temperature_c)
}

/// HNO2 pKa: 3.26 (reported at 25 C). The temperature dependence is weak
/// and no correlation is adopted by default; override via
/// [`SpeciationConfig`] if needed.
pub fn pka_hno2(_temperature_c: f64) -> f64 {
    3.26
}

/// Optional overrides for the acid-base constants used by [`speciate`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SpeciationConfig {
    pub pka_nh4_override: Option<f64>,
    pub pka_hno2_override: Option<f64>,
}

/// Splits the total pools into free species at the given pH and temperature:
/// NH3 = TAN / (1 + 10^(pKa_NH4 - pH)), HNO2 = TNO2 / (1 + 10^(pH - pKa_HNO2)).
pub fn speciate<T: Float + FromPrimitive>(
    s_tan: T,
    s_tno2: T,
    env: &Environment,
) -> (T, T) {
    speciate_with(s_tan, s_tno2, env, &SpeciationConfig::default())
}

pub fn speciate_with<T: Float + FromPrimitive>(
    s_tan: T,
    s_tno2: T,
    env: &Environment,
    cfg: &SpeciationConfig,
) -> (T, T) {
    let pka_a = cfg.pka_nh4_override.unwrap_or(pka_nh4(env.temperature_c));
    let pka_n = cfg.pka_hno2_override.unwrap_or(pka_hno2(env.temperature_c));
    let ten = T::from_f64(10.0).unwrap();
    let nh3 = s_tan / (T::one() + ten.powf(T::from_f64(pka_a - env.ph).unwrap()));
    let hno2 = s_tno2 / (T::one() + ten.powf(T::from_f64(env.ph - pka_n).unwrap()));
    (nh3, hno2)
}
