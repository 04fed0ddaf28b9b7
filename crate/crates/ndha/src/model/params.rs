use crate::error::{Error, Result};
use num_traits::{Float, FromPrimitive};
use std::collections::HashMap;

/// Uncertainty class: 1 = +/-10%, 2 = +/-25%, 3 = +/-50% around the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UncertaintyClass {
    C1,
    C2,
    C3,
}

impl UncertaintyClass {
    pub fn half_width_fraction(self) -> f64 {
        match self {
            UncertaintyClass::C1 => 0.10,
            UncertaintyClass::C2 => 0.25,
            UncertaintyClass::C3 => 0.50,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            UncertaintyClass::C1 => 1,
            UncertaintyClass::C2 => 2,
            UncertaintyClass::C3 => 3,
        }
    }

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            1 => Some(UncertaintyClass::C1),
            2 => Some(UncertaintyClass::C2),
            3 => Some(UncertaintyClass::C3),
            _ => None,
        }
    }
}

/// Role of a parameter; drives validation and temperature correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Maximum rates (mu, b, k_H): strictly positive, temperature-corrected.
    Rate,
    /// Affinity / inhibition constants: strictly positive.
    Affinity,
    /// Reduction factors and fractions: in (0, 1].
    Fraction,
    /// Yields: strictly positive.
    Yield,
    /// Biomass composition coefficients: strictly positive.
    Composition,
    /// Gas transfer coefficients and saturation values: nonnegative.
    Transfer,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamMeta {
    pub name: &'static str,
    pub unit: &'static str,
    pub class: UncertaintyClass,
    pub kind: ParamKind,
    pub default: f64,
}

macro_rules! define_params {
    ($( $field:ident : $name:literal, $unit:literal, $class:ident, $kind:ident, $default:expr; )+) => {
        /// All kinetic, stoichiometric and transfer constants of the model.
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct Params<T> {
            $( pub $field: T, )+
        }

        pub const PARAM_TABLE: &[ParamMeta] = &[
            $( ParamMeta {
                name: $name,
                unit: $unit,
                class: UncertaintyClass::$class,
                kind: ParamKind::$kind,
                default: $default,
            }, )+
        ];

        impl<T: Float + FromPrimitive> Params<T> {
            /// Published default values.
            pub fn defaults() -> Self {
                Params {
                    $( $field: T::from_f64($default).unwrap(), )+
                }
            }
        }

        impl<T: Copy> Params<T> {
            pub fn get(&self, name: &str) -> Result<T> {
                match name {
                    $( $name => Ok(self.$field), )+
                    _ => Err(Error::UnknownParameter(name.to_string())),
                }
            }

            pub fn set(&mut self, name: &str, value: T) -> Result<()> {
                match name {
                    $( $name => { self.$field = value; Ok(()) } )+
                    _ => Err(Error::UnknownParameter(name.to_string())),
                }
            }
        }
    }
}

define_params! {
    // AOB block
    k_aob_nh2oh:    "K_AOB.NH2OH",    "mgN/L",      C3, Affinity,    0.3;
    k_aob_nh2oh_nd: "K_AOB.NH2OH.ND", "mgN/L",      C3, Affinity,    0.3;
    k_aob_nh3:      "K_AOB.NH3",      "mgN/L",      C3, Affinity,    0.0075;
    k_aob_no_nd:    "K_AOB.NO.ND",    "mgN/L",      C3, Affinity,    0.004;
    k_aob_hno2:     "K_AOB.HNO2",     "mgN/L",      C3, Affinity,    0.0001;
    k_aob_o2_amo:   "K_AOB.O2.AMO",   "mgO2/L",     C3, Affinity,    0.4;
    k_aob_o2_hao:   "K_AOB.O2.HAO",   "mgO2/L",     C3, Affinity,    0.4;
    k_aob_o2_i:     "K_AOB.O2.i",     "mgO2/L",     C3, Affinity,    0.1;
    k_aob_i_nh3:    "K_AOB.i.NH3",    "mgN/L",      C3, Affinity,    10.0;
    k_aob_i_hno2:   "K_AOB.i.HNO2",   "mgN/L",      C3, Affinity,    0.75;
    eps_aob:        "eps_AOB",        "-",          C3, Fraction,    0.001;
    eta_nir:        "eta_NIR",        "-",          C3, Fraction,    0.15;
    eta_nor:        "eta_NOR",        "-",          C3, Fraction,    0.15;
    mu_aob_amo:     "mu_AOB.AMO",     "1/d",        C2, Rate,        0.78;
    mu_aob_hao:     "mu_AOB.HAO",     "1/d",        C2, Rate,        0.78;
    b_aob:          "b_AOB",          "1/d",        C2, Rate,        0.096;
    y_aob:          "Y_AOB",          "mgCOD/mgN",  C1, Yield,       0.18;
    // NOB block
    k_nob_hno2:     "K_NOB.HNO2",     "mgN/L",      C3, Affinity,    0.0001;
    k_nob_o2:       "K_NOB.O2",       "mgO2/L",     C3, Affinity,    1.2;
    k_nob_i_nh3:    "K_NOB.i.NH3",    "mgN/L",      C3, Affinity,    0.5;
    k_nob_i_hno2:   "K_NOB.i.HNO2",   "mgN/L",      C3, Affinity,    0.1;
    mu_nob:         "mu_NOB",         "1/d",        C2, Rate,        0.78;
    b_nob:          "b_NOB",          "1/d",        C2, Rate,        0.096;
    y_nob:          "Y_NOB",          "mgCOD/mgN",  C1, Yield,       0.06;
    // HB block
    k_hb_nh4:       "K_HB.NH4",       "mgN/L",      C3, Affinity,    0.01;
    k_hb_no3:       "K_HB.NO3",       "mgN/L",      C3, Affinity,    0.2;
    k_hb_no2:       "K_HB.NO2",       "mgN/L",      C3, Affinity,    0.2;
    k_hb_no:        "K_HB.NO",        "mgN/L",      C3, Affinity,    0.05;
    k_hb_n2o:       "K_HB.N2O",       "mgN/L",      C3, Affinity,    0.05;
    k_hb_s:         "K_HB.S",         "mgCOD/L",    C3, Affinity,    20.0;
    k_hb_s_nar:     "K_HB.S.NAR",     "mgCOD/L",    C3, Affinity,    20.0;
    k_hb_s_nir:     "K_HB.S.NIR",     "mgCOD/L",    C3, Affinity,    20.0;
    k_hb_s_nor:     "K_HB.S.NOR",     "mgCOD/L",    C3, Affinity,    20.0;
    k_hb_s_nos:     "K_HB.S.NOS",     "mgCOD/L",    C3, Affinity,    40.0;
    k_hb_o2:        "K_HB.O2",        "mgO2/L",     C3, Affinity,    0.1;
    k_hb_o2_i_nar:  "K_HB.O2.i.NAR",  "mgO2/L",     C3, Affinity,    0.1;
    k_hb_o2_i_nir:  "K_HB.O2.i.NIR",  "mgO2/L",     C3, Affinity,    0.1;
    k_hb_o2_i_nor:  "K_HB.O2.i.NOR",  "mgO2/L",     C3, Affinity,    0.1;
    k_hb_o2_i_nos:  "K_HB.O2.i.NOS",  "mgO2/L",     C3, Affinity,    0.1;
    k_hb_no_i_nir:  "K_HB.NO.i.NIR",  "mgN/L",      C3, Affinity,    0.5;
    k_hb_no_i_nor:  "K_HB.NO.i.NOR",  "mgN/L",      C3, Affinity,    0.3;
    k_hb_no_i_nos:  "K_HB.NO.i.NOS",  "mgN/L",      C3, Affinity,    0.075;
    mu_hb:          "mu_HB",          "1/d",        C2, Rate,        6.24;
    mu_hb_nar:      "mu_HB.NAR",      "1/d",        C2, Rate,        1.754;
    mu_hb_nir:      "mu_HB.NIR",      "1/d",        C2, Rate,        1.0;
    mu_hb_nor:      "mu_HB.NOR",      "1/d",        C2, Rate,        2.18;
    mu_hb_nos:      "mu_HB.NOS",      "1/d",        C2, Rate,        2.18;
    eta_hd:         "eta_HD",         "-",          C2, Fraction,    0.2;
    b_hb:           "b_HB",           "1/d",        C2, Rate,        0.41;
    y_hb:           "Y_HB",           "mgCOD/mgCOD", C1, Yield,      0.6;
    // Others
    f_xi:           "f_XI",           "-",          C1, Fraction,    0.08;
    i_nxb:          "i_NXB",          "mgN/mgCOD",  C1, Composition, 0.086;
    i_nxi:          "i_NXI",          "mgN/mgCOD",  C1, Composition, 0.02;
    i_nxs:          "i_NXS",          "mgN/mgCOD",  C1, Composition, 0.06;
    eta_b:          "eta_b",          "-",          C2, Fraction,    0.33;
    k_o2_b:         "K_O2.b",         "mgO2/L",     C3, Affinity,    0.2;
    k_nox:          "K_NOx",          "mgN/L",      C3, Affinity,    0.2;
    k_h:            "k_H",            "1/d",        C2, Rate,        2.21;
    k_x:            "K_X",            "mgCOD/mgCOD", C3, Affinity,   0.15;
    eta_anox:       "eta_anox",       "-",          C2, Fraction,    0.4;
    eta_anaer:      "eta_anaer",      "-",          C2, Fraction,    0.4;
    // Gas transfer (sealed-vessel defaults: no exchange)
    k_la_o2:        "K_La.O2",        "1/d",        C1, Transfer,    0.0;
    k_la_n2o:       "K_La.N2O",       "1/d",        C1, Transfer,    0.0;
    k_la_no:        "K_La.NO",        "1/d",        C1, Transfer,    0.0;
    sstar_o2:       "Sstar_O2",       "mgO2/L",     C1, Transfer,    8.0;
    sstar_n2o:      "Sstar_N2O",      "mgN/L",      C1, Transfer,    0.0;
    sstar_no:       "Sstar_NO",       "mgN/L",      C1, Transfer,    0.0;
}

pub fn param_meta(name: &str) -> Result<&'static ParamMeta> {
    PARAM_TABLE
        .iter()
        .find(|m| m.name == name)
        .ok_or_else(|| Error::UnknownParameter(name.to_string()))
}

impl<T: Float + FromPrimitive> Params<T> {
    /// Checks positivity and range constraints for every parameter.
    pub fn validate(&self) -> Result<()> {
        for meta in PARAM_TABLE {
            let v = self.get(meta.name)?;
            let ok = match meta.kind {
                ParamKind::Rate | ParamKind::Affinity | ParamKind::Yield
                | ParamKind::Composition => v > T::zero(),
                ParamKind::Fraction => v > T::zero() && v <= T::one(),
                ParamKind::Transfer => v >= T::zero(),
            };
            if !ok || !v.is_finite() {
                return Err(Error::invalid(
                    format!("parameter {}", meta.name),
                    format!("value {:?} out of range for its kind", v.to_f64()),
                ));
            }
        }
        Ok(())
    }

    /// Scales rate-type parameters by exp(theta * (T - 20)).
    ///
    /// `theta` maps parameter names to Arrhenius-type coefficients; names
    /// absent from the map are left unchanged. The shipped default is an
    /// empty map (no correction), which keeps simulations on the values as
    /// published.
    pub fn temperature_corrected(
        &self,
        temperature_c: f64,
        theta: &HashMap<String, f64>,
    ) -> Result<Self> {
        for name in theta.keys() {
            let meta = param_meta(name)?;
            if meta.kind != ParamKind::Rate {
                return Err(Error::invalid(
                    format!("theta entry {name}"),
                    "temperature correction applies to rate parameters only",
                ));
            }
        }
        let mut out = *self;
        for meta in PARAM_TABLE {
            if let Some(th) = theta.get(meta.name) {
                let factor = T::from_f64((th * (temperature_c - 20.0)).exp()).unwrap();
                let v = out.get(meta.name)?;
                out.set(meta.name, v * factor)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn defaults_are_valid_and_named() {
        let p = Params::<f64>::defaults();
        p.validate().unwrap();
        assert_eq!(PARAM_TABLE.len(), 67);
        assert_relative_eq!(p.get("mu_NOB").unwrap(), 0.78);
        assert_relative_eq!(p.get("K_AOB.HNO2").unwrap(), 0.0001);
        assert_relative_eq!(p.get("eta_HD").unwrap(), 0.2);
        assert!(p.get("nope").is_err());
    }

    #[test]
    fn every_parameter_has_exactly_one_class() {
        // table is the single source of truth; just check coverage and ranges
        for meta in PARAM_TABLE {
            assert!(matches!(meta.class.as_u8(), 1..=3), "{}", meta.name);
        }
    }

    #[test]
    fn temperature_identity_cases() {
        let p = Params::<f64>::defaults();
        let theta = HashMap::new();
        let q = p.temperature_corrected(31.0, &theta).unwrap();
        assert_eq!(p, q);

        let mut theta = HashMap::new();
        theta.insert("mu_NOB".to_string(), 0.0693);
        let q = p.temperature_corrected(20.0, &theta).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn temperature_q10_scaling() {
        // theta = 0.0693 is Q10 = 2; 25 C scales by exp(0.0693*5) = 1.41418...
        let p = Params::<f64>::defaults();
        let mut theta = HashMap::new();
        theta.insert("mu_AOB.AMO".to_string(), 0.0693);
        let q = p.temperature_corrected(25.0, &theta).unwrap();
        assert_relative_eq!(
            q.mu_aob_amo / p.mu_aob_amo,
            (0.0693f64 * 5.0).exp(),
            epsilon = 1e-12
        );
        assert_relative_eq!(q.mu_aob_amo / p.mu_aob_amo, 1.414, epsilon = 5e-4);
        // affinities untouched
        assert_eq!(q.k_aob_nh3, p.k_aob_nh3);
    }

    #[test]
    fn temperature_rejects_unknown_and_non_rate() {
        let p = Params::<f64>::defaults();
        let mut theta = HashMap::new();
        theta.insert("no_such".to_string(), 0.07);
        assert!(p.temperature_corrected(25.0, &theta).is_err());
        let mut theta = HashMap::new();
        theta.insert("K_AOB.NH3".to_string(), 0.07);
        assert!(p.temperature_corrected(25.0, &theta).is_err());
    }
}
