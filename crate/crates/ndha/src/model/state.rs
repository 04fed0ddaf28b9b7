use num_traits::Float;
use std::ops::{Index, IndexMut};

pub const N_COMPONENTS: usize = 15;

/// Model components in fixed matrix-column order.
///
/// Nitrogen pools are stored as totals: `STan` is NH3 + NH4+ and `STno2`
/// is HNO2 + NO2-; the free species follow from pH (see [`speciate`]).
///
/// [`speciate`]: crate::model::speciate
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(usize)]
pub enum Component {
    /// Readily biodegradable substrate (mgCOD/L)
    SS = 0,
    /// Dissolved oxygen (mgO2/L)
    SO2 = 1,
    /// Total ammonia nitrogen, NH3 + NH4+ (mgN/L)
    STan = 2,
    /// Hydroxylamine (mgN/L)
    SNh2oh = 3,
    /// Total nitrite, HNO2 + NO2- (mgN/L)
    STno2 = 4,
    /// Nitrate (mgN/L)
    SNo3 = 5,
    /// Nitric oxide (mgN/L)
    SNo = 6,
    /// Nitrous oxide (mgN/L)
    SN2o = 7,
    /// Dinitrogen (mgN/L)
    SN2 = 8,
    /// Inorganic carbon pool; bookkeeping only, no rate law reads it
    SIc = 9,
    /// Ammonia-oxidizing biomass (mgCOD/L)
    XAob = 10,
    /// Nitrite-oxidizing biomass (mgCOD/L)
    XNob = 11,
    /// Heterotrophic biomass (mgCOD/L)
    XHb = 12,
    /// Slowly biodegradable substrate (mgCOD/L)
    XS = 13,
    /// Particulate inerts (mgCOD/L)
    XI = 14,
}

impl Component {
    pub const ALL: [Component; N_COMPONENTS] = [
        Component::SS,
        Component::SO2,
        Component::STan,
        Component::SNh2oh,
        Component::STno2,
        Component::SNo3,
        Component::SNo,
        Component::SN2o,
        Component::SN2,
        Component::SIc,
        Component::XAob,
        Component::XNob,
        Component::XHb,
        Component::XS,
        Component::XI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::SS => "S_S",
            Component::SO2 => "S_O2",
            Component::STan => "S_TAN",
            Component::SNh2oh => "S_NH2OH",
            Component::STno2 => "S_TNO2",
            Component::SNo3 => "S_NO3",
            Component::SNo => "S_NO",
            Component::SN2o => "S_N2O",
            Component::SN2 => "S_N2",
            Component::SIc => "S_IC",
            Component::XAob => "X_AOB",
            Component::XNob => "X_NOB",
            Component::XHb => "X_HB",
            Component::XS => "X_S",
            Component::XI => "X_I",
        }
    }

    pub fn from_name(name: &str) -> Option<Component> {
        Component::ALL.iter().copied().find(|c| c.name() == name)
    }
}

/// Concentrations of the 15 model components at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State<T>(pub [T; N_COMPONENTS]);

impl<T: Float> State<T> {
    pub fn zeros() -> Self {
        State([T::zero(); N_COMPONENTS])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| *v >= T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Componentwise clamp to zero from below.
    pub fn clamped_nonnegative(&self) -> Self {
        let mut out = *self;
        for v in out.0.iter_mut() {
            if *v < T::zero() {
                *v = T::zero();
            }
        }
        out
    }
}

impl<T> Index<Component> for State<T> {
    type Output = T;
    fn index(&self, c: Component) -> &T {
        &self.0[c as usize]
    }
}

impl<T> IndexMut<Component> for State<T> {
    fn index_mut(&mut self, c: Component) -> &mut T {
        &mut self.0[c as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_order_matches_columns() {
        for (i, c) in Component::ALL.iter().enumerate() {
            assert_eq!(*c as usize, i);
        }
        assert_eq!(Component::from_name("S_N2O"), Some(Component::SN2o));
        assert_eq!(Component::from_name("bogus"), None);
    }

    #[test]
    fn clamp_is_componentwise() {
        let mut s = State::<f64>::zeros();
        s[Component::SNo] = -1e-12;
        s[Component::SS] = 2.0;
        let c = s.clamped_nonnegative();
        assert_eq!(c[Component::SNo], 0.0);
        assert_eq!(c[Component::SS], 2.0);
        assert!(c.is_nonnegative());
    }
}
