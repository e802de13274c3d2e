use crate::error::{Error, Result};

/// The single physical knob of the automaton: the adimensional mass `m`.
///
/// The companion coefficient `n = sqrt(1 - m^2)` is always derived, never
/// stored, so `n^2 + m^2 = 1` holds to rounding.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AutomatonParams {
    m: f64,
}

impl AutomatonParams {
    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::MassOutOfRange(m));
        }
        Ok(Self { m })
    }

    /// Massless (Weyl) automaton.
    pub fn massless() -> Self {
        Self { m: 0.0 }
    }

    #[inline]
    pub fn m(&self) -> f64 {
        self.m
    }

    #[inline]
    pub fn n(&self) -> f64 {
        ((1.0 - self.m) * (1.0 + self.m)).sqrt()
    }
}
