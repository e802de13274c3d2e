//! Flying-time thought experiment: how long until automaton and Dirac
//! trajectories of a packet separate by its own width, and whether the
//! packets stay narrow enough for the separation to be seen.
//!
//! All inputs and outputs are in Planck units unless suffixed otherwise.

use crate::error::{Error, Result};
use crate::params::AutomatonParams;
use crate::spectral::derivatives;

pub const PLANCK_TIME_S: f64 = 5.391e-44;
pub const PLANCK_LENGTH_M: f64 = 1.616e-35;
pub const PLANCK_MASS_KG: f64 = 2.176e-8;

/// Ratios below this are reported as not visible.
pub const VISIBILITY_THRESHOLD: f64 = 10.0;

pub fn planck_to_seconds(t: f64) -> f64 {
    t * PLANCK_TIME_S
}

pub fn seconds_to_planck(s: f64) -> f64 {
    s / PLANCK_TIME_S
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlytimeInput {
    pub m: f64,
    pub k: f64,
    pub sigma_hat: f64,
}

impl FlytimeInput {
    pub fn new(m: f64, k: f64, sigma_hat: f64) -> Result<Self> {
        AutomatonParams::new(m)?;
        if !(m > 0.0) {
            return Err(Error::param("m", "must be positive"));
        }
        if !(k != 0.0 && k.is_finite() && k.abs() < std::f64::consts::PI) {
            return Err(Error::param("k", format!("need 0 < |k| < pi, got {k}")));
        }
        if !(sigma_hat > 0.0 && sigma_hat.is_finite()) {
            return Err(Error::param("sigma_hat", "must be positive and finite"));
        }
        Ok(Self { m, k, sigma_hat })
    }
}

/// `(t_general, t_relativistic)`: the separation time from the drift
/// expansion, and its `m/k -> 0` limit `6 sigma_hat / m^2`.
pub fn separation_time(input: &FlytimeInput) -> (f64, f64) {
    let FlytimeInput { m, k, sigma_hat } = *input;
    let m2 = m * m;
    let r = k.hypot(m);
    let general = sigma_hat * (6.0 * r * r * r / (m2 * k * k * (2.0 * m2 + k))).abs();
    (general, 6.0 * sigma_hat / m2)
}

// sqrt(1 + x^2) - 1 without cancellation
fn sqrt1p_m1(x: f64) -> f64 {
    let x2 = x * x;
    x2 / ((1.0 + x2).sqrt() + 1.0)
}

/// Dirac diffusion coefficient `m^2 (k^2 + m^2)^{-3/2}`.
pub fn dirac_diffusion(k: f64, m: f64) -> f64 {
    let r = k.hypot(m);
    m * m / (r * r * r)
}

/// Combined broadening of the automaton and Dirac packets after time `t`.
pub fn broadening(input: &FlytimeInput, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::param("t", "must be finite and nonnegative"));
    }
    let s2 = 2.0 * input.sigma_hat * input.sigma_hat;
    let d = derivatives(input.k, AutomatonParams::new(input.m)?)?.d;
    let dd = dirac_diffusion(input.k, input.m);
    Ok(input.sigma_hat * (sqrt1p_m1(d * t / s2) + sqrt1p_m1(dd * t / s2)))
}

/// The `m/k << 1` form `2 sigma_hat (sqrt(1 + m^4 t^2 / (4 sigma_hat^4 k^6)) - 1)`.
pub fn broadening_collapsed(input: &FlytimeInput, t: f64) -> f64 {
    let FlytimeInput { m, k, sigma_hat } = *input;
    let x = m * m * t / (2.0 * sigma_hat * sigma_hat * k.abs().powi(3));
    2.0 * sigma_hat * sqrt1p_m1(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlytimeReport {
    pub t_general: f64,
    pub t_relativistic: f64,
    /// Broadening at `t_general`.
    pub broadening_at_t: f64,
    pub broadening_collapsed_at_t: f64,
    /// `sigma_hat / broadening_at_t`
    pub visibility_ratio: f64,
    pub visible: bool,
    pub t_seconds: f64,
    pub t_relativistic_seconds: f64,
    pub sigma_hat_m: f64,
}

pub fn visibility_report(input: &FlytimeInput) -> Result<FlytimeReport> {
    let (t_general, t_relativistic) = separation_time(input);
    let br = broadening(input, t_general)?;
    let ratio = input.sigma_hat / br;
    Ok(FlytimeReport {
        t_general,
        t_relativistic,
        broadening_at_t: br,
        broadening_collapsed_at_t: broadening_collapsed(input, t_general),
        visibility_ratio: ratio,
        visible: ratio >= VISIBILITY_THRESHOLD,
        t_seconds: planck_to_seconds(t_general),
        t_relativistic_seconds: planck_to_seconds(t_relativistic),
        sigma_hat_m: input.sigma_hat * PLANCK_LENGTH_M,
    })
}
