//! Drift-diffusion approximation of the automaton evolution.
//!
//! Around the peak momentum `k0` the dispersion is replaced by its quadratic
//! Taylor polynomial `omega0 + v K + D K^2 / 2`, `K = k - k0`, and each mode
//! picks up the corresponding phase. This is the per-mode solution of the
//! Schrodinger equation with drift `v` and diffusion `D`.

use crate::automaton::{mode_momentum, ModeSpectrum};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::params::AutomatonParams;
use crate::spectral::{derivatives, omega, Branch};
use crate::sum::pairwise_c;
use crate::wavepacket::{bandwidth, wrap_momentum};

/// Sign of the quadratic term in the approximate phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// `omega0 + v K + D K^2 / 2`, the Taylor polynomial of `omega`.
    #[default]
    Taylor,
    /// `omega0 + v K - D K^2 / 2`, with the diffusion sign flipped.
    FlippedDiffusion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxEvolutionParams {
    pub k0: f64,
    pub omega0: f64,
    pub v: f64,
    pub d: f64,
    pub branch: Branch,
    pub convention: PhaseConvention,
}

impl ApproxEvolutionParams {
    pub fn new(k0: f64, p: AutomatonParams, branch: Branch) -> Result<Self> {
        let der = derivatives(k0, p)?;
        Ok(Self {
            k0,
            omega0: omega(k0, p),
            v: der.v,
            d: der.d,
            branch,
            convention: PhaseConvention::Taylor,
        })
    }

    pub fn with_convention(mut self, convention: PhaseConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Approximate dispersion at momentum `k`.
    pub fn phase_rate(&self, k: f64) -> f64 {
        let kk = wrap_momentum(k - self.k0);
        let quad = match self.convention {
            PhaseConvention::Taylor => 0.5 * self.d * kk * kk,
            PhaseConvention::FlippedDiffusion => -0.5 * self.d * kk * kk,
        };
        self.omega0 + self.v * kk + quad
    }
}

/// Multiplies mode `k_j` by `exp(-i s (omega0 + v K + D K^2/2) t)`.
pub fn schrodinger_evolve(
    spec: &ModeSpectrum,
    ap: &ApproxEvolutionParams,
    t: f64,
) -> Result<ModeSpectrum> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param(
            "t",
            format!("must be finite and nonnegative, got {t}"),
        ));
    }
    let len = spec.len();
    let s = ap.branch.sign();
    let modes = spec
        .modes()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let phase = -s * ap.phase_rate(mode_momentum(j, len)) * t;
            v.scale(C64::from_polar(1.0, phase))
        })
        .collect();
    ModeSpectrum::with_origin(modes, spec.origin_offset())
}

/// `|sum_j <a_j|b_j>|`.
pub fn fidelity(a: &ModeSpectrum, b: &ModeSpectrum) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let terms: Vec<C64> = a
        .modes()
        .iter()
        .zip(b.modes())
        .map(|(x, y)| x.inner(y))
        .collect();
    Ok(pairwise_c(&terms).norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBound {
    pub epsilon: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub t: f64,
    /// `max(0, 1 - epsilon - gamma sigma^3 t)`
    pub bound: f64,
}

/// Lower bound on the overlap between exact and approximate evolution.
///
/// `gamma = |omega'''(k0)|` times the spectral weight inside `|k - k0| <= sigma`.
pub fn accuracy_bound(
    spec: &ModeSpectrum,
    p: AutomatonParams,
    k0: f64,
    sigma: f64,
    t: f64,
) -> Result<AccuracyBound> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", "must be finite and nonnegative"));
    }
    let bw = bandwidth(spec, k0, sigma)?;
    let w3 = derivatives(k0, p)?.omega3;
    let gamma = w3.abs() * bw.inside;
    let bound = (1.0 - bw.epsilon - gamma * sigma.powi(3) * t).max(0.0);
    Ok(AccuracyBound {
        epsilon: bw.epsilon,
        gamma,
        sigma,
        t,
        bound,
    })
}
