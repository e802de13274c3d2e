//! # qca-core
//!
//! A numerical laboratory for the one-dimensional Dirac quantum cellular
//! automaton. The automaton advances a two-component field on a lattice by one
//! local unitary step
//!
//! ```text
//! psi_R'(x) = n psi_R(x+1) - i m psi_L(x)
//! psi_L'(x) = -i m psi_R(x) + n psi_L(x-1)        n^2 + m^2 = 1
//! ```
//!
//! where `m` in `[0, 1]` is the mass in Planck units. In momentum space each
//! mode evolves by the 2x2 matrix `U(k) = [[n e^{ik}, -im], [-im, n e^{-ik}]]`
//! whose eigenphases `±omega(k, m)` give the dispersion relation.
//!
//! Modules:
//!
//! - [`automaton`]: exact evolution on a periodic ring, in position space
//!   (the local stencil) and in momentum space (per-mode spectral powers),
//!   plus the parity, time-reversal and unitarity identities.
//! - [`spectral`]: closed-form dispersion analytics, eigenpairs, the
//!   interpolating and Dirac Hamiltonians, and regime expansions.
//! - [`wavepacket`]: smooth (Gaussian / Hermite) and localized initial states.
//! - [`approx`]: the drift-diffusion ("k-dependent Schrodinger") evolution,
//!   fidelity, and its accuracy bound.
//! - [`discrimination`]: optimal-discrimination bounds between automaton and
//!   Dirac evolution, with Monte Carlo validation.
//! - [`flytime`]: the flying-time thought-experiment calculator.
//!
//! All kernels are deterministic 64-bit floating point code.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod automaton;
pub mod discrimination;
mod error;
pub mod flytime;
pub mod linalg;
mod params;
pub mod spectral;
pub mod sum;
pub mod wavepacket;

pub use approx::{
    accuracy_bound, fidelity, schrodinger_evolve, AccuracyBound, ApproxEvolutionParams,
    PhaseConvention,
};
pub use automaton::{
    evolve_momentum, evolve_position, mode_momentum, step, symmetry_check, transform, unitary_k,
    unitary_power, ModeSpectrum, SpinorField, SymmetryReport,
};
pub use discrimination::{
    alpha_beta, cosine_bound_slack, extremal_alpha_beta, montecarlo_survey, mu, mu_precise,
    multiparticle_phase, pe_lower_bound, pe_lower_bound_with, pure_state_trace_distance, t_min,
    unitary_pair_t, validate_bound_montecarlo, BoundVariant, DiscriminationInput,
    DiscriminationReport, MonteCarloReport, MultiParticleSpec, TMin,
};
pub use error::{Error, Result};
pub use flytime::{
    broadening, broadening_collapsed, planck_to_seconds, seconds_to_planck, separation_time,
    visibility_report, FlytimeInput, FlytimeReport, PLANCK_LENGTH_M, PLANCK_MASS_KG, PLANCK_TIME_S,
};
pub use linalg::{Mat2, Spinor2, C64};
pub use params::AutomatonParams;
pub use spectral::{
    derivatives, dirac_gap, dirac_hamiltonian_k, dirac_omega, dirac_velocity,
    dispersion_correction, dispersion_point, eigenpair, hamiltonian_k, omega, regime_coefficients,
    spectral_power, Branch, Derivatives, DispersionCorrection, DispersionPoint, Regime,
    RegimeSeries,
};
pub use wavepacket::{
    bandwidth, fig4_hermite_coeffs, localized, momentum_spread, wrap_momentum, BandwidthReport,
    Envelope, PacketState, WavepacketSpec,
};
