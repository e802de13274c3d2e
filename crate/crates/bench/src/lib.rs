//! Shared fixtures for the criterion benchmarks.

use std::f64::consts::PI;

use qca_core::{fig4_hermite_coeffs, AutomatonParams, Branch, PacketState, WavepacketSpec};

/// Ring lengths the benchmarks sweep over.
pub const LENGTHS: &[usize] = &[256, 1024, 4096];

pub fn params() -> AutomatonParams {
    AutomatonParams::new(0.6).expect("valid mass")
}

/// Hermite packet (c0, c2, c7) with sigma_hat = 20 and k0 = 3pi/10, centred on a ring of length `len`.
pub fn packet(len: usize) -> PacketState {
    WavepacketSpec::hermite(
        3.0 * PI / 10.0,
        20.0,
        len as f64 / 4.0,
        Branch::Plus,
        fig4_hermite_coeffs(),
    )
    .build(params(), len)
    .expect("valid packet")
}
