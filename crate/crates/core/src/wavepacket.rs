//! Smooth and localized single-particle initial states.
//!
//! Smooth states are assembled per momentum mode: a scalar profile
//! `e^{i k0 x} env(x - x0)` is transformed and each mode `k_j` carries the
//! branch eigenspinor `|s>_{k_j}`. The position amplitudes are the inverse
//! transform of that spectrum, so the branch projection is exact.

use std::f64::consts::PI;

use crate::automaton::{mode_momentum, transform, ModeSpectrum, SpinorField};
use crate::error::{Error, Result};
use crate::linalg::{Spinor2, C64};
use crate::params::AutomatonParams;
use crate::spectral::{eigenpair, Branch};
use crate::sum::pairwise;

/// Position-space envelope shape.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope {
    /// `exp(-(x - x0)^2 / (4 sigma_hat^2))`
    Gaussian,
    /// `sum_j c_j h_j(u) exp(-u^2)` with `u = (x - x0) / (2 sigma_hat)` and
    /// `h_j = H_j / sqrt(2^j j!)`; `coeffs[j]` is `c_j`.
    Hermite { coeffs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketSpec {
    pub k0: f64,
    pub sigma_hat: f64,
    pub x0: f64,
    pub branch: Branch,
    pub envelope: Envelope,
}

/// A built state in both representations.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketState {
    pub field: SpinorField,
    pub spectrum: ModeSpectrum,
}

impl WavepacketSpec {
    pub fn gaussian(k0: f64, sigma_hat: f64, x0: f64, branch: Branch) -> Self {
        Self {
            k0,
            sigma_hat,
            x0,
            branch,
            envelope: Envelope::Gaussian,
        }
    }

    pub fn hermite(k0: f64, sigma_hat: f64, x0: f64, branch: Branch, coeffs: Vec<f64>) -> Self {
        Self {
            k0,
            sigma_hat,
            x0,
            branch,
            envelope: Envelope::Hermite { coeffs },
        }
    }

    pub fn validate(&self, len: usize) -> Result<()> {
        if !(self.sigma_hat > 0.0 && self.sigma_hat.is_finite()) {
            return Err(Error::param("sigma_hat", "must be positive and finite"));
        }
        if !(self.k0.abs() < PI) {
            return Err(Error::param(
                "k0",
                format!("need |k0| < pi, got {}", self.k0),
            ));
        }
        if !self.x0.is_finite() {
            return Err(Error::param("x0", "must be finite"));
        }
        if !(6.0 * self.sigma_hat < len as f64) {
            return Err(Error::param(
                "L",
                format!(
                    "6 sigma_hat = {} does not fit a ring of {len} sites",
                    6.0 * self.sigma_hat
                ),
            ));
        }
        if let Envelope::Hermite { coeffs } = &self.envelope {
            if coeffs.is_empty() {
                return Err(Error::param("coeffs", "empty Hermite expansion"));
            }
            let total: f64 = coeffs.iter().map(|c| c * c).sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::param(
                    "coeffs",
                    format!("sum of squares must be 1, got {total}"),
                ));
            }
        }
        Ok(())
    }

    /// Unnormalized envelope at displacement `d = x - x0`.
    pub fn envelope_at(&self, d: f64) -> f64 {
        let u = d / (2.0 * self.sigma_hat);
        let gauss = (-u * u).exp();
        match &self.envelope {
            Envelope::Gaussian => gauss,
            Envelope::Hermite { coeffs } => {
                let mut sum = 0.0;
                let mut prev = 0.0;
                let mut cur = 1.0;
                for (j, &c) in coeffs.iter().enumerate() {
                    sum += c * cur;
                    let jf = j as f64;
                    let next =
                        (2.0 / (jf + 1.0)).sqrt() * u * cur - (jf / (jf + 1.0)).sqrt() * prev;
                    prev = cur;
                    cur = next;
                }
                sum * gauss
            }
        }
    }

    /// Build the normalized state on a ring of `len` sites.
    pub fn build(&self, p: AutomatonParams, len: usize) -> Result<PacketState> {
        self.validate(len)?;
        let half = len as f64 / 2.0;
        let scalar: Vec<Spinor2> = (0..len)
            .map(|x| {
                let xf = x as f64;
                // minimal-image displacement keeps the profile periodic
                let d = (xf - self.x0 + half).rem_euclid(len as f64) - half;
                let amp = C64::from_polar(self.envelope_at(d), self.k0 * xf);
                Spinor2::new(amp, C64::new(0.0, 0.0))
            })
            .collect();
        let g = transform(&SpinorField::new(scalar)?);
        let mut modes: Vec<Spinor2> = g
            .modes()
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let (_, spinor) = eigenpair(self.branch, mode_momentum(j, len), p);
                spinor.scale(v.r())
            })
            .collect();
        let norm = pairwise(&modes.iter().map(Spinor2::norm_sqr).collect::<Vec<_>>()).sqrt();
        if !(norm > 0.0) {
            return Err(Error::param("envelope", "vanishes on the lattice"));
        }
        for v in &mut modes {
            *v = v.scale(C64::new(1.0 / norm, 0.0));
        }
        let spectrum = ModeSpectrum::new(modes)?;
        let field = spectrum.inverse();
        Ok(PacketState { field, spectrum })
    }
}

/// Coefficients `c_0 = sqrt(1/3)`, `c_2 = sqrt(4/9)`, `c_7 = sqrt(2/9)`.
pub fn fig4_hermite_coeffs() -> Vec<f64> {
    let mut c = vec![0.0; 8];
    c[0] = (1.0f64 / 3.0).sqrt();
    c[2] = (4.0f64 / 9.0).sqrt();
    c[7] = (2.0f64 / 9.0).sqrt();
    c
}

/// Single-site state `|x0> (x) spinor`.
pub fn localized(x0: usize, spinor: Spinor2, len: usize) -> Result<SpinorField> {
    if x0 >= len {
        return Err(Error::param(
            "x0",
            format!("site {x0} outside ring of {len}"),
        ));
    }
    if (spinor.norm_sqr() - 1.0).abs() > 1e-12 {
        return Err(Error::param(
            "spinor",
            format!("must be normalized, |s|^2 = {}", spinor.norm_sqr()),
        ));
    }
    let mut f = SpinorField::zeros(len)?;
    f.sites_mut()[x0] = spinor;
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthReport {
    pub sigma: f64,
    /// Spectral weight outside `|k - k0| <= sigma`.
    pub epsilon: f64,
    /// Weight inside the window, `1 - epsilon` for a normalized state.
    pub inside: f64,
}

/// `k` reduced into `[-pi, pi)`.
pub fn wrap_momentum(k: f64) -> f64 {
    let r = (k + PI).rem_euclid(2.0 * PI) - PI;
    if r >= PI {
        -PI
    } else {
        r
    }
}

/// Bandwidth accounting on the DFT grid.
///
/// On a periodic grid the trapezoid rule is the plain mode sum; modes lying
/// exactly on the window edge count with weight one half.
pub fn bandwidth(spec: &ModeSpectrum, k0: f64, sigma: f64) -> Result<BandwidthReport> {
    if !(sigma > 0.0) {
        return Err(Error::param("sigma", "must be positive"));
    }
    let total = spec.norm_sqr();
    if !(total > 0.0) {
        return Err(Error::param("spectrum", "zero state"));
    }
    let len = spec.len();
    let tol = 1e-12;
    let w: Vec<f64> = spec
        .modes()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            if sigma >= PI {
                return v.norm_sqr();
            }
            let kk = wrap_momentum(mode_momentum(j, len) - k0).abs();
            if kk < sigma - tol {
                v.norm_sqr()
            } else if kk <= sigma + tol {
                0.5 * v.norm_sqr()
            } else {
                0.0
            }
        })
        .collect();
    let inside = pairwise(&w) / total;
    Ok(BandwidthReport {
        sigma,
        epsilon: (1.0 - inside).max(0.0),
        inside,
    })
}

/// Circular mean momentum and the root-mean-square spread around it.
pub fn momentum_spread(spec: &ModeSpectrum) -> (f64, f64) {
    let len = spec.len();
    let w = spec.weights();
    let total = pairwise(&w);
    let phasors: Vec<C64> = w
        .iter()
        .enumerate()
        .map(|(j, &x)| C64::from_polar(x, mode_momentum(j, len)))
        .collect();
    let mean = crate::sum::pairwise_c(&phasors).arg();
    let sq: Vec<f64> = w
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let d = wrap_momentum(mode_momentum(j, len) - mean);
            x * d * d
        })
        .collect();
    (mean, (pairwise(&sq) / total).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::mode_momentum;

    fn p(m: f64) -> AutomatonParams {
        AutomatonParams::new(m).unwrap()
    }

    // Physicists' Hermite polynomials by their explicit sums, for small j.
    fn hermite_explicit(j: usize, x: f64) -> f64 {
        match j {
            0 => 1.0,
            1 => 2.0 * x,
            2 => 4.0 * x * x - 2.0,
            3 => 8.0 * x.powi(3) - 12.0 * x,
            7 => 128.0 * x.powi(7) - 1344.0 * x.powi(5) + 3360.0 * x.powi(3) - 1680.0 * x,
            _ => unimplemented!(),
        }
    }

    #[test]
    fn hermite_recurrence_matches_explicit_polynomials() {
        let fact = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];
        for &j in &[0usize, 1, 2, 3, 7] {
            let mut c = vec![0.0; j + 1];
            c[j] = 1.0;
            let spec = WavepacketSpec::hermite(0.0, 1.0, 0.0, Branch::Plus, c);
            for &x in &[-3.1, -0.4, 0.0, 0.9, 2.5] {
                let u: f64 = x / 2.0;
                let expect = hermite_explicit(j, u) / (2f64.powi(j as i32) * fact[j]).sqrt()
                    * (-u * u).exp();
                let got = spec.envelope_at(x);
                assert!(
                    (got - expect).abs() < 1e-12 * expect.abs().max(1.0),
                    "j={j} x={x}"
                );
            }
        }
    }

    #[test]
    fn fig2_gaussian_initial_state() {
        let spec = WavepacketSpec::gaussian(0.3 * PI, 3.0, 30.0, Branch::Plus);
        let st = spec.build(p(0.92), 128).unwrap();
        assert!((st.field.norm_sqr() - 1.0).abs() < 1e-12);
        let d = st.field.density();
        let peak = (0..128).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
        assert!((peak as i64 - 30).abs() <= 1);
    }

    #[test]
    fn fig4_initial_state_is_normalized() {
        let spec = WavepacketSpec::hermite(
            3.0 * PI / 10.0,
            20.0,
            256.0,
            Branch::Plus,
            fig4_hermite_coeffs(),
        );
        let st = spec.build(p(0.6), 1024).unwrap();
        assert!((st.field.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((st.spectrum.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spinor_parts_are_branch_eigenvectors() {
        for branch in [Branch::Plus, Branch::Minus] {
            let spec = WavepacketSpec::gaussian(0.2, 5.0, 20.0, branch);
            let st = spec.build(p(0.3), 64).unwrap();
            for (j, v) in st.spectrum.modes().iter().enumerate() {
                let (_, e) = eigenpair(branch, mode_momentum(j, 64), p(0.3));
                let amp = e.inner(v);
                assert!(v.max_abs_diff(&e.scale(amp)) < 1e-15);
            }
        }
    }

    #[test]
    fn wide_gaussian_concentrates() {
        let len = 256;
        let k0 = mode_momentum(20, len);
        let spec = WavepacketSpec::gaussian(k0, len as f64 / 8.0, 128.0, Branch::Plus);
        let st = spec.build(p(0.5), len).unwrap();
        let w = st.spectrum.weights();
        let near: f64 = (18..=22).map(|j| w[j]).sum();
        assert!(near > 0.999, "weight near k0 = {near}");
    }

    #[test]
    fn gaussian_momentum_spread() {
        for &sh in &[10.0, 20.0, 40.0] {
            let spec = WavepacketSpec::gaussian(0.3 * PI, sh, 512.0, Branch::Plus);
            let st = spec.build(p(0.6), 1024).unwrap();
            let (mean, sd) = momentum_spread(&st.spectrum);
            assert!((mean - 0.3 * PI).abs() < 1e-6);
            let expect = 1.0 / (2.0 * sh);
            assert!((sd / expect - 1.0).abs() < 0.05, "sh={sh} sd={sd}");
        }
    }

    #[test]
    fn bandwidth_limits() {
        let spec = WavepacketSpec::gaussian(0.3, 8.0, 64.0, Branch::Plus);
        let st = spec.build(p(0.4), 128).unwrap();
        let full = bandwidth(&st.spectrum, 0.3, PI).unwrap();
        assert!(full.epsilon.abs() < 1e-12);
        let tiny = bandwidth(&st.spectrum, 0.3, 1e-9).unwrap();
        assert!(tiny.epsilon > 0.9);
        assert!(bandwidth(&st.spectrum, 0.3, 0.0).is_err());
    }

    #[test]
    fn localized_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = localized(30, Spinor2::real(h, h), 128).unwrap();
        assert!((f.norm_sqr() - 1.0).abs() < 1e-15);
        let f = localized(0, Spinor2::real(1.0, 0.0), 4).unwrap();
        assert_eq!(f.sites()[0], Spinor2::real(1.0, 0.0));
        for v in transform(&f).modes() {
            assert!((v.r().norm() - 0.5).abs() < 1e-15);
        }
        assert!(localized(4, Spinor2::real(1.0, 0.0), 4).is_err());
        assert!(localized(0, Spinor2::real(1.0, 1.0), 4).is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        let ok = WavepacketSpec::gaussian(0.3, 3.0, 10.0, Branch::Plus);
        assert!(ok.validate(19).is_ok());
        assert!(ok.validate(18).is_err());
        let mut bad = ok.clone();
        bad.sigma_hat = 0.0;
        assert!(bad.validate(100).is_err());
        bad = ok.clone();
        bad.k0 = PI;
        assert!(bad.validate(100).is_err());
        let h = WavepacketSpec::hermite(0.3, 3.0, 10.0, Branch::Plus, vec![0.5, 0.5]);
        assert!(h.validate(100).is_err());
    }

    #[test]
    fn wrap_momentum_range() {
        assert_eq!(wrap_momentum(PI), -PI);
        assert!((wrap_momentum(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_momentum(0.5), 0.5);
    }
}
