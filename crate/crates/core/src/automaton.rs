//! Exact evolution on a periodic ring of `L` sites.
//!
//! Position space applies the local stencil. Momentum space multiplies each
//! DFT mode by `U(k)^t`, which for real `t` is defined through the eigenphases
//! `±omega(k)` with `omega` in `[0, pi]`.
//!
//! The shift convention is `S psi(x) = psi(x+1)`, so the right-handed
//! component is transported towards decreasing `x` by one step.

use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Spinor2, C64};
use crate::params::AutomatonParams;
use crate::spectral::spectral_power;
use crate::sum::{max_abs, pairwise};

/// Two complex amplitudes per site. Site index `i` sits at lattice coordinate
/// `i - origin_offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    sites: Vec<Spinor2>,
    origin_offset: i64,
}

impl SpinorField {
    pub fn new(sites: Vec<Spinor2>) -> Result<Self> {
        Self::with_origin(sites, 0)
    }

    pub fn with_origin(sites: Vec<Spinor2>, origin_offset: i64) -> Result<Self> {
        if sites.len() < 2 {
            return Err(Error::param(
                "L",
                format!("need at least 2 sites, got {}", sites.len()),
            ));
        }
        if sites
            .iter()
            .any(|s| !(s.r().is_finite() && s.l().is_finite()))
        {
            return Err(Error::param("field", "non-finite amplitude"));
        }
        Ok(Self {
            sites,
            origin_offset,
        })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![Spinor2::default(); len])
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Spinor2] {
        &self.sites
    }

    pub fn sites_mut(&mut self) -> &mut [Spinor2] {
        &mut self.sites
    }

    pub fn origin_offset(&self) -> i64 {
        self.origin_offset
    }

    /// Lattice coordinate of site index `i`.
    pub fn coordinate(&self, i: usize) -> i64 {
        i as i64 - self.origin_offset
    }

    /// `|psi_R(x)|^2 + |psi_L(x)|^2` per site.
    pub fn density(&self) -> Vec<f64> {
        self.sites.iter().map(Spinor2::norm_sqr).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise(&self.density())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest per-amplitude modulus of the difference.
    pub fn max_abs_diff(&self, other: &SpinorField) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(max_abs(
            self.sites
                .iter()
                .zip(&other.sites)
                .map(|(a, b)| a.max_abs_diff(b)),
        ))
    }
}

/// Per-mode spinors on the grid `k_j = 2 pi j / L` mapped into `[-pi, pi)`,
/// stored in natural DFT order `j = 0..L`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    modes: Vec<Spinor2>,
    origin_offset: i64,
}

/// `2 pi j / L` reduced into `[-pi, pi)`.
pub fn mode_momentum(j: usize, len: usize) -> f64 {
    let j = j % len;
    if 2 * j < len {
        2.0 * PI * j as f64 / len as f64
    } else {
        -2.0 * PI * (len - j) as f64 / len as f64
    }
}

impl ModeSpectrum {
    pub fn new(modes: Vec<Spinor2>) -> Result<Self> {
        Self::with_origin(modes, 0)
    }

    pub fn with_origin(modes: Vec<Spinor2>, origin_offset: i64) -> Result<Self> {
        if modes.len() < 2 {
            return Err(Error::param(
                "L",
                format!("need at least 2 modes, got {}", modes.len()),
            ));
        }
        Ok(Self {
            modes,
            origin_offset,
        })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Spinor2] {
        &self.modes
    }

    pub fn modes_mut(&mut self) -> &mut [Spinor2] {
        &mut self.modes
    }

    pub fn origin_offset(&self) -> i64 {
        self.origin_offset
    }

    pub fn k(&self, j: usize) -> f64 {
        mode_momentum(j, self.len())
    }

    pub fn momenta(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.k(j)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.modes.iter().map(Spinor2::norm_sqr).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise(&self.weights())
    }

    pub fn max_abs_diff(&self, other: &ModeSpectrum) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(max_abs(
            self.modes
                .iter()
                .zip(&other.modes)
                .map(|(a, b)| a.max_abs_diff(b)),
        ))
    }

    /// Inverse of [`transform`].
    pub fn inverse(&self) -> SpinorField {
        let len = self.len();
        let o = self.origin_offset as f64;
        let mut comps = split(&self.modes);
        for (j, (r, l)) in comps.0.iter_mut().zip(comps.1.iter_mut()).enumerate() {
            let phase = C64::from_polar(1.0, -self.k(j) * o);
            *r *= phase;
            *l *= phase;
        }
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_inverse(len);
        fft.process(&mut comps.0);
        fft.process(&mut comps.1);
        let scale = 1.0 / (len as f64).sqrt();
        let sites = join(&comps, scale);
        SpinorField {
            sites,
            origin_offset: self.origin_offset,
        }
    }
}

fn split(v: &[Spinor2]) -> (Vec<C64>, Vec<C64>) {
    (
        v.iter().map(Spinor2::r).collect(),
        v.iter().map(Spinor2::l).collect(),
    )
}

fn join(comps: &(Vec<C64>, Vec<C64>), scale: f64) -> Vec<Spinor2> {
    comps
        .0
        .iter()
        .zip(&comps.1)
        .map(|(&r, &l)| Spinor2::new(r * scale, l * scale))
        .collect()
}

/// Unitary DFT per component: `psi(k_j) = L^{-1/2} sum_x e^{-i k_j x} psi(x)`
/// with `x` the lattice coordinate.
pub fn transform(field: &SpinorField) -> ModeSpectrum {
    let len = field.len();
    let mut comps = split(&field.sites);
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(len);
    fft.process(&mut comps.0);
    fft.process(&mut comps.1);
    let o = field.origin_offset as f64;
    let scale = 1.0 / (len as f64).sqrt();
    for (j, (r, l)) in comps.0.iter_mut().zip(comps.1.iter_mut()).enumerate() {
        let phase = C64::from_polar(scale, mode_momentum(j, len) * o);
        *r *= phase;
        *l *= phase;
    }
    ModeSpectrum {
        modes: join(&comps, 1.0),
        origin_offset: field.origin_offset,
    }
}

/// `U(k) = [[n e^{ik}, -i m], [-i m, n e^{-ik}]]`.
pub fn unitary_k(p: AutomatonParams, k: f64) -> Mat2 {
    let n = p.n();
    let mi = C64::new(0.0, -p.m());
    Mat2::new(C64::from_polar(n, k), mi, mi, C64::from_polar(n, -k))
}

/// `U(k)^t` for real `t >= 0` through the spectral decomposition.
pub fn unitary_power(p: AutomatonParams, k: f64, t: f64) -> Result<Mat2> {
    check_time(t)?;
    Ok(spectral_power(k, p, t))
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(
            "t",
            format!("must be finite and nonnegative, got {t}"),
        ))
    }
}

/// One application of the local stencil.
pub fn step(field: &SpinorField, p: AutomatonParams) -> SpinorField {
    let mut out = field.clone();
    step_into(&field.sites, &mut out.sites, p.n(), C64::new(0.0, -p.m()));
    out
}

fn step_into(src: &[Spinor2], dst: &mut [Spinor2], n: f64, mi: C64) {
    let len = src.len();
    for x in 0..len {
        let right = src[(x + 1) % len].r();
        let left = src[(x + len - 1) % len].l();
        let here = src[x];
        dst[x] = Spinor2::new(right * n + mi * here.l(), mi * here.r() + left * n);
    }
}

/// `t` applications of [`step`].
pub fn evolve_position(field: &SpinorField, p: AutomatonParams, t: u64) -> SpinorField {
    let n = p.n();
    let mi = C64::new(0.0, -p.m());
    let mut cur = field.sites.clone();
    let mut next = cur.clone();
    for _ in 0..t {
        step_into(&cur, &mut next, n, mi);
        std::mem::swap(&mut cur, &mut next);
    }
    SpinorField {
        sites: cur,
        origin_offset: field.origin_offset,
    }
}

/// Each mode multiplied by `U(k_j)^t`.
pub fn evolve_momentum(spec: &ModeSpectrum, p: AutomatonParams, t: f64) -> Result<ModeSpectrum> {
    check_time(t)?;
    let len = spec.len();
    let modes = spec
        .modes
        .par_iter()
        .enumerate()
        .map(|(j, v)| spectral_power(mode_momentum(j, len), p, t).apply(v))
        .collect();
    Ok(ModeSpectrum {
        modes,
        origin_offset: spec.origin_offset,
    })
}

/// Residuals of the discrete symmetries and the stencil unitarity identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    /// `max |sigma_x U(-k) sigma_x - U(k)|`
    pub parity: f64,
    /// `max |sigma_x conj(U(-k)) sigma_x - U(k)^dagger|`
    pub time_reversal: f64,
    /// Local unitarity conditions on the stencil blocks `R`, `L`, `M`.
    pub stencil: f64,
    /// `max |U^dagger U - I|` and `|det U - 1|`
    pub unitarity: f64,
    pub samples: usize,
}

impl SymmetryReport {
    pub fn max_residual(&self) -> f64 {
        max_abs([
            self.parity,
            self.time_reversal,
            self.stencil,
            self.unitarity,
        ])
    }
}

fn stencil_residual(p: AutomatonParams) -> f64 {
    let n = p.n();
    let r = Mat2::real(n, 0.0, 0.0, 0.0);
    let l = Mat2::real(0.0, 0.0, 0.0, n);
    let mi = C64::new(0.0, -p.m());
    let z = C64::new(0.0, 0.0);
    let m = Mat2::new(z, mi, mi, z);
    let a = r * r.adjoint() + l * l.adjoint() + m * m.adjoint() - Mat2::identity();
    let b = m * r.adjoint() + l * m.adjoint();
    let c = l * r.adjoint();
    max_abs([a.max_abs(), b.max_abs(), c.max_abs()])
}

pub fn symmetry_check(p: AutomatonParams, k_samples: &[f64]) -> SymmetryReport {
    let sx = Mat2::pauli_x();
    let per_k: Vec<(f64, f64, f64)> = k_samples
        .iter()
        .map(|&k| {
            let u = unitary_k(p, k);
            let um = unitary_k(p, -k);
            let parity = (sx * um * sx).max_abs_diff(&u);
            let tr = (sx * um.conj() * sx).max_abs_diff(&u.adjoint());
            let unit = u
                .unitarity_residual()
                .max((u.det() - C64::new(1.0, 0.0)).norm());
            (parity, tr, unit)
        })
        .collect();
    SymmetryReport {
        parity: max_abs(per_k.iter().map(|x| x.0)),
        time_reversal: max_abs(per_k.iter().map(|x| x.1)),
        stencil: stencil_residual(p),
        unitarity: max_abs(per_k.iter().map(|x| x.2)),
        samples: k_samples.len(),
    }
}
