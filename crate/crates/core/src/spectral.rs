//! Closed-form dispersion analytics of the automaton.
//!
//! Per momentum `k` the step matrix is `U(k) = cos(w) I - i Htilde(k)` with
//! `Htilde = [[-n sin k, m], [m, n sin k]]` and `Htilde^2 = sin^2(w) I`, where
//! `w = omega(k, m) = arccos(n cos k)`. Everything here follows from that
//! identity. We always work with `sin^2 w = sin^2 k + m^2 cos^2 k`, which is
//! free of the cancellation in `1 - n^2 cos^2 k`.

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Spinor2, C64};
use crate::params::AutomatonParams;

/// Eigenvalue branch: `U(k)|s> = e^{-i s omega}|s>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn from_sign(s: i32) -> Option<Branch> {
        match s {
            1 => Some(Branch::Plus),
            -1 => Some(Branch::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// `sin^2(omega)`, computed without cancellation.
#[inline]
pub(crate) fn sin2_omega(k: f64, p: AutomatonParams) -> f64 {
    let (s, c) = k.sin_cos();
    let m = p.m();
    s * s + m * m * c * c
}

/// Automaton dispersion relation `arccos(sqrt(1-m^2) cos k)`, in `[0, pi]`.
///
/// Evaluated as `atan2(sin w, cos w)` so that the relative precision survives
/// at Planck-suppressed momenta and masses.
pub fn omega(k: f64, p: AutomatonParams) -> f64 {
    let k = k.abs();
    let sin_w = sin2_omega(k, p).sqrt();
    sin_w.atan2(p.n() * k.cos())
}

/// Dirac dispersion `sqrt(k^2 + m^2)`.
pub fn dirac_omega(k: f64, m: f64) -> f64 {
    k.hypot(m)
}

/// Dirac group velocity `k / sqrt(k^2 + m^2)`; zero at the origin.
pub fn dirac_velocity(k: f64, m: f64) -> f64 {
    let r = k.hypot(m);
    if r == 0.0 {
        0.0
    } else {
        k / r
    }
}

// k^2 + m^2 - omega^2 as a power series in (k, m), exact through total
// degree 10. Used where the direct difference would cancel.
fn gap_series_delta(k: f64, m: f64) -> f64 {
    let k2 = k * k;
    let m2 = m * m;
    let k4 = k2 * k2;
    let m4 = m2 * m2;
    let diff = (k - m) * (k + m);
    let t4 = diff / 3.0;
    let t6 = (k4 + 6.0 * k2 * m2 - 8.0 * m4) / 45.0;
    let t8 = (2.0 * k4 * k2 + 3.0 * k4 * m2 + 72.0 * k2 * m4 - 108.0 * m4 * m2) / 945.0;
    let t10 = (k4 * k4 - 2.0 * k4 * k2 * m2 + 240.0 * k2 * m4 * m2 - 384.0 * m4 * m4) / 4725.0;
    m2 * (t4 + (t6 + (t8 + t10)))
}

const GAP_SERIES_RADIUS: f64 = 1e-2;

/// Dirac-minus-automaton frequency gap `omega_D - omega`.
///
/// Near the origin the gap is a factor `~m^2` smaller than either frequency,
/// so it is taken from a series for `omega_D^2 - omega^2` there.
pub fn dirac_gap(k: f64, p: AutomatonParams) -> f64 {
    let k = k.abs();
    let m = p.m();
    if m == 0.0 {
        return 0.0;
    }
    let r = dirac_omega(k, m);
    if r < GAP_SERIES_RADIUS {
        let delta = gap_series_delta(k, m);
        let w = (r * r - delta).sqrt();
        delta / (r + w)
    } else {
        r - omega(k, p)
    }
}

/// First three k-derivatives of the dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    /// Group velocity, signed and odd in `k`.
    pub v: f64,
    /// Diffusion coefficient, even in `k`.
    pub d: f64,
    pub omega3: f64,
}

/// Closed-form `d omega/dk`, `d^2 omega/dk^2`, `d^3 omega/dk^3`.
///
/// Fails only where `omega` has a kink: `m = 0` at `k = 0` or `k = ±pi`.
pub fn derivatives(k: f64, p: AutomatonParams) -> Result<Derivatives> {
    let s2 = sin2_omega(k, p);
    if s2 == 0.0 {
        return Err(Error::Singular {
            what: "group velocity",
            k,
            m: p.m(),
        });
    }
    let n = p.n();
    let m2 = p.m() * p.m();
    let (sk, ck) = k.sin_cos();
    let sw = s2.sqrt();
    let v = n * sk / sw;
    let d = n * m2 * ck / (s2 * sw);
    let omega3 = -n * m2 * sk * (1.0 + 2.0 * n * n * ck * ck) / (s2 * s2 * sw);
    Ok(Derivatives { v, d, omega3 })
}

/// One row of the dispersion table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint {
    pub k: f64,
    pub m: f64,
    pub omega: f64,
    pub omega_dirac: f64,
    pub v: f64,
    pub d: f64,
    pub omega3: f64,
}

pub fn dispersion_point(k: f64, p: AutomatonParams) -> Result<DispersionPoint> {
    let der = derivatives(k, p)?;
    Ok(DispersionPoint {
        k,
        m: p.m(),
        omega: omega(k, p),
        omega_dirac: dirac_omega(k, p.m()),
        v: der.v,
        d: der.d,
        omega3: der.omega3,
    })
}

/// Eigenphase `s omega` and unit eigenvector `|s>_k` of `U(k)`.
///
/// The eigenvector is `(sqrt(1 - s v), s sqrt(1 + s v)) / sqrt(2)` with the
/// global phase fixed so that the first nonzero component is real positive.
/// In the degenerate case (`m = 0`, `sin k = 0`) `U(k)` is a multiple of the
/// identity and the canonical basis is returned, `+` taking `(1, 0)`.
pub fn eigenpair(s: Branch, k: f64, p: AutomatonParams) -> (f64, Spinor2) {
    let sign = s.sign();
    let w = omega(k, p);
    let s2 = sin2_omega(k, p);
    if s2 == 0.0 {
        let spinor = match s {
            Branch::Plus => Spinor2::real(1.0, 0.0),
            Branch::Minus => Spinor2::real(0.0, 1.0),
        };
        return (sign * w, spinor);
    }
    let sw = s2.sqrt();
    let v = p.n() * k.sin() / sw;
    let mu = p.m() / sw;
    let x = sign * v;
    // 1 - x and 1 + x, the smaller one through (1 - x)(1 + x) = mu^2
    let (lo, hi) = if x >= 0.0 {
        (mu * mu / (1.0 + x), 1.0 + x)
    } else {
        (1.0 - x, mu * mu / (1.0 - x))
    };
    let a = (0.5 * lo).sqrt();
    let b = sign * (0.5 * hi).sqrt();
    let spinor = if a == 0.0 {
        Spinor2::real(0.0, b.abs())
    } else {
        Spinor2::real(a, b)
    };
    (sign * w, spinor)
}

/// The interpolating Hamiltonian `H(k)` with `exp(-i H(k)) = U(k)`.
pub fn hamiltonian_k(k: f64, p: AutomatonParams) -> Result<Mat2> {
    let s2 = sin2_omega(k, p);
    if s2 == 0.0 {
        // m = 0 and sin k = 0: the limit k -> 0 is the zero matrix, k = ±pi has no limit
        if k.cos() > 0.0 {
            return Ok(Mat2::zero());
        }
        return Err(Error::Singular {
            what: "interpolating Hamiltonian",
            k,
            m: p.m(),
        });
    }
    let factor = omega(k, p) / s2.sqrt();
    let a = factor * p.n() * k.sin();
    let b = factor * p.m();
    Ok(Mat2::real(-a, b, b, a))
}

/// Momentum-space Dirac Hamiltonian `[[-k, m], [m, k]]`.
pub fn dirac_hamiltonian_k(k: f64, m: f64) -> Mat2 {
    Mat2::real(-k, m, m, k)
}

/// Leading-order correction to the Dirac dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionCorrection {
    pub omega_approx: f64,
    /// `omega - omega_approx`
    pub residual: f64,
}

/// `omega_D (1 - (m^2/6)(k^2 - m^2)/(k^2 + m^2))` and its residual against
/// the exact dispersion.
pub fn dispersion_correction(k: f64, p: AutomatonParams) -> Result<DispersionCorrection> {
    let m = p.m();
    let r2 = k * k + m * m;
    if r2 == 0.0 {
        return Err(Error::Singular {
            what: "dispersion correction",
            k,
            m,
        });
    }
    let wd = dirac_omega(k, m);
    let omega_approx = wd * (1.0 - m * m / 6.0 * (k - m) * (k + m) / r2);
    Ok(DispersionCorrection {
        omega_approx,
        residual: omega(k, p) - omega_approx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `k, m << 1`, `k/m >> 1`
    Relativistic,
    /// `k, m << 1`, `k/m << 1`
    NonRelativistic,
}

/// Drift and diffusion expansions with their deviation from the exact values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeSeries {
    pub regime: Regime,
    pub v_leading: f64,
    pub v_series: f64,
    pub d_leading: f64,
    pub d_series: f64,
    pub v_exact: f64,
    pub d_exact: f64,
    /// Relative deviation of `v_series` from `v_exact`.
    pub v_rel_dev: f64,
    pub d_rel_dev: f64,
    /// Whether `(k, m)` sits where the expansion is meant to be used.
    pub in_regime: bool,
}

fn rel_dev(approx: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        (approx - exact).abs()
    } else {
        ((approx - exact) / exact).abs()
    }
}

/// Leading term and first correction of `v` and `D` in the given regime.
pub fn regime_coefficients(k: f64, p: AutomatonParams, regime: Regime) -> Result<RegimeSeries> {
    let m = p.m();
    let exact = derivatives(k, p)?;
    let (v_leading, v_series, d_leading, d_series, in_regime) = match regime {
        Regime::Relativistic => {
            let r2 = k * k + m * m;
            let r = r2.sqrt();
            let v_lead = k / r;
            let v_ser = v_lead * (1.0 - m * m / 3.0 + m * m * k * k / (6.0 * r2));
            let d_lead = m * m / (r2 * r);
            let d_ser = d_lead * (1.0 + m * m * k * k / 3.0 - 0.5 * m * m * k.powi(4) / r2);
            let ok = k.abs() <= 0.1 && m <= 0.1 && k.abs() > m;
            (v_lead, v_ser, d_lead, d_ser, ok)
        }
        Regime::NonRelativistic => {
            if m == 0.0 {
                return Err(Error::param("m", "non-relativistic expansion needs m > 0"));
            }
            let v_lead = k / m;
            let v_ser = v_lead * (1.0 + m * m / 3.0);
            let d_lead = 1.0 / m;
            let d_ser = d_lead * (1.0 + 5.0 / 6.0 * k * k);
            let ok = k.abs() <= 0.1 && m <= 0.1 && k.abs() < m;
            (v_lead, v_ser, d_lead, d_ser, ok)
        }
    };
    Ok(RegimeSeries {
        regime,
        v_leading,
        v_series,
        d_leading,
        d_series,
        v_exact: exact.v,
        d_exact: exact.d,
        v_rel_dev: rel_dev(v_series, exact.v),
        d_rel_dev: rel_dev(d_series, exact.d),
        in_regime,
    })
}

/// `U(k)^t = sum_s e^{-i s omega t} |s><s|` for real `t >= 0`.
pub fn spectral_power(k: f64, p: AutomatonParams, t: f64) -> Mat2 {
    [Branch::Plus, Branch::Minus]
        .iter()
        .map(|&s| {
            let (phase, v) = eigenpair(s, k, p);
            Mat2::outer(&v, &v).scale(C64::from_polar(1.0, -phase * t))
        })
        .fold(Mat2::zero(), |acc, x| acc + x)
}
