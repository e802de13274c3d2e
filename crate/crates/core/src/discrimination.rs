//! Bounds on the optimal discrimination between automaton and Dirac evolution.
//!
//! Per mode, `V(k, t) = U_D^t(k) U^t(k)^dagger` is in SU(2) with eigenvalues
//! `e^{±i mu}`. Writing `alpha = omega_D - omega`, `gamma = omega_D + omega`
//! and `beta = sin^2((theta - theta_D) / 2)`, where `theta` and `theta_D` are
//! the polar angles of the two Hamiltonian directions, one has exactly
//!
//! ```text
//! cos mu = (1 - beta) cos(alpha t) + beta cos(gamma t)
//! ```
//!
//! hence `cos mu >= cos(alpha t) - 2 beta`. The bound chain built on top of
//! this is available with `beta` entering either with unit weight (the
//! weight one) or with weight two (what the identity above supports),
//! selected by [`BoundVariant`].

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, C64};
use crate::params::AutomatonParams;
use crate::spectral::{dirac_gap, dirac_omega, omega, sin2_omega, spectral_power, Branch};

/// Tolerance beyond which a cosine outside `[-1, 1]` is a hard error.
const CLAMP_TOL: f64 = 1e-9;

/// Closed forms of `U^t(k)` and `U_D^t(k)` for real `t >= 0`.
pub fn unitary_pair_t(k: f64, p: AutomatonParams, t: f64) -> Result<(Mat2, Mat2)> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param(
            "t",
            format!("must be finite and nonnegative, got {t}"),
        ));
    }
    let m = p.m();
    let s2 = sin2_omega(k, p);
    let u = if s2 == 0.0 {
        // U(k) is a multiple of the identity; fall back to the canonical basis
        spectral_power(k, p, t)
    } else {
        let w = omega(k, p);
        let c = (w * t).cos();
        let s = (w * t).sin() / s2.sqrt();
        let a = p.n() * k.sin();
        Mat2::new(
            C64::new(c, s * a),
            C64::new(0.0, -s * m),
            C64::new(0.0, -s * m),
            C64::new(c, -s * a),
        )
    };
    let lambda = dirac_omega(k, m);
    let ud = if lambda == 0.0 {
        Mat2::identity()
    } else {
        let c = (lambda * t).cos();
        let s = (lambda * t).sin() / lambda;
        Mat2::new(
            C64::new(c, s * k),
            C64::new(0.0, -s * m),
            C64::new(0.0, -s * m),
            C64::new(c, -s * k),
        )
    };
    Ok((u, ud))
}

/// Relative eigenphase `mu` in `[0, pi]` of `V = U_D^t U^t^dagger`.
///
/// Writing `V = cos(mu) I + i sin(mu) n.sigma`, the angle is taken as
/// `atan2(sin mu, cos mu)` with `cos mu = Re Tr V / 2`; the vector part keeps
/// small angles accurate. A `V` that is not in SU(2) to `1e-9` is an error.
pub fn mu(k: f64, p: AutomatonParams, t: f64) -> Result<f64> {
    let (u, ud) = unitary_pair_t(k, p, t)?;
    let v = ud * u.adjoint();
    let c = 0.5 * v.trace().re;
    let az = 0.5 * (v[(0, 0)] - v[(1, 1)]).im;
    let ax = 0.5 * (v[(0, 1)] + v[(1, 0)]).im;
    let ay = 0.5 * (v[(0, 1)] - v[(1, 0)]).re;
    let s = (ax * ax + ay * ay + az * az).sqrt();
    let r = c * c + s * s;
    if !r.is_finite() || (r - 1.0).abs() > CLAMP_TOL || c.abs() > 1.0 + CLAMP_TOL {
        return Err(Error::Invariant(format!(
            "relative phase: V is not unitary (cos mu = {c}, |V|^2 = {r})"
        )));
    }
    Ok(s.atan2(c))
}

/// `mu` through `sin^2(mu/2) = (1 - beta) sin^2(alpha t/2) + beta sin^2(gamma t/2)`,
/// accurate when `mu` is tiny.
pub fn mu_precise(k: f64, p: AutomatonParams, t: f64) -> Result<f64> {
    let (alpha, beta) = alpha_beta(k, p)?;
    let gamma = dirac_omega(k, p.m()) + omega(k, p);
    let sa = (0.5 * alpha * t).sin();
    let sg = (0.5 * gamma * t).sin();
    let y = (1.0 - beta) * sa * sa + beta * sg * sg;
    Ok(2.0 * y.clamp(0.0, 1.0).sqrt().asin())
}

/// `(alpha, beta)` with `alpha = omega_D - omega` and
/// `beta = (1 - v v_D - sqrt((1 - v^2)(1 - v_D^2))) / 2`.
///
/// `beta` is evaluated as `sin^2((theta - theta_D)/2)`, with
/// `v = cos theta`, `v_D = cos theta_D`, which avoids the cancellation.
pub fn alpha_beta(k: f64, p: AutomatonParams) -> Result<(f64, f64)> {
    let m = p.m();
    if k == 0.0 && m == 0.0 {
        return Err(Error::Singular {
            what: "alpha/beta",
            k,
            m,
        });
    }
    let alpha = dirac_gap(k, p);
    let theta = m.atan2(p.n() * k.sin());
    let theta_d = m.atan2(k);
    let h = (0.5 * (theta - theta_d)).sin();
    Ok((alpha, h * h))
}

/// Samples used to check monotonicity of `alpha` and `beta`.
pub const MONOTONICITY_GRID: usize = 256;

/// `(max |alpha|, max |beta|)` over `k in {0, k_bar}`.
///
/// The two-point maximum relies on `alpha` and `beta` being nondecreasing on
/// `[0, k_bar]`; this is checked on a grid and a violation larger than
/// `1e-10` is an error.
pub fn extremal_alpha_beta(k_bar: f64, p: AutomatonParams) -> Result<(f64, f64)> {
    if !(0.0..PI).contains(&k_bar) {
        return Err(Error::param(
            "k_bar",
            format!("need 0 <= k_bar < pi, got {k_bar}"),
        ));
    }
    if p.m() == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut prev = alpha_beta(0.0, p)?;
    for i in 1..MONOTONICITY_GRID {
        let k = k_bar * i as f64 / (MONOTONICITY_GRID - 1) as f64;
        let cur = alpha_beta(k, p)?;
        if cur.0 < prev.0 - 1e-10 || cur.1 < prev.1 - 1e-10 {
            return Err(Error::Invariant(format!(
                "alpha/beta decrease at k = {k}, m = {}",
                p.m()
            )));
        }
        prev = cur;
    }
    let a0 = alpha_beta(0.0, p)?;
    let a1 = alpha_beta(k_bar, p)?;
    Ok((a0.0.abs().max(a1.0.abs()), a0.1.abs().max(a1.1.abs())))
}

/// Weight of `beta` in the cosine bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundVariant {
    /// `cos mu >= cos(alpha t) - beta`.
    #[default]
    SingleBeta,
    /// `cos mu >= cos(alpha t) - 2 beta`, implied by the exact trace identity.
    DoubleBeta,
}

impl BoundVariant {
    pub fn beta_weight(self) -> f64 {
        match self {
            BoundVariant::SingleBeta => 1.0,
            BoundVariant::DoubleBeta => 2.0,
        }
    }
}

/// `cos mu - (cos(alpha t) - w beta)`; nonnegative when the cosine bound holds.
pub fn cosine_bound_slack(
    k: f64,
    p: AutomatonParams,
    t: f64,
    variant: BoundVariant,
) -> Result<f64> {
    let (alpha, beta) = alpha_beta(k, p)?;
    let (u, ud) = unitary_pair_t(k, p, t)?;
    let cos_mu = 0.5 * (ud * u.adjoint()).trace().re;
    Ok(cos_mu - ((alpha * t).cos() - variant.beta_weight() * beta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationInput {
    pub m: f64,
    pub k_bar: f64,
    pub n_bar: u32,
    pub t: f64,
}

impl DiscriminationInput {
    pub fn new(m: f64, k_bar: f64, n_bar: u32, t: f64) -> Result<Self> {
        AutomatonParams::new(m)?;
        if !(0.0..PI).contains(&k_bar) {
            return Err(Error::param(
                "k_bar",
                format!("need 0 <= k_bar < pi, got {k_bar}"),
            ));
        }
        if n_bar == 0 {
            return Err(Error::param("n_bar", "must be at least 1"));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::param("t", "must be finite and nonnegative"));
        }
        Ok(Self { m, k_bar, n_bar, t })
    }

    pub fn params(&self) -> AutomatonParams {
        AutomatonParams::new(self.m).expect("validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationReport {
    pub variant: BoundVariant,
    pub alpha_bar: f64,
    pub beta_bar: f64,
    /// Largest admissible time; `inf` when `alpha_bar = 0`, `NaN` when the
    /// condition on `beta_bar` fails.
    pub f_limit: f64,
    pub hypotheses_ok: bool,
    pub g: Option<f64>,
    /// `1/2 - sin(g)/2`
    pub pe_lower: Option<f64>,
    pub t_min: Option<f64>,
}

// sin^2(pi / 4N) - w beta / 2, the half-angle form of (1 - cos(pi/2N) - w beta) / 2
fn f_slack(n_bar: u32, weighted_beta: f64) -> f64 {
    let s = (PI / (4.0 * n_bar as f64)).sin();
    s * s - 0.5 * weighted_beta
}

/// `arccos(cos(pi/2N) + w beta) / alpha`.
fn f_limit(alpha_bar: f64, weighted_beta: f64, n_bar: u32) -> f64 {
    let y = f_slack(n_bar, weighted_beta);
    if y < 0.0 {
        return f64::NAN;
    }
    if alpha_bar == 0.0 {
        return f64::INFINITY;
    }
    2.0 * y.sqrt().asin() / alpha_bar
}

/// `N arccos(cos(alpha t) - w beta)` in half-angle form.
fn g_value(alpha_bar: f64, weighted_beta: f64, n_bar: u32, t: f64) -> f64 {
    let s = (0.5 * alpha_bar * t).sin();
    let y = (s * s + 0.5 * weighted_beta).clamp(0.0, 1.0);
    n_bar as f64 * 2.0 * y.sqrt().asin()
}

/// The `p_e` lower bound with `beta` weighted by one.
pub fn pe_lower_bound(input: &DiscriminationInput) -> Result<DiscriminationReport> {
    pe_lower_bound_with(input, BoundVariant::SingleBeta)
}

pub fn pe_lower_bound_with(
    input: &DiscriminationInput,
    variant: BoundVariant,
) -> Result<DiscriminationReport> {
    let p = input.params();
    let (alpha_bar, beta_bar) = extremal_alpha_beta(input.k_bar, p)?;
    let wb = variant.beta_weight() * beta_bar;
    let f = f_limit(alpha_bar, wb, input.n_bar);
    let hypotheses_ok = f_slack(input.n_bar, wb) >= 0.0 && input.t <= f;
    let (g, pe_lower) = if hypotheses_ok {
        let g = g_value(alpha_bar, wb, input.n_bar, input.t);
        (Some(g), Some(0.5 - 0.5 * g.sin()))
    } else {
        (None, None)
    };
    let t_min = if input.m > 0.0 && input.k_bar > 0.0 {
        t_min(input.m, input.k_bar, input.n_bar, variant)?.exact
    } else {
        None
    };
    Ok(DiscriminationReport {
        variant,
        alpha_bar,
        beta_bar,
        f_limit: f,
        hypotheses_ok,
        g,
        pe_lower,
        t_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TMin {
    /// `3 pi / (m^2 k_bar N)`
    pub approx: f64,
    /// Root of `g = pi/2` inside the admissible window, if reachable.
    pub exact: Option<f64>,
}

/// Minimum time for perfect discrimination.
pub fn t_min(m: f64, k_bar: f64, n_bar: u32, variant: BoundVariant) -> Result<TMin> {
    let input = DiscriminationInput::new(m, k_bar, n_bar, 0.0)?;
    if !(m > 0.0 && k_bar > 0.0) {
        return Err(Error::param("m, k_bar", "both must be positive"));
    }
    let approx = 3.0 * PI / (m * m * k_bar * n_bar as f64);
    let (alpha_bar, beta_bar) = extremal_alpha_beta(k_bar, input.params())?;
    let wb = variant.beta_weight() * beta_bar;
    let f = f_limit(alpha_bar, wb, n_bar);
    let exact = if f.is_finite() {
        let g = |t: f64| g_value(alpha_bar, wb, n_bar, t) - FRAC_PI_2;
        if g(0.0) > 0.0 {
            Some(0.0)
        } else if g(f) < -1e-12 {
            None
        } else {
            let (mut lo, mut hi) = (0.0, f);
            while hi - lo > 1e-12 * hi {
                let mid = 0.5 * (lo + hi);
                if g(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(0.5 * (lo + hi))
        }
    } else {
        None
    };
    Ok(TMin { approx, exact })
}

/// Momenta and branch labels of an `N`-particle configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiParticleSpec {
    momenta: Vec<f64>,
    branches: Vec<Branch>,
}

impl MultiParticleSpec {
    pub fn new(momenta: Vec<f64>, branches: Vec<Branch>) -> Result<Self> {
        if momenta.len() != branches.len() {
            return Err(Error::LengthMismatch(momenta.len(), branches.len()));
        }
        if momenta.is_empty() {
            return Err(Error::param("N", "need at least one particle"));
        }
        Ok(Self { momenta, branches })
    }

    pub fn n(&self) -> usize {
        self.momenta.len()
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// `sum_i s_i mu(k_i, m, t)`, the eigenphase of `V` on this configuration.
    pub fn relative_phase(&self, p: AutomatonParams, t: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (&k, s) in self.momenta.iter().zip(&self.branches) {
            acc += s.sign() * mu(k, p, t)?;
        }
        Ok(acc)
    }
}

/// `omega(N, k, s) = sum_i s_i omega(k_i, m)`.
pub fn multiparticle_phase(spec: &MultiParticleSpec, p: AutomatonParams) -> f64 {
    spec.momenta
        .iter()
        .zip(&spec.branches)
        .map(|(&k, s)| s.sign() * omega(k, p))
        .sum()
}

/// Outcome of sampling pure states from the restricted set.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub variant: BoundVariant,
    pub samples: usize,
    pub workers: usize,
    pub seed: u64,
    /// `sqrt(1 - cos^2 g)`
    pub bound: f64,
    pub max_observed: f64,
    pub mean_observed: f64,
    /// Samples exceeding `bound + 1e-9`.
    pub violations: usize,
}

impl MonteCarloReport {
    pub fn excess(&self) -> f64 {
        self.max_observed - self.bound
    }
}

/// Largest number of eigenphase configurations superposed in one sample.
pub const MAX_COMPONENTS: usize = 4;

fn sample_value(
    rng: &mut ChaCha8Rng,
    input: &DiscriminationInput,
    p: AutomatonParams,
) -> Result<f64> {
    let components = rng.random_range(1..=MAX_COMPONENTS);
    let mut weights = Vec::with_capacity(components);
    let mut phases = Vec::with_capacity(components);
    for _ in 0..components {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        weights.push(a * a + b * b);
        let n = rng.random_range(1..=input.n_bar as usize);
        let mut momenta = Vec::with_capacity(n);
        let mut branches = Vec::with_capacity(n);
        for _ in 0..n {
            let k = if input.k_bar > 0.0 {
                rng.random_range(-input.k_bar..=input.k_bar)
            } else {
                0.0
            };
            momenta.push(k);
            branches.push(if rng.random_bool(0.5) {
                Branch::Plus
            } else {
                Branch::Minus
            });
        }
        phases.push(MultiParticleSpec::new(momenta, branches)?.relative_phase(p, input.t)?);
    }
    Ok(pure_state_trace_distance(&weights, &phases))
}

/// `sqrt(1 - |sum_i p_i e^{i phi_i}|^2)` for weights `p_i` (normalized here).
///
/// Evaluated as `sqrt(sum_ij p_i p_j 2 sin^2((phi_i - phi_j)/2))`, which stays
/// accurate when the overlap is close to one.
pub fn pure_state_trace_distance(weights: &[f64], phases: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    for (i, (&wi, &pi)) in weights.iter().zip(phases).enumerate() {
        for (&wj, &pj) in weights[..i].iter().zip(phases) {
            let h = (0.5 * (pi - pj)).sin();
            acc += 4.0 * wi * wj * h * h;
        }
    }
    (acc / (total * total)).max(0.0).sqrt()
}

/// Samples the trace distance `sqrt(1 - |<chi|V|chi>|^2)` over random pure
/// states and compares it to `sqrt(1 - cos^2 g)`.
///
/// Worker `w` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `w` and
/// handles a contiguous block of samples, so the report depends only on
/// `(seed, workers)`.
pub fn montecarlo_survey(
    input: &DiscriminationInput,
    variant: BoundVariant,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<MonteCarloReport> {
    if workers == 0 {
        return Err(Error::param("workers", "must be at least 1"));
    }
    let report = pe_lower_bound_with(input, variant)?;
    let g = match report.g {
        Some(g) => g,
        None => {
            return Err(Error::param(
                "t",
                "bound hypotheses do not hold for this input",
            ))
        }
    };
    let bound = g.sin();
    let p = input.params();
    let per_worker: Vec<Result<Vec<f64>>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let lo = samples * w / workers;
            let hi = samples * (w + 1) / workers;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            (lo..hi).map(|_| sample_value(&mut rng, input, p)).collect()
        })
        .collect();
    let mut values = Vec::with_capacity(samples);
    for r in per_worker {
        values.extend(r?);
    }
    let max_observed = values.iter().cloned().fold(0.0, f64::max);
    let mean_observed = if values.is_empty() {
        0.0
    } else {
        crate::sum::pairwise(&values) / values.len() as f64
    };
    let violations = values.iter().filter(|&&x| x > bound + 1e-9).count();
    Ok(MonteCarloReport {
        variant,
        samples,
        workers,
        seed,
        bound,
        max_observed,
        mean_observed,
        violations,
    })
}

/// As [`montecarlo_survey`], but any sample above the bound is an error.
pub fn validate_bound_montecarlo(
    input: &DiscriminationInput,
    variant: BoundVariant,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<MonteCarloReport> {
    let report = montecarlo_survey(input, variant, samples, seed, workers)?;
    if report.violations > 0 {
        return Err(Error::Invariant(format!(
            "{} of {} samples exceed the trace-distance bound {} (max {})",
            report.violations, report.samples, report.bound, report.max_observed
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::unitary_k;
    use proptest::prelude::*;

    fn p(m: f64) -> AutomatonParams {
        AutomatonParams::new(m).unwrap()
    }

    #[test]
    fn pair_trivial_cases() {
        let (u, ud) = unitary_pair_t(0.7, p(0.3), 0.0).unwrap();
        assert!(u.max_abs_diff(&Mat2::identity()) < 1e-16);
        assert!(ud.max_abs_diff(&Mat2::identity()) < 1e-16);
        for &(k, t) in &[(0.4, 3.3), (-2.0, 10.0), (1e-3, 0.5)] {
            let (u, ud) = unitary_pair_t(k, p(0.0), t).unwrap();
            assert!(u.max_abs_diff(&ud) < 1e-12);
        }
        assert!(unitary_pair_t(0.1, p(0.1), -1.0).is_err());
    }

    #[test]
    fn pair_matches_integer_powers_and_spectral_route() {
        let (u, ud) = unitary_pair_t(0.3, p(0.6), 5.0).unwrap();
        assert!(u.max_abs_diff(&unitary_k(p(0.6), 0.3).powi(5)) < 1e-12);
        assert!(u.unitarity_residual() < 1e-12 && ud.unitarity_residual() < 1e-12);
        for &t in &[0.3, 2.5, 41.7] {
            let (u, _) = unitary_pair_t(-1.3, p(0.45), t).unwrap();
            assert!(u.max_abs_diff(&spectral_power(-1.3, p(0.45), t)) < 1e-12);
        }
    }

    #[test]
    fn mu_trivial_cases() {
        assert_eq!(mu(0.4, p(0.6), 0.0).unwrap(), 0.0);
        for &(k, t) in &[(0.4, 3.0), (2.0, 11.0)] {
            assert!(mu(k, p(0.0), t).unwrap() < 1e-14);
        }
    }

    #[test]
    fn trace_identity_has_unit_weight_on_beta() {
        for &(k, m, t) in &[
            (0.5, 0.6, 3.0),
            (0.3, 0.8, 2.0),
            (-1.1, 0.2, 7.5),
            (2.9, 0.95, 1.0),
        ] {
            let a = mu(k, p(m), t).unwrap();
            let b = mu_precise(k, p(m), t).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn cosine_bound_example() {
        // direct evaluation at (0.5, 0.6, 3)
        let s = cosine_bound_slack(0.5, p(0.6), 3.0, BoundVariant::SingleBeta).unwrap();
        let e = cosine_bound_slack(0.5, p(0.6), 3.0, BoundVariant::DoubleBeta).unwrap();
        assert!(e >= -1e-12);
        assert!((e - s - alpha_beta(0.5, p(0.6)).unwrap().1).abs() < 1e-15);
    }

    #[test]
    fn alpha_beta_examples() {
        for &k in &[0.1, 1.0, 3.0] {
            assert_eq!(alpha_beta(k, p(0.0)).unwrap(), (0.0, 0.0));
        }
        let (a, b) = alpha_beta(0.0, p(0.6)).unwrap();
        assert!((a - (0.6 - 0.6f64.asin())).abs() < 1e-15);
        assert_eq!(b, 0.0);
        let (a, b) = alpha_beta(0.5, p(0.6)).unwrap();
        // alpha is negative here: omega exceeds omega_D at this point
        assert!((a + 0.011_476_696_887).abs() < 1e-11, "{a}");
        assert!(b > 0.0);
        assert!(alpha_beta(0.0, p(0.0)).is_err());
    }

    #[test]
    fn beta_matches_velocity_formula() {
        for &(k, m) in &[(0.5, 0.6), (1.3, 0.2), (2.0, 0.9), (-0.7, 0.4)] {
            let pm = p(m);
            let d = crate::spectral::derivatives(k, pm).unwrap();
            let vd = crate::spectral::dirac_velocity(k, m);
            let direct = 0.5 * (1.0 - d.v * vd - ((1.0 - d.v * d.v) * (1.0 - vd * vd)).sqrt());
            let (_, b) = alpha_beta(k, pm).unwrap();
            assert!((b - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn extremal_examples() {
        assert_eq!(extremal_alpha_beta(1.0, p(0.0)).unwrap(), (0.0, 0.0));
        let (a, b) = extremal_alpha_beta(0.0, p(0.6)).unwrap();
        assert!((a - (0.6 - 0.6f64.asin()).abs()).abs() < 1e-15 && b == 0.0);
        assert!(extremal_alpha_beta(PI, p(0.6)).is_err());
    }

    #[test]
    fn bound_trivial_cases() {
        let r = pe_lower_bound(&DiscriminationInput::new(0.0, 1.0, 2, 50.0).unwrap()).unwrap();
        assert_eq!(r.g, Some(0.0));
        assert_eq!(r.pe_lower, Some(0.5));
        let r = pe_lower_bound(&DiscriminationInput::new(0.6, 0.0, 1, 0.0).unwrap()).unwrap();
        assert_eq!(r.beta_bar, 0.0);
        assert_eq!(r.g, Some(0.0));
        assert_eq!(r.pe_lower, Some(0.5));
    }

    #[test]
    fn bound_outside_hypotheses() {
        let r = pe_lower_bound(&DiscriminationInput::new(0.3, 0.8, 2, 1e9).unwrap()).unwrap();
        assert!(!r.hypotheses_ok && r.g.is_none() && r.pe_lower.is_none());
    }

    #[test]
    fn g_half_angle_form_matches_arccos() {
        for &(a, b, n, t) in &[(0.01f64, 1e-3, 2u32, 30.0f64), (0.2, 0.05, 1, 3.0)] {
            let direct = n as f64 * ((a * t).cos() - b).acos();
            assert!((g_value(a, b, n, t) - direct).abs() < 1e-12);
            let f_direct = ((PI / (2.0 * n as f64)).cos() + b).acos() / a;
            assert!((f_limit(a, b, n) - f_direct).abs() < 1e-9 * f_direct);
        }
    }

    #[test]
    fn t_min_scaling_and_closed_form() {
        let a = t_min(0.1, 0.5, 1, BoundVariant::SingleBeta).unwrap();
        let b = t_min(0.1, 0.5, 2, BoundVariant::SingleBeta).unwrap();
        assert!((a.approx / b.approx - 2.0).abs() < 1e-15);
        let exact = a.exact.unwrap();
        assert!(
            ((exact - a.approx) / a.approx).abs() < 0.2,
            "{exact} vs {}",
            a.approx
        );
        // the root sits on the right end of the admissible window
        let (ab, bb) = extremal_alpha_beta(0.5, p(0.1)).unwrap();
        let f = f_limit(ab, bb, 1);
        assert!(((exact - f) / f).abs() < 1e-9);
        assert!(t_min(0.0, 0.5, 1, BoundVariant::SingleBeta).is_err());
    }

    #[test]
    fn multiparticle_examples() {
        let s = MultiParticleSpec::new(vec![0.7], vec![Branch::Minus]).unwrap();
        assert_eq!(multiparticle_phase(&s, p(0.4)), -omega(0.7, p(0.4)));
        let s = MultiParticleSpec::new(vec![0.7, 0.7], vec![Branch::Plus, Branch::Minus]).unwrap();
        assert_eq!(multiparticle_phase(&s, p(0.4)), 0.0);
        assert!(MultiParticleSpec::new(vec![0.1], vec![]).is_err());
        let ks = vec![0.3, -1.2, 2.2];
        let bs = vec![Branch::Plus, Branch::Minus, Branch::Plus];
        let s = MultiParticleSpec::new(ks.clone(), bs.clone()).unwrap();
        let brute = omega(ks[0], p(0.4)) - omega(ks[1], p(0.4)) + omega(ks[2], p(0.4));
        assert!((multiparticle_phase(&s, p(0.4)) - brute).abs() < 1e-14);
    }

    #[test]
    fn montecarlo_massless_is_zero() {
        let input = DiscriminationInput::new(0.0, 0.8, 2, 10.0).unwrap();
        let r = validate_bound_montecarlo(&input, BoundVariant::SingleBeta, 500, 1, 3);
        let r = r.unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(r.bound, 0.0);
        assert!(r.max_observed < 1e-12);
    }

    #[test]
    fn balanced_single_mode_value() {
        let m = mu(0.4, p(0.3), 5.0).unwrap();
        let d = pure_state_trace_distance(&[0.5, 0.5], &[m, -m]);
        assert!((d - m.sin()).abs() < 1e-15);
        assert_eq!(pure_state_trace_distance(&[0.3], &[1.0]), 0.0);
        // direct evaluation for an unbalanced pair
        let z = C64::from_polar(0.25, 0.7) + C64::from_polar(0.75, -0.2);
        let d = pure_state_trace_distance(&[1.0, 3.0], &[0.7, -0.2]);
        assert!((d - (1.0 - z.norm_sqr()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn montecarlo_single_mode_stays_below_sin_mu() {
        let input = DiscriminationInput::new(0.3, 0.0, 1, 5.0).unwrap();
        let r = montecarlo_survey(&input, BoundVariant::DoubleBeta, 200, 9, 2).unwrap();
        let cap = mu(0.0, p(0.3), 5.0).unwrap().sin();
        assert!(r.max_observed <= cap + 1e-15);
        assert!(r.max_observed > 0.9 * cap);
    }

    #[test]
    fn montecarlo_is_reproducible() {
        let input = DiscriminationInput::new(0.3, 0.8, 2, 5.0).unwrap();
        let a = montecarlo_survey(&input, BoundVariant::DoubleBeta, 400, 42, 4).unwrap();
        let b = montecarlo_survey(&input, BoundVariant::DoubleBeta, 400, 42, 4).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn cosine_bound_with_trace_weight(k in -3.1f64..3.1, m in 0.0f64..=1.0, t in 0.0f64..50.0) {
            prop_assume!(k != 0.0 || m != 0.0);
            prop_assert!(cosine_bound_slack(k, p(m), t, BoundVariant::DoubleBeta).unwrap() >= -1e-10);
        }

        #[test]
        fn mu_is_even(k in 0.0f64..3.1, m in 0.0f64..=1.0, t in 0.0f64..50.0) {
            let a = mu(k, p(m), t).unwrap();
            let b = mu(-k, p(m), t).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn signed_alpha_beta_nondecreasing(m in 0.01f64..=1.0, k in 0.0f64..3.0, dk in 0.0f64..0.1) {
            let a = alpha_beta(k, p(m)).unwrap();
            let b = alpha_beta(k + dk, p(m)).unwrap();
            prop_assert!(b.0 >= a.0 - 1e-10 && b.1 >= a.1 - 1e-10);
        }

        #[test]
        fn pe_lower_in_range(m in 0.0f64..=1.0, kb in 0.0f64..3.0, n in 1u32..4, t in 0.0f64..100.0) {
            let r = pe_lower_bound(&DiscriminationInput::new(m, kb, n, t).unwrap()).unwrap();
            if let Some(pe) = r.pe_lower {
                prop_assert!((0.0..=0.5).contains(&pe));
                prop_assert!((0.0..=FRAC_PI_2 + 1e-12).contains(&r.g.unwrap()));
            }
        }
    }
}
