//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use qca_core::discrimination::MONOTONICITY_GRID;
use qca_core::{
    accuracy_bound, alpha_beta, cosine_bound_slack, derivatives, dirac_omega,
    dispersion_correction, evolve_momentum, evolve_position, extremal_alpha_beta, fidelity,
    fig4_hermite_coeffs, localized, montecarlo_survey, mu, omega, pe_lower_bound,
    pe_lower_bound_with, schrodinger_evolve, separation_time, symmetry_check, t_min, transform,
    ApproxEvolutionParams, AutomatonParams, BoundVariant, Branch, DiscriminationInput,
    FlytimeInput, Spinor2, WavepacketSpec, PLANCK_TIME_S,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn p(m: f64) -> AutomatonParams {
    AutomatonParams::new(m).unwrap()
}

fn argmax(xs: &[f64]) -> usize {
    (0..xs.len())
        .max_by(|&a, &b| xs[a].total_cmp(&xs[b]))
        .unwrap()
}

fn mean_position(density: &[f64]) -> f64 {
    let total: f64 = density.iter().sum();
    density
        .iter()
        .enumerate()
        .map(|(x, d)| x as f64 * d)
        .sum::<f64>()
        / total
}

fn c1_drift() -> Outcome {
    let v = derivatives(3.0 * PI / 10.0, p(0.6)).unwrap().v;
    Outcome {
        pass: (v - 0.73).abs() <= 0.005,
        detail: format!("v = {v:.6} (target 0.73 +- 0.005)"),
    }
}

fn c2_fig4() -> Outcome {
    let m = 0.6;
    let k0 = 3.0 * PI / 10.0;
    let sigma_hat = 20.0;
    let len = 1024;
    let spec = WavepacketSpec::hermite(k0, sigma_hat, 256.0, Branch::Plus, fig4_hermite_coeffs());
    let st = spec.build(p(m), len).unwrap();
    let v = derivatives(k0, p(m)).unwrap().v;
    let ap = ApproxEvolutionParams::new(k0, p(m), Branch::Plus).unwrap();
    let peak0 = argmax(&st.field.density()) as f64;
    let mean0 = mean_position(&st.field.density());
    let sigma = 3.0 / sigma_hat;

    let mut pass = true;
    let mut parts = Vec::new();
    let mut fid = std::collections::BTreeMap::new();
    for &t in &[100.0, 200.0, 600.0] {
        let exact = evolve_momentum(&st.spectrum, p(m), t).unwrap();
        let approx = schrodinger_evolve(&st.spectrum, &ap, t).unwrap();
        let f = fidelity(&exact, &approx).unwrap();
        fid.insert(t as u64, f);
        if t > 200.0 {
            continue;
        }
        let density = exact.inverse().density();
        let shift = argmax(&density) as f64 - peak0;
        let mean_shift = mean_position(&density) - mean0;
        let bound = accuracy_bound(&st.spectrum, p(m), k0, sigma, t).unwrap();
        let ok_a = (shift - v * t).abs() <= 3.0;
        let ok_b = f >= bound.bound;
        pass &= ok_a && ok_b;
        parts.push(format!(
            "t={t}: peak shift {shift} vs v t = {:.2} [{}], mean shift {mean_shift:.2}, fidelity {f:.6} >= bound {:.6} [{}]",
            v * t,
            if ok_a { "ok" } else { "FAIL" },
            bound.bound,
            if ok_b { "ok" } else { "FAIL" },
        ));
    }
    let ok_c = fid[&600] < fid[&200];
    pass &= ok_c;
    parts.push(format!(
        "fidelity(600) = {:.6} < fidelity(200) = {:.6} [{}]",
        fid[&600],
        fid[&200],
        if ok_c { "ok" } else { "FAIL" }
    ));
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c3_light_cone() -> Outcome {
    let len = 128usize;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let f = localized(30, Spinor2::real(h, h), len).unwrap();
    let mut worst_norm: f64 = 0.0;
    let mut leaks = 0usize;
    for t in 0..=60u64 {
        let g = evolve_position(&f, p(0.92), t);
        worst_norm = worst_norm.max((g.norm_sqr() - 1.0).abs());
        for (x, s) in g.sites().iter().enumerate() {
            let d = (x as i64 - 30).rem_euclid(len as i64);
            let dist = d.min(len as i64 - d) as u64;
            if dist > t && s.norm_sqr() != 0.0 {
                leaks += 1;
            }
        }
    }
    Outcome {
        pass: leaks == 0 && worst_norm <= 1e-10,
        detail: format!(
            "nonzero amplitudes outside the cone: {leaks}; max |norm - 1| = {worst_norm:.2e}"
        ),
    }
}

fn c4_overlap() -> Outcome {
    let ks: Vec<f64> = (0..=200).map(|i| -0.1 + 0.001 * i as f64).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for &m in &[0.3, 0.6, 0.9] {
        let mut worst_ratio: f64 = 0.0;
        let mut at = 0.0;
        for &k in &ks {
            let wd = dirac_omega(k, m);
            let ratio = (omega(k, p(m)) - wd).abs() / (m * m * wd);
            if ratio > worst_ratio {
                worst_ratio = ratio;
                at = k;
            }
        }
        let ok = worst_ratio <= 0.2;
        pass &= ok;
        parts.push(format!(
            "m={m}: max |w - w_D| / (m^2 w_D) = {worst_ratio:.4} at k={at:.3} [{}]",
            if ok { "ok" } else { "FAIL" }
        ));
    }
    let weyl = ks
        .iter()
        .map(|&k| (omega(k, p(0.0)) - dirac_omega(k, 0.0)).abs())
        .fold(0.0, f64::max);
    let ok = weyl <= 1e-14;
    pass &= ok;
    parts.push(format!(
        "m=0: max |w - w_D| = {weyl:.1e} [{}]",
        if ok { "ok" } else { "FAIL" }
    ));
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c5_order() -> Outcome {
    let res: Vec<f64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|&l| {
            dispersion_correction(0.2 * l, p(0.1 * l))
                .unwrap()
                .residual
                .abs()
        })
        .collect();
    let r1 = res[0] / res[1];
    let r2 = res[1] / res[2];
    Outcome {
        pass: r1 >= 16.0 && r2 >= 16.0,
        detail: format!("halving ratios {r1:.3}, {r2:.3} (need >= 16)"),
    }
}

fn c6_tmin() -> Outcome {
    let tm = t_min(1e-19, 1e-8, 1, BoundVariant::SingleBeta).unwrap();
    let target = 3.0 * PI * 1e46;
    let rel = (tm.approx - target).abs() / target;
    let secs = tm.approx * PLANCK_TIME_S;
    Outcome {
        pass: rel <= 1e-12 && (1e3..=1e4).contains(&secs),
        detail: format!(
            "t_min = {:.6e} Planck times (rel. dev. {rel:.1e} from 3 pi 1e46) = {secs:.1} s; root-solved {:.6e}",
            tm.approx,
            tm.exact.unwrap_or(f64::NAN)
        ),
    }
}

fn c7_flytime() -> Outcome {
    let (_, tr) = separation_time(&FlytimeInput::new(1e-19, 1e-8, 1e22).unwrap());
    let rel = (tr - 6e60).abs() / 6e60;
    let secs = tr * PLANCK_TIME_S;
    let factor = (secs / 1e17).max(1e17 / secs);
    Outcome {
        pass: rel <= 1e-12 && factor <= 10.0,
        detail: format!(
            "t_rel = {tr:.6e} Planck times = {secs:.3e} s (factor {factor:.2} from 1e17)"
        ),
    }
}

// cosine bound slack on a 32 x 8 x 16 (k, m, t) grid
fn cosine_bound_min(variant: BoundVariant) -> (f64, (f64, f64, f64)) {
    let mut worst = f64::INFINITY;
    let mut worst_at = (0.0, 0.0, 0.0);
    for i in 0..32 {
        let k = -PI + (i as f64 + 0.5) * 2.0 * PI / 32.0;
        for j in 0..8 {
            let m = (j as f64 + 1.0) / 8.0;
            for l in 0..16 {
                let t = (l + 1) as f64;
                let s = cosine_bound_slack(k, p(m), t, variant).unwrap();
                if s < worst {
                    worst = s;
                    worst_at = (k, m, t);
                }
            }
        }
    }
    (worst, worst_at)
}

// sandwich N mu <= g <= pi/2 wherever its hypotheses hold
fn sandwich_min(variant: BoundVariant) -> (f64, f64, (f64, f64, u32, f64)) {
    let mut worst_lo = f64::INFINITY;
    let mut worst_hi = f64::INFINITY;
    let mut worst_at = (0.0, 0.0, 0u32, 0.0);
    for &m in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        for &kb in &[0.2, 0.5, 0.8, 1.0] {
            for n in 1..=2u32 {
                let input = DiscriminationInput::new(m, kb, n, 0.0).unwrap();
                let base = pe_lower_bound_with(&input, variant).unwrap();
                if !base.f_limit.is_finite() {
                    continue;
                }
                for l in 1..=8 {
                    let t = base.f_limit * l as f64 / 8.0;
                    let input = DiscriminationInput::new(m, kb, n, t).unwrap();
                    let r = pe_lower_bound_with(&input, variant).unwrap();
                    let g = match r.g {
                        Some(g) => g,
                        None => continue,
                    };
                    worst_hi = worst_hi.min(PI / 2.0 - g);
                    for i in 0..32 {
                        let k = kb * i as f64 / 31.0;
                        let s = g - n as f64 * mu(k, p(m), t).unwrap();
                        if s < worst_lo {
                            worst_lo = s;
                            worst_at = (k, m, n, t);
                        }
                    }
                }
            }
        }
    }
    (worst_lo, worst_hi, worst_at)
}

fn c8_bounds() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;

    let (worst, worst_at) = cosine_bound_min(BoundVariant::SingleBeta);
    let ok = worst >= -1e-10;
    pass &= ok;
    parts.push(format!(
        "cosine bound min slack {worst:.3e} at (k={:.3}, m={:.3}, t={}) [{}]",
        worst_at.0,
        worst_at.1,
        worst_at.2,
        if ok { "ok" } else { "FAIL" }
    ));

    // monotonicity: |alpha|, |beta| nondecreasing on [0, pi - 1e-3], so the
    // maxima over [0, k_bar] sit at {0, k_bar}
    let mut worst = 0.0f64;
    let mut abs_drop = 0.0f64;
    let mut abs_drop_at = (0.0, 0.0);
    let mut signed = true;
    for j in 1..=9 {
        let m = j as f64 / 10.0;
        let k_bar = PI - 1e-3;
        signed &= extremal_alpha_beta(k_bar, p(m)).is_ok();
        let mut prev = alpha_beta(0.0, p(m)).unwrap();
        for i in 1..MONOTONICITY_GRID {
            let k = k_bar * i as f64 / (MONOTONICITY_GRID - 1) as f64;
            let cur = alpha_beta(k, p(m)).unwrap();
            let drop = (prev.0.abs() - cur.0.abs()).max(prev.1.abs() - cur.1.abs());
            if drop > abs_drop {
                abs_drop = drop;
                abs_drop_at = (k, m);
            }
            prev = cur;
        }
        for &kb in &[0.25, 0.5, 1.0, 2.0, k_bar] {
            let (ab, bb) = extremal_alpha_beta(kb, p(m)).unwrap_or((f64::NAN, f64::NAN));
            let (mut ga, mut gb) = (0.0f64, 0.0f64);
            for i in 0..MONOTONICITY_GRID {
                let k = kb * i as f64 / (MONOTONICITY_GRID - 1) as f64;
                let (a, b) = alpha_beta(k, p(m)).unwrap();
                ga = ga.max(a.abs());
                gb = gb.max(b.abs());
            }
            worst = worst.max((ga - ab).abs()).max((gb - bb).abs());
        }
    }
    let ok = abs_drop <= 1e-10 && worst <= 1e-10;
    pass &= ok;
    parts.push(format!(
        "monotonicity: max decrease of |alpha|, |beta| {abs_drop:.3e} at (k={:.3}, m={}), signed alpha, beta {}, grid max vs endpoint max {worst:.1e} [{}]",
        abs_drop_at.0,
        abs_drop_at.1,
        if signed { "nondecreasing" } else { "not monotone" },
        if ok { "ok" } else { "FAIL" }
    ));

    let (worst_lo, worst_hi, worst_at) = sandwich_min(BoundVariant::SingleBeta);
    let ok = worst_lo >= -1e-10 && worst_hi >= -1e-10;
    pass &= ok;
    parts.push(format!(
        "sandwich min(g - N mu) = {worst_lo:.3e} at (k={:.3}, m={}, N={}, t={:.3}), min(pi/2 - g) = {worst_hi:.1e} [{}]",
        worst_at.0,
        worst_at.1,
        worst_at.2,
        worst_at.3,
        if ok { "ok" } else { "FAIL" }
    ));

    // Monte Carlo: N_bar <= 2, 1e4 samples, seed 42
    for n in 1..=2u32 {
        let base = pe_lower_bound(&DiscriminationInput::new(0.3, 0.8, n, 0.0).unwrap()).unwrap();
        let t = 0.5 * base.f_limit;
        let input = DiscriminationInput::new(0.3, 0.8, n, t).unwrap();
        let r = montecarlo_survey(&input, BoundVariant::SingleBeta, 10_000, 42, 4).unwrap();
        let ok = r.violations == 0;
        pass &= ok;
        parts.push(format!(
            "Monte Carlo (m=0.3, k_bar=0.8, N_bar={n}, t={t:.2}): max {:.6} vs bound {:.6}, {} violations [{}]",
            r.max_observed,
            r.bound,
            r.violations,
            if ok { "ok" } else { "FAIL" }
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c9_backends() -> Outcome {
    let len = 256;
    let mut worst = 0.0f64;
    for &m in &[0.0, 0.6, 1.0] {
        let spec = WavepacketSpec::gaussian(0.3 * PI, 10.0, 128.0, Branch::Plus);
        let st = spec.build(p(m), len).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let loc = localized(30, Spinor2::real(h, h), len).unwrap();
        for f in [&st.field, &loc] {
            let a = evolve_position(f, p(m), 100);
            let b = evolve_momentum(&transform(f), p(m), 100.0).unwrap();
            worst = worst
                .max(a.max_abs_diff(&b.inverse()).unwrap())
                .max(transform(&a).max_abs_diff(&b).unwrap());
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max per-amplitude difference {worst:.2e} (L=256, t=100, m in 0, 0.6, 1)"),
    }
}

fn c10_symmetry() -> Outcome {
    let ks: Vec<f64> = (0..64).map(|j| -PI + 2.0 * PI * j as f64 / 64.0).collect();
    let worst = (0..32)
        .map(|i| symmetry_check(p(i as f64 / 31.0), &ks).max_residual())
        .fold(0.0, f64::max);
    Outcome {
        pass: worst <= 1e-14,
        detail: format!("max residual {worst:.2e} on a 32 x 64 (m, k) grid"),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("drift coefficient", c1_drift),
        ("drift-diffusion reproduction", c2_fig4),
        ("light cone", c3_light_cone),
        ("dispersion overlap", c4_overlap),
        ("correction order", c5_order),
        ("discrimination headline", c6_tmin),
        ("flying time headline", c7_flytime),
        ("discrimination bound suite", c8_bounds),
        ("backend equivalence", c9_backends),
        ("symmetry suite", c10_symmetry),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({secs:.2} s) {}",
            i + 1,
            name,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    let d = derivatives(3.0 * PI / 10.0, p(0.6)).unwrap().d;
    println!(
        "note: diffusion at k0 = 3pi/10, m = 0.6 is D = {d:.4}; the reference value 0.31 is not a target"
    );
    let (l1, _) = cosine_bound_min(BoundVariant::DoubleBeta);
    let (l3, l3_hi, _) = sandwich_min(BoundVariant::DoubleBeta);
    println!(
        "note: with beta weighted by 2 (exact trace identity) cosine bound min slack is {l1:.3e}, sandwich min(g - N mu) is {l3:.3e} and min(pi/2 - g) is {l3_hi:.1e}"
    );
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
