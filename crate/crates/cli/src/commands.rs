use std::f64::consts::PI;

use serde_json::{json, Value as Json};

use qca_core::{
    accuracy_bound, dirac_omega, dispersion_point, evolve_momentum, evolve_position, fidelity,
    localized, montecarlo_survey, omega, pe_lower_bound_with, planck_to_seconds,
    schrodinger_evolve, symmetry_check, t_min, transform, visibility_report, ApproxEvolutionParams,
    AutomatonParams, BoundVariant, Branch, DiscriminationInput, FlytimeInput, ModeSpectrum,
    PhaseConvention, Spinor2, SpinorField, WavepacketSpec,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{fmt_f64, num, opt_num, Csv, Sink};
use crate::svg::{Plot, Series};

/// What a command hands back for the JSON document.
pub struct Report {
    pub results: Json,
    pub warnings: Vec<String>,
    /// Set when a numerical invariant failed; the document is still written.
    pub failure: Option<String>,
}

impl Report {
    fn ok(results: Json, warnings: Vec<String>) -> Self {
        Self {
            results,
            warnings,
            failure: None,
        }
    }
}

pub fn execute(cfg: &RunConfig, sink: &mut Sink) -> Result<Report, CliError> {
    match cfg.command {
        "dispersion" => dispersion(cfg, sink),
        "evolve" => evolve(cfg, sink),
        "compare" => compare(cfg, sink),
        "discriminate" => discriminate(cfg),
        "flytime" => flytime(cfg, sink),
        "validate-bound" => validate_bound(cfg),
        "symcheck" => symcheck(cfg, sink),
        other => Err(CliError::usage(format!("unknown command `{other}`"))),
    }
}

fn params(m: f64) -> Result<AutomatonParams, CliError> {
    Ok(AutomatonParams::new(m)?)
}

fn branch(cfg: &RunConfig) -> Result<Branch, CliError> {
    match cfg.str("branch")? {
        "plus" | "+" | "+1" => Ok(Branch::Plus),
        "minus" | "-" | "-1" => Ok(Branch::Minus),
        other => Err(CliError::usage(format!(
            "branch must be plus or minus, got `{other}`"
        ))),
    }
}

fn variant(cfg: &RunConfig) -> Result<BoundVariant, CliError> {
    match cfg.str("variant")? {
        "single-beta" => Ok(BoundVariant::SingleBeta),
        "double-beta" => Ok(BoundVariant::DoubleBeta),
        other => Err(CliError::usage(format!(
            "variant must be single-beta or double-beta, got `{other}`"
        ))),
    }
}

fn variant_name(v: BoundVariant) -> &'static str {
    match v {
        BoundVariant::SingleBeta => "single-beta",
        BoundVariant::DoubleBeta => "double-beta",
    }
}

fn times(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let ts = cfg.reals("times")?;
    if ts.is_empty() {
        return Err(CliError::usage("`times` is empty"));
    }
    if let Some(t) = ts.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(CliError::usage(format!(
            "times must be finite and nonnegative, got {t}"
        )));
    }
    Ok(ts)
}

fn time_tag(t: f64) -> String {
    fmt_f64(t).trim_end_matches(".0").to_string()
}

fn maybe_svg(cfg: &RunConfig, sink: &mut Sink, name: &str, plot: Plot) -> Result<(), CliError> {
    if cfg.flag("svg")? {
        sink.write(name, &plot.render())?;
    }
    Ok(())
}

// ---------------------------------------------------------------- dispersion

fn dispersion(cfg: &RunConfig, sink: &mut Sink) -> Result<Report, CliError> {
    let masses = cfg.reals("m")?;
    let samples = cfg.count("samples")?;
    if samples < 2 {
        return Err(CliError::usage("`samples` must be at least 2"));
    }
    let mut warnings = Vec::new();
    let mut tables = Vec::new();
    let mut series = Vec::new();
    for &m in &masses {
        let p = params(m)?;
        let mut csv = Csv::new(&["k", "omega", "omega_dirac", "v", "D", "omega3"]);
        let mut max_gap: f64 = 0.0;
        let mut curve = Vec::with_capacity(samples);
        let mut curve_d = Vec::with_capacity(samples);
        for j in 0..samples {
            let k = -PI + (j as f64 + 0.5) * 2.0 * PI / samples as f64;
            let w = omega(k, p);
            let wd = dirac_omega(k, m);
            let (v, d, w3) = match dispersion_point(k, p) {
                Ok(pt) => (pt.v, pt.d, pt.omega3),
                Err(_) => {
                    warnings.push(format!(
                        "derivatives undefined at k = {k}, m = {m}; written as NaN"
                    ));
                    (f64::NAN, f64::NAN, f64::NAN)
                }
            };
            max_gap = max_gap.max((w - wd).abs());
            csv.row(&[k, w, wd, v, d, w3]);
            curve.push((k, w));
            curve_d.push((k, wd));
        }
        let name = format!("dispersion_m{}.csv", fmt_f64(m));
        sink.write(&name, &csv.into_string())?;
        tables.push(json!({
            "m": num(m),
            "file": name,
            "rows": samples,
            "max_abs_omega_minus_dirac": num(max_gap),
        }));
        series.push(Series {
            label: format!("automaton m={}", fmt_f64(m)),
            points: curve,
        });
        series.push(Series {
            label: format!("Dirac m={}", fmt_f64(m)),
            points: curve_d,
        });
    }
    maybe_svg(
        cfg,
        sink,
        "dispersion.svg",
        Plot {
            title: "Dispersion relation".into(),
            x_label: "k".into(),
            y_label: "omega".into(),
            series,
        },
    )?;
    Ok(Report::ok(json!({ "tables": tables }), warnings))
}

// ------------------------------------------------------------ state building

enum State {
    Packet {
        spec: WavepacketSpec,
        field: SpinorField,
        spectrum: ModeSpectrum,
    },
    Localized {
        site: usize,
        field: SpinorField,
    },
}

impl State {
    fn field(&self) -> &SpinorField {
        match self {
            State::Packet { field, .. } | State::Localized { field, .. } => field,
        }
    }
}

fn build_state(cfg: &RunConfig, p: AutomatonParams) -> Result<State, CliError> {
    let len = cfg.count("len")?;
    let shape = cfg.str("shape")?;
    if shape == "localized" {
        let x0 = cfg.real("x0")?;
        if !(x0 >= 0.0 && x0.fract() == 0.0 && x0 < len as f64) {
            return Err(CliError::usage(format!(
                "localized site x0 must be an integer in [0, {len}), got {x0}"
            )));
        }
        let s = cfg.reals("spinor")?;
        if s.len() != 2 {
            return Err(CliError::usage("`spinor` needs two components"));
        }
        let norm = s[0].hypot(s[1]);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(CliError::usage("`spinor` must be nonzero"));
        }
        let site = x0 as usize;
        let field = localized(site, Spinor2::real(s[0] / norm, s[1] / norm), len)?;
        return Ok(State::Localized { site, field });
    }
    let (k0, sh, x0, b) = (
        cfg.real("k0")?,
        cfg.real("sigma_hat")?,
        cfg.real("x0")?,
        branch(cfg)?,
    );
    let spec = match shape {
        "gaussian" => WavepacketSpec::gaussian(k0, sh, x0, b),
        "hermite" => WavepacketSpec::hermite(k0, sh, x0, b, cfg.reals("coeffs")?),
        other => {
            return Err(CliError::usage(format!(
                "shape must be gaussian, hermite or localized, got `{other}`"
            )))
        }
    };
    let st = spec.build(p, len)?;
    Ok(State::Packet {
        spec,
        field: st.field,
        spectrum: st.spectrum,
    })
}

fn moments(density: &[f64], field: &SpinorField) -> (f64, f64, f64) {
    let norm: f64 = density.iter().sum();
    let x = |i: usize| field.coordinate(i) as f64;
    let mean = density
        .iter()
        .enumerate()
        .map(|(i, d)| x(i) * d)
        .sum::<f64>()
        / norm;
    let var = density
        .iter()
        .enumerate()
        .map(|(i, d)| (x(i) - mean).powi(2) * d)
        .sum::<f64>()
        / norm;
    (norm, mean, var)
}

fn argmax(xs: &[f64]) -> usize {
    (0..xs.len())
        .max_by(|&a, &b| xs[a].total_cmp(&xs[b]))
        .unwrap_or(0)
}

fn wrap_warning(state: &State, p: AutomatonParams, t_max: f64) -> Result<Option<String>, CliError> {
    let len = state.field().len() as f64;
    let (lo, hi, what) = match state {
        State::Localized { site, .. } => {
            let s = *site as f64;
            (s - t_max, s + t_max, "light cone")
        }
        State::Packet { spec, .. } => {
            let v = qca_core::derivatives(spec.k0, p)?.v * spec.branch.sign();
            let c = spec.x0 + v * t_max;
            let reach = 3.0 * spec.sigma_hat;
            (spec.x0.min(c) - reach, spec.x0.max(c) + reach, "packet")
        }
    };
    Ok((lo < 0.0 || hi > len - 1.0).then(|| {
        format!(
            "{what} spans [{}, {}] by t = {} and wraps around the ring of length {}",
            fmt_f64(lo),
            fmt_f64(hi),
            fmt_f64(t_max),
            len
        )
    }))
}

// -------------------------------------------------------------------- evolve

fn evolve(cfg: &RunConfig, sink: &mut Sink) -> Result<Report, CliError> {
    let p = params(cfg.real("m")?)?;
    let ts = times(cfg)?;
    let state = build_state(cfg, p)?;
    let backend = cfg.str("backend")?;
    if !matches!(backend, "momentum" | "position") {
        return Err(CliError::usage(format!(
            "backend must be momentum or position, got `{backend}`"
        )));
    }
    let mut warnings = Vec::new();
    let t_max = ts.iter().cloned().fold(0.0, f64::max);
    warnings.extend(wrap_warning(&state, p, t_max)?);

    let field0 = state.field();
    let spec0 = transform(field0);
    let approx = match &state {
        State::Packet { spec, spectrum, .. } => Some((
            ApproxEvolutionParams::new(spec.k0, p, spec.branch)?,
            spectrum,
        )),
        State::Localized { .. } => None,
    };
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for &t in &ts {
        let (field, spectrum) = if backend == "position" {
            if t.fract() != 0.0 {
                return Err(CliError::usage(format!(
                    "position backend needs integer times, got {t}"
                )));
            }
            let f = evolve_position(field0, p, t as u64);
            let s = transform(&f);
            (f, s)
        } else {
            let s = evolve_momentum(&spec0, p, t)?;
            (s.inverse(), s)
        };
        let density = field.density();
        let (norm, mean, var) = moments(&density, &field);
        let fid = match &approx {
            Some((ap, s0)) => Some(fidelity(&spectrum, &schrodinger_evolve(s0, ap, t)?)?),
            None => None,
        };
        let mut csv = Csv::new(&["x", "density"]);
        for (i, d) in density.iter().enumerate() {
            csv.row(&[field.coordinate(i) as f64, *d]);
        }
        let name = format!("evolve_t{}.csv", time_tag(t));
        sink.write(&name, &csv.into_string())?;
        rows.push(json!({
            "t": num(t),
            "file": name,
            "norm": num(norm),
            "mean_x": num(mean),
            "var_x": num(var),
            "fidelity_vs_approx": opt_num(fid),
        }));
        series.push(Series {
            label: format!("t={}", time_tag(t)),
            points: density
                .iter()
                .enumerate()
                .map(|(i, d)| (field.coordinate(i) as f64, *d))
                .collect(),
        });
    }
    maybe_svg(
        cfg,
        sink,
        "evolve.svg",
        Plot {
            title: "Position density".into(),
            x_label: "x".into(),
            y_label: "|psi_R|^2 + |psi_L|^2".into(),
            series,
        },
    )?;
    Ok(Report::ok(
        json!({ "backend": backend, "times": rows }),
        warnings,
    ))
}

// ------------------------------------------------------------------- compare

const REFERENCE_D_FIG4: f64 = 0.31;

fn compare(cfg: &RunConfig, sink: &mut Sink) -> Result<Report, CliError> {
    let p = params(cfg.real("m")?)?;
    let ts = times(cfg)?;
    let state = build_state(cfg, p)?;
    let (spec, spectrum) = match &state {
        State::Packet { spec, spectrum, .. } => (spec, spectrum),
        State::Localized { .. } => {
            return Err(CliError::usage(
                "compare needs a smooth state (gaussian or hermite)",
            ))
        }
    };
    let convention = match cfg.str("convention")? {
        "taylor" => PhaseConvention::Taylor,
        "flipped" => PhaseConvention::FlippedDiffusion,
        other => {
            return Err(CliError::usage(format!(
                "convention must be taylor or flipped, got `{other}`"
            )))
        }
    };
    let sigma = cfg.opt_real("sigma")?.unwrap_or(3.0 / spec.sigma_hat);
    let ap = ApproxEvolutionParams::new(spec.k0, p, spec.branch)?.with_convention(convention);
    let mut warnings = Vec::new();
    let t_max = ts.iter().cloned().fold(0.0, f64::max);
    warnings.extend(wrap_warning(&state, p, t_max)?);
    if matches!(cfg.str("preset"), Ok("fig4")) && (ap.d - REFERENCE_D_FIG4).abs() > 0.01 {
        warnings.push(format!(
            "reference diffusion D = {REFERENCE_D_FIG4} for this preset disagrees with the closed form D = {}; the closed form is used",
            fmt_f64(ap.d)
        ));
    }

    let field0 = state.field();
    let peak0 = argmax(&field0.density());
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for &t in &ts {
        let exact = evolve_momentum(spectrum, p, t)?;
        let approx = schrodinger_evolve(spectrum, &ap, t)?;
        let (fe, fa) = (exact.inverse(), approx.inverse());
        let (de, da) = (fe.density(), fa.density());
        let f = fidelity(&exact, &approx)?;
        let bound = accuracy_bound(spectrum, p, spec.k0, sigma, t)?;
        let mut csv = Csv::new(&["x", "exact", "approx"]);
        for i in 0..de.len() {
            csv.row(&[fe.coordinate(i) as f64, de[i], da[i]]);
        }
        let name = format!("compare_t{}.csv", time_tag(t));
        sink.write(&name, &csv.into_string())?;
        let (_, mean_e, _) = moments(&de, &fe);
        let (_, mean_a, _) = moments(&da, &fa);
        let (pe, pa) = (argmax(&de), argmax(&da));
        rows.push(json!({
            "t": num(t),
            "file": name,
            "fidelity": num(f),
            "accuracy_bound": {
                "epsilon": num(bound.epsilon),
                "gamma": num(bound.gamma),
                "sigma": num(bound.sigma),
                "bound": num(bound.bound),
            },
            "bound_holds": f >= bound.bound,
            "peak_exact": fe.coordinate(pe),
            "peak_approx": fa.coordinate(pa),
            "peak_shift": pe as i64 - peak0 as i64,
            "drift_shift": num(spec.branch.sign() * ap.v * t),
            "mean_exact": num(mean_e),
            "mean_approx": num(mean_a),
        }));
        let pts = |d: &[f64], f: &SpinorField| -> Vec<(f64, f64)> {
            d.iter()
                .enumerate()
                .map(|(i, y)| (f.coordinate(i) as f64, *y))
                .collect()
        };
        series.push(Series {
            label: format!("exact t={}", time_tag(t)),
            points: pts(&de, &fe),
        });
        series.push(Series {
            label: format!("approx t={}", time_tag(t)),
            points: pts(&da, &fa),
        });
    }
    maybe_svg(
        cfg,
        sink,
        "compare.svg",
        Plot {
            title: "Exact vs drift-diffusion evolution".into(),
            x_label: "x".into(),
            y_label: "density".into(),
            series,
        },
    )?;
    Ok(Report::ok(
        json!({
            "omega0": num(ap.omega0),
            "v": num(ap.v),
            "D": num(ap.d),
            "sigma": num(sigma),
            "times": rows,
        }),
        warnings,
    ))
}

// -------------------------------------------------------------- discriminate

fn discrimination_input(cfg: &RunConfig, t: f64) -> Result<DiscriminationInput, CliError> {
    let n = cfg.int("nbar")?;
    let n = u32::try_from(n).map_err(|_| CliError::usage(format!("nbar out of range: {n}")))?;
    Ok(DiscriminationInput::new(
        cfg.real("m")?,
        cfg.real("kbar")?,
        n,
        t,
    )?)
}

fn discriminate(cfg: &RunConfig) -> Result<Report, CliError> {
    let input = discrimination_input(cfg, cfg.real("t")?)?;
    let v = variant(cfg)?;
    let r = pe_lower_bound_with(&input, v)?;
    let mut warnings = Vec::new();
    if !r.hypotheses_ok {
        warnings.push(format!(
            "bound hypotheses fail at t = {}; no error-probability bound",
            fmt_f64(input.t)
        ));
    }
    let mut results = json!({
        "variant": variant_name(v),
        "alpha_bar": num(r.alpha_bar),
        "beta_bar": num(r.beta_bar),
        "f_limit": num(r.f_limit),
        "hypotheses_ok": r.hypotheses_ok,
        "g": opt_num(r.g),
        "pe_lower": opt_num(r.pe_lower),
    });
    if cfg.flag("solve_tmin")? {
        let tm = t_min(input.m, input.k_bar, input.n_bar, v)?;
        if tm.exact.is_none() {
            warnings.push("pi/2 is not reached within the time cap; no root-solved t_min".into());
        }
        results["t_min"] = json!({
            "approx": num(tm.approx),
            "exact": opt_num(tm.exact),
            "approx_seconds": num(planck_to_seconds(tm.approx)),
            "exact_seconds": opt_num(tm.exact.map(planck_to_seconds)),
        });
    }
    Ok(Report::ok(results, warnings))
}

// ------------------------------------------------------------------- flytime

fn flytime(cfg: &RunConfig, sink: &mut Sink) -> Result<Report, CliError> {
    let (m, k) = (cfg.real("m")?, cfg.real("k")?);
    let spreads = cfg.reals("sigma_hat")?;
    if spreads.is_empty() {
        return Err(CliError::usage("`sigma_hat` is empty"));
    }
    let mut csv = Csv::new(&[
        "sigma_hat",
        "t_general",
        "t_relativistic",
        "broadening",
        "broadening_collapsed",
        "visibility_ratio",
        "t_seconds",
    ]);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut curve = Vec::new();
    for &sh in &spreads {
        let r = visibility_report(&FlytimeInput::new(m, k, sh)?)?;
        csv.row(&[
            sh,
            r.t_general,
            r.t_relativistic,
            r.broadening_at_t,
            r.broadening_collapsed_at_t,
            r.visibility_ratio,
            r.t_seconds,
        ]);
        if !r.visible {
            warnings.push(format!(
                "sigma_hat = {}: broadening exceeds the separation (ratio {}), not visible",
                fmt_f64(sh),
                fmt_f64(r.visibility_ratio)
            ));
        }
        curve.push((sh.log10(), r.visibility_ratio.log10()));
        rows.push(json!({
            "sigma_hat": num(sh),
            "t_general": num(r.t_general),
            "t_relativistic": num(r.t_relativistic),
            "broadening": num(r.broadening_at_t),
            "broadening_collapsed": num(r.broadening_collapsed_at_t),
            "visibility_ratio": num(r.visibility_ratio),
            "visible": r.visible,
            "t_seconds": num(r.t_seconds),
            "t_relativistic_seconds": num(r.t_relativistic_seconds),
            "sigma_hat_m": num(r.sigma_hat_m),
        }));
    }
    sink.write("flytime.csv", &csv.into_string())?;
    maybe_svg(
        cfg,
        sink,
        "flytime.svg",
        Plot {
            title: "Visibility of the separation".into(),
            x_label: "log10 sigma_hat".into(),
            y_label: "log10 visibility ratio".into(),
            series: vec![Series {
                label: "ratio".into(),
                points: curve,
            }],
        },
    )?;
    Ok(Report::ok(
        json!({ "file": "flytime.csv", "rows": rows }),
        warnings,
    ))
}

// ------------------------------------------------------------ validate-bound

fn validate_bound(cfg: &RunConfig) -> Result<Report, CliError> {
    let v = variant(cfg)?;
    let t = match cfg.opt_real("t")? {
        Some(t) => t,
        None => {
            let base = pe_lower_bound_with(&discrimination_input(cfg, 0.0)?, v)?;
            if !base.f_limit.is_finite() {
                return Err(CliError::usage(
                    "the time cap is unbounded for these parameters; pass `t` explicitly",
                ));
            }
            cfg.real("t_fraction")? * base.f_limit
        }
    };
    let input = discrimination_input(cfg, t)?;
    let seed =
        u64::try_from(cfg.int("seed")?).map_err(|_| CliError::usage("seed must be nonnegative"))?;
    let workers = cfg.count("workers")?.max(1);
    let r = montecarlo_survey(&input, v, cfg.count("samples")?, seed, workers)?;
    let results = json!({
        "variant": variant_name(v),
        "t": num(t),
        "samples": r.samples,
        "workers": r.workers,
        "seed": r.seed,
        "bound": num(r.bound),
        "max_observed": num(r.max_observed),
        "mean_observed": num(r.mean_observed),
        "excess": num(r.excess()),
        "violations": r.violations,
    });
    let failure = (r.violations > 0).then(|| {
        format!(
            "{} of {} samples exceed the bound {} (max {})",
            r.violations,
            r.samples,
            fmt_f64(r.bound),
            fmt_f64(r.max_observed)
        )
    });
    Ok(Report {
        results,
        warnings: Vec::new(),
        failure,
    })
}

// ------------------------------------------------------------------ symcheck

fn symcheck(cfg: &RunConfig, sink: &mut Sink) -> Result<Report, CliError> {
    let nm = cfg.count("m_points")?;
    let nk = cfg.count("k_points")?;
    let tol = cfg.real("tolerance")?;
    if nm == 0 || nk == 0 {
        return Err(CliError::usage("grid sizes must be positive"));
    }
    let ks: Vec<f64> = (0..nk)
        .map(|j| -PI + 2.0 * PI * j as f64 / nk as f64)
        .collect();
    let mut csv = Csv::new(&["m", "parity", "time_reversal", "stencil", "unitarity"]);
    let mut worst = [0.0f64; 4];
    let mut worst_m = 0.0;
    let mut worst_total = 0.0;
    for i in 0..nm {
        let m = if nm == 1 {
            0.0
        } else {
            i as f64 / (nm - 1) as f64
        };
        let r = symmetry_check(params(m)?, &ks);
        let vals = [r.parity, r.time_reversal, r.stencil, r.unitarity];
        csv.row(&[m, vals[0], vals[1], vals[2], vals[3]]);
        for (w, v) in worst.iter_mut().zip(vals) {
            *w = w.max(v);
        }
        if r.max_residual() > worst_total {
            worst_total = r.max_residual();
            worst_m = m;
        }
    }
    sink.write("symcheck.csv", &csv.into_string())?;
    let max = worst.iter().cloned().fold(0.0, f64::max);
    let failure = (!(max <= tol)).then(|| {
        format!(
            "symmetry residual {} at m = {} exceeds tolerance {}",
            fmt_f64(max),
            fmt_f64(worst_m),
            fmt_f64(tol)
        )
    });
    Ok(Report {
        results: json!({
            "file": "symcheck.csv",
            "grid": [nm, nk],
            "parity": num(worst[0]),
            "time_reversal": num(worst[1]),
            "stencil": num(worst[2]),
            "unitarity": num(worst[3]),
            "max_residual": num(max),
            "worst_m": num(worst_m),
            "tolerance": num(tol),
        }),
        warnings: Vec::new(),
        failure,
    })
}
