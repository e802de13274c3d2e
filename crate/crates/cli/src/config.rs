//! Run configuration: typed keys per subcommand, presets, a flat TOML file,
//! and command-line flags, merged in that order of increasing precedence.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use qca_core::fig4_hermite_coeffs;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Real,
    Int,
    Str,
    Bool,
    Reals,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Real => "REAL",
            Kind::Int => "INT",
            Kind::Str => "STRING",
            Kind::Bool => "BOOL",
            Kind::Reals => "REAL,...",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    Str(String),
    Bool(bool),
    Reals(Vec<f64>),
}

impl Value {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Real(x) => (*x).into(),
            Value::Int(i) => (*i).into(),
            Value::Str(s) => s.clone().into(),
            Value::Bool(b) => (*b).into(),
            Value::Reals(xs) => xs.clone().into(),
        }
    }
}

pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn key(
    name: &'static str,
    kind: Kind,
    default: Option<&'static str>,
    help: &'static str,
) -> Key {
    Key {
        name,
        kind,
        default,
        help,
    }
}

/// Keys accepted by every subcommand.
pub const COMMON: &[Key] = &[
    key("out", Kind::Str, Some("."), "output directory"),
    key("seed", Kind::Int, Some("42"), "random seed"),
    key("svg", Kind::Bool, Some("false"), "also write SVG plots"),
    key(
        "preset",
        Kind::Str,
        None,
        "parameter preset: fig2, fig3 or fig4",
    ),
];

const STATE: &[Key] = &[
    key("m", Kind::Real, None, "automaton mass in [0, 1]"),
    key("len", Kind::Int, None, "ring length"),
    key(
        "shape",
        Kind::Str,
        Some("gaussian"),
        "gaussian, hermite or localized",
    ),
    key("k0", Kind::Real, None, "peak momentum"),
    key("sigma_hat", Kind::Real, None, "position spread"),
    key("x0", Kind::Real, None, "packet centre or localized site"),
    key("branch", Kind::Str, Some("plus"), "plus or minus"),
    key(
        "coeffs",
        Kind::Reals,
        None,
        "Hermite coefficients c_0, c_1, ...",
    ),
    key(
        "spinor",
        Kind::Reals,
        Some("1,1"),
        "real spinor of a localized state",
    ),
    key("times", Kind::Reals, None, "evolution times"),
];

pub struct Command {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: Vec<&'static Key>,
}

pub fn commands() -> Vec<Command> {
    let with_state = |extra: &'static [Key]| STATE.iter().chain(extra).collect::<Vec<_>>();
    vec![
        Command {
            name: "dispersion",
            about: "Tabulate omega, omega_D, v, D and omega''' over k",
            keys: DISPERSION.iter().collect(),
        },
        Command {
            name: "evolve",
            about: "Evolve a state and record the position density",
            keys: with_state(EVOLVE),
        },
        Command {
            name: "compare",
            about: "Compare exact evolution with the drift-diffusion approximation",
            keys: with_state(COMPARE),
        },
        Command {
            name: "discriminate",
            about: "Lower bound on the error probability of telling the automaton from Dirac",
            keys: DISCRIMINATE.iter().collect(),
        },
        Command {
            name: "flytime",
            about: "Separation time and visibility for a packet in flight",
            keys: FLYTIME.iter().collect(),
        },
        Command {
            name: "validate-bound",
            about: "Monte Carlo check of the trace-distance bound",
            keys: VALIDATE.iter().collect(),
        },
        Command {
            name: "symcheck",
            about: "Parity, time-reversal and unitarity residuals on an (m, k) grid",
            keys: SYMCHECK.iter().collect(),
        },
    ]
}

const DISPERSION: &[Key] = &[
    key("m", Kind::Reals, None, "masses, one table each"),
    key("samples", Kind::Int, Some("512"), "k points per table"),
];

const EVOLVE: &[Key] = &[key(
    "backend",
    Kind::Str,
    Some("momentum"),
    "momentum or position",
)];

const COMPARE: &[Key] = &[
    key(
        "sigma",
        Kind::Real,
        None,
        "bandwidth of the accuracy bound (default 3/sigma_hat)",
    ),
    key("convention", Kind::Str, Some("taylor"), "taylor or flipped"),
];

const DISCRIMINATE: &[Key] = &[
    key("m", Kind::Real, None, "mass"),
    key("kbar", Kind::Real, None, "momentum cutoff"),
    key("nbar", Kind::Int, None, "maximum particle number"),
    key("t", Kind::Real, Some("0"), "evolution time"),
    key(
        "solve_tmin",
        Kind::Bool,
        Some("false"),
        "also solve for the minimal time",
    ),
    key(
        "variant",
        Kind::Str,
        Some("single-beta"),
        "single-beta or double-beta",
    ),
];

const FLYTIME: &[Key] = &[
    key("m", Kind::Real, None, "mass"),
    key("k", Kind::Real, None, "momentum"),
    key("sigma_hat", Kind::Reals, None, "position spreads"),
];

const VALIDATE: &[Key] = &[
    key("m", Kind::Real, None, "mass"),
    key("kbar", Kind::Real, None, "momentum cutoff"),
    key("nbar", Kind::Int, None, "maximum particle number"),
    key(
        "t",
        Kind::Real,
        None,
        "evolution time (default t_fraction of the time cap)",
    ),
    key(
        "t_fraction",
        Kind::Real,
        Some("0.5"),
        "fraction of the time cap used when t is absent",
    ),
    key("samples", Kind::Int, Some("10000"), "Monte Carlo samples"),
    key("workers", Kind::Int, Some("4"), "parallel random streams"),
    key(
        "variant",
        Kind::Str,
        Some("single-beta"),
        "single-beta or double-beta",
    ),
];

const SYMCHECK: &[Key] = &[
    key("m_points", Kind::Int, Some("32"), "masses m_i = i/(n-1)"),
    key(
        "k_points",
        Kind::Int,
        Some("64"),
        "momenta k_j = -pi + 2 pi j/n",
    ),
    key(
        "tolerance",
        Kind::Real,
        Some("1e-14"),
        "largest accepted residual",
    ),
];

impl Command {
    pub fn all_keys(&self) -> impl Iterator<Item = &'static Key> + '_ {
        COMMON.iter().chain(self.keys.iter().copied())
    }

    fn find(&self, name: &str) -> Option<&'static Key> {
        self.all_keys().find(|k| k.name == name)
    }
}

pub fn parse_value(kind: Kind, raw: &str, name: &str) -> Result<Value, CliError> {
    let bad = || CliError::usage(format!("`{name}` expects {}, got `{raw}`", kind.name()));
    let real = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    Ok(match kind {
        Kind::Real => Value::Real(real(raw)?),
        Kind::Int => Value::Int(raw.trim().parse().map_err(|_| bad())?),
        Kind::Str => Value::Str(raw.to_string()),
        Kind::Bool => Value::Bool(raw.trim().parse().map_err(|_| bad())?),
        Kind::Reals => Value::Reals(
            raw.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(real)
                .collect::<Result<_, _>>()?,
        ),
    })
}

fn from_toml(kind: Kind, v: &toml::Value, name: &str) -> Result<Value, CliError> {
    let bad = || {
        CliError::usage(format!(
            "config key `{name}` expects {}, got {v}",
            kind.name()
        ))
    };
    let real = |v: &toml::Value| match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(bad()),
    };
    Ok(match (kind, v) {
        (Kind::Real, _) => Value::Real(real(v)?),
        (Kind::Int, toml::Value::Integer(i)) => Value::Int(*i),
        (Kind::Str, toml::Value::String(s)) => Value::Str(s.clone()),
        (Kind::Bool, toml::Value::Boolean(b)) => Value::Bool(*b),
        (Kind::Reals, toml::Value::Array(xs)) => {
            Value::Reals(xs.iter().map(real).collect::<Result<_, _>>()?)
        }
        (Kind::Reals, _) => Value::Reals(vec![real(v)?]),
        _ => return Err(bad()),
    })
}

/// Reads a flat TOML table. Nested tables and keys outside the schema are errors.
pub fn read_file(cmd: &Command, path: &Path) -> Result<BTreeMap<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::usage(format!("malformed config {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (name, v) in &table {
        let k = cmd.find(name).ok_or_else(|| {
            CliError::usage(format!("unknown config key `{name}` for `{}`", cmd.name))
        })?;
        out.insert(name.clone(), from_toml(k.kind, v, name)?);
    }
    Ok(out)
}

fn preset(name: &str, command: &str) -> Result<Vec<(&'static str, Value)>, CliError> {
    let r = Value::Real;
    let s = |x: &str| Value::Str(x.to_string());
    let values = match (name, command) {
        ("fig2", "evolve") => vec![
            ("m", r(0.92)),
            ("len", Value::Int(128)),
            ("shape", s("localized")),
            ("x0", r(30.0)),
            ("spinor", Value::Reals(vec![1.0, 1.0])),
            ("k0", r(0.3 * PI)),
            ("sigma_hat", r(3.0)),
            (
                "times",
                Value::Reals((0..=6).map(|i| 10.0 * i as f64).collect()),
            ),
        ],
        ("fig3", "dispersion") => vec![("m", Value::Reals(vec![0.0, 0.3, 0.6, 0.9]))],
        ("fig4", "evolve") | ("fig4", "compare") => vec![
            ("m", r(0.6)),
            ("len", Value::Int(1024)),
            ("shape", s("hermite")),
            ("coeffs", Value::Reals(fig4_hermite_coeffs())),
            ("k0", r(3.0 * PI / 10.0)),
            ("sigma_hat", r(20.0)),
            ("x0", r(256.0)),
            ("times", Value::Reals(vec![0.0, 100.0, 200.0, 600.0])),
        ],
        ("fig2" | "fig3" | "fig4", _) => {
            return Err(CliError::usage(format!(
                "preset `{name}` does not apply to `{command}`"
            )))
        }
        _ => return Err(CliError::usage(format!("unknown preset `{name}`"))),
    };
    Ok(values)
}

/// Resolved parameters of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    values: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    /// Merges defaults, preset, config file and flags, later layers winning.
    pub fn resolve(
        cmd: &Command,
        file: BTreeMap<String, Value>,
        flags: BTreeMap<String, Value>,
    ) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for k in cmd.all_keys() {
            if let Some(d) = k.default {
                values.insert(k.name, parse_value(k.kind, d, k.name)?);
            }
        }
        let preset_name = flags.get("preset").or_else(|| file.get("preset")).cloned();
        if let Some(Value::Str(name)) = preset_name {
            for (k, v) in preset(&name, cmd.name)? {
                values.insert(k, v);
            }
        }
        for (name, v) in file.into_iter().chain(flags) {
            let k = cmd
                .find(&name)
                .ok_or_else(|| CliError::usage(format!("unknown key `{name}`")))?;
            values.insert(k.name, v);
        }
        Ok(Self {
            command: cmd.name,
            values,
        })
    }

    fn get(&self, name: &str) -> Result<&Value, CliError> {
        self.values.get(name).ok_or_else(|| {
            CliError::usage(format!(
                "missing required key `{name}` for `{}`",
                self.command
            ))
        })
    }

    pub fn has(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn real(&self, name: &str) -> Result<f64, CliError> {
        match self.get(name)? {
            Value::Real(x) => Ok(*x),
            Value::Int(i) => Ok(*i as f64),
            _ => Err(CliError::usage(format!("`{name}` is not a real"))),
        }
    }

    pub fn opt_real(&self, name: &str) -> Result<Option<f64>, CliError> {
        if self.has(name) {
            self.real(name).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn int(&self, name: &str) -> Result<i64, CliError> {
        match self.get(name)? {
            Value::Int(i) => Ok(*i),
            _ => Err(CliError::usage(format!("`{name}` is not an integer"))),
        }
    }

    /// A nonnegative integer that fits in `usize`.
    pub fn count(&self, name: &str) -> Result<usize, CliError> {
        let i = self.int(name)?;
        usize::try_from(i)
            .map_err(|_| CliError::usage(format!("`{name}` must be nonnegative, got {i}")))
    }

    pub fn str(&self, name: &str) -> Result<&str, CliError> {
        match self.get(name)? {
            Value::Str(s) => Ok(s),
            _ => Err(CliError::usage(format!("`{name}` is not a string"))),
        }
    }

    pub fn flag(&self, name: &str) -> Result<bool, CliError> {
        match self.get(name)? {
            Value::Bool(b) => Ok(*b),
            _ => Err(CliError::usage(format!("`{name}` is not a boolean"))),
        }
    }

    pub fn reals(&self, name: &str) -> Result<Vec<f64>, CliError> {
        match self.get(name)? {
            Value::Reals(xs) => Ok(xs.clone()),
            Value::Real(x) => Ok(vec![*x]),
            _ => Err(CliError::usage(format!("`{name}` is not a list of reals"))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map = self
            .values
            .iter()
            .filter(|(k, _)| **k != "out")
            .map(|(k, v)| (k.to_string(), v.to_json()))
            .collect::<serde_json::Map<_, _>>();
        serde_json::Value::Object(map)
    }
}
