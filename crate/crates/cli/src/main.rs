//! `qca`: command-line experiment runner for the one-dimensional Dirac
//! quantum cellular automaton.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches};

use config::{parse_value, Kind, RunConfig};
use error::CliError;

fn cli(cmds: &[config::Command]) -> clap::Command {
    let mut app = clap::Command::new("qca")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Dirac quantum cellular automaton laboratory")
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .global(true)
                .value_name("FILE")
                .help("flat TOML file of key = value pairs; flags override it"),
        );
    for cmd in cmds {
        let mut sub = clap::Command::new(cmd.name).about(cmd.about);
        for k in cmd.all_keys() {
            let mut arg = Arg::new(k.name).long(k.name.replace('_', "-")).help(k.help);
            arg = if k.kind == Kind::Bool {
                arg.action(ArgAction::SetTrue)
            } else {
                arg.value_name(k.name.to_uppercase())
            };
            if let Some(d) = k.default.filter(|_| k.kind != Kind::Bool) {
                arg = arg.help(format!("{} [default: {d}]", k.help));
            }
            sub = sub.arg(arg);
        }
        app = app.subcommand(sub);
    }
    app
}

fn flags(
    cmd: &config::Command,
    m: &ArgMatches,
) -> Result<BTreeMap<String, config::Value>, CliError> {
    let mut out = BTreeMap::new();
    for k in cmd.all_keys() {
        if k.kind == Kind::Bool {
            if m.get_flag(k.name) {
                out.insert(k.name.to_string(), config::Value::Bool(true));
            }
        } else if let Some(raw) = m.get_one::<String>(k.name) {
            out.insert(k.name.to_string(), parse_value(k.kind, raw, k.name)?);
        }
    }
    Ok(out)
}

fn run(
    matches: &ArgMatches,
    cmds: &[config::Command],
) -> Result<(), (Option<&'static str>, CliError)> {
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let cmd = cmds
        .iter()
        .find(|c| c.name == name)
        .expect("registered subcommand");
    let fail = |e| (Some(cmd.name), e);
    let file = match sub.get_one::<String>("config") {
        Some(path) => config::read_file(cmd, Path::new(path)).map_err(fail)?,
        None => BTreeMap::new(),
    };
    let cfg = RunConfig::resolve(cmd, file, flags(cmd, sub).map_err(fail)?).map_err(fail)?;
    let out = PathBuf::from(cfg.str("out").map_err(fail)?);
    let mut sink = output::Sink::new(&out).map_err(fail)?;
    let report = commands::execute(&cfg, &mut sink).map_err(fail)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let doc = output::document(cmd.name, cfg.to_json(), report.results, &report.warnings);
    let text = output::to_pretty(&doc);
    sink.write(&format!("{}.json", cmd.name), &text)
        .map_err(fail)?;
    print!("{text}");
    for p in sink.written() {
        eprintln!("wrote {}", p.display());
    }
    match report.failure {
        Some(msg) => Err(fail(CliError::Invariant(msg))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cmds = config::commands();
    let matches = match cli(&cmds).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::usage(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json(None));
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(&matches, &cmds) {
        Ok(()) => ExitCode::SUCCESS,
        Err((command, err)) => {
            eprintln!("{}", err.to_json(command));
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
