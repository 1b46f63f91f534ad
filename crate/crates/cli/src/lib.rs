//! Command-line front end: argument parsing, dispatch and report emission.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use clap::{Arg, ArgAction, ArgMatches, Command};
use commands::{CliError, Outcome};
use config::{Params, PrecisionMode, COMMANDS};
use report::{Format, Report};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
/// Some pass/fail check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_COMPUTATION: i32 = 4;

pub fn build_cli() -> Command {
    let mut cmd = Command::new("equi")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Numerical verification toolkit for holomorphic mass equidistribution")
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("JSON config file; flags override it"))
        .arg(Arg::new("mode").long("mode").global(true).value_name("MODE").help("precision mode: float64 (or float), extended, exact"))
        .arg(
            Arg::new("parallelism")
                .long("parallelism")
                .global(true)
                .value_name("N")
                .help(format!("worker threads (default: ${}, else all cores)", config::PARALLELISM_ENV)),
        )
        .arg(Arg::new("output").long("output").short('o').global(true).value_name("PATH").help("report path (default stdout)"))
        .arg(Arg::new("format").long("format").global(true).value_name("FORMAT").help("json or csv-summary [json]"));
    for spec in COMMANDS {
        let mut sub = Command::new(spec.name).about(spec.about);
        for a in spec.args {
            sub = sub.arg(
                Arg::new(a.name)
                    .long(a.name)
                    .help(a.help)
                    .allow_hyphen_values(true)
                    .action(ArgAction::Set),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

pub fn build_report(
    subcommand: &str,
    params: &Params,
    mode: PrecisionMode,
    outcome: Outcome,
    wall_time_ms: u64,
) -> Report {
    let mut inputs_echo: BTreeMap<String, Value> = params.0.clone();
    inputs_echo.insert("precision_mode".into(), Value::from(mode.as_str()));
    Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        subcommand: subcommand.to_string(),
        inputs_echo,
        results: outcome.results,
        checks: outcome.checks,
        wall_time_ms,
    }
}

struct Invocation {
    config: config::RunConfig,
    format: Format,
}

fn resolve(m: &ArgMatches) -> Result<Invocation, String> {
    let (name, sub) = m.subcommand().expect("subcommand required");
    let spec = config::command_spec(name).expect("subcommand registered");
    let file = match m.get_one::<String>("config") {
        Some(p) => config::read_config_file(std::path::Path::new(p))?,
        None => config::FileConfig::default(),
    };
    let mut flags = BTreeMap::new();
    for a in spec.args {
        if let Some(v) = sub.get_one::<String>(a.name) {
            flags.insert(a.name.to_string(), Value::from(v.as_str()));
        }
    }
    let parameters = config::merge_parameters(spec, &file.parameters, &flags)?;
    let mode = match m.get_one::<String>("mode").or(file.precision_mode.as_ref()) {
        Some(s) => PrecisionMode::parse(s)?,
        None => PrecisionMode::Float64,
    };
    let flag_par = match m.get_one::<String>("parallelism") {
        Some(s) => Some(s.parse::<u64>().map_err(|_| format!("--parallelism: expected a positive integer, got {s:?}"))?),
        None => None,
    };
    let parallelism = config::resolve_parallelism(flag_par, file.parallelism)?;
    let output_path = m.get_one::<String>("output").map(PathBuf::from).or(file.output);
    let format = m.get_one::<String>("format").cloned().or(file.format).unwrap_or_else(|| "json".into()).parse()?;
    Ok(Invocation {
        config: config::RunConfig { subcommand: name.to_string(), parameters, precision_mode: mode, parallelism, output_path },
        format,
    })
}

/// Parses argv, runs the subcommand, writes the report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match build_cli().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidValue | ErrorKind::ValueValidation => EXIT_VALIDATION,
                _ => EXIT_USAGE,
            };
        }
    };
    let inv = match resolve(&matches) {
        Ok(i) => i,
        Err(msg) => {
            eprintln!("validation error: {msg}");
            return EXIT_VALIDATION;
        }
    };
    let cfg = &inv.config;
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.parallelism).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("computation error: {e}");
            return EXIT_COMPUTATION;
        }
    };
    let start = Instant::now();
    let outcome = pool.install(|| commands::dispatch(&cfg.subcommand, &cfg.parameters, cfg.precision_mode));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return match e {
                CliError::Validation(_) => EXIT_VALIDATION,
                CliError::Computation(_) => EXIT_COMPUTATION,
            };
        }
    };
    let ms = start.elapsed().as_millis() as u64;
    let report = build_report(&cfg.subcommand, &cfg.parameters, cfg.precision_mode, outcome, ms);
    if let Err(e) = report::emit_report(&report, cfg.output_path.as_deref(), inv.format) {
        eprintln!("i/o error: {e}");
        return EXIT_COMPUTATION;
    }
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
