//! Command-line front end: holonomies, property suites and integrals.
//!
//! Every command writes a JSON report and a `manifest.json` into the output
//! directory. Reports carry no timestamps or absolute paths, so rerunning a
//! command with the same inputs, seed and worker count rewrites identical
//! bytes.

pub mod config;
pub mod suites;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use genconn::format::{parse_connection, parse_graph};
use genconn::{integrate, Budget, CylindricalFunction, GroupDescriptor, Mode, PathWord};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use suites::{Property, Suite};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] genconn::Error),
}

/// Exit status: `0` pass, `1` property failure, `2` usage or input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Error = 2,
}

#[derive(Debug, Parser)]
#[command(
    name = "genconn",
    version,
    about = "Generalized connections on finite graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Holonomy of a connection along a path.
    Holonomy(HolonomyArgs),
    /// Run a property suite from a config file.
    Suite(SuiteArgs),
    /// Integrate a built-in cylindrical function against the Haar measure.
    Integrate(IntegrateArgs),
}

#[derive(Debug, Args)]
pub struct HolonomyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub connection: PathBuf,
    /// Path literal, e.g. `e1,e2^-1` or `@x`.
    #[arg(long, allow_hyphen_values = true)]
    pub path: String,
    #[arg(long, default_value = "genconn-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value = "genconn-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Mc,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub descriptor: String,
    /// `wilson`, `wilson2`, `indicator-identity`, `character-product` or
    /// `constant:<c>`.
    #[arg(long)]
    pub integrand: String,
    /// Path literal; repeat for `character-product`.
    #[arg(long = "path", allow_hyphen_values = true)]
    pub paths: Vec<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value = "genconn-out")]
    pub out: PathBuf,
}

/// What a command printed and whether its checks held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: BTreeMap<&'static str, String>,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub outputs: Vec<String>,
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn digest(path: &Path) -> Result<InputDigest, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(&path, contents))
        .map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })
}

/// Writes the report, then the manifest describing it.
fn emit<T: Serialize>(
    out: &Path,
    report_name: &str,
    report: &T,
    command: &str,
    arguments: BTreeMap<&'static str, String>,
    inputs: &[PathBuf],
    seed: Option<u64>,
) -> Result<(), CliError> {
    write_file(out, report_name, &to_json(report))?;
    let manifest = RunManifest {
        command: command.to_string(),
        arguments,
        inputs: inputs.iter().map(|p| digest(p)).collect::<Result<_, _>>()?,
        seed,
        version: VERSION,
        outputs: vec![report_name.to_string()],
    };
    write_file(out, "manifest.json", &to_json(&manifest))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Holonomy(args) => holonomy(args),
        Command::Suite(args) => suite(args),
        Command::Integrate(args) => integrate_cmd(args),
    }
}

#[derive(Debug, Serialize)]
struct HolonomyReport {
    graph: String,
    descriptor: String,
    path: String,
    reduced: String,
    element: String,
}

fn holonomy(args: &HolonomyArgs) -> Result<Outcome, CliError> {
    let graph = parse_graph(&read_input(&args.graph)?)?;
    let conn = parse_connection(&read_input(&args.connection)?, &graph)?;
    let path = PathWord::parse(&graph, &args.path)?;
    let element = conn.holonomy(&path)?;
    let report = HolonomyReport {
        graph: graph.id().to_string(),
        descriptor: conn.descriptor().to_string(),
        path: args.path.clone(),
        reduced: path.to_string(),
        element: element.to_string(),
    };
    let arguments = BTreeMap::from([("path", args.path.clone())]);
    emit(
        &args.out,
        "holonomy.json",
        &report,
        "holonomy",
        arguments,
        &[args.graph.clone(), args.connection.clone()],
        None,
    )?;
    Ok(Outcome {
        status: Status::Pass,
        stdout: format!("element: {}\nreduced: {}\n", report.element, report.reduced),
    })
}

#[derive(Debug, Serialize)]
struct SuiteReport {
    suite: &'static str,
    seed: u64,
    workers: usize,
    passed: bool,
    properties: Vec<Property>,
}

fn suite(args: &SuiteArgs) -> Result<Outcome, CliError> {
    let cfg = config::LoadedConfig::load(&args.config)?;
    let properties = suites::run(args.suite, &cfg, args.seed, args.workers)?;
    let passed = properties.iter().all(|p| p.passed);
    let mut stdout = String::new();
    for p in &properties {
        stdout.push_str(&format!(
            "{} {}{} samples={} max_deviation={:e} tolerance={:e}\n",
            if p.passed { "PASS" } else { "FAIL" },
            p.name,
            p.descriptor
                .as_ref()
                .map(|d| format!(" [{d}]"))
                .unwrap_or_default(),
            p.samples,
            p.max_deviation,
            p.tolerance,
        ));
    }
    stdout.push_str(&format!(
        "suite {}: {}\n",
        args.suite.name(),
        if passed { "PASS" } else { "FAIL" }
    ));
    let report = SuiteReport {
        suite: args.suite.name(),
        seed: args.seed,
        workers: args.workers,
        passed,
        properties,
    };
    let arguments = BTreeMap::from([
        ("suite", args.suite.name().to_string()),
        ("workers", args.workers.to_string()),
    ]);
    emit(
        &args.out,
        &format!("suite-{}.json", args.suite.name()),
        &report,
        "suite",
        arguments,
        &cfg.inputs,
        Some(args.seed),
    )?;
    Ok(Outcome {
        status: if passed { Status::Pass } else { Status::Fail },
        stdout,
    })
}

#[derive(Debug, Serialize)]
struct IntegralReport {
    graph: String,
    descriptor: String,
    integrand: String,
    paths: Vec<String>,
    mode: String,
    value: f64,
    fraction: Option<String>,
    samples: u64,
    std_error: f64,
    seed: u64,
    workers: usize,
}

fn integrate_cmd(args: &IntegrateArgs) -> Result<Outcome, CliError> {
    let graph = parse_graph(&read_input(&args.graph)?)?;
    let descriptor: GroupDescriptor = args.descriptor.parse()?;
    let paths = args
        .paths
        .iter()
        .map(|p| PathWord::parse(&graph, p))
        .collect::<Result<Vec<_>, _>>()?;
    let f = CylindricalFunction::builtin(&args.integrand, &graph, descriptor, paths)?;
    let budget = match args.mode {
        ModeArg::Exact => Budget::Exact,
        ModeArg::Mc => Budget::MonteCarlo {
            samples: args.samples,
            workers: args.workers,
        },
    };
    let r = integrate(&f, budget, args.seed)?;
    let report = IntegralReport {
        graph: graph.id().to_string(),
        descriptor: descriptor.to_string(),
        integrand: args.integrand.clone(),
        paths: args.paths.clone(),
        mode: r.mode.to_string(),
        value: r.value,
        fraction: r.fraction.as_ref().map(ToString::to_string),
        samples: r.samples,
        std_error: r.std_error,
        seed: args.seed,
        workers: args.workers,
    };
    let stdout = match (&report.fraction, r.mode) {
        (Some(fraction), _) => format!("value: {fraction}\n"),
        (None, Mode::Exact) => format!("value: {}\n", report.value),
        (None, Mode::MonteCarlo) => format!(
            "value: {}\nstd_error: {}\nsamples: {}\n",
            report.value, report.std_error, report.samples
        ),
    };
    let mut arguments = BTreeMap::from([
        ("descriptor", report.descriptor.clone()),
        ("integrand", report.integrand.clone()),
        ("mode", report.mode.clone()),
        ("paths", report.paths.join(" ")),
        ("workers", args.workers.to_string()),
    ]);
    if r.mode == Mode::MonteCarlo {
        arguments.insert("samples", args.samples.to_string());
    }
    emit(
        &args.out,
        "integral.json",
        &report,
        "integrate",
        arguments,
        std::slice::from_ref(&args.graph),
        Some(args.seed),
    )?;
    Ok(Outcome {
        status: Status::Pass,
        stdout,
    })
}
