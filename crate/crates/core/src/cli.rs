//! Command-line front end: argument parsing, config files and report output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::report::{to_csv, to_json, to_text, RunReport};
use crate::scenarios::{build, catalog, run_checks, CheckKind, Overrides, RunOptions, Subject};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "focallab", version, about = "Focal radii, shape-operator bounds and comparison checks on model geometries")]
pub struct Cli {
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for independent geodesic samples.
    #[arg(long, env = "FOCALLAB_JOBS", global = true)]
    pub jobs: Option<usize>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    /// Print every sample in text output.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the scenario catalog.
    List,
    /// Sectional curvature and Ric_k tables at sampled points.
    Curvature(ScenarioArgs),
    /// Focal radius of a submanifold, or conjugate radius of a base.
    Focal(ScenarioArgs),
    /// Second fundamental form and principal curvatures.
    Shape(ScenarioArgs),
    /// Run one named bound.
    Verify {
        #[arg(value_enum)]
        bound: Bound,
        #[command(flatten)]
        args: ScenarioArgs,
    },
    /// Tube volume by quadrature.
    Tube(ScenarioArgs),
    /// Every check of a scenario.
    Scenario {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    ShapeBound,
    ComparisonLemma,
    FocalPi2,
    Soul,
    ConjugateRadius,
}

impl Bound {
    fn check(self) -> CheckKind {
        match self {
            Bound::ShapeBound => CheckKind::ShapeBound,
            Bound::ComparisonLemma => CheckKind::ComparisonLemma,
            Bound::FocalPi2 => CheckKind::FocalPi2,
            Bound::Soul => CheckKind::Soul,
            Bound::ConjugateRadius => CheckKind::ConjugateRadius,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    #[arg(long)]
    pub scenario: String,
    #[command(flatten)]
    pub overrides: OverrideArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OverrideArgs {
    /// Radius of a geodesic sphere.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Radius of a circle.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub tube_radius: Option<f64>,
    #[arg(long)]
    pub random_families: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub normals_per_point: Option<usize>,
    #[arg(long)]
    pub ric_trials: Option<usize>,
    /// JSON file of overrides; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `run --config` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// One of `curvature`, `focal`, `shape`, `verify`, `tube`, `scenario`.
    pub command: String,
    pub scenario: String,
    /// Bound name when `command` is `verify`.
    #[serde(default)]
    pub bound: Option<Bound>,
    #[serde(default)]
    pub overrides: Overrides,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub timings: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownScenario(_) | Error::InvalidInput(_) | Error::KOutOfRange { .. } | Error::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Verification(other.to_string()),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

impl OverrideArgs {
    fn resolve(&self) -> Result<Overrides, CliError> {
        let mut ov: Overrides = match &self.config {
            Some(p) => read_json(p)?,
            None => Overrides::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => { $( if self.$f.is_some() { ov.$f = self.$f; } )* };
        }
        take!(rho, radius, k, t_max, tube_radius, random_families, seed, normals_per_point, ric_trials);
        Ok(ov)
    }
}

struct Output {
    format: Format,
    out: Option<PathBuf>,
    verbose: bool,
}

impl Output {
    fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string()))
            }
        }
    }

    fn report(&self, report: &RunReport) -> Result<(), CliError> {
        let text = match self.format {
            Format::Json => to_json(report),
            Format::Csv => to_csv(report),
            Format::Text => to_text(report, self.verbose),
        };
        self.write(&text)
    }
}

#[derive(Serialize)]
struct CatalogEntry {
    id: &'static str,
    description: String,
    chart: String,
    kind: &'static str,
    kappa: i32,
    k: usize,
    checks: Vec<&'static str>,
    expected: Vec<crate::scenarios::Expected>,
}

fn list(out: &Output) -> Result<i32, CliError> {
    let entries: Vec<CatalogEntry> = catalog()
        .into_iter()
        .map(|s| CatalogEntry {
            id: s.id,
            chart: s.chart.name().to_string(),
            kind: match s.subject {
                Subject::Chart => "chart",
                Subject::Submanifold(_) => "submanifold",
                Subject::Base { .. } => "base",
            },
            kappa: s.hypothesis.kappa.as_i32(),
            k: s.hypothesis.k,
            checks: s.checks.iter().map(|c| c.name()).collect(),
            expected: s.expected,
            description: s.description,
        })
        .collect();
    let text = match out.format {
        Format::Json => to_json(&entries),
        Format::Csv => {
            let mut t = String::from("id,kind,chart,kappa,k,description\n");
            for e in &entries {
                t.push_str(&format!("{},{},{},{},{},\"{}\"\n", e.id, e.kind, e.chart, e.kappa, e.k, e.description.replace('"', "\"\"")));
            }
            t
        }
        Format::Text => {
            let mut t = String::new();
            for e in &entries {
                t.push_str(&format!("{:<24} {:<12} kappa={:<2} k={}  {}\n", e.id, e.kind, e.kappa, e.k, e.description));
            }
            t
        }
    };
    out.write(&text)?;
    Ok(EXIT_PASS)
}

fn checks_for(command: &str, bound: Option<Bound>, subject: &Subject, all: &[CheckKind]) -> Result<Vec<CheckKind>, CliError> {
    Ok(match command {
        "curvature" => vec![CheckKind::Curvature, CheckKind::RicEigensum],
        "focal" => match subject {
            Subject::Submanifold(_) => vec![CheckKind::FocalRadius],
            Subject::Base { .. } => vec![CheckKind::ConjugateRadius],
            Subject::Chart => return Err(CliError::Usage("focal needs a submanifold or base scenario".into())),
        },
        "shape" => vec![CheckKind::SecondFundamentalForm],
        "tube" => vec![CheckKind::Tube],
        "verify" => vec![bound.ok_or_else(|| CliError::Usage("verify needs a bound".into()))?.check()],
        "scenario" => all.to_vec(),
        other => return Err(CliError::Usage(format!("unknown command {other:?}"))),
    })
}

fn execute(command: &str, bound: Option<Bound>, id: &str, ov: &Overrides, opts: RunOptions, out: &Output) -> Result<i32, CliError> {
    let s = build(id, ov)?;
    let checks = checks_for(command, bound, &s.subject, &s.checks)?;
    let report = run_checks(&s, &checks, opts)?;
    out.report(&report)?;
    Ok(if report.pass() { EXIT_PASS } else { EXIT_FAIL })
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let jobs = cli.jobs.unwrap_or(1).max(1);
    let out = Output { format: cli.format.unwrap_or_default(), out: cli.out.clone(), verbose: cli.verbose };
    let opts = RunOptions { jobs, timings: cli.timings };
    match &cli.command {
        Command::List => list(&out),
        Command::Curvature(a) => execute("curvature", None, &a.scenario, &a.overrides.resolve()?, opts, &out),
        Command::Focal(a) => execute("focal", None, &a.scenario, &a.overrides.resolve()?, opts, &out),
        Command::Shape(a) => execute("shape", None, &a.scenario, &a.overrides.resolve()?, opts, &out),
        Command::Tube(a) => execute("tube", None, &a.scenario, &a.overrides.resolve()?, opts, &out),
        Command::Verify { bound, args } => execute("verify", Some(*bound), &args.scenario, &args.overrides.resolve()?, opts, &out),
        Command::Scenario { id, overrides } => execute("scenario", None, id, &overrides.resolve()?, opts, &out),
        Command::Run { config } => {
            let cfg: RunConfig = read_json(config)?;
            let out = Output {
                format: cli.format.or(cfg.format).unwrap_or_default(),
                out: cli.out.clone().or(cfg.out.clone()),
                verbose: cli.verbose,
            };
            let opts = RunOptions { jobs: cli.jobs.or(cfg.jobs).unwrap_or(1).max(1), timings: cli.timings || cfg.timings };
            execute(&cfg.command, cfg.bound, &cfg.scenario, &cfg.overrides, opts, &out)
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            EXIT_FAIL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        let bad = r#"{"command": "scenario", "scenario": "sphere2", "overides": {}}"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());
        let bad_override = r#"{"command": "scenario", "scenario": "sphere2", "overrides": {"tmax": 3}}"#;
        assert!(serde_json::from_str::<RunConfig>(bad_override).is_err());
        let good = r#"{"command": "verify", "bound": "shape-bound", "scenario": "geodesic_sphere", "overrides": {"rho": 0.5}}"#;
        let cfg: RunConfig = serde_json::from_str(good).unwrap();
        assert_eq!(cfg.bound, Some(Bound::ShapeBound));
        assert_eq!(cfg.overrides.rho, Some(0.5));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["focallab", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["focallab", "focal", "--scenario", "no_such_thing"]), EXIT_USAGE);
        assert_eq!(run(["focallab", "focal", "--scenario", "sphere3"]), EXIT_USAGE);
    }

    #[test]
    fn cli_flags_override_config_values() {
        let args = OverrideArgs { rho: Some(0.4), ..OverrideArgs::default() };
        assert_eq!(args.resolve().unwrap().rho, Some(0.4));
    }
}
