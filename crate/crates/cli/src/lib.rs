//! Command-line front end for `dynmap`.
//!
//! Everything runs through [`run`], which takes the argument list and
//! writers explicitly so tests can drive the CLI in-process.

pub mod grid;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dynmap::dilation::{self, OracleCheck};
use dynmap::dynmaps::{default_cp_tolerance, MapFile, MapKind};
use dynmap::models::{Model, NoiseProfile};
use dynmap::sweep::{self, SweepVerdict};

use grid::{parse_grid, parse_number};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Map violates a defining constraint, or an oracle check failed.
    pub const VIOLATION: i32 = 1;
    /// Map is valid but not completely positive.
    pub const NCP: i32 = 2;
    /// Intermediate map undefined (A(t₁,0) not invertible).
    pub const SINGULAR: i32 = 3;
    /// Bad arguments, unknown model/parameters, or unparsable input.
    pub const USAGE: i32 = 64;
    pub const NO_INPUT: i32 = 66;
    /// Numerical failure inside the library.
    pub const SOFTWARE: i32 = 70;
    pub const CANT_CREATE: i32 = 73;
}

#[derive(Debug, Parser)]
#[command(name = "dynmap", version, about = "Stochastic/dynamical maps, intermediate-map CP checks and regime sweeps")]
pub struct Cli {
    /// CP tolerance: a Choi eigenvalue below -tolerance means NCP [default: 1e-9·d]
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Flat JSON object with the same keys as the flags; flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Spinbath,
    Twoqubit,
    Optical,
    All,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// werner | optical | spinbath | twoqubit
    pub model: Option<String>,
    /// Werner noise profile: cos2m | exp | stretched
    #[arg(long)]
    pub profile: Option<String>,
    /// Model parameter KEY=VALUE (sweeps accept a grid as VALUE)
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a map file against the map constraints and classify it
    Validate { file: Option<PathBuf> },
    /// Emit A(t,0) (or its B form) of a model as a map file
    Model {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        t: Option<String>,
        #[arg(long, value_enum, default_value = "a")]
        kind: Kind,
    },
    /// Spectrum and verdict of the intermediate map A(t2,t1)
    Intermediate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        t1: Option<String>,
        #[arg(long)]
        t2: Option<String>,
    },
    /// Intermediate-map spectra over t1 × mu × parameter grids
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Grid: start:stop:step or a comma list
        #[arg(long)]
        t1: Option<String>,
        #[arg(long)]
        mu: Option<String>,
    },
    /// Werner-map concurrence along a time grid
    Concurrence {
        #[arg(long)]
        profile: Option<String>,
        #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        t: Option<String>,
    },
    /// Cross-check closed-form maps against the Hamiltonian/spectral oracles
    Oracle {
        #[arg(value_enum)]
        which: Option<Which>,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: exit::USAGE, message: message.into() }
    }
}

impl From<dynmap::Error> for Failure {
    fn from(e: dynmap::Error) -> Self {
        use dynmap::Error::*;
        let code = match e {
            InvalidParameter(_) | NegativeTime(_) | Format(_) | SizeCap(_) => exit::USAGE,
            _ => exit::SOFTWARE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// What a command produced: its exit code and the body to emit.
#[derive(Debug)]
pub struct Report {
    pub code: i32,
    pub body: String,
}

const CONFIG_KEYS: &[&str] = &["tolerance", "format", "output", "model", "profile", "t", "t1", "t2", "mu", "which", "file"];

/// Flat config: known keys plus model parameters, all kept as strings.
#[derive(Debug, Default)]
struct Config {
    known: BTreeMap<String, String>,
    params: BTreeMap<String, String>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else { return Ok(Config::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| Failure {
            code: exit::NO_INPUT,
            message: format!("cannot read config {}: {e}", path.display()),
        })?;
        let obj: BTreeMap<String, Value> = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("config {} is not a flat JSON object: {e}", path.display())))?;
        let mut cfg = Config::default();
        for (k, v) in obj {
            let s = match v {
                Value::String(s) => s,
                Value::Number(n) => n.to_string(),
                other => return Err(Failure::usage(format!("config key '{k}' must be a number or string, got {other}"))),
            };
            if CONFIG_KEYS.contains(&k.as_str()) {
                cfg.known.insert(k, s);
            } else {
                cfg.params.insert(k, s);
            }
        }
        Ok(cfg)
    }

    fn pick(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.known.get(key).cloned())
    }

    fn require(&self, flag: Option<String>, key: &str) -> Result<String, Failure> {
        self.pick(flag, key).ok_or_else(|| Failure::usage(format!("missing required value '{key}'")))
    }

    /// Config parameters overlaid with `KEY=VALUE` flags.
    fn merged_params(&self, flags: &[String]) -> Result<BTreeMap<String, String>, Failure> {
        let mut out = self.params.clone();
        for p in flags {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("parameter '{p}' must be KEY=VALUE")))?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(out)
    }
}

struct Resolved {
    tolerance: Option<f64>,
    format: Option<Format>,
    output: Option<PathBuf>,
}

fn resolve_globals(cli: &Cli, cfg: &Config) -> Result<Resolved, Failure> {
    let tolerance = match cli.tolerance.map(|t| t.to_string()).or_else(|| cfg.known.get("tolerance").cloned()) {
        Some(s) => {
            let t = parse_number(&s).map_err(Failure::usage)?;
            if !(t > 0.0) {
                return Err(Failure::usage("tolerance must be positive"));
            }
            Some(t)
        }
        None => None,
    };
    let format = match (cli.format, cfg.known.get("format")) {
        (Some(f), _) => Some(f),
        (None, Some(s)) => Some(Format::from_str(s, true).map_err(|_| Failure::usage(format!("unknown format '{s}'")))?),
        (None, None) => None,
    };
    let output = cli.output.clone().or_else(|| cfg.known.get("output").map(PathBuf::from));
    Ok(Resolved { tolerance, format, output })
}

fn numeric_params(raw: &BTreeMap<String, String>) -> Result<BTreeMap<String, f64>, Failure> {
    raw.iter()
        .map(|(k, v)| Ok((k.clone(), parse_number(v).map_err(|e| Failure::usage(format!("parameter {k}: {e}")))?)))
        .collect()
}

fn build_model(cfg: &Config, args: &ModelArgs) -> Result<Model, Failure> {
    let id = cfg.require(args.model.clone(), "model")?;
    let profile = cfg.pick(args.profile.clone(), "profile");
    let params = numeric_params(&cfg.merged_params(&args.params)?)?;
    Ok(Model::from_params(&id, profile.as_deref(), &params)?)
}

/// One model per point of the Cartesian product of the parameter grids.
fn build_model_grid(cfg: &Config, args: &ModelArgs) -> Result<Vec<Model>, Failure> {
    let id = cfg.require(args.model.clone(), "model")?;
    let profile = cfg.pick(args.profile.clone(), "profile");
    let grids: Vec<(String, Vec<f64>)> = cfg
        .merged_params(&args.params)?
        .into_iter()
        .map(|(k, v)| {
            let g = parse_grid(&v).map_err(|e| Failure::usage(format!("parameter {k}: {e}")))?;
            Ok((k, g))
        })
        .collect::<Result<_, Failure>>()?;
    let mut combos = vec![BTreeMap::new()];
    for (k, g) in &grids {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                g.iter().map(move |&v| {
                    let mut c = c.clone();
                    c.insert(k.clone(), v);
                    c
                })
            })
            .collect();
    }
    combos
        .iter()
        .map(|c| Ok(Model::from_params(&id, profile.as_deref(), c)?))
        .collect()
}

fn number_arg(cfg: &Config, flag: Option<String>, key: &str) -> Result<f64, Failure> {
    parse_number(&cfg.require(flag, key)?).map_err(|e| Failure::usage(format!("{key}: {e}")))
}

fn grid_arg(cfg: &Config, flag: Option<String>, key: &str) -> Result<Vec<f64>, Failure> {
    parse_grid(&cfg.require(flag, key)?).map_err(|e| Failure::usage(format!("{key}: {e}")))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn cmd_validate(cfg: &Config, g: &Resolved, file: Option<PathBuf>) -> Result<Report, Failure> {
    let path = cfg.require(file.map(|p| p.display().to_string()), "file")?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure { code: exit::NO_INPUT, message: format!("cannot read {path}: {e}") })?;
    let file = MapFile::parse(&text).map_err(|e| Failure::usage(e.to_string()))?;
    let a = file.stochastic().map_err(|e| Failure::usage(e.to_string()))?;
    let b = a.to_dynamical();
    let report = match file.kind {
        MapKind::A => a.validate(),
        MapKind::B => b.validate(),
    };
    let tol = g.tolerance.unwrap_or_else(|| default_cp_tolerance(file.d));
    let cp = if report.is_valid() { Some(b.cp_classify(tol)?) } else { None };
    let code = match &cp {
        None => exit::VIOLATION,
        Some(r) if r.is_cp() => exit::OK,
        Some(_) => exit::NCP,
    };

    let body = match g.format {
        Some(Format::Csv) => return Err(Failure::usage("validate supports --format json or the default text report")),
        Some(Format::Json) => to_json(&json!({
            "d": file.d,
            "kind": file.kind,
            "violations": report.violations,
            "eigenvalues": cp.as_ref().map(|r| &r.eigenvalues),
            "lambda_min": cp.as_ref().map(|r| r.min_eigenvalue),
            "tolerance": tol,
            "verdict": cp.as_ref().map(|r| r.verdict),
        })),
        None => {
            let mut s = format!("map: kind {:?}, d = {}\n", file.kind, file.d);
            if report.is_valid() {
                s.push_str("constraints: ok\n");
            }
            for v in &report.violations {
                s.push_str(&format!("violation: {} (magnitude {})\n", v.constraint, output::fmt_g(v.magnitude)));
            }
            if let Some(r) = &cp {
                let eigs: Vec<String> = r.eigenvalues.iter().map(|&e| output::fmt_g(e)).collect();
                s.push_str(&format!("choi eigenvalues: {}\n", eigs.join(" ")));
                s.push_str(&format!("lambda_min: {}\n", output::fmt_g(r.min_eigenvalue)));
                s.push_str(&format!("verdict: {}\n", r.verdict));
            }
            s
        }
    };
    Ok(Report { code, body })
}

fn cmd_model(cfg: &Config, g: &Resolved, args: &ModelArgs, t: Option<String>, kind: Kind) -> Result<Report, Failure> {
    if g.format == Some(Format::Csv) {
        return Err(Failure::usage("model emits the JSON map format only"));
    }
    let model = build_model(cfg, args)?;
    let a = model.a_map(number_arg(cfg, t, "t")?)?;
    let file = match kind {
        Kind::A => MapFile::from_stochastic(&a),
        Kind::B => MapFile::from_dynamical(&a.to_dynamical()),
    };
    Ok(Report { code: exit::OK, body: file.to_json() + "\n" })
}

fn cmd_intermediate(
    cfg: &Config,
    g: &Resolved,
    args: &ModelArgs,
    t1: Option<String>,
    t2: Option<String>,
) -> Result<Report, Failure> {
    let model = build_model(cfg, args)?;
    let t1 = number_arg(cfg, t1, "t1")?;
    let t2 = number_arg(cfg, t2, "t2")?;
    if !(t1 > 0.0 && t2 > t1) {
        return Err(Failure::usage(format!("need t2 > t1 > 0 (t1={t1}, t2={t2})")));
    }
    let tol = g.tolerance.unwrap_or_else(|| default_cp_tolerance(2));
    let rec = sweep::evaluate(&model, t1, t2, tol)?;
    let code = if rec.verdict == SweepVerdict::Singular { exit::SINGULAR } else { exit::OK };
    let body = match g.format {
        Some(Format::Csv) => output::sweep_csv(std::slice::from_ref(&rec)),
        _ => to_json(&rec),
    };
    Ok(Report { code, body })
}

fn cmd_sweep(cfg: &Config, g: &Resolved, args: &ModelArgs, t1: Option<String>, mu: Option<String>) -> Result<Report, Failure> {
    let models = build_model_grid(cfg, args)?;
    let t1 = grid_arg(cfg, t1, "t1")?;
    let mu = grid_arg(cfg, mu, "mu")?;
    let records = sweep::run_sweep(&models, &t1, &mu, g.tolerance)?;
    let body = match g.format {
        Some(Format::Json) => to_json(&records),
        _ => output::sweep_csv(&records),
    };
    Ok(Report { code: exit::OK, body })
}

fn cmd_concurrence(
    cfg: &Config,
    g: &Resolved,
    profile: Option<String>,
    params: &[String],
    t: Option<String>,
) -> Result<Report, Failure> {
    let args = ModelArgs { model: Some("werner".into()), profile, params: params.to_vec() };
    let profile: NoiseProfile = match build_model(cfg, &args)? {
        Model::Werner(p) => p,
        _ => unreachable!("built as werner"),
    };
    let points = sweep::concurrence_trajectory(&profile, &grid_arg(cfg, t, "t")?)?;
    let body = match g.format {
        Some(Format::Json) => to_json(&points),
        _ => output::concurrence_csv(&points),
    };
    Ok(Report { code: exit::OK, body })
}

fn cmd_oracle(cfg: &Config, g: &Resolved, which: Option<Which>) -> Result<Report, Failure> {
    let which = match (which, cfg.known.get("which")) {
        (Some(w), _) => w,
        (None, Some(s)) => Which::from_str(s, true).map_err(|_| Failure::usage(format!("unknown oracle '{s}'")))?,
        (None, None) => Which::All,
    };
    let checks: Vec<OracleCheck> = match which {
        Which::Spinbath => vec![dilation::spin_bath_check()?, dilation::spin_bath_dense_check()?],
        Which::Twoqubit => vec![dilation::two_qubit_check()?],
        Which::Optical => vec![dilation::optical_check()?],
        Which::All => dilation::all_checks()?,
    };
    let code = if checks.iter().all(OracleCheck::passed) { exit::OK } else { exit::VIOLATION };
    let body = match g.format {
        Some(Format::Json) => to_json(&checks),
        Some(Format::Csv) => output::oracle_csv(&checks),
        None => checks
            .iter()
            .map(|c| {
                format!(
                    "{:<16} points={:<4} max_deviation={:<12} tolerance={:<8} {}\n",
                    c.name,
                    c.points,
                    format!("{:.3e}", c.max_deviation),
                    format!("{:.0e}", c.tolerance),
                    if c.passed() { "PASS" } else { "FAIL" }
                )
            })
            .collect(),
    };
    Ok(Report { code, body })
}

/// Parses the already-split arguments and executes the command without
/// touching stdout or the output file.
pub fn execute(cli: Cli) -> Result<(Report, Option<PathBuf>), Failure> {
    let cfg = Config::load(cli.config.as_deref())?;
    let g = resolve_globals(&cli, &cfg)?;
    let report = match cli.command {
        Command::Validate { file } => cmd_validate(&cfg, &g, file)?,
        Command::Model { model, t, kind } => cmd_model(&cfg, &g, &model, t, kind)?,
        Command::Intermediate { model, t1, t2 } => cmd_intermediate(&cfg, &g, &model, t1, t2)?,
        Command::Sweep { model, t1, mu } => cmd_sweep(&cfg, &g, &model, t1, mu)?,
        Command::Concurrence { profile, params, t } => cmd_concurrence(&cfg, &g, profile, &params, t)?,
        Command::Oracle { which } => cmd_oracle(&cfg, &g, which)?,
    };
    Ok((report, g.output))
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    exit::OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    exit::USAGE
                }
            };
        }
    };
    match execute(cli) {
        Ok((report, None)) => {
            let _ = stdout.write_all(report.body.as_bytes());
            report.code
        }
        Ok((report, Some(path))) => match std::fs::write(&path, &report.body) {
            Ok(()) => report.code,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                exit::CANT_CREATE
            }
        },
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
