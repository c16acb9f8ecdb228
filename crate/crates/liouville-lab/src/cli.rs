//! Batch front-end behind the `liouville-lab` binary.
//!
//! Every operation of the library is a subcommand. A command line is first
//! resolved into a [`RunConfig`] (the subcommand, its parameter block, the
//! output target and format, the seed and the full solver configuration);
//! the config is then executed by [`run`]. The same config can be written to
//! disk with `--save-config` and replayed with `run --config`, and every
//! output embeds it, so each table can be regenerated exactly.
//!
//! Physical parameters (`--a`, `--N`, `--m1`, `--xi`, …) are mandatory;
//! only numerical controls have defaults.
//!
//! Exit status: `0` on success, `1` on usage or computation errors, `2` when
//! the computation succeeded but a verification claim failed.

use crate::catalog;
use crate::example::{self, ExampleOptions};
use crate::geometry::{self, ScanGrid};
use crate::polygon::{self, PointConfig, PolygonCase};
use crate::radial::{self, SolverConfig};
use crate::regime::{self, Params};
use crate::verify::{self, VerifyOptions};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Version of the on-disk [`RunConfig`] layout and of the CSV headers.
pub const CONFIG_VERSION: u32 = 1;

/// Default seed of randomized scans.
pub const DEFAULT_SEED: u64 = 7;

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Which geometric scan to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    /// Troyanov inequalities versus `2 ≤ m < N+1`.
    Equivalence,
    /// The origin inequality is never satisfied.
    Origin,
    /// Both scans.
    Both,
}

/// The parameter block of each subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "params", rename_all = "lowercase")]
pub enum Command {
    Interval {
        a: f64,
        #[serde(rename = "N")]
        n: f64,
    },
    Solve {
        a: f64,
        #[serde(rename = "N")]
        n: f64,
        /// Initial datum `u(0)`; exclusive with `beta`.
        s: Option<f64>,
        /// Target mass; exclusive with `s`.
        beta: Option<f64>,
        /// Enlarge the truncation radius until `r u'` stabilizes.
        extend: bool,
    },
    Sweep {
        a: f64,
        #[serde(rename = "N")]
        n: f64,
        s_min: f64,
        s_max: f64,
        samples: usize,
    },
    Catalog {
        a: f64,
        #[serde(rename = "N")]
        n: f64,
    },
    Troyanov {
        /// Single check `(a, N, m)`; all `None` when `scan` is set.
        a: Option<f64>,
        #[serde(rename = "N")]
        n: Option<f64>,
        m: Option<u32>,
        origin: bool,
        scan: Option<ScanKind>,
        /// Grid override for scans.
        grid: Option<ScanGrid>,
    },
    Polygon {
        #[serde(rename = "N")]
        n: f64,
        /// Explicit configuration to check; multistart search when `None`.
        points: Option<Vec<Complex64>>,
        beta0: Option<f64>,
        /// Exponent for the `a > 1` identity.
        a: Option<f64>,
        starts: usize,
    },
    Example {
        a: f64,
        m1: u32,
        xi: f64,
        xi_arg: f64,
        options: ExampleOptions,
    },
    Verify {
        criteria: Vec<u8>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Interval { .. } => "interval",
            Command::Solve { .. } => "solve",
            Command::Sweep { .. } => "sweep",
            Command::Catalog { .. } => "catalog",
            Command::Troyanov { .. } => "troyanov",
            Command::Polygon { .. } => "polygon",
            Command::Example { .. } => "example",
            Command::Verify { .. } => "verify",
        }
    }
}

/// A fully resolved run: what to compute, with which numerical controls,
/// and where to write it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub version: u32,
    #[serde(flatten)]
    pub command: Command,
    /// Output file; standard output when `None`.
    pub output: Option<PathBuf>,
    pub format: Format,
    /// Seed of randomized scans.
    pub seed: u64,
    /// Radial solver controls after overrides.
    pub solver: SolverConfig,
}

impl RunConfig {
    /// Reads a config written by [`RunConfig::save`].
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        if cfg.version != CONFIG_VERSION {
            return Err(CliError::Usage(format!(
                "config {} has version {}, this build reads version {CONFIG_VERSION}",
                path.display(),
                cfg.version
            )));
        }
        Ok(cfg)
    }

    /// Writes the config as pretty JSON.
    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        write_file(path, &to_json(self)?)
    }
}

/// Errors of the front-end.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed command line, as rendered by the argument parser.
    #[error("{0}")]
    Arguments(String),
    #[error("error: {0}")]
    Usage(String),
    #[error("error: {0}")]
    Compute(#[from] crate::Error),
    #[error("error: i/o: {0}")]
    Io(String),
}

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// The JSON document (`{config, result}`), also for CSV runs where it
    /// is the sidecar.
    pub document: Value,
    /// Whether a verification claim of the subcommand failed.
    pub verification_failed: bool,
}

// ---------------------------------------------------------------------------
// Command line

#[derive(Debug, Parser)]
#[command(name = "liouville-lab", version, about = "Numerical verification lab for −Δu = e^{au} + |x|^{2N} e^u")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
    /// Output file (standard output when omitted). CSV runs also write a
    /// `<file>.json` sidecar with the resolved config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed of randomized scans.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the resolved config to this file before running.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

/// Solver tolerance overrides.
#[derive(Debug, Args)]
struct TolArgs {
    /// Relative tolerance of the integrator.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Absolute tolerance of the integrator.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Largest series-start radius.
    #[arg(long, global = true)]
    r_init: Option<f64>,
    /// Far-field truncation radius.
    #[arg(long, global = true)]
    r_max: Option<f64>,
    /// Slope stabilization criterion per decade.
    #[arg(long, global = true)]
    slope_window: Option<f64>,
    /// Overflow guard for u (default 700/a).
    #[arg(long, global = true)]
    blowup_threshold: Option<f64>,
    /// Largest step in log r.
    #[arg(long, global = true)]
    max_dt: Option<f64>,
}

impl TolArgs {
    fn apply(&self, base: SolverConfig) -> SolverConfig {
        SolverConfig {
            rel_tol: self.rel_tol.unwrap_or(base.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(base.abs_tol),
            r_init: self.r_init.unwrap_or(base.r_init),
            r_max: self.r_max.unwrap_or(base.r_max),
            slope_window: self.slope_window.unwrap_or(base.slope_window),
            blowup_threshold: self.blowup_threshold.or(base.blowup_threshold),
            max_dt: self.max_dt.unwrap_or(base.max_dt),
        }
    }
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Exponent a > 0.
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Weight exponent N > −1.
    #[arg(long = "N", allow_negative_numbers = true)]
    n: f64,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Regime cell, necessary bounds and radial mass interval.
    Interval(ParamArgs),
    /// Integrate one radial profile from u(0) = s, or shoot for a mass.
    #[command(group(ArgGroup::new("datum").required(true).args(["s", "beta"])))]
    Solve {
        #[command(flatten)]
        p: ParamArgs,
        /// Initial datum u(0).
        #[arg(long, allow_negative_numbers = true)]
        s: Option<f64>,
        /// Target total mass.
        #[arg(long)]
        beta: Option<f64>,
        /// Enlarge r_max until r u' stabilizes (always on with --beta).
        #[arg(long)]
        extend: bool,
    },
    /// Sample β(s) and extrapolate the ends of the mass interval.
    Sweep {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, allow_negative_numbers = true, default_value_t = -30.0)]
        s_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 30.0)]
        s_max: f64,
        /// Number of samples.
        #[arg(long = "n", id = "samples", default_value_t = 61)]
        samples: usize,
    },
    /// Every admissible limiting mass with its mechanism.
    Catalog(ParamArgs),
    /// Cone angles and Troyanov inequalities for (a, N, m), or the scans.
    Troyanov {
        #[arg(long, required_unless_present = "scan")]
        a: Option<f64>,
        #[arg(long = "N", allow_negative_numbers = true, required_unless_present = "scan")]
        n: Option<f64>,
        /// Number of finite concentration points.
        #[arg(long, required_unless_present = "scan")]
        m: Option<u32>,
        /// The origin concentrates too.
        #[arg(long)]
        origin: bool,
        /// Run a scan instead of a single check.
        #[arg(long, value_enum, conflicts_with_all = ["a", "n", "m", "origin"])]
        scan: Option<ScanKind>,
        /// Scan grid exponents (comma separated); default grid when omitted.
        #[arg(long, value_delimiter = ',', requires = "scan")]
        a_values: Option<Vec<f64>>,
        /// Scan grid weights (comma separated); default grid when omitted.
        #[arg(long = "N-values", value_delimiter = ',', requires = "scan")]
        n_values: Option<Vec<f64>>,
    },
    /// Balance equations: check a configuration or search for zeros.
    Polygon {
        #[arg(long = "N")]
        n: f64,
        /// Points as "re,im;re,im;…"; multistart search when omitted.
        #[arg(long, allow_hyphen_values = true, requires = "beta0")]
        points: Option<String>,
        /// Mass at the origin (required with --points).
        #[arg(long)]
        beta0: Option<f64>,
        /// Use the a > 1 identity with this exponent.
        #[arg(long)]
        a: Option<f64>,
        /// Random starts of the search.
        #[arg(long, default_value_t = 64)]
        starts: usize,
    },
    /// The explicit concentrating family, end to end.
    Example {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        m1: u32,
        /// Modulus of the drift ξ.
        #[arg(long)]
        xi: f64,
        /// Phase of ξ.
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        xi_arg: f64,
        /// Disk radius of the mass measurement.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run the verification suites.
    Verify {
        /// Criteria to run (comma separated, 1–10); all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
    },
    /// Replay a saved config (its output target and format included; the
    /// other flags are ignored).
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_points(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let mut it = pair.split(',').map(|x| x.trim().parse::<f64>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(re)), Some(Ok(im)), None) => Ok(Complex64::new(re, im)),
                _ => Err(CliError::Usage(format!("cannot parse point {pair:?}; expected \"re,im\""))),
            }
        })
        .collect()
}

/// Resolves command-line arguments (including the program name) into a
/// config. Returns `Ok(None)` after printing help or version.
pub fn parse_args<I: IntoIterator<Item = OsString>>(args: I) -> Result<Option<(RunConfig, Option<PathBuf>)>, CliError> {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(None);
            }
            return Err(CliError::Arguments(e.render().to_string()));
        }
    };
    let solver = cli.tol.apply(SolverConfig::default());
    let command = match cli.command {
        CliCommand::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            return Ok(Some((cfg, cli.save_config)));
        }
        CliCommand::Interval(p) => Command::Interval { a: p.a, n: p.n },
        CliCommand::Solve { p, s, beta, extend } => Command::Solve { a: p.a, n: p.n, s, beta, extend },
        CliCommand::Sweep { p, s_min, s_max, samples } => Command::Sweep { a: p.a, n: p.n, s_min, s_max, samples },
        CliCommand::Catalog(p) => Command::Catalog { a: p.a, n: p.n },
        CliCommand::Troyanov { a, n, m, origin, scan, a_values, n_values } => {
            let grid = match (a_values, n_values) {
                (None, None) => None,
                (av, nv) => {
                    let kind = scan.expect("clap enforces --scan");
                    let default = match kind {
                        ScanKind::Origin => ScanGrid::default_claim(),
                        _ => ScanGrid::default_equivalence(),
                    };
                    Some(ScanGrid { a_values: av.unwrap_or(default.a_values), n_values: nv.unwrap_or(default.n_values) })
                }
            };
            Command::Troyanov { a, n, m, origin, scan, grid }
        }
        CliCommand::Polygon { n, points, beta0, a, starts } => {
            let points = points.as_deref().map(parse_points).transpose()?;
            Command::Polygon { n, points, beta0, a, starts }
        }
        CliCommand::Example { a, m1, xi, xi_arg, delta } => {
            let mut options = ExampleOptions { solver, ..ExampleOptions::default() };
            if let Some(d) = delta {
                options.delta = d;
            }
            Command::Example { a, m1, xi, xi_arg, options }
        }
        CliCommand::Verify { criteria } => {
            Command::Verify { criteria: criteria.unwrap_or_else(|| (1..=verify::CRITERIA).collect()) }
        }
    };
    let cfg = RunConfig {
        version: CONFIG_VERSION,
        command,
        output: cli.out,
        format: cli.format,
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        solver,
    };
    Ok(Some((cfg, cli.save_config)))
}

/// Entry point of the binary: parses, runs, writes, and returns the exit
/// status.
pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let (cfg, save) = match parse_args(args) {
        Ok(Some(x)) => x,
        Ok(None) => return 0,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    if let Some(path) = save {
        if let Err(e) = cfg.save(&path) {
            eprintln!("{e}");
            return 1;
        }
    }
    match run(&cfg) {
        Ok(out) if out.verification_failed => {
            eprintln!("verification failed; see the output for details");
            2
        }
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

// ---------------------------------------------------------------------------
// Execution

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn params(a: f64, n: f64) -> Result<Params, CliError> {
    Ok(Params::new(a, n)?)
}

/// A computed result: its JSON form, an optional CSV table and whether a
/// verification claim failed.
struct Computed {
    result: Value,
    table: Option<Vec<u8>>,
    failed: bool,
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        wr.write_record(&r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    wr.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Io(e.to_string()))
}

fn compute(cfg: &RunConfig) -> Result<Computed, CliError> {
    let solver = cfg.solver;
    solver.validate()?;
    let csv_wanted = cfg.format == Format::Csv;
    let no_csv = |name: &str| -> Result<Computed, CliError> {
        Err(CliError::Usage(format!("`{name}` has no CSV form; use --format json")))
    };
    match &cfg.command {
        Command::Interval { a, n } => {
            if csv_wanted {
                return no_csv("interval");
            }
            let p = params(*a, *n)?;
            let tag = regime::classify_regime(p);
            let (bounds, interval) = if p.is_degenerate() {
                (None, None)
            } else {
                (Some(regime::necessary_bounds(p)?), Some(regime::radial_interval(p)?))
            };
            let rigid = p.is_degenerate().then(|| 4.0 * p.n1());
            Ok(Computed {
                result: json!({ "params": p, "regime": tag, "bounds": bounds, "radial_interval": interval, "rigid_mass": rigid }),
                table: None,
                failed: false,
            })
        }
        Command::Solve { a, n, s, beta, extend } => {
            let p = params(*a, *n)?;
            let profile = match (s, beta) {
                (Some(s), None) if *extend => radial::integrate_extended(*s, p, &solver)?,
                (Some(s), None) => radial::integrate(*s, p, &solver)?,
                (None, Some(b)) => radial::solve_for_mass(p, *b, &solver)?,
                _ => return Err(CliError::Usage("exactly one of --s and --beta is required".into())),
            };
            let table = if csv_wanted {
                let mut buf = Vec::new();
                profile.write_csv(&mut buf)?;
                Some(buf)
            } else {
                None
            };
            let mut result = profile.sidecar();
            if !csv_wanted {
                result["profile"] = json!({ "r": profile.grid, "u": profile.u });
            }
            Ok(Computed { result, table, failed: false })
        }
        Command::Sweep { a, n, s_min, s_max, samples } => {
            let sw = radial::sweep_endpoints(params(*a, *n)?, *s_min, *s_max, *samples, &solver)?;
            let table = if csv_wanted {
                let rows = sw.rows.iter().map(|r| {
                    vec![
                        r.s.to_string(),
                        opt(r.beta),
                        opt(r.beta1),
                        opt(r.beta2),
                        r.stabilized.to_string(),
                        opt(r.r_end),
                        r.status.clone(),
                    ]
                });
                Some(csv_table(&["s", "beta", "beta1", "beta2", "stabilized", "r_end", "status"], rows)?)
            } else {
                None
            };
            let failed = !(sw.agrees && sw.monotone);
            let result = if csv_wanted {
                json!({
                    "params": sw.params, "end_minus": sw.end_minus, "end_plus": sw.end_plus,
                    "predicted": sw.predicted, "agrees": sw.agrees, "monotone": sw.monotone,
                    "monotonicity_violations": sw.monotonicity_violations,
                })
            } else {
                value(&sw)?
            };
            Ok(Computed { result, table, failed })
        }
        Command::Catalog { a, n } => {
            let c = catalog::enumerate(params(*a, *n)?)?;
            let table = if csv_wanted {
                let rows = c.entries.iter().map(|e| {
                    vec![
                        opt(e.value),
                        opt(e.interval.map(|i| i[0])),
                        opt(e.interval.map(|i| i[1])),
                        value(&e.mechanism).map(|v| v.as_str().unwrap_or_default().to_string()).unwrap_or_default(),
                        value(&e.case).map(|v| v.as_str().unwrap_or_default().to_string()).unwrap_or_default(),
                        e.m.map(|m| m.to_string()).unwrap_or_default(),
                        e.suspect.to_string(),
                    ]
                });
                Some(csv_table(&["value", "interval_lo", "interval_hi", "mechanism", "case", "m", "suspect"], rows)?)
            } else {
                None
            };
            let failed = !c.rejected.is_empty();
            Ok(Computed { result: value(&c)?, table, failed })
        }
        Command::Troyanov { a, n, m, origin, scan, grid } => {
            if csv_wanted {
                return no_csv("troyanov");
            }
            match scan {
                Some(kind) => {
                    let mut result = json!({});
                    let mut failed = false;
                    if matches!(kind, ScanKind::Equivalence | ScanKind::Both) {
                        let g = grid.clone().unwrap_or_else(ScanGrid::default_equivalence);
                        let r = geometry::equivalence_scan(&g);
                        failed |= !r.violations.is_empty();
                        result["equivalence"] = value(&r)?;
                    }
                    if matches!(kind, ScanKind::Origin | ScanKind::Both) {
                        let g = grid.clone().unwrap_or_else(ScanGrid::default_claim);
                        let r = geometry::claim_never_6220(&g);
                        failed |= !r.satisfactions.is_empty();
                        result["origin"] = value(&r)?;
                    }
                    Ok(Computed { result, table: None, failed })
                }
                None => {
                    let (Some(a), Some(n), Some(m)) = (a, n, m) else {
                        return Err(CliError::Usage("troyanov needs --a, --N and --m, or --scan".into()));
                    };
                    let cd = geometry::angles_from_case(*a, *n, *m, *origin)?;
                    let report = geometry::troyanov_check(&cd);
                    let area = geometry::gauss_bonnet_mass(&cd);
                    Ok(Computed {
                        result: json!({ "angles": cd, "gauss_bonnet": area, "troyanov": report }),
                        table: None,
                        failed: false,
                    })
                }
            }
        }
        Command::Polygon { n, points, beta0, a, starts } => {
            if csv_wanted {
                return no_csv("polygon");
            }
            match points {
                Some(points) => {
                    let beta0 = beta0.ok_or_else(|| CliError::Usage("--points needs --beta0".into()))?;
                    let case = match a {
                        Some(a) => PolygonCase::AboveOne { a: *a },
                        None => PolygonCase::BelowOne,
                    };
                    let pc = PointConfig { points: points.clone(), beta0, n: *n, case };
                    let residual = polygon::balance_residual(&pc)?;
                    let fit = polygon::roots_of_unity_fit(&pc.points);
                    Ok(Computed {
                        result: json!({
                            "config": pc, "residual": residual,
                            "max_residual": residual.iter().map(|z| z.norm()).fold(0.0, f64::max),
                            "sum_identity": polygon::sum_identity_check(&pc), "roots_of_unity_fit": fit,
                        }),
                        table: None,
                        failed: false,
                    })
                }
                None => {
                    if !(n.fract() == 0.0 && *n >= 1.0 && *n <= 64.0) {
                        return Err(CliError::Usage(format!("the search needs an integer 1 <= N <= 64, got {n}")));
                    }
                    let r = polygon::multistart_search(*n as u32, *starts, cfg.seed);
                    let failed = !r.fit_failures.is_empty() || r.sum_identity_failures > 0;
                    Ok(Computed { result: value(&r)?, table: None, failed })
                }
            }
        }
        Command::Example { a, m1, xi, xi_arg, options } => {
            let opts = ExampleOptions { solver, ..options.clone() };
            let r = example::run_example(*a, *m1, Complex64::from_polar(*xi, *xi_arg), &opts)?;
            let table = if csv_wanted {
                let rows = r.masses.iter().map(|m| {
                    vec![
                        m.center.re.to_string(),
                        m.center.im.to_string(),
                        m.seed_route.to_string(),
                        m.quadrature_route.to_string(),
                    ]
                });
                Some(csv_table(&["center_re", "center_im", "seed_route", "quadrature_route"], rows)?)
            } else {
                None
            };
            Ok(Computed { result: value(&r)?, table, failed: false })
        }
        Command::Verify { criteria } => {
            if let Some(bad) = criteria.iter().find(|&&c| !(1..=verify::CRITERIA).contains(&c)) {
                return Err(CliError::Usage(format!("unknown criterion {bad}; valid ids are 1..={}", verify::CRITERIA)));
            }
            let opts = VerifyOptions { seed: cfg.seed, solver, ..VerifyOptions::default() };
            let report = verify::run_selected(criteria, &opts);
            for c in &report.criteria {
                eprintln!("{}", c.line());
            }
            let table = if csv_wanted {
                let rows = report
                    .criteria
                    .iter()
                    .map(|c| vec![c.id.to_string(), c.name.clone(), c.passed.to_string(), c.summary.clone()]);
                Some(csv_table(&["id", "name", "passed", "summary"], rows)?)
            } else {
                None
            };
            Ok(Computed { result: value(&report)?, table, failed: !report.passed })
        }
    }
}

/// Executes a config: computes, writes the output (and sidecar for CSV),
/// and reports whether a verification claim failed.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let computed = compute(cfg)?;
    let document = json!({
        "config": value(cfg)?,
        "subcommand": cfg.command.name(),
        "result": computed.result,
        "verification_failed": computed.failed,
    });
    let json_text = to_json(&document)?;
    match (&computed.table, &cfg.output) {
        (Some(table), Some(path)) => {
            std::fs::write(path, table).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            write_file(&sidecar_path(path), &json_text)?;
        }
        (Some(table), None) => {
            std::io::stdout().write_all(table).map_err(|e| CliError::Io(e.to_string()))?;
            eprint!("{json_text}");
        }
        (None, Some(path)) => write_file(path, &json_text)?,
        (None, None) => print!("{json_text}"),
    }
    Ok(RunOutcome { document, verification_failed: computed.failed })
}
