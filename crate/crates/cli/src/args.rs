//! Command-line surface and the defaults → config file → flags merge.
//!
//! Numeric flags are taken as strings so that `-pi/2` and other
//! hyphen-leading values parse, and so that every malformed value is
//! reported the same way (exit 2).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_angle, parse_real, resolve_output, ConfigFile, OutputFormat, SweepConfig};
use crate::dilate::{parse_psi0, run_dilation, DilateConfig};
use crate::equivalence::{run_equivalence, EquivalenceConfig};
use crate::output::emit;
use crate::verify::{run_verify, VerifyConfig};
use crate::{exit, sweep, CliError};

#[derive(Debug, Parser)]
#[command(name = "pt-eta", version, about = "Metric operators, exceptional points and Hermitian dilation for a PT-symmetric qubit")]
pub struct Cli {
    /// Output file (default: $PT_ETA_OUTPUT_DIR/<command>.<ext>, else stdout).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// key = value file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate spectra, metric data and measures over a θ grid.
    Sweep(SweepArgs),
    /// Run every invariant suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Build the Hermitian dilation and trace the embedded evolution.
    Dilate(DilateArgs),
    /// Rebuild η from a canonical block and match it to the closed form.
    Equivalence(EquivalenceArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub e0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_max: Option<String>,
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta11: Option<String>,
    /// η₁₁ of the exceptional-point metric Δ₁ is measured against.
    #[arg(long, allow_hyphen_values = true)]
    pub ep_eta11: Option<String>,
    /// a of the exceptional-point metric; must be non-zero.
    #[arg(long, allow_hyphen_values = true)]
    pub ep_a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub margin: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub trials: Option<String>,
    /// Overrides the inequality slack; a self-test hook for the harness.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub slack: Option<String>,
}

#[derive(Debug, Args)]
pub struct DilateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta11: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub margin: Option<String>,
    /// `x,y` or `re0,im0,re1,im1`.
    #[arg(long, allow_hyphen_values = true)]
    pub psi0: Option<String>,
    /// Defaults to 10/|s|.
    #[arg(long)]
    pub t_max: Option<String>,
    /// Number of time samples, both ends included.
    #[arg(long)]
    pub steps: Option<String>,
}

#[derive(Debug, Args)]
pub struct EquivalenceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d11: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d22: Option<String>,
    /// Im d₁₂ for the exceptional-point branch (θ = ±π/2).
    #[arg(long, allow_hyphen_values = true)]
    pub d12_imag: Option<String>,
}

const SWEEP_KEYS: &[&str] = &[
    "e0", "s", "theta_min", "theta_max", "steps", "a", "eta11", "ep_eta11", "ep_a", "margin", "seed",
    "format", "output",
];
const VERIFY_KEYS: &[&str] = &["seed", "trials", "output"];
const DILATE_KEYS: &[&str] =
    &["e0", "s", "theta", "a", "eta11", "margin", "psi0", "t_max", "steps", "format", "output"];
const EQUIVALENCE_KEYS: &[&str] = &["e0", "s", "theta", "d11", "d22", "d12_imag", "format", "output"];

/// A flag value if given, else the config file entry, else the default.
struct Merge<'a> {
    file: &'a ConfigFile,
}

impl Merge<'_> {
    fn real(&self, flag: &Option<String>, key: &str, default: f64) -> Result<f64, CliError> {
        match flag {
            Some(v) => parse_real(v).map_err(|e| prefix(key, e)),
            None => Ok(self.file.real(key)?.unwrap_or(default)),
        }
    }

    fn angle(&self, flag: &Option<String>, key: &str, default: f64) -> Result<f64, CliError> {
        match flag {
            Some(v) => parse_angle(v).map_err(|e| prefix(key, e)),
            None => Ok(self.file.angle(key)?.unwrap_or(default)),
        }
    }

    fn integer<T: std::str::FromStr>(&self, flag: &Option<String>, key: &str, default: T) -> Result<T, CliError> {
        match flag {
            Some(v) => v
                .trim()
                .parse::<T>()
                .map_err(|_| CliError::Invalid(format!("{key}: `{v}` is not a valid non-negative integer"))),
            None => Ok(self.file.integer(key)?.unwrap_or(default)),
        }
    }

    fn text<'s>(&'s self, flag: &'s Option<String>, key: &str) -> Option<&'s str> {
        flag.as_deref().or_else(|| self.file.get(key))
    }
}

fn prefix(key: &str, e: CliError) -> CliError {
    match e {
        CliError::Invalid(msg) => CliError::Invalid(format!("{key}: {msg}")),
        other => other,
    }
}

struct Globals {
    output: Option<PathBuf>,
    format: OutputFormat,
    seed: u64,
}

fn globals(cli: &Cli, file: &ConfigFile, default_format: OutputFormat) -> Result<Globals, CliError> {
    let merge = Merge { file };
    let format = match merge.text(&cli.format, "format") {
        Some(f) => f.parse()?,
        None => default_format,
    };
    let seed = merge.integer(&cli.seed, "seed", 0u64)?;
    let output = cli.output.clone().or_else(|| file.get("output").map(PathBuf::from));
    Ok(Globals { output, format, seed })
}

/// Parses nothing, prints nothing on its own: returns the exit code after
/// writing the command's output, or the error that should be reported.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    let allowed = match &cli.command {
        Command::Sweep(_) => SWEEP_KEYS,
        Command::Verify(_) => VERIFY_KEYS,
        Command::Dilate(_) => DILATE_KEYS,
        Command::Equivalence(_) => EQUIVALENCE_KEYS,
    };
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path, allowed)?,
        None => ConfigFile::default(),
    };
    let merge = Merge { file: &file };

    match &cli.command {
        Command::Sweep(args) => {
            let g = globals(&cli, &file, OutputFormat::Csv)?;
            let d = SweepConfig::default();
            let cfg = SweepConfig {
                e0: merge.real(&args.model.e0, "e0", d.e0)?,
                s: merge.real(&args.model.s, "s", d.s)?,
                theta_min: merge.angle(&args.theta_min, "theta_min", d.theta_min)?,
                theta_max: merge.angle(&args.theta_max, "theta_max", d.theta_max)?,
                steps: merge.integer(&args.steps, "steps", d.steps)?,
                a: merge.real(&args.a, "a", d.a)?,
                eta11: merge.real(&args.eta11, "eta11", d.eta11)?,
                ep_eta11: merge.real(&args.ep_eta11, "ep_eta11", d.ep_eta11)?,
                ep_a: merge.real(&args.ep_a, "ep_a", d.ep_a)?,
                margin: merge.real(&args.margin, "margin", d.margin)?,
                seed: g.seed,
                output_format: g.format,
                output_path: resolve_output(g.output, "sweep", g.format),
            };
            let rows = sweep::sweep_rows(&cfg)?;
            let text = sweep::render(&rows, cfg.output_format)?;
            emit(cfg.output_path.as_deref(), &text)?;
            Ok(exit::SUCCESS)
        }
        Command::Verify(args) => {
            let g = globals(&cli, &file, OutputFormat::Json)?;
            if g.format != OutputFormat::Json {
                return Err(CliError::Invalid("verify only writes json".into()));
            }
            let d = VerifyConfig::default();
            let cfg = VerifyConfig {
                seed: g.seed,
                trials: merge.integer(&args.trials, "trials", d.trials)?,
                slack: match &args.slack {
                    Some(v) => parse_real(v)?,
                    None => d.slack,
                },
            };
            let report = run_verify(&cfg)?;
            let text = crate::output::to_json(&report)?;
            emit(resolve_output(g.output, "verify", g.format).as_deref(), &text)?;
            for failed in report.failures() {
                eprintln!("invariant failed: {} (worst margin {:e})", failed.name, failed.worst_margin);
            }
            Ok(if report.passed { exit::SUCCESS } else { exit::INVARIANT_FAILURE })
        }
        Command::Dilate(args) => {
            let g = globals(&cli, &file, OutputFormat::Csv)?;
            let d = DilateConfig::default();
            let t_max = match &args.t_max {
                Some(v) => Some(parse_real(v).map_err(|e| prefix("t_max", e))?),
                None => file.real("t_max")?,
            };
            let cfg = DilateConfig {
                e0: merge.real(&args.model.e0, "e0", d.e0)?,
                s: merge.real(&args.model.s, "s", d.s)?,
                theta: merge.angle(&args.theta, "theta", d.theta)?,
                a: merge.real(&args.a, "a", d.a)?,
                eta11: merge.real(&args.eta11, "eta11", d.eta11)?,
                margin: merge.real(&args.margin, "margin", d.margin)?,
                psi0: match merge.text(&args.psi0, "psi0") {
                    Some(text) => parse_psi0(text)?,
                    None => d.psi0,
                },
                t_max,
                steps: merge.integer(&args.steps, "steps", d.steps)?,
            };
            let report = run_dilation(&cfg)?;
            let text = crate::dilate::render(&report, g.format)?;
            emit(resolve_output(g.output, "dilate", g.format).as_deref(), &text)?;
            eprintln!("{}", report.summary());
            Ok(exit::SUCCESS)
        }
        Command::Equivalence(args) => {
            let g = globals(&cli, &file, OutputFormat::Json)?;
            let d = EquivalenceConfig::default();
            let cfg = EquivalenceConfig {
                e0: merge.real(&args.model.e0, "e0", d.e0)?,
                s: merge.real(&args.model.s, "s", d.s)?,
                theta: merge.angle(&args.theta, "theta", d.theta)?,
                d11: merge.real(&args.d11, "d11", d.d11)?,
                d22: merge.real(&args.d22, "d22", d.d22)?,
                d12_imag: merge.real(&args.d12_imag, "d12_imag", d.d12_imag)?,
            };
            let row = run_equivalence(&cfg)?;
            let text = crate::equivalence::render(&row, g.format)?;
            emit(resolve_output(g.output, "equivalence", g.format).as_deref(), &text)?;
            Ok(exit::SUCCESS)
        }
    }
}
