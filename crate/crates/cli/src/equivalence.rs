//! `equivalence`: rebuild η from a canonical block and read off `(η₁₁, a)`.

use pt_eta::canonical::{ep_equivalence_check, equivalence_check, EquivalenceReport};
use pt_eta::model::DEFAULT_EP_TOL;
use pt_eta::{Error, PtParams};
use serde::Serialize;

use crate::config::OutputFormat;
use crate::output::{csv_line, opt_real, real, to_json};
use crate::CliError;

pub const COLUMNS: [&str; 10] = [
    "theta",
    "theta_prime",
    "exceptional",
    "eta11",
    "a",
    "residual",
    "intertwining_residual",
    "singular_match",
    "display_residual",
    "d12_im",
];

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceConfig {
    pub e0: f64,
    pub s: f64,
    pub theta: f64,
    pub d11: f64,
    pub d22: f64,
    /// `Im d₁₂`, used only on the exceptional-point branch.
    pub d12_imag: f64,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        Self { e0: 0.0, s: 1.0, theta: std::f64::consts::FRAC_PI_3, d11: 1.0, d22: 2.0, d12_imag: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceRow {
    pub theta: f64,
    pub theta_prime: f64,
    pub exceptional: bool,
    pub eta11: f64,
    pub a: Option<f64>,
    pub residual: f64,
    pub intertwining_residual: f64,
    pub singular_match: bool,
    pub display_residual: Option<f64>,
    pub d12_im: f64,
}

impl From<&EquivalenceReport> for EquivalenceRow {
    fn from(r: &EquivalenceReport) -> Self {
        Self {
            theta: r.theta,
            theta_prime: r.theta_prime,
            exceptional: r.exceptional,
            eta11: r.eta11,
            a: r.a,
            residual: r.residual,
            intertwining_residual: r.intertwining_residual,
            singular_match: r.singular_match,
            display_residual: r.display_residual,
            d12_im: r.d.d12.im,
        }
    }
}

fn classify(e: Error) -> CliError {
    match e {
        Error::PatternMismatch { .. } | Error::IntertwiningViolation { .. } => {
            CliError::Invariant(e.to_string())
        }
        other => CliError::Invalid(other.to_string()),
    }
}

/// Angles within the EP tolerance of ±π/2 take the exceptional-point branch.
pub fn run_equivalence(cfg: &EquivalenceConfig) -> Result<EquivalenceRow, CliError> {
    for (name, v) in [("e0", cfg.e0), ("s", cfg.s), ("theta", cfg.theta), ("d11", cfg.d11), ("d22", cfg.d22), ("d12_imag", cfg.d12_imag)] {
        if !v.is_finite() {
            return Err(CliError::Invalid(format!("{name} must be finite")));
        }
    }
    let params = PtParams::new(cfg.e0, cfg.s, cfg.theta).map_err(classify)?;
    let report = if params.is_exceptional(DEFAULT_EP_TOL) {
        ep_equivalence_check(&params, cfg.d12_imag, cfg.d22)
    } else {
        equivalence_check(&params, cfg.d11, cfg.d22)
    }
    .map_err(classify)?;
    Ok(EquivalenceRow::from(&report))
}

pub fn render(row: &EquivalenceRow, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_json(row),
        OutputFormat::Csv => Ok(csv_line(COLUMNS)
            + &csv_line([
                real(row.theta),
                real(row.theta_prime),
                row.exceptional.to_string(),
                real(row.eta11),
                opt_real(row.a),
                real(row.residual),
                real(row.intertwining_residual),
                row.singular_match.to_string(),
                opt_real(row.display_residual),
                real(row.d12_im),
            ])),
    }
}
