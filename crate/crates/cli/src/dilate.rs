//! `dilate`: build the 4×4 Hermitian embedding and trace its evolution
//! against the non-Hermitian reference.

use pt_eta::dilation::{dilate, evolve_and_compare, EvolutionTrace};
use pt_eta::linalg::c;
use pt_eta::measures::dilation_efficiency;
use pt_eta::metric::family_metric;
use pt_eta::model::{build_hamiltonian, DEFAULT_EP_TOL};
use pt_eta::{ComplexVector2, MetricFamilyParams, PtParams};
use serde::Serialize;

use crate::config::OutputFormat;
use crate::output::{csv_line, real, to_json};
use crate::CliError;

pub const COLUMNS: [&str; 14] = [
    "t",
    "phi0_re",
    "phi0_im",
    "phi1_re",
    "phi1_im",
    "phi2_re",
    "phi2_im",
    "phi3_re",
    "phi3_im",
    "psi0_re",
    "psi0_im",
    "psi1_re",
    "psi1_im",
    "deviation",
];

#[derive(Debug, Clone, PartialEq)]
pub struct DilateConfig {
    pub e0: f64,
    pub s: f64,
    pub theta: f64,
    pub a: f64,
    pub eta11: f64,
    pub margin: f64,
    /// `(re₀, im₀, re₁, im₁)`.
    pub psi0: [f64; 4],
    /// Defaults to `10/|s|`.
    pub t_max: Option<f64>,
    pub steps: usize,
}

impl Default for DilateConfig {
    fn default() -> Self {
        Self {
            e0: 0.0,
            s: 1.0,
            theta: std::f64::consts::FRAC_PI_6,
            a: 0.0,
            eta11: 2.0,
            margin: 1.0,
            psi0: [1.0, 0.0, 0.0, 0.0],
            t_max: None,
            steps: 201,
        }
    }
}

/// `"x,y"` (real components) or `"re0,im0,re1,im1"`.
pub fn parse_psi0(text: &str) -> Result<[f64; 4], CliError> {
    let parts = text
        .split(',')
        .map(crate::config::parse_real)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Invalid(format!("psi0: cannot parse `{text}`")))?;
    match parts.as_slice() {
        [x, y] => Ok([*x, 0.0, *y, 0.0]),
        [a, b, c, d] => Ok([*a, *b, *c, *d]),
        _ => Err(CliError::Invalid(format!(
            "psi0: expected 2 real or 4 re/im components, got {}",
            parts.len()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub phi: [[f64; 2]; 4],
    pub reference: [[f64; 2]; 2],
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilateReport {
    pub theta: f64,
    pub e_d: f64,
    /// Row-major `[re, im]` entries of Ĥ.
    pub h_hat: Vec<Vec<[f64; 2]>>,
    pub hermiticity_residual: f64,
    pub final_deviation: f64,
    pub max_deviation: f64,
    pub second_block_deviation: f64,
    pub norm_drift: f64,
    pub trace: Vec<TraceSample>,
}

impl DilateReport {
    pub fn summary(&self) -> String {
        let h_hat = self
            .h_hat
            .iter()
            .map(|row| {
                row.iter().map(|[re, im]| format!("{re:.6e}{im:+.6e}i")).collect::<Vec<_>>().join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ");
        format!(
            "E_d={} final_deviation={:.3e} max_deviation={:.3e} second_block_deviation={:.3e} H_hat=[{}]",
            real(self.e_d),
            self.final_deviation,
            self.max_deviation,
            self.second_block_deviation,
            h_hat
        )
    }
}

pub fn validate(cfg: &DilateConfig) -> Result<(), CliError> {
    let reals = [("e0", cfg.e0), ("s", cfg.s), ("theta", cfg.theta), ("a", cfg.a), ("eta11", cfg.eta11), ("margin", cfg.margin)];
    for (name, v) in reals {
        if !v.is_finite() {
            return Err(CliError::Invalid(format!("{name} must be finite")));
        }
    }
    if cfg.s == 0.0 {
        return Err(CliError::Invalid("s must be non-zero".into()));
    }
    if cfg.eta11 == 0.0 {
        return Err(CliError::Invalid("eta11 must be non-zero".into()));
    }
    if !(cfg.margin > 0.0) {
        return Err(CliError::Invalid("margin must be positive".into()));
    }
    if cfg.steps < 2 {
        return Err(CliError::Invalid("steps must be at least 2".into()));
    }
    if let Some(t) = cfg.t_max {
        if !t.is_finite() || t < 0.0 {
            return Err(CliError::Invalid("t_max must be finite and non-negative".into()));
        }
    }
    if !cfg.psi0.iter().all(|x| x.is_finite()) || cfg.psi0.iter().all(|&x| x == 0.0) {
        return Err(CliError::Invalid("psi0 must be finite and non-zero".into()));
    }
    Ok(())
}

pub fn run_dilation(cfg: &DilateConfig) -> Result<DilateReport, CliError> {
    validate(cfg)?;
    let invalid = |e: pt_eta::Error| CliError::Invalid(e.to_string());
    let params = PtParams::new(cfg.e0, cfg.s, cfg.theta).map_err(invalid)?;
    if params.is_exceptional(DEFAULT_EP_TOL) {
        return Err(CliError::Infeasible(format!(
            "θ = {} is an exceptional point: no positive-definite metric exists there",
            cfg.theta
        )));
    }
    let family = MetricFamilyParams::new(cfg.eta11, cfg.a).map_err(invalid)?;
    let eta = family_metric(cfg.theta, &family);
    if !eta.is_positive_definite() {
        return Err(CliError::Infeasible(format!(
            "metric is {} (eigenvalues {:.6e}, {:.6e}); dilation needs a positive-definite metric",
            eta.definiteness(),
            eta.eig_min(),
            eta.eig_max()
        )));
    }

    let h = build_hamiltonian(&params);
    let bundle = dilate(&h, &eta, cfg.margin).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let e_d = dilation_efficiency(&bundle.eta).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let psi0 = ComplexVector2::new(c(cfg.psi0[0], cfg.psi0[1]), c(cfg.psi0[2], cfg.psi0[3]));
    let t_max = cfg.t_max.unwrap_or(10.0 / cfg.s.abs());
    let trace = evolve_and_compare(&bundle, &psi0, t_max, cfg.steps).map_err(invalid)?;

    let h_hat = (0..4)
        .map(|i| (0..4).map(|j| [bundle.h_hat[(i, j)].re, bundle.h_hat[(i, j)].im]).collect())
        .collect();
    let samples = samples(&trace);
    Ok(DilateReport {
        theta: cfg.theta,
        e_d,
        h_hat,
        hermiticity_residual: bundle.hermiticity_residual(),
        final_deviation: samples.last().map(|s| s.deviation).unwrap_or(0.0),
        max_deviation: trace.deviation,
        second_block_deviation: trace.second_block_deviation,
        norm_drift: trace.norm_drift,
        trace: samples,
    })
}

fn samples(trace: &EvolutionTrace) -> Vec<TraceSample> {
    (0..trace.times.len())
        .map(|k| {
            let phi = &trace.dilated_state[k];
            let psi = &trace.reference_state[k];
            TraceSample {
                t: trace.times[k],
                phi: [0, 1, 2, 3].map(|i| [phi[i].re, phi[i].im]),
                reference: [0, 1].map(|i| [psi[i].re, psi[i].im]),
                deviation: (trace.first_block(k) - psi).norm(),
            }
        })
        .collect()
}

pub fn render(report: &DilateReport, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut out = csv_line(COLUMNS);
            for s in &report.trace {
                let mut fields = vec![real(s.t)];
                fields.extend(s.phi.iter().flatten().map(|&x| real(x)));
                fields.extend(s.reference.iter().flatten().map(|&x| real(x)));
                fields.push(real(s.deviation));
                out.push_str(&csv_line(fields));
            }
            Ok(out)
        }
    }
}
