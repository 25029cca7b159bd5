//! `sweep`: one row of spectral, metric and measure data per grid angle.

use pt_eta::dilation::tau_from_metric;
use pt_eta::measures::{delta1, delta2_lower_bound, dilation_efficiency};
use pt_eta::metric::family_metric;
use pt_eta::model::{classify_phase, DEFAULT_EP_TOL};
use pt_eta::{MetricFamilyParams, Phase, PtParams};
use serde::Serialize;

use crate::config::{OutputFormat, SweepConfig};
use crate::output::{csv_line, opt_real, real, to_json};
use crate::CliError;

/// Column order of the CSV header and the JSON keys.
pub const COLUMNS: [&str; 13] = [
    "theta",
    "lambda_plus",
    "lambda_minus",
    "eta_eig_min",
    "eta_eig_max",
    "definiteness",
    "delta1_exact",
    "delta1_bound",
    "p_minus",
    "product_ed1",
    "e_d",
    "delta2_bound",
    "phase",
];

/// Fields after `definiteness` are only defined for an unbroken angle with a
/// positive-definite metric and are `None` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub eta_eig_min: f64,
    pub eta_eig_max: f64,
    pub definiteness: String,
    pub delta1_exact: Option<f64>,
    pub delta1_bound: Option<f64>,
    pub p_minus: Option<f64>,
    pub product_ed1: Option<f64>,
    /// Efficiency of the dilation actually built, i.e. after rescaling η to
    /// smallest eigenvalue `1 + margin`.
    pub e_d: Option<f64>,
    /// Δ₂ lower bound in the `θ' = θ − π` frame.
    pub delta2_bound: Option<f64>,
    pub phase: String,
}

impl SweepRow {
    fn csv(&self) -> String {
        csv_line([
            real(self.theta),
            real(self.lambda_plus),
            real(self.lambda_minus),
            real(self.eta_eig_min),
            real(self.eta_eig_max),
            self.definiteness.clone(),
            opt_real(self.delta1_exact),
            opt_real(self.delta1_bound),
            opt_real(self.p_minus),
            opt_real(self.product_ed1),
            opt_real(self.e_d),
            opt_real(self.delta2_bound),
            self.phase.clone(),
        ])
    }
}

pub fn sweep_row(theta: f64, cfg: &SweepConfig) -> Result<SweepRow, CliError> {
    let invalid = |e: pt_eta::Error| CliError::Invalid(e.to_string());
    let params = PtParams::new(cfg.e0, cfg.s, theta).map_err(invalid)?;
    let family = MetricFamilyParams::new(cfg.eta11, cfg.a).map_err(invalid)?;
    let ep = MetricFamilyParams::new(cfg.ep_eta11, cfg.ep_a).map_err(invalid)?;

    let (lambda_plus, lambda_minus) = params.eigenvalues();
    let phase = classify_phase(&params, DEFAULT_EP_TOL).map_err(invalid)?.phase;
    let eta = family_metric(theta, &family);

    let mut row = SweepRow {
        theta,
        lambda_plus,
        lambda_minus,
        eta_eig_min: eta.eig_min(),
        eta_eig_max: eta.eig_max(),
        definiteness: eta.definiteness().to_string(),
        delta1_exact: None,
        delta1_bound: None,
        p_minus: None,
        product_ed1: None,
        e_d: None,
        delta2_bound: None,
        phase: phase.to_string(),
    };
    if phase == Phase::Unbroken && eta.is_positive_definite() {
        let d1 = delta1(theta, &family, &ep).map_err(invalid)?;
        row.delta1_exact = Some(d1.delta1_exact);
        row.delta1_bound = Some(d1.delta1_lower_bound);
        row.p_minus = Some(d1.p_minus);
        row.product_ed1 = Some(d1.product);
        let (scaled, _) = tau_from_metric(&eta, cfg.margin).map_err(invalid)?;
        row.e_d = Some(dilation_efficiency(&scaled).map_err(invalid)?);
        row.delta2_bound = delta2_lower_bound(theta, theta - std::f64::consts::PI).ok();
    }
    Ok(row)
}

pub fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    if cfg.ep_a == 0.0 {
        return Err(CliError::Invalid(
            "ep_a must be non-zero: the exceptional-point metric would be singular".into(),
        ));
    }
    cfg.grid().into_iter().map(|theta| sweep_row(theta, cfg)).collect()
}

pub fn render(rows: &[SweepRow], format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Csv => {
            let mut out = csv_line(COLUMNS);
            for row in rows {
                out.push_str(&row.csv());
            }
            Ok(out)
        }
        OutputFormat::Json => to_json(&rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn spec_grid_marks_both_exceptional_points() {
        let cfg = SweepConfig { eta11: 2.0, ..SweepConfig::default() };
        let rows = sweep_rows(&cfg).unwrap();
        assert_eq!(rows.len(), 721);
        let ep: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.phase == "ExceptionalPoint")
            .map(|(k, _)| k)
            .collect();
        assert_eq!(ep, vec![180, 540]);
        for k in ep {
            let r = &rows[k];
            assert!(r.delta1_exact.is_none() && r.e_d.is_none() && r.delta2_bound.is_none());
            assert!((r.lambda_plus - r.lambda_minus).abs() < 1e-15);
        }
    }

    #[test]
    fn unbroken_rows_carry_measures() {
        let cfg = SweepConfig::default();
        let row = sweep_row(0.3, &cfg).unwrap();
        assert_eq!(row.definiteness, "PositiveDefinite");
        assert!(row.product_ed1.unwrap() >= 4.0);
        let e_d = row.e_d.unwrap();
        assert!(e_d > 0.0 && e_d <= 1.0);
        // E_d of η rescaled to λ_min = 2: λ_min/(2 λ_max) = (1 − sin)/(2(1 + sin)).
        let s = 0.3f64.sin();
        assert!((e_d - (1.0 - s) / (2.0 * (1.0 + s))).abs() < 1e-14);
        let b = row.delta2_bound.unwrap();
        assert!((b - (0.3f64.cos() + 1.0 / 0.3f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn non_positive_metric_rows_are_blank() {
        let cfg = SweepConfig { a: 0.9, ..SweepConfig::default() };
        let row = sweep_row(1.0, &cfg).unwrap();
        assert_eq!(row.definiteness, "Indefinite");
        assert!(row.delta1_exact.is_none());
        let row = sweep_row(FRAC_PI_2, &cfg).unwrap();
        assert_eq!(row.phase, "ExceptionalPoint");
    }

    #[test]
    fn header_matches_row_fields() {
        let rows = sweep_rows(&SweepConfig { steps: 3, ..SweepConfig::default() }).unwrap();
        let csv = render(&rows, OutputFormat::Csv).unwrap();
        let header = csv.lines().next().unwrap();
        assert_eq!(header, COLUMNS.join(","));
        let json: serde_json::Value = serde_json::from_str(&render(&rows, OutputFormat::Json).unwrap()).unwrap();
        let keys: Vec<&str> = json[0].as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = COLUMNS.to_vec();
        expected.sort_unstable();
        let mut keys_sorted = keys.clone();
        keys_sorted.sort_unstable();
        assert_eq!(keys_sorted, expected);
        for line in csv.lines() {
            assert_eq!(line.split(',').count(), COLUMNS.len());
        }
    }

    #[test]
    fn singular_ep_reference_is_invalid() {
        let cfg = SweepConfig { ep_a: 0.0, ..SweepConfig::default() };
        assert!(matches!(sweep_rows(&cfg), Err(CliError::Invalid(_))));
    }
}
