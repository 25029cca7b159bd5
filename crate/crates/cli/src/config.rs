//! Run configuration: defaults, an optional `key = value` file, and command
//! line flags, applied in that order.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "PT_ETA_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Invalid(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// Everything a `sweep` needs, plus the EP reference metric used for Δ₁.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub e0: f64,
    pub s: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub steps: usize,
    pub a: f64,
    pub eta11: f64,
    pub ep_eta11: f64,
    pub ep_a: f64,
    pub margin: f64,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            e0: 0.0,
            s: 1.0,
            theta_min: -PI,
            theta_max: PI,
            steps: 721,
            a: 0.0,
            eta11: 1.0,
            ep_eta11: 1.0,
            ep_a: 1.0,
            margin: 1.0,
            seed: 0,
            output_format: OutputFormat::Csv,
            output_path: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let finite = [
            ("e0", self.e0),
            ("s", self.s),
            ("theta_min", self.theta_min),
            ("theta_max", self.theta_max),
            ("a", self.a),
            ("eta11", self.eta11),
            ("ep_eta11", self.ep_eta11),
            ("ep_a", self.ep_a),
            ("margin", self.margin),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(CliError::Invalid(format!("{name} must be finite")));
            }
        }
        if self.s == 0.0 {
            return Err(CliError::Invalid("s must be non-zero".into()));
        }
        if !(self.theta_min < self.theta_max) {
            return Err(CliError::Invalid(format!(
                "theta_min ({}) must be below theta_max ({})",
                self.theta_min, self.theta_max
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Invalid("steps must be at least 2".into()));
        }
        if self.eta11 == 0.0 || self.ep_eta11 == 0.0 {
            return Err(CliError::Invalid("eta11 and ep_eta11 must be non-zero".into()));
        }
        if !(self.margin > 0.0) {
            return Err(CliError::Invalid("margin must be positive".into()));
        }
        Ok(())
    }

    /// `theta_min + k·(theta_max − theta_min)/(steps − 1)`, both ends included.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.theta_max - self.theta_min;
        (0..self.steps)
            .map(|k| {
                if k == self.steps - 1 {
                    self.theta_max
                } else {
                    self.theta_min + span * k as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

/// Parsed `key = value` file. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Invalid(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().replace('-', "_");
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Invalid(format!(
                    "config line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::Invalid(format!(
                    "config line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path, allowed: &[&str]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, allowed)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn real(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|v| parse_real(v).map_err(|e| tag(key, e))).transpose()
    }

    pub fn angle(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|v| parse_angle(v).map_err(|e| tag(key, e))).transpose()
    }

    pub fn integer<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Invalid(format!("{key}: `{v}` is not a valid integer")))
            })
            .transpose()
    }
}

fn tag(key: &str, e: CliError) -> CliError {
    match e {
        CliError::Invalid(msg) => CliError::Invalid(format!("{key}: {msg}")),
        other => other,
    }
}

pub fn parse_real(s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Invalid(format!("`{s}` is not a number")))
}

/// Accepts plain numbers and multiples of π such as `pi/2`, `-pi`,
/// `2pi/3`, `2*pi/3` or `0.25*pi`.
pub fn parse_angle(s: &str) -> Result<f64, CliError> {
    let t: String = s.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Invalid(format!("`{s}` is not an angle"));
    let Some(idx) = t.find("pi").or_else(|| t.find('π')) else {
        return parse_real(&t).map_err(|_| bad());
    };
    let marker_len = if t[idx..].starts_with("pi") { 2 } else { 'π'.len_utf8() };
    let head = t[..idx].trim_end_matches('*');
    let tail = &t[idx + marker_len..];
    let coeff = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        d => d.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    if denom == 0.0 {
        return Err(bad());
    }
    Ok(coeff * PI / denom)
}

/// Explicit path, else `$PT_ETA_OUTPUT_DIR/<stem>.<ext>`, else stdout (`None`).
pub fn resolve_output(explicit: Option<PathBuf>, stem: &str, format: OutputFormat) -> Option<PathBuf> {
    explicit.or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{stem}.{}", format.extension())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi/2").unwrap(), FRAC_PI_2);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert!((parse_angle("2*pi/3").unwrap() - 2.0 * FRAC_PI_3).abs() < 1e-15);
        assert!((parse_angle("2pi/3").unwrap() - 2.0 * FRAC_PI_3).abs() < 1e-15);
        assert!((parse_angle("π/3").unwrap() - FRAC_PI_3).abs() < 1e-15);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let ok = ConfigFile::parse("# comment\ne0 = 1.5\n\ntheta-max = pi/2\n", &["e0", "theta_max"]).unwrap();
        assert_eq!(ok.real("e0").unwrap(), Some(1.5));
        assert_eq!(ok.angle("theta_max").unwrap(), Some(FRAC_PI_2));
        assert_eq!(ok.real("s").unwrap(), None);
        assert!(matches!(ConfigFile::parse("stpes = 3", &["steps"]), Err(CliError::Invalid(_))));
        assert!(ConfigFile::parse("e0 = 1\ne0 = 2", &["e0"]).is_err());
        assert!(ConfigFile::parse("e0 1", &["e0"]).is_err());
    }

    #[test]
    fn grid_hits_both_ends_and_quarter_turns() {
        let cfg = SweepConfig::default();
        let g = cfg.grid();
        assert_eq!(g.len(), 721);
        assert_eq!(g[0], -PI);
        assert_eq!(g[720], PI);
        assert!((g[180] + FRAC_PI_2).abs() < 1e-12);
        assert!((g[540] - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let mut cfg = SweepConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.theta_min = cfg.theta_max;
        assert!(cfg.validate().is_err());
        let cfg = SweepConfig { steps: 1, ..SweepConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = SweepConfig { eta11: 0.0, ..SweepConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
