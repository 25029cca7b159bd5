//! Distance measures between unbroken-phase and exceptional-point metrics.
//!
//! `Δ₁` is the l₁ distance between closed-form family members at θ and at the
//! exceptional point π/2. `Δ₂` compares canonical blocks `D` through the
//! ratios `|d₁₁/d₁₂|` and `|d₂₂/d₁₂|`.
//!
//! The formal probability `p₋ = 1/λ₋` is computed with the halved closed form
//! `λ₋ = η₁₁(1 − √(a² + sin²θ))/2` (see
//! [`MetricFamilyParams::halved_eigenvalues`]). That is the normalization under
//! which `Δ₁·p₋ ≥ 4`; the value from the true spectrum is reported alongside as
//! `p_minus_spectral`.

use std::f64::consts::FRAC_PI_2;

use crate::canonical::CanonicalD;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix2;
use crate::metric::{family_metric, HermitianMetric, MetricFamilyParams};
use crate::model::DEFAULT_EP_TOL;

/// Absolute slack on every inequality check.
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// `Σ |mᵢⱼ|`.
pub fn l1_norm(m: &ComplexMatrix2) -> f64 {
    m.iter().map(|z| z.norm()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta1Report {
    /// `‖η(θ) − η(π/2)‖_{l₁}`.
    pub delta1_exact: f64,
    /// `2η₁₁(θ)(1 − sin θ)`.
    pub delta1_lower_bound: f64,
    /// `1/λ₋` with the halved λ₋.
    pub p_minus: f64,
    /// `1/λ₋` with the true smallest eigenvalue.
    pub p_minus_spectral: f64,
    /// `delta1_exact · p_minus`.
    pub product: f64,
    /// `delta1_lower_bound · p_minus`, equal to `4(1 − sin θ)/(1 − √(a² + sin²θ))`.
    pub product_bound: f64,
    /// `delta1_exact · p_minus_spectral`.
    pub product_spectral: f64,
}

impl Delta1Report {
    pub fn satisfies_bound(&self, slack: f64) -> bool {
        self.delta1_exact >= self.delta1_lower_bound - slack
    }

    pub fn satisfies_uncertainty(&self, slack: f64) -> bool {
        self.product >= 4.0 - slack
    }
}

/// Δ₁ between the unbroken family member at θ and the EP member at π/2.
pub fn delta1(
    theta: f64,
    unbroken: &MetricFamilyParams,
    ep: &MetricFamilyParams,
) -> Result<Delta1Report> {
    if theta.cos().abs() <= DEFAULT_EP_TOL {
        return Err(Error::ExceptionalPoint { theta, tol: DEFAULT_EP_TOL });
    }
    let eta = family_metric(theta, unbroken);
    if !eta.is_positive_definite() {
        return Err(Error::NotPositive { eig_min: eta.eig_min() });
    }
    if ep.a() == 0.0 {
        return Err(Error::NotInvertible(
            "a = 0 makes the exceptional-point family member singular".into(),
        ));
    }
    let eta_ep = family_metric(FRAC_PI_2, ep);

    let delta1_exact = l1_norm(&(eta.matrix() - eta_ep.matrix()));
    let delta1_lower_bound = 2.0 * unbroken.eta11() * (1.0 - theta.sin());
    let (_, halved_minus) = unbroken.halved_eigenvalues(theta);
    let p_minus = 1.0 / halved_minus;
    let p_minus_spectral = 1.0 / eta.eig_min();
    Ok(Delta1Report {
        delta1_exact,
        delta1_lower_bound,
        p_minus,
        p_minus_spectral,
        product: delta1_exact * p_minus,
        product_bound: delta1_lower_bound * p_minus,
        product_spectral: delta1_exact * p_minus_spectral,
    })
}

/// `E_d = 1/λ_max`, the smallest transition probability back to the subsystem.
pub fn dilation_efficiency(eta: &HermitianMetric) -> Result<f64> {
    if !eta.is_positive_definite() {
        return Err(Error::NotPositive { eig_min: eta.eig_min() });
    }
    Ok(1.0 / eta.eig_max())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyReport {
    pub delta1: Delta1Report,
    pub e_d: f64,
    /// `Δ₁/E_d`.
    pub ratio: f64,
    /// `4λ₊/p₋` with halved eigenvalues.
    pub chain_value: f64,
    /// Halved λ₋, the quantity the `λ₋ > 1` condition is checked on.
    pub lambda_minus: f64,
    pub lambda_minus_spectral: f64,
}

/// `Δ₁/E_d` for metrics with `λ₋ > 1`.
pub fn efficiency_relation(
    theta: f64,
    p: &MetricFamilyParams,
    ep: &MetricFamilyParams,
) -> Result<EfficiencyReport> {
    let eta = family_metric(theta, p);
    if !eta.is_positive_definite() {
        return Err(Error::NotPositive { eig_min: eta.eig_min() });
    }
    let (lambda_plus, lambda_minus) = p.halved_eigenvalues(theta);
    if !(lambda_minus > 1.0) {
        return Err(Error::ConditionNotMet { lambda_minus });
    }
    let d1 = delta1(theta, p, ep)?;
    let e_d = dilation_efficiency(&eta)?;
    Ok(EfficiencyReport {
        delta1: d1,
        e_d,
        ratio: d1.delta1_exact / e_d,
        chain_value: 4.0 * lambda_plus / d1.p_minus,
        lambda_minus,
        lambda_minus_spectral: eta.eig_min(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta2Report {
    /// `|d₁₁/d₁₂|`.
    pub ratio11: f64,
    /// `|d₂₂/d₁₂|`.
    pub ratio22: f64,
    /// Reference δ, usually `|d₂₂/d₁₂|` of an exceptional-point block.
    pub delta_ref: f64,
    /// `ratio11 + |ratio22 − δ|`.
    pub delta2: f64,
}

pub fn delta2(d: &CanonicalD, delta_ref: f64) -> Result<Delta2Report> {
    if !delta_ref.is_finite() || delta_ref < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "δ must be finite and non-negative, got {delta_ref}"
        )));
    }
    let modulus = d.d12.norm();
    if modulus == 0.0 {
        return Err(Error::DivisionByZero("d12 = 0".into()));
    }
    let ratio11 = d.d11.abs() / modulus;
    let ratio22 = d.d22.abs() / modulus;
    Ok(Delta2Report { ratio11, ratio22, delta_ref, delta2: ratio11 + (ratio22 - delta_ref).abs() })
}

/// `δ = |d₂₂/d₁₂|` of an exceptional-point block.
pub fn ep_delta_ref(d: &CanonicalD) -> Result<f64> {
    let modulus = d.d12.norm();
    if modulus == 0.0 {
        return Err(Error::DivisionByZero("d12 = 0".into()));
    }
    Ok(d.d22.abs() / modulus)
}

/// `|cos θ / sin((θ−θ')/2)| + |sin((θ−θ')/2) / cos θ|`, never below 2.
pub fn delta2_lower_bound(theta: f64, theta_prime: f64) -> Result<f64> {
    let cos = theta.cos();
    if cos.abs() <= DEFAULT_EP_TOL {
        return Err(Error::ExceptionalPoint { theta, tol: DEFAULT_EP_TOL });
    }
    let sin = (0.5 * (theta - theta_prime)).sin();
    if sin.abs() <= f64::EPSILON {
        return Err(Error::DegenerateAngle);
    }
    let x = (cos / sin).abs();
    Ok(x + 1.0 / x)
}

/// Smallest admissible `t = d₂₂/d₁₁` for a positive semidefinite block:
/// `(sin((θ−θ')/2)/cos θ)²`.
pub fn minimal_d22_ratio(theta: f64, theta_prime: f64) -> f64 {
    ((0.5 * (theta - theta_prime)).sin() / theta.cos()).powi(2)
}
