//! The two-level PT-symmetric Hamiltonian family, its exact eigensystem and
//! phase classification.

use crate::error::{Error, Result};
use crate::linalg::{c, mat2, max_abs, reduce_angle, sigma_x, ComplexMatrix2, ComplexVector2, Complex64};

/// Default band `|cos θ| ≤ EP_TOL` treated as the exceptional point.
pub const DEFAULT_EP_TOL: f64 = 1e-9;

/// Entrywise tolerance of [`check_pt_symmetry`].
pub const PT_SYMMETRY_TOL: f64 = 1e-12;

/// Model parameters `(E₀, s, θ)`. `θ` is stored reduced to `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtParams {
    e0: f64,
    s: f64,
    theta: f64,
}

impl PtParams {
    pub fn new(e0: f64, s: f64, theta: f64) -> Result<Self> {
        if !e0.is_finite() || !s.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "parameters must be finite (e0 = {e0}, s = {s}, θ = {theta})"
            )));
        }
        if s == 0.0 {
            return Err(Error::InvalidParameter("coupling s must be non-zero".into()));
        }
        Ok(Self { e0, s, theta: reduce_angle(theta) })
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same `E₀` and `s` at another angle.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.e0, self.s, theta)
    }

    /// `(E₀ + s cos θ, E₀ − s cos θ)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let shift = self.s * self.theta.cos();
        (self.e0 + shift, self.e0 - shift)
    }

    pub fn is_exceptional(&self, ep_tol: f64) -> bool {
        self.theta.cos().abs() <= ep_tol
    }
}

pub fn build_hamiltonian(params: &PtParams) -> ComplexMatrix2 {
    let (e0, s) = (params.e0, params.s);
    let sin = params.theta.sin();
    mat2(c(e0, s * sin), c(s, 0.0), c(s, 0.0), c(e0, -s * sin))
}

/// `H·P = P·conj(H)` with `P = σₓ` and `T` complex conjugation.
pub fn check_pt_symmetry(h: &ComplexMatrix2) -> bool {
    let p = sigma_x();
    let lhs = h * p;
    let rhs = p * h.map(|z| z.conj());
    (lhs - rhs).iter().all(|z| z.norm() <= PT_SYMMETRY_TOL)
}

/// `ψ₊(θ) = (e^{iθ/2}, e^{−iθ/2})/√2`.
pub fn psi_plus(theta: f64) -> ComplexVector2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexVector2::new(
        Complex64::from_polar(h, 0.5 * theta),
        Complex64::from_polar(h, -0.5 * theta),
    )
}

/// `ψ₋(θ) = (e^{−iθ/2}, −e^{iθ/2})/√2`.
pub fn psi_minus(theta: f64) -> ComplexVector2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexVector2::new(
        Complex64::from_polar(h, -0.5 * theta),
        -Complex64::from_polar(h, 0.5 * theta),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub psi_plus: ComplexVector2,
    pub psi_minus: ComplexVector2,
}

/// Closed-form eigenpairs with the fixed phase convention of [`psi_plus`] and
/// [`psi_minus`]. Fails inside the exceptional band, where the eigenvectors
/// coalesce and [`crate::canonical::ep_jordan_frame`] applies instead.
pub fn eigensystem(params: &PtParams) -> Result<EigenSystem> {
    if params.is_exceptional(DEFAULT_EP_TOL) {
        return Err(Error::ExceptionalPoint { theta: params.theta, tol: DEFAULT_EP_TOL });
    }
    let (lp, lm) = params.eigenvalues();
    let out = EigenSystem {
        lambda_plus: c(lp, 0.0),
        lambda_minus: c(lm, 0.0),
        psi_plus: psi_plus(params.theta),
        psi_minus: psi_minus(params.theta),
    };
    debug_assert!({
        let h = build_hamiltonian(params);
        let scale = 1.0 + params.e0.abs() + params.s.abs();
        max_abs(&(h * out.psi_plus - out.psi_plus * out.lambda_plus)) <= 1e-12 * scale
            && max_abs(&(h * out.psi_minus - out.psi_minus * out.lambda_minus)) <= 1e-12 * scale
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Unbroken,
    ExceptionalPoint,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Unbroken => "Unbroken",
            Phase::ExceptionalPoint => "ExceptionalPoint",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseClass {
    pub phase: Phase,
    pub ep_tol: f64,
}

/// Real θ never produces complex eigenvalues here, so the broken phase is
/// exactly the exceptional band `|cos θ| ≤ ep_tol`.
pub fn classify_phase(params: &PtParams, ep_tol: f64) -> Result<PhaseClass> {
    if !(ep_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("ep_tol must be positive, got {ep_tol}")));
    }
    let phase = if params.is_exceptional(ep_tol) {
        Phase::ExceptionalPoint
    } else {
        Phase::Unbroken
    };
    Ok(PhaseClass { phase, ep_tol })
}
