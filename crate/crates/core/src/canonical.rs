//! Simultaneous reduction `H = ΨΛΨ⁻¹`, `η = (Ψ⁻¹)†DΨ⁻¹`.
//!
//! The two-angle frame `Ψ(θ, θ') = [ψ₊(θ), ψ₋(θ')]` stays invertible at the
//! exceptional point (for suitable θ'), so a single construction covers the
//! unbroken phase and the EP. The metric is then parametrized by the
//! Hermitian block `D`, constrained by `Λ†D = DΛ`.

use crate::error::{Error, Result};
use crate::linalg::{c, identity2, mat2, max_abs, sigma_x, Complex64, ComplexMatrix2};
use crate::metric::{family_matrix, intertwining_residual, HermitianMetric, MetricFamilyParams};
use crate::model::{build_hamiltonian, psi_minus, psi_plus, PtParams, DEFAULT_EP_TOL};
use nalgebra as na;

/// Frames with `|cos((θ + θ')/2)|` at or below this are rejected.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-8;

/// Residual bound for the frame and reconstruction identities.
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoAngleFrame {
    params: PtParams,
    theta_prime: f64,
    psi: ComplexMatrix2,
    psi_inv: ComplexMatrix2,
    lambda: ComplexMatrix2,
    b1: f64,
    b2: f64,
    c: f64,
}

impl TwoAngleFrame {
    pub fn params(&self) -> &PtParams {
        &self.params
    }

    pub fn theta(&self) -> f64 {
        self.params.theta()
    }

    pub fn theta_prime(&self) -> f64 {
        self.theta_prime
    }

    /// Columns `ψ₊(θ)` and `ψ₋(θ')`.
    pub fn psi(&self) -> &ComplexMatrix2 {
        &self.psi
    }

    /// Closed-form inverse of [`Self::psi`].
    pub fn psi_inv(&self) -> &ComplexMatrix2 {
        &self.psi_inv
    }

    /// `[[b₁, c·i], [0, b₂]]`.
    pub fn lambda(&self) -> &ComplexMatrix2 {
        &self.lambda
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `sin((θ − θ')/2)`.
    pub fn half_difference_sin(&self) -> f64 {
        (0.5 * (self.theta() - self.theta_prime)).sin()
    }

    pub fn is_exceptional(&self, ep_tol: f64) -> bool {
        self.params.is_exceptional(ep_tol)
    }

    /// `max |ΨΨ⁻¹ − I|`.
    pub fn inverse_residual(&self) -> f64 {
        max_abs(&(self.psi * self.psi_inv - identity2()))
    }

    /// `max |H(θ)Ψ − ΨΛ|`.
    pub fn similarity_residual(&self) -> f64 {
        let h = build_hamiltonian(&self.params);
        max_abs(&(h * self.psi - self.psi * self.lambda))
    }
}

/// Builds `Ψ(θ, θ')`, its closed-form inverse and the triangular `Λ(θ, θ')`.
///
/// `Ψ⁻¹ = 1/(√2 cos((θ+θ')/2))·[[e^{iθ'/2}, e^{−iθ'/2}], [e^{−iθ/2}, −e^{iθ/2}]]`.
pub fn two_angle_frame(params: &PtParams, theta_prime: f64) -> Result<TwoAngleFrame> {
    two_angle_frame_with_tol(params, theta_prime, DEFAULT_SINGULAR_TOL)
}

pub fn two_angle_frame_with_tol(
    params: &PtParams,
    theta_prime: f64,
    singular_tol: f64,
) -> Result<TwoAngleFrame> {
    if !theta_prime.is_finite() {
        return Err(Error::InvalidParameter("θ' must be finite".into()));
    }
    let theta = params.theta();
    let denom = (0.5 * (theta + theta_prime)).cos();
    if denom.abs() <= singular_tol {
        return Err(Error::FrameSingular { theta, theta_prime });
    }
    let plus = psi_plus(theta);
    let minus = psi_minus(theta_prime);
    let psi = ComplexMatrix2::from_columns(&[plus, minus]);

    let k = 1.0 / (std::f64::consts::SQRT_2 * denom);
    let half = |x: f64| Complex64::from_polar(k, 0.5 * x);
    let psi_inv = mat2(half(theta_prime), half(-theta_prime), half(-theta), -half(theta));

    let (s, e0) = (params.s(), params.e0());
    let b1 = e0 + s * theta.cos();
    let b2 = e0 - s * theta.cos();
    let cc = 2.0 * s * (0.5 * (theta - theta_prime)).sin();
    let lambda = mat2(c(b1, 0.0), c(0.0, cc), c(0.0, 0.0), c(b2, 0.0));

    Ok(TwoAngleFrame { params: *params, theta_prime, psi, psi_inv, lambda, b1, b2, c: cc })
}

/// Hermitian canonical block `D = [[d₁₁, d₁₂], [conj(d₁₂), d₂₂]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalD {
    pub d11: f64,
    pub d22: f64,
    pub d12: Complex64,
}

impl CanonicalD {
    pub fn d21(&self) -> Complex64 {
        self.d12.conj()
    }

    pub fn matrix(&self) -> ComplexMatrix2 {
        mat2(c(self.d11, 0.0), self.d12, self.d21(), c(self.d22, 0.0))
    }

    /// `d₁₁ > 0` and `d₁₁d₂₂ > |d₁₂|²`.
    pub fn is_positive_definite(&self) -> bool {
        self.d11 > 0.0 && self.d11 * self.d22 > self.d12.norm_sqr()
    }
}

/// `max |Λ†D − DΛ|`.
pub fn canonical_residual(lambda: &ComplexMatrix2, d: &ComplexMatrix2) -> f64 {
    max_abs(&(lambda.adjoint() * d - d * lambda))
}

/// Unbroken-phase solution of `Λ†D = DΛ`:
/// `d₁₂ = i·d₁₁·sin((θ−θ')/2)/cos θ`, `d₂₁ = −d₁₂`, `d₂₂` free.
pub fn solve_canonical_d(frame: &TwoAngleFrame, d11: f64, d22: f64) -> Result<CanonicalD> {
    if !d11.is_finite() || !d22.is_finite() {
        return Err(Error::InvalidParameter("d11 and d22 must be finite".into()));
    }
    if frame.is_exceptional(DEFAULT_EP_TOL) {
        return Err(Error::ExceptionalPoint { theta: frame.theta(), tol: DEFAULT_EP_TOL });
    }
    let ratio = frame.half_difference_sin() / frame.theta().cos();
    Ok(CanonicalD { d11, d22, d12: c(0.0, d11 * ratio) })
}

/// Exceptional-point solution: `d₁₁ = 0`, `d₁₂ = i·d12_imag`, `d₂₂` free.
pub fn ep_canonical_d(frame: &TwoAngleFrame, d12_imag: f64, d22: f64) -> Result<CanonicalD> {
    if !frame.is_exceptional(DEFAULT_EP_TOL) {
        return Err(Error::NotExceptional { theta: frame.theta() });
    }
    if !d12_imag.is_finite() || !d22.is_finite() {
        return Err(Error::InvalidParameter("d12_imag and d22 must be finite".into()));
    }
    if d12_imag == 0.0 {
        return Err(Error::InvalidParameter(
            "d12 must be non-zero at the exceptional point (D would be singular)".into(),
        ));
    }
    Ok(CanonicalD { d11: 0.0, d22, d12: c(0.0, d12_imag) })
}

/// `η = (Ψ⁻¹)†DΨ⁻¹`.
pub fn reconstruct_metric(frame: &TwoAngleFrame, d: &CanonicalD) -> HermitianMetric {
    let eta = frame.psi_inv.adjoint() * d.matrix() * frame.psi_inv;
    HermitianMetric::from_hermitian_part(&eta)
}

/// Jordan decomposition at the exceptional point.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanFrame {
    pub psi: ComplexMatrix2,
    pub psi_inv: ComplexMatrix2,
    /// `[[E₀, 1], [0, E₀]]`.
    pub lambda: ComplexMatrix2,
    /// `σₓ`.
    pub d: ComplexMatrix2,
}

impl JordanFrame {
    pub fn reconstruction_residual(&self, h: &ComplexMatrix2) -> f64 {
        max_abs(&(self.psi * self.lambda * self.psi_inv - h))
    }

    pub fn metric(&self) -> HermitianMetric {
        HermitianMetric::from_hermitian_part(&(self.psi_inv.adjoint() * self.d * self.psi_inv))
    }
}

/// `Ψ_J = [ψ₊, v]` with `(H − E₀)v = ψ₊` and `⟨ψ₊|v⟩ = 0`.
pub fn ep_jordan_frame(params: &PtParams) -> Result<JordanFrame> {
    if !params.is_exceptional(DEFAULT_EP_TOL) {
        return Err(Error::NotExceptional { theta: params.theta() });
    }
    let e0 = params.e0();
    let h = build_hamiltonian(params);
    let nilpotent = h - identity2() * c(e0, 0.0);
    let plus = psi_plus(params.theta());
    // Minimum-norm least-squares solution lies in the orthogonal complement of
    // ker(H − E₀) = span ψ₊.
    let pinv = na::SVD::new(nilpotent, true, true)
        .pseudo_inverse(1e-12 * params.s().abs())
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut v = pinv * plus;
    v -= plus * plus.dotc(&v);
    let psi = ComplexMatrix2::from_columns(&[plus, v]);
    let psi_inv = psi.try_inverse().ok_or(Error::FrameSingular {
        theta: params.theta(),
        theta_prime: params.theta(),
    })?;
    let lambda = mat2(c(e0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(e0, 0.0));
    Ok(JordanFrame { psi, psi_inv, lambda, d: sigma_x() })
}

/// Outcome of matching a two-angle reconstruction against the closed-form
/// family `η₁₁·[[1, a − i sin θ], [a + i sin θ, 1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub theta: f64,
    pub theta_prime: f64,
    pub d: CanonicalD,
    pub eta: ComplexMatrix2,
    /// Common diagonal entry of η.
    pub eta11: f64,
    /// `Re(η₂₁)/η₁₁`; `None` for a singular match.
    pub a: Option<f64>,
    /// Entrywise distance between η and its closed-form match.
    pub residual: f64,
    /// `max |H†η − ηH|`.
    pub intertwining_residual: f64,
    /// η₁₁ vanishes: η is a real multiple of σₓ, outside the `(η₁₁, a)` chart.
    pub singular_match: bool,
    pub exceptional: bool,
    /// Distance to `½[[d₂₂, −2d₁₂i − d₂₂i], [−2d₁₂i + d₂₂i, d₂₂]]`, at θ = π/2 only.
    pub display_residual: Option<f64>,
}

/// Reconstructs η with `θ' = θ − π` and matches it to the closed-form family.
///
/// At `sin θ = 0` that frame is singular; the eigenvector frame `θ' = θ` is
/// used instead (where `d₁₂ = 0`).
pub fn equivalence_check(params: &PtParams, d11: f64, d22: f64) -> Result<EquivalenceReport> {
    let theta = params.theta();
    if params.is_exceptional(DEFAULT_EP_TOL) {
        return Err(Error::ExceptionalPoint { theta, tol: DEFAULT_EP_TOL });
    }
    let theta_prime = if (0.5 * (2.0 * theta - std::f64::consts::PI)).cos().abs() > DEFAULT_SINGULAR_TOL {
        theta - std::f64::consts::PI
    } else {
        theta
    };
    let frame = two_angle_frame(params, theta_prime)?;
    let d = solve_canonical_d(&frame, d11, d22)?;
    let eta = *reconstruct_metric(&frame, &d).matrix();
    let mut report = match_family(params, theta_prime, d, eta)?;
    report.exceptional = false;
    Ok(report)
}

/// Exceptional-point branch with `θ' = θ − π`, `d₁₁ = 0`, `d₁₂ = i·d12_imag`.
pub fn ep_equivalence_check(params: &PtParams, d12_imag: f64, d22: f64) -> Result<EquivalenceReport> {
    let theta = params.theta();
    if !params.is_exceptional(DEFAULT_EP_TOL) {
        return Err(Error::NotExceptional { theta });
    }
    let theta_prime = theta - std::f64::consts::PI;
    let frame = two_angle_frame(params, theta_prime)?;
    let d = ep_canonical_d(&frame, d12_imag, d22)?;
    let eta = *reconstruct_metric(&frame, &d).matrix();
    let mut report = match_family(params, theta_prime, d, eta)?;
    report.exceptional = true;
    if theta.sin() > 0.0 {
        let i = c(0.0, 1.0);
        let dd = c(d22, 0.0);
        let display = mat2(
            dd,
            -d.d12 * i * 2.0 - dd * i,
            -d.d12 * i * 2.0 + dd * i,
            dd,
        )
        .scale(0.5);
        report.display_residual = Some(max_abs(&(eta - display)));
    }
    Ok(report)
}

fn match_family(
    params: &PtParams,
    theta_prime: f64,
    d: CanonicalD,
    eta: ComplexMatrix2,
) -> Result<EquivalenceReport> {
    let theta = params.theta();
    let scale = max_abs(&eta).max(1.0);
    let tol = FRAME_TOL * scale;
    let mismatch = |residual: f64| Error::PatternMismatch { residual };

    let eta11 = eta[(0, 0)].re;
    let diag_residual = (eta[(1, 1)] - eta[(0, 0)]).norm().max(eta[(0, 0)].im.abs());
    if diag_residual > tol {
        return Err(mismatch(diag_residual));
    }
    let lower = eta[(1, 0)];
    let singular_match = eta11.abs() <= tol;
    let (a, matched) = if singular_match {
        (None, sigma_x().scale(lower.re))
    } else {
        let imag_residual = (lower.im - eta11 * theta.sin()).abs();
        if imag_residual > tol {
            return Err(mismatch(imag_residual));
        }
        let a = lower.re / eta11;
        let fam = MetricFamilyParams::new(eta11, a)?;
        (Some(a), family_matrix(theta, &fam))
    };
    let residual = max_abs(&(eta - matched));
    if residual > tol {
        return Err(mismatch(residual));
    }
    let h = build_hamiltonian(params);
    Ok(EquivalenceReport {
        theta,
        theta_prime,
        d,
        eta,
        eta11,
        a,
        residual,
        intertwining_residual: intertwining_residual(&h, &eta),
        singular_match,
        exceptional: false,
        display_residual: None,
    })
}

/// Closed form of η for `θ' = θ − π`:
/// `1/(2 sin²θ)·[[d₂₂ − d₁₁, w], [conj(w), d₂₂ − d₁₁]]` with
/// `w = −d₁₁e^{−iθ} − d₂₂e^{iθ} + 2d₁₁/cos θ`.
pub fn shifted_frame_metric(theta: f64, d11: f64, d22: f64) -> ComplexMatrix2 {
    let k = 1.0 / (2.0 * theta.sin().powi(2));
    let diag = c(d22 - d11, 0.0);
    let e = Complex64::from_polar(1.0, theta);
    let shift = c(2.0 * d11 / theta.cos(), 0.0);
    let upper = -e.conj() * d11 - e * d22 + shift;
    let lower = -e * d11 - e.conj() * d22 + shift;
    mat2(diag, upper, lower, diag).scale(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Definiteness;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn params(e0: f64, s: f64, th: f64) -> PtParams {
        PtParams::new(e0, s, th).unwrap()
    }

    #[test]
    fn coincident_angles_give_diagonal_lambda() {
        let f = two_angle_frame(&params(0.3, 1.2, 0.0), 0.0).unwrap();
        assert_eq!(f.c(), 0.0);
        assert_eq!(f.lambda()[(0, 1)], c(0.0, 0.0));
        assert!(max_abs(&(f.psi() * f.psi().adjoint() - identity2())) < 1e-15);
        assert!(f.similarity_residual() < 1e-12);
    }

    #[test]
    fn exceptional_frame_is_jordan_like() {
        let f = two_angle_frame(&params(0.7, 1.5, FRAC_PI_2), -FRAC_PI_2).unwrap();
        assert!((f.c() - 3.0).abs() < 1e-15);
        assert!((f.b1() - 0.7).abs() < 1e-15 && (f.b2() - 0.7).abs() < 1e-15);
        assert!(f.inverse_residual() < 1e-12 && f.similarity_residual() < 1e-12);
    }

    #[test]
    fn supplementary_angles_are_singular() {
        let e = two_angle_frame(&params(0.0, 1.0, FRAC_PI_3), PI - FRAC_PI_3).unwrap_err();
        assert!(matches!(e, Error::FrameSingular { .. }));
    }

    #[test]
    fn closed_form_inverse_matches_numeric() {
        let f = two_angle_frame(&params(-1.0, 0.4, 0.9), -2.3).unwrap();
        let numeric = f.psi().try_inverse().unwrap();
        assert!(max_abs(&(numeric - f.psi_inv())) < 1e-12);
    }

    #[test]
    fn canonical_d_examples() {
        let f = two_angle_frame(&params(0.0, 1.0, FRAC_PI_3), FRAC_PI_3 - PI).unwrap();
        let d = solve_canonical_d(&f, 1.0, 1.0).unwrap();
        assert!((d.d12 - c(0.0, 2.0)).norm() < 1e-12);
        assert!(canonical_residual(f.lambda(), &d.matrix()) < 1e-10);

        let f = two_angle_frame(&params(0.0, 1.0, 0.0), 0.0).unwrap();
        let d = solve_canonical_d(&f, 1.0, -1.0).unwrap();
        assert_eq!(d.d12, c(0.0, 0.0));
        let want = mat2(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0));
        assert_eq!(d.matrix(), want);

        let f = two_angle_frame(&params(0.0, 1.0, FRAC_PI_2), -FRAC_PI_2).unwrap();
        assert!(matches!(solve_canonical_d(&f, 1.0, 0.0), Err(Error::ExceptionalPoint { .. })));
    }

    #[test]
    fn ep_canonical_d_examples() {
        let f = two_angle_frame(&params(0.0, 1.0, FRAC_PI_2), -FRAC_PI_2).unwrap();
        let d = ep_canonical_d(&f, 1.0, 0.0).unwrap();
        let want = mat2(c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0));
        assert_eq!(d.matrix(), want);
        assert!(canonical_residual(f.lambda(), &d.matrix()) < 1e-10);

        let d = ep_canonical_d(&f, 1.0, 5.0).unwrap();
        assert!(canonical_residual(f.lambda(), &d.matrix()) < 1e-10);

        assert!(matches!(ep_canonical_d(&f, 0.0, 2.0), Err(Error::InvalidParameter(_))));

        let g = two_angle_frame(&params(0.0, 1.0, 0.2), -0.2).unwrap();
        assert!(matches!(ep_canonical_d(&g, 1.0, 0.0), Err(Error::NotExceptional { .. })));
    }

    #[test]
    fn reconstruction_examples() {
        let f = two_angle_frame(&params(0.0, 1.0, 0.0), 0.0).unwrap();
        let d = solve_canonical_d(&f, 1.0, 1.0).unwrap();
        let eta = reconstruct_metric(&f, &d);
        assert!(max_abs(&(eta.matrix() - identity2())) < 1e-15);

        let th = FRAC_PI_3;
        let f = two_angle_frame(&params(0.0, 1.0, th), th - PI).unwrap();
        let d = solve_canonical_d(&f, 1.0, 1.0).unwrap();
        let eta = reconstruct_metric(&f, &d);
        assert!(max_abs(&(eta.matrix() - shifted_frame_metric(th, 1.0, 1.0))) < 1e-12);
        let h = build_hamiltonian(f.params());
        assert!(intertwining_residual(&h, eta.matrix()) < 1e-10);
    }

    #[test]
    fn ep_reconstruction_matches_display() {
        let p = params(0.0, 1.0, FRAC_PI_2);
        let r = ep_equivalence_check(&p, -0.8, 1.3).unwrap();
        assert!(r.display_residual.unwrap() < 1e-12);
        assert!(r.exceptional);
        // ½[[d22, 2k − i d22], ...] is the family at η₁₁ = d22/2, a = 2k/d22 with d12 = ik
        assert!((r.eta11 - 0.65).abs() < 1e-12);
        assert!((r.a.unwrap() - 2.0 * (-0.8) / 1.3).abs() < 1e-12);
        assert!(r.intertwining_residual < 1e-10);
    }

    #[test]
    fn ep_reconstruction_negative_branch() {
        let p = params(0.0, 1.0, -FRAC_PI_2);
        let r = ep_equivalence_check(&p, 0.5, 2.0).unwrap();
        assert!(r.display_residual.is_none());
        assert!(r.residual < 1e-10 && r.intertwining_residual < 1e-10);
    }

    #[test]
    fn equivalence_examples() {
        let r = equivalence_check(&params(0.0, 1.0, FRAC_PI_3), 1.0, 2.0).unwrap();
        assert!(r.residual <= 1e-10);
        assert!(r.a.unwrap().is_finite());
        let direct = shifted_frame_metric(FRAC_PI_3, 1.0, 2.0);
        assert!(max_abs(&(r.eta - direct)) < 1e-12);

        let r = equivalence_check(&params(0.0, 1.0, 0.0), 1.0, 1.0).unwrap();
        assert!((r.eta11 - 1.0).abs() < 1e-12);
        assert!(r.a.unwrap().abs() < 1e-12);

        let r = equivalence_check(&params(0.0, 1.0, FRAC_PI_3), 1.0, 1.0).unwrap();
        assert!(r.singular_match);
        assert!(r.a.is_none());
        assert!(r.residual < 1e-10);

        assert!(matches!(
            equivalence_check(&params(0.0, 1.0, FRAC_PI_2), 1.0, 1.0),
            Err(Error::ExceptionalPoint { .. })
        ));
    }

    #[test]
    fn jordan_frame_examples() {
        let p = params(0.0, 1.0, FRAC_PI_2);
        let j = ep_jordan_frame(&p).unwrap();
        let want = mat2(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(j.lambda, want);
        assert_eq!(j.d, sigma_x());
        assert!(canonical_residual(&j.lambda, &j.d) < 1e-10);
        let h = build_hamiltonian(&p);
        assert!(j.reconstruction_residual(&h) < 1e-10);
        assert!(j.psi.column(0).dotc(&j.psi.column(1)).norm() < 1e-12);
        let eta = j.metric();
        assert!(intertwining_residual(&h, eta.matrix()) < 1e-10);
        assert_eq!(eta.definiteness(), Definiteness::Indefinite);

        let p = params(5.0, 2.0, -FRAC_PI_2);
        let j = ep_jordan_frame(&p).unwrap();
        assert_eq!(j.lambda, mat2(c(5.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)));
        assert!(j.reconstruction_residual(&build_hamiltonian(&p)) < 1e-10);

        assert!(matches!(ep_jordan_frame(&params(0.0, 1.0, 0.0)), Err(Error::NotExceptional { .. })));
    }
}
