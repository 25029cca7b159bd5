//! Hermitian dilation of a non-Hermitian 2×2 Hamiltonian.
//!
//! Given a positive metric written as `η = I + τ²` with `τ` Hermitian and
//! invertible, the 4×4 Hermitian matrix
//!
//! ```text
//! Ĥ = [[H₁, H₂], [H₂†, H₄]]
//! H₁ = (H + H†)/2
//! H₂ = (H − H†)·τ⁻¹/2
//! H₄ = τHτ⁻¹ − τ⁻¹H†τ⁻¹ + τ⁻¹H₁τ⁻¹
//! ```
//!
//! maps states `(ψ, τψ)` to `(Hψ, τHψ)`, so the first block of a unitary
//! evolution under Ĥ follows `iψ' = Hψ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigh2, hermitian_eigh4, hermitian_propagator4, hermitian_sqrt2, identity2,
    max_abs, to_block4, Complex64, ComplexMatrix2, ComplexMatrix4, ComplexVector2,
    ComplexVector4,
};
use crate::metric::{intertwining_residual, HermitianMetric};

pub const DEFAULT_MARGIN: f64 = 1.0;

/// Tolerance on the intertwining precondition and the bundle identities.
pub const DILATION_TOL: f64 = 1e-10;

pub const DEFAULT_TRANSITION_SAMPLES: usize = 10_000;
pub const DEFAULT_TRANSITION_SEED: u64 = 0x05EE_DE7A;

/// Rescales η so that its smallest eigenvalue is `1 + margin` and returns it
/// with `τ = √(η − I)`, whose smallest eigenvalue is then `√margin`.
pub fn tau_from_metric(
    eta: &HermitianMetric,
    margin: f64,
) -> Result<(HermitianMetric, ComplexMatrix2)> {
    if !(margin > 0.0) || !margin.is_finite() {
        return Err(Error::InvalidParameter(format!("margin must be positive, got {margin}")));
    }
    if !eta.is_positive_definite() {
        return Err(Error::NotPositive { eig_min: eta.eig_min() });
    }
    let scaled = eta.scaled((1.0 + margin) / eta.eig_min());
    let tau = hermitian_sqrt2(&(scaled.matrix() - identity2()));
    Ok((scaled, tau))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DilationBundle {
    pub h: ComplexMatrix2,
    pub eta: HermitianMetric,
    pub tau: ComplexMatrix2,
    pub tau_inv: ComplexMatrix2,
    pub h1: ComplexMatrix2,
    pub h2: ComplexMatrix2,
    pub h4: ComplexMatrix2,
    pub h_hat: ComplexMatrix4,
}

impl DilationBundle {
    /// `max |I + τ² − η|`.
    pub fn metric_residual(&self) -> f64 {
        max_abs(&(identity2() + self.tau * self.tau - self.eta.matrix()))
    }

    /// `max |Ĥ − Ĥ†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        max_abs(&(self.h_hat - self.h_hat.adjoint()))
    }

    /// Larger of `max |H₁ + H₂τ − H|` and `max |H₂† + H₄τ − τH|`.
    pub fn row_residual(&self) -> f64 {
        let first = max_abs(&(self.h1 + self.h2 * self.tau - self.h));
        let second = max_abs(&(self.h2.adjoint() + self.h4 * self.tau - self.tau * self.h));
        first.max(second)
    }

    /// `exp(−iĤt)`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix4 {
        let (values, vectors) = hermitian_eigh4(&self.h_hat);
        hermitian_propagator4(&values, &vectors, t)
    }
}

/// Builds the dilation from `H`, a metric η and `τ` with `η = I + τ²`.
pub fn assemble_dilated(
    h: &ComplexMatrix2,
    eta: &HermitianMetric,
    tau: &ComplexMatrix2,
) -> Result<DilationBundle> {
    let residual = intertwining_residual(h, eta.matrix());
    let scale = max_abs(h).max(1.0) * max_abs(eta.matrix()).max(1.0);
    if residual > DILATION_TOL * scale {
        return Err(Error::IntertwiningViolation { residual });
    }
    let tau_inv = tau
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("τ is not invertible".into()))?;
    let h1 = hermitian_part(h);
    Ok(assemble_with_h1(h, eta, tau, &tau_inv, h1))
}

/// As [`assemble_dilated`] with a caller-chosen Hermitian `H₁` and no
/// precondition check, so the Hermiticity of `H₄` can be probed directly.
pub fn assemble_with_free_block(
    h: &ComplexMatrix2,
    eta: &HermitianMetric,
    tau: &ComplexMatrix2,
    h1: &ComplexMatrix2,
) -> Result<DilationBundle> {
    let tau_inv = tau
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("τ is not invertible".into()))?;
    Ok(assemble_with_h1(h, eta, tau, &tau_inv, *h1))
}

fn assemble_with_h1(
    h: &ComplexMatrix2,
    eta: &HermitianMetric,
    tau: &ComplexMatrix2,
    tau_inv: &ComplexMatrix2,
    h1: ComplexMatrix2,
) -> DilationBundle {
    let h_dag = h.adjoint();
    let h2 = (h - h1) * tau_inv;
    let h4 = tau * h * tau_inv - tau_inv * h_dag * tau_inv + tau_inv * h1 * tau_inv;
    let h_hat = to_block4(&h1, &h2, &h2.adjoint(), &h4);
    DilationBundle {
        h: *h,
        eta: eta.clone(),
        tau: *tau,
        tau_inv: *tau_inv,
        h1,
        h2,
        h4,
        h_hat,
    }
}

fn hermitian_part(m: &ComplexMatrix2) -> ComplexMatrix2 {
    (m + m.adjoint()).scale(0.5)
}

/// Rescale with `margin`, take `τ`, assemble.
pub fn dilate(h: &ComplexMatrix2, eta: &HermitianMetric, margin: f64) -> Result<DilationBundle> {
    let (scaled, tau) = tau_from_metric(eta, margin)?;
    assemble_dilated(h, &scaled, &tau)
}

/// `exp(−iHt)` for an arbitrary 2×2 `H`.
///
/// Diagonalizable `H` goes through its eigendecomposition; when the two
/// eigenvalues coincide the nilpotent expansion `e^{−iμt}(I − it(H − μI))` is
/// used.
#[derive(Debug, Clone)]
pub struct ReferencePropagator {
    mean: Complex64,
    kind: PropagatorKind,
}

#[derive(Debug, Clone)]
enum PropagatorKind {
    Diagonal { split: Complex64, vectors: ComplexMatrix2, inverse: ComplexMatrix2 },
    Jordan { nilpotent: ComplexMatrix2 },
}

impl ReferencePropagator {
    pub fn new(h: &ComplexMatrix2) -> Self {
        let mean = (h[(0, 0)] + h[(1, 1)]) * 0.5;
        let k = h - identity2() * mean;
        // K is traceless, so K² = ω²I with ω² = −det K.
        let omega_sq = -(k[(0, 0)] * k[(1, 1)] - k[(0, 1)] * k[(1, 0)]);
        let omega = omega_sq.sqrt();
        let scale = max_abs(h).max(f64::MIN_POSITIVE);
        if omega.norm() <= 1e-12 * scale {
            return Self { mean, kind: PropagatorKind::Jordan { nilpotent: k } };
        }
        let vectors = ComplexMatrix2::from_columns(&[
            eigenvector(&k, omega),
            eigenvector(&k, -omega),
        ]);
        match vectors.try_inverse() {
            Some(inverse) => Self {
                mean,
                kind: PropagatorKind::Diagonal { split: omega, vectors, inverse },
            },
            None => Self { mean, kind: PropagatorKind::Jordan { nilpotent: k } },
        }
    }

    pub fn is_jordan(&self) -> bool {
        matches!(self.kind, PropagatorKind::Jordan { .. })
    }

    pub fn at(&self, t: f64) -> ComplexMatrix2 {
        let i = c(0.0, 1.0);
        let global = (-i * self.mean * t).exp();
        match &self.kind {
            PropagatorKind::Diagonal { split, vectors, inverse } => {
                let phases = ComplexMatrix2::from_diagonal(&ComplexVector2::new(
                    (-i * split * t).exp(),
                    (i * split * t).exp(),
                ));
                vectors * phases * inverse * global
            }
            PropagatorKind::Jordan { nilpotent } => {
                (identity2() - nilpotent * (i * t)) * global
            }
        }
    }
}

/// Eigenvector of traceless `k` for eigenvalue `w`, from whichever row of
/// `k − wI` is better conditioned.
fn eigenvector(k: &ComplexMatrix2, w: Complex64) -> ComplexVector2 {
    let a = k[(0, 0)] - w;
    let b = k[(0, 1)];
    let cc = k[(1, 0)];
    let d = k[(1, 1)] - w;
    let from_first = ComplexVector2::new(b, -a);
    let from_second = ComplexVector2::new(-d, cc);
    let v = if from_first.norm() >= from_second.norm() { from_first } else { from_second };
    v.unscale(v.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    /// `exp(−iĤt)(ψ₀, τψ₀)`.
    pub dilated_state: Vec<ComplexVector4>,
    /// `exp(−iHt)ψ₀`.
    pub reference_state: Vec<ComplexVector2>,
    /// `max_t ‖first block − ψ(t)‖₂`.
    pub deviation: f64,
    /// `max_t ‖second block − τψ(t)‖₂`.
    pub second_block_deviation: f64,
    /// `max_t |‖Φ(t)‖₂ − ‖Φ(0)‖₂|`.
    pub norm_drift: f64,
}

impl EvolutionTrace {
    pub fn first_block(&self, k: usize) -> ComplexVector2 {
        let v = &self.dilated_state[k];
        ComplexVector2::new(v[0], v[1])
    }

    pub fn second_block(&self, k: usize) -> ComplexVector2 {
        let v = &self.dilated_state[k];
        ComplexVector2::new(v[2], v[3])
    }
}

/// Evolves `(ψ₀, τψ₀)` under Ĥ and `ψ₀` under H on `steps` equally spaced
/// times in `[0, t_max]` and records the deviations.
pub fn evolve_and_compare(
    bundle: &DilationBundle,
    psi0: &ComplexVector2,
    t_max: f64,
    steps: usize,
) -> Result<EvolutionTrace> {
    if psi0.norm() == 0.0 || !psi0.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter("ψ₀ must be finite and non-zero".into()));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("steps must be at least 2, got {steps}")));
    }
    if !t_max.is_finite() || t_max < 0.0 {
        return Err(Error::InvalidParameter(format!("t_max must be finite and ≥ 0, got {t_max}")));
    }
    let (values, vectors) = hermitian_eigh4(&bundle.h_hat);
    let reference = ReferencePropagator::new(&bundle.h);
    let tau_psi = bundle.tau * psi0;
    let phi0 = ComplexVector4::new(psi0[0], psi0[1], tau_psi[0], tau_psi[1]);
    let norm0 = phi0.norm();

    let mut trace = EvolutionTrace {
        times: Vec::with_capacity(steps),
        dilated_state: Vec::with_capacity(steps),
        reference_state: Vec::with_capacity(steps),
        deviation: 0.0,
        second_block_deviation: 0.0,
        norm_drift: 0.0,
    };
    for k in 0..steps {
        let t = t_max * k as f64 / (steps - 1) as f64;
        let phi = hermitian_propagator4(&values, &vectors, t) * phi0;
        let psi = reference.at(t) * psi0;
        let first = ComplexVector2::new(phi[0], phi[1]);
        let second = ComplexVector2::new(phi[2], phi[3]);
        trace.deviation = trace.deviation.max((first - psi).norm());
        trace.second_block_deviation =
            trace.second_block_deviation.max((second - bundle.tau * psi).norm());
        trace.norm_drift = trace.norm_drift.max((phi.norm() - norm0).abs());
        trace.times.push(t);
        trace.dilated_state.push(phi);
        trace.reference_state.push(psi);
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMinimum {
    /// `min |⟨ψ|ψ⟩/⟨ψ|η|ψ⟩|`.
    pub probability: f64,
    pub minimizer: ComplexVector2,
    /// Whether the analytic candidate (top eigenvector) attained the minimum.
    pub attained_by_top_eigenvector: bool,
}

/// Samples `samples` random unit vectors (seeded) plus the top eigenvector of
/// η and returns the smallest transition probability found.
pub fn min_transition_probability(
    eta: &HermitianMetric,
    samples: usize,
    seed: u64,
) -> Result<TransitionMinimum> {
    if !eta.is_positive_definite() {
        return Err(Error::NotPositive { eig_min: eta.eig_min() });
    }
    if samples < 100 {
        return Err(Error::InvalidParameter(format!("samples must be at least 100, got {samples}")));
    }
    let m = eta.matrix();
    let probability = |v: &ComplexVector2| {
        let num = v.dotc(v);
        let den = v.dotc(&(m * v));
        (num / den).norm()
    };

    let (_, vectors) = hermitian_eigh2(m);
    let top: ComplexVector2 = vectors.column(1).into();
    let mut best = TransitionMinimum {
        probability: probability(&top),
        minimizer: top,
        attained_by_top_eigenvector: true,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let v = ComplexVector2::new(
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        let n = v.norm();
        if n == 0.0 {
            continue;
        }
        let v = v.unscale(n);
        let p = probability(&v);
        if p < best.probability {
            best = TransitionMinimum { probability: p, minimizer: v, attained_by_top_eigenvector: false };
        }
    }
    Ok(best)
}
