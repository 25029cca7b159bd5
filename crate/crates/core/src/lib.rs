//! Metric operators, exceptional points and Hermitian dilation for the
//! two-level PT-symmetric Hamiltonian
//!
//! ```text
//! H(θ) = E₀·I + s·[[i sin θ, 1], [1, −i sin θ]]
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: the Hamiltonian, its closed-form eigensystem and phase.
//! * [`metric`]: Hermitian solutions of `H†η = ηH`, numerically and in
//!   closed form, plus definiteness classification.
//! * [`canonical`]: the two-angle frame `H = ΨΛΨ⁻¹`, canonical `D` blocks and
//!   the Jordan frame at the exceptional point.
//! * [`measures`]: the l₁ distance Δ₁, the canonical ratio measure Δ₂ and
//!   the dilation efficiency, together with their lower bounds.
//! * [`dilation`]: `η = I + τ²`, the 4×4 Hermitian embedding and its
//!   time evolution.
//!
//! Every operation is a pure function on small fixed-size matrices.

pub mod canonical;
pub mod dilation;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod metric;
pub mod model;

pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix2, ComplexMatrix4, ComplexVector2, ComplexVector4};
pub use metric::{Definiteness, HermitianMetric, MetricFamilyParams, MetricSolutionSpace};
pub use model::{EigenSystem, Phase, PhaseClass, PtParams};
