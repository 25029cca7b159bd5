//! Hermitian solutions of the intertwining relation `H†η = ηH`.
//!
//! Two independent routes are provided: a numeric null-space solve of the
//! real-linear map `X ↦ H†X − XH` on Hermitian 2×2 matrices, and the
//! closed-form two-parameter family `η = η₁₁·[[1, a − i sin θ], [a + i sin θ, 1]]`
//! valid for the model Hamiltonian.

use nalgebra as na;

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigenvalues2, hermitian_part, hermiticity_residual, identity2, is_finite, mat2,
    max_abs, sigma_x, sigma_y, ComplexMatrix2,
};

/// Relative singular-value threshold of [`solve_intertwining_space`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Relative (to the largest eigenvalue magnitude) definiteness tolerance.
pub const DEFAULT_DEFINITENESS_REL_TOL: f64 = 1e-10;

/// Residual below which a matrix is treated as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    Singular,
}

impl Definiteness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Definiteness::PositiveDefinite => "PositiveDefinite",
            Definiteness::NegativeDefinite => "NegativeDefinite",
            Definiteness::Indefinite => "Indefinite",
            Definiteness::Singular => "Singular",
        }
    }

    fn from_eigenvalues(eig_min: f64, eig_max: f64, tol: f64) -> Self {
        if eig_min > tol {
            Definiteness::PositiveDefinite
        } else if eig_max < -tol {
            Definiteness::NegativeDefinite
        } else if eig_min.abs().min(eig_max.abs()) <= tol {
            Definiteness::Singular
        } else {
            Definiteness::Indefinite
        }
    }
}

impl std::fmt::Display for Definiteness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scale-invariant default tolerance for a spectrum `(eig_min, eig_max)`.
pub fn default_definiteness_tol(eig_min: f64, eig_max: f64) -> f64 {
    DEFAULT_DEFINITENESS_REL_TOL * eig_min.abs().max(eig_max.abs())
}

/// A Hermitian 2×2 matrix together with its spectrum and definiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMetric {
    matrix: ComplexMatrix2,
    eig_min: f64,
    eig_max: f64,
    definiteness: Definiteness,
}

impl HermitianMetric {
    /// Accepts `m` when `‖m − m†‖ ≤ 1e−12`; the stored matrix is the
    /// Hermitian part of `m`.
    pub fn from_matrix(m: ComplexMatrix2) -> Result<Self> {
        if !is_finite(&m) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        let residual = hermiticity_residual(&m);
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self::from_hermitian_part(&m))
    }

    /// Symmetrizes unconditionally. For results of exact Hermitian
    /// constructions whose rounding may exceed the strict acceptance check.
    pub(crate) fn from_hermitian_part(m: &ComplexMatrix2) -> Self {
        let matrix = hermitian_part(m);
        let (eig_min, eig_max) = hermitian_eigenvalues2(&matrix);
        Self::with_spectrum(matrix, eig_min, eig_max)
    }

    fn with_spectrum(matrix: ComplexMatrix2, eig_min: f64, eig_max: f64) -> Self {
        let tol = default_definiteness_tol(eig_min, eig_max);
        Self {
            matrix,
            eig_min,
            eig_max,
            definiteness: Definiteness::from_eigenvalues(eig_min, eig_max, tol),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix2 {
        &self.matrix
    }

    pub fn eig_min(&self) -> f64 {
        self.eig_min
    }

    pub fn eig_max(&self) -> f64 {
        self.eig_max
    }

    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    pub fn is_positive_definite(&self) -> bool {
        self.definiteness == Definiteness::PositiveDefinite
    }

    /// `factor·η`; a positive factor keeps the intertwining relation.
    pub fn scaled(&self, factor: f64) -> Self {
        let (lo, hi) = if factor >= 0.0 {
            (self.eig_min * factor, self.eig_max * factor)
        } else {
            (self.eig_max * factor, self.eig_min * factor)
        };
        Self::with_spectrum(self.matrix.scale(factor), lo, hi)
    }
}

pub fn classify_definiteness(m: &ComplexMatrix2, tol: f64) -> Result<Definiteness> {
    let residual = hermiticity_residual(m);
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let (lo, hi) = hermitian_eigenvalues2(&hermitian_part(m));
    Ok(Definiteness::from_eigenvalues(lo, hi, tol))
}

/// `max |H†η − ηH|`.
pub fn intertwining_residual(h: &ComplexMatrix2, eta: &ComplexMatrix2) -> f64 {
    max_abs(&(h.adjoint() * eta - eta * h))
}

/// Parameters `(η₁₁, a)` of the closed-form metric family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricFamilyParams {
    eta11: f64,
    a: f64,
}

impl MetricFamilyParams {
    pub fn new(eta11: f64, a: f64) -> Result<Self> {
        if !eta11.is_finite() || !a.is_finite() {
            return Err(Error::InvalidParameter("metric parameters must be finite".into()));
        }
        if eta11 == 0.0 {
            return Err(Error::InvalidParameter("eta11 must be non-zero".into()));
        }
        Ok(Self { eta11, a })
    }

    pub fn eta11(&self) -> f64 {
        self.eta11
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `√(a² + sin²θ)`.
    pub fn radius(&self, theta: f64) -> f64 {
        self.a.hypot(theta.sin())
    }

    /// Exact spectrum `η₁₁(1 ± √(a² + sin²θ))` as `(λ₊, λ₋)`, unordered when
    /// `η₁₁ < 0`.
    pub fn spectral_eigenvalues(&self, theta: f64) -> (f64, f64) {
        let r = self.radius(theta);
        (self.eta11 * (1.0 + r), self.eta11 * (1.0 - r))
    }

    /// The halved closed form `η₁₁(1 ± √(a² + sin²θ))/2` as `(λ₊, λ₋)`.
    ///
    /// This is half the true spectrum. It is the normalization under which
    /// `Δ₁·p₋ ≥ 4` holds; see [`crate::measures`].
    pub fn halved_eigenvalues(&self, theta: f64) -> (f64, f64) {
        let (p, m) = self.spectral_eigenvalues(theta);
        (0.5 * p, 0.5 * m)
    }

    /// Positive definite iff `η₁₁ > 0` and `a² + sin²θ < 1`.
    pub fn is_positive_definite_at(&self, theta: f64) -> bool {
        self.eta11 > 0.0 && self.a * self.a + theta.sin().powi(2) < 1.0
    }
}

pub fn family_matrix(theta: f64, p: &MetricFamilyParams) -> ComplexMatrix2 {
    let sin = theta.sin();
    let k = p.eta11;
    mat2(c(k, 0.0), c(k * p.a, -k * sin), c(k * p.a, k * sin), c(k, 0.0))
}

/// Closed-form family member at angle `theta`, with its exact spectrum.
pub fn family_metric(theta: f64, p: &MetricFamilyParams) -> HermitianMetric {
    let (x, y) = p.spectral_eigenvalues(theta);
    HermitianMetric::with_spectrum(family_matrix(theta, p), x.min(y), x.max(y))
}

/// Real-linear basis of every Hermitian `X` with `H†X = XH`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSolutionSpace {
    basis: Vec<ComplexMatrix2>,
    singular_values: Vec<f64>,
}

impl MetricSolutionSpace {
    /// Orthonormal under `⟨X, Y⟩ = Re tr(X†Y)`.
    pub fn basis(&self) -> &[ComplexMatrix2] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Singular values of the vectorized map, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn combine(&self, coeffs: &[f64]) -> ComplexMatrix2 {
        self.basis
            .iter()
            .zip(coeffs)
            .fold(ComplexMatrix2::zeros(), |acc, (b, &w)| acc + b.scale(w))
    }

    /// Frobenius distance from `m` to its orthogonal projection on the span.
    pub fn projection_residual(&self, m: &ComplexMatrix2) -> f64 {
        let coeffs: Vec<f64> = self.basis.iter().map(|b| frobenius_inner(b, m)).collect();
        (m - self.combine(&coeffs)).norm()
    }
}

fn frobenius_inner(x: &ComplexMatrix2, y: &ComplexMatrix2) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Frobenius-orthonormal basis of Hermitian 2×2 matrices.
fn hermitian_coordinate_basis() -> [ComplexMatrix2; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        mat2(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
        mat2(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
        sigma_x().scale(h),
        sigma_y().scale(h),
    ]
}

/// Null space of `X ↦ H†X − XH` restricted to Hermitian `X`, by SVD of the
/// 8×4 real matrix of the map. Singular values at or below
/// `rank_tol·σ_max` count as zero.
pub fn solve_intertwining_space(h: &ComplexMatrix2, rank_tol: f64) -> Result<MetricSolutionSpace> {
    if !is_finite(h) {
        return Err(Error::InvalidParameter("Hamiltonian has non-finite entries".into()));
    }
    if !(rank_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("rank_tol must be positive, got {rank_tol}")));
    }
    let coords = hermitian_coordinate_basis();
    let mut map = na::SMatrix::<f64, 8, 4>::zeros();
    for (col, e) in coords.iter().enumerate() {
        let image = h.adjoint() * e - e * h;
        for (k, z) in image.iter().enumerate() {
            map[(2 * k, col)] = z.re;
            map[(2 * k + 1, col)] = z.im;
        }
    }
    // 8×4 has min dimension 4, so v_t holds every right singular vector.
    let svd = na::SVD::new(map, false, true);
    let v_t = svd.v_t.expect("SVD requested right singular vectors");
    let singular: Vec<f64> = svd.singular_values.iter().copied().collect();
    let sigma_max = singular.iter().cloned().fold(0.0, f64::max);

    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| singular[j].total_cmp(&singular[i]));

    let basis = order
        .iter()
        .filter(|&&i| sigma_max == 0.0 || singular[i] <= rank_tol * sigma_max)
        .map(|&i| {
            let row = v_t.row(i);
            coords
                .iter()
                .zip(row.iter())
                .fold(ComplexMatrix2::zeros(), |acc, (e, &w)| acc + e.scale(w))
        })
        .collect();
    Ok(MetricSolutionSpace {
        basis,
        singular_values: order.iter().map(|&i| singular[i]).collect(),
    })
}

/// Maximizes the smallest eigenvalue over unit-norm coefficient vectors of the
/// basis: a 1° grid in hyperspherical angles, then cyclic golden-section
/// refinement of each angle around the best grid point.
///
/// Returns `None` when the maximum does not exceed `tol`.
pub fn find_positive_metric(space: &MetricSolutionSpace, tol: f64) -> Option<HermitianMetric> {
    let n = space.dimension();
    if n == 0 {
        return None;
    }
    let objective = |angles: &[f64]| {
        let m = space.combine(&sphere_point(angles, n));
        hermitian_eigenvalues2(&m).0
    };

    let best = if n == 1 {
        let plus = objective(&[]);
        let minus = -hermitian_eigenvalues2(&space.basis[0]).1;
        if plus >= minus {
            space.basis[0]
        } else {
            -space.basis[0]
        }
    } else {
        let step = 1f64.to_radians();
        let ranges: Vec<(f64, usize)> = (0..n - 1)
            .map(|k| if k == n - 2 { (0.0, 360) } else { (0.0, 181) })
            .collect();
        let mut angles = vec![0.0; n - 1];
        let mut best_angles = angles.clone();
        let mut best_value = f64::NEG_INFINITY;
        grid_search(&ranges, step, 0, &mut angles, &objective, &mut best_angles, &mut best_value);

        for _ in 0..4 {
            for k in 0..n - 1 {
                let centre = best_angles[k];
                let f = |x: f64| {
                    let mut a = best_angles.clone();
                    a[k] = x;
                    objective(&a)
                };
                let x = golden_section_max(f, centre - step, centre + step, 1e-13);
                let value = f(x);
                if value > best_value {
                    best_value = value;
                    best_angles[k] = x;
                }
            }
        }
        space.combine(&sphere_point(&best_angles, n))
    };

    let metric = HermitianMetric::from_hermitian_part(&best);
    (metric.eig_min() > tol).then_some(HermitianMetric {
        definiteness: Definiteness::PositiveDefinite,
        ..metric
    })
}

fn grid_search<F: Fn(&[f64]) -> f64>(
    ranges: &[(f64, usize)],
    step: f64,
    depth: usize,
    angles: &mut Vec<f64>,
    objective: &F,
    best_angles: &mut Vec<f64>,
    best_value: &mut f64,
) {
    if depth == ranges.len() {
        let v = objective(angles);
        if v > *best_value {
            *best_value = v;
            best_angles.clone_from(angles);
        }
        return;
    }
    let (start, count) = ranges[depth];
    for i in 0..count {
        angles[depth] = start + step * i as f64;
        grid_search(ranges, step, depth + 1, angles, objective, best_angles, best_value);
    }
}

/// Hyperspherical coordinates to a unit vector in `R^n`.
fn sphere_point(angles: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let mut carry = 1.0;
    for (k, &phi) in angles.iter().enumerate() {
        out[k] = carry * phi.cos();
        carry *= phi.sin();
    }
    out[n - 1] = carry;
    out
}

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// The identity is a metric exactly when `H` is Hermitian.
pub fn dirac_metric() -> HermitianMetric {
    HermitianMetric::with_spectrum(identity2(), 1.0, 1.0)
}
