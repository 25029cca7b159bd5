//! Fixed-size complex matrix helpers shared by every module.

use nalgebra as na;

pub use na::Complex;

pub type Complex64 = Complex<f64>;
pub type ComplexMatrix2 = na::Matrix2<Complex64>;
pub type ComplexMatrix4 = na::Matrix4<Complex64>;
pub type ComplexVector2 = na::Vector2<Complex64>;
pub type ComplexVector4 = na::Vector4<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a 2×2 matrix from rows.
pub fn mat2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> ComplexMatrix2 {
    ComplexMatrix2::new(a, b, c, d)
}

pub fn identity2() -> ComplexMatrix2 {
    ComplexMatrix2::identity()
}

pub fn sigma_x() -> ComplexMatrix2 {
    mat2(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn sigma_y() -> ComplexMatrix2 {
    mat2(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn sigma_z() -> ComplexMatrix2 {
    mat2(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// Largest entrywise modulus.
pub fn max_abs<R, C, S>(m: &na::Matrix<Complex64, R, C, S>) -> f64
where
    R: na::Dim,
    C: na::Dim,
    S: na::RawStorage<Complex64, R, C>,
{
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn is_finite(m: &ComplexMatrix2) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `max |m − m†|`.
pub fn hermiticity_residual(m: &ComplexMatrix2) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn hermitian_part(m: &ComplexMatrix2) -> ComplexMatrix2 {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues `(min, max)` of a Hermitian 2×2 matrix.
///
/// Only the Hermitian part of `m` is read. The smaller-magnitude eigenvalue is
/// recovered from the determinant to avoid cancellation when both have the
/// same sign.
pub fn hermitian_eigenvalues2(m: &ComplexMatrix2) -> (f64, f64) {
    let p = m[(0, 0)].re;
    let q = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (p + q);
    let radius = (0.5 * (p - q)).hypot(b.norm());
    let det = p * q - b.norm_sqr();
    if mean > 0.0 {
        let hi = mean + radius;
        (det / hi, hi)
    } else if mean < 0.0 {
        let lo = mean - radius;
        (lo, det / lo)
    } else {
        (-radius, radius)
    }
}

/// Eigen-decomposition of a Hermitian 2×2 matrix: ascending eigenvalues and
/// the unitary matrix whose columns are the matching eigenvectors.
pub fn hermitian_eigh2(m: &ComplexMatrix2) -> ([f64; 2], ComplexMatrix2) {
    let eig = na::SymmetricEigen::new(hermitian_part(m));
    sort_eigh(eig.eigenvalues.as_slice(), &eig.eigenvectors)
}

/// Eigen-decomposition of a Hermitian 4×4 matrix, ascending.
pub fn hermitian_eigh4(m: &ComplexMatrix4) -> ([f64; 4], ComplexMatrix4) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = na::SymmetricEigen::new(h);
    sort_eigh(eig.eigenvalues.as_slice(), &eig.eigenvectors)
}

fn sort_eigh<D, const N: usize>(
    values: &[f64],
    vectors: &na::OMatrix<Complex64, D, D>,
) -> ([f64; N], na::OMatrix<Complex64, D, D>)
where
    D: na::Dim,
    na::DefaultAllocator: na::allocator::Allocator<D, D>,
{
    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut sorted = [0.0; N];
    let mut out = vectors.clone();
    for (k, &i) in order.iter().enumerate() {
        sorted[k] = values[i];
        out.set_column(k, &vectors.column(i));
    }
    (sorted, out)
}

/// `exp(−i·H·t)` for Hermitian `H` via its spectral decomposition.
pub fn hermitian_propagator4(values: &[f64; 4], vectors: &ComplexMatrix4, t: f64) -> ComplexMatrix4 {
    let phases = ComplexMatrix4::from_diagonal(&na::Vector4::from_fn(|k, _| {
        Complex64::from_polar(1.0, -values[k] * t)
    }));
    vectors * phases * vectors.adjoint()
}

/// Principal square root of a Hermitian positive semidefinite 2×2 matrix.
pub fn hermitian_sqrt2(m: &ComplexMatrix2) -> ComplexMatrix2 {
    let (values, vectors) = hermitian_eigh2(m);
    let roots = ComplexMatrix2::from_diagonal(&na::Vector2::new(
        c(values[0].max(0.0).sqrt(), 0.0),
        c(values[1].max(0.0).sqrt(), 0.0),
    ));
    hermitian_part(&(vectors * roots * vectors.adjoint()))
}

pub fn to_block4(
    a: &ComplexMatrix2,
    b: &ComplexMatrix2,
    c: &ComplexMatrix2,
    d: &ComplexMatrix2,
) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    out.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    out.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    out
}

/// `(θ + π) mod 2π − π`, mapped into `(−π, π]`.
pub fn reduce_angle(theta: f64) -> f64 {
    use std::f64::consts::PI;
    if theta > -PI && theta <= PI {
        return theta;
    }
    let r = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        PI
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hermitian_eigenvalues_match_solver() {
        let m = mat2(c(2.0, 0.0), c(0.3, -1.1), c(0.3, 1.1), c(-0.5, 0.0));
        let (lo, hi) = hermitian_eigenvalues2(&m);
        let (vals, vecs) = hermitian_eigh2(&m);
        assert!((lo - vals[0]).abs() < 1e-12);
        assert!((hi - vals[1]).abs() < 1e-12);
        let resid = m * vecs.column(0) - vecs.column(0) * c(vals[0], 0.0);
        assert!(max_abs(&resid) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = mat2(c(3.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(2.0, 0.0));
        let r = hermitian_sqrt2(&m);
        assert!(max_abs(&(r * r - m)) < 1e-12);
    }

    #[test]
    fn angle_reduction() {
        assert_eq!(reduce_angle(PI), PI);
        assert_eq!(reduce_angle(0.3), 0.3);
        assert!((reduce_angle(-PI) - PI).abs() < 1e-15);
        assert!((reduce_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((reduce_angle(2.0 * PI + 0.25) - 0.25).abs() < 1e-12);
        assert!((reduce_angle(-2.0 * PI - 0.25) + 0.25).abs() < 1e-12);
    }

    #[test]
    fn propagator_is_unitary() {
        let h = to_block4(&sigma_x(), &sigma_y(), &sigma_y(), &sigma_z());
        let (vals, vecs) = hermitian_eigh4(&h);
        let u = hermitian_propagator4(&vals, &vecs, 2.7);
        assert!(max_abs(&(u * u.adjoint() - ComplexMatrix4::identity())) < 1e-12);
    }
}
