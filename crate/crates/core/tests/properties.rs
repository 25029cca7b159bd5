use nalgebra as na;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

use pt_eta::canonical::{reconstruct_metric, solve_canonical_d, two_angle_frame};
use pt_eta::dilation::{assemble_with_free_block, dilate, evolve_and_compare, tau_from_metric};
use pt_eta::linalg::{c, max_abs, ComplexMatrix2, ComplexVector2};
use pt_eta::measures::{delta1, delta2, delta2_lower_bound, l1_norm, minimal_d22_ratio};
use pt_eta::metric::{
    family_metric, intertwining_residual, solve_intertwining_space, Definiteness, DEFAULT_RANK_TOL,
};
use pt_eta::model::{build_hamiltonian, check_pt_symmetry, psi_minus, psi_plus};
use pt_eta::{HermitianMetric, MetricFamilyParams, PtParams};

/// Eigenvalues of a general complex 2×2 via nalgebra's Schur form.
fn schur_eigenvalues(m: &ComplexMatrix2) -> Vec<na::Complex<f64>> {
    let mut v: Vec<_> = na::Schur::new(*m).eigenvalues().unwrap().iter().copied().collect();
    v.sort_by(|a, b| b.re.total_cmp(&a.re));
    v
}

/// Sorted spectrum of a Hermitian matrix via nalgebra's symmetric solver.
fn sym_eigenvalues(m: &ComplexMatrix2) -> (f64, f64) {
    let e = na::SymmetricEigen::new(*m).eigenvalues;
    (e[0].min(e[1]), e[0].max(e[1]))
}

fn angle() -> impl Strategy<Value = f64> {
    -PI..PI
}

fn unbroken_angle() -> impl Strategy<Value = f64> {
    angle().prop_filter("away from the EP", |t| t.cos().abs() > 1e-6)
}

fn random_matrix() -> impl Strategy<Value = ComplexMatrix2> {
    prop::array::uniform8(-5.0..5.0f64).prop_map(|x| {
        ComplexMatrix2::new(c(x[0], x[1]), c(x[2], x[3]), c(x[4], x[5]), c(x[6], x[7]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hamiltonian_is_pt_symmetric(e0 in -5.0..5.0f64, s in 0.1..5.0f64, th in angle()) {
        prop_assert!(check_pt_symmetry(&build_hamiltonian(&PtParams::new(e0, s, th).unwrap())));
    }

    #[test]
    fn closed_form_eigenvalues_match_schur(e0 in -5.0..5.0f64, s in 0.1..5.0f64, th in unbroken_angle()) {
        let p = PtParams::new(e0, s, th).unwrap();
        let h = build_hamiltonian(&p);
        let (lp, lm) = p.eigenvalues();
        let mut want = [lp, lm];
        want.sort_by(|a, b| b.total_cmp(a));
        let got = schur_eigenvalues(&h);
        for (g, w) in got.iter().zip(want) {
            prop_assert!((g.re - w).abs() <= 1e-10 * (1.0 + e0.abs() + s), "{g} vs {w}");
            prop_assert!(g.im.abs() <= 1e-10 * (1.0 + s));
        }
        prop_assert!((h.trace() - c(2.0 * e0, 0.0)).norm() <= 1e-12 * (1.0 + e0.abs()));
        prop_assert!((h.determinant() - c(lp * lm, 0.0)).norm() <= 1e-10 * (1.0 + e0 * e0 + s * s));
    }

    #[test]
    fn eigenvector_overlap_is_sine(th in angle()) {
        let overlap = psi_plus(th).dotc(&psi_minus(th)).norm();
        prop_assert!((overlap - th.sin().abs()).abs() < 1e-14);
    }

    #[test]
    fn family_metric_is_exact_solution(th in angle(), eta11 in -3.0..3.0f64, a in -2.0..2.0f64, s in 0.1..4.0f64) {
        prop_assume!(eta11.abs() > 1e-3);
        let h = build_hamiltonian(&PtParams::new(0.0, s, th).unwrap());
        let fam = MetricFamilyParams::new(eta11, a).unwrap();
        let eta = family_metric(th, &fam);
        prop_assert!(intertwining_residual(&h, eta.matrix()) <= 1e-12 * s.max(1.0) * (1.0 + eta11.abs() * (1.0 + a.abs())));
        let space = solve_intertwining_space(&h, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(space.dimension(), 2);
        prop_assert!(space.projection_residual(eta.matrix()) <= 1e-10 * (1.0 + eta.matrix().norm()));
    }

    #[test]
    fn family_spectrum_matches_symmetric_solver(th in angle(), eta11 in -3.0..3.0f64, a in -2.0..2.0f64) {
        prop_assume!(eta11.abs() > 1e-3);
        let fam = MetricFamilyParams::new(eta11, a).unwrap();
        let eta = family_metric(th, &fam);
        let (lo, hi) = sym_eigenvalues(eta.matrix());
        prop_assert!((lo - eta.eig_min()).abs() < 1e-12 * (1.0 + hi.abs()));
        prop_assert!((hi - eta.eig_max()).abs() < 1e-12 * (1.0 + hi.abs()));
        // criterion: positive iff η₁₁ > 0 and a² + sin²θ < 1, away from the boundary
        let margin = (1.0 - a * a - th.sin().powi(2)).abs();
        prop_assume!(margin > 1e-6);
        let pd = eta11 > 0.0 && a * a + th.sin().powi(2) < 1.0;
        prop_assert_eq!(eta.definiteness() == Definiteness::PositiveDefinite, pd);
        prop_assert_eq!(lo > 0.0, pd);
    }

    #[test]
    fn ep_family_is_indefinite(sign in prop::bool::ANY, eta11 in -3.0..3.0f64, a in -3.0..3.0f64) {
        prop_assume!(eta11.abs() > 1e-3 && a.abs() > 1e-3);
        let th = if sign { FRAC_PI_2 } else { -FRAC_PI_2 };
        let eta = family_metric(th, &MetricFamilyParams::new(eta11, a).unwrap());
        prop_assert_eq!(eta.definiteness(), Definiteness::Indefinite);
    }

    #[test]
    fn delta1_bounds_hold(th in unbroken_angle(), eta11 in 0.05..5.0f64, u in -0.999..0.999f64,
                          ep11 in -5.0..5.0f64, ep_a in -5.0..5.0f64) {
        prop_assume!(ep11.abs() > 1e-3 && ep_a.abs() > 1e-3);
        // a² + sin²θ < 1 via a = u·|cos θ|
        let a = u * th.cos().abs();
        let unbroken = MetricFamilyParams::new(eta11, a).unwrap();
        prop_assume!(family_metric(th, &unbroken).is_positive_definite());
        let r = delta1(th, &unbroken, &MetricFamilyParams::new(ep11, ep_a).unwrap()).unwrap();
        prop_assert!(r.delta1_exact >= r.delta1_lower_bound - 1e-9);
        prop_assert!(r.product >= 4.0 - 1e-9);
        prop_assert!(r.product_bound >= 4.0 - 1e-9);
        // the true-spectrum product only guarantees half of that
        prop_assert!(r.product_spectral >= 2.0 - 1e-9);
    }

    #[test]
    fn delta2_bounds_hold(th in unbroken_angle(), tp in angle(), d11 in 0.01..5.0f64, extra in 0.0..5.0f64) {
        let sin = (0.5 * (th - tp)).sin();
        prop_assume!(sin.abs() > 1e-6 && (0.5 * (th + tp)).cos().abs() > 1e-6);
        let frame = two_angle_frame(&PtParams::new(0.0, 1.0, th).unwrap(), tp).unwrap();
        let t = minimal_d22_ratio(th, tp) * (1.0 + 1e-9) + extra;
        let d = solve_canonical_d(&frame, d11, t * d11).unwrap();
        prop_assert!(d.is_positive_definite());
        let r = delta2(&d, 0.0).unwrap();
        prop_assert!(r.delta2 >= 2.0 - 1e-9);
        prop_assert!(r.delta2 >= delta2_lower_bound(th, tp).unwrap() - 1e-9 * r.delta2.max(1.0));
    }

    #[test]
    fn positive_d_iff_positive_eta(th in unbroken_angle(), tp in angle(), d11 in -3.0..3.0f64, d22 in -3.0..3.0f64) {
        prop_assume!((0.5 * (th + tp)).cos().abs() > 1e-2 && d11.abs() > 1e-3);
        let frame = two_angle_frame(&PtParams::new(0.0, 1.0, th).unwrap(), tp).unwrap();
        let d = solve_canonical_d(&frame, d11, d22).unwrap();
        let gap = d.d11 * d.d22 - d.d12.norm_sqr();
        prop_assume!(gap.abs() > 1e-6 * (1.0 + d.d12.norm_sqr()));
        let eta = reconstruct_metric(&frame, &d);
        let h = build_hamiltonian(frame.params());
        prop_assert!(intertwining_residual(&h, eta.matrix()) <= 1e-10 * (1.0 + max_abs(eta.matrix())));
        let (lo, _) = sym_eigenvalues(eta.matrix());
        prop_assert_eq!(d.is_positive_definite(), lo > 0.0);
    }

    #[test]
    fn l1_is_a_norm(x in random_matrix(), y in random_matrix(), k in -4.0..4.0f64) {
        prop_assert!(l1_norm(&(x + y)) <= l1_norm(&x) + l1_norm(&y) + 1e-12);
        prop_assert!((l1_norm(&(x * c(k, 0.0))) - k.abs() * l1_norm(&x)).abs() < 1e-10);
    }

    #[test]
    fn h4_hermitian_iff_metric(th in unbroken_angle(), h1 in random_matrix(), perturb in prop::bool::ANY) {
        prop_assume!(th.cos().abs() > 0.05);
        let h = build_hamiltonian(&PtParams::new(0.2, 1.0, th).unwrap());
        let h1 = (h1 + h1.adjoint()) * c(0.5, 0.0);
        let good = family_metric(th, &MetricFamilyParams::new(1.0, 0.0).unwrap());
        let eta = if perturb {
            let bump = ComplexMatrix2::new(c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
            HermitianMetric::from_matrix(good.matrix() + bump).unwrap()
        } else {
            good
        };
        prop_assume!(eta.is_positive_definite());
        let (scaled, tau) = tau_from_metric(&eta, 1.0).unwrap();
        let b = assemble_with_free_block(&h, &scaled, &tau, &h1).unwrap();
        let herm = max_abs(&(b.h4 - b.h4.adjoint())) <= 1e-10;
        let metric = intertwining_residual(&h, scaled.matrix()) <= 1e-10;
        prop_assert_eq!(herm, metric);
        prop_assert_eq!(metric, !perturb);
    }
}

#[test]
fn subsystem_trace_is_margin_invariant() {
    let th = 0.8;
    let h = build_hamiltonian(&PtParams::new(0.0, 1.0, th).unwrap());
    let eta = family_metric(th, &MetricFamilyParams::new(1.0, 0.1).unwrap());
    let psi0 = ComplexVector2::new(c(0.6, 0.0), c(0.0, 0.8));
    let traces: Vec<_> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&m| evolve_and_compare(&dilate(&h, &eta, m).unwrap(), &psi0, 10.0, 400).unwrap())
        .collect();
    for tr in &traces {
        assert!(tr.deviation <= 1e-8);
    }
    for k in 0..400 {
        let base = traces[0].first_block(k);
        for tr in &traces[1..] {
            assert!((tr.first_block(k) - base).norm() <= 1e-10);
        }
    }
}

#[test]
fn propagator_is_unitary() {
    let h = build_hamiltonian(&PtParams::new(0.3, 2.0, 1.1).unwrap());
    let eta = family_metric(1.1, &MetricFamilyParams::new(1.0, 0.2).unwrap());
    let b = dilate(&h, &eta, 1.0).unwrap();
    for t in [0.1, 1.0, 10.0] {
        let u = b.propagator(t / 2.0);
        assert!(max_abs(&(u * u.adjoint() - pt_eta::ComplexMatrix4::identity())) <= 1e-10);
    }
}
