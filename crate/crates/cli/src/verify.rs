//! `verify`: seeded property suites over every invariant, reported as JSON.
//!
//! Each invariant is a [`Tracker`] that records a margin per case
//! (non-negative means the case passed) and keeps the inputs of the worst
//! case. Suites draw from their own stream so adding one does not perturb
//! the others.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use pt_eta::canonical::{ep_equivalence_check, equivalence_check, solve_canonical_d, two_angle_frame};
use pt_eta::dilation::{dilate, evolve_and_compare, min_transition_probability, tau_from_metric};
use pt_eta::linalg::{c, max_abs, sigma_x};
use pt_eta::measures::{
    delta1, delta2, delta2_lower_bound, dilation_efficiency, efficiency_relation, l1_norm,
    INEQUALITY_SLACK,
};
use pt_eta::metric::{
    family_matrix, family_metric, intertwining_residual, solve_intertwining_space, DEFAULT_RANK_TOL,
};
use pt_eta::model::{build_hamiltonian, classify_phase, DEFAULT_EP_TOL};
use pt_eta::{
    ComplexMatrix4, ComplexVector2, Definiteness, MetricFamilyParams, Phase, PtParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0;

const GRID_POINTS: usize = 721;
const INTERTWINING_TOL: f64 = 1e-12;
const EQUIVALENCE_TOL: f64 = 1e-10;
const DILATION_TOL: f64 = 1e-10;
const DEVIATION_TOL: f64 = 1e-8;
const TRANSITION_TOL: f64 = 1e-10;
const EQUALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    /// Absolute slack on the inequality suites. Only tests change it.
    pub slack: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, trials: DEFAULT_TRIALS, slack: INEQUALITY_SLACK }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Smallest margin seen; negative on failure.
    pub worst_margin: f64,
    /// The checked quantity in the worst case.
    pub worst_value: f64,
    /// Inputs of the worst case when the invariant failed.
    pub offending: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub slack: f64,
    pub passed: bool,
    pub invariants: Vec<InvariantResult>,
}

impl VerifyReport {
    pub fn get(&self, name: &str) -> Option<&InvariantResult> {
        self.invariants.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantResult> {
        self.invariants.iter().filter(|r| !r.passed)
    }
}

pub struct Tracker {
    name: &'static str,
    cases: usize,
    worst_margin: f64,
    worst_value: f64,
    worst_inputs: Option<Value>,
}

impl Tracker {
    pub fn new(name: &'static str) -> Self {
        Self { name, cases: 0, worst_margin: f64::INFINITY, worst_value: f64::NAN, worst_inputs: None }
    }

    /// Records `value ≥ bound`.
    pub fn at_least(&mut self, value: f64, bound: f64, inputs: impl FnOnce() -> Value) {
        self.record(value - bound, value, inputs);
    }

    /// Records `value ≤ bound`.
    pub fn at_most(&mut self, value: f64, bound: f64, inputs: impl FnOnce() -> Value) {
        self.record(bound - value, value, inputs);
    }

    /// Records a yes/no property with margin ±1.
    pub fn holds(&mut self, ok: bool, inputs: impl FnOnce() -> Value) {
        self.record(if ok { 1.0 } else { -1.0 }, if ok { 1.0 } else { 0.0 }, inputs);
    }

    /// An unexpected error is a failed case.
    pub fn error(&mut self, err: impl std::fmt::Display, inputs: impl FnOnce() -> Value) {
        let message = err.to_string();
        self.record(f64::NEG_INFINITY, f64::NAN, || json!({ "inputs": inputs(), "error": message }));
    }

    fn record(&mut self, margin: f64, value: f64, inputs: impl FnOnce() -> Value) {
        self.cases += 1;
        // NaN margins are failures too.
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if margin < self.worst_margin || self.worst_inputs.is_none() {
            self.worst_margin = margin;
            self.worst_value = value;
            self.worst_inputs = Some(inputs());
        }
    }

    pub fn finish(self) -> InvariantResult {
        let passed = self.cases > 0 && self.worst_margin >= 0.0;
        InvariantResult {
            name: self.name.to_string(),
            passed,
            cases: self.cases,
            worst_margin: self.worst_margin,
            worst_value: self.worst_value,
            offending: if passed { None } else { self.worst_inputs },
        }
    }
}

fn stream(seed: u64, suite: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite);
    rng
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

/// Angle with `|cos θ|` (and optionally `|sin θ|`) at least `floor`.
fn unbroken_angle(rng: &mut ChaCha8Rng, floor: f64, sin_floor: f64) -> f64 {
    loop {
        let t = angle(rng);
        if t.cos().abs() >= floor && t.sin().abs() >= sin_floor {
            return t;
        }
    }
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let x = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        x
    } else {
        -x
    }
}

/// `a` with `a² + sin²θ < 1` by a relative margin.
fn admissible_a(rng: &mut ChaCha8Rng, theta: f64) -> f64 {
    theta.cos().abs() * rng.gen_range(-0.999..0.999)
}

fn random_params(rng: &mut ChaCha8Rng) -> PtParams {
    let e0 = rng.gen_range(-5.0..5.0);
    let s = signed(rng, 0.1, 5.0);
    PtParams::new(e0, s, angle(rng)).expect("finite non-zero parameters")
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::Invalid("trials must be at least 1".into()));
    }
    if !cfg.slack.is_finite() {
        return Err(CliError::Invalid("slack must be finite".into()));
    }
    let (seed, n, slack) = (cfg.seed, cfg.trials, cfg.slack);
    let mut invariants = Vec::new();
    invariants.extend(model_suite(seed, n));
    invariants.extend(metric_suite(seed, n));
    invariants.extend(ed1_suite(seed, n, slack));
    invariants.extend(delta2_suite(seed, n, slack));
    invariants.extend(equivalence_suite(seed, n));
    invariants.extend(dilation_suite(seed, n));
    let passed = invariants.iter().all(|r| r.passed);
    Ok(VerifyReport { seed, trials: n, slack, passed, invariants })
}

fn model_suite(seed: u64, n: usize) -> Vec<InvariantResult> {
    let mut rng = stream(seed, 1);
    let mut pt = Tracker::new("pt_symmetry");
    let mut eigen = Tracker::new("eigenvalues_closed_form");
    let mut phase = Tracker::new("phase_classification");
    for _ in 0..n {
        let p = random_params(&mut rng);
        let inputs = || json!({ "e0": p.e0(), "s": p.s(), "theta": p.theta() });
        let h = build_hamiltonian(&p);
        let scale = p.e0().abs() + p.s().abs();
        let residual = max_abs(&(h * sigma_x() - sigma_x() * h.map(|z| z.conj())));
        pt.at_most(residual, 1e-12 * scale.max(1.0), inputs);

        // Characteristic-polynomial roots as the independent oracle.
        let tr = h.trace();
        let det = h.determinant();
        let disc = (tr * tr * 0.25 - det).sqrt();
        let mut roots = [tr * 0.5 + disc, tr * 0.5 - disc];
        roots.sort_by(|x, y| y.re.total_cmp(&x.re));
        let (lp, lm) = p.eigenvalues();
        let (hi, lo) = (lp.max(lm), lp.min(lm));
        let err = (roots[0] - c(hi, 0.0)).norm().max((roots[1] - c(lo, 0.0)).norm());
        // Near the EP the square root amplifies rounding to ~√ε.
        eigen.at_most(err, 1e-7 * scale.max(1.0), inputs);

        match classify_phase(&p, DEFAULT_EP_TOL) {
            Ok(pc) => phase.holds(
                (pc.phase == Phase::ExceptionalPoint) == (p.theta().cos().abs() <= DEFAULT_EP_TOL),
                inputs,
            ),
            Err(e) => phase.error(e, inputs),
        }
    }
    vec![pt.finish(), eigen.finish(), phase.finish()]
}

fn metric_suite(seed: u64, n: usize) -> Vec<InvariantResult> {
    let mut rng = stream(seed, 2);

    let mut grid = Tracker::new("intertwining_grid_residual");
    let mut dim = Tracker::new("intertwining_space_dimension");
    for k in 0..GRID_POINTS {
        let theta = -PI + 2.0 * PI * k as f64 / (GRID_POINTS - 1) as f64;
        let eta11 = signed(&mut rng, 0.1, 2.0);
        let a = rng.gen_range(-2.0..2.0);
        let inputs = || json!({ "theta": theta, "eta11": eta11, "a": a });
        let p = PtParams::new(0.0, 1.0, theta).expect("valid");
        let h = build_hamiltonian(&p);
        let fam = MetricFamilyParams::new(eta11, a).expect("valid");
        grid.at_most(intertwining_residual(&h, &family_matrix(theta, &fam)), INTERTWINING_TOL, inputs);
        match solve_intertwining_space(&h, DEFAULT_RANK_TOL) {
            Ok(space) => dim.holds(space.dimension() == 2, inputs),
            Err(e) => dim.error(e, inputs),
        }
    }

    let mut criterion = Tracker::new("family_definiteness_criterion");
    let mut ep_indef = Tracker::new("ep_metrics_indefinite");
    let mut discontinuity = Tracker::new("discontinuity_sign_gap");
    for _ in 0..n {
        let theta = angle(&mut rng);
        let eta11 = signed(&mut rng, 0.1, 10.0);
        let a = rng.gen_range(-1.5..1.5);
        let fam = MetricFamilyParams::new(eta11, a).expect("valid");
        let gap = a * a + theta.sin().powi(2) - 1.0;
        if gap.abs() > 1e-6 {
            let eta = family_metric(theta, &fam);
            let expected = eta11 > 0.0 && gap < 0.0;
            criterion.holds(eta.is_positive_definite() == expected, || {
                json!({ "theta": theta, "eta11": eta11, "a": a })
            });
        }

        let side = if rng.gen_bool(0.5) { FRAC_PI_2 } else { -FRAC_PI_2 };
        let ep_a = signed(&mut rng, 1e-3, 5.0);
        let ep = MetricFamilyParams::new(eta11, ep_a).expect("valid");
        let eta = family_metric(side, &ep);
        ep_indef.at_least(
            (-eta.eig_min()).min(eta.eig_max()),
            0.0,
            || json!({ "theta": side, "eta11": eta11, "a": ep_a, "definiteness": eta.definiteness().as_str() }),
        );
        if eta.definiteness() != Definiteness::Indefinite {
            ep_indef.holds(false, || json!({ "theta": side, "eta11": eta11, "a": ep_a }));
        }
    }

    // a = 0 is the only family choice that stays positive definite all the
    // way to θ → π/2.
    for _ in 0..n.min(1000) {
        let eta11 = rng.gen_range(0.1..10.0);
        let fam = MetricFamilyParams::new(eta11, 0.0).expect("valid");
        for k in 1..=6 {
            let theta = FRAC_PI_2 - 10f64.powi(-k);
            let (_, lambda_minus) = fam.spectral_eigenvalues(theta);
            discontinuity.at_least(lambda_minus, f64::MIN_POSITIVE, || {
                json!({ "theta": theta, "eta11": eta11, "a": 0.0 })
            });
        }
        let ep_a = signed(&mut rng, 1e-3, 5.0);
        let eta = family_metric(FRAC_PI_2, &MetricFamilyParams::new(eta11, ep_a).expect("valid"));
        discontinuity.at_least(-eta.eig_min(), f64::MIN_POSITIVE, || {
            json!({ "theta": FRAC_PI_2, "eta11": eta11, "a": ep_a })
        });
    }
    vec![grid.finish(), dim.finish(), criterion.finish(), ep_indef.finish(), discontinuity.finish()]
}

fn ed1_suite(seed: u64, n: usize, slack: f64) -> Vec<InvariantResult> {
    let mut rng = stream(seed, 3);
    let mut product = Tracker::new("product_ed1");
    let mut bound = Tracker::new("delta1_lower_bound");
    let mut spectral = Tracker::new("product_ed1_spectral");
    let mut efficiency = Tracker::new("efficiency_ed2");
    let mut witness = Tracker::new("product_ed1_equality_witness");
    let mut norm = Tracker::new("l1_norm_axioms");

    for _ in 0..n {
        let theta = unbroken_angle(&mut rng, 1e-3, 0.0);
        let eta11 = rng.gen_range(0.1..10.0);
        // A quarter of the draws sit near the equality edge: a = 0, θ > 0,
        // and an EP metric sharing η₁₁ with a small a'.
        let (a, ep_eta11, ep_a) = if rng.gen_bool(0.25) {
            (0.0, eta11, signed(&mut rng, 1e-6, 1e-2))
        } else {
            (admissible_a(&mut rng, theta), signed(&mut rng, 0.1, 10.0), signed(&mut rng, 1e-3, 5.0))
        };
        let inputs =
            || json!({ "theta": theta, "eta11": eta11, "a": a, "ep_eta11": ep_eta11, "ep_a": ep_a });
        let fam = MetricFamilyParams::new(eta11, a).expect("valid");
        let ep = MetricFamilyParams::new(ep_eta11, ep_a).expect("valid");
        match delta1(theta, &fam, &ep) {
            Ok(r) => {
                product.at_least(r.product, 4.0 - slack, inputs);
                bound.at_least(r.delta1_exact, r.delta1_lower_bound - slack, inputs);
                spectral.at_least(r.product_spectral, 2.0 - slack, inputs);
            }
            // Rounding can push a boundary draw out of the positive cone.
            Err(pt_eta::Error::NotPositive { .. }) => {}
            Err(e) => product.error(e, inputs),
        }

        // λ₋ > 1 (halved convention): scale η₁₁ so that λ₋ lands in (1, 10].
        let r = fam.radius(theta);
        let big = MetricFamilyParams::new(2.0 / (1.0 - r) * rng.gen_range(1.0001..10.0), a).expect("valid");
        match efficiency_relation(theta, &big, &ep) {
            Ok(rep) => efficiency.at_least(rep.ratio, 4.0 - slack, || {
                json!({ "theta": theta, "eta11": big.eta11(), "a": a, "ep_eta11": ep_eta11, "ep_a": ep_a })
            }),
            Err(pt_eta::Error::ConditionNotMet { .. } | pt_eta::Error::NotPositive { .. }) => {}
            Err(e) => efficiency.error(e, inputs),
        }

        let m1 = family_matrix(theta, &fam);
        let m2 = family_matrix(FRAC_PI_2, &ep);
        let k = rng.gen_range(-3.0..3.0);
        let tri = l1_norm(&(m1 + m2)) - l1_norm(&m1) - l1_norm(&m2);
        let hom = (l1_norm(&m1.scale(k)) - k.abs() * l1_norm(&m1)).abs();
        norm.holds(tri <= 1e-12 * (l1_norm(&m1) + l1_norm(&m2)) && hom <= 1e-12 * l1_norm(&m1).max(1.0), inputs);
    }

    // θ = 0, a = 0: the bound side of the product is exactly 4.
    for eta11 in [0.5, 1.0, 2.0, 7.0] {
        let fam = MetricFamilyParams::new(eta11, 0.0).expect("valid");
        let ep = MetricFamilyParams::new(eta11, 1.0).expect("valid");
        match delta1(0.0, &fam, &ep) {
            Ok(r) => witness.at_most((r.product_bound - 4.0).abs(), EQUALITY_TOL, || json!({ "eta11": eta11 })),
            Err(e) => witness.error(e, || json!({ "eta11": eta11 })),
        }
    }
    vec![
        product.finish(),
        bound.finish(),
        spectral.finish(),
        witness.finish(),
        efficiency.finish(),
        norm.finish(),
    ]
}

fn delta2_suite(seed: u64, n: usize, slack: f64) -> Vec<InvariantResult> {
    let mut rng = stream(seed, 4);
    let mut lower = Tracker::new("delta2_at_least_two");
    let mut analytic = Tracker::new("delta2_analytic_bound");
    let mut pd = Tracker::new("canonical_d_positive_definite");
    let mut equality = Tracker::new("delta2_equality_witness");

    let mut done = 0;
    while done < n {
        let theta = unbroken_angle(&mut rng, 0.05, 0.0);
        // A quarter of the draws sit near AM-GM equality.
        let near_edge = rng.gen_bool(0.25);
        let theta_prime = if near_edge {
            theta - 2.0 * (theta.cos() * rng.gen_range(0.99..1.0)).asin()
        } else {
            angle(&mut rng)
        };
        let half = (0.5 * (theta - theta_prime)).sin();
        if half.abs() < 0.05 || (0.5 * (theta + theta_prime)).cos().abs() < 0.05 {
            continue;
        }
        done += 1;
        let d11 = rng.gen_range(0.1..10.0);
        let t_min = (half / theta.cos()).powi(2);
        let stretch = if near_edge { rng.gen_range(1.0 + 1e-9..1.0 + 1e-4) } else { rng.gen_range(1.0001..10.0) };
        let t = t_min * stretch;
        let inputs = || json!({ "theta": theta, "theta_prime": theta_prime, "d11": d11, "d22": t * d11 });
        let p = PtParams::new(0.0, 1.0, theta).expect("valid");
        let d = match two_angle_frame(&p, theta_prime).and_then(|f| solve_canonical_d(&f, d11, t * d11)) {
            Ok(d) => d,
            Err(e) => {
                lower.error(e, inputs);
                continue;
            }
        };
        pd.holds(d.is_positive_definite(), inputs);
        match (delta2(&d, 0.0), delta2_lower_bound(theta, theta_prime)) {
            (Ok(r), Ok(b)) => {
                lower.at_least(r.delta2, 2.0 - slack, inputs);
                analytic.at_least(r.delta2, b - slack, inputs);
            }
            (Err(e), _) | (_, Err(e)) => lower.error(e, inputs),
        }
    }

    // AM-GM equality: |cos θ| = |sin((θ−θ')/2)| and d₂₂ at its minimum.
    let p = PtParams::new(0.0, 1.0, FRAC_PI_3).expect("valid");
    let inputs = || json!({ "theta": FRAC_PI_3, "theta_prime": 0.0, "d11": 1.0, "d22": 1.0 });
    match two_angle_frame(&p, 0.0).and_then(|f| solve_canonical_d(&f, 1.0, 1.0)).and_then(|d| delta2(&d, 0.0)) {
        Ok(r) => equality.at_most((r.delta2 - 2.0).abs(), EQUALITY_TOL, inputs),
        Err(e) => equality.error(e, inputs),
    }
    vec![lower.finish(), analytic.finish(), pd.finish(), equality.finish()]
}

fn equivalence_suite(seed: u64, n: usize) -> Vec<InvariantResult> {
    let mut rng = stream(seed, 5);
    let mut pattern = Tracker::new("equivalence_pattern_residual");
    let mut inter = Tracker::new("equivalence_intertwining");
    let mut display = Tracker::new("equivalence_ep_display");
    for _ in 0..n {
        let theta = unbroken_angle(&mut rng, 0.1, 0.1);
        let d11 = rng.gen_range(-5.0..5.0);
        let d22 = rng.gen_range(-5.0..5.0);
        let inputs = || json!({ "theta": theta, "d11": d11, "d22": d22 });
        let p = PtParams::new(0.0, 1.0, theta).expect("valid");
        match equivalence_check(&p, d11, d22) {
            Ok(r) => {
                pattern.at_most(r.residual, EQUIVALENCE_TOL, inputs);
                let scale = max_abs(&r.eta).max(1.0);
                inter.at_most(r.intertwining_residual, EQUIVALENCE_TOL * scale, inputs);
            }
            Err(e) => pattern.error(e, inputs),
        }
    }
    let p = PtParams::new(0.0, 1.0, FRAC_PI_2).expect("valid");
    for _ in 0..n.min(1000) {
        let d12 = signed(&mut rng, 0.1, 5.0);
        let d22 = rng.gen_range(-5.0..5.0);
        let inputs = || json!({ "theta": FRAC_PI_2, "d12_imag": d12, "d22": d22 });
        match ep_equivalence_check(&p, d12, d22) {
            Ok(r) => display.at_most(r.display_residual.unwrap_or(f64::INFINITY), EQUIVALENCE_TOL, inputs),
            Err(e) => display.error(e, inputs),
        }
    }
    vec![pattern.finish(), inter.finish(), display.finish()]
}

fn unitarity_residual(u: &ComplexMatrix4) -> f64 {
    max_abs(&(u.adjoint() * u - ComplexMatrix4::identity()))
}

fn dilation_suite(seed: u64, n: usize) -> Vec<InvariantResult> {
    let mut rng = stream(seed, 6);
    let mut hermitian = Tracker::new("dilation_hamiltonian_hermitian");
    let mut unitary = Tracker::new("dilation_propagator_unitary");
    let mut fidelity = Tracker::new("dilation_subsystem_deviation");
    let mut second = Tracker::new("dilation_second_block_deviation");
    let mut transition = Tracker::new("transition_minimum_is_inverse_lambda_max");
    let mut top = Tracker::new("transition_minimum_at_top_eigenvector");
    let mut efficiency = Tracker::new("dilation_efficiency_in_unit_interval");

    let grid = 73;
    for k in 0..grid {
        let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / grid as f64;
        if (theta.abs() - FRAC_PI_2).abs() < 0.05 {
            continue;
        }
        for s in [1.0, -2.5] {
            let e0 = rng.gen_range(-1.0..1.0);
            let a = admissible_a(&mut rng, theta);
            let eta11 = rng.gen_range(0.5..3.0);
            let margin = rng.gen_range(0.25..2.0);
            let inputs = || json!({ "theta": theta, "e0": e0, "s": s, "a": a, "eta11": eta11, "margin": margin });
            let p = PtParams::new(e0, s, theta).expect("valid");
            let h = build_hamiltonian(&p);
            let eta = family_metric(theta, &MetricFamilyParams::new(eta11, a).expect("valid"));
            let bundle = match dilate(&h, &eta, margin) {
                Ok(b) => b,
                Err(e) => {
                    hermitian.error(e, inputs);
                    continue;
                }
            };
            hermitian.at_most(bundle.hermiticity_residual(), DILATION_TOL, inputs);
            let t_max = 10.0 / s.abs();
            for t in [0.5 * t_max, t_max] {
                unitary.at_most(unitarity_residual(&bundle.propagator(t)), DILATION_TOL, inputs);
            }
            let psi0 = ComplexVector2::new(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            match evolve_and_compare(&bundle, &psi0, t_max, 101) {
                Ok(trace) => {
                    fidelity.at_most(trace.deviation, DEVIATION_TOL, inputs);
                    second.at_most(trace.second_block_deviation, DEVIATION_TOL, inputs);
                }
                Err(e) => fidelity.error(e, inputs),
            }
        }
    }

    for _ in 0..n.min(200) {
        let theta = unbroken_angle(&mut rng, 0.05, 0.0);
        let a = admissible_a(&mut rng, theta);
        let eta11 = rng.gen_range(0.1..10.0);
        let inputs = || json!({ "theta": theta, "a": a, "eta11": eta11 });
        let eta = family_metric(theta, &MetricFamilyParams::new(eta11, a).expect("valid"));
        let sample_seed = rng.gen();
        match min_transition_probability(&eta, 1000, sample_seed) {
            Ok(m) => {
                transition.at_most((m.probability - 1.0 / eta.eig_max()).abs(), TRANSITION_TOL, inputs);
                top.holds(m.attained_by_top_eigenvector, inputs);
            }
            Err(e) => transition.error(e, inputs),
        }
        match tau_from_metric(&eta, 1.0).and_then(|(scaled, _)| dilation_efficiency(&scaled)) {
            Ok(e_d) => efficiency.holds(e_d > 0.0 && e_d <= 1.0, inputs),
            Err(e) => efficiency.error(e, inputs),
        }
    }
    vec![
        hermitian.finish(),
        unitary.finish(),
        fidelity.finish(),
        second.finish(),
        transition.finish(),
        top.finish(),
        efficiency.finish(),
    ]
}
