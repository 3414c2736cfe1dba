use std::f64::consts::PI;

use planepair_core::integrate::{
    polar_line_integrals, LineParams, OracleParams, PolarParams, WorkbenchParams,
};
use planepair_core::math::{normalize, rotation};
use planepair_core::{BodySpec, ConvexBody3, EvenKernel, IdentityId, Sequential, Workbench};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ellipsoid() -> ConvexBody3 {
    ConvexBody3::new(BodySpec::Ellipsoid {
        a: 1.0,
        b: 1.0,
        c: 1.5,
    })
    .unwrap()
}

fn small() -> WorkbenchParams {
    WorkbenchParams {
        n_colat: 32,
        n_long: 64,
        n_max: 16,
        oracle: OracleParams {
            n_colat: 16,
            n_long: 32,
            n_t: 32,
            n_alpha: 64,
        },
        lines: LineParams {
            n_colat: 16,
            n_long: 32,
            n_theta: 128,
            n_tangent: 96,
            n_omega: 64,
        },
    }
}

fn blaschke_phi(w: f64) -> f64 {
    w * w - w.sin().powi(2)
}

/// ∫_{G∩B=∅} Φ dG for the unit ball from the distance d = 1/sin(ω/2) of each line
/// to the centre; the composite Simpson rule in ω is independent of the survey.
fn radial_ball_line_integral(phi: impl Fn(f64) -> f64) -> f64 {
    let n = 200_000;
    let h = PI / n as f64;
    let g = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let s = (w / 2.0).sin();
        phi(w) * (w / 2.0).cos() / (2.0 * s * s * s)
    };
    let mut acc = g(0.0) + g(PI);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * g(k as f64 * h);
    }
    // ½ · 4π over directions, 2πd dd over the plane.
    2.0 * PI * 2.0 * PI * acc * h / 3.0
}

#[test]
fn ball_line_integral_matches_radial_quadrature() {
    let ball = ConvexBody3::new(BodySpec::Ball { r: 1.0 }).unwrap();
    let wb = Workbench::new(ball, small(), &Sequential).unwrap();
    let radial = radial_ball_line_integral(blaschke_phi);
    let closed = 32.0 * PI * PI - 2.0 * PI.powi(4);
    assert!(
        (radial - closed).abs() < 1e-9 * closed,
        "{radial} vs {closed}"
    );
    let survey = wb.line_integral(&blaschke_phi).unwrap();
    assert!(
        (survey - radial).abs() < 1e-8 * radial,
        "{survey} vs {radial}"
    );
    let report = wb.report(&IdentityId::Blaschke).unwrap();
    assert!(report.passed && report.rel_err < 1e-8);
}

#[test]
fn polar_route_agrees_with_tangent_route() {
    let body = ellipsoid();
    let wb = Workbench::new(body.clone(), small(), &Sequential).unwrap();
    let sin4 = |w: f64| w.sin().powi(4);
    let phis: [&(dyn Fn(f64) -> f64 + Sync); 2] = [&blaschke_phi, &sin4];
    let polar = polar_line_integrals(&body, &phis, PolarParams::default(), &Sequential).unwrap();
    for (phi, p) in phis.iter().zip(&polar) {
        let t = wb.line_integral(*phi).unwrap();
        assert!(p.tail.abs() < 1e-2 * p.value.abs());
        assert!((p.value - t).abs() < 1e-3 * t, "{} vs {t}", p.value);
    }
}

#[test]
fn series_partial_sums_are_monotone_for_root_kernels() {
    let wb = Workbench::new(ellipsoid(), WorkbenchParams::default(), &Sequential).unwrap();
    let spec = wb.spectrum();
    for f in [EvenKernel::sqrt(), EvenKernel::inv_sqrt()] {
        let lambda = planepair_core::specfun::lambda_coeffs(&f, 20).unwrap();
        let mut partial = lambda[0] * spec.norm_sq(0);
        let sign = lambda[2].signum();
        for n in (2..=20).step_by(2) {
            let step = lambda[n] * spec.norm_sq(n);
            assert!(step * sign >= 0.0, "{} n={n}", f.id());
            partial += step;
        }
        let oracle = wb.oracle_pair_integral(&f).unwrap();
        assert!((partial - oracle).abs() < 1e-6 * oracle, "{}", f.id());
    }
}

#[test]
fn crofton_deficit_is_nonnegative_and_vanishes_on_constant_width() {
    let cw = ConvexBody3::new(BodySpec::ConstantWidth {
        r: 1.0,
        eps: 0.05,
        degree: 3,
        order: 0,
    })
    .unwrap();
    let id = IdentityId::CroftonDeficit;
    let e = Workbench::new(ellipsoid(), small(), &Sequential).unwrap();
    let r = e.report(&id).unwrap();
    assert!(r.passed);
    assert!(r.lhs > 1e-3 * e.mean_curvature().powi(2));
    let c = Workbench::new(cw, small(), &Sequential).unwrap();
    let r = c.report(&id).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.diagnostics.iter().all(|d| d.passed));
}

#[test]
fn identities_survive_rigid_motions() {
    let ids = IdentityId::all();
    let base = Workbench::new(ellipsoid(), small(), &Sequential).unwrap();
    let reference = base.reports(&ids).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let axis = normalize([
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ]);
        let shift = [
            rng.gen_range(-0.3..0.3),
            rng.gen_range(-0.3..0.3),
            rng.gen_range(-0.3..0.3),
        ];
        let body = ellipsoid()
            .rotated(&rotation(axis, rng.gen_range(0.0..PI)))
            .unwrap()
            .translated(shift)
            .unwrap();
        let wb = Workbench::new(body, small(), &Sequential).unwrap();
        for (r, r0) in wb.reports(&ids).unwrap().iter().zip(&reference) {
            assert!(r.passed, "{} failed after motion", r.identity_id);
            let scale = r0.lhs.abs().max(r0.floor);
            assert!(
                (r.lhs - r0.lhs).abs() <= 1e-3 * scale,
                "{}: {} vs {}",
                r.identity_id,
                r.lhs,
                r0.lhs
            );
        }
    }
}

#[test]
fn slowly_decaying_integrand_is_rejected() {
    let wb = Workbench::new(ellipsoid(), small(), &Sequential).unwrap();
    assert!(matches!(
        wb.line_integral(&|w: f64| w.sin().powi(2)),
        Err(planepair_core::Error::SlowDecay { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn positive_integrands_give_positive_values(
        a in 0.7f64..1.3, b in 0.7f64..1.3, c in 0.7f64..1.6, m in 2u32..5,
    ) {
        let body = ConvexBody3::new(BodySpec::Ellipsoid { a, b, c }).unwrap();
        let wb = Workbench::new(body, small(), &Sequential).unwrap();
        let s = wb.line_integral(&|w: f64| w.sin().powi(2 * m as i32)).unwrap();
        prop_assert!(s > 0.0);
        prop_assert!(wb.line_integral(&blaschke_phi).unwrap() > 0.0);
        for f in [EvenKernel::one(), EvenKernel::t2n(m), EvenKernel::sqrt(), EvenKernel::inv_sqrt()] {
            prop_assert!(wb.oracle_pair_integral(&f).unwrap() > 0.0);
        }
        prop_assert!(wb.survey().density().iter().all(|&d| d >= 0.0));
    }
}
