use std::f64::consts::PI;

use planepair_core::body::{mean_curvature_m, spectrum, surface_area_f, ShTerm};
use planepair_core::harmonics::{funk_hecke_check, Parity};
use planepair_core::integrate::{shipped_kernel_ids, LineParams, LineSurvey};
use planepair_core::math::{frame, normalize, rotation};
use planepair_core::{BodySpec, ConvexBody3, EvenKernel, Sequential, ShadowProfile, SphereGrid};
use proptest::prelude::*;

fn ellipsoid() -> ConvexBody3 {
    ConvexBody3::new(BodySpec::Ellipsoid {
        a: 1.0,
        b: 1.0,
        c: 1.5,
    })
    .unwrap()
}

fn triaxial() -> ConvexBody3 {
    ConvexBody3::new(BodySpec::Ellipsoid {
        a: 0.8,
        b: 1.1,
        c: 1.4,
    })
    .unwrap()
}

fn cw_body() -> ConvexBody3 {
    ConvexBody3::new(BodySpec::ConstantWidth {
        r: 1.0,
        eps: 0.05,
        degree: 3,
        order: 0,
    })
    .unwrap()
}

fn unit(x: f64, y: f64, z: f64) -> [f64; 3] {
    normalize([x, y, z])
}

fn arb_axis() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-2)
        .prop_map(|(x, y, z)| unit(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn norms_are_rotation_invariant(axis in arb_axis(), angle in 0.0f64..PI) {
        let grid = SphereGrid::new(32, 64).unwrap();
        let body = triaxial();
        let moved = body.rotated(&rotation(axis, angle)).unwrap();
        let a = spectrum(&body, 8, &grid, &Sequential).unwrap();
        let b = spectrum(&moved, 8, &grid, &Sequential).unwrap();
        for n in 0..=8 {
            let (x, y) = (a.norm_sq(n), b.norm_sq(n));
            prop_assert!((x - y).abs() <= 1e-9 * a.norm_sq(0), "n={} {} {}", n, x, y);
        }
    }

    #[test]
    fn translation_moves_only_degree_one(
        cx in -0.5f64..0.5, cy in -0.5f64..0.5, cz in -0.5f64..0.5,
    ) {
        let grid = SphereGrid::new(32, 64).unwrap();
        let body = triaxial();
        let moved = body.translated([cx, cy, cz]).unwrap();
        let a = spectrum(&body, 8, &grid, &Sequential).unwrap();
        let b = spectrum(&moved, 8, &grid, &Sequential).unwrap();
        for n in (0..=8).filter(|&n| n != 1) {
            prop_assert!((a.norm_sq(n) - b.norm_sq(n)).abs() <= 1e-9 * a.norm_sq(0));
        }
        let shift = 4.0 * PI / 3.0 * (cx * cx + cy * cy + cz * cz);
        prop_assert!((b.norm_sq(1) - a.norm_sq(1) - shift).abs() <= 1e-9);
        let (m0, _) = mean_curvature_m(&body, &grid);
        let (m1, _) = mean_curvature_m(&moved, &grid);
        prop_assert!((m0 - m1).abs() <= 1e-12 * m0);
    }

    #[test]
    fn scaling_is_homogeneous(s in 0.3f64..3.0) {
        let grid = SphereGrid::new(32, 64).unwrap();
        let body = triaxial();
        let big = body.scaled(s).unwrap();
        let (m0, _) = mean_curvature_m(&body, &grid);
        let (m1, _) = mean_curvature_m(&big, &grid);
        prop_assert!((m1 - s * m0).abs() <= 1e-12 * m1);
        let f0 = surface_area_f(&body, &grid, 128, &Sequential).unwrap();
        let f1 = surface_area_f(&big, &grid, 128, &Sequential).unwrap();
        prop_assert!((f1 - s * s * f0).abs() <= 1e-10 * f1);
    }

    #[test]
    fn shadow_is_frame_independent(axis in arb_axis(), spin in 0.0f64..(2.0 * PI), px in 2.0f64..5.0, py in -3.0f64..3.0) {
        let body = triaxial();
        let (e1, e2) = frame(axis);
        let (c, s) = (spin.cos(), spin.sin());
        let f1 = [
            c * e1[0] + s * e2[0],
            c * e1[1] + s * e2[1],
            c * e1[2] + s * e2[2],
        ];
        let f2 = [
            -s * e1[0] + c * e2[0],
            -s * e1[1] + c * e2[1],
            -s * e1[2] + c * e2[2],
        ];
        let a = ShadowProfile::with_frame(&body, axis, e1, e2, 128).unwrap();
        let b = ShadowProfile::with_frame(&body, axis, f1, f2, 128).unwrap();
        prop_assert!((a.perimeter() - b.perimeter()).abs() <= 1e-12 * a.perimeter());
        prop_assert!((a.area() - b.area()).abs() <= 1e-12 * a.area());
        let q = [c * px + s * py, -s * px + c * py];
        let wa = a.visual_angle([px, py]).unwrap();
        let wb = b.visual_angle(q).unwrap();
        prop_assert!((wa - wb).abs() <= 1e-9, "{} vs {}", wa, wb);
    }

    #[test]
    fn visual_angle_decreases_along_rays(psi in 0.0f64..(2.0 * PI)) {
        let body = triaxial();
        let shadow = ShadowProfile::new(&body, unit(0.3, -0.2, 1.0), 128).unwrap();
        let c = shadow.steiner_point();
        let r0 = shadow.boundary_radius(c, psi);
        let mut last = PI;
        for k in 1..40 {
            let r = r0 * (1.0 + 0.1 * k as f64);
            let w = shadow
                .visual_angle([c[0] + r * psi.cos(), c[1] + r * psi.sin()])
                .unwrap();
            prop_assert!(w > 0.0 && w < last);
            last = w;
        }
    }
}

#[test]
fn ball_spectrum_is_a_single_degree() {
    let grid = SphereGrid::new(32, 64).unwrap();
    let ball = ConvexBody3::new(BodySpec::Ball { r: 1.3 }).unwrap();
    let s = spectrum(&ball, 12, &grid, &Sequential).unwrap();
    let m = 4.0 * PI * 1.3;
    assert!((s.norm_sq(0) - m * m / (4.0 * PI)).abs() < 1e-12 * m * m);
    for n in 1..=12 {
        assert!(s.norm_sq(n) < 1e-24, "n={n}");
    }
}

#[test]
fn constant_width_body_has_no_even_harmonics() {
    let grid = SphereGrid::new(48, 96).unwrap();
    let s = spectrum(&cw_body(), 12, &grid, &Sequential).unwrap();
    for n in (2..=12).step_by(2) {
        assert!(s.norm_sq(n) < 1e-20, "n={n}: {}", s.norm_sq(n));
    }
    assert!(s.norm_sq(3) > 1e-4);
    let w = cw_body();
    for u in [
        unit(1.0, 0.0, 0.0),
        unit(0.2, 0.7, -0.4),
        unit(0.0, 0.0, 1.0),
    ] {
        assert!((w.width(u) - 2.0).abs() < 1e-14);
    }
}

#[test]
fn nonconvex_perturbation_is_rejected() {
    let terms = vec![
        ShTerm {
            n: 0,
            j: 0,
            parity: Parity::Cos,
            coeff: 1.0,
        },
        ShTerm {
            n: 6,
            j: 3,
            parity: Parity::Cos,
            coeff: 0.3,
        },
    ];
    assert!(ConvexBody3::new(BodySpec::ShBody { terms }).is_err());
}

#[test]
fn funk_hecke_holds_for_shipped_kernels() {
    let grid = SphereGrid::new(48, 96).unwrap();
    let dirs = [
        unit(1.0, 0.0, 0.0),
        unit(0.3, -0.6, 0.74),
        unit(-0.5, 0.5, -0.2),
    ];
    for id in shipped_kernel_ids() {
        let f = EvenKernel::parse(&id).unwrap();
        for n in 0..=6 {
            for j in 0..=n {
                for parity in [Parity::Cos, Parity::Sin] {
                    if j == 0 && parity == Parity::Sin {
                        continue;
                    }
                    for u in dirs {
                        let (lhs, rhs) = funk_hecke_check(&f, n, j, parity, u, &grid).unwrap();
                        assert!(
                            (lhs - rhs).abs() <= 1e-6,
                            "{id} n={n} j={j}: {lhs} vs {rhs}"
                        );
                    }
                }
            }
        }
    }
}

/// Subtended angle of the ellipse (A cos φ, B sin φ) from p by a dense scan of its boundary.
fn scanned_angle(a: f64, b: f64, p: [f64; 2]) -> f64 {
    let base = (-p[1]).atan2(-p[0]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let n = 1_000_000;
    for k in 0..n {
        let phi = 2.0 * PI * k as f64 / n as f64;
        let d = (b * phi.sin() - p[1]).atan2(a * phi.cos() - p[0]);
        let mut rel = d - base;
        while rel > PI {
            rel -= 2.0 * PI;
        }
        while rel < -PI {
            rel += 2.0 * PI;
        }
        lo = lo.min(rel);
        hi = hi.max(rel);
    }
    hi - lo
}

#[test]
fn ellipsoid_visual_angle_matches_boundary_scan() {
    let body = triaxial();
    let shadow = ShadowProfile::with_frame(
        &body,
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        256,
    )
    .unwrap();
    for p in [
        [1.5, 0.0],
        [0.0, 1.6],
        [-1.2, 0.9],
        [3.0, -2.0],
        [0.81, 0.1],
        [10.0, 4.0],
    ] {
        let w = shadow.visual_angle(p).unwrap();
        let scan = scanned_angle(0.8, 1.1, p);
        assert!((w - scan).abs() < 1e-6, "{p:?}: {w} vs {scan}");
    }
}

#[test]
fn ball_visual_angle_closed_form() {
    let ball = ConvexBody3::new(BodySpec::Ball { r: 1.0 }).unwrap();
    let shadow = ShadowProfile::new(&ball, unit(0.1, 0.2, 0.9), 128).unwrap();
    for d in [1.01, 1.3, 2.0, 7.5, 100.0] {
        let w = shadow.visual_angle([d * 0.6, d * 0.8]).unwrap();
        assert!((w - 2.0 * (1.0 / d).asin()).abs() < 1e-12, "d={d}");
    }
}

#[test]
fn meeting_measure_and_perimeters_agree_with_body_invariants() {
    let params = LineParams::default();
    let grid = SphereGrid::new(params.n_colat, params.n_long).unwrap();
    for body in [ellipsoid(), triaxial(), cw_body()] {
        let survey = LineSurvey::new(&body, params, &Sequential).unwrap();
        let f = surface_area_f(&body, &grid, params.n_theta, &Sequential).unwrap();
        assert!((survey.surface_area() - f).abs() <= 1e-10 * f);
        assert!((survey.line_measure_meeting() - PI * f / 2.0).abs() <= 1e-10 * f);
        let (m, _) = mean_curvature_m(&body, &grid);
        let p = survey.perimeter_integral();
        assert!(
            (p - 2.0 * PI * m).abs() <= 1e-9 * p,
            "{p} vs {}",
            2.0 * PI * m
        );
        assert!(survey.perimeter_square_integral() * 4.0 * PI >= p * p * (1.0 - 1e-12));
    }
}
