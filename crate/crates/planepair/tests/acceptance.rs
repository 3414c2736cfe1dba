//! Acceptance criteria 1–10, one PASS/FAIL line each, at default resolution.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use planepair::Rayon;
use planepair_core::harmonics::{funk_hecke_check, Parity};
use planepair_core::integrate::{fourier_a, shipped_kernel_ids, WorkbenchParams};
use planepair_core::math::{normalize, rotation};
use planepair_core::specfun::{
    a0_displayed, a_coeff, alpha_coeff, beta_coeff, lambda_coeff, legendre_p, mu_coeff,
};
use planepair_core::{
    BodySpec, ConvexBody3, EvenKernel, IdentityId, IdentityReport, SphereGrid, Workbench,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ball() -> ConvexBody3 {
    ConvexBody3::new(BodySpec::Ball { r: 1.0 }).unwrap()
}

fn ellipsoid() -> ConvexBody3 {
    ConvexBody3::new(BodySpec::Ellipsoid {
        a: 1.0,
        b: 1.0,
        c: 1.5,
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

fn workbench(body: ConvexBody3) -> Workbench {
    Workbench::new(body, WorkbenchParams::default(), &Rayon).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ensure(cond: bool, what: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what)
    }
}

fn sin(x: f64) -> f64 {
    x.sin()
}

/// The unit ball seen from a line at distance d has ω = 2 arcsin(1/d); with
/// dG = ½ dP du this leaves a 1D integral in ω, done here by composite Simpson.
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
    4.0 * PI * PI * acc * h / 3.0
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let wb = workbench(ball());
    let lines = wb.line_integral(&|w| w * w - sin(w) * sin(w)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let closed = 32.0 * PI * PI - 2.0 * PI.powi(4);
    let radial = radial_ball_line_integral(|w| w * w - sin(w) * sin(w));
    ensure(
        rel(radial, closed) < 1e-8,
        format!("radial oracle {radial} vs {closed}"),
    )?;
    let e = rel(lines, radial);
    ensure(
        e <= 1e-3,
        format!("line route {lines} vs {radial}, rel {e:.2e}"),
    )?;
    ensure(secs <= 10.0, format!("runtime {secs:.1} s"))?;
    Ok(format!("rel {e:.2e}, {secs:.2} s"))
}

fn criterion_2() -> Check {
    let t = Instant::now();
    let kernels = ["one", "P2", "P4", "t2n:1", "sqrt"];
    let mut worst: f64 = 0.0;
    for body in [ball(), ellipsoid(), cw_body()] {
        let wb = workbench(body);
        for k in kernels {
            let f = EvenKernel::parse(k).unwrap();
            let v = [
                wb.oracle_pair_integral(&f).unwrap(),
                wb.series_pair_integral(&f).unwrap().value,
                wb.lines_pair_integral(&f).unwrap(),
            ];
            let scale = v
                .iter()
                .fold(wb.kernel_floor(&f).unwrap(), |m, x| m.max(x.abs()));
            for i in 0..3 {
                for j in i + 1..3 {
                    let d = (v[i] - v[j]).abs() / scale;
                    worst = worst.max(d);
                    ensure(d <= 2e-3, format!("{k} on {}: {v:?}", wb.body().label()))?;
                }
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs <= 300.0, format!("runtime {secs:.1} s"))?;
    Ok(format!("15 cells, worst rel {worst:.2e}, {secs:.1} s"))
}

fn criterion_3() -> Check {
    let wb = workbench(ellipsoid());
    let mut worst: f64 = 0.0;
    for n in [2u32, 4] {
        let v = wb
            .oracle_pair_integral(&EvenKernel::legendre(n).unwrap())
            .unwrap();
        let expect = 4.0 * PI / (2 * n + 1) as f64 * wb.spectrum().norm_sq(n as usize);
        let e = rel(v, expect);
        worst = worst.max(e);
        ensure(e <= 2e-3, format!("P{n}: {v} vs {expect}"))?;
    }
    Ok(format!("worst rel {worst:.2e}"))
}

fn criterion_4() -> Check {
    let sin4 = |w: f64| sin(w).powi(4);
    let wb = workbench(ellipsoid());
    let m = wb.mean_curvature();
    let line = wb.line_integral(&sin4).unwrap();
    let closed = 2.0 / 3.0 * m * m + 64.0 * PI / 15.0 * wb.spectrum().norm_sq(2);
    let e1 = rel(line, closed);
    ensure(e1 <= 2e-3, format!("ellipsoid {line} vs {closed}"))?;
    let b = workbench(ball());
    let line = b.line_integral(&sin4).unwrap();
    let e2 = rel(line, 32.0 * PI * PI / 3.0);
    ensure(
        e2 <= 1e-3,
        format!("ball {line} vs {}", 32.0 * PI * PI / 3.0),
    )?;
    Ok(format!("ellipsoid rel {e1:.2e}, ball rel {e2:.2e}"))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn criterion_5() -> Check {
    let cw = workbench(cw_body());
    let m2 = cw.mean_curvature().powi(2);
    let mut worst: f64 = 0.0;
    for m in 2u32..=4 {
        // Γ(m+½) = √π (2m)! / (4^m m!)
        let gamma = PI.sqrt() * factorial(2 * m) / (4f64.powi(m as i32) * factorial(m));
        let coeff = m as f64 * PI.sqrt() * factorial(m - 2) / (4.0 * gamma);
        let line = cw.line_integral(&|w| sin(w).powi(2 * m as i32)).unwrap();
        let e = rel(line, coeff * m2);
        worst = worst.max(e);
        ensure(
            e <= 3e-3,
            format!("constant width, m={m}: {line} vs {}", coeff * m2),
        )?;
    }
    let wb = workbench(ellipsoid());
    for m in 2u32..=4 {
        let r = wb.report(&IdentityId::Sinpow(m)).unwrap();
        worst = worst.max(r.rel_err);
        ensure(
            r.rel_err <= 3e-3,
            format!("ellipsoid sinpow:{m} rel {:.2e}", r.rel_err),
        )?;
    }
    Ok(format!("worst rel {worst:.2e}"))
}

fn criterion_6() -> Check {
    let wb = workbench(ellipsoid());
    let mut worst: f64 = 0.0;
    for id in [IdentityId::LuSquare, IdentityId::CroftonDeficit] {
        let r = wb.report(&id).unwrap();
        worst = worst.max(r.rel_err);
        ensure(
            r.rel_err <= 3e-3 && r.diagnostics.iter().all(|d| d.passed),
            format!("{id} on the ellipsoid: rel {:.2e}", r.rel_err),
        )?;
    }
    let cw = workbench(cw_body());
    let r = cw.report(&IdentityId::CroftonDeficit).unwrap();
    let ratio = r
        .diagnostic("deficit_series_over_m2")
        .map(|d| d.value)
        .ok_or("constant-width diagnostic missing")?;
    ensure(
        ratio.abs() <= 1e-6 && r.rel_err <= 3e-3,
        format!("constant width deficit/M² = {ratio:.2e}"),
    )?;
    Ok(format!(
        "ellipsoid worst rel {worst:.2e}, deficit/M² {ratio:.1e}"
    ))
}

fn criterion_7() -> Check {
    let wb = workbench(cw_body());
    let w = wb.mean_width();
    let scale = lambda_coeff(&EvenKernel::one(), 0).unwrap() * PI * w * w;
    let mut vanish: f64 = 0.0;
    for k in ["P2", "P4"] {
        let v = wb
            .oracle_pair_integral(&EvenKernel::parse(k).unwrap())
            .unwrap();
        vanish = vanish.max(v.abs() / scale);
        ensure(
            v.abs() <= 1e-4 * scale,
            format!("{k}: |I| = {:.2e}", v.abs()),
        )?;
    }
    let mut worst: f64 = 0.0;
    for k in ["one", "t2n:1", "sqrt"] {
        let f = EvenKernel::parse(k).unwrap();
        let v = wb.oracle_pair_integral(&f).unwrap();
        let expect = lambda_coeff(&f, 0).unwrap() * PI * w * w;
        let e = rel(v, expect);
        worst = worst.max(e);
        ensure(e <= 2e-3, format!("{k}: {v} vs {expect}"))?;
    }
    Ok(format!("vanishing {vanish:.1e}, worst rel {worst:.2e}"))
}

fn criterion_8() -> Check {
    let mut beta_err: f64 = 0.0;
    for m in 2u32..=8 {
        let h = EvenKernel::hm(m).unwrap();
        for k in 1..m {
            let closed = beta_coeff(m, k).unwrap();
            let quad = lambda_coeff(&h, 2 * k).unwrap();
            let e = rel(quad, closed);
            beta_err = beta_err.max(e);
            ensure(e <= 1e-9, format!("beta m={m} k={k}: {closed} vs {quad}"))?;
        }
    }
    let mut mu_err: f64 = 0.0;
    for n in 0u32..=6 {
        for i in 0..=40 {
            let t = -1.0 + i as f64 / 20.0;
            let sum: f64 = (0..=n)
                .map(|k| mu_coeff(n, k).unwrap() * legendre_p(2 * k, t))
                .sum();
            let e = (sum - t.powi(2 * n as i32)).abs();
            mu_err = mu_err.max(e);
            ensure(e <= 1e-10, format!("mu n={n} t={t}: {e:.2e}"))?;
        }
    }
    let mut alpha_err: f64 = 0.0;
    for n in 1u32..=8 {
        for i in 0..=60 {
            let x = PI * i as f64 / 60.0;
            let sum: f64 = (0..=n)
                .map(|m| alpha_coeff(n, m).unwrap() * x.sin().powi(2 * m as i32))
                .sum();
            let e = (sum - (2.0 * n as f64 * x).cos()).abs();
            alpha_err = alpha_err.max(e);
            ensure(e <= 1e-10, format!("alpha n={n} x={x}: {e:.2e}"))?;
        }
    }
    let mut closure: f64 = 0.0;
    for id in shipped_kernel_ids() {
        let c = fourier_a(&EvenKernel::parse(&id).unwrap(), usize::MAX).unwrap();
        let r = c.closure_residual().abs();
        closure = closure.max(r);
        ensure(r <= 1e-10, format!("closure for {id}: {r:.2e}"))?;
    }
    Ok(format!(
        "beta {beta_err:.1e}, mu {mu_err:.1e}, alpha {alpha_err:.1e}, closure {closure:.1e}"
    ))
}

fn criterion_9() -> Check {
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for n in 0u32..=3 {
        let a: Vec<f64> = (0..=n + 1).map(|r| a_coeff(n, r).unwrap()).collect();
        let profile = |x: f64| {
            a[0] * x * x
                + (1..=n + 1)
                    .map(|r| a[r as usize] * x.sin().powi(2 * r as i32))
                    .sum::<f64>()
        };
        for i in 0..=1000 {
            let x = PI * i as f64 / 1000.0;
            let d2 = (profile(x + h) - 2.0 * profile(x) + profile(x - h)) / (h * h);
            let target = x.cos().powi(2 * n as i32) * x.sin().powi(2);
            worst = worst.max((d2 - target).abs());
        }
    }
    ensure(worst <= 1e-6, format!("max-norm residual {worst:.2e}"))?;
    let a0 = a_coeff(1, 0).unwrap();
    ensure(
        (a0 - 1.0 / 16.0).abs() < 1e-15,
        format!("A0 for n=1 is {a0}, expected 1/16"),
    )?;
    Ok(format!(
        "residual {worst:.1e}; n=1: A0 = {a0}, displayed closed form {}",
        a0_displayed(1)
    ))
}

fn criterion_10() -> Check {
    let ids = IdentityId::all();
    let reference = workbench(ellipsoid()).reports(&ids).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20261014);
    let mut drift: f64 = 0.0;
    for _ in 0..5 {
        let axis = normalize([
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ]);
        let shift = [
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.5..0.5),
        ];
        let body = ellipsoid()
            .rotated(&rotation(axis, rng.gen_range(0.0..PI)))
            .unwrap()
            .translated(shift)
            .unwrap();
        let moved = workbench(body).reports(&ids).unwrap();
        for (r, r0) in moved.iter().zip(&reference) {
            drift = drift.max(report_drift(r, r0));
            ensure(
                report_drift(r, r0) <= 1e-3 && r.passed,
                format!("{} drifts by {:.2e}", r.identity_id, report_drift(r, r0)),
            )?;
        }
    }
    let grid = SphereGrid::new(64, 128).unwrap();
    let mut ball_norm: f64 = 0.0;
    for r in [1.0, 2.5] {
        let b = ConvexBody3::new(BodySpec::Ball { r }).unwrap();
        let s = planepair_core::body::spectrum(&b, 20, &grid, &Rayon).unwrap();
        for n in 1..=20 {
            ball_norm = ball_norm.max(s.norm_sq(n));
        }
    }
    ensure(
        ball_norm <= 1e-12,
        format!("ball ‖π_n‖² up to {ball_norm:.1e}"),
    )?;
    let fh_grid = SphereGrid::new(48, 96).unwrap();
    let dirs = [
        normalize([1.0, 0.0, 0.0]),
        normalize([0.3, -0.6, 0.74]),
        normalize([-0.5, 0.5, -0.2]),
    ];
    let mut fh: f64 = 0.0;
    for id in shipped_kernel_ids() {
        let f = EvenKernel::parse(&id).unwrap();
        for n in 0..=6usize {
            for j in 0..=n {
                for parity in [Parity::Cos, Parity::Sin] {
                    if j == 0 && parity == Parity::Sin {
                        continue;
                    }
                    for u in dirs {
                        let (lhs, rhs) = funk_hecke_check(&f, n, j, parity, u, &fh_grid).unwrap();
                        fh = fh.max((lhs - rhs).abs());
                    }
                }
            }
        }
    }
    ensure(fh <= 1e-6, format!("Funk–Hecke residual {fh:.1e}"))?;
    Ok(format!(
        "motion drift {drift:.1e}, ball norms {ball_norm:.1e}, Funk–Hecke {fh:.1e}"
    ))
}

/// Largest relative change of any route value, against max(|v|, floor).
fn report_drift(r: &IdentityReport, r0: &IdentityReport) -> f64 {
    let pairs = std::iter::once((r.lhs, r0.lhs))
        .chain(r.rhs.iter().zip(&r0.rhs).map(|(a, b)| (a.value, b.value)));
    pairs
        .map(|(a, b)| (a - b).abs() / b.abs().max(r0.floor))
        .fold(0.0, f64::max)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("ball Blaschke line integral", criterion_1),
        ("triangle consistency", criterion_2),
        ("Legendre pair integrals", criterion_3),
        ("sin^4 line integral", criterion_4),
        ("sin^2m closed forms", criterion_5),
        ("Crofton-type inequalities", criterion_6),
        ("constant-width pair integrals", criterion_7),
        ("coefficient exactness", criterion_8),
        ("A-coefficient profile", criterion_9),
        ("invariance suite", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
