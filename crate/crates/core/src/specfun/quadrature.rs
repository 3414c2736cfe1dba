use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RuleKind {
    /// Weight 1 on (−1, 1).
    GaussLegendre,
    /// Weight 1/√(1−t²) on (−1, 1).
    GaussChebyshev,
}

/// Nodes in (−1, 1), ascending, with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ g(tᵢ); for Chebyshev rules this approximates ∫ g(t)/√(1−t²) dt.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * g(t))
            .sum()
    }

    /// Affine image of a Gauss–Legendre rule on `[a, b]`, as (node, weight) pairs.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        debug_assert_eq!(self.kind, RuleKind::GaussLegendre);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (mid + half * t, half * w))
    }
}

pub fn gauss_rule(kind: RuleKind, n: usize) -> Result<QuadratureRule1D> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "quadrature rule needs at least one node".into(),
        ));
    }
    Ok(match kind {
        RuleKind::GaussLegendre => gauss_legendre(n),
        RuleKind::GaussChebyshev => gauss_chebyshev(n),
    })
}

fn gauss_legendre(n: usize) -> QuadratureRule1D {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x runs from near +1 downwards.
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule1D {
        nodes,
        weights,
        kind: RuleKind::GaussLegendre,
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss_chebyshev(n: usize) -> QuadratureRule1D {
    let w = PI / n as f64;
    let nodes: Vec<f64> = (0..n)
        .map(|k| -libm::cos((2.0 * k as f64 + 1.0) * PI / (2.0 * n as f64)))
        .collect();
    QuadratureRule1D {
        nodes,
        weights: alloc::vec![w; n],
        kind: RuleKind::GaussChebyshev,
    }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let s = f(mid - dx) + f(mid + dx);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Subdivides until each panel's Kronrod–Gauss difference is below its share
/// of `tol`; fails with `NonConvergence` when the depth budget runs out.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut stack: Vec<(f64, f64, f64, u32)> = alloc::vec![(a, b, tol, 0)];
    let mut total = 0.0;
    let mut worst = 0.0f64;
    let mut failed = false;
    while let Some((lo, hi, local_tol, depth)) = stack.pop() {
        let (value, err) = gk15(&f, lo, hi);
        if err <= local_tol || (hi - lo).abs() < 1e-14 * (b - a).abs() {
            total += value;
        } else if depth >= 40 {
            total += value;
            worst = worst.max(err);
            failed = true;
        } else {
            let m = 0.5 * (lo + hi);
            // Halving stops at a floor so that panels near rounding level can still pass.
            let next = (0.5 * local_tol).max(1e-6 * tol);
            stack.push((m, hi, next, depth + 1));
            stack.push((lo, m, next, depth + 1));
        }
    }
    if !total.is_finite() {
        return Err(Error::NonFinite("adaptive quadrature"));
    }
    if failed {
        return Err(Error::NonConvergence {
            what: "adaptive quadrature",
            estimate: total,
            change: worst,
        });
    }
    Ok(total)
}
