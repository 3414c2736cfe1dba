//! Legendre polynomials, Funk–Hecke coefficients, terminating ₃F₂ series,
//! Gauss rules and the closed-form coefficient families.

mod coefficients;
mod hypergeometric;
mod quadrature;

use alloc::vec::Vec;
use core::f64::consts::PI;

pub use coefficients::{
    a0_displayed, a0_from_mean, a_coeff, a_coeff_by_sum, alpha_coeff, beta_coeff, crofton_weight,
    hm_moment, hm_polynomial, mu_coeff, sine_kernel_weight, sinpow_leading, CoefficientFamily,
    CoefficientRow, CoefficientTable,
};
pub use hypergeometric::hyp3f2_terminating;
pub use quadrature::{adaptive_integrate, gauss_rule, QuadratureRule1D, RuleKind};

use crate::integrate::EvenKernel;
use crate::math::{binomial, powi, SignedLog};
use crate::{Error, Result};

/// P_n(t) by the three-term recurrence.
pub fn legendre_p(n: u32, t: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = t;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// P_0(t), ..., P_{n_max}(t).
pub fn legendre_all(n_max: u32, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(1.0);
    if n_max >= 1 {
        out.push(t);
    }
    for k in 2..=n_max as usize {
        let kf = k as f64;
        let v = ((2.0 * kf - 1.0) * t * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
        out.push(v);
    }
    out
}

/// Monomial coefficients of P_n: entry k multiplies t^k.
pub fn legendre_power_coeffs(n: u32) -> Vec<f64> {
    let mut c = alloc::vec![0.0; n as usize + 1];
    let scale = powi(0.5, n);
    for r in 0..=n / 2 {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        c[(n - 2 * r) as usize] = sign * scale * binomial(n, r) * binomial(2 * n - 2 * r, n);
    }
    c
}

const LAMBDA_START_NODES: usize = 128;
const LAMBDA_MAX_NODES: usize = 1024;
const LAMBDA_TOL: f64 = 1e-11;

fn lambda_with_rule(f: &EvenKernel, n_max: u32, nodes: usize) -> Result<Vec<f64>> {
    let rule = gauss_rule(f.rule_kind(), nodes)?;
    let mut acc = alloc::vec![0.0; n_max as usize + 1];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let g = w * f.rule_integrand(t);
        for (a, p) in acc.iter_mut().zip(legendre_all(n_max, t)) {
            *a += g * p;
        }
    }
    for (n, a) in acc.iter_mut().enumerate() {
        *a = if n % 2 == 1 { 0.0 } else { 2.0 * PI * *a };
    }
    if acc.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Funk-Hecke coefficient"));
    }
    Ok(acc)
}

/// λ_0, ..., λ_{n_max} of `f`, λ_n = 2π∫₋₁¹ f(t) P_n(t) dt.
///
/// Odd entries are exactly zero. The node count starts at 128 and doubles
/// until two successive estimates agree to 1e−11, up to 1024 nodes.
pub fn lambda_coeffs(f: &EvenKernel, n_max: u32) -> Result<Vec<f64>> {
    let mut nodes = LAMBDA_START_NODES;
    let mut prev = lambda_with_rule(f, n_max, nodes)?;
    let mut change = f64::INFINITY;
    while nodes < LAMBDA_MAX_NODES {
        nodes *= 2;
        let next = lambda_with_rule(f, n_max, nodes)?;
        change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        prev = next;
        if change <= LAMBDA_TOL {
            return Ok(prev);
        }
    }
    Err(Error::NonConvergence {
        what: "Funk-Hecke coefficient",
        estimate: prev.last().copied().unwrap_or(0.0),
        change,
    })
}

pub fn lambda_coeff(f: &EvenKernel, n: u32) -> Result<f64> {
    if n % 2 == 1 {
        return Ok(0.0);
    }
    Ok(lambda_coeffs(f, n)?[n as usize])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFamily {
    /// f(t) = √(1−t²)
    Sqrt,
    /// f(t) = 1/√(1−t²)
    InvSqrt,
}

/// Closed-form λ_n for the two square-root kernels, n even.
pub fn closed_lambda(family: ClosedFamily, n: u32) -> Result<f64> {
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "closed form needs even n, got {n}"
        )));
    }
    let k = (n / 2) as f64;
    let v = match family {
        ClosedFamily::Sqrt => {
            let r = SignedLog::gamma(k + 0.5) * SignedLog::gamma(k - 0.5)
                / (SignedLog::gamma(k + 1.0) * SignedLog::gamma(k + 2.0));
            -r.value() * PI / 2.0
        }
        ClosedFamily::InvSqrt => {
            let r = SignedLog::gamma(k + 0.5) / SignedLog::gamma(k + 1.0);
            2.0 * PI * (r * r).value()
        }
    };
    Ok(v)
}
