use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::math::binomial;
use crate::specfun::{
    adaptive_integrate, hm_polynomial, legendre_p, legendre_power_coeffs, RuleKind,
};
use crate::{Error, Result};

/// How a kernel behaves at t = ±1, which decides the quadrature rule in t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EndpointBehavior {
    /// Analytic on [−1, 1].
    Smooth,
    /// Vanishes like √(1−t²).
    SqrtVanishing,
    /// Blows up like 1/√(1−t²).
    InverseSqrt,
}

#[derive(Clone)]
enum Kind {
    One,
    /// t^{2n}
    Power(u32),
    Sqrt,
    InvSqrt,
    Legendre(u32),
    Hm(u32),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// An even function f on [−1, 1]; the pair measure it defines is f(⟨u₁,u₂⟩)dE₁dE₂.
#[derive(Clone)]
pub struct EvenKernel {
    id: String,
    kind: Kind,
    endpoint: EndpointBehavior,
}

impl fmt::Debug for EvenKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvenKernel")
            .field("id", &self.id)
            .field("endpoint", &self.endpoint)
            .finish()
    }
}

impl PartialEq for EvenKernel {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl EvenKernel {
    pub fn one() -> Self {
        EvenKernel {
            id: "one".into(),
            kind: Kind::One,
            endpoint: EndpointBehavior::Smooth,
        }
    }

    /// t^{2n}.
    pub fn t2n(n: u32) -> Self {
        if n == 0 {
            return Self::one();
        }
        EvenKernel {
            id: alloc::format!("t2n:{n}"),
            kind: Kind::Power(n),
            endpoint: EndpointBehavior::Smooth,
        }
    }

    /// √(1−t²).
    pub fn sqrt() -> Self {
        EvenKernel {
            id: "sqrt".into(),
            kind: Kind::Sqrt,
            endpoint: EndpointBehavior::SqrtVanishing,
        }
    }

    /// 1/√(1−t²).
    pub fn inv_sqrt() -> Self {
        EvenKernel {
            id: "inv_sqrt".into(),
            kind: Kind::InvSqrt,
            endpoint: EndpointBehavior::InverseSqrt,
        }
    }

    /// P_n for even n.
    pub fn legendre(n: u32) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::InvalidArgument(alloc::format!(
                "Legendre kernel needs an even degree, got {n}"
            )));
        }
        if n == 0 {
            return Ok(Self::one());
        }
        Ok(EvenKernel {
            id: alloc::format!("P{n}"),
            kind: Kind::Legendre(n),
            endpoint: EndpointBehavior::Smooth,
        })
    }

    /// h_m(t) = m(2mt² − 1)(1 − t²)^{m−2}, m ≥ 2.
    pub fn hm(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(alloc::format!(
                "h_m needs m ≥ 2, got {m}"
            )));
        }
        Ok(EvenKernel {
            id: alloc::format!("hm:{m}"),
            kind: Kind::Hm(m),
            endpoint: EndpointBehavior::Smooth,
        })
    }

    /// A user-supplied kernel. Evenness is checked on 200 points.
    pub fn custom(
        id: impl Into<String>,
        endpoint: EndpointBehavior,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let k = EvenKernel {
            id: id.into(),
            kind: Kind::Custom(Arc::new(f)),
            endpoint,
        };
        k.check_even()?;
        Ok(k)
    }

    /// Parses `one`, `t2`, `t2n:<n>`, `sqrt`, `inv_sqrt`, `P<n>`, `legendre:<n>`, `hm:<m>`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(alloc::format!("unknown kernel `{s}`"));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        let s = s.trim();
        match s {
            "one" | "1" => return Ok(Self::one()),
            "t2" => return Ok(Self::t2n(1)),
            "sqrt" => return Ok(Self::sqrt()),
            "inv_sqrt" => return Ok(Self::inv_sqrt()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("t2n:") {
            return Ok(Self::t2n(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("legendre:") {
            return Self::legendre(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("hm:") {
            return Self::hm(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix('P') {
            return Self::legendre(num(rest)?);
        }
        Err(bad())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn endpoint(&self) -> EndpointBehavior {
        self.endpoint
    }

    pub fn singular_endpoint(&self) -> bool {
        self.endpoint == EndpointBehavior::InverseSqrt
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::One => 1.0,
            Kind::Power(n) => crate::math::powi(t, 2 * n),
            Kind::Sqrt => libm::sqrt((1.0 - t * t).max(0.0)),
            Kind::InvSqrt => 1.0 / libm::sqrt(1.0 - t * t),
            Kind::Legendre(n) => legendre_p(*n, t),
            Kind::Hm(m) => hm_polynomial(*m, t).unwrap_or(f64::NAN),
            Kind::Custom(f) => f(t),
        }
    }

    /// f(t)·√(1−t²), bounded for every shipped kernel.
    pub fn chebyshev_numerator(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Sqrt => 1.0 - t * t,
            Kind::InvSqrt => 1.0,
            _ => self.evaluate(t) * libm::sqrt((1.0 - t * t).max(0.0)),
        }
    }

    /// Rule family in t: Gauss–Chebyshev when the endpoint behaves like a
    /// power of √(1−t²), Gauss–Legendre otherwise.
    pub fn rule_kind(&self) -> RuleKind {
        match self.endpoint {
            EndpointBehavior::Smooth => RuleKind::GaussLegendre,
            EndpointBehavior::SqrtVanishing | EndpointBehavior::InverseSqrt => {
                RuleKind::GaussChebyshev
            }
        }
    }

    /// The factor multiplying the rule weights: f for Gauss–Legendre,
    /// f·√(1−t²) for Gauss–Chebyshev.
    pub fn rule_integrand(&self, t: f64) -> f64 {
        match self.rule_kind() {
            RuleKind::GaussLegendre => self.evaluate(t),
            RuleKind::GaussChebyshev => self.chebyshev_numerator(t),
        }
    }

    /// f(cos x) sin²x, written so that it stays bounded for the singular kernel.
    pub fn profile_rhs(&self, x: f64) -> f64 {
        let s = libm::sin(x).abs();
        self.chebyshev_numerator(libm::cos(x)) * s
    }

    /// Coefficients c_j with f(t) = Σ c_j t^{2j}, for polynomial kernels.
    pub fn power_coeffs(&self) -> Option<Vec<f64>> {
        match &self.kind {
            Kind::One => Some(alloc::vec![1.0]),
            Kind::Power(n) => {
                let mut c = alloc::vec![0.0; *n as usize + 1];
                c[*n as usize] = 1.0;
                Some(c)
            }
            Kind::Legendre(n) => Some(legendre_power_coeffs(*n).into_iter().step_by(2).collect()),
            Kind::Hm(m) => {
                let m = *m;
                let mf = m as f64;
                let mut c = alloc::vec![0.0; m as usize];
                for i in 0..=(m - 2) {
                    let b = binomial(m - 2, i) * if i % 2 == 0 { 1.0 } else { -1.0 };
                    c[i as usize] -= mf * b;
                    c[i as usize + 1] += 2.0 * mf * mf * b;
                }
                Some(c)
            }
            Kind::Sqrt | Kind::InvSqrt | Kind::Custom(_) => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.power_coeffs().is_some()
    }

    /// `Some(m)` for the basis kernel h_m.
    pub fn hm_index(&self) -> Option<u32> {
        match self.kind {
            Kind::Hm(m) => Some(m),
            _ => None,
        }
    }

    pub(crate) fn closed_kind(&self) -> ClosedKind {
        match self.kind {
            Kind::Sqrt => ClosedKind::Sqrt,
            Kind::InvSqrt => ClosedKind::InvSqrt,
            Kind::Hm(m) => ClosedKind::Hm(m),
            Kind::Custom(_) => ClosedKind::None,
            _ => ClosedKind::Polynomial,
        }
    }

    /// 2π∫₋₁¹ |f(t)| dt, the natural size of pair integrals of this kernel
    /// (they are bounded by this times M²/4π).
    pub fn abs_lambda0(&self) -> Result<f64> {
        match self.kind {
            Kind::InvSqrt => Ok(2.0 * PI * PI),
            Kind::Sqrt => Ok(PI * PI),
            _ => Ok(2.0 * PI * adaptive_integrate(|t| self.evaluate(t).abs(), -1.0, 1.0, 1e-11)?),
        }
    }

    fn check_even(&self) -> Result<()> {
        for i in 0..200 {
            let t = -0.999 + 1.998 * i as f64 / 199.0;
            let (a, b) = (self.evaluate(t), self.evaluate(-t));
            if !a.is_finite() || (a - b).abs() > 1e-13 * a.abs().max(1.0) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "kernel `{}` is not even at t = {t}",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ClosedKind {
    Polynomial,
    Hm(u32),
    Sqrt,
    InvSqrt,
    None,
}

impl fmt::Display for EvenKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// Ids of the shipped kernels, for listings.
pub fn shipped_kernel_ids() -> Vec<String> {
    [
        "one", "t2n:1", "t2n:2", "sqrt", "inv_sqrt", "P2", "P4", "hm:2", "hm:3", "hm:4",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shipped() -> Vec<EvenKernel> {
        shipped_kernel_ids()
            .iter()
            .map(|s| EvenKernel::parse(s).unwrap())
            .collect()
    }

    #[test]
    fn shipped_kernels_are_even() {
        for k in shipped() {
            k.check_even().unwrap();
        }
    }

    #[test]
    fn only_inv_sqrt_is_singular() {
        for k in shipped() {
            assert_eq!(k.singular_endpoint(), k.id() == "inv_sqrt", "{}", k.id());
        }
    }

    #[test]
    fn parse_round_trips_ids() {
        for k in shipped() {
            assert_eq!(EvenKernel::parse(k.id()).unwrap().id(), k.id());
        }
        assert_eq!(EvenKernel::parse("legendre:4").unwrap().id(), "P4");
        assert_eq!(EvenKernel::parse("t2").unwrap().id(), "t2n:1");
        assert!(EvenKernel::parse("P3").is_err());
        assert!(EvenKernel::parse("hm:1").is_err());
        assert!(EvenKernel::parse("cosh").is_err());
    }

    #[test]
    fn power_coefficients_reproduce_kernels() {
        for k in shipped() {
            let Some(c) = k.power_coeffs() else { continue };
            for i in 0..=20 {
                let t = -1.0 + 0.1 * i as f64;
                let v: f64 = c
                    .iter()
                    .enumerate()
                    .map(|(j, cj)| cj * crate::math::powi(t, 2 * j as u32))
                    .sum();
                assert!((v - k.evaluate(t)).abs() < 1e-12, "{} at {t}", k.id());
            }
        }
    }

    #[test]
    fn custom_kernel_must_be_even() {
        assert!(EvenKernel::custom("odd", EndpointBehavior::Smooth, |t| t).is_err());
        let k = EvenKernel::custom("cos", EndpointBehavior::Smooth, libm::cos).unwrap();
        assert_eq!(k.rule_kind(), RuleKind::GaussLegendre);
    }

    #[test]
    fn profile_rhs_is_bounded_for_singular_kernel() {
        let k = EvenKernel::inv_sqrt();
        for i in 0..=100 {
            let x = PI * i as f64 / 100.0;
            assert!((k.profile_rhs(x) - libm::sin(x).abs()).abs() < 1e-15);
        }
    }
}
