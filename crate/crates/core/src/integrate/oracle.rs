use alloc::vec::Vec;

use super::kernel::EvenKernel;
use crate::body::ConvexBody3;
use crate::harmonics::{CentredGrid, HarmonicSpectrum, SphereGrid};
use crate::math::pairwise_sum;
use crate::specfun::{lambda_coeffs, RuleKind};
use crate::{Error, NodeMap, Result};

/// Resolution of the double-sphere route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleParams {
    pub n_colat: usize,
    pub n_long: usize,
    pub n_t: usize,
    pub n_alpha: usize,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            n_colat: 32,
            n_long: 64,
            n_t: 48,
            n_alpha: 96,
        }
    }
}

/// I(f) = ∬ f(⟨u,v⟩) p(u) p(v) dσ(u) dσ(v) by an outer product grid in u and,
/// for each u, a grid centred on u in (t, α) with t = ⟨u,v⟩.
///
/// The azimuthal integrals ∫p(v(t,α))dα are kernel independent and cached
/// for both t-rules, so each kernel costs one weighted sum.
#[derive(Debug, Clone)]
pub struct PairOracle {
    params: OracleParams,
    outer_weights: Vec<f64>,
    support: Vec<f64>,
    legendre: Ring,
    chebyshev: Ring,
}

#[derive(Debug, Clone)]
struct Ring {
    grid: CentredGrid,
    /// `rings[k][i]`: azimuthal integral at outer node k, t-node i.
    rings: Vec<Vec<f64>>,
}

impl PairOracle {
    pub fn new(body: &ConvexBody3, params: OracleParams, map: &impl NodeMap) -> Result<Self> {
        let outer = SphereGrid::new(params.n_colat, params.n_long)?;
        let support = body.sample(&outer);
        let build = |kind| -> Result<Ring> {
            let grid = CentredGrid::new(kind, params.n_t, params.n_alpha)?;
            let rings = map.map(outer.len(), |k| {
                grid.ring_averages(outer.nodes[k], |v| body.support(v))
            });
            Ok(Ring { grid, rings })
        };
        let legendre = build(RuleKind::GaussLegendre)?;
        let chebyshev = build(RuleKind::GaussChebyshev)?;
        Ok(PairOracle {
            params,
            outer_weights: outer.weights.clone(),
            support,
            legendre,
            chebyshev,
        })
    }

    pub fn params(&self) -> OracleParams {
        self.params
    }

    pub fn pair_integral(&self, f: &EvenKernel) -> Result<f64> {
        let ring = match f.rule_kind() {
            RuleKind::GaussLegendre => &self.legendre,
            RuleKind::GaussChebyshev => &self.chebyshev,
        };
        let rule = &ring.grid.t_rule;
        let g: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| w * f.rule_integrand(t))
            .collect();
        let terms: Vec<f64> = ring
            .rings
            .iter()
            .zip(&self.support)
            .zip(&self.outer_weights)
            .map(|((r, &p), &w)| {
                let inner: Vec<f64> = r.iter().zip(&g).map(|(a, b)| a * b).collect();
                w * p * pairwise_sum(&inner)
            })
            .collect();
        let v = pairwise_sum(&terms);
        if !v.is_finite() {
            return Err(Error::NonFinite("pair integral"));
        }
        Ok(v)
    }
}

/// Truncated series value of I(f) and the bound |λ_N|·Σ_{n>N}‖π_n‖² on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// (λ₀/4π)M² + Σ_{n even, 2 ≤ n ≤ N} λ_n‖π_n‖².
pub fn pair_integral_series(
    spectrum: &HarmonicSpectrum,
    f: &EvenKernel,
    n_max: usize,
) -> Result<SeriesValue> {
    if n_max > spectrum.max_degree {
        return Err(Error::InsufficientResolution {
            required: n_max,
            available: spectrum.max_degree,
        });
    }
    let lambda = lambda_coeffs(f, n_max as u32)?;
    series_from_lambda(spectrum, &lambda, n_max)
}

pub(crate) fn series_from_lambda(
    spectrum: &HarmonicSpectrum,
    lambda: &[f64],
    n_max: usize,
) -> Result<SeriesValue> {
    let terms: Vec<f64> = (0..=n_max)
        .step_by(2)
        .map(|n| lambda[n] * spectrum.norm_sq(n))
        .collect();
    let rest: f64 = (n_max + 1..=spectrum.max_degree)
        .map(|n| spectrum.norm_sq(n))
        .sum();
    Ok(SeriesValue {
        value: pairwise_sum(&terms),
        tail_bound: lambda[n_max].abs() * rest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::BodySpec;
    use crate::Sequential;
    use core::f64::consts::PI;

    fn small() -> OracleParams {
        OracleParams {
            n_colat: 16,
            n_long: 32,
            n_t: 24,
            n_alpha: 48,
        }
    }

    #[test]
    fn ball_values() {
        let ball = ConvexBody3::new(BodySpec::Ball { r: 1.0 }).unwrap();
        let o = PairOracle::new(&ball, small(), &Sequential).unwrap();
        assert!((o.pair_integral(&EvenKernel::one()).unwrap() - 16.0 * PI * PI).abs() < 1e-10);
        assert!(
            o.pair_integral(&EvenKernel::legendre(2).unwrap())
                .unwrap()
                .abs()
                < 1e-10
        );
        let sqrt = o.pair_integral(&EvenKernel::sqrt()).unwrap();
        assert!((sqrt - 4.0 * PI * PI * PI).abs() < 1e-9);
        let inv = o.pair_integral(&EvenKernel::inv_sqrt()).unwrap();
        assert!((inv - 8.0 * PI * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn ellipsoid_legendre_matches_norms() {
        let body = ConvexBody3::new(BodySpec::Ellipsoid {
            a: 1.0,
            b: 1.0,
            c: 1.5,
        })
        .unwrap();
        let o = PairOracle::new(&body, OracleParams::default(), &Sequential).unwrap();
        let grid = SphereGrid::new(48, 96).unwrap();
        let s = crate::body::spectrum(&body, 8, &grid, &Sequential).unwrap();
        for n in [2u32, 4] {
            let v = o.pair_integral(&EvenKernel::legendre(n).unwrap()).unwrap();
            let expect = 4.0 * PI / (2 * n + 1) as f64 * s.norm_sq(n as usize);
            assert!(
                (v - expect).abs() <= 1e-8 * expect.abs().max(1e-6),
                "n={n}: {v} vs {expect}"
            );
        }
        let m = grid.integrate(|u| body.support(u));
        assert!((o.pair_integral(&EvenKernel::one()).unwrap() - m * m).abs() < 1e-9 * m * m);
    }

    #[test]
    fn series_on_ball() {
        let ball = ConvexBody3::new(BodySpec::Ball { r: 1.0 }).unwrap();
        let grid = SphereGrid::new(24, 48).unwrap();
        let s = crate::body::spectrum(&ball, 10, &grid, &Sequential).unwrap();
        let v = pair_integral_series(&s, &EvenKernel::sqrt(), 10).unwrap();
        assert!((v.value - 4.0 * PI * PI * PI).abs() < 1e-9);
        assert!(v.tail_bound < 1e-20);
        assert!(matches!(
            pair_integral_series(&s, &EvenKernel::one(), 12),
            Err(Error::InsufficientResolution { .. })
        ));
    }
}
