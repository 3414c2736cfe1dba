//! Integrals over the lines that miss the body, dG = ½ dP dσ(u) with P in u^⊥.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::profile::{require_decay, VisualAngleProfile};
use crate::body::ConvexBody3;
use crate::harmonics::SphereGrid;
use crate::math::pairwise_sum;
use crate::shadow::ShadowProfile;
use crate::specfun::{gauss_rule, RuleKind};
use crate::{Error, NodeMap, Result};

/// Resolution of the tangent-pair route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LineParams {
    pub n_colat: usize,
    pub n_long: usize,
    /// Samples of each shadow's support function.
    pub n_theta: usize,
    /// Trapezoid nodes in the first tangent direction.
    pub n_tangent: usize,
    /// Gauss nodes in ω on (0, π).
    pub n_omega: usize,
}

impl Default for LineParams {
    fn default() -> Self {
        LineParams {
            n_colat: 32,
            n_long: 64,
            n_theta: 128,
            n_tangent: 128,
            n_omega: 96,
        }
    }
}

/// For every direction u, the exterior of the shadow K_u is parametrized by the
/// outer normals θ₁ < θ₂ = θ₁ + π − ω of the two tangents through P, with
/// dP = |t₁t₂|/sin ω dθ₁ dω where t₁, t₂ are the tangent lengths.
///
/// Summing over u and θ₁ leaves a density in ω alone, so after one survey
/// every ∫_{G∩K=∅} Φ(ω) dG is a dot product with Φ at the ω nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSurvey {
    params: LineParams,
    omega: Vec<f64>,
    density: Vec<f64>,
    area_integral: f64,
    perimeter_integral: f64,
    perimeter_sq_integral: f64,
}

struct Direction {
    density: Vec<f64>,
    area: f64,
    perimeter: f64,
}

impl LineSurvey {
    pub fn new(body: &ConvexBody3, params: LineParams, map: &impl NodeMap) -> Result<Self> {
        if params.n_tangent < 8 || params.n_omega < 2 {
            return Err(Error::InvalidArgument(
                "line survey needs ≥ 8 tangent and ≥ 2 ω nodes".into(),
            ));
        }
        let grid = half_sphere_grid(params.n_colat, params.n_long)?;
        let rule = gauss_rule(RuleKind::GaussLegendre, params.n_omega)?;
        let (omega, w_omega): (Vec<f64>, Vec<f64>) = rule.mapped(0.0, PI).unzip();
        let dirs: Vec<Result<Direction>> = map.map(grid.half.len(), |i| {
            let u = grid.grid.nodes[grid.half[i]];
            survey_direction(body, u, &params, &omega)
        });
        let mut per_u = Vec::with_capacity(dirs.len());
        for d in dirs {
            per_u.push(d?);
        }
        let weights: Vec<f64> = grid
            .half
            .iter()
            .map(|&k| 2.0 * grid.grid.weights[k])
            .collect();
        let density = (0..omega.len())
            .map(|k| {
                let col: Vec<f64> = per_u
                    .iter()
                    .zip(&weights)
                    .map(|(d, w)| w * d.density[k])
                    .collect();
                0.5 * w_omega[k] * pairwise_sum(&col)
            })
            .collect();
        let sum = |g: &dyn Fn(&Direction) -> f64| {
            let v: Vec<f64> = per_u.iter().zip(&weights).map(|(d, w)| w * g(d)).collect();
            pairwise_sum(&v)
        };
        let area_integral = sum(&|d| d.area);
        let perimeter_integral = sum(&|d| d.perimeter);
        let perimeter_sq_integral = sum(&|d| d.perimeter * d.perimeter);
        Ok(LineSurvey {
            params,
            omega,
            density,
            area_integral,
            perimeter_integral,
            perimeter_sq_integral,
        })
    }

    pub fn params(&self) -> LineParams {
        self.params
    }

    pub fn omega_nodes(&self) -> &[f64] {
        &self.omega
    }

    /// Weights D_k with ∫_{G∩K=∅} Φ dG ≈ Σ D_k Φ(ω_k).
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// F = (1/π) ∫ A_u dσ(u).
    pub fn surface_area(&self) -> f64 {
        self.area_integral / PI
    }

    /// Measure of the lines meeting the body, ½ ∫ A_u dσ(u).
    pub fn line_measure_meeting(&self) -> f64 {
        0.5 * self.area_integral
    }

    /// ∫ L_u dσ(u) over shadow perimeters.
    pub fn perimeter_integral(&self) -> f64 {
        self.perimeter_integral
    }

    /// ∫ L_u² dσ(u).
    pub fn perimeter_square_integral(&self) -> f64 {
        self.perimeter_sq_integral
    }

    /// ∫_{G∩K=∅} Φ(ω(G)) dG. Φ must vanish faster than ω^{2.5} at zero.
    pub fn line_integral_outside(&self, phi: &dyn Fn(f64) -> f64) -> Result<f64> {
        require_decay(phi)?;
        let terms: Vec<f64> = self
            .omega
            .iter()
            .zip(&self.density)
            .map(|(&w, &d)| d * phi(w))
            .collect();
        let v = pairwise_sum(&terms);
        if !v.is_finite() {
            return Err(Error::NonFinite("line integral"));
        }
        Ok(v)
    }

    /// πH(π)F + 2∫_{G∩K=∅} H(ω) dG. When H(π) = 0 the surface area is not used.
    pub fn pair_integral_via_lines(&self, profile: &VisualAngleProfile) -> Result<f64> {
        let outside = 2.0 * self.line_integral_outside(&|w| profile.eval(w))?;
        if profile.h_pi() == 0.0 {
            Ok(outside)
        } else {
            Ok(PI * profile.h_pi() * self.surface_area() + outside)
        }
    }
}

fn survey_direction(
    body: &ConvexBody3,
    u: [f64; 3],
    params: &LineParams,
    omega: &[f64],
) -> Result<Direction> {
    let shadow = ShadowProfile::new(body, u, params.n_theta)?;
    let series = shadow.series();
    let n = params.n_tangent;
    let dt = 2.0 * PI / n as f64;
    let first: Vec<(f64, f64, f64)> = (0..n)
        .map(|j| {
            let t = dt * j as f64;
            let (h, hp) = series.eval_d1(t);
            (t, h, hp)
        })
        .collect();
    let mut density = Vec::with_capacity(omega.len());
    let mut row = alloc::vec![0.0; n];
    for &w in omega {
        let delta = PI - w;
        let (sd, cd) = (libm::sin(delta), libm::cos(delta));
        for (acc, &(t, h1, h1p)) in row.iter_mut().zip(&first) {
            let (h2, h2p) = series.eval_d1(t + delta);
            let t1 = (h2 - h1 * cd) / sd - h1p;
            let t2 = (h2 * cd - h1) / sd - h2p;
            *acc = (t1 * t2).abs();
        }
        density.push(pairwise_sum(&row) * dt / sd);
    }
    Ok(Direction {
        density,
        area: shadow.area(),
        perimeter: shadow.perimeter(),
    })
}

pub(crate) struct HalfGrid {
    pub grid: SphereGrid,
    /// One node of each antipodal pair.
    pub half: Vec<usize>,
}

/// Both routes only depend on the unoriented direction of u, so each antipodal
/// pair of grid nodes is evaluated once with doubled weight.
pub(crate) fn half_sphere_grid(n_colat: usize, n_long: usize) -> Result<HalfGrid> {
    if n_long % 2 != 0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "line grids need an even longitude count, got {n_long}"
        )));
    }
    let grid = SphereGrid::new(n_colat, n_long)?;
    let half = (0..grid.len()).filter(|&k| grid.antipode(k) > k).collect();
    Ok(HalfGrid { grid, half })
}

/// Resolution of the polar route.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PolarParams {
    pub n_colat: usize,
    pub n_long: usize,
    pub n_theta: usize,
    pub n_annuli: usize,
    /// Gauss nodes per annulus.
    pub n_radial: usize,
    pub n_psi: usize,
    /// Truncation radius as a multiple of the bounding radius.
    pub r_cut: f64,
}

impl Default for PolarParams {
    fn default() -> Self {
        PolarParams {
            n_colat: 8,
            n_long: 16,
            n_theta: 128,
            n_annuli: 8,
            n_radial: 24,
            n_psi: 48,
            r_cut: 40.0,
        }
    }
}

/// A polar-route line integral and the analytic tail beyond the cut-off included in it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PolarValue {
    pub value: f64,
    pub tail: f64,
}

type Phi<'a> = &'a (dyn Fn(f64) -> f64 + Sync);

/// ∫_{G∩K=∅} Φ dG for several Φ at once, with P in polar coordinates about the
/// Steiner point of each shadow, logarithmic annuli out to `r_cut`·ρ and a
/// power-law tail fitted on the outermost annulus.
pub fn polar_line_integrals(
    body: &ConvexBody3,
    phis: &[Phi<'_>],
    params: PolarParams,
    map: &impl NodeMap,
) -> Result<Vec<PolarValue>> {
    for phi in phis {
        require_decay(*phi)?;
    }
    if params.n_annuli < 2 || params.n_radial < 2 || params.n_psi < 8 || !(params.r_cut > 2.0) {
        return Err(Error::InvalidArgument(
            "polar route needs ≥ 2 annuli, ≥ 2 radial nodes, ≥ 8 angles, r_cut > 2".into(),
        ));
    }
    let grid = half_sphere_grid(params.n_colat, params.n_long)?;
    let rule = gauss_rule(RuleKind::GaussLegendre, params.n_radial)?;
    let r_cut = params.r_cut * body.bounding_radius();
    let per_u: Vec<Result<Vec<(f64, f64)>>> = map.map(grid.half.len(), |i| {
        let u = grid.grid.nodes[grid.half[i]];
        polar_direction(body, u, phis, &params, &rule, r_cut)
    });
    let weights: Vec<f64> = grid
        .half
        .iter()
        .map(|&k| 2.0 * grid.grid.weights[k])
        .collect();
    let mut cols: Vec<Vec<(f64, f64)>> = (0..phis.len())
        .map(|_| Vec::with_capacity(weights.len()))
        .collect();
    for (vals, &w) in per_u.into_iter().zip(&weights) {
        for (col, (body_part, tail)) in cols.iter_mut().zip(vals?) {
            col.push((0.5 * w * (body_part + tail), 0.5 * w * tail));
        }
    }
    Ok(cols
        .into_iter()
        .map(|c| {
            let (v, t): (Vec<f64>, Vec<f64>) = c.into_iter().unzip();
            PolarValue {
                value: pairwise_sum(&v),
                tail: pairwise_sum(&t),
            }
        })
        .collect())
}

fn polar_direction(
    body: &ConvexBody3,
    u: [f64; 3],
    phis: &[Phi<'_>],
    params: &PolarParams,
    rule: &crate::QuadratureRule1D,
    r_cut: f64,
) -> Result<Vec<(f64, f64)>> {
    let shadow = ShadowProfile::new(body, u, params.n_theta)?;
    let c = shadow.steiner_point();
    let dpsi = 2.0 * PI / params.n_psi as f64;
    let omega_at = |psi: f64, r: f64| -> Result<Option<f64>> {
        let p = [c[0] + r * libm::cos(psi), c[1] + r * libm::sin(psi)];
        match shadow.visual_angle(p) {
            Ok(w) => Ok(Some(w)),
            Err(Error::TangencyDegenerate) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut sums: Vec<Vec<f64>> = (0..phis.len()).map(|_| Vec::new()).collect();
    for j in 0..params.n_psi {
        let psi = dpsi * j as f64;
        let r0 = shadow.boundary_radius(c, psi);
        if !(r0 > 0.0 && r0 < r_cut) {
            return Err(Error::InvalidArgument(
                "shadow boundary beyond the polar cut-off".into(),
            ));
        }
        let ratio = libm::log(r_cut / r0) / params.n_annuli as f64;
        let edge = |i: usize| r0 * libm::exp(ratio * i as f64);
        // First annulus: r = r0 + s², which absorbs the square-root behaviour of ω at the boundary.
        let s_max = libm::sqrt(edge(1) - r0);
        for (s, w) in rule.mapped(0.0, s_max) {
            let r = r0 + s * s;
            if let Some(om) = omega_at(psi, r)? {
                let jac = w * 2.0 * s * r * dpsi;
                for (acc, phi) in sums.iter_mut().zip(phis) {
                    acc.push(jac * phi(om));
                }
            }
        }
        for i in 1..params.n_annuli {
            let (a, b) = (libm::log(edge(i)), libm::log(edge(i + 1)));
            for (x, w) in rule.mapped(a, b) {
                let r = libm::exp(x);
                if let Some(om) = omega_at(psi, r)? {
                    let jac = w * r * r * dpsi;
                    for (acc, phi) in sums.iter_mut().zip(phis) {
                        acc.push(jac * phi(om));
                    }
                }
            }
        }
    }
    let ring = |r: f64| -> Result<Vec<f64>> {
        let mut per_phi: Vec<Vec<f64>> = (0..phis.len())
            .map(|_| Vec::with_capacity(params.n_psi))
            .collect();
        for j in 0..params.n_psi {
            let psi = dpsi * j as f64;
            let om = omega_at(psi, r)?.unwrap_or(0.0);
            for (acc, phi) in per_phi.iter_mut().zip(phis) {
                acc.push(dpsi * if om > 0.0 { phi(om) } else { 0.0 });
            }
        }
        Ok(per_phi.iter().map(|v| pairwise_sum(v)).collect())
    };
    let (g1, g2, g3) = (ring(0.25 * r_cut)?, ring(0.5 * r_cut)?, ring(r_cut)?);
    let mut out = Vec::with_capacity(phis.len());
    for (k, s) in sums.iter().enumerate() {
        let tail = fit_tail(g1[k], g2[k], g3[k], r_cut)?;
        out.push((pairwise_sum(s), tail));
    }
    Ok(out)
}

/// ∫_R^∞ g(r) r dr for g ≈ c r^{−q}, fitted through g at R/4, R/2 and R.
fn fit_tail(g1: f64, g2: f64, g3: f64, r: f64) -> Result<f64> {
    if g3 == 0.0 && g2 == 0.0 {
        return Ok(0.0);
    }
    let same_sign = (g1 > 0.0 && g2 > 0.0 && g3 > 0.0) || (g1 < 0.0 && g2 < 0.0 && g3 < 0.0);
    if !same_sign {
        return Err(Error::TailInstability("far-field integrand changes sign"));
    }
    if !(g1.abs() > g2.abs() && g2.abs() > g3.abs()) {
        return Err(Error::TailInstability(
            "far-field integrand is not decreasing",
        ));
    }
    let q = libm::log(g2 / g3) / libm::log(2.0);
    if !(q > 2.0) {
        return Err(Error::TailInstability(
            "fitted far-field decay is not integrable",
        ));
    }
    Ok(g3 * r * r / (q - 2.0))
}
