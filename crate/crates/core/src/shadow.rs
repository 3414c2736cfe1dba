//! Shadows of a body on planes u^⊥ and planar visual angles.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::body::ConvexBody3;
use crate::fourier::TrigSeries;
use crate::math::{brent_root, cross, dot, frame, golden_min, norm, Vec3};
use crate::{Error, Result};

/// Modes below this fraction of max h are truncated from the interpolant.
const DROP_BELOW: f64 = 1e-15;
const ROOT_TOL: f64 = 1e-13;
const MIN_ARC: f64 = 1e-9;
const SUBDIVIDE: usize = 16;

/// h(θ) = p(cos θ e₁ + sin θ e₂) on u^⊥, with its trigonometric interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowProfile {
    direction: Vec3,
    e1: Vec3,
    e2: Vec3,
    n_theta: usize,
    series: TrigSeries,
    /// Interpolant values at θ_j = 2πj/N, consistent with off-grid evaluation.
    grid_h: Vec<f64>,
    /// (cos θ_j, sin θ_j) on the sampling grid.
    grid_trig: Vec<(f64, f64)>,
}

impl ShadowProfile {
    /// Shadow in the default frame of `u`.
    pub fn new(body: &ConvexBody3, u: Vec3, n_theta: usize) -> Result<Self> {
        let (e1, e2) = frame(u);
        Self::with_frame(body, u, e1, e2, n_theta)
    }

    /// Shadow in a caller-supplied orthonormal frame of u^⊥.
    pub fn with_frame(
        body: &ConvexBody3,
        u: Vec3,
        e1: Vec3,
        e2: Vec3,
        n_theta: usize,
    ) -> Result<Self> {
        if n_theta < 64 || !n_theta.is_power_of_two() {
            return Err(Error::InvalidArgument(alloc::format!(
                "shadow sampling must be a power of two ≥ 64, got {n_theta}"
            )));
        }
        if (norm(u) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(
                "shadow direction must be a unit vector".into(),
            ));
        }
        let ortho = dot(e1, u)
            .abs()
            .max(dot(e2, u).abs())
            .max(dot(e1, e2).abs());
        if ortho > 1e-12 || (norm(e1) - 1.0).abs() > 1e-12 || (norm(e2) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(
                "shadow frame must be orthonormal in u^⊥".into(),
            ));
        }
        let samples: Vec<f64> = (0..n_theta)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n_theta as f64;
                let (c, s) = (libm::cos(t), libm::sin(t));
                body.support([
                    c * e1[0] + s * e2[0],
                    c * e1[1] + s * e2[1],
                    c * e1[2] + s * e2[2],
                ])
            })
            .collect();
        for (j, &h) in samples.iter().enumerate() {
            if !(h > 0.0) {
                let t = 2.0 * PI * j as f64 / n_theta as f64;
                let (c, s) = (libm::cos(t), libm::sin(t));
                let d = [
                    c * e1[0] + s * e2[0],
                    c * e1[1] + s * e2[1],
                    c * e1[2] + s * e2[2],
                ];
                return Err(Error::ConvexityViolation {
                    direction: d,
                    value: h,
                });
            }
        }
        let series = TrigSeries::from_samples(&samples, DROP_BELOW)?;
        let grid_h = (0..n_theta)
            .map(|j| series.eval(2.0 * PI * j as f64 / n_theta as f64))
            .collect();
        let grid_trig = (0..n_theta)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n_theta as f64;
                (libm::cos(t), libm::sin(t))
            })
            .collect();
        Ok(ShadowProfile {
            direction: u,
            e1,
            e2,
            n_theta,
            series,
            grid_h,
            grid_trig,
        })
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn frame(&self) -> (Vec3, Vec3) {
        (self.e1, self.e2)
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn series(&self) -> &TrigSeries {
        &self.series
    }

    /// Maps a point of the plane u^⊥ to frame coordinates.
    pub fn coordinates(&self, x: Vec3) -> [f64; 2] {
        [dot(x, self.e1), dot(x, self.e2)]
    }

    pub fn h(&self, theta: f64) -> f64 {
        self.series.eval(theta)
    }

    /// Minimum of h + h″ over the sampling grid.
    pub fn min_curvature_radius(&self) -> f64 {
        (0..self.n_theta)
            .map(|j| {
                let (v, _, d2) = self.series.eval_d2(self.theta(j));
                v + d2
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// L_u = ∫₀^{2π} h dθ.
    pub fn perimeter(&self) -> f64 {
        2.0 * PI * self.series.mean()
    }

    /// A_u = ½∫(h² − h′²) dθ.
    pub fn area(&self) -> f64 {
        0.5 * (self.series.energy() - self.series.derivative_energy())
    }

    /// Steiner point (1/π)∫ h(θ) n(θ) dθ of the shadow.
    pub fn steiner_point(&self) -> [f64; 2] {
        let a1 = self.series.cos.get(1).copied().unwrap_or(0.0);
        let b1 = self.series.sin.get(1).copied().unwrap_or(0.0);
        [a1, b1]
    }

    fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    fn gap(&self, p: [f64; 2], theta: f64) -> f64 {
        p[0] * libm::cos(theta) + p[1] * libm::sin(theta) - self.series.eval(theta)
    }

    /// Visual angle ω ∈ (0, π) of the shadow from the exterior point `p`
    /// (frame coordinates): ω = π − |{θ : ⟨p, n(θ)⟩ > h(θ)}|.
    pub fn visual_angle(&self, p: [f64; 2]) -> Result<f64> {
        let n = self.n_theta;
        let g: Vec<f64> = self
            .grid_trig
            .iter()
            .zip(&self.grid_h)
            .map(|(&(c, s), &h)| p[0] * c + p[1] * s - h)
            .collect();
        let (jmax, gmax) =
            g.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc },
            );
        let dt = 2.0 * PI / n as f64;
        let (left, right) = if gmax > 0.0 {
            // Walk outwards over grid samples to the first non-positive ones.
            let mut l = 1;
            while g[(jmax + n - l) % n] > 0.0 {
                l += 1;
                if l >= n {
                    return Err(Error::InvalidArgument(
                        "gap positive on the whole circle".into(),
                    ));
                }
            }
            let mut r = 1;
            while g[(jmax + r) % n] > 0.0 {
                r += 1;
                if r >= n {
                    return Err(Error::InvalidArgument(
                        "gap positive on the whole circle".into(),
                    ));
                }
            }
            let t0 = self.theta(jmax);
            let lo = t0 - l as f64 * dt;
            let hi = t0 + r as f64 * dt;
            let a = brent_root(|t| self.gap(p, t), lo, lo + dt, ROOT_TOL);
            let b = brent_root(|t| self.gap(p, t), hi - dt, hi, ROOT_TOL);
            (a, b)
        } else {
            self.arc_inside_cell(p, self.theta(jmax), dt)?
        };
        let arc = right - left;
        if arc < MIN_ARC {
            return Err(Error::TangencyDegenerate);
        }
        Ok(PI - arc)
    }

    /// Locates a positive arc that falls between grid samples around `t0`.
    fn arc_inside_cell(&self, p: [f64; 2], t0: f64, dt: f64) -> Result<(f64, f64)> {
        let m = 2 * SUBDIVIDE;
        let sub = dt / SUBDIVIDE as f64;
        let start = t0 - dt;
        let vals: Vec<f64> = (0..=m)
            .map(|k| self.gap(p, start + sub * k as f64))
            .collect();
        let (kmax, vmax) = vals
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc },
            );
        let (anchor, value) = if vmax > 0.0 {
            (start + sub * kmax as f64, vmax)
        } else {
            let lo = start + sub * kmax.saturating_sub(1) as f64;
            let hi = start + sub * (kmax + 1).min(m) as f64;
            let (t, neg) = golden_min(|t| -self.gap(p, t), lo, hi, 1e-13);
            (t, -neg)
        };
        if value <= 0.0 {
            return if value > -1e-13 {
                Err(Error::TangencyDegenerate)
            } else {
                Err(Error::PointInside)
            };
        }
        // The neighbouring grid samples are non-positive, so the roots lie within one cell of t0.
        let lo = brent_root(|t| self.gap(p, t), t0 - dt, anchor, ROOT_TOL);
        let hi = brent_root(|t| self.gap(p, t), anchor, t0 + dt, ROOT_TOL);
        Ok((lo, hi))
    }

    /// Distance from `c` (inside the shadow) to the boundary along direction ψ.
    pub fn boundary_radius(&self, c: [f64; 2], psi: f64) -> f64 {
        let ratio = |t: f64| {
            let cosd = libm::cos(t - psi);
            (self.series.eval(t) - c[0] * libm::cos(t) - c[1] * libm::sin(t)) / cosd
        };
        let n = self.n_theta;
        let mut best = (f64::INFINITY, psi);
        for j in 0..n {
            let t = psi - PI / 2.0 + (j as f64 + 0.5) * (PI / n as f64);
            let v = ratio(t);
            if v < best.0 {
                best = (v, t);
            }
        }
        let half = PI / n as f64;
        let lo = (best.1 - half).max(psi - PI / 2.0 + 1e-12);
        let hi = (best.1 + half).min(psi + PI / 2.0 - 1e-12);
        let (_, v) = golden_min(ratio, lo, hi, 1e-14);
        v.min(best.0)
    }
}

/// Unit normal of the plane spanned by a frame; used to check handedness.
pub fn frame_normal(e1: Vec3, e2: Vec3) -> Vec3 {
    cross(e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::BodySpec;

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

    #[test]
    fn rejects_bad_sizes() {
        assert!(ShadowProfile::new(&ball(), [0.0, 0.0, 1.0], 48).is_err());
        assert!(ShadowProfile::new(&ball(), [0.0, 0.0, 1.0], 96).is_err());
    }

    #[test]
    fn ball_shadow() {
        let s = ShadowProfile::new(&ball(), [0.6, 0.0, 0.8], 64).unwrap();
        assert!((s.h(0.3) - 1.0).abs() < 1e-15);
        assert!((s.perimeter() - 2.0 * PI).abs() < 1e-14);
        assert!((s.area() - PI).abs() < 1e-14);
    }

    #[test]
    fn ellipsoid_shadows() {
        let s = ShadowProfile::new(&ellipsoid(), [0.0, 0.0, 1.0], 128).unwrap();
        assert!((s.h(1.234) - 1.0).abs() < 1e-14);
        assert!((s.area() - PI).abs() < 1e-13);
        let s = ShadowProfile::with_frame(
            &ellipsoid(),
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            128,
        )
        .unwrap();
        for &t in &[0.0, 0.4, 1.9, 4.0] {
            let expect =
                libm::sqrt(libm::cos(t) * libm::cos(t) + 2.25 * libm::sin(t) * libm::sin(t));
            assert!((s.h(t) - expect).abs() < 1e-12, "t={t}");
        }
        assert!((s.area() - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn default_frame_is_right_handed() {
        let u = [0.2, -0.4, 0.7];
        let u = crate::math::normalize(u);
        let s = ShadowProfile::new(&ball(), u, 64).unwrap();
        let (e1, e2) = s.frame();
        assert!((dot(frame_normal(e1, e2), u) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ball_visual_angles() {
        let s = ShadowProfile::new(&ball(), [0.0, 0.0, 1.0], 64).unwrap();
        let w = s.visual_angle([2.0, 0.0]).unwrap();
        assert!((w - PI / 3.0).abs() < 1e-12);
        let mut last = PI;
        for d in [1.01, 1.5, 3.0, 10.0, 100.0, 1e4] {
            let w = s.visual_angle([0.0, -d]).unwrap();
            assert!((w - 2.0 * libm::asin(1.0 / d)).abs() < 1e-10, "d={d}");
            assert!(w < last);
            last = w;
        }
        assert_eq!(s.visual_angle([0.3, 0.2]), Err(Error::PointInside));
    }

    #[test]
    fn visual_angle_tiny() {
        let s = ShadowProfile::new(&ball(), [0.0, 0.0, 1.0], 64).unwrap();
        let d = 1e6;
        let w = s.visual_angle([d * 0.6, d * 0.8]).unwrap();
        assert!((w - 2.0 * libm::asin(1.0 / d)).abs() < 1e-10);
    }

    #[test]
    fn boundary_radius_of_disk_and_ellipse() {
        let s = ShadowProfile::new(&ball(), [0.0, 0.0, 1.0], 64).unwrap();
        assert!((s.boundary_radius([0.0, 0.0], 0.7) - 1.0).abs() < 1e-12);
        assert!((s.boundary_radius([0.5, 0.0], 0.0) - 0.5).abs() < 1e-10);
        let e = ShadowProfile::with_frame(
            &ellipsoid(),
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            128,
        )
        .unwrap();
        assert!((e.boundary_radius([0.0, 0.0], PI / 2.0) - 1.5).abs() < 1e-10);
        assert!((e.boundary_radius([0.0, 0.0], 0.0) - 1.0).abs() < 1e-10);
    }
}
