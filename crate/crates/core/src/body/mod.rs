//! Smooth convex bodies given by their support functions.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::fourier::TrigSeries;
use crate::harmonics::{basis_value, project, HarmonicSpectrum, Parity, SphereGrid};
use crate::math::{dot, fibonacci_directions, frame, mat_t_vec, Mat3, Vec3};
use crate::shadow::ShadowProfile;
use crate::specfun::adaptive_integrate;
use crate::{Error, NodeMap, Result};

/// One term `coeff · Y_{n,j}^{parity}` of a support function.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShTerm {
    pub n: usize,
    pub j: usize,
    pub parity: Parity,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum BodySpec {
    Ball {
        r: f64,
    },
    Ellipsoid {
        a: f64,
        b: f64,
        c: f64,
    },
    /// p = Σ coeff · basis function.
    ShBody {
        terms: Vec<ShTerm>,
    },
    /// p = r + ε·Y with Y the basis function of odd degree `degree` and order `order`.
    ConstantWidth {
        r: f64,
        eps: f64,
        degree: usize,
        order: usize,
    },
}

impl BodySpec {
    pub fn label(&self) -> String {
        match self {
            BodySpec::Ball { r } => alloc::format!("ball:{r}"),
            BodySpec::Ellipsoid { a, b, c } => alloc::format!("ellipsoid:{a},{b},{c}"),
            BodySpec::ShBody { terms } => alloc::format!("sh_body:{}", terms.len()),
            BodySpec::ConstantWidth {
                r,
                eps,
                degree,
                order,
            } => {
                if *order == 0 {
                    alloc::format!("cw:{r},{eps},{degree}")
                } else {
                    alloc::format!("cw:{r},{eps},{degree},{order}")
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(alloc::format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        match self {
            BodySpec::Ball { r } => positive("radius", *r),
            BodySpec::Ellipsoid { a, b, c } => {
                positive("semi-axis a", *a)?;
                positive("semi-axis b", *b)?;
                positive("semi-axis c", *c)
            }
            BodySpec::ShBody { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidArgument(
                        "sh_body needs at least one term".into(),
                    ));
                }
                for t in terms {
                    if t.j > t.n || (t.j == 0 && t.parity == Parity::Sin) || !t.coeff.is_finite() {
                        return Err(Error::InvalidArgument(alloc::format!(
                            "invalid sh_body term {t:?}"
                        )));
                    }
                }
                Ok(())
            }
            BodySpec::ConstantWidth {
                r,
                eps,
                degree,
                order,
            } => {
                positive("radius", *r)?;
                if !eps.is_finite() || *eps < 0.0 {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "epsilon must be nonnegative, got {eps}"
                    )));
                }
                if degree % 2 == 0 || order > degree {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "constant-width perturbation needs an odd degree and order ≤ degree, got {degree}, {order}"
                    )));
                }
                Ok(())
            }
        }
    }

    fn base_support(&self, u: Vec3) -> f64 {
        match self {
            BodySpec::Ball { r } => *r,
            BodySpec::Ellipsoid { a, b, c } => {
                libm::sqrt(a * a * u[0] * u[0] + b * b * u[1] * u[1] + c * c * u[2] * u[2])
            }
            BodySpec::ShBody { terms } => terms
                .iter()
                .map(|t| t.coeff * basis_value(t.n, t.j, t.parity, u))
                .sum(),
            BodySpec::ConstantWidth {
                r,
                eps,
                degree,
                order,
            } => r + eps * basis_value(*degree, *order, Parity::Cos, u),
        }
    }
}

/// Analytically known invariants.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExactInvariants {
    /// M = ∫ p dσ.
    pub mean_curvature: Option<f64>,
    /// Surface area.
    pub area: Option<f64>,
    /// Mean width 𝒲 = M/2π.
    pub mean_width: Option<f64>,
    /// True when every present value is a closed form rather than a 1D-quadrature reference.
    pub closed_form: bool,
}

/// A convex body: `p(u) = s · p₀(Rᵀu) + ⟨c, u⟩` for a catalog support function p₀.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody3 {
    spec: BodySpec,
    label: String,
    rotation: Option<Mat3>,
    translation: Vec3,
    scale: f64,
    bounding_radius: f64,
    exact: Option<ExactInvariants>,
}

/// Great circles and samples per circle used by the convexity check.
pub const CONVEXITY_CIRCLES: usize = 200;
pub const CONVEXITY_SAMPLES: usize = 256;
pub const CONVEXITY_TOL: f64 = -1e-8;

impl ConvexBody3 {
    /// Builds and validates a catalog body.
    pub fn new(spec: BodySpec) -> Result<Self> {
        spec.validate()?;
        let label = spec.label();
        let exact = exact_invariants(&spec)?;
        Self::assemble(spec, label, None, [0.0; 3], 1.0, exact)
    }

    fn assemble(
        spec: BodySpec,
        label: String,
        rotation: Option<Mat3>,
        translation: Vec3,
        scale: f64,
        exact: Option<ExactInvariants>,
    ) -> Result<Self> {
        let mut body = ConvexBody3 {
            spec,
            label,
            rotation,
            translation,
            scale,
            bounding_radius: 0.0,
            exact,
        };
        body.check_convexity()?;
        body.bounding_radius = fibonacci_directions(4096)
            .into_iter()
            .map(|u| body.support(u))
            .fold(0.0, f64::max);
        Ok(body)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The body rotated by `r` (applied after any existing rotation).
    pub fn rotated(&self, r: &Mat3) -> Result<Self> {
        let rot = match &self.rotation {
            Some(old) => crate::math::mat_mul(r, old),
            None => *r,
        };
        let t = crate::math::mat_vec(r, self.translation);
        Self::assemble(
            self.spec.clone(),
            self.label.clone(),
            Some(rot),
            t,
            self.scale,
            self.exact,
        )
    }

    /// The body translated by `c`; its support function gains ⟨c, u⟩.
    pub fn translated(&self, c: Vec3) -> Result<Self> {
        let t = [
            self.translation[0] + c[0],
            self.translation[1] + c[1],
            self.translation[2] + c[2],
        ];
        Self::assemble(
            self.spec.clone(),
            self.label.clone(),
            self.rotation,
            t,
            self.scale,
            self.exact,
        )
    }

    /// The body scaled by `s > 0` about the origin.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!(
                "scale must be positive, got {s}"
            )));
        }
        let t = [
            self.translation[0] * s,
            self.translation[1] * s,
            self.translation[2] * s,
        ];
        let exact = self.exact.map(|e| ExactInvariants {
            mean_curvature: e.mean_curvature.map(|m| m * s),
            area: e.area.map(|f| f * s * s),
            mean_width: e.mean_width.map(|w| w * s),
            closed_form: e.closed_form,
        });
        Self::assemble(
            self.spec.clone(),
            self.label.clone(),
            self.rotation,
            t,
            self.scale * s,
            exact,
        )
    }

    pub fn spec(&self) -> &BodySpec {
        &self.spec
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// ρ = max p over a dense direction sample.
    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    pub fn exact(&self) -> Option<&ExactInvariants> {
        self.exact.as_ref()
    }

    pub fn support(&self, u: Vec3) -> f64 {
        let local = match &self.rotation {
            Some(r) => mat_t_vec(r, u),
            None => u,
        };
        self.scale * self.spec.base_support(local) + dot(self.translation, u)
    }

    pub fn width(&self, u: Vec3) -> f64 {
        self.support(u) + self.support([-u[0], -u[1], -u[2]])
    }

    /// Support values at the grid nodes.
    pub fn sample(&self, grid: &SphereGrid) -> Vec<f64> {
        grid.nodes.iter().map(|&u| self.support(u)).collect()
    }

    /// Checks p > 0 and h + h″ ≥ −1e−8 along a deterministic family of great circles.
    pub fn check_convexity(&self) -> Result<()> {
        let n = CONVEXITY_SAMPLES;
        for w in fibonacci_directions(CONVEXITY_CIRCLES) {
            let (e1, e2) = frame(w);
            let dirs: Vec<Vec3> = (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    let (c, s) = (libm::cos(t), libm::sin(t));
                    [
                        c * e1[0] + s * e2[0],
                        c * e1[1] + s * e2[1],
                        c * e1[2] + s * e2[2],
                    ]
                })
                .collect();
            let h: Vec<f64> = dirs.iter().map(|&u| self.support(u)).collect();
            for (k, &v) in h.iter().enumerate() {
                if !(v > 0.0) {
                    return Err(Error::ConvexityViolation {
                        direction: dirs[k],
                        value: v,
                    });
                }
            }
            let series = TrigSeries::from_samples(&h, 0.0)?;
            for (k, &u) in dirs.iter().enumerate() {
                let t = 2.0 * PI * k as f64 / n as f64;
                let (v, _, d2) = series.eval_d2(t);
                let r = v + d2;
                if r < CONVEXITY_TOL {
                    return Err(Error::ConvexityViolation {
                        direction: u,
                        value: r,
                    });
                }
            }
        }
        Ok(())
    }
}

/// M = ∫ p dσ and 𝒲 = M/2π.
pub fn mean_curvature_m(body: &ConvexBody3, grid: &SphereGrid) -> (f64, f64) {
    let m = grid.integrate(|u| body.support(u));
    (m, m / (2.0 * PI))
}

/// F = (1/π) ∫ A_u dσ(u), A_u the shadow area.
pub fn surface_area_f(
    body: &ConvexBody3,
    grid: &SphereGrid,
    n_theta: usize,
    map: &impl NodeMap,
) -> Result<f64> {
    let areas: Vec<Result<f64>> = map.map(grid.len(), |k| {
        ShadowProfile::new(body, grid.nodes[k], n_theta).map(|s| s.area())
    });
    let mut vals = Vec::with_capacity(grid.len());
    for (a, w) in areas.into_iter().zip(&grid.weights) {
        vals.push(a? * w);
    }
    Ok(crate::math::pairwise_sum(&vals) / PI)
}

/// True iff ‖π_n‖² ≤ tol for every even n in 2..=max_degree.
pub fn is_constant_width(spectrum: &HarmonicSpectrum, tol: f64) -> bool {
    spectrum
        .norms_sq
        .iter()
        .enumerate()
        .skip(2)
        .step_by(2)
        .all(|(_, &v)| v <= tol)
}

/// Spectrum of the body's support function.
pub fn spectrum(
    body: &ConvexBody3,
    max_degree: usize,
    grid: &SphereGrid,
    map: &impl NodeMap,
) -> Result<HarmonicSpectrum> {
    project(&body.sample(grid), max_degree, grid, map)
}

fn exact_invariants(spec: &BodySpec) -> Result<Option<ExactInvariants>> {
    Ok(match spec {
        BodySpec::Ball { r } => Some(ExactInvariants {
            mean_curvature: Some(4.0 * PI * r),
            area: Some(4.0 * PI * r * r),
            mean_width: Some(2.0 * r),
            closed_form: true,
        }),
        BodySpec::ConstantWidth { r, .. } => Some(ExactInvariants {
            mean_curvature: Some(4.0 * PI * r),
            area: None,
            mean_width: Some(2.0 * r),
            closed_form: true,
        }),
        BodySpec::Ellipsoid { a, b, c } => {
            // Spheroids only: the two equal axes are `eq`, the third `ax`.
            let (eq, ax) = if a == b {
                (*a, *c)
            } else if a == c {
                (*a, *b)
            } else if b == c {
                (*b, *a)
            } else {
                return Ok(None);
            };
            if eq == ax {
                return exact_invariants(&BodySpec::Ball { r: eq });
            }
            let m = 2.0
                * PI
                * adaptive_integrate(
                    |x| libm::sqrt(eq * eq * (1.0 - x * x) + ax * ax * x * x),
                    -1.0,
                    1.0,
                    1e-14,
                )?;
            let area = if ax > eq {
                let e = libm::sqrt(1.0 - eq * eq / (ax * ax));
                2.0 * PI * eq * eq * (1.0 + ax / (eq * e) * libm::asin(e))
            } else {
                let e = libm::sqrt(1.0 - ax * ax / (eq * eq));
                2.0 * PI * eq * eq * (1.0 + (1.0 - e * e) / e * libm::atanh(e))
            };
            Some(ExactInvariants {
                mean_curvature: Some(m),
                area: Some(area),
                mean_width: Some(m / (2.0 * PI)),
                closed_form: false,
            })
        }
        BodySpec::ShBody { .. } => None,
    })
}
