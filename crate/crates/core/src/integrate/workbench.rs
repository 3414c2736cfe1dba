use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::identities::{Diagnostic, IdentityId, IdentityReport, RouteValue};
use super::kernel::EvenKernel;
use super::lines::{LineParams, LineSurvey};
use super::oracle::{pair_integral_series, OracleParams, PairOracle, SeriesValue};
use super::profile::{sin_pow, VisualAngleProfile};
use crate::body::{is_constant_width, mean_curvature_m, spectrum, ConvexBody3};
use crate::harmonics::{HarmonicSpectrum, SphereGrid};
use crate::math::powi;
use crate::specfun::{
    a_coeff, alpha_coeff, beta_coeff, crofton_weight, lambda_coeff, mu_coeff, sine_kernel_weight,
    sinpow_leading,
};
use crate::{Error, NodeMap, Result};

/// Default pass threshold on rel_err.
pub const DEFAULT_TOLERANCE: f64 = 2e-3;
/// Threshold for the sin-power and Crofton-type identities.
pub const SERIES_TOLERANCE: f64 = 3e-3;
/// |I(f)| / M² allowed for kernels whose pair integral vanishes on constant-width bodies.
pub const VANISHING_TOLERANCE: f64 = 1e-4;
/// rel_err floor for identities whose sides are not expected to vanish.
pub const DEFAULT_FLOOR: f64 = 1e-12;
/// Relative size of the floor used for pair integrals, see [`Workbench::kernel_floor`].
pub const KERNEL_FLOOR: f64 = 1e-6;
/// Bound on the Crofton deficit series over M² on constant-width bodies.
pub const DEFICIT_LIMIT: f64 = 1e-6;
/// ‖π_n‖² bound below which the body counts as constant width.
pub const CONSTANT_WIDTH_TOL: f64 = 1e-10;

/// Resolutions of every route.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorkbenchParams {
    /// Grid for M and the spectrum.
    pub n_colat: usize,
    pub n_long: usize,
    /// Highest spectrum degree and series cut-off.
    pub n_max: usize,
    pub oracle: OracleParams,
    pub lines: LineParams,
}

impl Default for WorkbenchParams {
    fn default() -> Self {
        WorkbenchParams {
            n_colat: 64,
            n_long: 128,
            n_max: 20,
            oracle: OracleParams::default(),
            lines: LineParams::default(),
        }
    }
}

/// All route data for one body, computed once; identity reports are then cheap.
#[derive(Debug, Clone)]
pub struct Workbench {
    body: ConvexBody3,
    params: WorkbenchParams,
    m: f64,
    spectrum: HarmonicSpectrum,
    oracle: PairOracle,
    survey: LineSurvey,
}

impl Workbench {
    pub fn new(body: ConvexBody3, params: WorkbenchParams, map: &impl NodeMap) -> Result<Self> {
        let grid = SphereGrid::new(params.n_colat, params.n_long)?;
        let (m, _) = mean_curvature_m(&body, &grid);
        let spectrum = spectrum(&body, params.n_max, &grid, map)?;
        let oracle = PairOracle::new(&body, params.oracle, map)?;
        let survey = LineSurvey::new(&body, params.lines, map)?;
        Ok(Workbench {
            body,
            params,
            m,
            spectrum,
            oracle,
            survey,
        })
    }

    pub fn body(&self) -> &ConvexBody3 {
        &self.body
    }

    pub fn params(&self) -> WorkbenchParams {
        self.params
    }

    pub fn mean_curvature(&self) -> f64 {
        self.m
    }

    pub fn mean_width(&self) -> f64 {
        self.m / (2.0 * PI)
    }

    /// F from the shadow areas of the line survey.
    pub fn surface_area(&self) -> f64 {
        self.survey.surface_area()
    }

    pub fn spectrum(&self) -> &HarmonicSpectrum {
        &self.spectrum
    }

    pub fn oracle(&self) -> &PairOracle {
        &self.oracle
    }

    pub fn survey(&self) -> &LineSurvey {
        &self.survey
    }

    pub fn is_constant_width(&self) -> bool {
        is_constant_width(&self.spectrum, CONSTANT_WIDTH_TOL)
    }

    pub fn oracle_pair_integral(&self, f: &EvenKernel) -> Result<f64> {
        self.oracle.pair_integral(f)
    }

    pub fn series_pair_integral(&self, f: &EvenKernel) -> Result<SeriesValue> {
        pair_integral_series(&self.spectrum, f, self.params.n_max)
    }

    pub fn lines_pair_integral(&self, f: &EvenKernel) -> Result<f64> {
        self.survey
            .pair_integral_via_lines(&VisualAngleProfile::from_kernel(f)?)
    }

    pub fn line_integral(&self, phi: &dyn Fn(f64) -> f64) -> Result<f64> {
        self.survey.line_integral_outside(phi)
    }

    fn norm(&self, n: usize) -> f64 {
        self.spectrum.norm_sq(n)
    }

    /// Σ_{n=1}^{N/2} w(n) ‖π_{2n}‖².
    fn even_series(&self, w: impl Fn(u32) -> f64) -> f64 {
        let terms: Vec<f64> = (1..=self.params.n_max / 2)
            .map(|n| w(n as u32) * self.norm(2 * n))
            .collect();
        crate::math::pairwise_sum(&terms)
    }

    fn sinpow_line(&self, m: u32) -> Result<f64> {
        self.line_integral(&sin_pow(m))
    }

    /// rel_err floor for pair integrals of `f`: 1e−6 of the scale (|λ₀|/4π)M², with
    /// |λ₀| = 2π∫|f|, so that kernels whose integral vanishes are judged absolutely.
    pub fn kernel_floor(&self, f: &EvenKernel) -> Result<f64> {
        Ok(KERNEL_FLOOR * f.abs_lambda0()? / (4.0 * PI) * self.m * self.m)
    }

    pub fn report(&self, id: &IdentityId) -> Result<IdentityReport> {
        let m2 = self.m * self.m;
        let f_area = self.surface_area();
        let sin = libm::sin;
        let rv = |route: &str, value: f64| RouteValue {
            route: route.to_string(),
            value,
        };
        let kernel = |k: &str| EvenKernel::parse(k);
        let kernel_floor = |f: &EvenKernel| self.kernel_floor(f);
        let mut diagnostics = Vec::new();
        let (lhs, rhs, floor, tol) = match id {
            IdentityId::Blaschke => {
                let l = self.line_integral(&|w| w * w - sin(w) * sin(w))?;
                let rhs = alloc::vec![
                    rv("lines", PI * PI * PI * f_area / 4.0 + 0.5 * l),
                    rv("oracle", self.oracle_pair_integral(&EvenKernel::one())?),
                ];
                (
                    rv("mean_curvature", m2),
                    rhs,
                    DEFAULT_FLOOR,
                    DEFAULT_TOLERANCE,
                )
            }
            IdentityId::PairVsSeriesVsLines(k) => {
                let f = kernel(k)?;
                let series = self.series_pair_integral(&f)?;
                diagnostics.push(info("series_tail_bound", series.tail_bound));
                let rhs = alloc::vec![
                    rv("series", series.value),
                    rv("lines", self.lines_pair_integral(&f)?)
                ];
                (
                    rv("oracle", self.oracle_pair_integral(&f)?),
                    rhs,
                    kernel_floor(&f)?,
                    DEFAULT_TOLERANCE,
                )
            }
            IdentityId::SinSinus => {
                let f = EvenKernel::sqrt();
                let closed = PI / 4.0 * m2 - PI / 2.0 * self.even_series(sine_kernel_weight);
                let rhs = alloc::vec![
                    rv("closed_series", closed),
                    rv("lines", self.lines_pair_integral(&f)?)
                ];
                (
                    rv("oracle", self.oracle_pair_integral(&f)?),
                    rhs,
                    DEFAULT_FLOOR,
                    DEFAULT_TOLERANCE,
                )
            }
            IdentityId::Sin3Example => {
                let l = self.line_integral(&|w| w - sin(w) - powi(sin(w), 3) / 6.0)?;
                let s = self.even_series(sine_kernel_weight);
                let closed = PI * (3.0 * m2 / 16.0 - PI * f_area / 2.0 - 3.0 / 8.0 * s);
                (
                    rv("lines", l),
                    alloc::vec![rv("closed_series", closed)],
                    DEFAULT_FLOOR,
                    DEFAULT_TOLERANCE,
                )
            }
            IdentityId::Sin4 => {
                let closed = 2.0 / 3.0 * m2 + 64.0 * PI / 15.0 * self.norm(2);
                let rhs = alloc::vec![
                    rv("spectrum", closed),
                    rv("oracle_hm", self.oracle_pair_integral(&EvenKernel::hm(2)?)?),
                ];
                (
                    rv("lines", self.sinpow_line(2)?),
                    rhs,
                    DEFAULT_FLOOR,
                    DEFAULT_TOLERANCE,
                )
            }
            IdentityId::Prod2n(n) => {
                let f = EvenKernel::t2n(*n);
                let mut v = -4.0 * a_coeff(*n, 1)? * m2;
                for r in 2..=n + 1 {
                    v += 2.0 * a_coeff(*n, r)? * self.sinpow_line(r)?;
                }
                let rhs = alloc::vec![
                    rv("lines_sinpow", v),
                    rv("series", self.series_pair_integral(&f)?.value)
                ];
                (
                    rv("oracle", self.oracle_pair_integral(&f)?),
                    rhs,
                    DEFAULT_FLOOR,
                    DEFAULT_TOLERANCE,
                )
            }
            IdentityId::CroftonDeficit => {
                let l = self.line_integral(&|w| w - sin(w))?;
                let deficit = PI * self.even_series(crofton_weight);
                let closed = PI / 4.0 * (m2 - 2.0 * PI * f_area) + deficit;
                diagnostics.push(Diagnostic {
                    name: "deficit_series".into(),
                    value: deficit,
                    limit: None,
                    passed: deficit >= -1e-12 * m2,
                });
                if self.is_constant_width() {
                    diagnostics.push(limited(
                        "deficit_series_over_m2",
                        deficit / m2,
                        DEFICIT_LIMIT,
                    ));
                }
                (
                    rv("lines", l),
                    alloc::vec![rv("series", closed)],
                    DEFAULT_FLOOR,
                    SERIES_TOLERANCE,
                )
            }
            IdentityId::LuSquare => {
                let closed = PI * m2 + 4.0 * PI * self.even_series(crofton_weight);
                let lhs = rv("sphere_quadrature", self.survey.perimeter_square_integral());
                (
                    lhs,
                    alloc::vec![rv("series", closed)],
                    DEFAULT_FLOOR,
                    SERIES_TOLERANCE,
                )
            }
            IdentityId::Pepitogrillo => {
                let l = self.line_integral(&|w| w - sin(w))?;
                let p = 0.25 * self.survey.perimeter_square_integral() - PI * PI / 2.0 * f_area;
                (
                    rv("lines", l),
                    alloc::vec![rv("perimeters", p)],
                    DEFAULT_FLOOR,
                    SERIES_TOLERANCE,
                )
            }
            IdentityId::Kampconst(k) => {
                let f = kernel(k)?;
                let lambda0 = lambda_coeff(&f, 0)?;
                let w = self.mean_width();
                let expected = lambda0 * PI * w * w;
                let i = self.oracle_pair_integral(&f)?;
                let vanishing = lambda0.abs() < 1e-12;
                let (floor, tol) = if vanishing {
                    (4.0 * PI * PI * w * w, VANISHING_TOLERANCE)
                } else {
                    (DEFAULT_FLOOR, DEFAULT_TOLERANCE)
                };
                (
                    rv("oracle", i),
                    alloc::vec![rv("mean_width", expected)],
                    floor,
                    tol,
                )
            }
            IdentityId::FourierForm(k) | IdentityId::BasisForm(k) => {
                let f = kernel(k)?;
                if !f.is_polynomial() {
                    return Err(Error::Unsupported(alloc::format!(
                        "sin-power forms need a polynomial kernel, `{}` is not one",
                        f.id()
                    )));
                }
                let profile = VisualAngleProfile::from_kernel(&f)?;
                let a = profile.fourier();
                let mut v = a.a0 * m2;
                for m in 2..=a.a.len() as u32 {
                    let mut c = 0.0;
                    for n in m..=a.a.len() as u32 {
                        c += a.a2n(n as usize) / (n * n) as f64 * alpha_coeff(n, m)?;
                    }
                    let c = -0.5 * c;
                    let integral = match id {
                        IdentityId::FourierForm(_) => self.sinpow_line(m)?,
                        _ => self.oracle_pair_integral(&EvenKernel::hm(m)?)?,
                    };
                    v += c * integral;
                }
                let route = if matches!(id, IdentityId::FourierForm(_)) {
                    "fourier_lines"
                } else {
                    "basis_oracle"
                };
                (
                    rv("oracle", self.oracle_pair_integral(&f)?),
                    alloc::vec![rv(route, v)],
                    kernel_floor(&f)?,
                    DEFAULT_TOLERANCE,
                )
            }
            IdentityId::Sinpow(m) => {
                let mut closed = sinpow_leading(*m)? * m2;
                for k in 1..*m {
                    closed += beta_coeff(*m, k)? * self.norm(2 * k as usize);
                }
                let rhs = alloc::vec![
                    rv("spectrum", closed),
                    rv(
                        "oracle_hm",
                        self.oracle_pair_integral(&EvenKernel::hm(*m)?)?
                    ),
                ];
                (
                    rv("lines", self.sinpow_line(*m)?),
                    rhs,
                    DEFAULT_FLOOR,
                    SERIES_TOLERANCE,
                )
            }
            IdentityId::T2nExpansion(n) => {
                let f = EvenKernel::t2n(*n);
                if 2 * *n as usize > self.params.n_max {
                    return Err(Error::InsufficientResolution {
                        required: 2 * *n as usize,
                        available: self.params.n_max,
                    });
                }
                let mut v = 0.0;
                for k in 0..=*n {
                    v += 4.0 * PI / (4 * k + 1) as f64
                        * mu_coeff(*n, k)?
                        * self.norm(2 * k as usize);
                }
                (
                    rv("oracle", self.oracle_pair_integral(&f)?),
                    alloc::vec![rv("mu_spectrum", v)],
                    DEFAULT_FLOOR,
                    DEFAULT_TOLERANCE,
                )
            }
        };
        IdentityReport::build(
            id,
            self.body.label(),
            lhs,
            rhs,
            floor,
            tol,
            diagnostics,
            self.params,
        )
    }

    /// Reports for several identities, in the given order.
    pub fn reports(&self, ids: &[IdentityId]) -> Result<Vec<IdentityReport>> {
        ids.iter().map(|id| self.report(id)).collect()
    }
}

fn info(name: &str, value: f64) -> Diagnostic {
    Diagnostic {
        name: String::from(name),
        value,
        limit: None,
        passed: true,
    }
}

fn limited(name: &str, value: f64, limit: f64) -> Diagnostic {
    Diagnostic {
        name: String::from(name),
        value,
        limit: Some(limit),
        passed: value.abs() <= limit,
    }
}
