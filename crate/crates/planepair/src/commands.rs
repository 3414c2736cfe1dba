use std::fmt::Write as _;
use std::time::Instant;

use planepair_core::body::{
    is_constant_width, mean_curvature_m, spectrum, surface_area_f, ExactInvariants,
};
use planepair_core::harmonics::SpectrumRecord;
use planepair_core::integrate::identities::TRIANGLE_KERNELS;
use planepair_core::integrate::workbench::{CONSTANT_WIDTH_TOL, DEFAULT_TOLERANCE};
use planepair_core::integrate::{
    fourier_a, polar_line_integrals, VisualAngleProfile, WorkbenchParams,
};
use planepair_core::specfun::{lambda_coeff, CoefficientFamily, CoefficientRow, CoefficientTable};
use planepair_core::{
    BodySpec, ConvexBody3, EvenKernel, IdentityId, IdentityReport, SphereGrid, Workbench,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::body_arg::parse_body;
use crate::config::RunConfig;
use crate::error::{CliError, Result, EXIT_IDENTITY_FAILURE, EXIT_OK};
use crate::output::{csv_string, sig9, Render};
use crate::parallel::Rayon;

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn single_body(cfg: &RunConfig) -> Result<ConvexBody3> {
    match cfg.bodies.as_slice() {
        [b] => parse_body(b),
        [] => Err(CliError::Config("a body is required".into())),
        _ => Err(CliError::Config(
            "this command takes exactly one body".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Grid {
    pub n_colat: usize,
    pub n_long: usize,
    pub n_theta: usize,
    pub n_max: usize,
}

impl Grid {
    fn of(p: &WorkbenchParams) -> Self {
        Grid {
            n_colat: p.n_colat,
            n_long: p.n_long,
            n_theta: p.lines.n_theta,
            n_max: p.n_max,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeNorm {
    pub degree: usize,
    pub norm_sq: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BodyInfo {
    pub label: String,
    pub spec: BodySpec,
    pub mean_curvature: f64,
    pub mean_width: f64,
    pub surface_area: f64,
    pub bounding_radius: f64,
    pub constant_width: bool,
    pub spectrum_norms: Vec<DegreeNorm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactInvariants>,
    pub grid: Grid,
}

pub fn body_info(cfg: &RunConfig) -> Result<BodyInfo> {
    let body = single_body(cfg)?;
    let p = cfg.workbench_params();
    let grid = SphereGrid::new(p.n_colat, p.n_long)?;
    let (m, w) = mean_curvature_m(&body, &grid);
    let f = surface_area_f(&body, &grid, p.lines.n_theta, &Rayon)?;
    let s = spectrum(&body, p.n_max, &grid, &Rayon)?;
    Ok(BodyInfo {
        label: body.label().into(),
        spec: body.spec().clone(),
        mean_curvature: m,
        mean_width: w,
        surface_area: f,
        bounding_radius: body.bounding_radius(),
        constant_width: is_constant_width(&s, CONSTANT_WIDTH_TOL),
        spectrum_norms: (0..=p.n_max)
            .map(|n| DegreeNorm {
                degree: n,
                norm_sq: s.norm_sq(n),
            })
            .collect(),
        exact: body.exact().copied(),
        grid: Grid::of(&p),
    })
}

impl Render for BodyInfo {
    fn csv(&self) -> Result<String> {
        csv_string(|w| {
            w.write_record(["quantity", "value"])?;
            let scalars = [
                ("mean_curvature", self.mean_curvature),
                ("mean_width", self.mean_width),
                ("surface_area", self.surface_area),
                ("bounding_radius", self.bounding_radius),
            ];
            for (k, v) in scalars {
                w.write_record([k.to_string(), v.to_string()])?;
            }
            w.write_record([
                "constant_width".to_string(),
                self.constant_width.to_string(),
            ])?;
            for d in &self.spectrum_norms {
                w.write_record([format!("norm_sq_{}", d.degree), d.norm_sq.to_string()])?;
            }
            Ok(())
        })
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "body            {}", self.label);
        let _ = writeln!(s, "M               {}", sig9(self.mean_curvature));
        let _ = writeln!(s, "mean width      {}", sig9(self.mean_width));
        let _ = writeln!(s, "F               {}", sig9(self.surface_area));
        let _ = writeln!(s, "rho             {}", sig9(self.bounding_radius));
        let _ = writeln!(s, "constant width  {}", self.constant_width);
        for d in &self.spectrum_norms {
            let _ = writeln!(s, "|pi_{:<2}|^2       {}", d.degree, sig9(d.norm_sq));
        }
        let g = self.grid;
        let _ = writeln!(
            s,
            "grid            {}x{}, n_theta {}, n_max {}",
            g.n_colat, g.n_long, g.n_theta, g.n_max
        );
        s
    }
}

/// Inclusive index range `A..B`, `A..=B` or a single `N`.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u32>> {
    let bad = || CliError::Range(s.into());
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

#[derive(Debug, Clone, Serialize)]
pub struct Coefficients {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<String>,
    #[serde(flatten)]
    pub table: CoefficientTable,
}

pub fn family_from_name(s: &str) -> Result<CoefficientFamily> {
    Ok(match s {
        "lambda" => CoefficientFamily::Lambda,
        "mu" => CoefficientFamily::Mu,
        "alpha" => CoefficientFamily::Alpha,
        "A" | "a" => CoefficientFamily::A,
        "beta" => CoefficientFamily::Beta,
        "a_fourier" => CoefficientFamily::AFourier,
        other => {
            return Err(CliError::Config(format!(
                "unknown coefficient family `{other}`; expected lambda, mu, alpha, A, beta or a_fourier"
            )))
        }
    })
}

pub fn coeffs(
    family: CoefficientFamily,
    kernel: Option<&str>,
    range: &str,
) -> Result<Coefficients> {
    let r = parse_range(range)?;
    let need_kernel = || -> Result<EvenKernel> {
        let k = kernel
            .ok_or_else(|| CliError::Config(format!("family {} needs --kernel", family.name())))?;
        Ok(EvenKernel::parse(k)?)
    };
    let table = match family {
        CoefficientFamily::Lambda => {
            let f = need_kernel()?;
            let rows = r
                .map(|n| Ok(CoefficientRow::new(vec![n], lambda_coeff(&f, n)?)))
                .collect::<Result<Vec<_>>>()?;
            CoefficientTable {
                family,
                index_names: vec!["n"],
                rows,
            }
        }
        CoefficientFamily::AFourier => {
            let f = need_kernel()?;
            let c = fourier_a(&f, *r.end() as usize)?;
            CoefficientTable {
                family,
                index_names: vec!["n"],
                rows: r
                    .map(|n| CoefficientRow::new(vec![n], c.a2n(n as usize)))
                    .collect(),
            }
        }
        CoefficientFamily::Mu => CoefficientTable::mu(r)?,
        CoefficientFamily::Alpha => CoefficientTable::alpha(r)?,
        CoefficientFamily::A => CoefficientTable::a(r)?,
        CoefficientFamily::Beta => CoefficientTable::beta(r)?,
    };
    Ok(Coefficients {
        kernel: match family {
            CoefficientFamily::Lambda | CoefficientFamily::AFourier => kernel.map(String::from),
            _ => None,
        },
        table,
    })
}

impl Coefficients {
    fn has_discrepancy(&self) -> bool {
        self.table.rows.iter().any(|r| r.displayed.is_some())
    }
}

impl Render for Coefficients {
    fn csv(&self) -> Result<String> {
        let extra = self.has_discrepancy();
        csv_string(|w| {
            let mut head: Vec<String> = self
                .table
                .index_names
                .iter()
                .map(|s| s.to_string())
                .collect();
            head.push("value".into());
            if extra {
                head.push("displayed".into());
                head.push("discrepancy".into());
            }
            w.write_record(&head)?;
            for row in &self.table.rows {
                let mut rec: Vec<String> = row.indices.iter().map(|i| i.to_string()).collect();
                rec.push(row.value.to_string());
                if extra {
                    rec.push(row.displayed.map(|v| v.to_string()).unwrap_or_default());
                    rec.push(row.discrepancy.map(|v| v.to_string()).unwrap_or_default());
                }
                w.write_record(&rec)?;
            }
            Ok(())
        })
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{}", self.table.family.name());
        if let Some(k) = &self.kernel {
            let _ = write!(s, " ({k})");
        }
        s.push('\n');
        for row in &self.table.rows {
            let idx: Vec<String> = row.indices.iter().map(|i| i.to_string()).collect();
            let _ = write!(s, "  [{}]  {}", idx.join(","), sig9(row.value));
            if let (Some(d), Some(x)) = (row.displayed, row.discrepancy) {
                let _ = write!(s, "  displayed {}  discrepancy {}", sig9(d), sig9(x));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub label: String,
    pub grid: Grid,
    pub records: Vec<SpectrumRecord>,
}

pub fn spectrum_cmd(cfg: &RunConfig) -> Result<Spectrum> {
    let body = single_body(cfg)?;
    let p = cfg.workbench_params();
    let grid = SphereGrid::new(p.n_colat, p.n_long)?;
    let s = spectrum(&body, p.n_max, &grid, &Rayon)?;
    Ok(Spectrum {
        label: body.label().into(),
        grid: Grid::of(&p),
        records: s.records(),
    })
}

impl Render for Spectrum {
    fn csv(&self) -> Result<String> {
        csv_string(|w| {
            w.write_record(["degree", "index", "coefficient", "norm_sq"])?;
            for r in &self.records {
                for (i, c) in r.coefficients.iter().enumerate() {
                    w.write_record([
                        r.degree.to_string(),
                        i.to_string(),
                        c.to_string(),
                        r.norm_sq.to_string(),
                    ])?;
                }
            }
            Ok(())
        })
    }

    fn text(&self) -> String {
        let mut s = format!("spectrum of {}\n", self.label);
        for r in &self.records {
            let _ = writeln!(s, "  n={:<3} |pi_n|^2 = {}", r.degree, sig9(r.norm_sq));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BodySummary {
    pub label: String,
    pub spec: BodySpec,
    pub mean_curvature: f64,
    pub surface_area: f64,
    pub constant_width: bool,
    pub build_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteError {
    pub identity_id: String,
    pub body: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub passed: bool,
    pub bodies: Vec<BodySummary>,
    pub reports: Vec<IdentityReport>,
    pub errors: Vec<RouteError>,
}

impl Verification {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_IDENTITY_FAILURE
        }
    }
}

struct Built {
    wb: Workbench,
    summary: BodySummary,
}

fn build_all(cfg: &RunConfig) -> Result<Vec<Built>> {
    if cfg.bodies.is_empty() {
        return Err(CliError::Config("at least one body is required".into()));
    }
    let bodies = cfg
        .bodies
        .iter()
        .map(|b| parse_body(b))
        .collect::<Result<Vec<_>>>()?;
    let params = cfg.workbench_params();
    bodies
        .into_par_iter()
        .map(|body| {
            let t = Instant::now();
            let wb = Workbench::new(body, params, &Rayon)?;
            let summary = BodySummary {
                label: wb.body().label().into(),
                spec: wb.body().spec().clone(),
                mean_curvature: wb.mean_curvature(),
                surface_area: wb.surface_area(),
                constant_width: wb.is_constant_width(),
                build_ms: elapsed_ms(t),
            };
            Ok(Built { wb, summary })
        })
        .collect()
}

fn apply_tolerance(cfg: &RunConfig, r: IdentityReport) -> IdentityReport {
    let family = r.identity_id.split(':').next().unwrap_or_default();
    match cfg
        .tolerances
        .get(&r.identity_id)
        .or_else(|| cfg.tolerances.get(family))
        .copied()
        .or(cfg.tol)
    {
        Some(t) => r.with_tolerance(t),
        None => r,
    }
}

pub fn verify(cfg: &RunConfig) -> Result<Verification> {
    let list = cfg
        .identities
        .as_ref()
        .map(|l| l.joined())
        .unwrap_or_else(|| "all".into());
    let ids = IdentityId::parse_list(&list)?;
    let built = build_all(cfg)?;
    let pairs: Vec<(usize, &IdentityId)> = (0..built.len())
        .flat_map(|b| ids.iter().map(move |id| (b, id)))
        .collect();
    let outcomes: Vec<std::result::Result<IdentityReport, RouteError>> = pairs
        .par_iter()
        .map(|&(b, id)| {
            let t = Instant::now();
            let wb = &built[b].wb;
            wb.report(id)
                .map(|mut r| {
                    r.runtime_ms = elapsed_ms(t);
                    apply_tolerance(cfg, r)
                })
                .map_err(|e| RouteError {
                    identity_id: id.to_string(),
                    body: wb.body().label().into(),
                    error: e.to_string(),
                })
        })
        .collect();
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => reports.push(r),
            Err(e) => errors.push(e),
        }
    }
    Ok(Verification {
        passed: errors.is_empty() && reports.iter().all(|r| r.passed),
        bodies: built.into_iter().map(|b| b.summary).collect(),
        reports,
        errors,
    })
}

fn route_values(r: &IdentityReport) -> String {
    r.rhs
        .iter()
        .map(|v| format!("{}={}", v.route, v.value))
        .collect::<Vec<_>>()
        .join(";")
}

impl Render for Verification {
    fn csv(&self) -> Result<String> {
        csv_string(|w| {
            w.write_record([
                "identity_id",
                "body",
                "lhs_route",
                "lhs",
                "rhs_route_values",
                "abs_err",
                "rel_err",
                "tolerance",
                "passed",
                "worst_pair",
                "grid_params",
                "runtime_ms",
            ])?;
            for r in &self.reports {
                w.write_record([
                    r.identity_id.clone(),
                    r.body.clone(),
                    r.lhs_route.clone(),
                    r.lhs.to_string(),
                    route_values(r),
                    r.abs_err.to_string(),
                    r.rel_err.to_string(),
                    r.tolerance.to_string(),
                    r.passed.to_string(),
                    format!("{}|{}", r.worst_pair.0, r.worst_pair.1),
                    serde_json::to_string(&r.grid_params)?,
                    format!("{:.3}", r.runtime_ms),
                ])?;
            }
            for e in &self.errors {
                w.write_record([
                    e.identity_id.as_str(),
                    e.body.as_str(),
                    "",
                    "",
                    "",
                    "",
                    "",
                    "",
                    "false",
                    e.error.as_str(),
                    "",
                    "",
                ])?;
            }
            Ok(())
        })
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for b in &self.bodies {
            let _ = writeln!(
                s,
                "{}: M = {}, F = {}, constant width {}",
                b.label,
                sig9(b.mean_curvature),
                sig9(b.surface_area),
                b.constant_width
            );
        }
        for r in &self.reports {
            let _ = writeln!(
                s,
                "{} {:<34} {:<24} {} = {}  rel_err {} (tol {})",
                if r.passed { "PASS" } else { "FAIL" },
                r.identity_id,
                r.body,
                r.lhs_route,
                sig9(r.lhs),
                sig9(r.rel_err),
                sig9(r.tolerance)
            );
            for v in &r.rhs {
                let _ = writeln!(s, "       {:<22} {}", v.route, sig9(v.value));
            }
            for d in r.diagnostics.iter().filter(|d| !d.passed) {
                let _ = writeln!(s, "       diagnostic {} = {} failed", d.name, sig9(d.value));
            }
            if !r.passed {
                let _ = writeln!(
                    s,
                    "       worst pair: {} vs {}",
                    r.worst_pair.0, r.worst_pair.1
                );
            }
        }
        for e in &self.errors {
            let _ = writeln!(s, "FAIL {:<34} {:<24} {}", e.identity_id, e.body, e.error);
        }
        let failed = self.reports.iter().filter(|r| !r.passed).count() + self.errors.len();
        let total = self.reports.len() + self.errors.len();
        let _ = writeln!(s, "{} of {} passed", total - failed, total);
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub kernel: String,
    pub body: String,
    pub oracle: f64,
    pub series: f64,
    pub series_tail_bound: f64,
    pub lines: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polar: Option<f64>,
    /// |polar − lines|; the polar column is a cross-check and does not enter `passed`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polar_abs_diff: Option<f64>,
    pub floor: f64,
    /// Largest pairwise difference of oracle, series and lines over max(max |v|, floor).
    pub max_rel_diff: f64,
    pub worst_pair: (String, String),
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub tolerance: f64,
    pub passed: bool,
    pub bodies: Vec<BodySummary>,
    pub cells: Vec<Cell>,
}

impl Table {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_IDENTITY_FAILURE
        }
    }
}

/// Pair integrals of every kernel on every body by each route.
pub fn table(cfg: &RunConfig, polar: bool) -> Result<Table> {
    let kernels: Vec<EvenKernel> = if cfg.kernels.is_empty() {
        TRIANGLE_KERNELS
            .iter()
            .map(|k| EvenKernel::parse(k))
            .collect::<Result<_, _>>()?
    } else {
        cfg.kernels
            .iter()
            .map(|k| EvenKernel::parse(k))
            .collect::<Result<_, _>>()?
    };
    let tolerance = cfg.tol.unwrap_or(DEFAULT_TOLERANCE);
    let built = build_all(cfg)?;
    let polar_params = cfg.polar_params();
    let rows: Vec<Result<Vec<Cell>>> = built
        .par_iter()
        .map(|b| {
            let wb = &b.wb;
            let polar_values = if polar {
                let profiles = kernels
                    .iter()
                    .map(VisualAngleProfile::from_kernel)
                    .collect::<Result<Vec<_>, _>>()?;
                let phis: Vec<Box<dyn Fn(f64) -> f64 + Sync + '_>> = profiles
                    .iter()
                    .map(|p| Box::new(move |w: f64| p.eval(w)) as Box<dyn Fn(f64) -> f64 + Sync>)
                    .collect();
                let refs: Vec<&(dyn Fn(f64) -> f64 + Sync)> =
                    phis.iter().map(|b| b.as_ref()).collect();
                let out = polar_line_integrals(wb.body(), &refs, polar_params, &Rayon)?;
                profiles
                    .iter()
                    .zip(out)
                    .map(|(p, v)| {
                        Some(std::f64::consts::PI * p.h_pi() * wb.surface_area() + 2.0 * v.value)
                    })
                    .collect()
            } else {
                vec![None; kernels.len()]
            };
            kernels
                .iter()
                .zip(polar_values)
                .map(|(f, polar)| {
                    let oracle = wb.oracle_pair_integral(f)?;
                    let series = wb.series_pair_integral(f)?;
                    let lines = wb.lines_pair_integral(f)?;
                    let routes = [
                        ("oracle", oracle),
                        ("series", series.value),
                        ("lines", lines),
                    ];
                    let (diff, worst) = worst_pair(&routes);
                    let floor = wb.kernel_floor(f)?;
                    let scale = routes.iter().fold(floor, |m, r| m.max(r.1.abs()));
                    let max_rel_diff = diff / scale;
                    Ok(Cell {
                        kernel: f.id().into(),
                        body: wb.body().label().into(),
                        oracle,
                        series: series.value,
                        series_tail_bound: series.tail_bound,
                        lines,
                        polar,
                        polar_abs_diff: polar.map(|p| (p - lines).abs()),
                        floor,
                        max_rel_diff,
                        worst_pair: worst,
                        passed: max_rel_diff <= tolerance,
                    })
                })
                .collect()
        })
        .collect();
    let mut cells = Vec::new();
    for r in rows {
        cells.extend(r?);
    }
    Ok(Table {
        tolerance,
        passed: cells.iter().all(|c| c.passed),
        bodies: built.into_iter().map(|b| b.summary).collect(),
        cells,
    })
}

fn worst_pair(routes: &[(&str, f64); 3]) -> (f64, (String, String)) {
    let mut best = (0.0, (routes[0].0.to_string(), routes[0].0.to_string()));
    for (i, a) in routes.iter().enumerate() {
        for b in &routes[i + 1..] {
            let d = (a.1 - b.1).abs();
            if d > best.0 {
                best = (d, (a.0.to_string(), b.0.to_string()));
            }
        }
    }
    best
}

impl Render for Table {
    fn csv(&self) -> Result<String> {
        csv_string(|w| {
            w.write_record([
                "kernel",
                "body",
                "oracle",
                "series",
                "series_tail_bound",
                "lines",
                "polar",
                "polar_abs_diff",
                "floor",
                "max_rel_diff",
                "worst_pair",
                "passed",
            ])?;
            for c in &self.cells {
                w.write_record([
                    c.kernel.clone(),
                    c.body.clone(),
                    c.oracle.to_string(),
                    c.series.to_string(),
                    c.series_tail_bound.to_string(),
                    c.lines.to_string(),
                    c.polar.map(|v| v.to_string()).unwrap_or_default(),
                    c.polar_abs_diff.map(|v| v.to_string()).unwrap_or_default(),
                    c.floor.to_string(),
                    c.max_rel_diff.to_string(),
                    format!("{}|{}", c.worst_pair.0, c.worst_pair.1),
                    c.passed.to_string(),
                ])?;
            }
            Ok(())
        })
    }

    fn text(&self) -> String {
        let mut s = format!(
            "{:<4} {:<8} {:<24} {:>16} {:>16} {:>16} {:>16} {:>12}\n",
            "", "kernel", "body", "oracle", "series", "lines", "polar", "rel diff"
        );
        for c in &self.cells {
            let _ = writeln!(
                s,
                "{:<4} {:<8} {:<24} {:>16} {:>16} {:>16} {:>16} {:>12}",
                if c.passed { "PASS" } else { "FAIL" },
                c.kernel,
                c.body,
                sig9(c.oracle),
                sig9(c.series),
                sig9(c.lines),
                c.polar.map(sig9).unwrap_or_else(|| "-".into()),
                sig9(c.max_rel_diff)
            );
        }
        s
    }
}
