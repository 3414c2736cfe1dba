use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::kernel::EvenKernel;
use super::workbench::WorkbenchParams;
use crate::{Error, Result};

/// Kernels of the three-route consistency matrix.
pub const TRIANGLE_KERNELS: [&str; 5] = ["one", "P2", "P4", "t2n:1", "sqrt"];
/// Polynomial kernels for the Fourier and h_m basis forms.
pub const FORM_KERNELS: [&str; 4] = ["one", "t2n:1", "P2", "P4"];
/// Kernels of the constant-width test: the first three keep their value, the last two vanish.
pub const KAMPCONST_KERNELS: [&str; 5] = ["one", "t2n:1", "sqrt", "P2", "P4"];

/// A named identity of the registry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IdentityId {
    Blaschke,
    PairVsSeriesVsLines(String),
    SinSinus,
    Sin3Example,
    Sin4,
    Prod2n(u32),
    CroftonDeficit,
    LuSquare,
    Pepitogrillo,
    Kampconst(String),
    FourierForm(String),
    BasisForm(String),
    Sinpow(u32),
    T2nExpansion(u32),
}

impl IdentityId {
    /// Every identity that holds for every body. The constant-width identities are left out.
    pub fn all() -> Vec<IdentityId> {
        let mut v = alloc::vec![IdentityId::Blaschke];
        v.extend(
            TRIANGLE_KERNELS
                .iter()
                .map(|k| IdentityId::PairVsSeriesVsLines(k.to_string())),
        );
        v.extend([
            IdentityId::SinSinus,
            IdentityId::Sin3Example,
            IdentityId::Sin4,
        ]);
        v.extend((1..=3).map(IdentityId::Prod2n));
        v.extend([
            IdentityId::CroftonDeficit,
            IdentityId::LuSquare,
            IdentityId::Pepitogrillo,
        ]);
        v.extend(
            FORM_KERNELS
                .iter()
                .map(|k| IdentityId::FourierForm(k.to_string())),
        );
        v.extend(
            FORM_KERNELS
                .iter()
                .map(|k| IdentityId::BasisForm(k.to_string())),
        );
        v.extend((2..=4).map(IdentityId::Sinpow));
        v.extend((1..=3).map(IdentityId::T2nExpansion));
        v
    }

    /// Parses one id, or a family name without argument into all its members.
    ///
    /// Arguments are written `name:arg` or `name(arg)`; `all` expands to [`IdentityId::all`].
    pub fn parse(s: &str) -> Result<Vec<IdentityId>> {
        let s = s.trim();
        let unknown = || Error::UnknownIdentity(s.into());
        let (name, arg) = split_arg(s).ok_or_else(unknown)?;
        let num = |a: &str| a.trim().parse::<u32>().map_err(|_| unknown());
        let kernel = |a: &str| -> Result<String> {
            Ok(EvenKernel::parse(a)
                .map_err(|_| unknown())?
                .id()
                .to_string())
        };
        let family = |kernels: &[&str], make: fn(String) -> IdentityId| -> Vec<IdentityId> {
            kernels.iter().map(|k| make(k.to_string())).collect()
        };
        let ranged = |arg: Option<&str>,
                      lo: u32,
                      hi: u32,
                      make: fn(u32) -> IdentityId|
         -> Result<Vec<IdentityId>> {
            match arg {
                None => Ok((lo..=hi).map(make).collect()),
                Some(a) => {
                    let n = num(a)?;
                    if n < lo {
                        return Err(unknown());
                    }
                    Ok(alloc::vec![make(n)])
                }
            }
        };
        let single = |id: IdentityId| -> Result<Vec<IdentityId>> {
            if arg.is_some() {
                Err(unknown())
            } else {
                Ok(alloc::vec![id])
            }
        };
        match name {
            "all" => single(IdentityId::Blaschke).map(|_| Self::all()),
            "blaschke" => single(IdentityId::Blaschke),
            "sin_sinus" => single(IdentityId::SinSinus),
            "sin3_example" => single(IdentityId::Sin3Example),
            "sin4" => single(IdentityId::Sin4),
            "crofton_deficit" => single(IdentityId::CroftonDeficit),
            "Lu_square" | "lu_square" => single(IdentityId::LuSquare),
            "pepitogrillo" => single(IdentityId::Pepitogrillo),
            "pair_vs_series_vs_lines" | "triangle" => match arg {
                None => Ok(family(&TRIANGLE_KERNELS, IdentityId::PairVsSeriesVsLines)),
                Some(a) => Ok(alloc::vec![IdentityId::PairVsSeriesVsLines(kernel(a)?)]),
            },
            "kampconst" => match arg {
                None => Ok(family(&KAMPCONST_KERNELS, IdentityId::Kampconst)),
                Some(a) => Ok(alloc::vec![IdentityId::Kampconst(kernel(a)?)]),
            },
            "fourier_form" => match arg {
                None => Ok(family(&FORM_KERNELS, IdentityId::FourierForm)),
                Some(a) => Ok(alloc::vec![IdentityId::FourierForm(kernel(a)?)]),
            },
            "basis_form" => match arg {
                None => Ok(family(&FORM_KERNELS, IdentityId::BasisForm)),
                Some(a) => Ok(alloc::vec![IdentityId::BasisForm(kernel(a)?)]),
            },
            "prod2n" => ranged(arg, 1, 3, IdentityId::Prod2n),
            "sinpow" => ranged(arg, 2, 4, IdentityId::Sinpow),
            "t2n_expansion" => ranged(arg, 1, 3, IdentityId::T2nExpansion),
            _ => Err(unknown()),
        }
    }

    /// Parses a comma-separated list, expanding families, without duplicates.
    pub fn parse_list(s: &str) -> Result<Vec<IdentityId>> {
        let mut out: Vec<IdentityId> = Vec::new();
        for part in split_top_level(s) {
            for id in Self::parse(part)? {
                if !out.contains(&id) {
                    out.push(id);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::UnknownIdentity(s.into()));
        }
        Ok(out)
    }
}

fn split_arg(s: &str) -> Option<(&str, Option<&str>)> {
    if let Some(open) = s.find('(') {
        let inner = s[open + 1..].strip_suffix(')')?;
        return Some((&s[..open], Some(inner)));
    }
    match s.split_once(':') {
        Some((name, arg)) => Some((name, Some(arg))),
        None if !s.is_empty() => Some((s, None)),
        None => None,
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts.into_iter().filter(|p| !p.is_empty()).collect()
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityId::Blaschke => f.write_str("blaschke"),
            IdentityId::PairVsSeriesVsLines(k) => write!(f, "pair_vs_series_vs_lines:{k}"),
            IdentityId::SinSinus => f.write_str("sin_sinus"),
            IdentityId::Sin3Example => f.write_str("sin3_example"),
            IdentityId::Sin4 => f.write_str("sin4"),
            IdentityId::Prod2n(n) => write!(f, "prod2n:{n}"),
            IdentityId::CroftonDeficit => f.write_str("crofton_deficit"),
            IdentityId::LuSquare => f.write_str("Lu_square"),
            IdentityId::Pepitogrillo => f.write_str("pepitogrillo"),
            IdentityId::Kampconst(k) => write!(f, "kampconst:{k}"),
            IdentityId::FourierForm(k) => write!(f, "fourier_form:{k}"),
            IdentityId::BasisForm(k) => write!(f, "basis_form:{k}"),
            IdentityId::Sinpow(m) => write!(f, "sinpow:{m}"),
            IdentityId::T2nExpansion(n) => write!(f, "t2n_expansion:{n}"),
        }
    }
}

/// One route's value of one side of an identity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RouteValue {
    pub route: String,
    pub value: f64,
}

/// A named auxiliary quantity, with a limit when it is part of the pass condition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
    pub limit: Option<f64>,
    pub passed: bool,
}

/// Both sides of one identity on one body.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityReport {
    pub identity_id: String,
    pub body: String,
    pub lhs_route: String,
    pub lhs: f64,
    pub rhs: Vec<RouteValue>,
    /// Largest pairwise difference among all route values.
    pub abs_err: f64,
    /// `abs_err / max(max |v|, floor)`.
    pub rel_err: f64,
    pub floor: f64,
    pub tolerance: f64,
    /// The two routes that differ most.
    pub worst_pair: (String, String),
    pub diagnostics: Vec<Diagnostic>,
    pub passed: bool,
    pub grid_params: WorkbenchParams,
    /// Wall-clock time, filled in by callers that can measure it.
    pub runtime_ms: f64,
}

impl IdentityReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn build(
        id: &IdentityId,
        body: &str,
        lhs: RouteValue,
        rhs: Vec<RouteValue>,
        floor: f64,
        tolerance: f64,
        diagnostics: Vec<Diagnostic>,
        grid_params: WorkbenchParams,
    ) -> Result<Self> {
        let mut all = Vec::with_capacity(rhs.len() + 1);
        all.push(&lhs);
        all.extend(rhs.iter());
        if let Some(bad) = all.iter().find(|r| !r.value.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "route `{}` produced {}",
                bad.route,
                bad.value
            )));
        }
        if rhs.is_empty() {
            return Err(Error::InvalidArgument(
                "an identity needs at least one right-hand route".into(),
            ));
        }
        let mut abs_err = f64::NEG_INFINITY;
        let mut worst = (String::new(), String::new());
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let d = (all[i].value - all[j].value).abs();
                if d > abs_err {
                    abs_err = d;
                    worst = (all[i].route.clone(), all[j].route.clone());
                }
            }
        }
        let scale = all.iter().fold(floor, |m, r| m.max(r.value.abs()));
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        let passed = rel_err <= tolerance && diagnostics.iter().all(|d| d.passed);
        Ok(IdentityReport {
            identity_id: id.to_string(),
            body: body.into(),
            lhs_route: lhs.route,
            lhs: lhs.value,
            rhs,
            abs_err,
            rel_err,
            floor,
            tolerance,
            worst_pair: worst,
            diagnostics,
            passed,
            grid_params,
            runtime_ms: 0.0,
        })
    }

    /// Re-evaluates the pass flag against another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.rel_err <= tolerance && self.diagnostics.iter().all(|d| d.passed);
        self
    }

    /// Value of the named route, the left side included.
    pub fn route(&self, name: &str) -> Option<f64> {
        if self.lhs_route == name {
            return Some(self.lhs);
        }
        self.rhs.iter().find(|r| r.route == name).map(|r| r.value)
    }

    pub fn diagnostic(&self, name: &str) -> Option<&Diagnostic> {
        self.diagnostics.iter().find(|d| d.name == name)
    }
}
