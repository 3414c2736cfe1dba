use std::collections::BTreeMap;
use std::path::PathBuf;

use planepair_core::integrate::{PolarParams, WorkbenchParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

/// Identities named either as one comma-separated string or as a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdentityList {
    Joined(String),
    List(Vec<String>),
}

impl IdentityList {
    pub fn joined(&self) -> String {
        match self {
            IdentityList::Joined(s) => s.clone(),
            IdentityList::List(v) => v.join(","),
        }
    }
}

/// Flat run configuration. Every field may also be given as a command-line
/// flag, which takes precedence over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bodies: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentityList>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kernels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_colat: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_long: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_theta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_cut: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Pass threshold applied to every identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Per-identity thresholds, keyed by canonical id; these beat `tol`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(path.display().to_string(), e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(mut self, over: RunConfig) -> Self {
        if !over.bodies.is_empty() {
            self.bodies = over.bodies;
        }
        if !over.kernels.is_empty() {
            self.kernels = over.kernels;
        }
        self.identities = over.identities.or(self.identities);
        self.n_colat = over.n_colat.or(self.n_colat);
        self.n_long = over.n_long.or(self.n_long);
        self.n_theta = over.n_theta.or(self.n_theta);
        self.n_max = over.n_max.or(self.n_max);
        self.r_cut = over.r_cut.or(self.r_cut);
        self.format = over.format.or(self.format);
        self.output = over.output.or(self.output);
        self.tol = over.tol.or(self.tol);
        self.tolerances.extend(over.tolerances);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ints = [
            ("n_colat", self.n_colat),
            ("n_long", self.n_long),
            ("n_theta", self.n_theta),
            ("n_max", self.n_max),
        ];
        for (name, v) in ints {
            if v == Some(0) {
                return Err(CliError::Config(format!("{name} must be positive")));
            }
        }
        let reals = [("r_cut", self.r_cut), ("tol", self.tol)];
        for (name, v) in reals {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(CliError::Config(format!(
                        "{name} must be positive, got {x}"
                    )));
                }
            }
        }
        for (id, &t) in &self.tolerances {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!(
                    "tolerance for {id} must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// The workbench resolution after overrides. The direction grids of the
    /// oracle and line routes follow the spectrum grid at half its size.
    pub fn workbench_params(&self) -> WorkbenchParams {
        let mut p = WorkbenchParams::default();
        if let Some(n) = self.n_colat {
            p.n_colat = n;
            p.oracle.n_colat = (n / 2).max(2);
            p.lines.n_colat = (n / 2).max(2);
        }
        if let Some(n) = self.n_long {
            p.n_long = n;
            let half = (n / 2).max(4);
            p.oracle.n_long = half;
            p.lines.n_long = half + half % 2;
        }
        if let Some(n) = self.n_theta {
            p.lines.n_theta = n;
        }
        if let Some(n) = self.n_max {
            p.n_max = n;
        }
        p
    }

    pub fn polar_params(&self) -> PolarParams {
        let mut p = PolarParams::default();
        if let Some(r) = self.r_cut {
            p.r_cut = r;
        }
        if let Some(n) = self.n_theta {
            p.n_theta = n;
        }
        p
    }

    /// Threshold for one identity, when overridden.
    pub fn tolerance_for(&self, id: &str) -> Option<f64> {
        self.tolerances.get(id).copied().or(self.tol)
    }
}
