//! Pair integrals I(f) = ∬ f(⟨u,v⟩) p(u) p(v) dσ dσ and line integrals of
//! functions of the visual angle, each by more than one route, and the
//! registry of identities that tie them together.

pub mod identities;
pub mod kernel;
pub mod lines;
pub mod oracle;
pub mod profile;
pub mod workbench;

pub use identities::{Diagnostic, IdentityId, IdentityReport, RouteValue};
pub use kernel::{shipped_kernel_ids, EndpointBehavior, EvenKernel};
pub use lines::{polar_line_integrals, LineParams, LineSurvey, PolarParams, PolarValue};
pub use oracle::{pair_integral_series, OracleParams, PairOracle, SeriesValue};
pub use profile::{
    decay_exponent, fourier_a, require_decay, FourierCoefficients, VisualAngleProfile,
};
pub use workbench::{Workbench, WorkbenchParams};
