//! Integral geometry of pairs of planes meeting a convex body in three-space.
//!
//! The crate evaluates invariant integrals of the form
//! `∫ f(⟨u₁,u₂⟩) dE₁ dE₂` over pairs of planes that meet a smooth convex body,
//! together with the visual-angle line integrals they are equivalent to, by
//! several independent numerical routes:
//!
//! * a brute-force double integral over pairs of plane normals ([`integrate::PairOracle`]),
//! * the spherical-harmonic series of the support function ([`integrate::pair_integral_series`]),
//! * line integrals of functions of the dihedral visual angle ([`integrate::LineSurvey`]).
//!
//! Everything here is `no_std` (with `alloc`) and deterministic: reductions are
//! performed in a fixed order, so results are bit-reproducible. Work that can be
//! distributed over sphere nodes goes through the [`NodeMap`] trait so that a
//! caller with threads can fan it out without changing the summation order.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod body;
mod error;
pub mod fourier;
pub mod harmonics;
pub mod integrate;
pub mod math;
pub mod shadow;
pub mod specfun;

pub use body::{BodySpec, ConvexBody3};
pub use error::{Error, Result};
pub use harmonics::{HarmonicSpectrum, SphereGrid};
pub use integrate::{EvenKernel, IdentityId, IdentityReport, VisualAngleProfile, Workbench};
pub use shadow::ShadowProfile;
pub use specfun::QuadratureRule1D;

use alloc::vec::Vec;

/// Maps an index range to values, in index order.
///
/// Implementations may evaluate in any order or in parallel but must return
/// the results positioned by index.
pub trait NodeMap {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Evaluates on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl NodeMap for Sequential {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(f).collect()
    }
}
