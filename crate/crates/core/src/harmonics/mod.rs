//! Real spherical harmonics in the orthogonal (unnormalized) basis
//! `cos(jθ)·P̄_n^j(cos φ)`, `sin(jθ)·P̄_n^j(cos φ)` with
//! `P̄_n^j(x) = (1−x²)^{j/2} P_n^{(j)}(x)`, product sphere grids, projection
//! of support functions and a Funk–Hecke check.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::integrate::EvenKernel;
use crate::math::{dot, frame, Vec3};
use crate::specfun::{gauss_rule, lambda_coeff, QuadratureRule1D, RuleKind};
use crate::{Error, NodeMap, Result};

pub const MAX_DEGREE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Parity {
    Cos,
    Sin,
}

/// Gauss–Legendre in cos φ times the uniform trapezoid in θ.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    n_colat: usize,
    n_long: usize,
    /// cos φ of each ring, ascending.
    ring_x: Vec<f64>,
    ring_w: Vec<f64>,
    pub nodes: Vec<Vec3>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_colat: usize, n_long: usize) -> Result<Self> {
        if n_colat < 2 || n_long < 4 {
            return Err(Error::InvalidArgument(alloc::format!(
                "sphere grid needs at least 2 x 4 nodes, got {n_colat} x {n_long}"
            )));
        }
        let rule = gauss_rule(RuleKind::GaussLegendre, n_colat)?;
        let dtheta = 2.0 * PI / n_long as f64;
        let mut nodes = Vec::with_capacity(n_colat * n_long);
        let mut weights = Vec::with_capacity(n_colat * n_long);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = libm::sqrt(1.0 - x * x);
            for l in 0..n_long {
                let theta = dtheta * l as f64;
                nodes.push([s * libm::cos(theta), s * libm::sin(theta), x]);
                weights.push(w * dtheta);
            }
        }
        Ok(SphereGrid {
            n_colat,
            n_long,
            ring_x: rule.nodes,
            ring_w: rule.weights,
            nodes,
            weights,
        })
    }

    pub fn n_colat(&self) -> usize {
        self.n_colat
    }

    pub fn n_long(&self) -> usize {
        self.n_long
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest harmonic degree integrated exactly.
    pub fn exactness(&self) -> usize {
        (2 * self.n_colat - 1).min(self.n_long - 1)
    }

    /// Index of the node antipodal to `k`.
    pub fn antipode(&self, k: usize) -> usize {
        let (i, l) = (k / self.n_long, k % self.n_long);
        let i2 = self.n_colat - 1 - i;
        let shift = self.n_long / 2;
        debug_assert!(self.n_long % 2 == 0);
        i2 * self.n_long + (l + shift) % self.n_long
    }

    /// Σ w_k g(u_k) in node order.
    pub fn integrate(&self, mut g: impl FnMut(Vec3) -> f64) -> f64 {
        let vals: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * g(u))
            .collect();
        crate::math::pairwise_sum(&vals)
    }

    /// Weighted sum of precomputed node values.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        let vals: Vec<f64> = values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .collect();
        crate::math::pairwise_sum(&vals)
    }
}

/// Rule on the inner-product variable around a fixed direction:
/// `v = t·u + √(1−t²)(cos α e₁ + sin α e₂)`, dσ(v) = dt dα.
#[derive(Debug, Clone, PartialEq)]
pub struct CentredGrid {
    pub t_rule: QuadratureRule1D,
    pub n_alpha: usize,
}

impl CentredGrid {
    pub fn new(kind: RuleKind, n_t: usize, n_alpha: usize) -> Result<Self> {
        if n_alpha < 4 {
            return Err(Error::InvalidArgument(alloc::format!(
                "need at least 4 azimuths, got {n_alpha}"
            )));
        }
        Ok(CentredGrid {
            t_rule: gauss_rule(kind, n_t)?,
            n_alpha,
        })
    }

    /// Azimuthal sums `Σ_α g(v(t_k, α)) · 2π/n_α` for every node t_k.
    pub fn ring_averages(&self, u: Vec3, g: impl Fn(Vec3) -> f64) -> Vec<f64> {
        let (e1, e2) = frame(u);
        let da = 2.0 * PI / self.n_alpha as f64;
        let trig: Vec<(f64, f64)> = (0..self.n_alpha)
            .map(|a| (libm::cos(da * a as f64), libm::sin(da * a as f64)))
            .collect();
        self.t_rule
            .nodes
            .iter()
            .map(|&t| {
                let s = libm::sqrt((1.0 - t * t).max(0.0));
                let mut acc = 0.0;
                for &(c, sn) in &trig {
                    let v = [
                        t * u[0] + s * (c * e1[0] + sn * e2[0]),
                        t * u[1] + s * (c * e1[1] + sn * e2[1]),
                        t * u[2] + s * (c * e1[2] + sn * e2[2]),
                    ];
                    acc += g(v);
                }
                acc * da
            })
            .collect()
    }
}

/// Table of P̄_n^j(x) for 0 ≤ j ≤ n ≤ n_max.
#[derive(Debug, Clone)]
pub struct AssocLegendre {
    n_max: usize,
    values: Vec<f64>,
}

impl AssocLegendre {
    fn idx(n: usize, j: usize) -> usize {
        n * (n + 1) / 2 + j
    }

    pub fn new(n_max: usize, x: f64) -> Self {
        let s = libm::sqrt((1.0 - x * x).max(0.0));
        let mut values = alloc::vec![0.0; (n_max + 1) * (n_max + 2) / 2];
        let mut diag = 1.0;
        for j in 0..=n_max {
            if j > 0 {
                diag *= (2 * j - 1) as f64 * s;
            }
            values[Self::idx(j, j)] = diag;
            if j < n_max {
                values[Self::idx(j + 1, j)] = (2 * j + 1) as f64 * x * diag;
            }
            for n in (j + 1)..n_max {
                let nf = n as f64;
                let jf = j as f64;
                let v = ((2.0 * nf + 1.0) * x * values[Self::idx(n, j)]
                    - (nf + jf) * values[Self::idx(n - 1, j)])
                    / (nf - jf + 1.0);
                values[Self::idx(n + 1, j)] = v;
            }
        }
        AssocLegendre { n_max, values }
    }

    pub fn get(&self, n: usize, j: usize) -> f64 {
        debug_assert!(j <= n && n <= self.n_max);
        self.values[Self::idx(n, j)]
    }
}

/// ∫_{S²} Y² dσ for the basis function of degree n and order j (either parity).
pub fn basis_norm_sq(n: usize, j: usize) -> f64 {
    let mut ratio = 1.0;
    for k in (n - j + 1)..=(n + j) {
        ratio *= k as f64;
    }
    let azimuth = if j == 0 { 2.0 * PI } else { PI };
    azimuth * 2.0 / (2.0 * n as f64 + 1.0) * ratio
}

fn longitude_colat(u: Vec3) -> (f64, f64) {
    (libm::atan2(u[1], u[0]), u[2].clamp(-1.0, 1.0))
}

/// cos(jθ)P̄_n^j(cos φ) or sin(jθ)P̄_n^j(cos φ) at the unit vector `u`.
pub fn sh_eval(n: usize, j: usize, parity: Parity, u: Vec3) -> Result<f64> {
    if j > n || (parity == Parity::Sin && j == 0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "no basis function with n={n}, j={j}, parity {parity:?}"
        )));
    }
    Ok(basis_value(n, j, parity, u))
}

/// Unchecked [`sh_eval`]. Uses sin^jφ·(cos jθ, sin jθ) = (Re, Im)(u_x + i u_y)^j,
/// so no angles are formed.
pub fn basis_value(n: usize, j: usize, parity: Parity, u: Vec3) -> f64 {
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..j {
        let r = re * u[0] - im * u[1];
        im = re * u[1] + im * u[0];
        re = r;
    }
    let x = u[2];
    // P_n^{(j)}(x) by the order-j recurrence without the sin^j factor.
    let mut q0 = 1.0;
    for k in 1..=j {
        q0 *= (2 * k - 1) as f64;
    }
    let mut q = q0;
    if n > j {
        let mut qm = q0;
        q = (2 * j + 1) as f64 * x * q0;
        for m in (j + 1)..n {
            let mf = m as f64;
            let jf = j as f64;
            let next = ((2.0 * mf + 1.0) * x * q - (mf + jf) * qm) / (mf - jf + 1.0);
            qm = q;
            q = next;
        }
    }
    match parity {
        Parity::Cos => re * q,
        Parity::Sin => im * q,
    }
}

/// Position of (j, parity) inside a degree block `[c0, c1, s1, c2, s2, …]`.
pub fn block_index(j: usize, parity: Parity) -> usize {
    match (j, parity) {
        (0, _) => 0,
        (j, Parity::Cos) => 2 * j - 1,
        (j, Parity::Sin) => 2 * j,
    }
}

/// Per-degree coefficient blocks in the orthogonal basis and the squared
/// norms ‖π_n‖² = ∫ π_n² dσ.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HarmonicSpectrum {
    pub max_degree: usize,
    pub blocks: Vec<Vec<f64>>,
    pub norms_sq: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumRecord {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    pub norm_sq: f64,
}

impl HarmonicSpectrum {
    pub fn norm_sq(&self, n: usize) -> f64 {
        self.norms_sq.get(n).copied().unwrap_or(0.0)
    }

    /// π₀(p) as a number: the degree-0 coefficient, equal to M/4π.
    pub fn mean(&self) -> f64 {
        self.blocks[0][0]
    }

    pub fn evaluate(&self, u: Vec3) -> f64 {
        let (theta, x) = longitude_colat(u);
        let table = AssocLegendre::new(self.max_degree, x);
        let mut v = 0.0;
        for (n, block) in self.blocks.iter().enumerate() {
            v += block[0] * table.get(n, 0);
            for j in 1..=n {
                let jt = j as f64 * theta;
                let p = table.get(n, j);
                v += (block[2 * j - 1] * libm::cos(jt) + block[2 * j] * libm::sin(jt)) * p;
            }
        }
        v
    }

    pub fn records(&self) -> Vec<SpectrumRecord> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(degree, b)| SpectrumRecord {
                degree,
                coefficients: b.clone(),
                norm_sq: self.norms_sq[degree],
            })
            .collect()
    }
}

/// Projects node samples of a function onto degrees 0..=max_degree.
pub fn project(
    values: &[f64],
    max_degree: usize,
    grid: &SphereGrid,
    map: &impl NodeMap,
) -> Result<HarmonicSpectrum> {
    if max_degree > MAX_DEGREE {
        return Err(Error::InvalidArgument(alloc::format!(
            "harmonic degree {max_degree} exceeds the supported {MAX_DEGREE}"
        )));
    }
    if grid.exactness() < 2 * max_degree {
        return Err(Error::InsufficientResolution {
            required: max_degree,
            available: grid.exactness() / 2,
        });
    }
    if values.len() != grid.len() {
        return Err(Error::InvalidArgument(
            "sample count does not match the grid".into(),
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("support samples"));
    }
    let nl = grid.n_long;
    let dtheta = 2.0 * PI / nl as f64;
    // Per ring: Legendre-weighted Fourier sums, one contribution per (n, block slot).
    let per_ring: Vec<Vec<Vec<f64>>> = map.map(grid.n_colat, |i| {
        let ring = &values[i * nl..(i + 1) * nl];
        let mut cs = alloc::vec![(0.0, 0.0); max_degree + 1];
        for (j, slot) in cs.iter_mut().enumerate() {
            let (mut c, mut s) = (0.0, 0.0);
            for (l, v) in ring.iter().enumerate() {
                let a = dtheta * ((j * l) % nl) as f64;
                c += v * libm::cos(a);
                s += v * libm::sin(a);
            }
            *slot = (c * dtheta, s * dtheta);
        }
        let table = AssocLegendre::new(max_degree, grid.ring_x[i]);
        let w = grid.ring_w[i];
        (0..=max_degree)
            .map(|n| {
                let mut block = alloc::vec![0.0; 2 * n + 1];
                block[0] = w * table.get(n, 0) * cs[0].0;
                for j in 1..=n {
                    let p = w * table.get(n, j);
                    block[2 * j - 1] = p * cs[j].0;
                    block[2 * j] = p * cs[j].1;
                }
                block
            })
            .collect()
    });
    let mut blocks = Vec::with_capacity(max_degree + 1);
    let mut norms_sq = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let mut block = alloc::vec![0.0; 2 * n + 1];
        let mut column = alloc::vec![0.0; grid.n_colat];
        let mut norm = 0.0;
        for (slot, b) in block.iter_mut().enumerate() {
            for (i, ring) in per_ring.iter().enumerate() {
                column[i] = ring[n][slot];
            }
            let j = slot.div_ceil(2);
            let nsq = basis_norm_sq(n, j);
            *b = crate::math::pairwise_sum(&column) / nsq;
            norm += *b * *b * nsq;
        }
        blocks.push(block);
        norms_sq.push(norm);
    }
    Ok(HarmonicSpectrum {
        max_degree,
        blocks,
        norms_sq,
    })
}

/// Returns `(∫ f(⟨u,v⟩) Y(v) dσ(v), λ_n Y(u))` for the basis function Y of
/// degree n, order j. The left side uses a rule centred on `u` with the
/// kernel's endpoint behaviour built in, sized like `grid`.
pub fn funk_hecke_check(
    f: &EvenKernel,
    n: usize,
    j: usize,
    parity: Parity,
    u: Vec3,
    grid: &SphereGrid,
) -> Result<(f64, f64)> {
    let y_u = sh_eval(n, j, parity, u)?;
    let centred = CentredGrid::new(f.rule_kind(), grid.n_colat, grid.n_long)?;
    let rings = centred.ring_averages(u, |v| basis_value(n, j, parity, v));
    let mut lhs = 0.0;
    for ((&t, &w), g) in centred
        .t_rule
        .nodes
        .iter()
        .zip(&centred.t_rule.weights)
        .zip(&rings)
    {
        lhs += w * f.rule_integrand(t) * g;
    }
    let rhs = lambda_coeff(f, n as u32)? * y_u;
    Ok((lhs, rhs))
}

/// ⟨Y₁, Y₂⟩ on the grid, for orthogonality checks.
pub fn grid_inner_product(
    grid: &SphereGrid,
    a: (usize, usize, Parity),
    b: (usize, usize, Parity),
) -> Result<f64> {
    let mut vals = Vec::with_capacity(grid.len());
    for &u in &grid.nodes {
        vals.push(sh_eval(a.0, a.1, a.2, u)? * sh_eval(b.0, b.1, b.2, u)?);
    }
    Ok(grid.integrate_values(&vals))
}

/// ⟨u, v⟩ clamped to [−1, 1].
pub fn cosine(u: Vec3, v: Vec3) -> f64 {
    dot(u, v).clamp(-1.0, 1.0)
}
