use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::kernel::{ClosedKind, EvenKernel};
use crate::fourier::even_cosine_coefficients;
use crate::math::powi;
use crate::specfun::{a_coeff, adaptive_integrate};
use crate::{Error, Result};

/// Samples on [0, π) behind the Fourier coefficients of H″.
pub const FOURIER_SAMPLES: usize = 1 << 15;
/// Trailing Fourier coefficients below this are dropped.
pub const FOURIER_CUTOFF: f64 = 1e-13;
/// |a_{2N}| above this at the requested cutoff N flags slow decay.
pub const SLOW_DECAY: f64 = 1e-8;
const CHEBYSHEV_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
enum Form {
    /// quad·x² + Σ_r sin_pow[r]·sin^{2r}x
    SinePoly { quad: f64, sin_pow: Vec<f64> },
    /// |x| − |sin x|
    InvSqrt,
    /// (2/3)(|x| − |sin x|) − (1/9)|sin x|³
    Sqrt,
    /// Chebyshev series on [0, π] of the repeated integral of H″.
    Tabulated { cheb: Vec<f64> },
}

/// Fourier data of H″(x) = a₀/2 + Σ_{n≥1} a_{2n} cos 2nx.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FourierCoefficients {
    pub a0: f64,
    /// `a[n−1]` is a_{2n}.
    pub a: Vec<f64>,
    /// Set when |a_{2N}| > 1e−8 at the last requested index N.
    pub slow_decay: bool,
}

impl FourierCoefficients {
    pub fn a2n(&self, n: usize) -> f64 {
        if n == 0 {
            self.a0
        } else {
            self.a.get(n - 1).copied().unwrap_or(0.0)
        }
    }

    /// a₀ + 2Σa_{2n}, zero when H″(0) = 0.
    pub fn closure_residual(&self) -> f64 {
        self.a0 + 2.0 * crate::math::pairwise_sum(&self.a)
    }
}

/// H with H″(x) = f(cos x) sin²x, H(0) = H′(0) = 0, on [0, π] and extended evenly.
#[derive(Debug, Clone, PartialEq)]
pub struct VisualAngleProfile {
    kernel_id: String,
    form: Form,
    h_pi: f64,
    fourier: FourierCoefficients,
}

impl VisualAngleProfile {
    /// Closed form for the shipped kernels, the numerical repeated integral otherwise.
    pub fn from_kernel(f: &EvenKernel) -> Result<Self> {
        let form = match f.closed_kind() {
            ClosedKind::InvSqrt => Form::InvSqrt,
            ClosedKind::Sqrt => Form::Sqrt,
            ClosedKind::Hm(m) => {
                let mut sin_pow = alloc::vec![0.0; m as usize + 1];
                sin_pow[m as usize] = 0.5;
                Form::SinePoly { quad: 0.0, sin_pow }
            }
            ClosedKind::Polynomial => {
                let c = f
                    .power_coeffs()
                    .ok_or_else(|| Error::Unsupported("polynomial kernel".into()))?;
                let mut quad = 0.0;
                let mut sin_pow = alloc::vec![0.0; c.len() + 1];
                for (j, &cj) in c.iter().enumerate() {
                    let j = j as u32;
                    quad += cj * a_coeff(j, 0)?;
                    for r in 1..=j + 1 {
                        sin_pow[r as usize] += cj * a_coeff(j, r)?;
                    }
                }
                Form::SinePoly { quad, sin_pow }
            }
            ClosedKind::None => tabulate(f)?,
        };
        Self::assemble(f, form)
    }

    /// Always the numerical repeated integral, whatever the kernel.
    pub fn tabulated(f: &EvenKernel) -> Result<Self> {
        let form = tabulate(f)?;
        Self::assemble(f, form)
    }

    fn assemble(f: &EvenKernel, form: Form) -> Result<Self> {
        let mut p = VisualAngleProfile {
            kernel_id: f.id().into(),
            form,
            h_pi: 0.0,
            fourier: FourierCoefficients {
                a0: 0.0,
                a: Vec::new(),
                slow_decay: false,
            },
        };
        p.h_pi = p.eval(PI);
        p.fourier = fourier_a(f, usize::MAX)?;
        Ok(p)
    }

    pub fn kernel_id(&self) -> &str {
        &self.kernel_id
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.form, Form::Tabulated { .. })
    }

    /// H(x) for |x| ≤ π.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        match &self.form {
            Form::SinePoly { quad, sin_pow } => {
                let s2 = libm::sin(x) * libm::sin(x);
                let mut v = 0.0;
                for &c in sin_pow.iter().rev() {
                    v = v * s2 + c;
                }
                quad * x * x + v
            }
            Form::InvSqrt => x - libm::sin(x).abs(),
            Form::Sqrt => {
                let s = libm::sin(x).abs();
                2.0 / 3.0 * (x - s) - s * s * s / 9.0
            }
            Form::Tabulated { cheb } => clenshaw(cheb, x.min(PI)),
        }
    }

    pub fn h_pi(&self) -> f64 {
        self.h_pi
    }

    pub fn fourier(&self) -> &FourierCoefficients {
        &self.fourier
    }

    /// (a₀/4)x² + Σ (a_{2n}/4n²)(1 − cos 2nx).
    pub fn fourier_reconstruction(&self, x: f64) -> f64 {
        let f = &self.fourier;
        let tail: Vec<f64> =
            f.a.iter()
                .enumerate()
                .map(|(i, &a)| {
                    let n = (i + 1) as f64;
                    a / (4.0 * n * n) * (1.0 - libm::cos(2.0 * n * x))
                })
                .collect();
        f.a0 / 4.0 * x * x + crate::math::pairwise_sum(&tail)
    }
}

/// Fourier coefficients a₀, a₂, …, a_{2·n_max} of H″ by the uniform-grid
/// trapezoid on [0, π), with trailing coefficients below 1e−13 dropped.
///
/// Pass `usize::MAX` for every coefficient the grid resolves.
pub fn fourier_a(f: &EvenKernel, n_max: usize) -> Result<FourierCoefficients> {
    let c = even_cosine_coefficients(FOURIER_SAMPLES, |x| f.profile_rhs(x))?;
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Fourier coefficients of H''"));
    }
    let mut last = c.len() - 1;
    while last > 0 && c[last].abs() < FOURIER_CUTOFF {
        last -= 1;
    }
    let keep = last.min(n_max);
    let a: Vec<f64> = c[1..=keep].to_vec();
    let at_cut = if n_max == usize::MAX {
        c[last]
    } else {
        c.get(n_max).copied().unwrap_or(0.0)
    };
    let slow_decay = keep >= 1 && at_cut.abs() > SLOW_DECAY;
    Ok(FourierCoefficients {
        a0: c[0],
        a,
        slow_decay,
    })
}

fn tabulate(f: &EvenKernel) -> Result<Form> {
    let n = CHEBYSHEV_NODES;
    // Chebyshev–Lobatto nodes on [0, π].
    let xs: Vec<f64> = (0..n)
        .map(|k| 0.5 * PI * (1.0 - libm::cos(PI * k as f64 / (n - 1) as f64)))
        .collect();
    let mut vals = Vec::with_capacity(n);
    for &x in &xs {
        let v = if x == 0.0 {
            0.0
        } else {
            adaptive_integrate(|s| (x - s) * f.profile_rhs(s), 0.0, x, 1e-15)?
        };
        vals.push(v);
    }
    // Coefficients of Σ c_k T_k(y), y = 2x/π − 1, by the discrete cosine transform on Lobatto points.
    let m = (n - 1) as f64;
    let mut cheb = alloc::vec![0.0; n];
    for (k, ck) in cheb.iter_mut().enumerate() {
        let mut s = 0.0;
        for (j, &v) in vals.iter().enumerate() {
            let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            // Node j sits at y = −cos(πj/m).
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            s += w * v * sign * libm::cos(PI * (k * j) as f64 / m);
        }
        *ck = 2.0 * s / m;
    }
    cheb[0] *= 0.5;
    cheb[n - 1] *= 0.5;
    Ok(Form::Tabulated { cheb })
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let y = 2.0 * x / PI - 1.0;
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * y * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    y * b1 - b2 + c[0]
}

/// Apparent power p with |Φ(ω)| ∝ ω^p near zero, from ω = 0.1 and 0.02.
/// `None` when Φ vanishes at both points.
pub fn decay_exponent(phi: &dyn Fn(f64) -> f64) -> Option<f64> {
    let (a, b) = (phi(0.1).abs(), phi(0.02).abs());
    if a == 0.0 && b == 0.0 {
        return None;
    }
    if b == 0.0 {
        return Some(f64::INFINITY);
    }
    Some(libm::log(a / b) / libm::log(5.0))
}

/// Fails unless Φ decays faster than ω^{2.5} at zero, the rate that keeps
/// the far field of the line integral finite.
pub fn require_decay(phi: &dyn Fn(f64) -> f64) -> Result<()> {
    match decay_exponent(phi) {
        Some(p) if p <= 2.5 || p.is_nan() => Err(Error::SlowDecay { exponent: p }),
        _ => Ok(()),
    }
}

/// sin^{2m} ω as a line integrand.
pub fn sin_pow(m: u32) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    move |w: f64| powi(libm::sin(w), 2 * m)
}
