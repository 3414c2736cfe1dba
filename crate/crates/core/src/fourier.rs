//! Trigonometric interpolation on uniform grids and a radix-2 FFT.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// In-place iterative radix-2 complex FFT, `X_k = Σ_j x_j e^{−2πijk/N}`.
pub fn fft(re: &mut [f64], im: &mut [f64]) -> Result<()> {
    let n = re.len();
    if n != im.len() || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(alloc::format!(
            "FFT length {n} is not a power of two"
        )));
    }
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * PI / len as f64;
        let half = len / 2;
        // Twiddles from direct evaluation keep the error independent of `len`.
        let tw: Vec<(f64, f64)> = (0..half)
            .map(|k| (libm::cos(ang * k as f64), libm::sin(ang * k as f64)))
            .collect();
        for start in (0..n).step_by(len) {
            for (k, &(wr, wi)) in tw.iter().enumerate() {
                let a = start + k;
                let b = a + half;
                let xr = re[b] * wr - im[b] * wi;
                let xi = re[b] * wi + im[b] * wr;
                re[b] = re[a] - xr;
                im[b] = im[a] - xi;
                re[a] += xr;
                im[a] += xi;
            }
        }
        len <<= 1;
    }
    Ok(())
}

/// `a₀ + Σ_{k≥1} (a_k cos kθ + b_k sin kθ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    /// `cos[0]` is the mean; `sin[0]` is always zero.
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigSeries {
    /// Interpolant of `samples` at θ_j = 2πj/N, N a power of two.
    ///
    /// The Nyquist mode is dropped and trailing modes whose magnitude is
    /// below `drop_below · max|sample|` are truncated.
    pub fn from_samples(samples: &[f64], drop_below: f64) -> Result<Self> {
        let n = samples.len();
        let mut re = samples.to_vec();
        let mut im = alloc::vec![0.0; n];
        fft(&mut re, &mut im)?;
        let half = n / 2;
        let scale = 2.0 / n as f64;
        let mut cos: Vec<f64> = (0..half).map(|k| re[k] * scale).collect();
        let mut sin: Vec<f64> = (0..half).map(|k| -im[k] * scale).collect();
        cos[0] *= 0.5;
        sin[0] = 0.0;
        let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cut = drop_below * peak;
        let mut keep = half;
        while keep > 1 && cos[keep - 1].abs() <= cut && sin[keep - 1].abs() <= cut {
            keep -= 1;
        }
        cos.truncate(keep);
        sin.truncate(keep);
        Ok(TrigSeries { cos, sin })
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.cos[0]
    }

    /// Value and first two derivatives at θ.
    pub fn eval_d2(&self, theta: f64) -> (f64, f64, f64) {
        let (s1, c1) = (libm::sin(theta), libm::cos(theta));
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut v = self.cos[0];
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for k in 1..self.cos.len() {
            let next_c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = next_c;
            let kf = k as f64;
            let (a, b) = (self.cos[k], self.sin[k]);
            let t = a * ck + b * sk;
            v += t;
            d1 += kf * (b * ck - a * sk);
            d2 -= kf * kf * t;
        }
        (v, d1, d2)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (s1, c1) = (libm::sin(theta), libm::cos(theta));
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut v = self.cos[0];
        for k in 1..self.cos.len() {
            let next_c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = next_c;
            v += self.cos[k] * ck + self.sin[k] * sk;
        }
        v
    }

    /// Value and first derivative at θ.
    pub fn eval_d1(&self, theta: f64) -> (f64, f64) {
        let (s1, c1) = (libm::sin(theta), libm::cos(theta));
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut v = self.cos[0];
        let mut d1 = 0.0;
        for k in 1..self.cos.len() {
            let next_c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = next_c;
            let (a, b) = (self.cos[k], self.sin[k]);
            v += a * ck + b * sk;
            d1 += k as f64 * (b * ck - a * sk);
        }
        (v, d1)
    }

    /// ∫₀^{2π} |g′|² dθ from the coefficients, g the series.
    pub fn derivative_energy(&self) -> f64 {
        (1..self.cos.len())
            .map(|k| {
                let kf = k as f64;
                PI * kf * kf * (self.cos[k] * self.cos[k] + self.sin[k] * self.sin[k])
            })
            .sum()
    }

    /// ∫₀^{2π} g² dθ from the coefficients.
    pub fn energy(&self) -> f64 {
        let tail: f64 = (1..self.cos.len())
            .map(|k| PI * (self.cos[k] * self.cos[k] + self.sin[k] * self.sin[k]))
            .sum();
        2.0 * PI * self.cos[0] * self.cos[0] + tail
    }
}

/// Cosine coefficients of a π-periodic even function g(x) = c₀/2 + Σ c_n cos 2nx
/// from `m` samples on [0, π), m a power of two.
///
/// Returns `c₀, c₁, …, c_{m/2}` with the Nyquist entry halved, so that the
/// coefficients sum back to the sample at x = 0 exactly (up to rounding).
pub fn even_cosine_coefficients(m: usize, g: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    let mut re: Vec<f64> = (0..m).map(|j| g(PI * j as f64 / m as f64)).collect();
    let mut im = alloc::vec![0.0; m];
    fft(&mut re, &mut im)?;
    let scale = 2.0 / m as f64;
    let mut out: Vec<f64> = (0..=m / 2).map(|k| re[k] * scale).collect();
    out[m / 2] *= 0.5;
    Ok(out)
}
