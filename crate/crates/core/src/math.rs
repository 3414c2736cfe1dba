//! Small numeric helpers shared across modules: fixed-order summation,
//! signed log-Gamma arithmetic, 3-vectors and scalar root finding.

use core::f64::consts::PI;
use core::ops::{Div, Mul};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is independent of how the values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        let mut s = 0.0;
        for v in values {
            s += v;
        }
        return s;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn powi(x: f64, n: u32) -> f64 {
    let mut result = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    result
}

/// A real number stored as `sign · exp(ln)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub ln: f64,
    pub sign: f64,
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog { ln: 0.0, sign: 1.0 };

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            SignedLog {
                ln: f64::NEG_INFINITY,
                sign: 0.0,
            }
        } else {
            SignedLog {
                ln: libm::log(x.abs()),
                sign: x.signum(),
            }
        }
    }

    /// Γ(x), valid for any real x that is not a nonpositive integer.
    pub fn gamma(x: f64) -> Self {
        let (ln, s) = libm::lgamma_r(x);
        SignedLog {
            ln,
            sign: if s < 0 { -1.0 } else { 1.0 },
        }
    }

    pub fn factorial(n: u32) -> Self {
        Self::gamma(n as f64 + 1.0)
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * libm::exp(self.ln)
        }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog {
            ln: self.ln + rhs.ln,
            sign: self.sign * rhs.sign,
        }
    }
}

impl Div for SignedLog {
    type Output = SignedLog;
    fn div(self, rhs: SignedLog) -> SignedLog {
        SignedLog {
            ln: self.ln - rhs.ln,
            sign: self.sign * rhs.sign,
        }
    }
}

/// Binomial coefficient as a product of ratios; exact for results below 2^53.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    if c < 9.007_199_254_740_992e15 {
        libm::round(c)
    } else {
        c
    }
}

pub fn factorial(n: u32) -> f64 {
    let mut f = 1.0;
    for i in 2..=n {
        f *= i as f64;
    }
    f
}

pub const SQRT_PI: f64 = 1.772_453_850_905_516;

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: Vec3) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn normalize(a: Vec3) -> Vec3 {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

pub fn mat_vec(m: &Mat3, v: Vec3) -> Vec3 {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

pub fn mat_t_vec(m: &Mat3, v: Vec3) -> Vec3 {
    [
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    ]
}

/// Rotation by `angle` about the unit `axis` (Rodrigues).
pub fn rotation(axis: Vec3, angle: f64) -> Mat3 {
    let [x, y, z] = normalize(axis);
    let (s, c) = (libm::sin(angle), libm::cos(angle));
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    m
}

/// Right-handed orthonormal frame `(e₁, e₂)` of u^⊥: e₁ = normalize(u × a) with
/// `a` the standard axis least aligned with `u`, e₂ = u × e₁.
pub fn frame(u: Vec3) -> (Vec3, Vec3) {
    let ax = [u[0].abs(), u[1].abs(), u[2].abs()];
    let mut k = 0;
    if ax[1] < ax[k] {
        k = 1;
    }
    if ax[2] < ax[k] {
        k = 2;
    }
    let mut a = [0.0; 3];
    a[k] = 1.0;
    let e1 = normalize(cross(u, a));
    let e2 = cross(u, e1);
    (e1, e2)
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = theta - two_pi * libm::floor(theta / two_pi);
    if r >= two_pi {
        0.0
    } else {
        r
    }
}

/// Brent's method on a bracket with `f(a)·f(b) ≤ 0`.
pub fn brent_root<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return b;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    b
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Deterministic, well-spread unit directions (Fibonacci lattice).
pub fn fibonacci_directions(count: usize) -> alloc::vec::Vec<Vec3> {
    let golden = PI * (3.0 - libm::sqrt(5.0));
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = libm::sqrt((1.0 - z * z).max(0.0));
            let phi = golden * i as f64;
            [r * libm::cos(phi), r * libm::sin(phi), z]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: alloc::vec::Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn signed_gamma_of_negative_half() {
        // Γ(-1/2) = -2√π
        let g = SignedLog::gamma(-0.5);
        assert!((g.value() + 2.0 * SQRT_PI).abs() < 1e-14);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(4, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial(30, 15), 155_117_520.0);
    }

    #[test]
    fn brent_finds_cos_root() {
        let r = brent_root(libm::cos, 1.0, 2.0, 1e-14);
        assert!((r - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn frame_is_orthonormal_and_right_handed() {
        for u in fibonacci_directions(50) {
            let (e1, e2) = frame(u);
            assert!((norm(e1) - 1.0).abs() < 1e-14 && (norm(e2) - 1.0).abs() < 1e-14);
            assert!(
                dot(e1, u).abs() < 1e-14 && dot(e2, u).abs() < 1e-14 && dot(e1, e2).abs() < 1e-14
            );
            let n = cross(e1, e2);
            assert!((dot(n, u) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = rotation([1.0, 2.0, 3.0], 0.7);
        let rt_r = mat_mul(
            &[
                [r[0][0], r[1][0], r[2][0]],
                [r[0][1], r[1][1], r[2][1]],
                [r[0][2], r[1][2], r[2][2]],
            ],
            &r,
        );
        for (i, row) in rt_r.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-14);
            }
        }
    }
}
