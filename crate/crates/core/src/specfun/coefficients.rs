//! Closed-form coefficient families.
//!
//! Gamma ratios go through [`SignedLog`] so that factorials and half-integer
//! Gammas can be mixed without overflow; index ranges are tested up to 30.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::hyp3f2_terminating;
use crate::math::{binomial, powi, SignedLog, SQRT_PI};
use crate::{Error, Result};

/// μ_{n,k}: t^{2n} = Σ_{k=0}^{n} μ_{n,k} P_{2k}(t).
pub fn mu_coeff(n: u32, k: u32) -> Result<f64> {
    if k > n {
        return Err(Error::InvalidArgument(alloc::format!(
            "mu needs k ≤ n, got n={n}, k={k}"
        )));
    }
    let nf = n as f64;
    let kf = k as f64;
    let num = SignedLog::from_value((4.0 * kf + 1.0) * SQRT_PI) * SignedLog::gamma(2.0 * nf + 1.0);
    let den = SignedLog::from_value(2.0)
        * SignedLog {
            ln: 2.0 * nf * core::f64::consts::LN_2,
            sign: 1.0,
        }
        * SignedLog::gamma(nf - kf + 1.0)
        * SignedLog::gamma(nf + kf + 1.5);
    Ok((num / den).value())
}

/// α_{n,m}: cos 2nx = Σ_{m=0}^{n} α_{n,m} sin^{2m} x.
///
/// Computed as a running product of small ratios, exact to rounding for n ≤ 30.
pub fn alpha_coeff(n: u32, m: u32) -> Result<f64> {
    if n == 0 || m > n {
        return Err(Error::InvalidArgument(alloc::format!(
            "alpha needs n ≥ 1 and m ≤ n, got n={n}, m={m}"
        )));
    }
    // α_{n,0} = 1 and α_{n,m}/α_{n,m−1} = −4 (n+m−1)(n−m+1) / ((2m)(2m−1)).
    let mut a = 1.0;
    for j in 1..=m {
        let jf = j as f64;
        let nf = n as f64;
        a *= -4.0 * (nf + jf - 1.0) * (nf - jf + 1.0) / ((2.0 * jf) * (2.0 * jf - 1.0));
    }
    Ok(a)
}

/// A_r^{(n)}, the coefficients of the visual-angle profile of t^{2n}:
/// H(x) = A₀x² + Σ_{r=1}^{n+1} A_r sin^{2r} x.
///
/// For r ≥ 1 this is the ₃F₂ closed form; A₀ is defined as −A₁, the value the
/// profile's boundary conditions force (see [`a0_displayed`] for the
/// closed form C(2n, n)/2^{2(n+1)}, which disagrees with it when n ≥ 1).
pub fn a_coeff(n: u32, r: u32) -> Result<f64> {
    if r > n + 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "A needs r ≤ n+1, got n={n}, r={r}"
        )));
    }
    if r == 0 {
        return a_coeff(n, 1).map(|a1| -a1);
    }
    let rf = r as f64;
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let pre = sign * binomial(n, r - 1) / (4.0 * rf * rf);
    let f = hyp3f2_terminating(1.0, rf + 0.5, rf - n as f64 - 1.0, rf, rf + 1.0)?;
    Ok(pre * f)
}

/// The displayed x² coefficient C(2n, n) / 2^{2(n+1)}, kept for comparison with A₀.
pub fn a0_displayed(n: u32) -> f64 {
    binomial(2 * n, n) / powi(2.0, 2 * (n + 1))
}

/// The x² coefficient from the mean of cos^{2n}x sin²x: C(2n, n) / (2^{2(n+1)} (n+1)).
pub fn a0_from_mean(n: u32) -> f64 {
    a0_displayed(n) / (n as f64 + 1.0)
}

/// A_r^{(n)} by the explicit double-integration sum,
/// A_r = ¼ Σ_{k=r−1}^{n} C(n,k) (−1)^{k+1}/(k+1) · β_{k−r+1}^{(k)} / r.
pub fn a_coeff_by_sum(n: u32, r: u32) -> Result<f64> {
    if r == 0 || r > n + 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "A-sum needs 1 ≤ r ≤ n+1, got r={r}"
        )));
    }
    let mut total = 0.0;
    for k in (r - 1)..=n {
        let s = k + 1 - r;
        // β_s^{(k)} = Γ(k−s+1)Γ(k+3/2) / (Γ(k+1)Γ(k−s+3/2))
        let kf = k as f64;
        let sf = s as f64;
        let beta = (SignedLog::gamma(kf - sf + 1.0) * SignedLog::gamma(kf + 1.5)
            / (SignedLog::gamma(kf + 1.0) * SignedLog::gamma(kf - sf + 1.5)))
        .value();
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        total += binomial(n, k) * sign / (kf + 1.0) * beta / r as f64;
    }
    Ok(0.25 * total)
}

/// Leading coefficient of the sin^{2m} line integral: m√π(m−2)! / (4Γ(m+½)).
pub fn sinpow_leading(m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "sin-power needs m ≥ 2, got {m}"
        )));
    }
    let mf = m as f64;
    let v = SignedLog::from_value(mf * SQRT_PI) * SignedLog::factorial(m - 2)
        / (SignedLog::from_value(4.0) * SignedLog::gamma(mf + 0.5));
    Ok(v.value())
}

/// β_{2k} = 2π∫h_m P_{2k}, closed form, for 1 ≤ k ≤ m−1.
pub fn beta_coeff(m: u32, k: u32) -> Result<f64> {
    if m < 2 || k == 0 || k >= m {
        return Err(Error::InvalidArgument(alloc::format!(
            "beta needs m ≥ 2 and 1 ≤ k ≤ m−1, got m={m}, k={k}"
        )));
    }
    let mf = m as f64;
    let kf = k as f64;
    let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let poly = (2.0 * mf - 1.0) * (2.0 * kf - 1.0) * (kf + 1.0) + mf;
    let num = SignedLog::from_value(sign * mf * poly * PI)
        * SignedLog::factorial(m - 2)
        * SignedLog::factorial(m - 2)
        * SignedLog::gamma(kf + 0.5);
    let den =
        SignedLog::factorial(k) * SignedLog::factorial(m - k - 1) * SignedLog::gamma(mf + kf + 0.5);
    Ok((num / den).value())
}

/// h_m(t) = m(2mt² − 1)(1 − t²)^{m−2}.
pub fn hm_polynomial(m: u32, t: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "h_m needs m ≥ 2, got {m}"
        )));
    }
    let mf = m as f64;
    Ok(mf * (2.0 * mf * t * t - 1.0) * powi(1.0 - t * t, m - 2))
}

/// ∫₋₁¹ h_m(t) t^{2j} dt = m(4mj − 2j + 1)Γ(j+½)Γ(m−1) / (2Γ(m+j+½)).
pub fn hm_moment(m: u32, j: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "h_m needs m ≥ 2, got {m}"
        )));
    }
    let mf = m as f64;
    let jf = j as f64;
    let num = SignedLog::from_value(mf * (4.0 * mf * jf - 2.0 * jf + 1.0))
        * SignedLog::gamma(jf + 0.5)
        * SignedLog::gamma(mf - 1.0);
    let den = SignedLog::from_value(2.0) * SignedLog::gamma(mf + jf + 0.5);
    Ok((num / den).value())
}

/// Γ(n+½)² / Γ(n+1)², the weight of ‖π_{2n}‖² in the Crofton deficit.
pub fn crofton_weight(n: u32) -> f64 {
    let nf = n as f64;
    let r = SignedLog::gamma(nf + 0.5) / SignedLog::gamma(nf + 1.0);
    (r * r).value()
}

/// Γ(n+½)Γ(n−½) / (n!(n+1)!), the weight of ‖π_{2n}‖² in the sine-kernel series.
pub fn sine_kernel_weight(n: u32) -> f64 {
    let nf = n as f64;
    (SignedLog::gamma(nf + 0.5) * SignedLog::gamma(nf - 0.5)
        / (SignedLog::factorial(n) * SignedLog::factorial(n + 1)))
    .value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CoefficientFamily {
    Lambda,
    Mu,
    Alpha,
    A,
    Beta,
    AFourier,
}

impl CoefficientFamily {
    pub fn name(self) -> &'static str {
        match self {
            CoefficientFamily::Lambda => "lambda",
            CoefficientFamily::Mu => "mu",
            CoefficientFamily::Alpha => "alpha",
            CoefficientFamily::A => "A",
            CoefficientFamily::Beta => "beta",
            CoefficientFamily::AFourier => "a_fourier",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CoefficientRow {
    pub indices: Vec<u32>,
    pub value: f64,
    /// Set on A₀ rows: the displayed closed form and its difference from `value`.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub displayed: Option<f64>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub discrepancy: Option<f64>,
}

impl CoefficientRow {
    pub fn new(indices: Vec<u32>, value: f64) -> Self {
        CoefficientRow {
            indices,
            value,
            displayed: None,
            discrepancy: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CoefficientTable {
    pub family: CoefficientFamily,
    /// Names of the entries of each row's `indices`.
    pub index_names: Vec<&'static str>,
    pub rows: Vec<CoefficientRow>,
}

impl CoefficientTable {
    pub fn mu(n_values: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut rows = Vec::new();
        for n in n_values {
            for k in 0..=n {
                rows.push(CoefficientRow::new(alloc::vec![n, k], mu_coeff(n, k)?));
            }
        }
        Ok(CoefficientTable {
            family: CoefficientFamily::Mu,
            index_names: alloc::vec!["n", "k"],
            rows,
        })
    }

    pub fn alpha(n_values: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut rows = Vec::new();
        for n in n_values {
            for m in 0..=n {
                rows.push(CoefficientRow::new(alloc::vec![n, m], alpha_coeff(n, m)?));
            }
        }
        Ok(CoefficientTable {
            family: CoefficientFamily::Alpha,
            index_names: alloc::vec!["n", "m"],
            rows,
        })
    }

    /// A_r^{(n)} for r = 0..n+1. The r = 0 row carries the displayed closed form.
    pub fn a(n_values: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut rows = Vec::new();
        for n in n_values {
            for r in 0..=n + 1 {
                let mut row = CoefficientRow::new(alloc::vec![n, r], a_coeff(n, r)?);
                if r == 0 {
                    let shown = a0_displayed(n);
                    row.displayed = Some(shown);
                    row.discrepancy = Some(shown - row.value);
                }
                rows.push(row);
            }
        }
        Ok(CoefficientTable {
            family: CoefficientFamily::A,
            index_names: alloc::vec!["n", "r"],
            rows,
        })
    }

    /// β_{2k} for k = 1..m−1, preceded by the leading M² coefficient as k = 0.
    pub fn beta(m_values: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut rows = Vec::new();
        for m in m_values {
            rows.push(CoefficientRow::new(alloc::vec![m, 0], sinpow_leading(m)?));
            for k in 1..m {
                rows.push(CoefficientRow::new(alloc::vec![m, k], beta_coeff(m, k)?));
            }
        }
        Ok(CoefficientTable {
            family: CoefficientFamily::Beta,
            index_names: alloc::vec!["m", "k"],
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn mu_small_cases() {
        assert!(close(mu_coeff(0, 0).unwrap(), 1.0, 1e-15));
        assert!(close(mu_coeff(1, 0).unwrap(), 1.0 / 3.0, 1e-15));
        assert!(close(mu_coeff(1, 1).unwrap(), 2.0 / 3.0, 1e-15));
        assert!(mu_coeff(1, 2).is_err());
    }

    #[test]
    fn alpha_small_cases() {
        for n in 1..10 {
            assert_eq!(alpha_coeff(n, 0).unwrap(), 1.0);
            assert_eq!(alpha_coeff(n, 1).unwrap(), -2.0 * (n * n) as f64);
        }
        assert_eq!(alpha_coeff(1, 1).unwrap(), -2.0);
        assert_eq!(alpha_coeff(2, 2).unwrap(), 8.0);
        assert!(alpha_coeff(0, 0).is_err());
    }

    #[test]
    fn alpha_matches_factorial_form() {
        // (−1)^m n 2^{2m} (n+m−1)! / ((2m)! (n−m)!)
        for n in 1..=12u32 {
            for m in 0..=n {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let direct = sign * n as f64 * powi(2.0, 2 * m) * crate::math::factorial(n + m - 1)
                    / (crate::math::factorial(2 * m) * crate::math::factorial(n - m));
                assert!(
                    close(alpha_coeff(n, m).unwrap(), direct, 1e-13),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn a_coefficients_known_profiles() {
        // f ≡ 1: H = (x² − sin²x)/4
        assert!(close(a_coeff(0, 1).unwrap(), -0.25, 1e-15));
        assert!(close(a_coeff(0, 0).unwrap(), 0.25, 1e-15));
        // f = t²: H = (x² − sin²x + sin⁴x)/16
        assert!(close(a_coeff(1, 0).unwrap(), 1.0 / 16.0, 1e-15));
        assert!(close(a_coeff(1, 1).unwrap(), -1.0 / 16.0, 1e-15));
        assert!(close(a_coeff(1, 2).unwrap(), 1.0 / 16.0, 1e-15));
        assert!(a_coeff(1, 3).is_err());
    }

    #[test]
    fn a_closed_form_agrees_with_sum() {
        for n in 0..=10 {
            for r in 1..=n + 1 {
                let a = a_coeff(n, r).unwrap();
                let b = a_coeff_by_sum(n, r).unwrap();
                assert!((a - b).abs() < 1e-12, "n={n} r={r}: {a} vs {b}");
            }
            assert!(
                (a_coeff(n, 0).unwrap() - a0_from_mean(n)).abs() < 1e-14,
                "n={n}"
            );
        }
    }

    #[test]
    fn displayed_a0_differs_from_profile_value_for_n_one() {
        assert!(close(a0_displayed(1), 0.125, 1e-15));
        assert!(close(a_coeff(1, 0).unwrap(), 0.0625, 1e-15));
        assert_eq!(a0_displayed(0), a_coeff(0, 0).unwrap());
    }

    #[test]
    fn beta_and_leading_known_values() {
        assert!(close(beta_coeff(2, 1).unwrap(), 64.0 * PI / 15.0, 1e-14));
        assert!(close(sinpow_leading(2).unwrap(), 2.0 / 3.0, 1e-14));
        assert!(beta_coeff(2, 2).is_err());
        assert!(beta_coeff(1, 1).is_err());
    }

    #[test]
    fn hm_values() {
        assert!(close(
            hm_polynomial(2, 0.3).unwrap(),
            2.0 * (4.0 * 0.09 - 1.0),
            1e-15
        ));
        for m in 3..10 {
            assert_eq!(hm_polynomial(m, 1.0).unwrap(), 0.0);
            assert_eq!(hm_polynomial(m, -1.0).unwrap(), 0.0);
        }
        assert!(close(hm_moment(2, 0).unwrap(), 4.0 / 3.0, 1e-14));
    }

    #[test]
    fn weights() {
        // Γ(3/2)²/Γ(2)² = π/4; Γ(3/2)Γ(1/2)/(1!2!) = π/4
        assert!(close(crofton_weight(1), PI / 4.0, 1e-14));
        assert!(close(sine_kernel_weight(1), PI / 4.0, 1e-14));
        assert!(close(crofton_weight(0), PI, 1e-14));
    }

    #[test]
    fn a_table_reports_displayed_discrepancy() {
        let t = CoefficientTable::a([1]).unwrap();
        let row0 = &t.rows[0];
        assert_eq!(row0.indices, [1, 0]);
        assert!(close(row0.discrepancy.unwrap(), 0.0625, 1e-15));
        assert_eq!(t.rows.len(), 3);
    }
}
