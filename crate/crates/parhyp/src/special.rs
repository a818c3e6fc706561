//! Error-function helpers and closed-form antiderivatives used by the
//! heat-kernel machinery.
//!
//! Everything singular in this crate eventually reduces to sums of
//! `erfc(c / (2 sqrt(s)))` terms (first-passage distributions of the image
//! charges). The [`ErfcSeries`] type carries such a sum together with its
//! first two exact antiderivatives, which is what the product-integration
//! convolutions need.

pub use libm::{erf, erfc};

use std::f64::consts::PI;

/// Terms with `c` beyond this never contribute above 1e-15 for s <= 1.
const C_CUTOFF: f64 = 14.0;

/// `int_0^s erfc(c / (2 sqrt(u))) du` for `c >= 0`, `s >= 0`.
pub fn erfc_antider0(c: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if c <= 0.0 {
        return s;
    }
    let z = c / (2.0 * s.sqrt());
    (s + 0.5 * c * c) * erfc(z) - c * (s / PI).sqrt() * (-z * z).exp()
}

/// `int_0^s u * erfc(c / (2 sqrt(u))) du` for `c >= 0`, `s >= 0`.
pub fn erfc_antider1(c: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if c <= 0.0 {
        return 0.5 * s * s;
    }
    let z = c / (2.0 * s.sqrt());
    let c2 = c * c;
    (0.5 * s * s - c2 * c2 / 24.0) * erfc(z)
        + c * s.sqrt() / (6.0 * PI.sqrt()) * (0.5 * c2 - s) * (-z * z).exp()
}

/// `int_0^s u^2 * erfc(c / (2 sqrt(u))) du` for `c >= 0`, `s >= 0`.
pub fn erfc_antider2(c: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if c <= 0.0 {
        return s * s * s / 3.0;
    }
    let a = 0.5 * c;
    let a2 = a * a;
    let z = a / s.sqrt();
    let rs = s.sqrt();
    (s * s * s / 3.0 + 8.0 / 45.0 * a2 * a2 * a2) * erfc(z)
        - a / (3.0 * PI.sqrt())
            * (0.4 * s * s * rs - (4.0 / 15.0) * a2 * s * rs + (8.0 / 15.0) * a2 * a2 * rs)
            * (-z * z).exp()
}

/// A finite sum `F(s) = sum_k coeff_k * erfc(c_k / (2 sqrt(s)))`, `F(0) = 0`.
///
/// Used for the cumulative boundary flux `W(s, y)` and the two-sided exit
/// law `P(s; y, y1)`; both have boundary layers of width `~ y^2` near `s = 0`
/// that plain interpolation cannot resolve, so convolutions against them use
/// the exact panel moments [`ErfcSeries::m0`] / [`ErfcSeries::m1`].
#[derive(Debug, Clone)]
pub struct ErfcSeries {
    terms: Vec<(f64, f64)>, // (coeff, c)
}

impl ErfcSeries {
    pub fn new(terms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|&(co, c)| co != 0.0 && c < C_CUTOFF)
            .collect();
        Self { terms }
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let r = 2.0 * s.sqrt();
        let mut acc = 0.0;
        for &(co, c) in &self.terms {
            acc += co * erfc(c / r);
        }
        acc
    }

    /// Exact `int_0^s F(u) du`.
    pub fn m0(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &(co, c) in &self.terms {
            acc += co * erfc_antider0(c, s);
        }
        acc
    }

    /// Exact `int_0^s u F(u) du`.
    pub fn m1(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &(co, c) in &self.terms {
            acc += co * erfc_antider1(c, s);
        }
        acc
    }

    /// Exact `int_0^s u^2 F(u) du`.
    pub fn m2(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &(co, c) in &self.terms {
            acc += co * erfc_antider2(c, s);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num_int<F: Fn(f64) -> f64>(f: F, s: f64, n: usize) -> f64 {
        // composite Simpson on a sqrt-graded mesh (integrands vanish at 0)
        let mut acc = 0.0;
        for i in 0..n {
            let a = s * (i as f64 / n as f64).powi(2);
            let b = s * ((i + 1) as f64 / n as f64).powi(2);
            let m = 0.5 * (a + b);
            acc += (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
        }
        acc
    }

    #[test]
    fn antiderivatives_match_quadrature() {
        for &c in &[0.4, 1.3, 2.7] {
            for &s in &[0.3, 1.0] {
                let f0 = |u: f64| if u > 0.0 { erfc(c / (2.0 * u.sqrt())) } else { 0.0 };
                let n0 = num_int(f0, s, 4000);
                assert!((n0 - erfc_antider0(c, s)).abs() < 1e-9, "A0 c={c} s={s}");
                let f1 = |u: f64| u * f0(u);
                let n1 = num_int(f1, s, 4000);
                assert!((n1 - erfc_antider1(c, s)).abs() < 1e-9, "A1 c={c} s={s}");
                let f2 = |u: f64| u * u * f0(u);
                let n2 = num_int(f2, s, 4000);
                assert!((n2 - erfc_antider2(c, s)).abs() < 1e-9, "A2 c={c} s={s}");
            }
        }
    }

    #[test]
    fn zero_offset_limits() {
        assert_eq!(erfc_antider0(0.0, 0.5), 0.5);
        assert_eq!(erfc_antider1(0.0, 0.5), 0.125);
    }

    #[test]
    fn series_moments_consistent() {
        let s = ErfcSeries::new([(1.0, 0.5), (-1.0, 1.5)]);
        let n0 = num_int(|u| s.eval(u), 0.8, 4000);
        assert!((n0 - s.m0(0.8)).abs() < 1e-9);
    }
}
