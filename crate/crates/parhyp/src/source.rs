//! Source terms `f(x, y)` and their partial integrals.
//!
//! Every supported shape has closed-form integrals against Gaussians on
//! [0, 1], which is what keeps the parabolic quadratures accurate near the
//! short-time limit where the heat kernel concentrates.

use crate::error::Error;
use crate::special::erf;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceKind {
    Zero,
    /// `f = value`.
    Constant { value: f64 },
    /// `f = sum_ij coeffs[i][j] x^i y^j` (row index = power of x).
    Polynomial { coeffs: Vec<Vec<f64>> },
    /// `f = amplitude * exp(-((x-x0)^2 + (y-y0)^2) / (2 sigma^2))`.
    GaussianBump {
        amplitude: f64,
        x0: f64,
        y0: f64,
        sigma: f64,
    },
    /// `f = (sum_i fx[i] x^i) * (sum_j fy[j] y^j)`.
    SeparableProduct { fx: Vec<f64>, fy: Vec<f64> },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Whole,
    ParabolicOnly,
    HyperbolicOnly,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SourceField {
    #[serde(flatten)]
    pub kind: SourceKind,
    pub support: Support,
}

impl SourceField {
    pub fn zero() -> Self {
        Self {
            kind: SourceKind::Zero,
            support: Support::Whole,
        }
    }

    /// `f = 4` on the hyperbolic region only, i.e. `f1 = 1`.
    pub fn hyperbolic_constant() -> Self {
        Self {
            kind: SourceKind::Constant { value: 4.0 },
            support: Support::HyperbolicOnly,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            SourceKind::GaussianBump { sigma, .. } => {
                if *sigma < 0.02 {
                    return Err(Error::Config(
                        "gaussian bump sigma below 0.02 is not resolvable by the fixed rules"
                            .into(),
                    ));
                }
            }
            SourceKind::Polynomial { coeffs } => {
                if coeffs.iter().map(|r| r.len()).max().unwrap_or(0) > 8 || coeffs.len() > 8 {
                    return Err(Error::Config("polynomial degree capped at 7".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn active_parabolic(&self) -> bool {
        !matches!(self.support, Support::HyperbolicOnly)
    }

    fn active_hyperbolic(&self) -> bool {
        !matches!(self.support, Support::ParabolicOnly)
    }

    fn raw(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            SourceKind::Zero => 0.0,
            SourceKind::Constant { value } => *value,
            SourceKind::Polynomial { coeffs } => {
                let mut acc = 0.0;
                let mut xp = 1.0;
                for row in coeffs {
                    let mut yp = 1.0;
                    for &c in row {
                        acc += c * xp * yp;
                        yp *= y;
                    }
                    xp *= x;
                }
                acc
            }
            SourceKind::GaussianBump {
                amplitude,
                x0,
                y0,
                sigma,
            } => {
                let d2 = (x - x0).powi(2) + (y - y0).powi(2);
                amplitude * (-d2 / (2.0 * sigma * sigma)).exp()
            }
            SourceKind::SeparableProduct { fx, fy } => {
                let px: f64 = fx
                    .iter()
                    .rev()
                    .fold(0.0, |acc, &c| acc * x + c);
                let py: f64 = fy.iter().rev().fold(0.0, |acc, &c| acc * y + c);
                px * py
            }
        }
    }

    /// Value at a physical point, honouring the support mask.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if y >= 0.0 {
            if self.active_parabolic() {
                self.raw(x, y)
            } else {
                0.0
            }
        } else if self.active_hyperbolic() {
            self.raw(x, y)
        } else {
            0.0
        }
    }

    /// Characteristic-coordinate form `f1(xi, eta) = f((xi+eta)/2, (xi-eta)/2) / 4`.
    pub fn f1(&self, xi: f64, eta: f64) -> f64 {
        if !self.active_hyperbolic() {
            return 0.0;
        }
        0.25 * self.raw(0.5 * (xi + eta), 0.5 * (xi - eta))
    }

    /// Closed form `int_0^1 e^{-(y1-mu)^2/(4s)} f(x1, y1) dy1` divided by
    /// nothing (the Gaussian is unnormalized, matching the image series).
    pub fn gauss_moment(&self, s: f64, mu: f64, x1: f64) -> f64 {
        if !self.active_parabolic() {
            return 0.0;
        }
        match &self.kind {
            SourceKind::Zero => 0.0,
            SourceKind::Constant { value } => value * gauss_m0(s, mu),
            SourceKind::Polynomial { coeffs } => {
                let deg_y = coeffs.iter().map(|r| r.len()).max().unwrap_or(0);
                let moments = gauss_moments(s, mu, deg_y);
                let mut acc = 0.0;
                let mut xp = 1.0;
                for row in coeffs {
                    for (j, &c) in row.iter().enumerate() {
                        acc += c * xp * moments[j];
                    }
                    xp *= x1;
                }
                acc
            }
            SourceKind::GaussianBump {
                amplitude,
                x0,
                y0,
                sigma,
            } => {
                // product of two Gaussians in y1: exponents add;
                // 1/(4s) + 1/(2 sigma^2) =: 1/(4 s_eff)
                let xfac = amplitude * (-(x1 - x0).powi(2) / (2.0 * sigma * sigma)).exp();
                let p = 1.0 / (4.0 * s);
                let q = 1.0 / (2.0 * sigma * sigma);
                let r = p + q;
                let mu_eff = (p * mu + q * y0) / r;
                let pref = (-(p * q / r) * (mu - y0).powi(2)).exp();
                let s_eff = 1.0 / (4.0 * r);
                xfac * pref * gauss_m0(s_eff, mu_eff)
            }
            SourceKind::SeparableProduct { fx, fy } => {
                let px: f64 = fx.iter().rev().fold(0.0, |acc, &c| acc * x1 + c);
                let moments = gauss_moments(s, mu, fy.len());
                let py: f64 = fy.iter().enumerate().map(|(j, &c)| c * moments[j]).sum();
                px * py
            }
        }
    }
}

impl SourceField {
    /// Closed form `int_0^1 (y1 - mu) e^{-(y1-mu)^2/(4s)} f(x1, y1) dy1`
    /// (the flux-kernel image moment).
    pub fn flux_moment(&self, s: f64, mu: f64, x1: f64) -> f64 {
        if !self.active_parabolic() {
            return 0.0;
        }
        let e0 = (-mu * mu / (4.0 * s)).exp();
        let e1 = (-(1.0 - mu).powi(2) / (4.0 * s)).exp();
        // int y^k (y-mu) e dy = 2s (k M_{k-1} - [y^k e]_0^1)
        let fm = |k: usize, m: &[f64]| -> f64 {
            let boundary = if k == 0 { e1 - e0 } else { e1 };
            let prev = if k == 0 { 0.0 } else { k as f64 * m[k - 1] };
            2.0 * s * (prev - boundary)
        };
        match &self.kind {
            SourceKind::Zero => 0.0,
            SourceKind::Constant { value } => value * fm(0, &[]),
            SourceKind::Polynomial { coeffs } => {
                let deg_y = coeffs.iter().map(|r| r.len()).max().unwrap_or(0);
                let m = gauss_moments(s, mu, deg_y.max(1));
                let mut acc = 0.0;
                let mut xp = 1.0;
                for row in coeffs {
                    for (j, &c) in row.iter().enumerate() {
                        acc += c * xp * fm(j, &m);
                    }
                    xp *= x1;
                }
                acc
            }
            SourceKind::SeparableProduct { fx, fy } => {
                let px: f64 = fx.iter().rev().fold(0.0, |acc, &c| acc * x1 + c);
                let m = gauss_moments(s, mu, fy.len().max(1));
                let py: f64 = fy.iter().enumerate().map(|(j, &c)| c * fm(j, &m)).sum();
                px * py
            }
            SourceKind::GaussianBump {
                amplitude,
                x0,
                y0,
                sigma,
            } => {
                let xfac = amplitude * (-(x1 - x0).powi(2) / (2.0 * sigma * sigma)).exp();
                let p = 1.0 / (4.0 * s);
                let q = 1.0 / (2.0 * sigma * sigma);
                let r = p + q;
                let mu_eff = (p * mu + q * y0) / r;
                let pref = (-(p * q / r) * (mu - y0).powi(2)).exp();
                let s_eff = 1.0 / (4.0 * r);
                let ee0 = (-mu_eff * mu_eff / (4.0 * s_eff)).exp();
                let ee1 = (-(1.0 - mu_eff).powi(2) / (4.0 * s_eff)).exp();
                // (y-mu) = (y-mu_eff) + (mu_eff-mu)
                xfac * pref
                    * (-2.0 * s_eff * (ee1 - ee0) + (mu_eff - mu) * gauss_m0(s_eff, mu_eff))
            }
        }
    }
}

/// `int_0^1 e^{-(y-mu)^2/(4s)} dy`.
fn gauss_m0(s: f64, mu: f64) -> f64 {
    let r = 2.0 * s.sqrt();
    (PI * s).sqrt() * (erf((1.0 - mu) / r) + erf(mu / r))
}

/// Moments `M_k = int_0^1 y^k e^{-(y-mu)^2/(4s)} dy`, k < deg.
fn gauss_moments(s: f64, mu: f64, deg: usize) -> Vec<f64> {
    let mut m = vec![0.0; deg.max(1)];
    let e0 = (-mu * mu / (4.0 * s)).exp();
    let e1 = (-(1.0 - mu).powi(2) / (4.0 * s)).exp();
    m[0] = gauss_m0(s, mu);
    if deg >= 2 {
        m[1] = mu * m[0] - 2.0 * s * (e1 - e0);
    }
    for k in 2..deg {
        m[k] = mu * m[k - 1] + 2.0 * s * ((k - 1) as f64 * m[k - 2] - e1);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn gauss_moments_match_quadrature() {
        for &(s, mu) in &[(0.02, 0.3), (0.2, 0.9), (0.004, 0.0)] {
            let m = gauss_moments(s, mu, 5);
            for k in 0..5 {
                let q = integrate(
                    |y| y.powi(k as i32) * (-(y - mu).powi(2) / (4.0 * s)).exp(),
                    0.0,
                    1.0,
                    64,
                );
                assert!((m[k] - q).abs() < 1e-12, "k={k} s={s} mu={mu}: {} vs {q}", m[k]);
            }
        }
    }

    #[test]
    fn source_moment_matches_quadrature() {
        let f = SourceField {
            kind: SourceKind::GaussianBump {
                amplitude: 2.0,
                x0: 0.4,
                y0: 0.3,
                sigma: 0.25,
            },
            support: Support::Whole,
        };
        let (s, mu, x1) = (0.01, 0.6, 0.4);
        let q = integrate(
            |y1| (-(y1 - mu).powi(2) / (4.0 * s)).exp() * f.eval(x1, y1),
            0.0,
            1.0,
            64,
        );
        assert!((f.gauss_moment(s, mu, x1) - q).abs() < 1e-12);
    }

    #[test]
    fn flux_moment_matches_quadrature() {
        let cases = vec![
            SourceField {
                kind: SourceKind::Polynomial {
                    coeffs: vec![vec![0.5, -1.0, 2.0], vec![1.0, 0.3]],
                },
                support: Support::Whole,
            },
            SourceField {
                kind: SourceKind::GaussianBump {
                    amplitude: 1.5,
                    x0: 0.3,
                    y0: 0.6,
                    sigma: 0.2,
                },
                support: Support::Whole,
            },
        ];
        for f in cases {
            for &(s, mu, x1) in &[(0.02, -2.0, 0.3), (0.1, 2.0, 0.7), (0.05, 0.4, 0.5)] {
                let q = integrate(
                    |y| (y - mu) * (-(y - mu).powi(2) / (4.0 * s)).exp() * f.eval(x1, y),
                    0.0,
                    1.0,
                    64,
                );
                let m = f.flux_moment(s, mu, x1);
                assert!((m - q).abs() < 1e-12, "{f:?} s={s} mu={mu}: {m} vs {q}");
            }
        }
    }

    #[test]
    fn support_masks() {
        let f = SourceField {
            kind: SourceKind::Constant { value: 4.0 },
            support: Support::HyperbolicOnly,
        };
        assert_eq!(f.eval(0.5, 0.5), 0.0);
        assert_eq!(f.eval(0.5, -0.2), 4.0);
        assert_eq!(f.f1(0.2, 0.6), 1.0);
        assert_eq!(f.gauss_moment(0.01, 0.5, 0.5), 0.0);
    }

    #[test]
    fn characteristic_form() {
        let f = SourceField {
            kind: SourceKind::Polynomial {
                coeffs: vec![vec![1.0, 2.0], vec![3.0]],
            },
            support: Support::Whole,
        };
        let (xi, eta) = (0.3, 0.8);
        let (x, y) = ((xi + eta) / 2.0, (xi - eta) / 2.0);
        assert!((f.f1(xi, eta) - 0.25 * f.eval(x, y)).abs() < 1e-15);
    }
}
