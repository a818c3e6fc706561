//! Dirichlet heat kernel on the unit strip by the method of images, and
//! the derived boundary kernels.
//!
//! The Green's function of the first boundary problem on `0 < y < 1` is
//!
//! ```text
//!   G(x, y, y1) = 1/(2 sqrt(pi x)) * sum_n [ e^{-(y-y1+2n)^2/(4x)} - e^{-(y+y1+2n)^2/(4x)} ],
//! ```
//!
//! its wall flux is `G0(x, y1) = G_y(x, y1, 0)`, the boundary kernel is
//! `k(x) = 1/sqrt(pi x) * sum_n e^{-n^2/x}`, and the cumulative flux
//! `W(xi, y) = int_0^xi G0(t, y) dt` collapses to differences of error
//! functions between image bounds.
//!
//! Note the printed flux series elsewhere carries the exponent
//! `(y1+2n)/(4x)`; differentiating `G` gives `(y1+2n)^2/(4x)` and the
//! squared form is what this module implements (the unsquared one does not
//! even converge).

use crate::error::Error;
use crate::special::{erf, ErfcSeries};
use crate::Result;
use std::f64::consts::PI;

/// Truncation control for the image series.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEvalParams {
    /// Absolute truncation tolerance.
    pub eps: f64,
    /// Maximum image index.
    pub n_cap: usize,
}

impl Default for SeriesEvalParams {
    fn default() -> Self {
        Self {
            eps: 1e-14,
            n_cap: 64,
        }
    }
}

impl SeriesEvalParams {
    pub fn new(eps: f64, n_cap: usize) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Domain("series eps must be positive".into()));
        }
        if n_cap < 1 {
            return Err(Error::Domain("series n_cap must be >= 1".into()));
        }
        Ok(Self { eps, n_cap })
    }

    /// Image count: N = ceil(sqrt(max(x,1e-12) ln(1/eps))) + 1, capped.
    pub fn trunc(&self, x: f64) -> Result<usize> {
        let n = (x.max(1e-12) * (1.0 / self.eps).ln()).sqrt().ceil() as usize + 1;
        if n > self.n_cap {
            return Err(Error::TruncationCap {
                needed: n,
                cap: self.n_cap,
            });
        }
        Ok(n)
    }
}

/// Evaluators for G, G0, k and the cumulative flux, sharing one truncation rule.
#[derive(Debug, Clone, Default)]
pub struct HeatKernelFamily {
    pub params: SeriesEvalParams,
}

impl HeatKernelFamily {
    pub fn new(params: SeriesEvalParams) -> Self {
        Self { params }
    }

    fn require_positive(&self, x: f64) -> Result<()> {
        if !(x > 0.0) {
            return Err(Error::Domain(
                "heat kernel requires positive time-like argument".into(),
            ));
        }
        Ok(())
    }

    /// `G(x, y, y1)`, the image series of the strip Green's function.
    pub fn green_g(&self, x: f64, y: f64, y1: f64) -> Result<f64> {
        self.require_positive(x)?;
        let n = self.params.trunc(x)? as i64;
        let inv4x = 1.0 / (4.0 * x);
        let mut direct = 0.0;
        for m in -n..=n {
            let a = y - y1 + 2.0 * m as f64;
            direct += (-a * a * inv4x).exp();
        }
        let mut image = 0.0;
        // one extra index below so both walls pair off to series accuracy
        for m in -n - 1..=n {
            let a = y + y1 + 2.0 * m as f64;
            image += (-a * a * inv4x).exp();
        }
        Ok((direct - image) / (2.0 * (PI * x).sqrt()))
    }

    /// `G0(x, y1) = G_y(x, y1, 0)`, the wall flux kernel.
    pub fn flux_g0(&self, x: f64, y1: f64) -> Result<f64> {
        self.require_positive(x)?;
        let n = self.params.trunc(x)? as i64;
        let inv4x = 1.0 / (4.0 * x);
        let mut s = 0.0;
        // paired so that y1 = 1 cancels exactly term by term
        for m in 0..=n {
            let a = y1 + 2.0 * m as f64;
            let b = 2.0 * m as f64 + 2.0 - y1;
            s += a * (-a * a * inv4x).exp() - b * (-b * b * inv4x).exp();
        }
        Ok(s / (2.0 * PI.sqrt() * x.powf(1.5)))
    }

    /// Boundary kernel `k(x) = (1/sqrt(pi x)) sum_n e^{-n^2/x}`.
    pub fn boundary_kernel_k(&self, x: f64) -> Result<f64> {
        Ok(1.0 / (PI * x).sqrt() + self.k_smooth(x)?)
    }

    /// The smooth remainder `k(x) - 1/sqrt(pi x)`; extends by 0 to x = 0.
    pub fn k_smooth(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        self.require_positive(x)?;
        let n = self.params.trunc(x)? as i64;
        let mut s = 0.0;
        for m in 1..=n {
            s += 2.0 * (-(m * m) as f64 / x).exp();
        }
        Ok(s / (PI * x).sqrt())
    }

    /// Cumulative flux `W(xi, y) = int_0^xi G0(t, y) dt` in closed erf form.
    pub fn cumulative_flux(&self, xi: f64, y: f64) -> Result<f64> {
        self.require_positive(xi)?;
        Ok(self.w_series(y).eval(xi))
    }

    /// `W(., y)` as an erfc series (exact antiderivatives available).
    ///
    /// Adjacent +/- terms share the same offset at y = 1, so the series is
    /// identically zero there in exact floating point.
    pub fn w_series(&self, y: f64) -> ErfcSeries {
        let mut terms = Vec::with_capacity(16);
        for k in 0..8 {
            terms.push((1.0, 2.0 * k as f64 + y));
            terms.push((-1.0, 2.0 * k as f64 + 2.0 - y));
        }
        ErfcSeries::new(terms)
    }

    /// Two-sided exit law `P(s; y, y1) = (G0(., y) * W(., y1))(s)`:
    /// the convolution of two first-passage image families collapses to
    /// erfc terms by the additivity of sqrt-stable passage times.
    pub fn p_series(&self, y: f64, y1: f64) -> ErfcSeries {
        let mut terms = Vec::with_capacity(32);
        for k in 0..8 {
            terms.push((k as f64 + 1.0, y + y1 + 2.0 * k as f64));
        }
        for k in 1..8 {
            let kf = k as f64;
            terms.push((kf, 2.0 - y - y1 + 2.0 * kf));
            terms.push((-kf, y - y1 + 2.0 * kf));
            terms.push((-kf, y1 - y + 2.0 * kf));
        }
        ErfcSeries::new(terms)
    }

    /// `int_0^1 G(x, y, y1) dy1` (heat mass remaining in the strip).
    pub fn mass_integral(&self, x: f64, y: f64) -> Result<f64> {
        self.require_positive(x)?;
        let n = self.params.trunc(x)? as i64;
        let r = 2.0 * x.sqrt();
        let mut s = 0.0;
        for m in -n..=n {
            let shift = 2.0 * m as f64;
            s += 0.5 * (erf((y + shift) / r) - erf((y - 1.0 + shift) / r));
            s -= 0.5 * (erf((y + 1.0 + shift) / r) - erf((y + shift) / r));
        }
        Ok(s)
    }
}
