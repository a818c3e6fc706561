//! Assembly and solution of the transmission problem: the right-hand side
//! `F`, the trace equation for `tau'`, the two-region representation of
//! `u`, and the discrete residual verification.
//!
//! The trace derivative solves the second-kind Volterra equation
//!
//! ```text
//!   tau'(x) - int_0^x k1(x-t) tau'(t) dt = F(x),
//!   k1 = (k + beta) / alpha,
//! ```
//!
//! where the minus sign is the one the all-positive resolvent series
//! inverts (see `volterra::resolve_sign`); it is also the sign produced by
//! eliminating `nu1`, `nu2` from the transmitting condition, which is why
//! the transmission residual of the solved field vanishes with the grid.

use crate::error::Error;
use crate::geometry;
use crate::grid::{graded_mesh, interp_slice, GridFunction1D};
use crate::heat_kernel::HeatKernelFamily;
use crate::quad::{gauss_legendre_01, geometric_edges};
use crate::source::SourceField;
use crate::volterra::{convolve, solve_collocation, ResolventKernel, SingularConvolutionKernel};
use crate::Result;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Transmission parameters of the gluing condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionParams {
    pub alpha: f64,
    pub beta: f64,
}

impl TransmissionParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha * alpha + beta * beta <= 0.0 {
            return Err(Error::Domain("alpha^2 + beta^2 must be positive".into()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn require_invertible(&self) -> Result<()> {
        if self.alpha == 0.0 {
            return Err(Error::Unsupported(
                "the solver path requires alpha != 0".into(),
            ));
        }
        Ok(())
    }

    /// The trace-equation kernel `k1 = (k + beta)/alpha` split as
    /// singular coefficient, smooth part and constant shift.
    pub fn trace_kernel(&self, heat: &HeatKernelFamily) -> Result<SingularConvolutionKernel> {
        self.require_invertible()?;
        let fam = heat.clone();
        let alpha = self.alpha;
        SingularConvolutionKernel::new(
            1.0 / alpha,
            Arc::new(move |s: f64| fam.k_smooth(s).unwrap_or(0.0) / alpha),
            self.beta / alpha,
        )
    }
}

/// Grid sizes of a solve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveGrids {
    pub parabolic_nx: usize,
    pub parabolic_ny: usize,
    pub char_n: usize,
    pub volterra_n: usize,
}

pub const VOLTERRA_GRADING: f64 = 3.0;
const TIME_PANEL_RATIO: f64 = 0.25;
const TIME_PANEL_FLOOR: f64 = 1e-13;

/// `int_0^1 G0(s, y1) f(x1, y1) dy1` in closed form (image sums of the
/// source's Gaussian flux moments).
fn inner_flux(f: &SourceField, s: f64, x1: f64) -> f64 {
    let mut acc = 0.0;
    for m in 0..=6 {
        acc += f.flux_moment(s, -2.0 * m as f64, x1);
        acc += f.flux_moment(s, 2.0 * m as f64 + 2.0, x1);
    }
    acc / (2.0 * PI.sqrt() * s.powf(1.5))
}

/// `int_0^1 G(s, y, y1) f(x1, y1) dy1` in closed form.
fn inner_green(f: &SourceField, s: f64, y: f64, x1: f64) -> f64 {
    let mut acc = 0.0;
    let m = 6i64;
    for n in -m..=m {
        acc += f.gauss_moment(s, y + 2.0 * n as f64, x1);
    }
    for n in -m - 1..=m {
        acc -= f.gauss_moment(s, -y - 2.0 * n as f64, x1);
    }
    acc / (2.0 * (PI * s).sqrt())
}

/// `Phi_0(x) = int_0^x dx1 int_0^1 G0(x - x1, y1) f(x1, y1) dy1`, graded
/// geometric panels in the time variable (corner at `x1 = x`), closed-form
/// inner integral. Also returns a coarse-rule value for the convergence
/// check.
pub fn phi0_checked(x: f64, f: &SourceField, _heat: &HeatKernelFamily) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    let (n16, w16) = gauss_legendre_01(16);
    let (n8, w8) = gauss_legendre_01(8);
    let edges = geometric_edges(x, TIME_PANEL_RATIO, TIME_PANEL_FLOOR);
    let mut fine = 0.0;
    let mut coarse = 0.0;
    for w in edges.windows(2) {
        let (hi, lo) = (w[0], w[1]);
        let len = hi - lo;
        if len <= 0.0 {
            continue;
        }
        for (t, q) in n16.iter().zip(&w16) {
            let s = lo + len * t;
            if s <= 0.0 {
                continue;
            }
            fine += q * len * inner_flux(f, s, x - s);
        }
        for (t, q) in n8.iter().zip(&w8) {
            let s = lo + len * t;
            if s <= 0.0 {
                continue;
            }
            coarse += q * len * inner_flux(f, s, x - s);
        }
    }
    (fine, coarse)
}

/// `Phi_0(x)` with the internal refinement check applied.
pub fn phi0(x: f64, f: &SourceField, heat: &HeatKernelFamily, tol: f64) -> Result<f64> {
    let (fine, coarse) = phi0_checked(x, f, heat);
    let change = (fine - coarse).abs();
    if change > tol.max(1e-12 * fine.abs()) {
        return Err(Error::Accuracy { change, tol });
    }
    Ok(fine)
}

/// `int_x^1 f1(x, eta1) deta1`.
fn int_f1_eta(f: &SourceField, x: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (nodes, weights) = rule;
    if x >= 1.0 {
        return 0.0;
    }
    let len = 1.0 - x;
    nodes
        .iter()
        .zip(weights)
        .map(|(&t, &w)| w * len * f.f1(x, x + len * t))
        .sum()
}

/// Right-hand side of the trace equation:
/// `F(x) = -(1/alpha) Phi0(x) - 2 int_x^1 f1(x, eta1) deta1
///         + (2 beta/alpha) int_0^x dt int_t^1 f1(t, eta1) deta1`.
///
/// (The inner argument of the last term is `f1(t, eta1)`: the printed
/// `f1(x, eta1)` would leave the t-integral without any integrand
/// dependence, contradicting the derivation it comes from.)
pub fn rhs_f(
    x: f64,
    f: &SourceField,
    params: &TransmissionParams,
    heat: &HeatKernelFamily,
    quad_tol: f64,
) -> Result<f64> {
    params.require_invertible()?;
    let rule = gauss_legendre_01(24);
    let term1 = -phi0(x, f, heat, quad_tol)? / params.alpha;
    let term2 = -2.0 * int_f1_eta(f, x, &rule);
    let mut term3 = 0.0;
    if params.beta != 0.0 && x > 0.0 {
        let (nodes, weights) = &rule;
        for (&t, &w) in nodes.iter().zip(weights) {
            term3 += w * x * int_f1_eta(f, x * t, &rule);
        }
        term3 *= 2.0 * params.beta / params.alpha;
    }
    Ok(term1 + term2 + term3)
}

/// Outcome of the trace solve.
#[derive(Debug, Clone)]
pub struct TauSolve {
    pub tau_prime: GridFunction1D,
    pub tau: GridFunction1D,
    pub rhs: GridFunction1D,
    /// Max gap between `tau` and its reconstruction through
    /// `int_0^x Gamma_1(x,t) F(t) dt` when a resolvent is supplied.
    pub eq18_gap: Option<f64>,
}

/// Solve the trace equation on the graded mesh and integrate `tau` up
/// from `tau(0) = 0`.
pub fn solve_tau(
    f: &SourceField,
    params: &TransmissionParams,
    heat: &HeatKernelFamily,
    volterra_n: usize,
    resolvent: Option<&ResolventKernel>,
    quad_tol: f64,
    sign: f64,
) -> Result<TauSolve> {
    params.require_invertible()?;
    let mesh = graded_mesh(volterra_n, VOLTERRA_GRADING);
    let mut rhs_vals = vec![0.0; mesh.len()];
    let results: Vec<Result<f64>> = mesh
        .par_iter()
        .map(|&x| rhs_f(x, f, params, heat, quad_tol))
        .collect();
    for (slot, r) in rhs_vals.iter_mut().zip(results) {
        *slot = r?;
    }
    let rhs = GridFunction1D::new(mesh.clone(), rhs_vals)?;
    let k1 = params.trace_kernel(heat)?;
    let tau_prime = solve_collocation(&k1, &rhs, sign)?;
    let mut tau = tau_prime.cumulative_quadratic();
    tau.values[0] = 0.0;
    let eq18_gap = resolvent.map(|res| {
        let mut gap: f64 = 0.0;
        let (gn, gw) = gauss_legendre_01(4);
        for (i, &x) in mesh.iter().enumerate().skip(1) {
            let mut acc = 0.0;
            for w in mesh[..=i].windows(2) {
                let len = w[1] - w[0];
                for (&t, &q) in gn.iter().zip(&gw) {
                    let tt = w[0] + len * t;
                    acc += q * len * res.gamma1_lag(x - tt) * rhs.interp(tt);
                }
            }
            gap = gap.max((acc - tau.values[i]).abs());
        }
        gap
    });
    Ok(TauSolve {
        tau_prime,
        tau,
        rhs,
        eq18_gap,
    })
}

/// The computed field on both regions plus the trace data.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub x_nodes: Vec<f64>,
    pub y_nodes: Vec<f64>,
    /// `u[i][j]` at `(x_i, y_j)`, `j = 0` row is `tau` by construction.
    pub parabolic: Vec<Vec<f64>>,
    pub char_nodes: Vec<f64>,
    /// `u_hyp[i][j]` at `(xi_i, eta_j)` for `i <= j`, NaN outside the triangle.
    pub hyperbolic: Vec<Vec<f64>>,
    pub tau: GridFunction1D,
    pub tau_prime: GridFunction1D,
    pub nu1: GridFunction1D,
    pub nu2: GridFunction1D,
    pub eq18_gap: Option<f64>,
}

impl SolutionField {
    pub fn hyperbolic_at(&self, i: usize, j: usize) -> f64 {
        self.hyperbolic[i][j]
    }
}

/// Evaluate the parabolic representation at one interior point (`y > 0`).
pub fn u_parabolic_point(
    x: f64,
    y: f64,
    f: &SourceField,
    heat: &HeatKernelFamily,
    tau_prime: &GridFunction1D,
) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // forcing part
    let (n16, w16) = gauss_legendre_01(16);
    let mut uf = 0.0;
    for w in geometric_edges(x, TIME_PANEL_RATIO, TIME_PANEL_FLOOR).windows(2) {
        let (hi, lo) = (w[0], w[1]);
        let len = hi - lo;
        for (&t, &q) in n16.iter().zip(&w16) {
            let s = lo + len * t;
            if s <= 0.0 {
                continue;
            }
            uf += q * len * inner_green(f, s, y, x - s);
        }
    }
    // boundary part int_0^x W(x - x1, y) tau'(x1) dx1: exact W moments
    // against the quadratic interpolant of tau' on solver panel pairs
    let ws = heat.w_series(y);
    let mut ub = 0.0;
    let mesh = &tau_prime.nodes;
    let n = mesh.len() - 1;
    let mut r = 0;
    while 2 * r < n {
        let (i0, i1, i2) = (2 * r, 2 * r + 1, (2 * r + 2).min(n));
        if mesh[i0] >= x {
            break;
        }
        // quadratic through the triple in powers of t
        let (t0, t1, t2) = (mesh[i0], mesh[i1], mesh[i2]);
        let (v0, v1, v2) = (
            tau_prime.values[i0],
            tau_prime.values[i1],
            tau_prime.values[i2],
        );
        let d0 = (t0 - t1) * (t0 - t2);
        let d1 = (t1 - t0) * (t1 - t2);
        let d2 = (t2 - t0) * (t2 - t1);
        let q2 = v0 / d0 + v1 / d1 + v2 / d2;
        let q1 = -(v0 * (t1 + t2) / d0 + v1 * (t0 + t2) / d1 + v2 * (t0 + t1) / d2);
        let q0 = v0 * t1 * t2 / d0 + v1 * t0 * t2 / d1 + v2 * t0 * t1 / d2;
        // v(x - s) = (q0 + q1 x + q2 x^2) - (q1 + 2 q2 x) s + q2 s^2
        let ca = q0 + q1 * x + q2 * x * x;
        let cb = q1 + 2.0 * q2 * x;
        for (lo, hi) in [(t0, t1), (t1, t2)] {
            if lo >= x {
                break;
            }
            let hi_c = hi.min(x);
            let (sl, sr) = (x - lo, x - hi_c);
            let m0 = ws.m0(sl) - ws.m0(sr);
            let m1 = ws.m1(sl) - ws.m1(sr);
            let m2 = ws.m2(sl) - ws.m2(sr);
            ub += ca * m0 - cb * m1 + q2 * m2;
        }
        r += 1;
    }
    uf + ub
}

/// Evaluate the hyperbolic representation at `(xi, eta)`.
pub fn u_hyperbolic_point(xi: f64, eta: f64, f: &SourceField, tau: &GridFunction1D) -> f64 {
    let (n16, w16) = gauss_legendre_01(16);
    let mut v = 0.0;
    if eta > xi {
        for (&t1, &q1) in n16.iter().zip(&w16) {
            let xi1 = xi + (eta - xi) * t1;
            let mut inner = 0.0;
            for (&t2, &q2) in n16.iter().zip(&w16) {
                let eta1 = eta + (1.0 - eta) * t2;
                inner += q2 * f.f1(xi1, eta1);
            }
            v += q1 * (eta - xi) * (1.0 - eta) * inner;
        }
    }
    v + tau.interp(eta)
}

/// Solve the full problem on the given grids.
pub fn solve_u(
    f: &SourceField,
    params: &TransmissionParams,
    heat: &HeatKernelFamily,
    grids: &SolveGrids,
    resolvent: Option<&ResolventKernel>,
    quad_tol: f64,
    sign: f64,
) -> Result<SolutionField> {
    let ts = solve_tau(f, params, heat, grids.volterra_n, resolvent, quad_tol, sign)?;
    let x_nodes: Vec<f64> = (0..=grids.parabolic_nx)
        .map(|i| i as f64 / grids.parabolic_nx as f64)
        .collect();
    let y_nodes: Vec<f64> = (0..=grids.parabolic_ny)
        .map(|j| j as f64 / grids.parabolic_ny as f64)
        .collect();
    let tau_on_x: Vec<f64> = x_nodes.iter().map(|&x| ts.tau.interp(x)).collect();
    let parabolic: Vec<Vec<f64>> = x_nodes
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut col = vec![0.0; y_nodes.len()];
            for (j, &y) in y_nodes.iter().enumerate() {
                col[j] = if j == 0 {
                    // the y -> 0 limit of the representation is tau
                    tau_on_x[i]
                } else {
                    u_parabolic_point(x, y, f, heat, &ts.tau_prime)
                };
            }
            col
        })
        .collect();

    let char_nodes: Vec<f64> = (0..=grids.char_n)
        .map(|i| i as f64 / grids.char_n as f64)
        .collect();
    let hyperbolic: Vec<Vec<f64>> = char_nodes
        .par_iter()
        .enumerate()
        .map(|(i, &xi)| {
            let mut row = vec![f64::NAN; char_nodes.len()];
            for (j, &eta) in char_nodes.iter().enumerate() {
                if i <= j {
                    row[j] = if i == j {
                        ts.tau.interp(eta)
                    } else {
                        u_hyperbolic_point(xi, eta, f, &ts.tau)
                    };
                }
            }
            row
        })
        .collect();

    // nu2 = -tau' - 2 int_x^1 f1(x, t) dt ; nu1 = -(k * tau') + Phi0
    let rule = gauss_legendre_01(24);
    let nu2_vals: Vec<f64> = ts
        .tau_prime
        .nodes
        .iter()
        .zip(&ts.tau_prime.values)
        .map(|(&x, &tp)| -tp - 2.0 * int_f1_eta(f, x, &rule))
        .collect();
    let nu2 = GridFunction1D::new(ts.tau_prime.nodes.clone(), nu2_vals)?;
    let k_full = SingularConvolutionKernel::new(
        1.0,
        Arc::new({
            let fam = heat.clone();
            move |s: f64| fam.k_smooth(s).unwrap_or(0.0)
        }),
        0.0,
    )?;
    let conv = convolve(&k_full, &ts.tau_prime);
    let phi0_vals: Vec<Result<f64>> = ts
        .tau_prime
        .nodes
        .par_iter()
        .map(|&x| phi0(x, f, heat, quad_tol))
        .collect();
    let mut nu1_vals = Vec::with_capacity(conv.len());
    for (c, p) in conv.values.iter().zip(phi0_vals) {
        nu1_vals.push(-c + p?);
    }
    let nu1 = GridFunction1D::new(ts.tau_prime.nodes.clone(), nu1_vals)?;

    Ok(SolutionField {
        x_nodes,
        y_nodes,
        parabolic,
        char_nodes,
        hyperbolic,
        tau: ts.tau,
        tau_prime: ts.tau_prime,
        nu1,
        nu2,
        eq18_gap: ts.eq18_gap,
    })
}

/// Max-norm residuals of the discrete field (centered stencils inside,
/// second-order one-sided at region edges).
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// `u_x - u_yy - f` at interior parabolic nodes.
    pub parabolic_pde: f64,
    /// `4 u_{xi eta} - 4 f1` at interior hyperbolic nodes.
    pub hyperbolic_wave: f64,
    /// `u` on the left wall x = 0.
    pub boundary_aa0: f64,
    /// `u` on the top wall y = 1.
    pub boundary_a0b0: f64,
    /// `u_x + u_y` along the characteristic `eta = 1`.
    pub characteristic_bc: f64,
    /// `nu1 - alpha nu2 + beta int_0^x nu2` on the trace grid.
    pub transmission_uy: f64,
    /// One-sided `u_x` mismatch across the type-change line.
    pub transmission_ux: f64,
    /// Gap of the closed-form trace reconstruction, when computed.
    pub eq18_gap: Option<f64>,
}

pub fn verify_solution(
    sol: &SolutionField,
    f: &SourceField,
    params: &TransmissionParams,
) -> ResidualReport {
    let nx = sol.x_nodes.len() - 1;
    let ny = sol.y_nodes.len() - 1;
    let hx = 1.0 / nx as f64;
    let hy = 1.0 / ny as f64;
    let u = &sol.parabolic;

    let mut parabolic_pde: f64 = 0.0;
    for i in 1..nx {
        for j in 1..ny {
            let ux = (u[i + 1][j] - u[i - 1][j]) / (2.0 * hx);
            let uyy = (u[i][j + 1] - 2.0 * u[i][j] + u[i][j - 1]) / (hy * hy);
            let r = ux - uyy - f.eval(sol.x_nodes[i], sol.y_nodes[j]);
            parabolic_pde = parabolic_pde.max(r.abs());
        }
    }

    let n = sol.char_nodes.len() - 1;
    let h = 1.0 / n as f64;
    let v = &sol.hyperbolic;
    let mut hyperbolic_wave: f64 = 0.0;
    for i in 1..n {
        for j in (i + 2)..n {
            // cross stencil fully inside the triangle: i+1 <= j-1
            let uxe = (v[i + 1][j + 1] - v[i + 1][j - 1] - v[i - 1][j + 1] + v[i - 1][j - 1])
                / (4.0 * h * h);
            let r = 4.0 * uxe - 4.0 * f.f1(sol.char_nodes[i], sol.char_nodes[j]);
            hyperbolic_wave = hyperbolic_wave.max(r.abs());
        }
    }

    let boundary_aa0 = (0..=ny).fold(0.0f64, |m, j| m.max(u[0][j].abs()));
    let boundary_a0b0 = (0..=nx).fold(0.0f64, |m, i| m.max(u[i][ny].abs()));

    // u_x + u_y = 2 u_xi on eta = 1
    let mut characteristic_bc: f64 = 0.0;
    for i in 0..=n {
        let d = if i == 0 {
            (-3.0 * v[0][n] + 4.0 * v[1][n] - v[2][n]) / (2.0 * h)
        } else if i == n {
            (3.0 * v[n][n] - 4.0 * v[n - 1][n] + v[n - 2][n]) / (2.0 * h)
        } else {
            (v[i + 1][n] - v[i - 1][n]) / (2.0 * h)
        };
        characteristic_bc = characteristic_bc.max((2.0 * d).abs());
    }

    // transmission in u_y through the trace relation
    let cum_nu2 = sol.nu2.cumulative_quadratic();
    let mut transmission_uy: f64 = 0.0;
    for i in 0..sol.nu1.len() {
        let r = sol.nu1.values[i] - params.alpha * sol.nu2.values[i]
            + params.beta * cum_nu2.values[i];
        transmission_uy = transmission_uy.max(r.abs());
    }

    // one-sided u_x on both sides of y = 0 at interior x
    let mut transmission_ux: f64 = 0.0;
    for i in 1..nx {
        let up = (u[i + 1][0] - u[i - 1][0]) / (2.0 * hx);
        let x = sol.x_nodes[i];
        // hyperbolic side: u_x = u_xi + u_eta at xi = eta = x
        let k = ((x * n as f64).round() as usize).clamp(1, n - 1);
        let u_xi = (v[k][k] - v[k - 1][k]) / h;
        let u_eta = (v[k][k + 1] - v[k][k]) / h;
        let xk = sol.char_nodes[k];
        let up_at_k = {
            let kk = ((xk * nx as f64).round() as usize).clamp(1, nx - 1);
            (u[kk + 1][0] - u[kk - 1][0]) / (2.0 * hx)
        };
        let _ = up;
        transmission_ux = transmission_ux.max((up_at_k - (u_xi + u_eta)).abs());
    }

    ResidualReport {
        parabolic_pde,
        hyperbolic_wave,
        boundary_aa0,
        boundary_a0b0,
        characteristic_bc,
        transmission_uy,
        transmission_ux,
        eq18_gap: sol.eq18_gap,
    }
}

/// Discrete W^1_2-surrogate norm of the field over both regions.
pub fn sobolev_surrogate_norm(sol: &SolutionField) -> f64 {
    let nx = sol.x_nodes.len() - 1;
    let ny = sol.y_nodes.len() - 1;
    let hx = 1.0 / nx as f64;
    let hy = 1.0 / ny as f64;
    let u = &sol.parabolic;
    let mut acc = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            let val = u[i][j];
            let gx = (u[i + 1][j] - u[i][j]) / hx;
            let gy = (u[i][j + 1] - u[i][j]) / hy;
            acc += (val * val + gx * gx + gy * gy) * hx * hy;
        }
    }
    let n = sol.char_nodes.len() - 1;
    let h = 1.0 / n as f64;
    let v = &sol.hyperbolic;
    for i in 0..n {
        for j in (i + 1)..n {
            // physical-measure cell in characteristic coordinates
            let val = v[i][j];
            let gxi = (v[i + 1][j] - v[i][j]) / h;
            let geta = (v[i][j + 1] - v[i][j]) / h;
            // u_x = u_xi + u_eta, u_y = u_xi - u_eta
            let gx = gxi + geta;
            let gy = gxi - geta;
            acc += (val * val + gx * gx + gy * gy) * 0.5 * h * h;
        }
    }
    acc.sqrt()
}

/// `L2` norm of the source over the whole domain by Gauss quadrature.
pub fn source_l2_norm(f: &SourceField) -> f64 {
    let (nodes, weights) = gauss_legendre_01(24);
    let mut acc = 0.0;
    for (&tx, &wx) in nodes.iter().zip(&weights) {
        for (&ty, &wy) in nodes.iter().zip(&weights) {
            let v = f.eval(tx, ty);
            acc += wx * wy * v * v;
        }
    }
    // triangle in characteristic coordinates, physical measure 1/2 dxi deta
    for (&te, &we) in nodes.iter().zip(&weights) {
        for (&tx, &wx) in nodes.iter().zip(&weights) {
            let xi = te * tx;
            let (x, y) = geometry::from_char(geometry::CharCoords { xi, eta: te });
            let v = f.eval(x, y);
            acc += 0.5 * we * te * wx * v * v;
        }
    }
    acc.sqrt()
}

/// Resample helper used by exports.
pub fn trace_on(mesh: &[f64], g: &GridFunction1D) -> Vec<f64> {
    mesh.iter()
        .map(|&x| interp_slice(&g.nodes, &g.values, x))
        .collect()
}
