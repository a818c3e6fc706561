//! Second-kind Volterra equations with weakly singular convolution kernels,
//! and the resolvent machinery built from iterated kernels.
//!
//! The equation solved is
//!
//! ```text
//!   phi(x) + sign * int_0^x k1(x - t) phi(t) dt = F(x),
//! ```
//!
//! with `k1(s) = a / sqrt(pi s) + smooth(s) + shift`. The direct solver is
//! forward substitution with product-integration weights: piecewise
//! quadratic interpolation of `phi`, the `1/sqrt` factor integrated exactly
//! against the local basis (in panel-centered coordinates, which keeps the
//! moment arithmetic stable on strongly graded meshes), and an 8-point
//! Gauss rule wherever the kernel is smooth on the panel.
//!
//! The resolvent `Gamma = sum_j k_j`, `k_{j+1} = k1 * k_j`, is assembled on
//! a uniform grid. Only `k1` is singular; `k2` is computed from the split
//! `k1 = a/sqrt(pi s) + g(s)` using the exact identity
//! `(1/sqrt(pi s)) * (1/sqrt(pi s)) = 1`, so every stored iterate is
//! continuous.

use crate::error::Error;
use crate::grid::{interp_slice, GridFunction1D};
use crate::quad::gl8;
use crate::Result;
use std::f64::consts::PI;
use std::sync::Arc;

/// `k1(s) = singular_coefficient / sqrt(pi s) + smooth_part(s) + constant_shift`.
#[derive(Clone)]
pub struct SingularConvolutionKernel {
    pub singular_coefficient: f64,
    pub smooth_part: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub constant_shift: f64,
}

impl std::fmt::Debug for SingularConvolutionKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingularConvolutionKernel")
            .field("singular_coefficient", &self.singular_coefficient)
            .field("constant_shift", &self.constant_shift)
            .finish_non_exhaustive()
    }
}

impl SingularConvolutionKernel {
    pub fn new(
        singular_coefficient: f64,
        smooth_part: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        constant_shift: f64,
    ) -> Result<Self> {
        for i in 0..=32 {
            let x = i as f64 / 32.0;
            let v = smooth_part(x);
            if !v.is_finite() {
                return Err(Error::Domain(format!(
                    "smooth part not finite at x = {x}: {v}"
                )));
            }
        }
        Ok(Self {
            singular_coefficient,
            smooth_part,
            constant_shift,
        })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            singular_coefficient: 0.0,
            smooth_part: Arc::new(|_| 0.0),
            constant_shift: c,
        }
    }

    pub fn abel(a: f64) -> Self {
        Self {
            singular_coefficient: a,
            smooth_part: Arc::new(|_| 0.0),
            constant_shift: 0.0,
        }
    }

    /// The bounded part `smooth(s) + shift`.
    pub fn bounded_at(&self, s: f64) -> f64 {
        (self.smooth_part)(s) + self.constant_shift
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.singular_coefficient / (PI * s).sqrt() + self.bounded_at(s)
    }
}

// ---------------------------------------------------------------------
// stable sqrt-difference helpers
// ---------------------------------------------------------------------

fn dsqrt(a: f64, b: f64) -> f64 {
    if a + b <= 0.0 {
        return 0.0;
    }
    (a - b) / (a.sqrt() + b.sqrt())
}

fn d32(a: f64, b: f64) -> f64 {
    let (sa, sb) = (a.sqrt(), b.sqrt());
    if sa + sb == 0.0 {
        return 0.0;
    }
    (a - b) * (a + sa * sb + b) / (sa + sb)
}

fn d52(a: f64, b: f64) -> f64 {
    let (sa, sb) = (a.sqrt(), b.sqrt());
    if sa + sb == 0.0 {
        return 0.0;
    }
    (a - b) * (a * a + a * sa * sb + a * b + b * sa * sb + b * b) / (sa + sb)
}

/// Weights for `int_lo^hi k1(x - t) L_k(t) dt` over the Lagrange basis on
/// `basis_nodes` (2 or 3 nodes). `x >= hi` required.
fn panel_weights(
    k1: &SingularConvolutionKernel,
    x: f64,
    basis_nodes: &[f64],
    lo: f64,
    hi: f64,
    out: &mut [f64],
) {
    let h = hi - lo;
    let nn = basis_nodes.len();
    debug_assert!(nn == 2 || nn == 3);
    out[..nn].fill(0.0);
    let (gn, gw) = gl8();
    let a = k1.singular_coefficient;
    let near = (x - hi) <= 3.0 * h;
    if a != 0.0 && near {
        // centered exact moments of the 1/sqrt factor
        let tc = 0.5 * (lo + hi);
        let uc = x - tc;
        let (ul, ur) = (x - lo, x - hi);
        let j0 = 2.0 * dsqrt(ul, ur);
        let e32 = d32(ul, ur);
        let j1 = uc * j0 - (2.0 / 3.0) * e32;
        let j2 = uc * uc * j0 - (4.0 * uc / 3.0) * e32 + 0.4 * d52(ul, ur);
        for k in 0..nn {
            let (c0, c1, c2) = centered_basis_coeffs(basis_nodes, k, tc);
            out[k] += a / PI.sqrt() * (c0 * j0 + c1 * j1 + c2 * j2);
        }
        // bounded part by Gauss
        for (t8, w8) in gn.iter().zip(gw) {
            let t = lo + h * t8;
            let kv = k1.bounded_at(x - t);
            for k in 0..nn {
                out[k] += w8 * h * kv * lagrange(basis_nodes, k, t);
            }
        }
    } else {
        // kernel smooth across the panel (or no singular part)
        for (t8, w8) in gn.iter().zip(gw) {
            let t = lo + h * t8;
            let kv = if a != 0.0 {
                k1.eval(x - t)
            } else {
                k1.bounded_at(x - t)
            };
            for k in 0..nn {
                out[k] += w8 * h * kv * lagrange(basis_nodes, k, t);
            }
        }
    }
}

fn lagrange(nodes: &[f64], k: usize, t: f64) -> f64 {
    let mut r = 1.0;
    for (m, &nm) in nodes.iter().enumerate() {
        if m != k {
            r *= (t - nm) / (nodes[k] - nm);
        }
    }
    r
}

/// Coefficients of `L_k(t)` as `c0 + c1 d + c2 d^2`, `d = t - tc`.
fn centered_basis_coeffs(nodes: &[f64], k: usize, tc: f64) -> (f64, f64, f64) {
    if nodes.len() == 2 {
        let dk = nodes[k] - tc;
        let dother = nodes[1 - k] - tc;
        let den = dk - dother;
        (-dother / den, 1.0 / den, 0.0)
    } else {
        let dk = nodes[k] - tc;
        let mut others = [0.0; 2];
        let mut idx = 0;
        for (m, &nm) in nodes.iter().enumerate() {
            if m != k {
                others[idx] = nm - tc;
                idx += 1;
            }
        }
        let (da, db) = (others[0], others[1]);
        let den = (dk - da) * (dk - db);
        (da * db / den, -(da + db) / den, 1.0 / den)
    }
}

/// Product-integration weights for `int_0^{x_i} k1(x_i - t) phi(t) dt`
/// against the values `phi(x_0..x_i)`: quadratic pair-panels from the left,
/// the odd tail panel interpolated on the last three nodes.
pub fn row_weights(k1: &SingularConvolutionKernel, mesh: &[f64], i: usize) -> Vec<f64> {
    let mut w = vec![0.0; i + 1];
    let x = mesh[i];
    if i == 0 {
        return w;
    }
    if i == 1 {
        // only two nodes exist left of x_1; use the quadratic through
        // (x0, x1, x2) when available so the start keeps full order
        let mut pw = [0.0; 3];
        if mesh.len() >= 3 {
            panel_weights(k1, x, &mesh[0..3], mesh[0], mesh[1], &mut pw);
            w[0] += pw[0];
            w[1] += pw[1];
            // the x2 contribution is folded by the caller (block start);
            // for plain convolution x2's weight is returned via extension
            // below — see `row_weights_start`
        } else {
            panel_weights(k1, x, &mesh[0..2], mesh[0], mesh[1], &mut pw);
            w[0] += pw[0];
            w[1] += pw[1];
        }
        return w;
    }
    let mut j = 0;
    let mut pw = [0.0; 3];
    while j < i {
        if i - j >= 2 {
            panel_weights(k1, x, &mesh[j..j + 3], mesh[j], mesh[j + 2], &mut pw);
            w[j] += pw[0];
            w[j + 1] += pw[1];
            w[j + 2] += pw[2];
            j += 2;
        } else {
            // single tail panel [x_{i-1}, x_i], basis on the last three nodes
            panel_weights(k1, x, &mesh[i - 2..=i], mesh[i - 1], mesh[i], &mut pw);
            w[i - 2] += pw[0];
            w[i - 1] += pw[1];
            w[i] += pw[2];
            j += 1;
        }
    }
    w
}

/// Start rows for nodes 1 and 2 with the shared quadratic basis (x0,x1,x2);
/// each row has three weights.
fn start_rows(k1: &SingularConvolutionKernel, mesh: &[f64]) -> ([f64; 3], [f64; 3]) {
    let mut r1 = [0.0; 3];
    let mut r2 = [0.0; 3];
    let mut pw = [0.0; 3];
    panel_weights(k1, mesh[1], &mesh[0..3], mesh[0], mesh[1], &mut pw);
    r1.copy_from_slice(&pw);
    panel_weights(k1, mesh[2], &mesh[0..3], mesh[0], mesh[1], &mut pw);
    r2.copy_from_slice(&pw);
    panel_weights(k1, mesh[2], &mesh[0..3], mesh[1], mesh[2], &mut pw);
    for k in 0..3 {
        r2[k] += pw[k];
    }
    (r1, r2)
}

/// Solve `phi + sign * (k1 * phi) = F` by forward substitution.
pub fn solve_collocation(
    k1: &SingularConvolutionKernel,
    f_rhs: &GridFunction1D,
    sign: f64,
) -> Result<GridFunction1D> {
    let mesh = &f_rhs.nodes;
    let n = mesh.len();
    if n < 3 {
        return Err(Error::Shape("solver mesh needs at least 3 nodes".into()));
    }
    let mut phi = vec![0.0; n];
    phi[0] = f_rhs.values[0];
    // nodes 1 and 2 coupled through the shared starting basis
    let (r1, r2) = start_rows(k1, mesh);
    let a11 = 1.0 + sign * r1[1];
    let a12 = sign * r1[2];
    let a21 = sign * r2[1];
    let a22 = 1.0 + sign * r2[2];
    let det = a11 * a22 - a12 * a21;
    if det.abs() < 1e-12 {
        return Err(Error::SingularStep {
            node: 1,
            weight: det,
        });
    }
    let b1 = f_rhs.values[1] - sign * r1[0] * phi[0];
    let b2 = f_rhs.values[2] - sign * r2[0] * phi[0];
    phi[1] = (b1 * a22 - b2 * a12) / det;
    phi[2] = (a11 * b2 - a21 * b1) / det;
    for i in 3..n {
        let w = row_weights(k1, mesh, i);
        let mut acc = 0.0;
        for j in 0..i {
            acc += w[j] * phi[j];
        }
        let diag = 1.0 + sign * w[i];
        if diag.abs() < 1e-10 {
            return Err(Error::SingularStep {
                node: i,
                weight: diag,
            });
        }
        phi[i] = (f_rhs.values[i] - sign * acc) / diag;
    }
    GridFunction1D::new(mesh.clone(), phi)
}

/// `(k1 * phi)(x_i)` for all nodes, with the same weights the solver uses.
pub fn convolve(k1: &SingularConvolutionKernel, phi: &GridFunction1D) -> GridFunction1D {
    let mesh = &phi.nodes;
    let n = mesh.len();
    let mut out = vec![0.0; n];
    for i in 1..n {
        if i == 1 && n >= 3 {
            let (r1, _) = start_rows(k1, mesh);
            out[1] = r1[0] * phi.values[0] + r1[1] * phi.values[1] + r1[2] * phi.values[2];
            continue;
        }
        let w = row_weights(k1, mesh, i);
        out[i] = w
            .iter()
            .zip(&phi.values[..=i])
            .map(|(wj, pj)| wj * pj)
            .sum();
    }
    GridFunction1D {
        nodes: mesh.clone(),
        values: out,
    }
}

/// Max-norm residual of the discrete equation at the nodes.
pub fn discrete_residual(
    k1: &SingularConvolutionKernel,
    phi: &GridFunction1D,
    f_rhs: &GridFunction1D,
    sign: f64,
) -> f64 {
    let conv = convolve(k1, phi);
    let mut r: f64 = 0.0;
    // node 1 uses the same start row as the solver through `convolve`
    for i in 0..phi.len() {
        r = r.max((phi.values[i] + sign * conv.values[i] - f_rhs.values[i]).abs());
    }
    r
}

/// Brute-force fixed-point oracle `phi_{m+1} = F - sign * (k1 * phi_m)` on
/// the rhs mesh, midpoint product rule per panel. Test-side reference only.
pub fn picard_oracle(
    k1: &SingularConvolutionKernel,
    f_rhs: &GridFunction1D,
    sign: f64,
    iterations: usize,
) -> Result<GridFunction1D> {
    if iterations < 1 {
        return Err(Error::Domain("picard needs at least one iteration".into()));
    }
    let mesh = &f_rhs.nodes;
    let n = mesh.len();
    let mut phi = f_rhs.values.clone();
    let mut prev_diff = f64::INFINITY;
    let mut grow = 0usize;
    let a = k1.singular_coefficient;
    for _ in 0..iterations {
        let mut next = f_rhs.values.clone();
        for i in 1..n {
            let x = mesh[i];
            let mut acc = 0.0;
            for j in 0..i {
                let (lo, hi) = (mesh[j], mesh[j + 1]);
                let tm = 0.5 * (lo + hi);
                let pm = 0.5 * (phi[j] + phi[j + 1]);
                // exact sqrt moments against the linear interpolant,
                // midpoint product rule for the bounded part
                let (ul, ur) = (x - lo, x - hi);
                let m0 = 2.0 * dsqrt(ul, ur);
                let m1 = ul * m0 - (2.0 / 3.0) * d32(ul, ur);
                let hh = hi - lo;
                let sing = a / PI.sqrt()
                    * (phi[j] * (m0 - m1 / hh) + phi[j + 1] * (m1 / hh));
                acc += sing + pm * k1.bounded_at(x - tm) * hh;
            }
            next[i] = f_rhs.values[i] - sign * acc;
        }
        let diff: f64 = next
            .iter()
            .zip(&phi)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if diff > prev_diff {
            grow += 1;
            if grow >= 5 {
                return Err(Error::Divergence { count: grow });
            }
        } else {
            grow = 0;
        }
        prev_diff = diff;
        phi = next;
    }
    GridFunction1D::new(mesh.clone(), phi)
}

// ---------------------------------------------------------------------
// resolvent
// ---------------------------------------------------------------------

/// The resolvent `Gamma = sum_{j>=1} k_j` on a uniform grid, stored as a
/// `1/sqrt(pi s)` coefficient plus a continuous remainder, together with
/// `gamma1(s) = 1 + int_0^s Gamma` and `Lambda(s) = int_0^s gamma1`.
#[derive(Debug, Clone)]
pub struct ResolventKernel {
    pub grid: Vec<f64>,
    /// Sampled iterates `k_1..k_J`. The first entry stores the finite part
    /// of `k_1` at the origin node; the `1/sqrt` factor is analytic.
    pub iterated: Vec<GridFunction1D>,
    /// Coefficient of `1/sqrt(pi s)` in `Gamma` (inherited from `k_1`).
    pub singular_coefficient: f64,
    /// Coefficient of `sqrt(s)` in the continuous remainder (the second
    /// and third iterates contribute one; later iterates are smoother).
    pub gamma_sqrt_coefficient: f64,
    /// Continuous remainder `Gamma - singular/sqrt(pi s)`.
    pub gamma_smooth: GridFunction1D,
    /// `gamma_smooth` minus its sqrt component: C^1, safe to interpolate.
    pub gamma_regular: GridFunction1D,
    pub gamma1_table: GridFunction1D,
    pub lambda_table: GridFunction1D,
    pub truncation_error_bound: f64,
}

impl ResolventKernel {
    pub fn gamma_at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        self.singular_coefficient / (PI * s).sqrt()
            + self.gamma_sqrt_coefficient * s.sqrt()
            + self.gamma_regular.interp_quadratic(s)
    }

    /// `gamma1(s) = 1 + int_0^s Gamma(w) dw` (a function of the lag only).
    pub fn gamma1_lag(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 1.0;
        }
        self.gamma1_table.interp_quadratic(s)
    }

    /// `Lambda(s) = int_0^s gamma1(w) dw`.
    pub fn lambda_lag(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        self.lambda_table.interp_quadratic(s)
    }

    /// Convolution `int_0^{s_i} series(w) Gamma(s_i - w) dw` on the grid.
    ///
    /// Split at s_i/2: on the left half the series is integrated by its
    /// exact moments against a linear interpolant of Gamma (whose lag stays
    /// >= s_i/2, away from the singularity); on the right half the
    /// singular factor of Gamma gets exact hat moments against a linear
    /// interpolant of the series (whose argument stays >= s_i/2, away from
    /// its boundary layer).
    pub fn convolve_series(&self, series: &crate::special::ErfcSeries) -> Vec<f64> {
        let n = self.grid.len() - 1;
        let h = self.grid[1] - self.grid[0];
        let s = &self.grid;
        let mut gamma_nodes = vec![0.0; n + 1];
        for i in 1..=n {
            gamma_nodes[i] = self.gamma_at(s[i]);
        }
        let sv: Vec<f64> = s.iter().map(|&x| series.eval(x)).collect();
        let m0: Vec<f64> = s.iter().map(|&x| series.m0(x)).collect();
        let m1: Vec<f64> = s.iter().map(|&x| series.m1(x)).collect();
        let a = self.singular_coefficient;
        let mut out = vec![0.0; n + 1];
        for i in 1..=n {
            let m = i / 2;
            let mut acc = 0.0;
            for j in 0..m {
                let p0 = m0[j + 1] - m0[j];
                let p1 = m1[j + 1] - m1[j];
                let gl = gamma_nodes[i - j];
                let gr = gamma_nodes[i - j - 1];
                let slope = (gr - gl) / h;
                acc += gl * p0 + slope * (p1 - s[j] * p0);
            }
            for j in 0..(i - m) {
                let (tl, tr) = (s[j], s[j + 1]);
                let q0 = 2.0 * (tr.sqrt() - tl.sqrt());
                let q1 = (2.0 / 3.0) * (tr.powf(1.5) - tl.powf(1.5));
                let fl = sv[i - j];
                let fr = sv[i - j - 1];
                acc += a / PI.sqrt() * (fl * q0 + (fr - fl) / h * (q1 - tl * q0));
                // sqrt(t) component of Gamma against the linear series
                let p0 = q1; // int sqrt(t) dt
                let p1 = 0.4 * (tr.powf(2.5) - tl.powf(2.5)); // int t^{3/2} dt
                acc += self.gamma_sqrt_coefficient
                    * (fl * p0 + (fr - fl) / h * (p1 - tl * p0));
                acc += 0.5
                    * h
                    * (self.gamma_regular.values[j] * fl + self.gamma_regular.values[j + 1] * fr);
            }
            out[i] = acc;
        }
        out
    }
}

/// `int_0^{x_i} (x_i - t)^{-1/2} f(t) dt / sqrt(pi)` with exact hat
/// moments against the linear interpolant, any strictly increasing mesh.
fn sing_conv_hats(f: &[f64], mesh: &[f64]) -> Vec<f64> {
    let n = mesh.len() - 1;
    let mut out = vec![0.0; n + 1];
    for i in 1..=n {
        let x = mesh[i];
        let mut acc = 0.0;
        for j in 0..i {
            let h = mesh[j + 1] - mesh[j];
            let ul = x - mesh[j];
            let ur = x - mesh[j + 1];
            let m0 = 2.0 * dsqrt(ul, ur);
            let m1 = ul * m0 - (2.0 / 3.0) * d32(ul, ur);
            acc += f[j] * (m0 - m1 / h) + f[j + 1] * (m1 / h);
        }
        out[i] = acc / PI.sqrt();
    }
    out
}

/// Evaluate the reconstruction `F + Gamma * F` of the minus-sign equation
/// on an arbitrary mesh, given the right-hand side as a closure.
///
/// The singular part of `Gamma` is integrated after the substitution
/// `t = x - v^2` (which removes the root), the continuous part panelwise
/// against the stored table so the sqrt-type start of the remainder is
/// resolved by the machinery grid itself.
pub fn reconstruct_solution(
    res: &ResolventKernel,
    f: impl Fn(f64) -> f64,
    mesh: &[f64],
) -> GridFunction1D {
    let (g16, w16) = crate::quad::gauss_legendre_01(16);
    let (g3, w3) = crate::quad::gauss_legendre_01(3);
    let a = res.singular_coefficient;
    let values: Vec<f64> = mesh
        .iter()
        .map(|&x| {
            let mut v = f(x);
            if x > 0.0 {
                // singular part: (a/sqrt(pi)) int_0^x F(t) (x-t)^{-1/2} dt
                //              = (2a/sqrt(pi)) int_0^{sqrt x} F(x - u^2) du
                let r = x.sqrt();
                let mut sing = 0.0;
                for (&t, &w) in g16.iter().zip(&w16) {
                    sing += w * r * f(x - (r * t) * (r * t));
                }
                v += 2.0 * a / PI.sqrt() * sing;
                // sqrt component, same substitution: int sqrt(u) F(x-u) du
                if res.gamma_sqrt_coefficient != 0.0 {
                    let mut sq = 0.0;
                    for (&t, &w) in g16.iter().zip(&w16) {
                        let vv = r * t;
                        sq += w * r * 2.0 * vv * vv * f(x - vv * vv);
                    }
                    v += res.gamma_sqrt_coefficient * sq;
                }
                // C^1 remainder against its own table panels
                let grid = &res.grid;
                let mut smooth = 0.0;
                for j in 0..grid.len() - 1 {
                    if grid[j] >= x {
                        break;
                    }
                    let (lo, hi) = (grid[j], grid[j + 1].min(x));
                    let len = hi - lo;
                    if len <= 0.0 {
                        continue;
                    }
                    let (ga, gb) = (res.gamma_regular.values[j], res.gamma_regular.values[j + 1]);
                    let slope = (gb - ga) / (grid[j + 1] - grid[j]);
                    for (&t3, &q3) in g3.iter().zip(&w3) {
                        let u = lo + len * t3;
                        smooth += q3 * len * (ga + slope * (u - grid[j])) * f(x - u);
                    }
                }
                v += smooth;
            }
            v
        })
        .collect();
    GridFunction1D {
        nodes: mesh.to_vec(),
        values,
    }
}

/// `int_0^{s_i} sqrt(t) g(s_i - t) dt` against the linear interpolant of
/// `g`, exact sqrt moments per panel (uniform grid).
fn sqrt_conv_linear(g: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = grid.len() - 1;
    let h = grid[1] - grid[0];
    let mut out = vec![0.0; n + 1];
    for i in 1..=n {
        let mut acc = 0.0;
        for j in 0..i {
            let (tl, tr) = (grid[j], grid[j + 1]);
            let p0 = (2.0 / 3.0) * (tr.powf(1.5) - tl.powf(1.5));
            let p1 = 0.4 * (tr.powf(2.5) - tl.powf(2.5));
            // g(s_i - t): value g[i-j] at t = tl, g[i-j-1] at t = tr
            let gl = g[i - j];
            let gr = g[i - j - 1];
            acc += gl * p0 + (gr - gl) / h * (p1 - tl * p0);
        }
        out[i] = acc;
    }
    out
}

/// Singular convolution `(1/sqrt(pi .)) * f` of a continuous grid function
/// on a uniform grid, exact hat moments.
fn sing_conv_linear(f: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = grid.len() - 1;
    let h = grid[1] - grid[0];
    let mut out = vec![0.0; n + 1];
    for i in 1..=n {
        let x = grid[i];
        let mut acc = 0.0;
        for j in 0..i {
            let ul = x - grid[j];
            let ur = x - grid[j + 1];
            let q0 = 2.0 * dsqrt(ul, ur);
            let q1 = ul * q0 - (2.0 / 3.0) * d32(ul, ur);
            // hats: left value weight q0 - q1/h, right value weight q1/h
            acc += f[j] * (q0 - q1 / h) + f[j + 1] * (q1 / h);
        }
        out[i] = acc / PI.sqrt();
    }
    out
}

/// Convolution of two continuous grid functions on a uniform grid with
/// composite-Simpson accuracy: the integrand values `f_j g_{i-j}` are
/// integrated by Simpson pairs, a 3/8 rule closing odd node counts, and
/// the first node by a Gauss rule on quadratically interpolated factors.
fn conv_quadratic(f: &[f64], g: &[f64], h: f64) -> Vec<f64> {
    let n = f.len() - 1;
    let mut out = vec![0.0; n + 1];
    if n == 0 {
        return out;
    }
    // node 1: quadratic interpolants of both factors over the first panel
    {
        let quad = |v: &[f64], t: f64| {
            // Lagrange on (0, h, 2h) in units of h
            let u = t / h;
            v[0] * (u - 1.0) * (u - 2.0) / 2.0 - v[1] * u * (u - 2.0) + v[2] * u * (u - 1.0) / 2.0
        };
        let (gn, gw) = gl8();
        let mut acc = 0.0;
        if n >= 2 {
            for (t8, w8) in gn.iter().zip(gw) {
                let t = h * t8;
                acc += w8 * h * quad(f, t) * quad(g, h - t);
            }
        } else {
            acc = 0.5 * h * (f[0] * g[1] + f[1] * g[0]);
        }
        out[1] = acc;
    }
    for i in 2..=n {
        let phi = |j: usize| f[j] * g[i - j];
        let mut acc = 0.0;
        let mut j = 0;
        let odd = i % 2 == 1;
        let stop = if odd { i - 3 } else { i };
        while j + 2 <= stop {
            acc += h / 3.0 * (phi(j) + 4.0 * phi(j + 1) + phi(j + 2));
            j += 2;
        }
        if odd {
            // i >= 3 here; close with the 3/8 rule on the last three panels
            acc += 3.0 * h / 8.0 * (phi(i - 3) + 3.0 * phi(i - 2) + 3.0 * phi(i - 1) + phi(i));
        }
        out[i] = acc;
    }
    out
}

/// Build `k_1..k_J` and the resolvent on a uniform grid over [0, 1].
///
/// Stops when the sup-norm tail ratio gives a geometric bound below 1e-10
/// or at `j_cap`; a tail ratio >= 1 at the cap is a convergence error.
pub fn iterated_kernels(
    k1: &SingularConvolutionKernel,
    j_cap: usize,
    grid: Vec<f64>,
) -> Result<ResolventKernel> {
    if grid.len() < 17 {
        return Err(Error::Shape("resolvent grid needs >= 16 panels".into()));
    }
    if j_cap < 1 {
        return Err(Error::Domain("need at least one iterated kernel".into()));
    }
    let n = grid.len() - 1;
    let h = grid[1] - grid[0];
    let a = k1.singular_coefficient;
    let g: Vec<f64> = grid.iter().map(|&x| k1.bounded_at(x)).collect();

    // sampled k1 (finite part at the origin node)
    let mut k1_vals = g.clone();
    for i in 1..=n {
        k1_vals[i] += a / (PI * grid[i]).sqrt();
    }
    let mut iterates = vec![GridFunction1D {
        nodes: grid.clone(),
        values: k1_vals,
    }];

    // Each iterate is tracked as samples plus an explicit sqrt(s)
    // coefficient, so the hat interpolation only ever sees C^1 data:
    //   sigma_{j+1} = 2 a k_j(0) / sqrt(pi), and k_j(0) = 0 for j >= 3.
    let mut sqrt_coeffs: Vec<f64> = vec![0.0];
    if j_cap >= 2 {
        // k2 = a^2 + 2a (sing * g) + g * g; g is smooth, so plain hats
        let sg = sing_conv_linear(&g, &grid);
        let gg = conv_quadratic(&g, &g, h);
        let k2: Vec<f64> = (0..=n).map(|i| a * a + 2.0 * a * sg[i] + gg[i]).collect();
        iterates.push(GridFunction1D {
            nodes: grid.clone(),
            values: k2,
        });
        sqrt_coeffs.push(4.0 * a * g[0] / PI.sqrt());
    }

    let mut tail_ratio = 0.0;
    let mut bound = 0.0;
    while iterates.len() < j_cap {
        let prev = &iterates.last().unwrap().values;
        let sigma_prev = *sqrt_coeffs.last().unwrap();
        let prev_reg: Vec<f64> = (0..=n)
            .map(|i| prev[i] - sigma_prev * grid[i].sqrt())
            .collect();
        let sk = sing_conv_linear(&prev_reg, &grid);
        let gk = conv_quadratic(&g, &prev_reg, h);
        // the sqrt component of the previous iterate is convolved exactly:
        // a * (sing * sigma sqrt(t)) = a sigma sqrt(pi) s / 2
        let gsq = if sigma_prev != 0.0 {
            sqrt_conv_linear(&g, &grid)
        } else {
            vec![0.0; n + 1]
        };
        let next: Vec<f64> = (0..=n)
            .map(|i| {
                a * (sk[i] + sigma_prev * PI.sqrt() * grid[i] / 2.0)
                    + gk[i]
                    + sigma_prev * gsq[i]
            })
            .collect();
        let norm_next = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let norm_prev = prev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        tail_ratio = if norm_prev > 0.0 {
            norm_next / norm_prev
        } else {
            0.0
        };
        // k_{j+1}(0) = 0 beyond k2, so only k3 inherits a sqrt term
        sqrt_coeffs.push(2.0 * a * prev[0] / PI.sqrt());
        iterates.push(GridFunction1D {
            nodes: grid.clone(),
            values: next,
        });
        if tail_ratio < 1.0 {
            bound = norm_next * tail_ratio / (1.0 - tail_ratio);
            if bound < 1e-10 {
                break;
            }
        }
    }
    if tail_ratio >= 1.0 && iterates.len() >= j_cap {
        return Err(Error::Convergence {
            ratio: tail_ratio,
            j: iterates.len(),
        });
    }

    // Gamma smooth part: bounded part of k1 plus all higher iterates
    let mut smooth = g;
    for it in iterates.iter().skip(1) {
        for (s, v) in smooth.iter_mut().zip(&it.values) {
            *s += v;
        }
    }
    let gamma_sqrt: f64 = sqrt_coeffs.iter().sum();
    let regular: Vec<f64> = (0..=n)
        .map(|i| smooth[i] - gamma_sqrt * grid[i].sqrt())
        .collect();
    let gamma_smooth = GridFunction1D {
        nodes: grid.clone(),
        values: smooth,
    };
    let gamma_regular = GridFunction1D {
        nodes: grid.clone(),
        values: regular,
    };
    // gamma1 = 1 + 2a sqrt(s/pi) + (2/3) sigma s^{3/2} + cumint(regular)
    let cs = gamma_regular.cumulative_quadratic();
    let gamma1_vals: Vec<f64> = grid
        .iter()
        .zip(&cs.values)
        .map(|(&x, &c)| {
            1.0 + 2.0 * a * (x / PI).sqrt() + gamma_sqrt * (2.0 / 3.0) * x.powf(1.5) + c
        })
        .collect();
    let gamma1_table = GridFunction1D {
        nodes: grid.clone(),
        values: gamma1_vals,
    };
    let lambda_table = gamma1_table.cumulative_quadratic();
    Ok(ResolventKernel {
        grid,
        iterated: iterates,
        singular_coefficient: a,
        gamma_sqrt_coefficient: gamma_sqrt,
        gamma_smooth,
        gamma_regular,
        gamma1_table,
        lambda_table,
        truncation_error_bound: bound,
    })
}

/// `Gamma_1(x, t) = 1 + int_t^x Gamma(z - t) dz`; requires `t <= x`.
pub fn gamma1(res: &ResolventKernel, x: f64, t: f64) -> Result<f64> {
    if t > x {
        return Err(Error::Domain(format!("gamma1 requires t <= x, got {t} > {x}")));
    }
    Ok(res.gamma1_lag(x - t))
}

/// `F(x) + int_0^x Gamma(x - t) F(t) dt` on the resolvent grid.
pub fn apply_resolvent(res: &ResolventKernel, f_rhs: &GridFunction1D) -> Result<GridFunction1D> {
    if f_rhs.nodes != res.grid {
        return Err(Error::Shape(
            "rhs must live on the resolvent grid".into(),
        ));
    }
    let sing = sing_conv_linear(&f_rhs.values, &res.grid);
    let h = res.grid[1] - res.grid[0];
    let smooth = conv_quadratic(&res.gamma_smooth.values, &f_rhs.values, h);
    let values = (0..f_rhs.len())
        .map(|i| f_rhs.values[i] + res.singular_coefficient * sing[i] + smooth[i])
        .collect();
    Ok(GridFunction1D {
        nodes: res.grid.clone(),
        values,
    })
}

/// Which sign of the collocation equation the literal resolvent series
/// inverts: the reconstruction `phi = F + Gamma * F` is tested against
/// both `phi + (k1*phi) = F` and `phi - (k1*phi) = F`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SignResolution {
    pub residual_plus: f64,
    pub residual_minus: f64,
    /// +1.0 or -1.0; the sign whose residual is small.
    pub resolved_sign: f64,
}

pub fn resolve_sign(k1: &SingularConvolutionKernel, res: &ResolventKernel) -> Result<SignResolution> {
    // a smooth, non-symmetric rhs exercises the full memory of the kernel;
    // the graded mesh resolves the sqrt-type start of the reconstruction
    let mesh = crate::grid::graded_mesh(512, 3.0);
    let rhs_fn = |x: f64| 1.0 + 0.5 * x - 0.25 * x * x;
    let f_rhs = GridFunction1D::from_fn(mesh.clone(), rhs_fn);
    let phi = reconstruct_solution(res, rhs_fn, &mesh);
    let conv = convolve(k1, &phi);
    let mut r_plus: f64 = 0.0;
    let mut r_minus: f64 = 0.0;
    for i in 0..phi.len() {
        r_plus = r_plus.max((phi.values[i] + conv.values[i] - f_rhs.values[i]).abs());
        r_minus = r_minus.max((phi.values[i] - conv.values[i] - f_rhs.values[i]).abs());
    }
    let resolved_sign = if r_minus < r_plus { -1.0 } else { 1.0 };
    Ok(SignResolution {
        residual_plus: r_plus,
        residual_minus: r_minus,
        resolved_sign,
    })
}

/// Interpolate a grid function onto new nodes.
pub fn resample(f: &GridFunction1D, nodes: &[f64]) -> GridFunction1D {
    GridFunction1D {
        nodes: nodes.to_vec(),
        values: nodes
            .iter()
            .map(|&x| interp_slice(&f.nodes, &f.values, x))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{graded_mesh, uniform_mesh};
    use proptest::prelude::*;

    fn abel_exact(x: f64) -> f64 {
        x.exp() * crate::special::erfc(x.sqrt())
    }

    fn max_err(phi: &GridFunction1D, exact: impl Fn(f64) -> f64) -> f64 {
        phi.nodes
            .iter()
            .zip(&phi.values)
            .fold(0.0f64, |m, (&x, &v)| m.max((v - exact(x)).abs()))
    }

    #[test]
    fn abel_oracle_on_graded_mesh() {
        let k1 = SingularConvolutionKernel::abel(1.0);
        let mut errs = Vec::new();
        for n in [128usize, 256, 512] {
            let rhs = GridFunction1D::from_fn(graded_mesh(n, 3.0), |_| 1.0);
            let phi = solve_collocation(&k1, &rhs, 1.0).unwrap();
            errs.push(max_err(&phi, abel_exact));
        }
        assert!(errs[2] < 1e-6, "max err at 512: {:.3e}", errs[2]);
        // observed order >= 1.5 at each doubling
        assert!((errs[0] / errs[1]).log2() >= 1.5, "{errs:?}");
        assert!((errs[1] / errs[2]).log2() >= 1.5, "{errs:?}");
    }

    #[test]
    fn abel_minus_sign_oracle() {
        let k1 = SingularConvolutionKernel::abel(1.0);
        let rhs = GridFunction1D::from_fn(graded_mesh(512, 3.0), |_| 1.0);
        let phi = solve_collocation(&k1, &rhs, -1.0).unwrap();
        let exact = |x: f64| x.exp() * (1.0 + crate::special::erf(x.sqrt()));
        assert!(max_err(&phi, exact) < 1e-6);
    }

    #[test]
    fn constant_kernel_oracle() {
        let k1 = SingularConvolutionKernel::constant(1.0);
        let rhs = GridFunction1D::from_fn(graded_mesh(512, 3.0), |_| 1.0);
        let phi = solve_collocation(&k1, &rhs, 1.0).unwrap();
        assert!(max_err(&phi, |x| (-x).exp()) < 1e-8);
    }

    #[test]
    fn homogeneous_equation_is_zero() {
        let k1 = SingularConvolutionKernel::abel(0.7);
        let rhs = GridFunction1D::zeros(graded_mesh(64, 3.0));
        let phi = solve_collocation(&k1, &rhs, 1.0).unwrap();
        assert_eq!(phi.max_abs(), 0.0);
    }

    #[test]
    fn discrete_residual_vanishes_at_nodes() {
        let fam = crate::heat_kernel::HeatKernelFamily::default();
        let k1 = SingularConvolutionKernel::new(
            0.5,
            Arc::new(move |s| fam.k_smooth(s).unwrap_or(0.0)),
            0.8,
        )
        .unwrap();
        let rhs = GridFunction1D::from_fn(graded_mesh(128, 3.0), |x| (1.0 + x).sin());
        for sign in [1.0, -1.0] {
            let phi = solve_collocation(&k1, &rhs, sign).unwrap();
            assert!(discrete_residual(&k1, &phi, &rhs, sign) < 1e-12);
        }
    }

    #[test]
    fn iterated_kernels_beta_identity() {
        // k1 = 1/sqrt(pi x): k2 = 1 exactly by the Beta-function identity
        let k1 = SingularConvolutionKernel::abel(1.0);
        let res = iterated_kernels(&k1, 6, uniform_mesh(64)).unwrap();
        for &v in &res.iterated[1].values {
            assert!((v - 1.0).abs() < 1e-13, "{v}");
        }
    }

    #[test]
    fn iterated_kernels_constant_closed_form() {
        // k1 = c: k_j = c^j x^{j-1}/(j-1)!, Gamma = c e^{cx}
        let c = 1.0;
        let k1 = SingularConvolutionKernel::constant(c);
        let res = iterated_kernels(&k1, 24, uniform_mesh(512)).unwrap();
        for (j, kj) in res.iterated.iter().enumerate().take(8) {
            let jf = j as f64; // k_{j+1}: c^{j+1} x^j / j!
            let fact: f64 = (1..=j).map(|i| i as f64).product();
            for (&x, &v) in kj.nodes.iter().zip(&kj.values) {
                let exact = c.powi(j as i32 + 1) * x.powf(jf) / fact;
                assert!((v - exact).abs() < 1e-10, "j={j} x={x}: {v} vs {exact}");
            }
        }
        for (&x, &v) in res.gamma_smooth.nodes.iter().zip(&res.gamma_smooth.values) {
            assert!((v - c * (c * x).exp()).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn single_term_resolvent_is_k1() {
        let k1 = SingularConvolutionKernel::constant(2.5);
        let res = iterated_kernels(&k1, 1, uniform_mesh(32)).unwrap();
        assert_eq!(res.iterated.len(), 1);
        for &v in &res.gamma_smooth.values {
            assert!((v - 2.5).abs() < 1e-14);
        }
    }

    #[test]
    fn non_decaying_tail_errors() {
        let k1 = SingularConvolutionKernel::constant(100.0);
        match iterated_kernels(&k1, 8, uniform_mesh(64)) {
            Err(Error::Convergence { ratio, .. }) => assert!(ratio >= 1.0),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn gamma1_basics() {
        let k1 = SingularConvolutionKernel::constant(1.3);
        let res = iterated_kernels(&k1, 30, uniform_mesh(1024)).unwrap();
        assert_eq!(gamma1(&res, 0.4, 0.4).unwrap(), 1.0);
        assert!(gamma1(&res, 0.3, 0.5).is_err());
        // constant kernel: gamma1(x, t) = e^{c (x-t)}
        for &(x, t) in &[(0.5, 0.2), (0.9, 0.0), (1.0, 0.7)] {
            let g = gamma1(&res, x, t).unwrap();
            let exact = (1.3 * (x - t)).exp();
            assert!((g - exact).abs() < 1e-8, "{g} vs {exact}");
        }
    }

    #[test]
    fn gamma1_monotone_and_at_least_one_for_problem_kernel() {
        let fam = crate::heat_kernel::HeatKernelFamily::default();
        for (alpha, beta) in [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0)] {
            let p = crate::problem::TransmissionParams::new(alpha, beta).unwrap();
            let k1 = p.trace_kernel(&fam).unwrap();
            let res = iterated_kernels(&k1, 40, uniform_mesh(512)).unwrap();
            let mut prev = 1.0;
            for i in 0..res.gamma1_table.len() {
                let v = res.gamma1_table.values[i];
                assert!(v >= prev - 1e-12, "gamma1 must be nondecreasing");
                assert!(v >= 1.0 - 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn resolvent_identity_on_grid() {
        // Gamma = k1 + k1 * Gamma, re-applying the builder's discrete
        // convolution to the truncated series tail (the sqrt component of
        // the tail is handled by the same exact moments the builder uses)
        let fam = crate::heat_kernel::HeatKernelFamily::default();
        let p = crate::problem::TransmissionParams::new(1.0, 1.0).unwrap();
        let k1 = p.trace_kernel(&fam).unwrap();
        let grid = uniform_mesh(512);
        let res = iterated_kernels(&k1, 40, grid.clone()).unwrap();
        let a = k1.singular_coefficient;
        let g: Vec<f64> = grid.iter().map(|&x| k1.bounded_at(x)).collect();
        let h = grid[1] - grid[0];
        let sigma = res.gamma_sqrt_coefficient;
        // regular part of the tail Gamma - k1
        let tail_reg: Vec<f64> = (0..grid.len())
            .map(|i| res.gamma_regular.values[i] - g[i])
            .collect();
        let sg = sing_conv_linear(&g, &grid);
        let gg = conv_quadratic(&g, &g, h);
        let stail = sing_conv_linear(&tail_reg, &grid);
        let gtail = conv_quadratic(&g, &tail_reg, h);
        let gsq = sqrt_conv_linear(&g, &grid);
        let mut worst: f64 = 0.0;
        for i in 0..grid.len() {
            let k2_i = a * a + 2.0 * a * sg[i] + gg[i];
            let conv = k2_i
                + a * (stail[i] + sigma * PI.sqrt() * grid[i] / 2.0)
                + gtail[i]
                + sigma * gsq[i];
            worst = worst.max((res.gamma_smooth.values[i] - g[i] - conv).abs());
        }
        assert!(worst < 1e-8, "identity residual {worst:.3e}");
    }

    #[test]
    fn apply_resolvent_constant_kernel() {
        let k1 = SingularConvolutionKernel::constant(1.0);
        let res = iterated_kernels(&k1, 30, uniform_mesh(1024)).unwrap();
        let rhs = GridFunction1D::from_fn(res.grid.clone(), |_| 1.0);
        let out = apply_resolvent(&res, &rhs).unwrap();
        assert!(max_err(&out, |x| x.exp()) < 1e-7);
        let zero = GridFunction1D::zeros(res.grid.clone());
        assert_eq!(apply_resolvent(&res, &zero).unwrap().max_abs(), 0.0);
        let short = GridFunction1D::from_fn(uniform_mesh(16), |_| 1.0);
        assert!(matches!(
            apply_resolvent(&res, &short),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn apply_resolvent_matches_collocation_on_smooth_rhs() {
        use rand::{Rng, SeedableRng};
        let fam = crate::heat_kernel::HeatKernelFamily::default();
        let p = crate::problem::TransmissionParams::new(1.0, 1.0).unwrap();
        let k1 = p.trace_kernel(&fam).unwrap();
        let res = iterated_kernels(&k1, 40, uniform_mesh(8192)).unwrap();
        let mesh = graded_mesh(512, 3.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let (c0, c1, c2) = (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let rhs = GridFunction1D::from_fn(mesh.clone(), |x| c0 + c1 * x + c2 * x * x);
            let via_res = reconstruct_solution(&res, |x| c0 + c1 * x + c2 * x * x, &mesh);
            let via_solve = solve_collocation(&k1, &rhs, -1.0).unwrap();
            let gap = via_res
                .values
                .iter()
                .zip(&via_solve.values)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(gap < 1e-6, "gap {gap:.3e}");
        }
        // a smooth kernel takes the uniform-grid path of apply_resolvent
        let smooth = SingularConvolutionKernel::constant(0.7);
        let res_s = iterated_kernels(&smooth, 30, uniform_mesh(2048)).unwrap();
        let rhs = GridFunction1D::from_fn(res_s.grid.clone(), |x| 1.0 + x.sin());
        let via_res = apply_resolvent(&res_s, &rhs).unwrap();
        let via_solve = solve_collocation(&smooth, &rhs, -1.0).unwrap();
        let gap = via_res
            .values
            .iter()
            .zip(&via_solve.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(gap < 1e-6, "smooth-kernel gap {gap:.3e}");
    }

    #[test]
    fn sign_resolution_prefers_minus() {
        let fam = crate::heat_kernel::HeatKernelFamily::default();
        let p = crate::problem::TransmissionParams::new(1.0, 1.0).unwrap();
        let k1 = p.trace_kernel(&fam).unwrap();
        let res = iterated_kernels(&k1, 40, uniform_mesh(4096)).unwrap();
        let sr = resolve_sign(&k1, &res).unwrap();
        assert_eq!(sr.resolved_sign, -1.0);
        assert!(sr.residual_minus < 1e-6, "{:.3e}", sr.residual_minus);
        assert!(sr.residual_plus > 1e-3);
    }

    #[test]
    fn picard_matches_collocation_on_abel() {
        let k1 = SingularConvolutionKernel::abel(1.0);
        let rhs = GridFunction1D::from_fn(graded_mesh(1024, 3.0), |_| 1.0);
        let pic = picard_oracle(&k1, &rhs, 1.0, 60).unwrap();
        let col = solve_collocation(&k1, &rhs, 1.0).unwrap();
        let gap = pic
            .values
            .iter()
            .zip(&col.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(gap < 1e-5, "{gap:.3e}");
    }

    #[test]
    fn picard_zero_rhs() {
        let k1 = SingularConvolutionKernel::abel(1.0);
        let rhs = GridFunction1D::zeros(uniform_mesh(64));
        let pic = picard_oracle(&k1, &rhs, 1.0, 1).unwrap();
        assert_eq!(pic.max_abs(), 0.0);
    }




    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn solver_is_linear(a0 in -1.0f64..1.0, a1 in -1.0f64..1.0, s in 0.1f64..1.5) {
            let k1 = SingularConvolutionKernel::abel(0.8);
            let mesh = graded_mesh(48, 3.0);
            let f1 = GridFunction1D::from_fn(mesh.clone(), |x| a0 + x);
            let f2 = GridFunction1D::from_fn(mesh.clone(), |x| a1 * (3.0 * x).cos());
            let fc = GridFunction1D::from_fn(mesh.clone(), |x| (a0 + x) + s * a1 * (3.0 * x).cos());
            let p1 = solve_collocation(&k1, &f1, 1.0).unwrap();
            let p2 = solve_collocation(&k1, &f2, 1.0).unwrap();
            let pc = solve_collocation(&k1, &fc, 1.0).unwrap();
            for i in 0..pc.len() {
                let lin = p1.values[i] + s * p2.values[i];
                prop_assert!((pc.values[i] - lin).abs() < 1e-10);
            }
        }
    }
}
