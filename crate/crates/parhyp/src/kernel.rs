//! The solution kernel `K(x, y; x1, y1)` of the inverse operator, assembled
//! from the heat-kernel family and the resolvent.
//!
//! Sector by sector (theta(0) = 0, all regions open):
//!
//! ```text
//!   P x P:  theta(x - x1) [ G(x-x1, y, y1) - (1/alpha) (G0(., y) * G1(., y1))(x-x1) ]
//!   P x H:  -theta(x - xi1) [ G3(x-xi1, y) - (beta/alpha) G4(x-xi1, y) ]
//!   H x P:  -(1/alpha) theta(eta - x1) G1(eta - x1, y1)
//!   H x H:  1/2 theta(eta-xi1) theta(xi1-xi) theta(eta1-eta)
//!           - theta(eta-xi1) [ gamma1(eta-xi1) - (beta/alpha) Lambda(eta-xi1) ]
//! ```
//!
//! with `G1(s, y) = int_0^s G0(t, y) Gamma1(s, t) dt` (`G3` is the same
//! function), `G4(s, y) = int_0^s G1(u, y) du` and
//! `Lambda(s) = int_0^s gamma1(u) du`.
//!
//! The printed form of this kernel carries `+beta/alpha` cumulative terms in
//! both hyperbolic-source sectors; substituting the trace representation
//! into the solution formula gives the `-beta/alpha` combinations above,
//! and only these reproduce the solved field (the crate's representation
//! tests exercise exactly that identity, for nonzero beta as well).

use crate::error::Error;
use crate::geometry::{classify, to_char, Region};
use crate::grid::interp_slice;
use crate::heat_kernel::HeatKernelFamily;
use crate::problem::TransmissionParams;
use crate::special::ErfcSeries;
use crate::volterra::ResolventKernel;
use crate::Result;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Regularization floor on the parabolic time separation: `G` is only
/// square integrable, so point evaluation with `0 < x - x1 < floor` is
/// refused and quadrature nodes must stay interior.
pub const PP_SEPARATION_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    ParabolicParabolic,
    ParabolicHyperbolic,
    HyperbolicParabolic,
    HyperbolicHyperbolic,
    TypeChangeLine,
}

impl Sector {
    pub fn name(&self) -> &'static str {
        match self {
            Sector::ParabolicParabolic => "parabolic-parabolic",
            Sector::ParabolicHyperbolic => "parabolic-hyperbolic",
            Sector::HyperbolicParabolic => "hyperbolic-parabolic",
            Sector::HyperbolicHyperbolic => "hyperbolic-hyperbolic",
            Sector::TypeChangeLine => "type-change line",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: f64,
    pub sector: Sector,
    /// True when the value is zero because every theta factor vanished.
    pub causal_zero: bool,
}

/// Per-observation-height tables of `G1`, `G4`, `G5` on the machinery grid.
struct YTables {
    g1: Vec<f64>,
    g4: Vec<f64>,
    g5: Vec<f64>,
}

enum EvaluatorKind {
    Problem {
        resolvent: ResolventKernel,
        y_tables: Mutex<HashMap<u64, Arc<YTables>>>,
        pp_tables: Mutex<HashMap<(u64, u64), Arc<Vec<f64>>>>,
    },
    Zero,
    Separable,
    ConstGamma {
        c: f64,
    },
}

/// Evaluator for the solution kernel, plus the zero / rank-one /
/// constant-resolvent surrogates used by the spectral oracles.
pub struct KernelEvaluator {
    pub params: TransmissionParams,
    pub heat: HeatKernelFamily,
    kind: EvaluatorKind,
}

/// The rank-one surrogate factors `K(z, z1) = g(z) h(z1)`.
pub fn separable_g(x: f64, y: f64) -> f64 {
    (0.5 * (x + y)).exp()
}

pub fn separable_h(x: f64, y: f64) -> f64 {
    1.0 + 0.5 * x - 0.25 * y
}

impl KernelEvaluator {
    pub fn problem(
        params: TransmissionParams,
        heat: HeatKernelFamily,
        resolvent: ResolventKernel,
    ) -> Result<Self> {
        params.require_invertible()?;
        Ok(Self {
            params,
            heat,
            kind: EvaluatorKind::Problem {
                resolvent,
                y_tables: Mutex::new(HashMap::new()),
                pp_tables: Mutex::new(HashMap::new()),
            },
        })
    }

    pub fn zero(params: TransmissionParams, heat: HeatKernelFamily) -> Self {
        Self {
            params,
            heat,
            kind: EvaluatorKind::Zero,
        }
    }

    pub fn separable(params: TransmissionParams, heat: HeatKernelFamily) -> Self {
        Self {
            params,
            heat,
            kind: EvaluatorKind::Separable,
        }
    }

    pub fn const_gamma(params: TransmissionParams, heat: HeatKernelFamily, c: f64) -> Self {
        Self {
            params,
            heat,
            kind: EvaluatorKind::ConstGamma { c },
        }
    }

    pub fn is_problem(&self) -> bool {
        matches!(self.kind, EvaluatorKind::Problem { .. })
    }

    pub fn resolvent(&self) -> Option<&ResolventKernel> {
        match &self.kind {
            EvaluatorKind::Problem { resolvent, .. } => Some(resolvent),
            _ => None,
        }
    }

    /// `gamma1` as a function of the lag.
    pub fn gamma1_lag(&self, s: f64) -> f64 {
        match &self.kind {
            EvaluatorKind::Problem { resolvent, .. } => resolvent.gamma1_lag(s),
            EvaluatorKind::ConstGamma { c } => 1.0 + c * s.max(0.0),
            _ => 1.0,
        }
    }

    /// `Lambda(s) = int_0^s gamma1`.
    pub fn lambda_lag(&self, s: f64) -> f64 {
        let s = s.max(0.0);
        match &self.kind {
            EvaluatorKind::Problem { resolvent, .. } => resolvent.lambda_lag(s),
            EvaluatorKind::ConstGamma { c } => s + 0.5 * c * s * s,
            _ => s,
        }
    }

    fn machinery_grid(&self) -> Option<&[f64]> {
        self.resolvent().map(|r| r.grid.as_slice())
    }

    fn y_table(&self, y: f64) -> Arc<YTables> {
        let EvaluatorKind::Problem {
            resolvent,
            y_tables,
            ..
        } = &self.kind
        else {
            unreachable!("y_table is only used by the problem kernel")
        };
        let key = y.to_bits();
        if let Some(t) = y_tables.lock().unwrap().get(&key) {
            return t.clone();
        }
        let t = Arc::new(build_y_table(&self.heat, resolvent, y));
        y_tables.lock().unwrap().insert(key, t.clone());
        t
    }

    fn pp_table(&self, y: f64, y1: f64) -> Arc<Vec<f64>> {
        let EvaluatorKind::Problem {
            resolvent,
            pp_tables,
            ..
        } = &self.kind
        else {
            unreachable!("pp_table is only used by the problem kernel")
        };
        let (a, b) = if y <= y1 { (y, y1) } else { (y1, y) };
        let key = (a.to_bits(), b.to_bits());
        if let Some(t) = pp_tables.lock().unwrap().get(&key) {
            return t.clone();
        }
        let t = Arc::new(build_pp_table(&self.heat, resolvent, a, b));
        pp_tables.lock().unwrap().insert(key, t.clone());
        t
    }

    /// Build every table a quadrature scheme will touch, in parallel.
    pub fn precompute(&self, ys: &[f64]) {
        if !self.is_problem() {
            return;
        }
        let mut uniq: Vec<f64> = ys.to_vec();
        uniq.sort_by(f64::total_cmp);
        uniq.dedup();
        uniq.par_iter().for_each(|&y| {
            let _ = self.y_table(y);
        });
        let pairs: Vec<(f64, f64)> = uniq
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| uniq[i..].iter().map(move |&b| (a, b)))
            .collect();
        pairs.par_iter().for_each(|&(a, b)| {
            let _ = self.pp_table(a, b);
        });
    }

    /// `G1(s, y) = G3(s, y)`.
    pub fn g1_at(&self, s: f64, y: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            EvaluatorKind::Problem { .. } => {
                let t = self.y_table(y);
                interp_slice(self.machinery_grid().unwrap(), &t.g1, s)
            }
            EvaluatorKind::ConstGamma { c } => {
                let w = self.heat.w_series(y);
                w.eval(s) + c * w.m0(s)
            }
            _ => 0.0,
        }
    }

    /// `G4(s, y) = int_0^s G1`.
    pub fn g4_at(&self, s: f64, y: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            EvaluatorKind::Problem { .. } => {
                let t = self.y_table(y);
                interp_slice(self.machinery_grid().unwrap(), &t.g4, s)
            }
            EvaluatorKind::ConstGamma { c } => {
                let w = self.heat.w_series(y);
                w.m0(s) + c * (s * w.m0(s) - w.m1(s))
            }
            _ => 0.0,
        }
    }

    /// `G5(s, y) = int_0^s G4` (used by the derived trace decomposition).
    pub fn g5_at(&self, s: f64, y: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            EvaluatorKind::Problem { .. } => {
                let t = self.y_table(y);
                interp_slice(self.machinery_grid().unwrap(), &t.g5, s)
            }
            EvaluatorKind::ConstGamma { c } => {
                // int_0^s W.m0 = s m0 - m1 exactly; the c-part by midpoint
                // refinement of the closed G4 (surrogate-only path)
                let w = self.heat.w_series(y);
                let base = s * w.m0(s) - w.m1(s);
                if *c == 0.0 {
                    base
                } else {
                    let n = 64;
                    let mut acc = 0.0;
                    for i in 0..n {
                        let u = (i as f64 + 0.5) / n as f64 * s;
                        acc += self.g4_at(u, y) * s / n as f64;
                    }
                    acc
                }
            }
            _ => 0.0,
        }
    }

    /// `(G0(., y) * G1(., y1))(s)` for the parabolic-parabolic correction.
    pub fn pp_correction_at(&self, s: f64, y: f64, y1: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            EvaluatorKind::Problem { .. } => {
                let t = self.pp_table(y, y1);
                interp_slice(self.machinery_grid().unwrap(), &t, s)
            }
            EvaluatorKind::ConstGamma { c } => {
                let p = self.heat.p_series(y, y1);
                p.eval(s) + c * p.m0(s)
            }
            _ => 0.0,
        }
    }

    /// Point evaluation of the kernel with sector classification.
    pub fn kernel_k(&self, x: f64, y: f64, x1: f64, y1: f64) -> Result<KernelValue> {
        for (px, py) in [(x, y), (x1, y1)] {
            if classify(px, py) == Region::Outside {
                return Err(Error::Domain(format!(
                    "point ({px}, {py}) lies outside the closed domain"
                )));
            }
        }
        match &self.kind {
            EvaluatorKind::Zero => {
                return Ok(KernelValue {
                    value: 0.0,
                    sector: sector_of(y, y1),
                    causal_zero: false,
                })
            }
            EvaluatorKind::Separable => {
                return Ok(KernelValue {
                    value: separable_g(x, y) * separable_h(x1, y1),
                    sector: sector_of(y, y1),
                    causal_zero: false,
                })
            }
            _ => {}
        }
        // theta(0) = 0: anything on the type-change line evaluates to zero
        if y == 0.0 || y1 == 0.0 {
            return Ok(KernelValue {
                value: 0.0,
                sector: Sector::TypeChangeLine,
                causal_zero: true,
            });
        }
        let alpha = self.params.alpha;
        let boa = self.params.beta / alpha;
        if y > 0.0 && y1 > 0.0 {
            let sep = x - x1;
            if sep <= 0.0 {
                return Ok(KernelValue {
                    value: 0.0,
                    sector: Sector::ParabolicParabolic,
                    causal_zero: true,
                });
            }
            if sep < PP_SEPARATION_FLOOR {
                return Err(Error::Proximity {
                    sep,
                    floor: PP_SEPARATION_FLOOR,
                });
            }
            let g = self.heat.green_g(sep, y, y1)?;
            let corr = self.pp_correction_at(sep, y, y1);
            Ok(KernelValue {
                value: g - corr / alpha,
                sector: Sector::ParabolicParabolic,
                causal_zero: false,
            })
        } else if y > 0.0 {
            let xi1 = to_char(x1, y1).xi;
            if x <= xi1 {
                return Ok(KernelValue {
                    value: 0.0,
                    sector: Sector::ParabolicHyperbolic,
                    causal_zero: true,
                });
            }
            let s = x - xi1;
            Ok(KernelValue {
                value: -(self.g1_at(s, y) - boa * self.g4_at(s, y)),
                sector: Sector::ParabolicHyperbolic,
                causal_zero: false,
            })
        } else if y1 > 0.0 {
            let eta = to_char(x, y).eta;
            if eta <= x1 {
                return Ok(KernelValue {
                    value: 0.0,
                    sector: Sector::HyperbolicParabolic,
                    causal_zero: true,
                });
            }
            Ok(KernelValue {
                value: -self.g1_at(eta - x1, y1) / alpha,
                sector: Sector::HyperbolicParabolic,
                causal_zero: false,
            })
        } else {
            let c = to_char(x, y);
            let c1 = to_char(x1, y1);
            let mut value = 0.0;
            let mut causal_zero = true;
            if c.eta > c1.xi {
                causal_zero = false;
                let lag = c.eta - c1.xi;
                value -= self.gamma1_lag(lag) - boa * self.lambda_lag(lag);
                if c1.xi > c.xi && c1.eta > c.eta {
                    value += 0.5;
                }
            }
            Ok(KernelValue {
                value,
                sector: Sector::HyperbolicHyperbolic,
                causal_zero,
            })
        }
    }
}

fn sector_of(y: f64, y1: f64) -> Sector {
    if y == 0.0 || y1 == 0.0 {
        Sector::TypeChangeLine
    } else if y > 0.0 && y1 > 0.0 {
        Sector::ParabolicParabolic
    } else if y > 0.0 {
        Sector::ParabolicHyperbolic
    } else if y1 > 0.0 {
        Sector::HyperbolicParabolic
    } else {
        Sector::HyperbolicHyperbolic
    }
}

fn build_y_table(heat: &HeatKernelFamily, res: &ResolventKernel, y: f64) -> YTables {
    let w = heat.w_series(y);
    let conv = res.convolve_series(&w);
    let grid = &res.grid;
    let g1: Vec<f64> = grid
        .iter()
        .zip(&conv)
        .map(|(&s, &c)| w.eval(s) + c)
        .collect();
    let g4 = cumulative_on(grid, &g1);
    let g5 = cumulative_on(grid, &g4);
    YTables { g1, g4, g5 }
}

fn build_pp_table(heat: &HeatKernelFamily, res: &ResolventKernel, y: f64, y1: f64) -> Vec<f64> {
    let p: ErfcSeries = heat.p_series(y, y1);
    let conv = res.convolve_series(&p);
    res.grid
        .iter()
        .zip(&conv)
        .map(|(&s, &c)| p.eval(s) + c)
        .collect()
}

fn cumulative_on(grid: &[f64], values: &[f64]) -> Vec<f64> {
    let g = crate::grid::GridFunction1D {
        nodes: grid.to_vec(),
        values: values.to_vec(),
    };
    g.cumulative_quadratic().values
}

// ---------------------------------------------------------------------
// representation quadrature: u(z0) = int int K(z0; z1) f(z1) dz1
// ---------------------------------------------------------------------

use crate::quad::{gauss_legendre_01, geometric_edges};
use crate::source::SourceField;

/// Quadrature of the kernel against a source at one observation point.
/// Panels are aligned to the kernel's support breaks so each piece is
/// smooth; the parabolic short-time layer uses the same graded scheme and
/// closed-form inner integrals as the direct solver.
pub fn representation_u(eval: &KernelEvaluator, x0: f64, y0: f64, f: &SourceField) -> Result<f64> {
    if classify(x0, y0) == Region::Outside {
        return Err(Error::Domain(format!(
            "observation point ({x0}, {y0}) outside the domain"
        )));
    }
    let (n20, w20) = gauss_legendre_01(20);
    let alpha = eval.params.alpha;
    let boa = eval.params.beta / alpha;
    let mut total = 0.0;
    if y0 > 0.0 {
        // P x P, Green part: graded time panels with closed-form y1 integral
        for w in geometric_edges(x0, 0.25, 1e-13).windows(2) {
            let (hi, lo) = (w[0], w[1]);
            let len = hi - lo;
            for (&t, &q) in n20.iter().zip(&w20) {
                let s = lo + len * t;
                if s <= 0.0 {
                    continue;
                }
                total += q * len * inner_green_pub(f, s, y0, x0 - s);
            }
        }
        // P x P, resolvent correction (smooth, vanishes at s -> 0)
        for (&tx, &qx) in n20.iter().zip(&w20) {
            let x1 = x0 * tx;
            let s = x0 - x1;
            let mut inner = 0.0;
            for (&ty, &qy) in n20.iter().zip(&w20) {
                inner += qy * eval.pp_correction_at(s, y0, ty) * f.eval(x1, ty);
            }
            total -= qx * x0 * inner / alpha;
        }
        // P x H: xi1 < x0 within the triangle; kernel independent of eta1
        let xi_hi = x0.min(1.0);
        for (&t1, &q1) in n20.iter().zip(&w20) {
            let xi1 = xi_hi * t1;
            let s = x0 - xi1;
            let kval = -(eval.g1_at(s, y0) - boa * eval.g4_at(s, y0));
            let mut inner = 0.0;
            for (&t2, &q2) in n20.iter().zip(&w20) {
                let eta1 = xi1 + (1.0 - xi1) * t2;
                inner += q2 * (1.0 - xi1) * f.f1(xi1, eta1);
            }
            // physical measure: dx1 dy1 = (1/2) dxi1 deta1, f = 4 f1
            total += q1 * xi_hi * kval * inner * 2.0;
        }
    } else {
        let c0 = to_char(x0, y0);
        // H x P
        for (&t1, &q1) in n20.iter().zip(&w20) {
            let x1 = c0.eta * t1;
            let mut inner = 0.0;
            for (&ty, &qy) in n20.iter().zip(&w20) {
                inner += qy * eval.g1_at(c0.eta - x1, ty) * f.eval(x1, ty);
            }
            total -= q1 * c0.eta * inner / alpha;
        }
        // H x H: support xi1 < eta0; breaks at xi0 (theta(xi1 - xi0)) and
        // eta1 = eta0 (theta(eta1 - eta0))
        let mut xi_segments = vec![(0.0, c0.xi), (c0.xi, c0.eta)];
        xi_segments.retain(|(a, b)| b > a);
        for (lo_xi, hi_xi) in xi_segments {
            for (&t1, &q1) in n20.iter().zip(&w20) {
                let xi1 = lo_xi + (hi_xi - lo_xi) * t1;
                let lag = c0.eta - xi1;
                let base = -(eval.gamma1_lag(lag) - boa * eval.lambda_lag(lag));
                let half_active = xi1 > c0.xi;
                let mut eta_segments = vec![(xi1, c0.eta.max(xi1)), (c0.eta.max(xi1), 1.0)];
                eta_segments.retain(|(a, b)| b > a);
                let mut inner = 0.0;
                for (lo_e, hi_e) in eta_segments {
                    for (&t2, &q2) in n20.iter().zip(&w20) {
                        let eta1 = lo_e + (hi_e - lo_e) * t2;
                        let mut kval = base;
                        if half_active && eta1 > c0.eta {
                            kval += 0.5;
                        }
                        inner += q2 * (hi_e - lo_e) * kval * f.f1(xi1, eta1);
                    }
                }
                total += q1 * (hi_xi - lo_xi) * inner * 2.0;
            }
        }
    }
    Ok(total)
}

/// `int_0^1 G(s, y, y1) f(x1, y1) dy1` (shared with the direct solver).
fn inner_green_pub(f: &SourceField, s: f64, y: f64, x1: f64) -> f64 {
    let m = 6i64;
    let mut acc = 0.0;
    for n in -m..=m {
        acc += f.gauss_moment(s, y + 2.0 * n as f64, x1);
    }
    for n in -m - 1..=m {
        acc -= f.gauss_moment(s, -y - 2.0 * n as f64, x1);
    }
    acc / (2.0 * (std::f64::consts::PI * s).sqrt())
}
