//! One-dimensional grids and grid functions.

use crate::error::Error;
use crate::Result;

/// A scalar function sampled on a strictly increasing set of nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction1D {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::Shape(format!(
                "node/value length mismatch: {} vs {}",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Shape("nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes, values })
    }

    pub fn from_fn(nodes: Vec<f64>, f: impl Fn(f64) -> f64) -> Self {
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self { nodes, values }
    }

    pub fn zeros(nodes: Vec<f64>) -> Self {
        let values = vec![0.0; nodes.len()];
        Self { nodes, values }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Piecewise-linear interpolation, constant extrapolation at the ends.
    pub fn interp(&self, x: f64) -> f64 {
        interp_slice(&self.nodes, &self.values, x)
    }

    /// Local three-point Lagrange interpolation (order 3 for smooth data).
    pub fn interp_quadratic(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if n < 3 {
            return self.interp(x);
        }
        if x <= self.nodes[0] {
            return self.values[0];
        }
        if x >= self.nodes[n - 1] {
            return self.values[n - 1];
        }
        let idx = self.nodes.partition_point(|&t| t <= x);
        let k = idx.clamp(1, n - 2);
        let (a, b, c) = (self.nodes[k - 1], self.nodes[k], self.nodes[k + 1]);
        let (fa, fb, fc) = (self.values[k - 1], self.values[k], self.values[k + 1]);
        fa * (x - b) * (x - c) / ((a - b) * (a - c))
            + fb * (x - a) * (x - c) / ((b - a) * (b - c))
            + fc * (x - a) * (x - b) / ((c - a) * (c - b))
    }

    /// Cumulative trapezoid integral with value 0 at the first node.
    pub fn cumulative(&self) -> GridFunction1D {
        let mut v = vec![0.0; self.len()];
        for i in 1..self.len() {
            v[i] = v[i - 1]
                + 0.5 * (self.values[i] + self.values[i - 1]) * (self.nodes[i] - self.nodes[i - 1]);
        }
        GridFunction1D {
            nodes: self.nodes.clone(),
            values: v,
        }
    }

    /// Cumulative integral using local quadratic interpolation (pairs of
    /// panels, uneven spacing allowed). Order 3; used where the trapezoid
    /// bias would dominate a residual measurement.
    pub fn cumulative_quadratic(&self) -> GridFunction1D {
        let n = self.len();
        let mut v = vec![0.0; n];
        let mut i = 0;
        while i + 1 < n {
            if i + 2 < n {
                let (a, b, c) = (self.nodes[i], self.nodes[i + 1], self.nodes[i + 2]);
                let (fa, fb, fc) = (self.values[i], self.values[i + 1], self.values[i + 2]);
                v[i + 1] = v[i] + quad_segment(a, b, c, fa, fb, fc, a, b);
                v[i + 2] = v[i + 1] + quad_segment(a, b, c, fa, fb, fc, b, c);
                i += 2;
            } else {
                v[i + 1] = v[i]
                    + 0.5 * (self.values[i] + self.values[i + 1])
                        * (self.nodes[i + 1] - self.nodes[i]);
                i += 1;
            }
        }
        GridFunction1D {
            nodes: self.nodes.clone(),
            values: v,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Integral over [lo, hi] of the quadratic through (a,fa),(b,fb),(c,fc).
fn quad_segment(a: f64, b: f64, c: f64, fa: f64, fb: f64, fc: f64, lo: f64, hi: f64) -> f64 {
    let prim = |x: f64| {
        let la = (x - b) * (x - c);
        let _ = la;
        // integrate each Lagrange basis exactly: use power form around `a`
        let t = x - a;
        let (ba, ca) = (b - a, c - a);
        // L_a = (x-b)(x-c)/((a-b)(a-c)) etc. expressed in t:
        let da = ba * ca; // (a-b)(a-c) = ba*ca
        let db = -ba * (c - b); // (b-a)(b-c)
        let dc = ca * (c - b); // (c-a)(c-b)
        let p_a = (t * t * t / 3.0 - (ba + ca) * t * t / 2.0 + ba * ca * t) / da;
        let p_b = (t * t * t / 3.0 - ca * t * t / 2.0) / db;
        let p_c = (t * t * t / 3.0 - ba * t * t / 2.0) / dc;
        fa * p_a + fb * p_b + fc * p_c
    };
    prim(hi) - prim(lo)
}

pub fn interp_slice(nodes: &[f64], values: &[f64], x: f64) -> f64 {
    let n = nodes.len();
    if x <= nodes[0] {
        return values[0];
    }
    if x >= nodes[n - 1] {
        return values[n - 1];
    }
    let idx = nodes.partition_point(|&t| t <= x);
    let (x0, x1) = (nodes[idx - 1], nodes[idx]);
    let (y0, y1) = (values[idx - 1], values[idx]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Uniform mesh of n+1 nodes on [0, 1].
pub fn uniform_mesh(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// Graded mesh x_i = (i/n)^q on [0, 1]; clusters toward the weakly
/// singular endpoint so the sqrt-type trace behaviour is resolved.
pub fn graded_mesh(n: usize, q: f64) -> Vec<f64> {
    (0..=n).map(|i| (i as f64 / n as f64).powf(q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_nodes() {
        assert!(GridFunction1D::new(vec![0.0, 0.0, 1.0], vec![0.0; 3]).is_err());
        assert!(GridFunction1D::new(vec![0.0, 1.0], vec![0.0; 3]).is_err());
    }

    #[test]
    fn cumulative_quadratic_exact_for_parabola() {
        let mesh = graded_mesh(64, 2.0);
        let g = GridFunction1D::from_fn(mesh, |x| 3.0 * x * x);
        let c = g.cumulative_quadratic();
        for (x, v) in c.nodes.iter().zip(&c.values) {
            assert!((v - x.powi(3)).abs() < 1e-14);
        }
    }

    #[test]
    fn interp_endpoints() {
        let g = GridFunction1D::from_fn(uniform_mesh(4), |x| x);
        assert_eq!(g.interp(-1.0), 0.0);
        assert_eq!(g.interp(2.0), 1.0);
        assert!((g.interp(0.3) - 0.3).abs() < 1e-15);
    }
}
