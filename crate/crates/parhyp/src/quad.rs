//! Gauss-Legendre rules and panel helpers.

use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss-Legendre rule on [0, 1].
///
/// Newton iteration on the Legendre polynomial; standard and deterministic.
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // initial guess (Tricomi)
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed 8-point rule used inside product-integration panels.
pub fn gl8() -> (&'static [f64; 8], &'static [f64; 8]) {
    const N: [f64; 8] = [
        0.019855071751231884,
        0.10166676129318664,
        0.2372337950418355,
        0.40828267875217505,
        0.5917173212478249,
        0.7627662049581645,
        0.8983332387068134,
        0.9801449282487681,
    ];
    const W: [f64; 8] = [
        0.05061426814518813,
        0.11119051722668724,
        0.15685332293894364,
        0.18134189168918099,
        0.18134189168918099,
        0.15685332293894364,
        0.11119051722668724,
        0.05061426814518813,
    ];
    (&N, &W)
}

/// Geometric panels of (0, x], finest toward 0: returns edges descending
/// from x to ~0 with the given ratio, ending with an explicit 0.
pub fn geometric_edges(x: f64, ratio: f64, floor: f64) -> Vec<f64> {
    let mut edges = vec![x];
    while *edges.last().unwrap() > floor {
        let next = edges.last().unwrap() * ratio;
        edges.push(next);
        if edges.len() > 120 {
            break;
        }
    }
    edges.push(0.0);
    edges
}

/// `int_lo^hi f` by the n-point Gauss rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let (xs, ws) = gauss_legendre_01(n);
    let len = hi - lo;
    xs.iter()
        .zip(&ws)
        .map(|(&t, &w)| w * len * f(lo + len * t))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_exact_for_polynomials() {
        for n in [2usize, 5, 12, 24, 48] {
            let (xs, ws) = gauss_legendre_01(n);
            assert!((ws.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            // exact through degree 2n-1
            let p = 2 * n - 1;
            let val: f64 = xs
                .iter()
                .zip(&ws)
                .map(|(&x, &w)| w * x.powi(p as i32))
                .sum();
            assert!((val - 1.0 / (p as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn gl8_matches_generator() {
        let (xs, ws) = gauss_legendre_01(8);
        let (n, w) = gl8();
        for i in 0..8 {
            assert!((xs[i] - n[i]).abs() < 1e-15);
            assert!((ws[i] - w[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn integrate_smooth() {
        let v = integrate(|x| x.exp(), 0.0, 1.0, 16);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-14);
    }
}
