//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured quantity next to its threshold.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use parhyp::grid::{graded_mesh, uniform_mesh, GridFunction1D};
use parhyp::heat_kernel::HeatKernelFamily;
use parhyp::kernel::{representation_u, KernelEvaluator};
use parhyp::problem::{
    self, solve_u, u_hyperbolic_point, u_parabolic_point, verify_solution, SolveGrids,
    TransmissionParams,
};
use parhyp::source::{SourceField, SourceKind, Support};
use parhyp::spectral::{
    kept_eigenvalues, lidskii_check, trace_decomposed, trace_direct, QuadratureScheme,
    SpectralReport,
};
use parhyp::volterra::{
    iterated_kernels, resolve_sign, solve_collocation, SingularConvolutionKernel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "{} criterion {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

fn heat() -> HeatKernelFamily {
    HeatKernelFamily::default()
}

fn problem_evaluator(alpha: f64, beta: f64, n: usize) -> KernelEvaluator {
    let h = heat();
    let p = TransmissionParams::new(alpha, beta).unwrap();
    let k1 = p.trace_kernel(&h).unwrap();
    let res = iterated_kernels(&k1, 40, uniform_mesh(n)).unwrap();
    KernelEvaluator::problem(p, h, res).unwrap()
}

#[test]
fn criterion_01_volterra_oracles() {
    let start = Instant::now();
    let abel = SingularConvolutionKernel::abel(1.0);
    let rhs = GridFunction1D::from_fn(graded_mesh(512, 3.0), |_| 1.0);
    let phi = solve_collocation(&abel, &rhs, 1.0).unwrap();
    let abel_err = phi.nodes.iter().zip(&phi.values).fold(0.0f64, |m, (&x, &v)| {
        m.max((v - x.exp() * parhyp::special::erfc(x.sqrt())).abs())
    });
    let abel_secs = start.elapsed().as_secs_f64();

    let constant = SingularConvolutionKernel::constant(1.0);
    let phi_c = solve_collocation(&constant, &rhs, 1.0).unwrap();
    let const_err = phi_c
        .nodes
        .iter()
        .zip(&phi_c.values)
        .fold(0.0f64, |m, (&x, &v)| m.max((v - (-x).exp()).abs()));

    report(
        "1 (Volterra oracles)",
        abel_err < 1e-6 && const_err < 1e-8 && abel_secs < 1.0,
        &format!(
            "abel max err {abel_err:.3e} (< 1e-6, {abel_secs:.2} s), constant max err {const_err:.3e} (< 1e-8)"
        ),
    );
}

#[test]
fn criterion_02_sign_resolution() {
    let h = heat();
    let p = TransmissionParams::new(1.0, 1.0).unwrap();
    let k1 = p.trace_kernel(&h).unwrap();
    let res = iterated_kernels(&k1, 40, uniform_mesh(4096)).unwrap();
    let sr = resolve_sign(&k1, &res).unwrap();
    let minus_ok = sr.residual_minus < 1e-6;
    let plus_ok = sr.residual_plus < 1e-6;
    report(
        "2 (sign resolution)",
        minus_ok != plus_ok && sr.resolved_sign == -1.0,
        &format!(
            "resolved sign {:+}, residuals: minus {:.3e}, plus {:.3e} (exactly one < 1e-6)",
            sr.resolved_sign, sr.residual_minus, sr.residual_plus
        ),
    );
}

#[test]
fn criterion_03_heat_kernel_identities() {
    let h = heat();
    let mut rng = ChaCha8Rng::seed_from_u64(1_001);
    let mut worst_fd: f64 = 0.0;
    for _ in 0..100 {
        let x = rng.gen_range(0.02..1.0);
        let y1 = rng.gen_range(0.05..0.95);
        let step = 1e-5;
        let fd = (h.green_g(x, step, y1).unwrap() - h.green_g(x, 0.0, y1).unwrap()) / step;
        let g0 = h.flux_g0(x, y1).unwrap();
        worst_fd = worst_fd.max((fd - g0).abs() / g0.abs());
    }
    let mut wall: f64 = 0.0;
    let mut depth: f64 = 0.0;
    for i in 1..=50 {
        let xi = i as f64 / 50.0;
        wall = wall.max(h.cumulative_flux(xi, 1.0).unwrap().abs());
        for j in 0..50 {
            let y = j as f64 / 50.0;
            depth = depth.min(h.cumulative_flux(xi, y).unwrap());
        }
    }
    let mass = h.mass_integral(1e-3, 0.5).unwrap();
    report(
        "3 (heat-kernel identities)",
        worst_fd < 1e-4 && wall < 1e-10 && depth > -1e-10 && mass >= 0.999,
        &format!(
            "flux-vs-FD rel {worst_fd:.3e} (< 1e-4), wall flux {wall:.3e} (< 1e-10), \
             min flux {depth:.3e} (> -1e-10), mass {mass:.6} (>= 0.999)"
        ),
    );
}

#[test]
fn criterion_04_manufactured_hyperbolic_solution() {
    let h = heat();
    let f = SourceField::hyperbolic_constant();
    let p = TransmissionParams::new(1.0, 0.0).unwrap();
    let grids = SolveGrids {
        parabolic_nx: 24,
        parabolic_ny: 24,
        char_n: 24,
        volterra_n: 512,
    };
    let sol = solve_u(&f, &p, &h, &grids, None, 1e-6, -1.0).unwrap();
    let r = verify_solution(&sol, &f, &p);
    let mut repr_err: f64 = 0.0;
    let n = sol.char_nodes.len() - 1;
    for i in 0..=n {
        for j in i..=n {
            let (xi, eta) = (sol.char_nodes[i], sol.char_nodes[j]);
            let expect = (eta - xi) * (1.0 - eta);
            repr_err = repr_err
                .max((sol.hyperbolic[i][j] - sol.tau.interp(eta) - expect).abs());
        }
    }
    report(
        "4 (manufactured hyperbolic solution)",
        r.hyperbolic_wave < 1e-10 && repr_err < 1e-12 && r.transmission_uy < 1e-5,
        &format!(
            "wave residual {:.3e} (< 1e-10), u - tau vs (eta-xi)(1-eta) {repr_err:.3e} \
             (quadrature-exact), transmission residual {:.3e} (< 1e-5)",
            r.hyperbolic_wave, r.transmission_uy
        ),
    );
}

#[test]
fn criterion_05_parabolic_residual_convergence() {
    let h = heat();
    let p = TransmissionParams::new(1.0, 1.0).unwrap();
    let f = SourceField {
        kind: SourceKind::GaussianBump {
            amplitude: 1.0,
            x0: 0.45,
            y0: 0.35,
            sigma: 0.25,
        },
        support: Support::Whole,
    };
    let mut residuals = Vec::new();
    let mut boundary: f64 = 0.0;
    for n in [16usize, 32] {
        let grids = SolveGrids {
            parabolic_nx: n,
            parabolic_ny: n,
            char_n: 16,
            volterra_n: 256,
        };
        let sol = solve_u(&f, &p, &h, &grids, None, 1e-6, -1.0).unwrap();
        let r = verify_solution(&sol, &f, &p);
        residuals.push(r.parabolic_pde);
        boundary = boundary.max(r.boundary_aa0).max(r.boundary_a0b0);
    }
    let order = (residuals[0] / residuals[1]).log2();
    report(
        "5 (parabolic residual convergence)",
        order >= 0.8 && boundary < 1e-8,
        &format!(
            "residual {:.3e} -> {:.3e}, observed order {order:.2} (>= 0.8), \
             wall residual {boundary:.3e} (< 1e-8)",
            residuals[0], residuals[1]
        ),
    );
}

fn five_smooth_sources() -> Vec<SourceField> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut out = vec![
        SourceField {
            kind: SourceKind::Constant { value: 1.0 },
            support: Support::Whole,
        },
        SourceField {
            kind: SourceKind::GaussianBump {
                amplitude: 2.0,
                x0: 0.4,
                y0: 0.2,
                sigma: 0.3,
            },
            support: Support::Whole,
        },
        SourceField {
            kind: SourceKind::SeparableProduct {
                fx: vec![1.0, 1.0],
                fy: vec![1.0, -0.5],
            },
            support: Support::Whole,
        },
    ];
    for _ in 0..2 {
        // positive random polynomials keep the probe values well off zero
        let coeffs: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..2).map(|_| rng.gen_range(0.2..1.0)).collect())
            .collect();
        out.push(SourceField {
            kind: SourceKind::Polynomial { coeffs },
            support: Support::Whole,
        });
    }
    out
}

#[test]
fn criterion_06_kernel_representation() {
    let start = Instant::now();
    let h = heat();
    let p = TransmissionParams::new(1.0, 1.0).unwrap();
    let ev = problem_evaluator(1.0, 1.0, 2048);
    let probes_par = [(0.5, 0.4), (0.3, 0.7), (0.8, 0.15)];
    let probes_hyp = [(0.5, -0.2), (0.25, -0.1), (0.45, -0.35)];
    let mut worst: f64 = 0.0;
    for f in five_smooth_sources() {
        let ts = problem::solve_tau(&f, &p, &h, 384, None, 1e-6, -1.0).unwrap();
        for &(x, y) in &probes_par {
            let direct = u_parabolic_point(x, y, &f, &h, &ts.tau_prime);
            let viak = representation_u(&ev, x, y, &f).unwrap();
            worst = worst.max((direct - viak).abs() / direct.abs());
        }
        for &(x, y) in &probes_hyp {
            let c = parhyp::geometry::to_char(x, y);
            let direct = u_hyperbolic_point(c.xi, c.eta, &f, &ts.tau);
            let viak = representation_u(&ev, x, y, &f).unwrap();
            worst = worst.max((direct - viak).abs() / direct.abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "6 (kernel representation)",
        worst < 0.02 && secs < 120.0,
        &format!("worst probe disagreement {:.3}% (< 2%), runtime {secs:.1} s (< 120 s)", worst * 100.0),
    );
}

#[test]
fn criterion_07_positivity_suite() {
    let start = Instant::now();
    let mut detail = String::new();
    let mut pass = true;
    for (alpha, beta) in [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0)] {
        let ev = problem_evaluator(alpha, beta, 2048);
        // sampled Gamma_1 >= 1
        let mut g1_ok = true;
        for i in 1..=100 {
            let eta = i as f64 / 100.0;
            for j in 0..100 {
                let xi1 = eta * j as f64 / 100.0;
                if ev.gamma1_lag(eta - xi1) < 1.0 - 1e-12 {
                    g1_ok = false;
                }
            }
        }
        let scheme = QuadratureScheme::build(12);
        let trace = trace_direct(&ev, &scheme).unwrap();
        let d = trace_decomposed(&ev, 12).unwrap();
        let ok = g1_ok
            && d.i1 > 0.0
            && d.i1_derived > 0.0
            && d.i2 + d.i3 > 0.0
            && d.i2_derived + d.i3_derived > 0.0
            && trace > 0.0;
        pass &= ok;
        detail.push_str(&format!(
            "({alpha},{beta}): Gamma1>=1 {g1_ok}, I1 {:.3e}, I2+I3 {:.3e}, trace {:.3e}; ",
            d.i1,
            d.i2 + d.i3,
            trace
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 300.0;
    detail.push_str(&format!("runtime {secs:.1} s (< 300 s)"));
    report("7 (positivity suite)", pass, &detail);
}

/// Shared spectral report for criteria 8 and 9 (m = 12, refinements at 24
/// and 48 inside).
fn problem_spectral_report() -> &'static SpectralReport {
    static REPORT: OnceLock<SpectralReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let ev = problem_evaluator(1.0, 1.0, 2048);
        lidskii_check(&ev, 12, 4000, None, None).unwrap()
    })
}

#[test]
fn criterion_08_lidskii_consistency() {
    // rank-one surrogate
    let h = heat();
    let p = TransmissionParams::new(1.0, 1.0).unwrap();
    let surrogate = KernelEvaluator::separable(p, h);
    let sr = lidskii_check(&surrogate, 10, 4000, Some("separable".into()), None).unwrap();
    // problem kernel at (1,1)
    let rep = problem_spectral_report();
    let pass = sr.lidskii_gap < 1e-10
        && rep.lidskii_gap_refined < rep.lidskii_gap
        && rep.lidskii_gap < 0.10
        && rep.lidskii_gap_refined < 0.10;
    report(
        "8 (Lidskii consistency)",
        pass,
        &format!(
            "surrogate gap {:.3e} (< 1e-10); problem gaps m=12: {:.3e}, m=24: {:.3e} \
             (refined smaller, both < 10%)",
            sr.lidskii_gap, rep.lidskii_gap, rep.lidskii_gap_refined
        ),
    );
}

#[test]
fn criterion_09_eigenvalue_existence() {
    let rep = problem_spectral_report();
    let pass = !rep.eigenvalues.is_empty()
        && rep.largest_modulus > 0.0
        && rep.largest_modulus_rel_change < 0.10
        && rep.trace_gaal > 0.0;
    let sum_sq: f64 = rep
        .eigenvalues
        .iter()
        .map(|e| e[0] * e[0] - e[1] * e[1])
        .sum();
    report(
        "9 (eigenvalue existence)",
        pass && sum_sq > 0.0,
        &format!(
            "{} eigenvalues above threshold, |lambda_1| = {:.6} with {:.2}% change under \
             refinement (< 10%); sum lambda_k^2 = {:.6} > 0",
            rep.eigenvalues.len(),
            rep.largest_modulus,
            rep.largest_modulus_rel_change * 100.0,
            sum_sq
        ),
    );
}

#[test]
fn criterion_10_stability_probe() {
    let h = heat();
    let p = TransmissionParams::new(1.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0_17);
    let coarse = SolveGrids {
        parabolic_nx: 16,
        parabolic_ny: 16,
        char_n: 16,
        volterra_n: 128,
    };
    let fine = SolveGrids {
        parabolic_nx: 32,
        parabolic_ny: 32,
        char_n: 32,
        volterra_n: 256,
    };
    let mut ratios = Vec::new();
    let mut drift: f64 = 0.0;
    for _ in 0..20 {
        let coeffs: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let f = SourceField {
            kind: SourceKind::Polynomial { coeffs },
            support: Support::Whole,
        };
        let nf = problem::source_l2_norm(&f).max(1e-12);
        let s1 = solve_u(&f, &p, &h, &coarse, None, 1e-6, -1.0).unwrap();
        let s2 = solve_u(&f, &p, &h, &fine, None, 1e-6, -1.0).unwrap();
        let r1 = problem::sobolev_surrogate_norm(&s1) / nf;
        let r2 = problem::sobolev_surrogate_norm(&s2) / nf;
        drift = drift.max((r1 - r2).abs() / r2);
        ratios.push(r1);
    }
    let max_ratio = ratios.iter().cloned().fold(0.0f64, f64::max);
    // emit the probe report next to the test binary outputs
    let payload = serde_json::json!({
        "ratios": ratios,
        "max_ratio": max_ratio,
        "max_refinement_drift": drift,
    });
    let path = std::env::temp_dir().join("parhyp_stability_probe.json");
    std::fs::write(&path, serde_json::to_string_pretty(&payload).unwrap()).unwrap();
    report(
        "10 (stability probe)",
        max_ratio.is_finite() && drift <= 0.2,
        &format!(
            "norm-ratio bound {max_ratio:.4} over 20 sources, refinement drift {:.2}% \
             (<= 20%); report at {}",
            drift * 100.0,
            path.display()
        ),
    );
}
