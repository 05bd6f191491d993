//! Acceptance gate (runs without the libtest harness so its report is always
//! shown). Prints one PASS/FAIL line per criterion; tolerances and time
//! budgets are fixed below.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use muskat_core::alpha::AlphaQuadrature;
use muskat_core::diagnostics::{lyapunov_log, sobolev_norm};
use muskat_core::evolve::{contraction_monitor, epsilon_continuation, run_trajectory, Outcome, SolverConfig};
use muskat_core::muskat::Muskat;
use muskat_core::operators::{
    derivative, fractional_laplacian, hilbert_transform, weighted_fraclap_kernel, weighted_fraclap_spectral,
    KernelWeight, HILBERT_SYMBOL_SIGN,
};
use muskat_core::verify::embeddings::{gagliardo_norm, hardy_constant};
use muskat_core::verify::pointwise::pointwise_lemma_suite;
use muskat_core::verify::{run_suite, trend_is_bounded, InequalityReport, VerifyConfig, SUITES};
use muskat_core::weights::{AdmissibleWeight, GridWeight};
use muskat_core::{PeriodicGrid, SampledField};
use num_complex::Complex64;

const KERNEL_TOL: f64 = 1e-3;
/// Accuracy of the reference `φ` values; refinement is judged above it.
const KERNEL_FLOOR: f64 = 1e-7;
const CONVENTION_TOL: f64 = 1e-12;
const FORMULATION_TOL: f64 = 1e-5;
const MIN_ORDER: f64 = 2.0;
const L2_GROWTH_TOL: f64 = 1e-12;
const LYAPUNOV_TOL: f64 = 1e-5;
const SMALL_DATA_SLACK: f64 = 1.05;
const SCALING_TOL: f64 = 1e-8;
const POINTWISE_SAMPLES: usize = 100_000;
const GAGLIARDO_TARGET: f64 = 2.0 * PI * PI;
const GAGLIARDO_TOL: f64 = 0.01;

/// Criteria that fail for a documented reason; the gate requires them to fail.
const KNOWN_UNATTAINABLE: [(usize, &str); 1] = [(
    10,
    "with f̂(ξ) = ∫e^{−ixξ}f the exact ratio is 2∫(1−cos t)/t² dt = 2π, not 2π²",
)];

struct Finding {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Finding {
    Finding { pass, detail }
}

fn max_abs_diff(a: &SampledField, b: &SampledField) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn operator_consistency() -> Finding {
    let w = AdmissibleWeight::logarithmic().unwrap();
    let mut errors = Vec::new();
    let mut last = Duration::ZERO;
    for n in [64, 128, 256, 512, 1024, 2048] {
        let t = Instant::now();
        let g = PeriodicGrid::new(PI, n).unwrap();
        let f = g.sample(|x| x.cos() + 0.5 * (3.0 * x + 0.2).sin() + 0.2 * (8.0 * x).cos());
        let spectral = weighted_fraclap_spectral(&f, 1.0, &GridWeight::new(&w, &g).unwrap());
        let kernel = weighted_fraclap_kernel(&f, &KernelWeight::new(&w, &AlphaQuadrature::standard(&g)).unwrap());
        errors.push(spectral.sub(&kernel).l2_norm() / spectral.l2_norm());
        last = t.elapsed();
    }
    let fine = *errors.last().unwrap();
    let improving = errors.windows(2).all(|e| e[1] <= e[0].max(KERNEL_FLOOR)) && errors[0] > 10.0 * errors[3];
    let order = (errors[0] / errors[2]).log2() / 2.0;
    let pass = fine < KERNEL_TOL && improving && last < Duration::from_secs(10);
    let list: Vec<String> = errors.iter().map(|e| format!("{e:.2e}")).collect();
    outcome(
        pass,
        format!("rel L2 error at N=64..2048: [{}], order {order:.1} (N=64→256), N=2048 in {:.2}s", list.join(", "), last.as_secs_f64()),
    )
}

fn convention_identity() -> Finding {
    let g = PeriodicGrid::new(PI, 256).unwrap();
    let mut symbol_err: f64 = 0.0;
    for i in 0..g.len() {
        let xi = g.xi(i);
        let sgn = if xi > 0.0 { 1.0 } else if xi < 0.0 { -1.0 } else { 0.0 };
        let prod = Complex64::new(0.0, xi) * Complex64::new(0.0, HILBERT_SYMBOL_SIGN * sgn);
        symbol_err = symbol_err.max((prod - Complex64::new(xi.abs(), 0.0)).norm());
    }
    let mut op_err: f64 = 0.0;
    for k in 0..(g.len() / 2) as i32 {
        for phase in [0.0, 0.5 * PI] {
            let f = g.sample(|x| (k as f64 * x + phase).cos());
            let lhs = derivative(&hilbert_transform(&f), 1);
            let rhs = fractional_laplacian(&f, 1.0);
            op_err = op_err.max(max_abs_diff(&lhs, &rhs) / (1.0 + k as f64));
        }
    }
    let pass = symbol_err <= CONVENTION_TOL && op_err <= CONVENTION_TOL;
    outcome(
        pass,
        format!(
            "symbol error {symbol_err:.1e} on all {} indices, operator error {op_err:.1e} on |k| < N/2 (odd symbols drop Nyquist)",
            g.len()
        ),
    )
}

fn formulation_identities() -> Finding {
    let g = PeriodicGrid::new(PI, 2048).unwrap();
    let f = g.sample(|x| 0.5 * x.cos() + 0.3 * (2.0 * x + 0.2).sin());
    let b = Muskat::new(&g).bundle(&f);
    let reference = Muskat::with_quadrature(AlphaQuadrature::new(&g, 1, 2, 1).unwrap()).rhs_pv(&f);
    let steps = [16usize, 8, 4, 2, 1];
    let errs: Vec<f64> = steps
        .iter()
        .map(|&num| Muskat::with_quadrature(AlphaQuadrature::new(&g, num, 1, 1).unwrap()).rhs_pv(&f).sub(&reference).l2_norm())
        .collect();
    // Least-squares slope of log error against log step.
    let xs: Vec<f64> = steps.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 5.0, ys.iter().sum::<f64>() / 5.0);
    let order = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let pass = b.split_residual < FORMULATION_TOL && b.decomposition_residual < FORMULATION_TOL && order >= MIN_ORDER;
    outcome(
        pass,
        format!(
            "split residual {:.1e}, decomposition residual {:.1e}, observed order {order:.2} under Δα refinement",
            b.split_residual, b.decomposition_residual
        ),
    )
}

fn lyapunov_law() -> Finding {
    let g = PeriodicGrid::new(PI, 128).unwrap();
    let f0 = g.sample(|x| 0.3 * x.cos() + 0.1 * (2.0 * x + 0.4).sin());
    let cfg = SolverConfig { t_end: 1.0, output_interval: 0.1, ..SolverConfig::default() };
    let traj = run_trajectory(&cfg, &f0).unwrap();
    let completed = traj.outcome == Outcome::Completed;
    let monotone = traj.records.windows(2).all(|r| r[1].l2 <= r[0].l2 * (1.0 + L2_GROWTH_TOL));
    let m = Muskat::with_quadrature(AlphaQuadrature::new(&g, 1, 1, 2).unwrap());
    let mut identity: f64 = 0.0;
    for f in &traj.states {
        let lhs = fractional_laplacian(f, 1.0).sub(&m.apply_t(f, f)).dot(f);
        let rhs = lyapunov_log(f, m.quadrature());
        identity = identity.max((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE));
    }
    let pass = completed && monotone && traj.max_l2_growth <= L2_GROWTH_TOL && identity <= LYAPUNOV_TOL;
    outcome(
        pass,
        format!(
            "max per-step L2 growth {:.1e} over {} steps ({} rejected), identity rel error {identity:.1e}",
            traj.max_l2_growth, traj.steps, traj.rejections
        ),
    )
}

fn small_data_bound() -> Finding {
    let g = PeriodicGrid::new(PI, 128).unwrap();
    let f0 = g.sample(|x| 0.01 * x.cos());
    let cfg = SolverConfig { eps: 1e-4, t_end: 10.0, output_interval: 0.05, ..SolverConfig::default() };
    let traj = run_trajectory(&cfg, &f0).unwrap();
    let e0 = sobolev_norm(&f0, 1.5, true).powi(2);
    let worst = traj
        .records
        .iter()
        .zip(&traj.dissipation)
        .map(|(r, d)| r.h_threehalf.powi(2) + 0.5 * d)
        .fold(0.0, f64::max);
    let ratio = worst / (2.0 * e0);
    let pass = traj.outcome == Outcome::Completed && ratio <= SMALL_DATA_SLACK;
    outcome(pass, format!("sup(‖f‖²_H3/2 + ½∫D) / 2‖f0‖²_H3/2 = {ratio:.4} over t ∈ [0, 10]"))
}

fn scaling_covariance() -> Finding {
    let n = 256;
    let g = PeriodicGrid::new(PI, n).unwrap();
    let f = g.sample(|x| 0.6 * x.cos() + 0.3 * (2.0 * x + 0.2).sin() + 0.1 * (5.0 * x).cos());
    let r = Muskat::new(&g).rhs_pv(&f);
    let mut worst: f64 = 0.0;
    for lam in [0.5, 2.0, 4.0] {
        let gl = PeriodicGrid::new(PI / lam, n).unwrap();
        let fl = SampledField::new(&gl, f.values().iter().map(|v| v / lam).collect()).unwrap();
        let rl = Muskat::new(&gl).rhs_pv(&fl);
        worst = worst.max(max_abs_diff(&rl, &r));
    }
    outcome(worst <= SCALING_TOL, format!("max |rhs_λ − rhs| = {worst:.1e} for λ ∈ {{1/2, 2, 4}}"))
}

fn continuation_cauchy() -> Finding {
    let g = PeriodicGrid::new(PI, 128).unwrap();
    let f0 = g.sample(|x| 0.2 * x.cos() + 0.1 * (3.0 * x + 0.3).sin());
    let cfg = SolverConfig { t_end: 1.0, output_interval: 0.1, ..SolverConfig::default() };
    let c = epsilon_continuation(&cfg, &f0, &[1e-2, 1e-3, 1e-4]).unwrap();
    let completed = c.trajectories.iter().all(|t| t.outcome == Outcome::Completed);
    let decreasing = c.cauchy.windows(2).all(|d| d[1] < d[0]);
    let list: Vec<String> = c.cauchy.iter().map(|d| format!("{d:.3e}")).collect();
    outcome(completed && decreasing, format!("sup-H1/2 distances [{}]", list.join(", ")))
}

fn contraction() -> Finding {
    let g = PeriodicGrid::new(PI, 128).unwrap();
    let f1 = g.sample(|x| 0.05 * x.cos());
    let f2 = g.sample(|x| 0.05 * x.cos() + 1e-3 * (2.0 * x + 0.1).sin());
    let mut trend = Vec::new();
    for dt in [1e-2, 5e-3, 2.5e-3] {
        let cfg = SolverConfig { t_end: 1.0, dt_max: dt, output_interval: 0.05, ..SolverConfig::default() };
        let (a, b) = (run_trajectory(&cfg, &f1).unwrap(), run_trajectory(&cfg, &f2).unwrap());
        let pts = contraction_monitor(&a, &b).unwrap();
        trend.push(pts.iter().map(|p| p.gronwall.abs()).fold(0.0, f64::max));
    }
    let list: Vec<String> = trend.iter().map(|v| format!("{v:.3}")).collect();
    outcome(trend_is_bounded(&trend), format!("max |Grönwall factor| for dt_max = 1e-2, 5e-3, 2.5e-3: [{}]", list.join(", ")))
}

fn harness_reports(seed: u64) -> Vec<InequalityReport> {
    let cfg = VerifyConfig { seed, ..VerifyConfig::default() };
    let mut out = pointwise_lemma_suite(POINTWISE_SAMPLES, seed);
    for s in SUITES.iter().filter(|&&s| s != "pointwise") {
        out.extend(run_suite(s, &cfg).unwrap());
    }
    out
}

fn inequality_harness() -> Finding {
    let first = harness_reports(1);
    let second = harness_reports(1);
    let deterministic = first == second;
    let failing: Vec<&str> = first.iter().filter(|r| !r.bounded()).map(|r| r.name.as_str()).collect();
    let hardy: Vec<&InequalityReport> = first.iter().filter(|r| r.name.starts_with("hardy")).collect();
    let hardy_explicit = !hardy.is_empty()
        && hardy.iter().all(|r| r.explicit_constant.is_some_and(|c| c >= 1.0 && r.max_ratio <= c));
    let constants_match = hardy.iter().all(|r| {
        let c = r.explicit_constant.unwrap_or(f64::NAN);
        let mut parts = r.name.trim_start_matches("hardy_r").split("_s");
        let rr: f64 = parts.next().and_then(|p| p.parse().ok()).unwrap_or(f64::NAN);
        let ss: f64 = parts.next().and_then(|p| p.parse().ok()).unwrap_or(f64::NAN);
        (c - hardy_constant(rr, ss)).abs() <= 1e-12 * c
    });
    let pass = deterministic && failing.is_empty() && hardy_explicit && constants_match;
    outcome(
        pass,
        format!(
            "{} reports, {} suspect {:?}, Hardy explicit constants {}, deterministic {deterministic}",
            first.len(),
            failing.len(),
            failing,
            if hardy_explicit && constants_match { "held" } else { "violated" }
        ),
    )
}

fn gagliardo_constant() -> Finding {
    let g = PeriodicGrid::new(PI, 1024).unwrap();
    let f = g.sample(|x| x.cos() + 0.4 * (3.0 * x + 0.5).sin() + 0.1 * (7.0 * x).cos());
    let ratio = gagliardo_norm(&f, 0.5, 2.0).unwrap().powi(2) / sobolev_norm(&f, 0.5, true).powi(2);
    let rel = (ratio / GAGLIARDO_TARGET - 1.0).abs();
    outcome(rel <= GAGLIARDO_TOL, format!("ratio {ratio:.6} vs 2π² = {GAGLIARDO_TARGET:.6} (rel dev {rel:.3}; 2π = {:.6})", 2.0 * PI))
}

fn main() {
    type Check = fn() -> Finding;
    let criteria: [(usize, &str, Check, u64); 10] = [
        (1, "operator consistency", operator_consistency, 10),
        (2, "convention identity", convention_identity, 1),
        (3, "formulation identities", formulation_identities, 60),
        (4, "Lyapunov / L2 law", lyapunov_law, 60),
        (5, "small-data global bound", small_data_bound, 300),
        (6, "scaling covariance", scaling_covariance, 30),
        (7, "eps-continuation Cauchy property", continuation_cauchy, 600),
        (8, "contraction monitor", contraction, 300),
        (9, "inequality harness", inequality_harness, 900),
        (10, "Gagliardo/Fourier constant", gagliardo_constant, 60),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check, budget) in criteria {
        let t = Instant::now();
        let o = check();
        let elapsed = t.elapsed();
        let pass = o.pass && elapsed <= Duration::from_secs(budget);
        let known = KNOWN_UNATTAINABLE.iter().find(|k| k.0 == id);
        println!(
            "{} [{id:>2}] {name}: {} ({:.2}s / {budget}s)",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64()
        );
        match (pass, known) {
            (false, Some((_, why))) => println!("     expected failure: {why}"),
            (true, Some(_)) => unexpected.push(format!("criterion {id} passed but is listed as unattainable")),
            (false, None) => unexpected.push(format!("criterion {id} failed")),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("acceptance gate failed: {unexpected:?}");
        std::process::exit(1);
    }
    println!("acceptance gate: ok");
}
