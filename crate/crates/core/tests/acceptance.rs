//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N ...: PASS|FAIL` line to stderr before asserting.

use bounded_euler::biot_savart::{classical_bs, cutoff_convolve, renormalized_bs, RenormalizeOptions};
use bounded_euler::fields::{
    curl, CutoffProfile, Grid, RadialCutoff, ScalarField, UInfinityPath, VectorField,
};
use bounded_euler::moc::{dini_integral, riesz_moc, Moc};
use bounded_euler::pressure::{
    decay_check, grad_pressure, pressure_growth_diagnostic, pressure_riesz,
};
use bounded_euler::scenario::{initial_state, smooth_patch, InitialData};
use bounded_euler::serfati::{cutoff_independence, serfati_residual};
use bounded_euler::solver::{
    mollify_truncate, run_with_vorticity, s_norm, transform_frame, Direction, MollifyOptions,
    Recovery, SolverConfig,
};
use bounded_euler::verify::{
    almost_bsu_error, blob, blob_momentum_residual, default_bounds, observed_orders, patch_drift,
    pressure_route_error, shear_drift,
};
use std::io::Write;
use std::time::Instant;

const LADDER: [usize; 3] = [64, 128, 256];

fn report(n: usize, name: &str, passed: bool, detail: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n:>2} {name}: {status} ({detail})");
    assert!(passed, "criterion {n} {name} failed: {detail}");
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Least-squares slope of `y` against `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

fn blob_run(n: usize) -> bounded_euler::fields::Trajectory {
    let g = Grid::new(n, 6.0).unwrap();
    let w = blob(g);
    let u = classical_bs(&w, None).unwrap();
    let mut cfg = SolverConfig::new(g, 0.05, 0.5);
    cfg.recovery = Recovery::Classical;
    run_with_vorticity(&cfg, &w, &u).unwrap().into_result().unwrap().trajectory
}

#[test]
fn criterion_01_classical_limit() {
    let start = Instant::now();
    let g = Grid::new(256, 8.0).unwrap();
    let omega = ScalarField::from_fn(g, |[x, y]| if x * x + y * y < 1.0 { 1.0 } else { 0.0 });
    let classical = classical_bs(&omega, None).unwrap();
    let opts = RenormalizeOptions::default();
    let (v, rep) = renormalized_bs(&omega, &CutoffProfile::default(), &[2.0, 4.0, 8.0], &opts).unwrap();
    let diff = v.sub(&classical).unwrap().sup_on(&g.probe_indices());
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "classical-limit reduction",
        rep.converged && diff <= 1e-8 && secs < 30.0,
        &format!("sup diff {diff:.2e} <= 1e-8, converged {}, {secs:.1} s < 30 s", rep.converged),
    );
}

#[test]
fn criterion_02_almost_bsu() {
    let errors: Vec<f64> = LADDER.iter().map(|&n| almost_bsu_error(n).unwrap()).collect();
    let orders = observed_orders(&LADDER, &errors);
    let c = LADDER
        .iter()
        .zip(&errors)
        .map(|(&n, e)| e / (6.0 / n as f64).powi(2))
        .fold(0.0, f64::max);
    report(
        2,
        "almost-bsu identity",
        min(&orders) >= 1.5,
        &format!("errors {}, orders {orders:.2?} >= 1.5, C = max e/h^2 = {c:.3}", sci(&errors)),
    );
}

#[test]
fn criterion_03_kernel_bounds() {
    let start = Instant::now();
    let rep = default_bounds().unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut expected: Vec<f64> = [(1, 0), (1, 1), (2, 0)].iter().map(|(a, b)| 1.0 - (a + b) as f64).collect();
    expected.extend([1.25, 1.5, 1.75].iter().map(|p| 2.0 - p));
    let fitted: Vec<f64> = rep.rows.iter().map(|r| r.fitted_slope).collect();
    let worst = fitted.iter().zip(&expected).map(|(f, e)| (f - e).abs()).fold(0.0, f64::max);
    report(
        3,
        "kernel-bound exponents",
        fitted.len() == expected.len() && worst <= 0.1 && secs < 60.0,
        &format!("fitted {fitted:.4?}, max |slope - expected| {worst:.2e} <= 0.1, {secs:.1} s < 60 s"),
    );
}

#[test]
fn criterion_04_vorticity_rate() {
    let g = Grid::new(256, 24.0).unwrap();
    let u = VectorField::from_fn(g, |[_, y]| [y.sin(), 0.0]);
    let omega = curl(&u);
    let probe = g.probe_indices();
    let scales = [2.0, 4.0, 8.0, 16.0];
    let scaled: Vec<f64> = scales
        .iter()
        .map(|&r| {
            let ur = cutoff_convolve(&omega, &CutoffProfile::default(), r).unwrap();
            r * curl(&ur).sub(&omega).unwrap().sup_on(&probe)
        })
        .collect();
    let logs: Vec<f64> = scales.iter().map(|r: &f64| r.ln()).collect();
    let trend = slope(&logs, &scaled);
    let bounded = scaled.iter().all(|v| *v <= scaled[0] * 1.1);
    report(
        4,
        "vorticity convergence rate",
        bounded && trend <= 0.0,
        &format!("R*err {scaled:.4?}, trend slope {trend:.3} <= 0, max within 1.1x of R=2 value"),
    );
}

#[test]
fn criterion_05_steady_states() {
    let mut lines = vec![];
    let mut ok = true;
    for (name, f) in [("shear", shear_drift as fn(usize, f64) -> _), ("patch", patch_drift)] {
        let drifts: Vec<_> = LADDER.iter().map(|&n| f(n, 1.0).unwrap()).collect();
        let errors: Vec<f64> = drifts.iter().map(|d| d.error).collect();
        let bounded = drifts.iter().all(|d| d.error <= 5.0 * (d.h * d.h + d.dt * d.dt));
        let orders = observed_orders(&LADDER, &errors);
        ok &= bounded && min(&orders) >= 1.5;
        lines.push(format!("{name} drift {} within 5(h^2+dt^2) {bounded}, orders {orders:.2?}", sci(&errors)));
    }
    report(5, "steady-state preservation", ok, &lines.join("; "));
}

#[test]
fn criterion_06_serfati_x_independence() {
    let dev = |n: usize| {
        let traj = blob_run(n);
        let r = serfati_residual(&traj, &RadialCutoff::default(), &traj.uinf).unwrap();
        max(&r.deviation)
    };
    let (coarse, fine) = (dev(64), dev(256));
    report(
        6,
        "serfati x-independence",
        coarse >= 3.0 * fine,
        &format!("probe std N=64 {coarse:.2e}, N=256 {fine:.2e}, ratio {:.1} >= 3", coarse / fine),
    );
}

#[test]
fn criterion_07_cutoff_independence() {
    let mut lines = vec![];
    let mut ok = true;
    let smooth = |s: f64| RadialCutoff::new(CutoffProfile::Smoothstep5 { r0: 0.5, r1: 1.0 }, s).unwrap();
    let bump = |s: f64| RadialCutoff::new(CutoffProfile::ExpBump { r0: 0.5, r1: 1.0 }, s).unwrap();
    for n in [128, 256] {
        let traj = blob_run(n);
        let g = *traj.grid();
        let h = g.spacing();
        let probe = g.probe_indices();
        let mut worst = 0.0f64;
        for (a, b) in [(smooth(1.0), bump(1.0)), (smooth(1.0), smooth(2.0)), (bump(1.0), bump(2.0))] {
            worst = worst.max(cutoff_independence(&traj, 0.5, &a, &b).unwrap());
        }
        let u = &traj.last().u;
        let reference = grad_pressure(u, [0.0, 0.0], &smooth(1.0), 1.0).unwrap();
        for (c, eps) in [(smooth(1.0), 2.0), (bump(1.0), 1.0), (bump(1.0), 2.0)] {
            let gp = grad_pressure(u, [0.0, 0.0], &c, eps).unwrap();
            worst = worst.max(gp.sub(&reference).unwrap().sup_on(&probe));
        }
        ok &= worst <= 10.0 * h * h;
        lines.push(format!("N={n} max diff {worst:.2e} <= 10h^2 = {:.2e}", 10.0 * h * h));
    }
    report(7, "cutoff independence", ok, &lines.join("; "));
}

#[test]
fn criterion_08_frame_equivalence() {
    let path = UInfinityPath::linear([1.0, 0.0], 0.5).unwrap();
    let compare = |g: Grid, w: &ScalarField, u: &VectorField| {
        let mut cfg = SolverConfig::new(g, 0.05, 0.5);
        let still = run_with_vorticity(&cfg, w, u).unwrap().into_result().unwrap().trajectory;
        cfg.uinf = path.clone();
        let moving = run_with_vorticity(&cfg, w, u).unwrap().into_result().unwrap().trajectory;
        let forward = transform_frame(&moving, Direction::Forward).unwrap();
        let back = transform_frame(&forward, Direction::Inverse).unwrap();
        let probe = g.probe_indices();
        let (mut run_vs, mut round) = (0.0f64, 0.0f64);
        for k in 0..still.len() {
            let (f, s) = (&forward.snapshots()[k], &still.snapshots()[k]);
            run_vs = run_vs
                .max(f.u.sub(&s.u).unwrap().sup_on(&probe))
                .max(f.omega.sub(&s.omega).unwrap().sup_on(&probe));
            round = round.max(back.snapshots()[k].u.sub(&moving.snapshots()[k].u).unwrap().sup_on(&probe));
        }
        (run_vs, round)
    };
    let g = Grid::new(256, 6.0).unwrap();
    let (w, u) = initial_state(&InitialData::RigidTranslation { velocity: [0.5, 0.0] }, g).unwrap();
    let (run_vs, round) = compare(g, &w, &u);

    let gp = Grid::new(256, 5.0).unwrap();
    let (pw, pu) = smooth_patch(gp, 1.0, 1.0);
    let (patch_vs, patch_round) = compare(gp, &pw, &pu);
    let _ = writeln!(
        std::io::stderr(),
        "criterion  8 reported: smooth patch N=256 L=5 run-then-transform {patch_vs:.2e}, round trip {patch_round:.2e} (target 1e-4)"
    );
    report(
        8,
        "frame equivalence",
        run_vs <= 1e-4 && round <= 1e-4,
        &format!("rigid translation N=256: run-then-transform vs transform-then-run {run_vs:.2e}, round trip {round:.2e} <= 1e-4"),
    );
}

#[test]
fn criterion_09_pressure_routes() {
    let h = 12.0 / 256.0;
    let route = pressure_route_error(256).unwrap();
    let residuals: Vec<f64> = LADDER.iter().map(|&n| blob_momentum_residual(n).unwrap()).collect();
    let orders = observed_orders(&LADDER, &residuals);
    report(
        9,
        "pressure route agreement",
        route <= 10.0 * h * h && min(&orders) >= 1.0,
        &format!(
            "patch route diff N=256 {route:.2e} <= 10h^2 = {:.2e}; momentum residual {}, orders {orders:.2?} >= 1",
            10.0 * h * h,
            sci(&residuals)
        ),
    );
}

#[test]
fn criterion_10_pressure_growth() {
    let g = Grid::new(256, 24.0).unwrap();
    let (_, u0) = initial_state(&InitialData::Shear { amplitude: 1.0, blob_amplitude: 1.0 }, g).unwrap();
    let cs: Vec<f64> = [4, 8, 16]
        .iter()
        .map(|&n| {
            let m = mollify_truncate(&u0, n, &MollifyOptions::default()).unwrap();
            let r = pressure_riesz(&m.u, [0.0, 0.0]).unwrap();
            pressure_growth_diagnostic(&r, s_norm(&m.u)).fitted_c
        })
        .collect();
    let variation = (max(&cs) - min(&cs)) / max(&cs);
    report(
        10,
        "pressure growth constant",
        variation <= 0.25,
        &format!("fitted C for n=4,8,16 {cs:.4?}, variation {variation:.3} <= 0.25"),
    );
}

#[test]
fn criterion_11_decay_exponents() {
    let g = Grid::new(256, 16.0).unwrap();
    let (w, _) = smooth_patch(g, 1.0, 1.0);
    let u = classical_bs(&w, Some(1.0)).unwrap();
    let fit = decay_check(&u, 1.0).unwrap();
    report(
        11,
        "decay exponents",
        fit.velocity_slope <= -0.85 && fit.gradient_slope <= -1.85,
        &format!(
            "|u| slope {:.3} <= -0.85, |grad u| slope {:.3} <= -1.85 on r in [{:.2}, {:.2}]",
            fit.velocity_slope,
            fit.gradient_slope,
            fit.radii[0],
            fit.radii[fit.radii.len() - 1]
        ),
    );
}

#[test]
fn criterion_12_moc_forms() {
    let m = 1.0;
    let mu = Moc::log_lipschitz(m);
    let large: Vec<f64> = [1.0f64, 3.0, 9.0]
        .iter()
        .map(|&r| riesz_moc(&mu, r).unwrap() / (m * (r.ln() + 1.0)))
        .collect();
    let small: Vec<f64> = [1e-2f64, 1e-3, 1e-4]
        .iter()
        .map(|&r| {
            let l = r.ln();
            riesz_moc(&mu, r).unwrap() / (m * r * (-l + l * l))
        })
        .collect();
    let spread = |v: &[f64]| (max(v) - min(v)) / max(v);
    let dini = [1e-8f64, 1e-4, 1e-2, 0.1, 0.3]
        .iter()
        .map(|&x| (dini_integral(&mu, x).unwrap() - (x - x * x.ln())).abs())
        .fold(0.0, f64::max);
    report(
        12,
        "moc functional forms",
        spread(&large) <= 0.01 && spread(&small) <= 0.01 && dini <= 1e-10,
        &format!(
            "large-r ratios {large:.4?} spread {:.3}, small-r ratios {small:.4?} spread {:.3} (each <= 0.01), dini error {dini:.1e} <= 1e-10",
            spread(&large),
            spread(&small)
        ),
    );
}
