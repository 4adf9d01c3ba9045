use bounded_euler::biot_savart::classical_bs;
use bounded_euler::fields::{Grid, ScalarField, UInfinityPath, VectorField};
use bounded_euler::scenario::smooth_patch;
use bounded_euler::serfati::extract_uinfty;
use bounded_euler::solver::{
    mollify_truncate, run_with_vorticity, MollifyOptions, Recovery, SolverConfig,
};
use bounded_euler::verify::blob;
use proptest::prelude::*;

const MODES: [Recovery; 3] = [
    Recovery::Classical,
    Recovery::Renormalized,
    Recovery::SerfatiFixedPoint,
];

fn config(g: Grid, recovery: Recovery) -> SolverConfig {
    let mut cfg = SolverConfig::new(g, 0.1, 0.5);
    cfg.recovery = recovery;
    cfg.schedule = vec![1.0, 2.0];
    cfg.renormalize_tolerance = 1e-3;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn vorticity_stays_in_initial_range(amplitude in -2.0..2.0f64, radius in 0.6..1.4f64) {
        let g = Grid::new(48, 4.0).unwrap();
        let (w, u) = smooth_patch(g, amplitude, radius);
        let (lo, hi) = w.min_max();
        let mut cfg = config(g, Recovery::Classical);
        cfg.dt = 0.05;
        let out = run_with_vorticity(&cfg, &w, &u).unwrap().into_result().unwrap();
        for s in out.trajectory.snapshots() {
            for &v in s.omega.values() {
                prop_assert!(v >= lo && v <= hi);
            }
        }
    }

    #[test]
    fn uniform_flow_is_carried_by_the_path(
        c in prop::array::uniform2(-1.0..1.0f64),
        rate in prop::array::uniform2(-0.5..0.5f64),
    ) {
        let g = Grid::new(32, 4.0).unwrap();
        let w = ScalarField::zeros(g);
        let u = VectorField::from_fn(g, |_| c);
        let mut cfg = config(g, Recovery::SerfatiFixedPoint);
        cfg.uinf = UInfinityPath::linear(rate, cfg.t_final).unwrap();
        let out = run_with_vorticity(&cfg, &w, &u).unwrap().into_result().unwrap();
        let traj = &out.trajectory;
        for s in traj.snapshots() {
            let shift = cfg.uinf.eval(s.t);
            let expected = VectorField::from_fn(g, |_| [c[0] + shift[0], c[1] + shift[1]]);
            prop_assert!(s.u.sub(&expected).unwrap().sup_norm() <= 1e-12);
        }
        let est = extract_uinfty(traj, &cfg.cutoff).unwrap();
        prop_assert_eq!(est.path.values()[0], [0.0, 0.0]);
        for (t, v) in est.path.times().iter().zip(est.path.values()) {
            let exact = cfg.uinf.eval(*t);
            prop_assert!((v[0] - exact[0]).abs() <= 1e-12 && (v[1] - exact[1]).abs() <= 1e-12);
        }
        prop_assert!(est.warning.is_none());
    }
}

#[test]
fn displacement_within_bound_in_every_mode() {
    let g = Grid::new(64, 4.0).unwrap();
    let (w, u) = smooth_patch(g, 1.0, 1.0);
    for mode in MODES {
        let out = run_with_vorticity(&config(g, mode), &w, &u).unwrap().into_result().unwrap();
        assert_eq!(out.steps.len(), 5);
        for s in &out.steps {
            assert!(s.max_displacement <= s.displacement_bound, "{mode}: {s:?}");
        }
    }
}

#[test]
fn patch_is_nearly_steady_in_every_mode() {
    let g = Grid::new(64, 4.0).unwrap();
    let (w, u) = smooth_patch(g, 1.0, 1.0);
    for mode in MODES {
        let out = run_with_vorticity(&config(g, mode), &w, &u).unwrap().into_result().unwrap();
        let drift = out.trajectory.last().u.sub(&u).unwrap().sup_on(&g.probe_indices());
        assert!(drift < 2e-2 * u.sup_norm(), "{mode}: drift {drift:e}");
    }
}

#[test]
fn classical_and_serfati_runs_agree_under_refinement() {
    let gap = |n: usize| {
        let g = Grid::new(n, 6.0).unwrap();
        let w = blob(g);
        let u = classical_bs(&w, None).unwrap();
        let mut a = SolverConfig::new(g, 0.05, 0.5);
        a.recovery = Recovery::Classical;
        let mut b = a.clone();
        b.recovery = Recovery::SerfatiFixedPoint;
        let ua = run_with_vorticity(&a, &w, &u).unwrap().into_result().unwrap();
        let ub = run_with_vorticity(&b, &w, &u).unwrap().into_result().unwrap();
        ua.trajectory.last().u.sub(&ub.trajectory.last().u).unwrap().sup_on(&g.probe_indices())
    };
    let (coarse, fine) = (gap(64), gap(128));
    assert!(fine < 0.5 * coarse, "{coarse:e} -> {fine:e}");
}

#[test]
fn mollified_data_approach_the_datum() {
    let g = Grid::new(64, 4.0).unwrap();
    let (_, u) = smooth_patch(g, 1.0, 1.0);
    let probe = g.probe_indices();
    let mut prev_err = f64::INFINITY;
    let mut prev_ratio = 0.0;
    for n in [1, 2, 4] {
        let m = mollify_truncate(&u, n, &MollifyOptions::default()).unwrap();
        let err = m.u.sub(&u).unwrap().sup_on(&probe);
        assert!(err < prev_err && m.norm_ratio > prev_ratio, "n = {n}: {err:e}, {}", m.norm_ratio);
        assert!(m.norm_ratio <= 1.0 + 1e-12);
        prev_err = err;
        prev_ratio = m.norm_ratio;
    }
}

#[test]
fn bad_configs_rejected() {
    let g = Grid::new(32, 4.0).unwrap();
    let (w, u) = smooth_patch(g, 1.0, 1.0);
    let mut cfg = config(g, Recovery::Classical);
    cfg.dt = 0.3;
    assert!(run_with_vorticity(&cfg, &w, &u).unwrap_err().is_config());
    let mut cfg = config(g, Recovery::Classical);
    cfg.dt = 1.0;
    assert!(run_with_vorticity(&cfg, &w, &u).is_err());
    let mut cfg = config(g, Recovery::Classical);
    cfg.cfl = 1.5;
    assert!(run_with_vorticity(&cfg, &w, &u).unwrap_err().is_config());
}
