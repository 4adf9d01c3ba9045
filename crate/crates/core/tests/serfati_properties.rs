use bounded_euler::fields::{Grid, RadialCutoff, ScalarField, Snapshot, Trajectory, UInfinityPath};
use bounded_euler::scenario::{alternate_profile, smooth_patch};
use bounded_euler::serfati::{cutoff_independence, serfati_residual, serfati_rhs, SerfatiOperator};
use bounded_euler::solver::{run_with_vorticity, Recovery, SolverConfig};
use proptest::prelude::*;

fn patch_run(recovery: Recovery) -> bounded_euler::fields::Trajectory {
    let g = Grid::new(64, 4.0).unwrap();
    let (w, u) = smooth_patch(g, 1.0, 1.0);
    let mut cfg = SolverConfig::new(g, 0.1, 0.5);
    cfg.recovery = recovery;
    run_with_vorticity(&cfg, &w, &u).unwrap().into_result().unwrap().trajectory
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn flux_integral_is_additive_in_time(t1 in 0.01..1.0f64, t2 in 0.01..1.0f64, amplitude in 0.1..2.0f64) {
        let g = Grid::new(32, 4.0).unwrap();
        let (_, u) = smooth_patch(g, amplitude, 1.0);
        let op = SerfatiOperator::new(g, RadialCutoff::default()).unwrap();
        let zero = ScalarField::zeros(g);
        let start = op.start(&u);
        let two = op.extend(&op.extend(&start, t1, &u), t2, &u);
        let one = op.extend(&start, t1 + t2, &u);
        prop_assert!((two.t - one.t).abs() <= 1e-15);
        let diff = op.evaluate(&zero, &two).sub(&op.evaluate(&zero, &one)).unwrap().sup_norm();
        let scale = op.evaluate(&zero, &one).sup_norm();
        prop_assert!(diff <= 1e-12 * scale.max(1e-300), "{} vs {}", diff, scale);
    }
}

#[test]
fn empty_integral_evaluates_to_zero() {
    let g = Grid::new(32, 4.0).unwrap();
    let (_, u) = smooth_patch(g, 1.0, 1.0);
    let op = SerfatiOperator::new(g, RadialCutoff::default()).unwrap();
    let v = op.evaluate(&ScalarField::zeros(g), &op.start(&u));
    assert_eq!(v.sup_norm(), 0.0);
}

#[test]
fn serfati_run_satisfies_identity_to_roundoff() {
    let traj = patch_run(Recovery::SerfatiFixedPoint);
    let r = serfati_residual(&traj, &RadialCutoff::default(), &UInfinityPath::zero()).unwrap();
    assert_eq!(r.sup[0], 0.0);
    assert!(r.max_sup() <= 1e-10, "{:e}", r.max_sup());
}

#[test]
fn classical_run_satisfies_identity_to_discretisation_error() {
    let traj = patch_run(Recovery::Classical);
    let r = serfati_residual(&traj, &RadialCutoff::default(), &UInfinityPath::zero()).unwrap();
    let s = traj.initial().u.sup_norm();
    assert!(r.max_sup() <= 2e-2 * s, "{:e}", r.max_sup());
}

#[test]
fn right_side_barely_depends_on_the_cutoff() {
    let traj = patch_run(Recovery::Classical);
    let a = RadialCutoff::default();
    let b = RadialCutoff::new(a.profile, 2.0).unwrap();
    let c = RadialCutoff::new(alternate_profile(), 1.0).unwrap();
    let s = traj.initial().u.sup_norm();
    assert_eq!(cutoff_independence(&traj, 0.5, &a, &a).unwrap(), 0.0);
    for other in [b, c] {
        let d = cutoff_independence(&traj, 0.5, &a, &other).unwrap();
        assert!(d <= 2e-2 * s, "{other:?}: {d:e}");
    }
}

/// The trajectory from snapshot `k` on, with time measured from it.
fn restarted(traj: &Trajectory, k: usize) -> Trajectory {
    let snaps = traj.snapshots();
    let t0 = snaps[k].t;
    let shift = |s: &Snapshot| Snapshot { t: s.t - t0, ..s.clone() };
    let mut out = Trajectory::new(shift(&snaps[k]), UInfinityPath::zero(), traj.meta.clone()).unwrap();
    for s in &snaps[k + 1..] {
        out.push(shift(s)).unwrap();
    }
    out
}

#[test]
fn identity_restarts_at_an_intermediate_time() {
    let traj = patch_run(Recovery::Classical);
    let a = RadialCutoff::default();
    let k = traj.index_of(0.2).unwrap();
    let whole = serfati_rhs(&traj, 0.5, &a).unwrap();
    let first = serfati_rhs(&traj, 0.2, &a).unwrap();
    let rest = serfati_rhs(&restarted(&traj, k), 0.3, &a).unwrap();
    let d = whole.sub(&first.add(&rest).unwrap()).unwrap().sup_norm();
    assert!(d <= 1e-12 * whole.sup_norm(), "{d:e}");
}
