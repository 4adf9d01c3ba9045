use bounded_euler::fields::{Grid, RadialCutoff, VectorField};
use bounded_euler::pressure::{boundedness_ratio, grad_pressure, pressure_riesz};
use bounded_euler::scenario::{alternate_profile, smooth_patch};
use bounded_euler::solver::s_norm;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn still_fluid_feels_only_the_frame_acceleration(
        accel in prop::array::uniform2(-2.0..2.0f64),
        eps in 1.0..3.0f64,
    ) {
        let g = Grid::new(32, 6.0).unwrap();
        let u = VectorField::zeros(g);
        let gp = grad_pressure(&u, accel, &RadialCutoff::default(), eps).unwrap();
        for (x, y) in gp.xs().iter().zip(gp.ys()) {
            prop_assert!((x + accel[0]).abs() <= 1e-14 && (y + accel[1]).abs() <= 1e-14);
        }
    }

    #[test]
    fn gradient_is_linear_in_the_acceleration(
        a in prop::array::uniform2(-2.0..2.0f64),
        b in prop::array::uniform2(-2.0..2.0f64),
    ) {
        let g = Grid::new(32, 6.0).unwrap();
        let (_, u) = smooth_patch(g, 1.0, 1.0);
        let cut = RadialCutoff::default();
        let pa = grad_pressure(&u, a, &cut, 1.0).unwrap();
        let pb = grad_pressure(&u, b, &cut, 1.0).unwrap();
        let shift = [b[0] - a[0], b[1] - a[1]];
        prop_assert!(pa.shift([-shift[0], -shift[1]]).sub(&pb).unwrap().sup_norm() <= 1e-12);
    }
}

fn patch(n: usize) -> VectorField {
    smooth_patch(Grid::new(n, 4.0).unwrap(), 1.0, 1.0).1
}

#[test]
fn cutoff_choice_washes_out_under_refinement() {
    let gap = |n: usize| {
        let u = patch(n);
        let probe = u.grid().probe_indices();
        let base = grad_pressure(&u, [0.0; 2], &RadialCutoff::default(), 1.0).unwrap();
        let mut worst: f64 = 0.0;
        for (profile, eps) in [(RadialCutoff::default().profile, 0.5), (alternate_profile(), 1.0), (alternate_profile(), 2.0)] {
            let other = grad_pressure(&u, [0.0; 2], &RadialCutoff::new(profile, eps).unwrap(), eps).unwrap();
            worst = worst.max(other.sub(&base).unwrap().sup_on(&probe));
        }
        worst
    };
    let (coarse, fine) = (gap(64), gap(128));
    assert!(fine < 0.5 * coarse, "{coarse:e} -> {fine:e}");
}

#[test]
fn boundedness_ratio_is_stable_under_refinement() {
    let ratio = |n: usize| {
        let u = patch(n);
        let gp = grad_pressure(&u, [0.0; 2], &RadialCutoff::default(), 1.0).unwrap();
        boundedness_ratio(&gp, [0.0; 2], s_norm(&u))
    };
    let (coarse, fine) = (ratio(64), ratio(128));
    assert!((coarse - fine).abs() <= 0.1 * fine, "{coarse} vs {fine}");
}

#[test]
fn cutoff_and_riesz_routes_converge_together() {
    let gap = |n: usize| {
        let u = patch(n);
        let probe = u.grid().probe_indices();
        let cut = grad_pressure(&u, [0.0; 2], &RadialCutoff::default(), 1.0).unwrap();
        let riesz = pressure_riesz(&u, [0.0; 2]).unwrap();
        cut.sub(&riesz.grad_p).unwrap().sup_on(&probe)
    };
    let (coarse, fine) = (gap(64), gap(128));
    assert!(fine < 0.5 * coarse, "{coarse:e} -> {fine:e}");
}

#[test]
fn small_cutoff_scale_rejected() {
    let u = patch(32);
    assert!(grad_pressure(&u, [0.0; 2], &RadialCutoff::default(), 0.1).unwrap_err().is_config());
}

#[test]
fn radial_patch_balances_centripetal_force() {
    let err = |n: usize| {
        let u = patch(n);
        let g = *u.grid();
        let gp = grad_pressure(&u, [0.0; 2], &RadialCutoff::default(), 1.0).unwrap();
        // |u|^2 / r along r-hat, from the computed velocity itself
        let mut worst: f64 = 0.0;
        for k in g.probe_indices() {
            let [x, y] = g.point_of(k);
            let r2 = x * x + y * y;
            if r2 < 0.01 {
                continue;
            }
            let v = u.get(k);
            let c = (v[0] * v[0] + v[1] * v[1]) / r2;
            let e = gp.get(k);
            worst = worst.max((e[0] - c * x).abs()).max((e[1] - c * y).abs());
        }
        worst / gp.sup_on(&g.probe_indices())
    };
    let (coarse, fine) = (err(64), err(128));
    let order = (coarse / fine).log2();
    assert!(order >= 1.5, "{coarse:e} -> {fine:e}, order {order:.2}");
}

#[test]
fn riesz_pressure_vanishes_at_origin() {
    let u = patch(64);
    let g = *u.grid();
    let res = pressure_riesz(&u, [0.3, -0.1]).unwrap();
    let origin = g.origin_index();
    assert_eq!(res.p.values()[origin], 0.0);
}
