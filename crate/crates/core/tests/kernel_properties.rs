use bounded_euler::biot_savart::{cutoff_convolve, KernelEval};
use bounded_euler::fields::{divergence, CutoffProfile, Grid, RadialCutoff, ScalarField};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = [f64; 2]> {
    (-5.0..5.0f64, -5.0..5.0f64)
        .prop_filter("away from the origin", |(x, y)| x.hypot(*y) > 1e-3)
        .prop_map(|(x, y)| [x, y])
}

fn profile() -> impl Strategy<Value = CutoffProfile> {
    prop_oneof![
        Just(CutoffProfile::Smoothstep5 { r0: 0.5, r1: 1.0 }),
        Just(CutoffProfile::ExpBump { r0: 0.5, r1: 1.0 }),
        Just(CutoffProfile::Smoothstep5 { r0: 0.25, r1: 2.0 }),
    ]
}

proptest! {
    #[test]
    fn kernel_is_odd(x in point()) {
        let a = KernelEval::eval(x);
        let b = KernelEval::eval([-x[0], -x[1]]);
        prop_assert!((a[0] + b[0]).abs() <= 1e-15 * a[0].abs().max(1.0));
        prop_assert!((a[1] + b[1]).abs() <= 1e-15 * a[1].abs().max(1.0));
    }

    #[test]
    fn cutoff_gradient_orthogonal_to_kernel(x in point(), p in profile(), r in 0.2..4.0f64) {
        let a = RadialCutoff::new(p, r).unwrap();
        let g = a.gradient(x);
        let k = KernelEval::eval(x);
        let scale = g[0].hypot(g[1]) * k[0].hypot(k[1]);
        prop_assert!((g[0] * k[0] + g[1] * k[1]).abs() <= 1e-14 * scale.max(1e-300));
    }
}

#[test]
fn cutoff_convolution_is_divergence_free_to_second_order() {
    let err = |n: usize| {
        let g = Grid::new(n, 6.0).unwrap();
        let w = ScalarField::from_fn(g, |[x, y]| (-(x * x) - 2.0 * y * y).exp());
        let u = cutoff_convolve(&w, &CutoffProfile::default(), 2.0).unwrap();
        divergence(&u).sup_on(&g.probe_indices())
    };
    let (e1, e2, e3) = (err(32), err(64), err(128));
    let o1 = (e1 / e2).log2();
    let o2 = (e2 / e3).log2();
    assert!(e3 < 1e-12 || o1.min(o2) > 1.5, "{e1:e} {e2:e} {e3:e}");
}
