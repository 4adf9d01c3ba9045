use bounded_euler::moc::{dini_integral, mu_ll, riesz_moc, Moc};
use bounded_euler::quad::integrate;
use proptest::prelude::*;
use std::f64::consts::E;

fn modulus() -> impl Strategy<Value = Moc> {
    prop_oneof![
        (0.1..5.0f64).prop_map(Moc::log_lipschitz),
        (0.1..5.0f64).prop_map(Moc::lipschitz),
        (0.1..5.0f64, 0.1..1.0f64).prop_map(|(c, a)| Moc::holder(c, a)),
        Just(Moc::capped_linear()),
    ]
}

/// `nu` for `mu_LL` worked by hand: the Dini part plus `r int_r^inf mu(s)/s^2 ds`.
fn nu_ll_exact(m: f64, r: f64) -> f64 {
    let l = r.ln();
    if r <= 1.0 / E {
        m * r * (1.5 - l + 0.5 * l * l)
    } else {
        m / E * (l + 4.0)
    }
}

proptest! {
    #[test]
    fn monotone_and_vanishing_on_ladder(mu in modulus()) {
        prop_assert!(mu.validate().is_ok());
        prop_assert_eq!(mu.eval(0.0), 0.0);
        let mut prev = 0.0;
        for k in (-6..=30).rev() {
            let v = mu.eval(2f64.powi(-k));
            prop_assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn dini_integral_is_additive(mu in modulus(), a in 1e-4..1.0f64, span in 1.0..20.0f64) {
        let b = a * span;
        let mut cuts = vec![a];
        cuts.extend([1.0 / E, 1.0].into_iter().filter(|&k| a < k && k < b));
        cuts.push(b);
        let mut piecewise = 0.0;
        for w in cuts.windows(2) {
            let q = integrate(|r| mu.eval(r) / r, w[0], w[1], 1e-14, 1e-13, 2000);
            prop_assert!(q.converged);
            piecewise += q.value;
        }
        let lhs = dini_integral(&mu, b).unwrap();
        let rhs = dini_integral(&mu, a).unwrap() + piecewise;
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn riesz_modulus_dominates_dini(m in 0.1..5.0f64, r in 1e-6..1e3f64, alpha in 0.1..0.9f64) {
        for mu in [Moc::log_lipschitz(m), Moc::holder(m, alpha)] {
            prop_assert!(riesz_moc(&mu, r).unwrap() >= dini_integral(&mu, r).unwrap());
        }
    }

    #[test]
    fn log_lipschitz_riesz_modulus_matches_hand_computation(m in 0.1..5.0f64, r in 1e-6..1e3f64) {
        let v = riesz_moc(&Moc::log_lipschitz(m), r).unwrap();
        let exact = nu_ll_exact(m, r);
        prop_assert!((v - exact).abs() <= 1e-9 * exact, "{} vs {}", v, exact);
    }
}

#[test]
fn mu_ll_is_capped() {
    assert_eq!(mu_ll(2.0, 0.0), 0.0);
    assert!((mu_ll(2.0, 0.1) - 2.0 * 0.1 * 10f64.ln()).abs() < 1e-15);
    assert!((mu_ll(2.0, 5.0) - 2.0 / E).abs() < 1e-15);
}

#[test]
fn dini_closed_form_below_and_above_kink() {
    let mu = Moc::log_lipschitz(1.0);
    for x in [1e-9, 1e-3, 0.2, 1.0 / E] {
        assert!((dini_integral(&mu, x).unwrap() - (x - x * x.ln())).abs() <= 1e-12);
    }
    assert!((dini_integral(&mu, E).unwrap() - 4.0 / E).abs() <= 1e-12);
}
