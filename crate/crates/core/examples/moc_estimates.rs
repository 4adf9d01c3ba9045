//! Moduli of continuity: Dini integrals, the Riesz-transform modulus and
//! sampled seminorms of a patch velocity.

use bounded_euler::fields::Grid;
use bounded_euler::moc::{dini_integral, empirical_moc, riesz_moc, Moc, DEFAULT_PAIRS};
use bounded_euler::scenario::smooth_patch;

fn main() -> bounded_euler::Result<()> {
    for mu in [Moc::log_lipschitz(1.0), Moc::holder(1.0, 0.5), Moc::lipschitz(1.0)] {
        print!("{mu:<24}");
        for r in [0.01, 0.1, 1.0, 10.0] {
            print!(" S({r})={:.4}", dini_integral(&mu, r)?);
        }
        println!();
    }
    let ll = Moc::log_lipschitz(1.0);
    for r in [0.01, 0.1, 1.0, 10.0] {
        println!("nu({r}) = {:.5}", riesz_moc(&ll, r)?);
    }
    let g = Grid::new(128, 4.0)?;
    let (_, u) = smooth_patch(g, 1.0, 1.0);
    let est = empirical_moc(&u, &ll, 7, DEFAULT_PAIRS);
    println!("patch velocity: LL seminorm {:.4} over {} pairs", est.seminorm, est.pairs);
    Ok(())
}
