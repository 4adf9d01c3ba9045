//! The renormalized law on a non-decaying shear `u = (sin y, 0)`: the
//! velocity is recovered up to a constant from the vorticity alone, and
//! `R ||curl u_R - omega||` stays bounded.

use bounded_euler::biot_savart::cutoff_convolve;
use bounded_euler::fields::{curl, CutoffProfile, Grid, ScalarField};

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(256, 24.0)?;
    let omega = ScalarField::from_fn(g, |[_, y]| -y.cos());
    let probe = g.probe_indices();
    println!("# R  R*|curl u_R - omega|");
    for r in [2.0, 4.0, 8.0, 16.0] {
        let u = cutoff_convolve(&omega, &CutoffProfile::default(), r)?;
        let err = curl(&u).sub(&omega)?.sup_on(&probe);
        println!("{r:>4} {:.4e}", r * err);
    }
    Ok(())
}
