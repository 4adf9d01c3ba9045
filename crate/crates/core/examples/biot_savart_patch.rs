//! Classical and renormalized Biot-Savart velocities of a smooth vortex
//! patch, compared with the exact profile.

use bounded_euler::biot_savart::{classical_bs, renormalized_bs, RenormalizeOptions};
use bounded_euler::fields::{CutoffProfile, Grid};
use bounded_euler::scenario::smooth_patch;

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(128, 8.0)?;
    let (omega, exact) = smooth_patch(g, 1.0, 1.0);
    let probe = g.probe_indices();

    let u = classical_bs(&omega, None)?;
    println!("classical   error {:.3e}", u.sub(&exact)?.sup_on(&probe));

    let (v, report) = renormalized_bs(&omega, &CutoffProfile::default(), &[2.0, 4.0, 8.0], &RenormalizeOptions::default())?;
    print!("{}", report.to_text());
    println!("renormalized vs classical {:.3e}", v.sub(&u)?.sup_on(&probe));
    Ok(())
}
