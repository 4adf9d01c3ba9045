//! Evolve an elliptical vortex and check the velocity identity
//! `u(t) - u0 = (aK) * (omega - omega0) - int (grad grad^perp (1-a)K) : (u x u)`.

use bounded_euler::fields::RadialCutoff;
use bounded_euler::serfati::{cutoff_independence, serfati_residual};
use bounded_euler::solver::{run_with_vorticity, SolverConfig};
use bounded_euler::biot_savart::classical_bs;
use bounded_euler::scenario::alternate_profile;
use bounded_euler::fields::Grid;
use bounded_euler::verify::blob;

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(64, 6.0)?;
    let w = blob(g);
    let u = classical_bs(&w, None)?;
    let cfg = SolverConfig::new(g, 0.05, 0.5);
    let out = run_with_vorticity(&cfg, &w, &u)?.into_result()?;

    let a = RadialCutoff::default();
    let res = serfati_residual(&out.trajectory, &a, &out.trajectory.uinf)?;
    print!("{}", res.to_text());

    let b = RadialCutoff::new(alternate_profile(), 0.7)?;
    let d = cutoff_independence(&out.trajectory, 0.5, &a, &b)?;
    println!("cutoff independence at t=0.5: {d:.3e}");
    Ok(())
}
