//! Pressure by the Riesz route and by the truncated-kernel formula for a
//! rotating patch, with the far-field growth fit.

use bounded_euler::fields::{gradient, Grid, RadialCutoff};
use bounded_euler::pressure::{grad_pressure, pressure_growth_diagnostic, pressure_riesz};
use bounded_euler::scenario::smooth_patch;
use bounded_euler::solver::s_norm;

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(128, 6.0)?;
    let (_, u) = smooth_patch(g, 1.0, 1.0);
    let riesz = pressure_riesz(&u, [0.0, 0.0])?;
    let probe = g.probe_indices();
    for eps in [0.5, 1.0, 2.0] {
        let gp = grad_pressure(&u, [0.0, 0.0], &RadialCutoff::default(), eps)?;
        println!("eps {eps}: route difference {:.3e}", gradient(&riesz.p).sub(&gp)?.sup_on(&probe));
    }
    print!("{}", pressure_growth_diagnostic(&riesz, s_norm(&u)).to_text());
    Ok(())
}
