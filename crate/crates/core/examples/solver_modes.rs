//! Advance a vortex patch with each velocity-recovery mode and compare.

use bounded_euler::fields::Grid;
use bounded_euler::scenario::smooth_patch;
use bounded_euler::solver::{run_with_vorticity, Recovery, SolverConfig};

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(64, 6.0)?;
    let (w, u) = smooth_patch(g, 1.0, 1.0);
    let probe = g.probe_indices();
    let mut finals = vec![];
    for mode in [Recovery::Classical, Recovery::Renormalized, Recovery::SerfatiFixedPoint] {
        let mut cfg = SolverConfig::new(g, 0.05, 0.5);
        cfg.recovery = mode;
        cfg.schedule = vec![2.0, 4.0];
        cfg.renormalize_tolerance = 1e-4;
        let out = run_with_vorticity(&cfg, &w, &u)?.into_result()?;
        let last = out.trajectory.last().u.clone();
        println!("{:<22} steps {:>3} drift {:.3e}", mode.to_string(), out.steps.len(), last.sub(&u)?.sup_on(&probe));
        finals.push(last);
    }
    println!("classical vs serfati {:.3e}", finals[0].sub(&finals[2])?.sup_on(&probe));
    Ok(())
}
