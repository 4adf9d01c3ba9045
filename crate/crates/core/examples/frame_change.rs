//! Remove a uniform accelerating stream by changing frame, then restore it.

use bounded_euler::fields::{Grid, UInfinityPath};
use bounded_euler::scenario::smooth_patch;
use bounded_euler::solver::{run_with_vorticity, transform_frame, Direction, Recovery, SolverConfig};

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(64, 6.0)?;
    let (w, u) = smooth_patch(g, 1.0, 1.0);
    let mut cfg = SolverConfig::new(g, 0.05, 0.5);
    cfg.recovery = Recovery::Classical;
    cfg.uinf = UInfinityPath::linear([0.4, 0.0], 0.5)?;
    let moving = run_with_vorticity(&cfg, &w, &u.shift(cfg.uinf.eval(0.0)))?.into_result()?;

    let still = transform_frame(&moving.trajectory, Direction::Forward)?;
    let back = transform_frame(&still, Direction::Inverse)?;
    let probe = g.probe_indices();
    let d = back.last().u.sub(&moving.trajectory.last().u)?.sup_on(&probe);
    println!("patch centre vorticity in co-moving frame: {:.4}", still.last().omega.values()[g.origin_index()]);
    println!("round trip error {d:.3e}");
    Ok(())
}
