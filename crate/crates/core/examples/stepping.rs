//! Drive the solver one step at a time and watch the fixed-point
//! iteration and displacement bound.

use bounded_euler::fields::Grid;
use bounded_euler::solver::{Solver, SolverConfig};
use bounded_euler::verify::blob;
use bounded_euler::biot_savart::classical_bs;

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(64, 6.0)?;
    let w = blob(g);
    let u = classical_bs(&w, None)?;
    let mut solver = Solver::new(SolverConfig::new(g, 0.1, 1.0), w, u)?;
    println!("# t iterations residual displacement bound");
    for _ in 0..10 {
        let r = solver.step()?;
        println!("{:.2} {} {:.2e} {:.4} {:.4}", r.t, r.iterations, r.residual, r.max_displacement, r.displacement_bound);
    }
    Ok(())
}
