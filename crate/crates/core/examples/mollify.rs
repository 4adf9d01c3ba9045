//! Compactly supported smooth approximations of a bounded velocity.

use bounded_euler::fields::{Grid, VectorField};
use bounded_euler::solver::{mollify_truncate, MollifyOptions};

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(256, 16.0)?;
    let u = VectorField::from_fn(g, |[_, y]| [y.sin() + 0.3, 0.0]);
    let probe = g.probe_indices();
    println!("# n width probe_error norm_ratio");
    for n in [1, 2, 4, 8] {
        let m = mollify_truncate(&u, n, &MollifyOptions::default())?;
        println!("{n} {:.4} {:.3e} {:.4}", m.width, m.u.sub(&u)?.sup_on(&probe), m.norm_ratio);
    }
    Ok(())
}
