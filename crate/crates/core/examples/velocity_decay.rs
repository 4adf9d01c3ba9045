//! Decay of `u` and `grad u` away from compactly supported vorticity.

use bounded_euler::fields::Grid;
use bounded_euler::pressure::decay_check;
use bounded_euler::scenario::smooth_patch;

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(256, 16.0)?;
    let (_, u) = smooth_patch(g, 1.0, 1.0);
    print!("{}", decay_check(&u, 1.0)?.to_text());
    Ok(())
}
