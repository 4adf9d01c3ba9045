//! Local L^p norms of `grad u` grow at most linearly in `p`.

use bounded_euler::fields::{Grid, VectorField};
use bounded_euler::moc::{morrey_gradient_check, MORREY_EXPONENTS};

fn main() -> bounded_euler::Result<()> {
    let g = Grid::new(128, 6.0)?;
    let u = VectorField::from_fn(g, |[x, y]| [y.sin() + (-(x * x) - y * y).exp(), 0.2 * x.cos()]);
    print!("{}", morrey_gradient_check(&u, &MORREY_EXPONENTS, 1.0)?.to_text());
    Ok(())
}
