//! Observed convergence orders of the identity checks over a small ladder.

use bounded_euler::verify::verify_all;

fn main() -> bounded_euler::Result<()> {
    let summary = verify_all(&[32, 64, 128])?;
    print!("{}", summary.to_text());
    Ok(())
}
