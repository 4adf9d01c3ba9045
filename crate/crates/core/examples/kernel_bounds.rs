//! Scaling exponents of the truncated kernel `a_R K` and its tail.

use bounded_euler::verify::default_bounds;

fn main() -> bounded_euler::Result<()> {
    let report = default_bounds()?;
    print!("{}", report.to_text());
    println!("passed: {}", report.passed());
    Ok(())
}
