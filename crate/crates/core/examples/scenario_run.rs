//! Build a scenario in code and run it with its verifiers.

use bounded_euler::scenario::{run_scenario, Scenario};

fn main() -> bounded_euler::Result<()> {
    let s = Scenario::from_toml(
        r#"
        name = "example-dipole"
        [initial]
        kind = "dipole"
        [grid]
        n = 64
        half_width = 6.0
        [verify]
        suites = ["serfati-residual", "growth"]
        "#,
    )?;
    let root = std::env::temp_dir().join("bounded-euler-example");
    let out = run_scenario(&s, &root)?;
    for r in &out.reports {
        println!("{} {} {}", r.verifier.name(), r.passed, r.summary);
    }
    println!("artifacts in {}", out.directory.display());
    Ok(())
}
