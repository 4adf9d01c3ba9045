use bounded_euler::fields::Trajectory;
use bounded_euler::scenario::{output_root, pressure_reports, run_scenario, Scenario};
use bounded_euler::verify::{default_bounds, moc_suite, verify_all};
use bounded_euler::Error;
use clap::{Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bounded-euler", version, about = "Bounded-vorticity 2D Euler experiments")]
#[command(after_help = "Outputs are written under $BOUNDED_EULER_OUTPUT (default ./output).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and its verifiers.
    Run { scenario: PathBuf },
    /// Convergence-order table over a refinement ladder.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        grids: Vec<usize>,
    },
    /// Kernel-bound scaling suite.
    Bounds,
    /// Modulus-of-continuity checks.
    Moc {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Pressure reconstruction for a stored trajectory.
    Pressure { trajectory: PathBuf },
}

fn write_report(sub: &str, name: &str, text: &str) -> Result<PathBuf, Error> {
    let dir = output_root().join(sub);
    fs::create_dir_all(&dir)?;
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

fn status(passed: bool, what: &str) -> ExitCode {
    if passed {
        println!("PASS");
        ExitCode::SUCCESS
    } else {
        eprintln!("FAIL: {what}");
        ExitCode::from(1)
    }
}

fn execute(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Run { scenario } => {
            let s = Scenario::load(&scenario)?;
            let out = run_scenario(&s, &output_root())?;
            println!("{}", out.directory.display());
            for r in &out.reports {
                println!("{} {} {}", r.verifier.name(), if r.passed { "PASS" } else { "FAIL" }, r.summary);
            }
            Ok(status(out.passed(), &out.first_failure().unwrap_or_default()))
        }
        Command::Verify { grids } => {
            let summary = verify_all(&grids)?;
            let text = summary.to_text();
            print!("{text}");
            write_report("verify", "convergence.txt", &text)?;
            let first = summary
                .rows
                .iter()
                .find(|r| !r.passed)
                .map(|r| r.name.clone())
                .unwrap_or_else(|| "kernel-bounds".into());
            Ok(status(summary.passed(), &first))
        }
        Command::Bounds => {
            let report = default_bounds()?;
            let text = report.to_text();
            print!("{text}");
            write_report("bounds", "kernel_bounds.txt", &text)?;
            Ok(status(report.passed(), "kernel-bounds"))
        }
        Command::Moc { seed } => {
            let suite = moc_suite(seed)?;
            print!("{}", suite.text);
            write_report("moc", "moc.txt", &suite.text)?;
            let first = suite.checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
            Ok(status(suite.passed(), &first.unwrap_or_default()))
        }
        Command::Pressure { trajectory } => {
            let traj = load_trajectory(&trajectory)?;
            let name = trajectory
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "trajectory".into());
            let dir = output_root().join("pressure").join(name);
            let summary = pressure_reports(&traj, &dir)?;
            print!("{}", summary.text);
            Ok(status(summary.bounded, "pressure growth is super-logarithmic"))
        }
    }
}

fn load_trajectory(dir: &Path) -> Result<Trajectory, Error> {
    if !dir.is_dir() {
        return Err(Error::Config(format!("{} is not a trajectory directory", dir.display())));
    }
    Trajectory::load_dir(dir).map_err(|e| match e {
        Error::Io(e) => Error::Config(format!("cannot read {}: {e}", dir.display())),
        e => e,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
