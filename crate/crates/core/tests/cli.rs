use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bounded-euler");

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn cli(root: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("BOUNDED_EULER_OUTPUT", root)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn files(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = vec![];
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

const SMALL_PATCH: &str = r#"
name = "small-patch"

[initial]
kind = "patch"

[grid]
n = 32
half_width = 4.0

[solver]
dt = 0.1
t_final = 0.3
recovery = "classical"

[verify]
suites = ["serfati-residual", "cross-mode"]
cross_mode = "serfati-fixed-point"
tolerance = TOL
"#;

#[test]
fn run_passes_and_writes_reports() {
    let root = tempfile::tempdir().unwrap();
    let out = cli(root.path(), &["run", scenario("rigid-translation.cfg").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let dir = root.path().join("rigid-translation");
    let summary = fs::read_to_string(dir.join("summary.txt")).unwrap();
    assert!(summary.contains("serfati-residual PASS"), "{summary}");
    assert!(dir.join("trajectory").is_dir());

    let out = cli(root.path(), &["pressure", dir.join("trajectory").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = scenario("rigid-translation.cfg");
    for root in [&a, &b] {
        assert_eq!(code(&cli(root.path(), &["run", cfg.to_str().unwrap()])), 0);
    }
    let (fa, fb) = (files(a.path()), files(b.path()));
    assert!(!fa.is_empty());
    assert_eq!(fa, fb);
}

#[test]
fn tolerance_too_tight_fails_verification() {
    let root = tempfile::tempdir().unwrap();
    let loose = root.path().join("loose.cfg");
    let tight = root.path().join("tight.cfg");
    fs::write(&loose, SMALL_PATCH.replace("TOL", "0.05")).unwrap();
    fs::write(&tight, SMALL_PATCH.replace("TOL", "1e-14")).unwrap();
    assert_eq!(code(&cli(root.path(), &["run", loose.to_str().unwrap()])), 0);
    let out = cli(root.path(), &["run", tight.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn config_errors_exit_two() {
    let root = tempfile::tempdir().unwrap();
    let bad = root.path().join("bad.cfg");
    fs::write(&bad, SMALL_PATCH.replace("TOL", "0.05") + "\nsurprise = 1\n").unwrap();
    let cases: [&[&str]; 5] = [
        &["run", bad.to_str().unwrap()],
        &["run", "no-such-file.cfg"],
        &["verify", "--grids", "64"],
        &["verify", "--grids", "128,64"],
        &["pressure", "no-such-dir"],
    ];
    for args in cases {
        assert_eq!(code(&cli(root.path(), args)), 2, "{args:?}");
    }
    assert_eq!(code(&cli(root.path(), &["frobnicate"])), 2);
}

#[test]
fn status_line_matches_exit_code() {
    let root = tempfile::tempdir().unwrap();
    for sub in ["bounds", "moc"] {
        let out = cli(root.path(), &[sub]);
        let text = String::from_utf8_lossy(&out.stdout) + String::from_utf8_lossy(&out.stderr);
        let status = text.lines().find(|l| l.starts_with("PASS") || l.starts_with("FAIL: ")).unwrap();
        let expected = if status == "PASS" { 0 } else { 1 };
        assert_eq!(code(&out), expected, "{sub}: {status}");
        assert!(root.path().join(sub).is_dir());
    }
}
