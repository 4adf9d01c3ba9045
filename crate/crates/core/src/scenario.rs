//! Named experiment scenarios: configuration, initial data, and the
//! verifiers run after a solve.

use crate::biot_savart::{classical_bs, renormalized_bs, verify_kernel_bounds, RenormalizeOptions};
use crate::error::{Error, Result};
use crate::fields::{
    curl, CutoffProfile, FieldData, Grid, Interpolation, RadialCutoff, ScalarField, Trajectory,
    UInfinityPath, VectorField,
};
use crate::moc::{dini_integral, empirical_moc, morrey_gradient_check, Moc, DEFAULT_PAIRS, MORREY_EXPONENTS};
use crate::pressure::{grad_pressure, pressure_growth_diagnostic, pressure_riesz};
use crate::serfati::{extract_uinfty, serfati_residual};
use crate::solver::{run_with_vorticity, s_norm, Recovery, RunOutput, SolverConfig};
use serde::{Deserialize, Serialize};
use std::f64::consts::E;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Environment variable naming the directory scenario outputs go under.
pub const OUTPUT_ROOT_VAR: &str = "BOUNDED_EULER_OUTPUT";

/// Initial-data generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialData {
    /// `omega = A (1 - r^2 / rho^2)^3` on the disk of radius `rho`, or the
    /// indicator of the disk if `sharp`.
    Patch {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        sharp: bool,
    },
    /// `omega = A exp(-(x/a)^2 - (y/b)^2)` about `center`.
    GaussianBlob {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "blob_widths")]
        widths: [f64; 2],
        #[serde(default)]
        center: [f64; 2],
    },
    /// `u = (A sin(y), 0)`, optionally plus a Gaussian blob of the given
    /// amplitude at the origin.
    Shear {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        blob_amplitude: f64,
    },
    /// Gaussian blobs of opposite sign at `(+-separation/2, 0)`.
    Dipole {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        separation: f64,
        #[serde(default = "half")]
        width: f64,
    },
    /// Constant velocity, zero vorticity.
    RigidTranslation {
        #[serde(default)]
        velocity: [f64; 2],
    },
    /// Velocity read from a field file (text or binary); vorticity is its
    /// discrete curl.
    CustomFile { path: PathBuf },
}

fn one() -> f64 {
    1.0
}
fn half() -> f64 {
    0.5
}
fn blob_widths() -> [f64; 2] {
    [0.8, 0.5]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub half_width: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 64, half_width: 6.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub dt: f64,
    pub t_final: f64,
    pub recovery: Recovery,
    pub cutoff: RadialCutoff,
    pub schedule: Vec<f64>,
    /// `U(t) = uinf_rate * t`.
    pub uinf_rate: [f64; 2],
    pub fixed_point_tolerance: f64,
    pub max_iterations: usize,
    pub renormalize_tolerance: f64,
    pub interpolation: Interpolation,
    pub cfl: f64,
    pub clamp: bool,
    pub snapshot_every: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            dt: 0.05,
            t_final: 0.5,
            recovery: Recovery::SerfatiFixedPoint,
            cutoff: RadialCutoff::default(),
            schedule: vec![1.0, 2.0, 4.0],
            uinf_rate: [0.0, 0.0],
            fixed_point_tolerance: 1e-8,
            max_iterations: 50,
            renormalize_tolerance: 1e-8,
            interpolation: Interpolation::Bicubic,
            cfl: 1.0,
            clamp: true,
            snapshot_every: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verifier {
    SerfatiResidual,
    Uinfinity,
    Renormalized,
    Pressure,
    KernelBounds,
    Moc,
    CrossMode,
    Growth,
}

impl Verifier {
    pub fn name(self) -> &'static str {
        match self {
            Verifier::SerfatiResidual => "serfati-residual",
            Verifier::Uinfinity => "uinfinity",
            Verifier::Renormalized => "renormalized",
            Verifier::Pressure => "pressure",
            Verifier::KernelBounds => "kernel-bounds",
            Verifier::Moc => "moc",
            Verifier::CrossMode => "cross-mode",
            Verifier::Growth => "growth",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub suites: Vec<Verifier>,
    /// Absolute tolerance, scaled by `1 + ||u0||_inf` (by its square for
    /// pressure).
    pub tolerance: f64,
    /// Mode for the cross-mode rerun.
    pub cross_mode: Recovery,
    pub seed: u64,
    pub moc_pairs: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            suites: vec![Verifier::SerfatiResidual, Verifier::Renormalized, Verifier::Pressure, Verifier::Growth],
            tolerance: 1e-2,
            cross_mode: Recovery::Classical,
            seed: 1,
            moc_pairs: DEFAULT_PAIRS,
        }
    }
}

/// A named run: initial data, grid, solver settings and verifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub initial: InitialData,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub verify: VerifySection,
    /// Output directory, relative to the output root; defaults to `name`.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut s = Self::from_toml(&text)?;
        if let InitialData::CustomFile { path: p } = &mut s.initial {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
            if !p.exists() {
                return Err(Error::Config(format!("initial-data file {} not found", p.display())));
            }
        }
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::Config(format!("invalid scenario name {:?}", self.name)));
        }
        Grid::new(self.grid.n, self.grid.half_width)?;
        let mut seen = self.verify.suites.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.verify.suites.len() {
            return Err(Error::Config("verifier listed twice".into()));
        }
        if !(self.verify.tolerance > 0.0) {
            return Err(Error::Config("verify tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.n, self.grid.half_width)
    }

    pub fn uinf(&self) -> Result<UInfinityPath> {
        if self.solver.uinf_rate == [0.0, 0.0] {
            Ok(UInfinityPath::zero())
        } else {
            UInfinityPath::linear(self.solver.uinf_rate, self.solver.t_final)
        }
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let s = &self.solver;
        let mut c = SolverConfig::new(self.grid()?, s.dt, s.t_final);
        c.cutoff = s.cutoff;
        c.schedule = s.schedule.clone();
        c.recovery = s.recovery;
        c.uinf = self.uinf()?;
        c.fixed_point_tolerance = s.fixed_point_tolerance;
        c.max_iterations = s.max_iterations;
        c.renormalize_tolerance = s.renormalize_tolerance;
        c.interpolation = s.interpolation;
        c.cfl = s.cfl;
        c.clamp = s.clamp;
        c.snapshot_every = s.snapshot_every;
        Ok(c)
    }
}

fn gaussian(g: Grid, amplitude: f64, widths: [f64; 2], center: [f64; 2]) -> ScalarField {
    ScalarField::from_fn(g, |[x, y]| {
        amplitude * (-((x - center[0]) / widths[0]).powi(2) - ((y - center[1]) / widths[1]).powi(2)).exp()
    })
}

/// Smooth patch `A (1 - r^2 / rho^2)^3` and its exact velocity.
pub fn smooth_patch(g: Grid, amplitude: f64, radius: f64) -> (ScalarField, VectorField) {
    let w = ScalarField::from_fn(g, |[x, y]| {
        let s = (x * x + y * y) / (radius * radius);
        if s < 1.0 {
            amplitude * (1.0 - s).powi(3)
        } else {
            0.0
        }
    });
    let u = VectorField::from_fn(g, |[x, y]| {
        let r = x.hypot(y);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let s = (r / radius).powi(2);
        // circulation inside r divided by 2 pi r
        let ut = amplitude * radius * radius / (8.0 * r) * if s < 1.0 { 1.0 - (1.0 - s).powi(4) } else { 1.0 };
        [-ut * y / r, ut * x / r]
    });
    (w, u)
}

/// Initial vorticity and velocity of a scenario.
pub fn initial_state(data: &InitialData, g: Grid) -> Result<(ScalarField, VectorField)> {
    Ok(match data {
        InitialData::Patch { amplitude, radius, sharp } => {
            if !(*radius > 0.0) {
                return Err(Error::Config("patch radius must be positive".into()));
            }
            if *sharp {
                let w = ScalarField::from_fn(g, |[x, y]| if x.hypot(y) < *radius { *amplitude } else { 0.0 });
                let u = classical_bs(&w, None)?;
                (w, u)
            } else {
                smooth_patch(g, *amplitude, *radius)
            }
        }
        InitialData::GaussianBlob { amplitude, widths, center } => {
            let w = gaussian(g, *amplitude, *widths, *center);
            let u = classical_bs(&w, None)?;
            (w, u)
        }
        InitialData::Shear { amplitude, blob_amplitude } => {
            let a = *amplitude;
            let mut w = ScalarField::from_fn(g, |[_, y]| -a * y.cos());
            let mut u = VectorField::from_fn(g, |[_, y]| [a * y.sin(), 0.0]);
            if *blob_amplitude != 0.0 {
                let bw = gaussian(g, *blob_amplitude, blob_widths(), [0.0, 0.0]);
                u = u.add(&classical_bs(&bw, None)?)?;
                w = w.add(&bw)?;
            }
            (w, u)
        }
        InitialData::Dipole { amplitude, separation, width } => {
            let d = separation / 2.0;
            let w = gaussian(g, *amplitude, [*width, *width], [d, 0.0])
                .sub(&gaussian(g, *amplitude, [*width, *width], [-d, 0.0]))?;
            let u = classical_bs(&w, None)?;
            (w, u)
        }
        InitialData::RigidTranslation { velocity } => (ScalarField::zeros(g), VectorField::constant(g, *velocity)),
        InitialData::CustomFile { path } => {
            let u = FieldData::load(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
                .into_vector()?;
            if *u.grid() != g {
                return Err(Error::Config(format!(
                    "{}: grid N={} L={} differs from the scenario grid",
                    path.display(),
                    u.grid().n(),
                    u.grid().half_width()
                )));
            }
            (curl(&u), u)
        }
    })
}

/// Outcome of one verifier.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifierReport {
    pub verifier: Verifier,
    pub passed: bool,
    pub summary: String,
    /// Full structured-text report.
    pub text: String,
}

#[derive(Debug)]
pub struct ScenarioOutcome {
    pub directory: PathBuf,
    pub run: RunOutput,
    pub reports: Vec<VerifierReport>,
}

impl ScenarioOutcome {
    pub fn passed(&self) -> bool {
        self.run.failure.is_none() && self.reports.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        if let Some(e) = &self.run.failure {
            return Some(format!("solver: {e}"));
        }
        self.reports
            .iter()
            .find(|r| !r.passed)
            .map(|r| format!("{}: {}", r.verifier.name(), r.summary))
    }
}

fn header(s: &Scenario, g: &Grid) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "# scenario {}", s.name);
    let _ = writeln!(t, "# grid N={} L={} h={}", g.n(), g.half_width(), g.spacing());
    let _ = writeln!(t, "# cutoff {}", s.solver.cutoff);
    let _ = writeln!(t, "# recovery {} dt={} T={}", s.solver.recovery, s.solver.dt, s.solver.t_final);
    let _ = writeln!(t, "# tolerance {:e}", s.verify.tolerance);
    t
}

/// Output root from [`OUTPUT_ROOT_VAR`], else `./output`.
pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("output"))
}

/// Shell maxima of a scalar over equal-width radial shells out to `L`.
pub fn radial_profile(f: &ScalarField, shells: usize) -> Vec<(f64, f64)> {
    let g = f.grid();
    let w = g.half_width() / shells as f64;
    let mut max = vec![0.0f64; shells];
    for k in 0..g.len() {
        let [x, y] = g.point_of(k);
        let s = (x.hypot(y) / w) as usize;
        if s < shells {
            max[s] = max[s].max(f.values()[k].abs());
        }
    }
    max.into_iter().enumerate().map(|(s, m)| ((s as f64 + 0.5) * w, m)).collect()
}

fn run_verifier(
    v: Verifier,
    s: &Scenario,
    out: &RunOutput,
    omega0: &ScalarField,
    u0: &VectorField,
    dir: &Path,
) -> Result<VerifierReport> {
    let traj = &out.trajectory;
    let g = *traj.grid();
    let scale = 1.0 + u0.sup_norm();
    let tol = s.verify.tolerance * scale;
    let mut text = header(s, &g);
    let (passed, summary) = match v {
        Verifier::SerfatiResidual => {
            let r = serfati_residual(traj, &s.solver.cutoff, &traj.uinf)?;
            text.push_str(&r.to_text());
            let mut csv = String::from("time,sup,deviation\n");
            for k in 0..r.times.len() {
                let _ = writeln!(csv, "{},{:e},{:e}", r.times[k], r.sup[k], r.deviation[k]);
            }
            fs::write(dir.join("serfati_residual.csv"), csv)?;
            let m = r.max_sup();
            (m <= tol, format!("max probe residual {m:e} (tolerance {tol:e})"))
        }
        Verifier::Uinfinity => {
            let e = extract_uinfty(traj, &s.solver.cutoff)?;
            let mut worst = 0.0f64;
            let _ = writeln!(text, "# time extracted_x extracted_y configured_x configured_y deviation");
            for (k, t) in traj.times().into_iter().enumerate() {
                let a = e.path.values()[k];
                let b = traj.uinf.eval(t);
                worst = worst.max((a[0] - b[0]).hypot(a[1] - b[1]));
                let _ = writeln!(text, "{t} {:e} {:e} {:e} {:e} {:e}", a[0], a[1], b[0], b[1], e.deviations[k]);
            }
            if let Some(w) = &e.warning {
                let _ = writeln!(text, "# warning {w}");
            }
            (worst <= tol, format!("max path error {worst:e} (tolerance {tol:e})"))
        }
        Verifier::Renormalized => {
            let last = traj.last();
            let opts = RenormalizeOptions {
                tolerance: s.solver.renormalize_tolerance,
                scale_floor: scale,
                ..Default::default()
            };
            let d = last.omega.sub(omega0)?;
            let (v, rep) = renormalized_bs(&d, &s.solver.cutoff.profile, &s.solver.schedule, &opts)?;
            text.push_str(&rep.to_text());
            let uinf = traj.uinf.eval(last.t);
            let err = u0.add(&v)?.shift(uinf).sub(&last.u)?.sup_on(&g.probe_indices());
            let _ = writeln!(text, "# recovery_error {err:e}");
            let settled = rep.converged || rep.last_difference() <= tol;
            (
                settled && err <= tol,
                format!(
                    "converged={} last difference {:e} recovery error {err:e} (tolerance {tol:e})",
                    rep.converged,
                    rep.last_difference()
                ),
            )
        }
        Verifier::Pressure => {
            let last = traj.last();
            let up = traj.uinf.derivative(last.t);
            let res = pressure_riesz(&last.u, up)?;
            let eps = s.solver.cutoff.scale;
            let gp = grad_pressure(&last.u, up, &s.solver.cutoff, eps)?;
            let probe = g.probe_indices();
            let diff = crate::fields::gradient(&res.p).sub(&gp)?.sup_on(&probe);
            let sn = s_norm(&last.u);
            let fit = pressure_growth_diagnostic(&res, sn.max(f64::MIN_POSITIVE));
            let mean = gp.mean_on(&probe);
            let _ = writeln!(text, "# window {:?}", res.extension);
            let _ = writeln!(text, "# route_difference {diff:e}");
            let _ = writeln!(text, "# spectral_consistency {:e}", res.consistency);
            let _ = writeln!(text, "# mean_grad_p {:e} {:e} (expected from -U' {:e} {:e})", mean[0], mean[1], -up[0], -up[1]);
            text.push_str(&fit.to_text());
            let mut csv = String::from("radius,shell_max\n");
            for (r, m) in fit.radii.iter().zip(&fit.shell_max) {
                let _ = writeln!(csv, "{r},{m:e}");
            }
            fs::write(dir.join("pressure_shells.csv"), csv)?;
            let ptol = s.verify.tolerance * scale * scale;
            (
                diff <= ptol && !fit.super_logarithmic,
                format!("route difference {diff:e} (tolerance {ptol:e}), fitted C {:e}", fit.fitted_c),
            )
        }
        Verifier::KernelBounds => {
            let r = verify_kernel_bounds(
                &s.solver.cutoff.profile,
                &[1.0, 2.0, 4.0, 8.0],
                &[(1, 0), (1, 1), (2, 0)],
                &[1.25, 1.5, 1.75],
            )?;
            text.push_str(&r.to_text());
            (r.passed(), format!("{} bound rows", r.rows.len()))
        }
        Verifier::Moc => {
            let last = traj.last();
            let mu = Moc::log_lipschitz(1.0);
            let est = empirical_moc(&last.u, &mu, s.verify.seed, s.verify.moc_pairs);
            let morrey = morrey_gradient_check(&last.u, &MORREY_EXPONENTS, g.probe_half_width())?;
            let x = 1.0 / E;
            let dini = dini_integral(&mu, x)?;
            let closed = x - x * x.ln();
            let _ = writeln!(text, "# modulus {mu} seed {} pairs {}", s.verify.seed, est.pairs);
            let _ = writeln!(text, "# seminorm {:e} norm {:e} worst_distance {}", est.seminorm, est.norm, est.worst_distance);
            let _ = writeln!(text, "# dini_error {:e}", (dini - closed).abs());
            text.push_str(&morrey.to_text());
            (
                est.seminorm.is_finite() && morrey.bounded,
                format!("LL seminorm {:e}, max Morrey ratio {:e}", est.seminorm, morrey.max_ratio()),
            )
        }
        Verifier::CrossMode => {
            let mut cfg = s.solver_config()?;
            cfg.recovery = s.verify.cross_mode;
            let other = run_with_vorticity(&cfg, omega0, u0)?.into_result()?;
            let probe = g.probe_indices();
            let du = other.trajectory.last().u.sub(&traj.last().u)?.sup_on(&probe);
            let dw = other.trajectory.last().omega.sub(&traj.last().omega)?.sup_on(&probe);
            let _ = writeln!(text, "# modes {} vs {}", s.solver.recovery, s.verify.cross_mode);
            let _ = writeln!(text, "# velocity_difference {du:e}");
            let _ = writeln!(text, "# vorticity_difference {dw:e}");
            (du <= tol, format!("final velocity difference {du:e} (tolerance {tol:e})"))
        }
        Verifier::Growth => {
            let gm = &out.growth;
            let _ = writeln!(text, "# fitted_c {:e}", gm.fitted_c);
            let _ = writeln!(text, "# time s_norm uinf_norm");
            for k in 0..gm.times.len() {
                let _ = writeln!(text, "{} {:e} {:e}", gm.times[k], gm.s_norms[k], gm.uinf_norms[k]);
            }
            let w_range = traj.snapshots().iter().map(|s| s.omega.sup_norm()).fold(0.0, f64::max);
            let w0 = omega0.sup_norm();
            let _ = writeln!(text, "# max_vorticity {w_range:e} initial {w0:e}");
            (
                gm.fitted_c.is_finite() && w_range <= w0 * (1.0 + 1e-12) + 1e-14,
                format!("fitted C {:e}, sup vorticity {w_range:e} vs {w0:e}", gm.fitted_c),
            )
        }
    };
    fs::write(dir.join(format!("{}.txt", v.name())), &text)?;
    Ok(VerifierReport {
        verifier: v,
        passed,
        summary,
        text,
    })
}

/// Solve, then run every selected verifier, writing the trajectory, a
/// config snapshot, one report per verifier and CSV plot data under
/// `root/<output or name>`.
///
/// A verifier that cannot run (for example a coverage error) is recorded
/// as failed with the error as its summary.
pub fn run_scenario(s: &Scenario, root: &Path) -> Result<ScenarioOutcome> {
    s.validate()?;
    let g = s.grid()?;
    let cfg = s.solver_config()?;
    let (omega0, u0) = initial_state(&s.initial, g)?;
    cfg.validate(&u0)?;
    let dir = root.join(s.output.clone().unwrap_or_else(|| PathBuf::from(&s.name)));
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("scenario.toml"), s.to_toml())?;
    let out = run_with_vorticity(&cfg, &omega0, &u0)?;
    out.trajectory.save_dir(&dir.join("trajectory"))?;

    let mut csv = String::from("radius,omega_max,u_max\n");
    let last = out.trajectory.last();
    let w = radial_profile(&last.omega, 32);
    let u = radial_profile(&last.u.magnitude(), 32);
    for (a, b) in w.iter().zip(&u) {
        let _ = writeln!(csv, "{},{:e},{:e}", a.0, a.1, b.1);
    }
    fs::write(dir.join("radial_profile.csv"), csv)?;

    let mut reports = vec![];
    if out.failure.is_none() {
        for &v in &s.verify.suites {
            let r = run_verifier(v, s, &out, &omega0, &u0, &dir).unwrap_or_else(|e| VerifierReport {
                verifier: v,
                passed: false,
                summary: format!("error: {e}"),
                text: format!("{}# error {e}\n", header(s, &g)),
            });
            if !r.passed {
                fs::write(dir.join(format!("{}.txt", v.name())), &r.text)?;
            }
            reports.push(r);
        }
    }
    let mut summary = header(s, &g);
    if let Some(e) = &out.failure {
        let _ = writeln!(summary, "solver FAIL {e}");
    }
    for r in &reports {
        let _ = writeln!(summary, "{} {} {}", r.verifier.name(), if r.passed { "PASS" } else { "FAIL" }, r.summary);
    }
    fs::write(dir.join("summary.txt"), summary)?;
    Ok(ScenarioOutcome {
        directory: dir,
        run: out,
        reports,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureSummary {
    pub text: String,
    /// No snapshot showed super-logarithmic pressure growth.
    pub bounded: bool,
}

/// Pressure reports for a stored trajectory, one file per snapshot plus a
/// summary.
pub fn pressure_reports(traj: &Trajectory, dir: &Path) -> Result<PressureSummary> {
    fs::create_dir_all(dir)?;
    let g = *traj.grid();
    let mut summary = String::new();
    let mut bounded = true;
    let _ = writeln!(summary, "# grid N={} L={}", g.n(), g.half_width());
    let _ = writeln!(summary, "# cutoff {}", traj.meta.cutoff);
    let _ = writeln!(summary, "# time fitted_c slope super_logarithmic consistency");
    for (k, (t, res)) in crate::pressure::pressure_series(traj)?.into_iter().enumerate() {
        let fit = pressure_growth_diagnostic(&res, s_norm(&traj.snapshots()[k].u).max(f64::MIN_POSITIVE));
        bounded &= !fit.super_logarithmic;
        let _ = writeln!(
            summary,
            "{t} {:e} {:e} {} {:e}",
            fit.fitted_c, fit.slope, fit.super_logarithmic, res.consistency
        );
        FieldData::Scalar(res.p.clone()).save(&dir.join(format!("p_{k:05}.bin")))?;
        fs::write(dir.join(format!("growth_{k:05}.txt")), fit.to_text())?;
    }
    fs::write(dir.join("pressure_summary.txt"), &summary)?;
    Ok(PressureSummary { text: summary, bounded })
}

/// Default cutoff profiles used in cross-profile checks.
pub fn alternate_profile() -> CutoffProfile {
    CutoffProfile::ExpBump { r0: 0.5, r1: 1.0 }
}
