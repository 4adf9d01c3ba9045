//! Time stepping by vorticity transport.
//!
//! Each step traces backward characteristics with RK4 through a velocity
//! linearly interpolated in time, transports `omega` by interpolation at
//! the departure points, and recovers the new velocity from the new
//! vorticity in one of three ways (see [`Recovery`]).

mod frame;
mod mollify;

pub use frame::{transform_frame, Direction};
pub use mollify::{mollify_truncate, MollifyOptions, Mollified};

use crate::biot_savart::{
    is_compact, renormalized_with, BiotSavart, ConvergenceReport, RenormalizeOptions,
};
use crate::error::{Error, Result};
use crate::fields::{
    curl, stencil_unchecked, Grid, Interpolation, RadialCutoff,
    ScalarField, Snapshot, Trajectory, TrajectoryMeta, UInfinityPath, VectorField,
};
use crate::serfati::{FluxIntegral, SerfatiOperator};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Velocity recovery from the transported vorticity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recovery {
    /// `u = K * omega + U(t)`; compact vorticity only.
    Classical,
    /// `u = u0 + U(t) + lim_R (a_R K) * (omega - omega0)`.
    Renormalized,
    /// Picard iteration on the Serfati identity.
    #[default]
    SerfatiFixedPoint,
}

impl std::fmt::Display for Recovery {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Recovery::Classical => "classical",
            Recovery::Renormalized => "renormalized",
            Recovery::SerfatiFixedPoint => "serfati-fixed-point",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub grid: Grid,
    pub dt: f64,
    pub t_final: f64,
    /// Cutoff used by the Serfati identity.
    pub cutoff: RadialCutoff,
    /// Scales for renormalized recovery.
    pub schedule: Vec<f64>,
    pub recovery: Recovery,
    pub uinf: UInfinityPath,
    pub fixed_point_tolerance: f64,
    pub max_iterations: usize,
    pub renormalize_tolerance: f64,
    pub interpolation: Interpolation,
    /// Courant number bound, at most 1.
    pub cfl: f64,
    /// Clamp transported vorticity to the initial range.
    pub clamp: bool,
    /// Store every k-th step (the last step is always stored).
    pub snapshot_every: usize,
    /// Relative slack in the per-step displacement bound.
    pub displacement_slack: f64,
}

impl SolverConfig {
    pub fn new(grid: Grid, dt: f64, t_final: f64) -> Self {
        Self {
            grid,
            dt,
            t_final,
            cutoff: RadialCutoff::default(),
            schedule: vec![1.0, 2.0, 4.0],
            recovery: Recovery::default(),
            uinf: UInfinityPath::zero(),
            fixed_point_tolerance: 1e-8,
            max_iterations: 50,
            renormalize_tolerance: 1e-8,
            interpolation: Interpolation::Bicubic,
            cfl: 1.0,
            clamp: true,
            snapshot_every: 1,
            displacement_slack: 1e-2,
        }
    }

    pub fn steps(&self) -> Result<usize> {
        if self.t_final == 0.0 {
            return Ok(0);
        }
        let n = (self.t_final / self.dt).round();
        if (n * self.dt - self.t_final).abs() > 1e-9 * self.t_final {
            return Err(Error::Config(format!(
                "final time {} is not a multiple of dt = {}",
                self.t_final, self.dt
            )));
        }
        Ok(n as usize)
    }

    /// Check tolerances, the time grid and the CFL bound against `u0`.
    pub fn validate(&self, u0: &VectorField) -> Result<()> {
        if *u0.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if !(self.dt > 0.0) || !(self.t_final >= 0.0) {
            return Err(Error::Config("need dt > 0 and t_final >= 0".into()));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("CFL number {} outside (0, 1]", self.cfl)));
        }
        if !(self.fixed_point_tolerance > 0.0 && self.renormalize_tolerance > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.max_iterations == 0 || self.snapshot_every == 0 {
            return Err(Error::Config("iteration and snapshot counts must be positive".into()));
        }
        RadialCutoff::new(self.cutoff.profile, self.cutoff.scale)?;
        self.steps()?;
        let speed = u0.sup_norm();
        if speed > 0.0 {
            let limit = self.cfl * self.grid.spacing() / speed;
            if self.dt > limit * (1.0 + 1e-12) {
                return Err(Error::Cfl {
                    dt: self.dt,
                    limit,
                    cfl: self.cfl,
                });
            }
        }
        Ok(())
    }
}

/// Solution at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub omega: ScalarField,
    pub u: VectorField,
}

/// Backward-characteristic departure points of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMapSample {
    pub points: Vec<[f64; 2]>,
    pub max_displacement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub t: f64,
    pub iterations: usize,
    /// Last relative velocity change of the iteration.
    pub residual: f64,
    pub max_displacement: f64,
    pub displacement_bound: f64,
    pub renormalization: Option<ConvergenceReport>,
}

/// Clamp into the node range; stencils near the edge extrapolate by at
/// most one cell.
fn clamp_to_nodes(g: &Grid, x: [f64; 2]) -> [f64; 2] {
    let lo = -g.half_width();
    let hi = g.half_width() - g.spacing();
    [x[0].clamp(lo, hi), x[1].clamp(lo, hi)]
}

/// Departure points `X(t_n; t_n + dt, x)` for every node.
pub fn departure_points(
    dt: f64,
    u_n: &VectorField,
    u_next: &VectorField,
    order: Interpolation,
) -> Result<FlowMapSample> {
    let g = *u_n.grid();
    if *u_next.grid() != g {
        return Err(Error::GridMismatch);
    }
    let mid = u_n.add(u_next)?.scale(0.5);
    let eval = |u: &VectorField, x: [f64; 2]| {
        let s = stencil_unchecked(&g, clamp_to_nodes(&g, x), order);
        [s.apply(&g, u.xs()), s.apply(&g, u.ys())]
    };
    let mut points = Vec::with_capacity(g.len());
    let mut max_d: f64 = 0.0;
    for k in 0..g.len() {
        let x = g.point_of(k);
        let k1 = u_next.get(k);
        let k2 = eval(&mid, [x[0] - 0.5 * dt * k1[0], x[1] - 0.5 * dt * k1[1]]);
        let k3 = eval(&mid, [x[0] - 0.5 * dt * k2[0], x[1] - 0.5 * dt * k2[1]]);
        let k4 = eval(u_n, [x[0] - dt * k3[0], x[1] - dt * k3[1]]);
        let d = [
            dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if !(d[0].is_finite() && d[1].is_finite()) {
            return Err(Error::NonFinite(k));
        }
        max_d = max_d.max(d[0].hypot(d[1]));
        points.push([x[0] - d[0], x[1] - d[1]]);
    }
    Ok(FlowMapSample {
        points,
        max_displacement: max_d,
    })
}

/// `omega'(x) = omega(X(x))`, optionally clamped to `range`.
pub fn transport(
    omega: &ScalarField,
    flow: &FlowMapSample,
    order: Interpolation,
    range: Option<(f64, f64)>,
) -> ScalarField {
    let g = *omega.grid();
    let vals = flow
        .points
        .iter()
        .map(|&p| {
            let s = stencil_unchecked(&g, clamp_to_nodes(&g, p), order);
            let v = s.apply(&g, omega.values());
            match range {
                Some((lo, hi)) => v.clamp(lo, hi),
                None => v,
            }
        })
        .collect();
    ScalarField::from_raw(g, vals)
}

/// `sup|u| + sup|curl u|`.
pub fn s_norm(u: &VectorField) -> f64 {
    u.sup_norm() + curl(u).sup_norm()
}

/// Time stepper holding the initial data and cached operators.
#[derive(Debug)]
pub struct Solver {
    cfg: SolverConfig,
    bs: BiotSavart,
    serfati: Option<SerfatiOperator>,
    omega0: ScalarField,
    u0: VectorField,
    range: (f64, f64),
    integral: Option<FluxIntegral>,
    state: State,
}

impl Solver {
    pub fn new(cfg: SolverConfig, omega0: ScalarField, u0: VectorField) -> Result<Self> {
        cfg.validate(&u0)?;
        if *omega0.grid() != cfg.grid {
            return Err(Error::GridMismatch);
        }
        if cfg.recovery == Recovery::Classical && !is_compact(&omega0) {
            return Err(Error::Config(
                "classical recovery needs vorticity vanishing near the grid edge".into(),
            ));
        }
        let bs = BiotSavart::new(cfg.grid);
        let (serfati, integral) = match cfg.recovery {
            Recovery::SerfatiFixedPoint => {
                let op = SerfatiOperator::new(cfg.grid, cfg.cutoff)?;
                let i = op.start(&u0);
                (Some(op), Some(i))
            }
            _ => (None, None),
        };
        let range = omega0.min_max();
        let state = State {
            t: 0.0,
            omega: omega0.clone(),
            u: u0.clone(),
        };
        Ok(Self {
            cfg,
            bs,
            serfati,
            omega0,
            u0,
            range,
            integral,
            state,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    fn transport_with(&self, u_guess: &VectorField) -> Result<(ScalarField, FlowMapSample)> {
        let flow = departure_points(self.cfg.dt, &self.state.u, u_guess, self.cfg.interpolation)?;
        let speed = self.state.u.sup_norm().max(u_guess.sup_norm());
        let bound = speed * self.cfg.dt * (1.0 + self.cfg.displacement_slack);
        if flow.max_displacement > bound + 1e-14 {
            return Err(Error::Displacement {
                displacement: flow.max_displacement,
                bound,
            });
        }
        let range = self.cfg.clamp.then_some(self.range);
        Ok((
            transport(&self.state.omega, &flow, self.cfg.interpolation, range),
            flow,
        ))
    }

    fn recover(
        &self,
        omega: &ScalarField,
        t: f64,
        u_guess: &VectorField,
    ) -> Result<(VectorField, Option<ConvergenceReport>)> {
        let uinf = self.cfg.uinf.eval(t);
        match self.cfg.recovery {
            Recovery::Classical => Ok((self.bs.classical(omega).shift(uinf), None)),
            Recovery::Renormalized => {
                let opts = RenormalizeOptions {
                    tolerance: self.cfg.renormalize_tolerance,
                    scale_floor: 1.0 + self.u0.sup_norm(),
                    ..Default::default()
                };
                let d = omega.sub(&self.omega0)?;
                let (v, rep) =
                    renormalized_with(&self.bs, &d, &self.cfg.cutoff.profile, &self.cfg.schedule, &opts)?;
                if !rep.converged {
                    return Err(Error::Renormalization {
                        last_difference: rep.last_difference(),
                    });
                }
                Ok((self.u0.add(&v)?.shift(uinf), Some(rep)))
            }
            Recovery::SerfatiFixedPoint => {
                let op = self.serfati.as_ref().expect("serfati operator");
                let from = self.integral.as_ref().expect("flux integral");
                let integral = op.extend(from, self.cfg.dt, u_guess);
                let d = omega.sub(&self.omega0)?;
                Ok((self.u0.add(&op.evaluate(&d, &integral))?.shift(uinf), None))
            }
        }
    }

    /// Advance one time step.
    pub fn step(&mut self) -> Result<StepReport> {
        let t1 = self.state.t + self.cfg.dt;
        let mut guess = self.state.u.clone();
        let mut report = StepReport {
            t: t1,
            iterations: 0,
            residual: f64::NAN,
            max_displacement: 0.0,
            displacement_bound: 0.0,
            renormalization: None,
        };
        let passes = match self.cfg.recovery {
            Recovery::SerfatiFixedPoint => self.cfg.max_iterations,
            _ => 2,
        };
        let mut result = None;
        for it in 1..=passes {
            let (omega, flow) = self.transport_with(&guess)?;
            let (u, rep) = self.recover(&omega, t1, &guess)?;
            let change = u.sub(&guess)?.sup_norm() / u.sup_norm().max(f64::MIN_POSITIVE);
            report.iterations = it;
            report.residual = change;
            report.max_displacement = flow.max_displacement;
            report.displacement_bound =
                self.state.u.sup_norm().max(guess.sup_norm()) * self.cfg.dt * (1.0 + self.cfg.displacement_slack);
            report.renormalization = rep;
            let done = match self.cfg.recovery {
                Recovery::SerfatiFixedPoint => change < self.cfg.fixed_point_tolerance,
                _ => it == passes,
            };
            guess = u.clone();
            if done {
                result = Some((omega, u));
                break;
            }
        }
        let Some((omega, u)) = result else {
            return Err(Error::FixedPoint {
                iterations: report.iterations,
                residual: report.residual,
            });
        };
        if let (Some(op), Some(i)) = (&self.serfati, &self.integral) {
            self.integral = Some(op.extend(i, self.cfg.dt, &u));
        }
        self.state = State { t: t1, omega, u };
        Ok(report)
    }
}

/// `||u(t)||_S <= exp(C (1 + ||omega0||) t) ||u0||_S + |U(t)|` monitor.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GrowthMonitor {
    pub times: Vec<f64>,
    pub s_norms: Vec<f64>,
    pub uinf_norms: Vec<f64>,
    /// Smallest `C` making the bound hold at every recorded time.
    pub fitted_c: f64,
}

impl GrowthMonitor {
    fn record(&mut self, t: f64, u: &VectorField, uinf: [f64; 2], s0: f64, w0: f64) {
        let s = s_norm(u);
        let ui = uinf[0].hypot(uinf[1]);
        self.times.push(t);
        self.s_norms.push(s);
        self.uinf_norms.push(ui);
        if t > 0.0 && s0 > 0.0 {
            let ratio = ((s - ui) / s0).max(1.0);
            self.fitted_c = self.fitted_c.max(ratio.ln() / ((1.0 + w0) * t));
        }
    }
}

#[derive(Debug)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub growth: GrowthMonitor,
    pub steps: Vec<StepReport>,
    /// Set when a step failed; the trajectory then ends before `t_final`.
    pub failure: Option<Error>,
}

impl RunOutput {
    pub fn into_result(self) -> Result<Self> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }
}

/// Run from `u0` with `omega0 = curl(u0)`.
pub fn run(cfg: &SolverConfig, u0: &VectorField) -> Result<RunOutput> {
    run_with_vorticity(cfg, &curl(u0), u0)
}

/// Run from explicitly given initial vorticity and velocity.
pub fn run_with_vorticity(
    cfg: &SolverConfig,
    omega0: &ScalarField,
    u0: &VectorField,
) -> Result<RunOutput> {
    let steps = cfg.steps()?;
    let mut solver = Solver::new(cfg.clone(), omega0.clone(), u0.clone())?;
    let mut notes = BTreeMap::new();
    notes.insert("recovery".to_string(), cfg.recovery.to_string());
    notes.insert("interpolation".to_string(), format!("{:?}", cfg.interpolation).to_lowercase());
    notes.insert("clamp".to_string(), cfg.clamp.to_string());
    let meta = TrajectoryMeta {
        grid: cfg.grid,
        cutoff: cfg.cutoff,
        dt: cfg.dt,
        removed_path: None,
        notes,
    };
    let mut traj = Trajectory::new(
        Snapshot {
            t: 0.0,
            omega: omega0.clone(),
            u: u0.clone(),
        },
        cfg.uinf.clone(),
        meta,
    )?;
    let s0 = s_norm(u0);
    let w0 = omega0.sup_norm();
    let mut growth = GrowthMonitor::default();
    growth.record(0.0, u0, [0.0, 0.0], s0, w0);
    let mut reports = vec![];
    let mut failure = None;
    for n in 1..=steps {
        match solver.step() {
            Ok(r) => reports.push(r),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
        if n % cfg.snapshot_every == 0 || n == steps {
            let s = solver.state();
            // pin the final time to the configured value
            let t = if n == steps { cfg.t_final } else { s.t };
            growth.record(t, &s.u, cfg.uinf.eval(t), s0, w0);
            traj.push(Snapshot {
                t,
                omega: s.omega.clone(),
                u: s.u.clone(),
            })?;
        }
    }
    Ok(RunOutput {
        trajectory: traj,
        growth,
        steps: reports,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cfl_is_checked() {
        let g = Grid::new(16, 1.0).unwrap();
        let u = VectorField::constant(g, [1.0, 0.0]);
        let cfg = SolverConfig::new(g, 0.2, 1.0);
        assert!(matches!(cfg.validate(&u), Err(Error::Cfl { .. })));
        let cfg = SolverConfig::new(g, 0.1, 1.0);
        assert!(cfg.validate(&u).is_ok());
        let cfg = SolverConfig::new(g, 0.1, 0.25);
        assert!(matches!(cfg.validate(&u), Err(Error::Config(_))));
    }

    #[test]
    fn zero_final_time_gives_single_snapshot() {
        let g = Grid::new(16, 2.0).unwrap();
        let u = VectorField::zeros(g);
        let out = run(&SolverConfig::new(g, 0.1, 0.0), &u).unwrap();
        assert_eq!(out.trajectory.len(), 1);
    }

    #[test]
    fn uniform_stream_is_exact_in_renormalized_mode() {
        let g = Grid::new(32, 4.0).unwrap();
        let u0 = VectorField::constant(g, [0.2, 0.1]);
        let mut cfg = SolverConfig::new(g, 0.05, 0.5);
        cfg.recovery = Recovery::Renormalized;
        cfg.uinf = UInfinityPath::linear([1.0, 0.0], 0.5).unwrap();
        let out = run(&cfg, &u0).unwrap().into_result().unwrap();
        for s in out.trajectory.snapshots() {
            let expect = u0.shift([s.t, 0.0]);
            assert!(s.u.sub(&expect).unwrap().sup_norm() < 1e-14, "t = {}", s.t);
        }
    }

    #[test]
    fn shear_is_steady() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let u0 = VectorField::from_fn(g, |[_, y]| [y.sin(), 0.0]);
        let w0 = ScalarField::from_fn(g, |[_, y]| -y.cos());
        let mut cfg = SolverConfig::new(g, 0.1, 1.0);
        cfg.recovery = Recovery::Renormalized;
        cfg.schedule = vec![2.0, 4.0];
        let out = run_with_vorticity(&cfg, &w0, &u0).unwrap().into_result().unwrap();
        let last = out.trajectory.last();
        assert!(last.u.sub(&u0).unwrap().sup_norm() < 1e-12);
        assert!(last.omega.sub(&w0).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn displacement_within_bound() {
        let g = Grid::new(32, 2.0).unwrap();
        let u0 = VectorField::from_fn(g, |[x, y]| [-y * 0.5, x * 0.5]);
        let flow = departure_points(0.05, &u0, &u0, Interpolation::Bicubic).unwrap();
        assert!(flow.max_displacement <= u0.sup_norm() * 0.05 * 1.0001);
    }
}
