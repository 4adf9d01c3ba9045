//! Pressure from velocity, by two independent routes.
//!
//! `grad_pressure` splits the gradient of the Newtonian potential with a
//! radial cutoff: the near part acts on `div div (u ⊗ u) = grad u : (grad u)^T`
//! and the far part carries both derivatives onto the kernel.
//! `pressure_riesz` inverts the Laplacian spectrally on the padded box.

use crate::biot_savart::{bounds::loglog_slope, is_compact, tail_hessian_perp, KernelEval};
use crate::conv::Convolver;
use crate::serfati::centred_flux;
use crate::error::{Error, Result};
use crate::fields::{
    curl, gradient, gradient_magnitude, velocity_gradient, Extension, Grid, RadialCutoff,
    ScalarField, Trajectory, VectorField,
};
use num_complex::Complex64;
use std::f64::consts::E;
use std::fmt::Write as _;

/// `grad u : (grad u)^T = sum_{m,i} d_m u^i d_i u^m`.
pub fn div_div_flux(u: &VectorField) -> ScalarField {
    let du = velocity_gradient(u);
    let g = *u.grid();
    let vals = (0..g.len())
        .map(|k| {
            let mut s = 0.0;
            for m in 0..2 {
                for i in 0..2 {
                    s += du[m][i].values()[k] * du[i][m].values()[k];
                }
            }
            s
        })
        .collect();
    ScalarField::new(g, vals).expect("finite")
}

fn flux(u: &VectorField) -> [Vec<f64>; 3] {
    let (x, y) = (u.xs(), u.ys());
    [
        x.iter().map(|a| a * a).collect(),
        x.iter().zip(y).map(|(a, b)| a * b).collect(),
        y.iter().map(|b| b * b).collect(),
    ]
}

/// Cached spectra for [`grad_pressure`] at one cutoff.
#[derive(Debug)]
pub struct PressureOperator {
    conv: Convolver,
    cutoff: RadialCutoff,
    near: Vec<Complex64>,
    tail: [Vec<Complex64>; 3],
}

impl PressureOperator {
    pub fn new(grid: Grid, cutoff: RadialCutoff) -> Result<Self> {
        RadialCutoff::new(cutoff.profile, cutoff.scale)?;
        let conv = Convolver::new(grid);
        let near = conv.kernel_spectrum(
            |x| {
                let v = cutoff.value(x);
                let k = KernelEval::eval_perp(x);
                Complex64::new(v * k[0], v * k[1])
            },
            Complex64::default(),
        );
        let pick = |f: fn(&[[[f64; 2]; 2]; 2], usize) -> f64| {
            conv.kernel_spectrum(
                |x| {
                    let t = tail_hessian_perp(&cutoff, x);
                    Complex64::new(f(&t, 0), f(&t, 1))
                },
                Complex64::default(),
            )
        };
        let tail = [
            pick(|t, i| t[0][0][i]),
            pick(|t, i| t[0][1][i] + t[1][0][i]),
            pick(|t, i| t[1][1][i]),
        ];
        Ok(Self {
            conv,
            cutoff,
            near,
            tail,
        })
    }

    pub fn cutoff(&self) -> &RadialCutoff {
        &self.cutoff
    }

    /// `-U' + (a K^perp) * D + sum_kl d_k d_l [(1 - a) K^perp] * (u_k u_l)`.
    pub fn apply(&self, u: &VectorField, uinf_prime: [f64; 2]) -> Result<VectorField> {
        let g = *self.conv.grid();
        if *u.grid() != g {
            return Err(Error::GridMismatch);
        }
        let d = div_div_flux(u);
        let mut s = self.conv.data_spectrum(d.values(), None);
        let f = centred_flux(u);
        let fs: Vec<_> = f.iter().map(|c| self.conv.data_spectrum(c, None)).collect();
        for (k, v) in s.iter_mut().enumerate() {
            let mut t = *v * self.near[k];
            for c in 0..3 {
                t += self.tail[c][k] * fs[c][k];
            }
            *v = t;
        }
        let (x, y) = self.conv.inverse(s);
        let x = x.into_iter().map(|v| v - uinf_prime[0]).collect();
        let y = y.into_iter().map(|v| v - uinf_prime[1]).collect();
        VectorField::new(g, x, y)
    }
}

/// Pressure gradient by the cutoff split at scale `eps`.
///
/// For data with mass near the grid edge the cutoff support plus the probe
/// box must fit in the grid box.
pub fn grad_pressure(u: &VectorField, uinf_prime: [f64; 2], a: &RadialCutoff, eps: f64) -> Result<VectorField> {
    let g = *u.grid();
    let cutoff = RadialCutoff::new(a.profile, eps)?;
    if eps < 2.0 * g.spacing() {
        return Err(Error::Config(format!(
            "cutoff scale {eps} below two grid cells ({})",
            2.0 * g.spacing()
        )));
    }
    if !is_compact(&div_div_flux(u)) {
        let required = g.probe_half_width() + cutoff.support_radius();
        if required > g.half_width() {
            return Err(Error::DomainCoverage {
                scale: eps,
                required,
                half_width: g.half_width(),
            });
        }
    }
    PressureOperator::new(g, cutoff)?.apply(u, uinf_prime)
}

/// Shell-maximum growth record of `|p + U' . x|`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub radii: Vec<f64>,
    pub shell_max: Vec<f64>,
    /// Least-squares slope of the shell maxima against `log(e + r)`.
    pub slope: f64,
    /// `max shell_max / (||u||_S^2 log(e + r))`.
    pub fitted_c: f64,
    /// Log-log slope of shell maxima against `log(e + r)` exceeds 1.5.
    pub super_logarithmic: bool,
}

impl GrowthFit {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# fitted_c {:e}", self.fitted_c);
        let _ = writeln!(s, "# slope {:e}", self.slope);
        let _ = writeln!(s, "# super_logarithmic {}", self.super_logarithmic);
        let _ = writeln!(s, "# radius shell_max");
        for (r, m) in self.radii.iter().zip(&self.shell_max) {
            let _ = writeln!(s, "{r} {m:e}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureResult {
    /// Normalized so that `p(0) = 0`.
    pub p: ScalarField,
    /// Spectral gradient of `p`.
    pub grad_p: VectorField,
    pub uinf_prime: [f64; 2],
    /// Window applied to `u` before the transform.
    pub extension: Extension,
    /// Probe-box sup of `grad_h p - grad_p`.
    pub consistency: f64,
    /// Fit with unit `||u||_S`; see [`pressure_growth_diagnostic`].
    pub growth: GrowthFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RieszOptions {
    /// `None` picks `Compact` for decaying data and a wide window
    /// otherwise. Ignored when `periodic` is set.
    pub extension: Option<Extension>,
    /// Transform on the unpadded box, for data periodic over it.
    pub periodic: bool,
}

/// Velocity that does not fall below half its probe sup at the edge.
fn non_decaying(u: &VectorField) -> bool {
    let m = u.magnitude();
    m.edge_magnitude(2) > 0.5 * m.probe_sup()
}

/// Window chosen for non-decaying data: the default cutoff vanishing two
/// cells inside the edge.
pub fn default_window(g: &Grid) -> Extension {
    Extension::Damped {
        radius: g.half_width() - 2.0 * g.spacing(),
    }
}

/// `p = -U' . x + q - q(0)` with `q^ = -xi_k xi_l / |xi|^2 (u_k u_l)^`.
pub fn pressure_riesz(u: &VectorField, uinf_prime: [f64; 2]) -> Result<PressureResult> {
    pressure_riesz_with(u, uinf_prime, &RieszOptions::default())
}

pub fn pressure_riesz_with(u: &VectorField, uinf_prime: [f64; 2], opts: &RieszOptions) -> Result<PressureResult> {
    let g = *u.grid();
    let extension = match opts.extension {
        _ if opts.periodic => Extension::Compact,
        Some(e) => e,
        None if non_decaying(u) => default_window(&g),
        None => Extension::Compact,
    };
    let w = extension.apply_vector(u);
    let conv = if opts.periodic { Convolver::periodic(g) } else { Convolver::new(g) };
    let m = conv.padded_size();
    let kx = conv.wavenumbers();
    let f = flux(&w);
    let fs: Vec<_> = f.iter().map(|c| conv.data_spectrum(c, None)).collect();
    let mut q = vec![Complex64::default(); m * m];
    let mut qx = q.clone();
    let mut qy = q.clone();
    for j in 0..m {
        for i in 0..m {
            let k = j * m + i;
            let (a, b) = (kx[i], kx[j]);
            let k2 = a * a + b * b;
            if k2 == 0.0 {
                continue;
            }
            let v = -(fs[0][k] * (a * a) + fs[1][k] * (2.0 * a * b) + fs[2][k] * (b * b)) / k2;
            q[k] = v;
            qx[k] = v * Complex64::new(0.0, a);
            qy[k] = v * Complex64::new(0.0, b);
        }
    }
    let (q, _) = conv.inverse(q);
    let (gx, _) = conv.inverse(qx);
    let (gy, _) = conv.inverse(qy);
    let q0 = q[g.origin_index()];
    let mut p = ScalarField::new(g, q.into_iter().map(|v| v - q0).collect())?;
    p = p.zip_with(
        &ScalarField::from_fn(g, |x| -(uinf_prime[0] * x[0] + uinf_prime[1] * x[1])),
        |a, b| a + b,
    )?;
    let grad_p = VectorField::new(
        g,
        gx.into_iter().map(|v| v - uinf_prime[0]).collect(),
        gy.into_iter().map(|v| v - uinf_prime[1]).collect(),
    )?;
    let probe = g.probe_indices();
    let consistency = gradient(&p).sub(&grad_p)?.sup_on(&probe);
    let growth = growth_fit(&p, uinf_prime, 1.0);
    Ok(PressureResult {
        p,
        grad_p,
        uinf_prime,
        extension,
        consistency,
        growth,
    })
}

/// Radii and node sets of equal-width shells between `r0` and `r1`.
fn shells(g: &Grid, r0: f64, r1: f64, count: usize) -> Vec<(f64, Vec<usize>)> {
    let w = (r1 - r0) / count as f64;
    let mut out: Vec<(f64, Vec<usize>)> = (0..count).map(|s| (r0 + (s as f64 + 0.5) * w, vec![])).collect();
    for k in 0..g.len() {
        let [x, y] = g.point_of(k);
        let r = x.hypot(y);
        if r >= r0 && r < r1 {
            let s = (((r - r0) / w) as usize).min(count - 1);
            out[s].1.push(k);
        }
    }
    out.retain(|(_, nodes)| !nodes.is_empty());
    out
}

const GROWTH_SHELLS: usize = 8;

/// Shell maxima below this multiple of `||u||_S^2` are not fitted for growth.
pub const GROWTH_FLOOR: f64 = 0.05;

fn growth_fit(p: &ScalarField, uinf_prime: [f64; 2], s_norm: f64) -> GrowthFit {
    let g = *p.grid();
    let l = g.half_width();
    let excess = p.zip_with(
        &ScalarField::from_fn(g, |x| uinf_prime[0] * x[0] + uinf_prime[1] * x[1]),
        |a, b| (a + b).abs(),
    )
    .expect("same grid");
    let sh = shells(&g, l / 8.0, l / 2.0, GROWTH_SHELLS);
    let radii: Vec<f64> = sh.iter().map(|s| s.0).collect();
    let shell_max: Vec<f64> = sh.iter().map(|(_, nodes)| excess.sup_on(nodes)).collect();
    let logs: Vec<f64> = radii.iter().map(|r| (E + r).ln()).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().sum::<f64>() / n;
    let my = shell_max.iter().sum::<f64>() / n;
    let num: f64 = logs.iter().zip(&shell_max).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = logs.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = if den > 0.0 { num / den } else { 0.0 };
    let scale = s_norm * s_norm;
    let fitted_c = if scale > 0.0 {
        shell_max.iter().zip(&logs).map(|(m, lg)| m / (scale * lg)).fold(0.0, f64::max)
    } else {
        0.0
    };
    let resolved = shell_max.last().is_some_and(|m| *m > GROWTH_FLOOR * scale);
    let super_logarithmic =
        resolved && shell_max.iter().all(|m| *m > 0.0) && loglog_slope(&logs, &shell_max) > 1.5;
    GrowthFit {
        radii,
        shell_max,
        slope,
        fitted_c,
        super_logarithmic,
    }
}

/// Refit the growth of `res.p` against `C ||u||_S^2 log(e + |x|)`.
pub fn pressure_growth_diagnostic(res: &PressureResult, u_s_norm: f64) -> GrowthFit {
    growth_fit(&res.p, res.uinf_prime, u_s_norm)
}

/// Decay slopes for velocities with compactly supported vorticity.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub radii: Vec<f64>,
    pub velocity_max: Vec<f64>,
    pub gradient_max: Vec<f64>,
    pub far_mean: [f64; 2],
    pub velocity_slope: f64,
    pub gradient_slope: f64,
    pub passed: bool,
}

impl DecayFit {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# far_mean {:e} {:e}", self.far_mean[0], self.far_mean[1]);
        let _ = writeln!(s, "# velocity_slope {:.4} (target <= -1 + {DECAY_SLACK})", self.velocity_slope);
        let _ = writeln!(s, "# gradient_slope {:.4} (target <= -2 + {DECAY_SLACK})", self.gradient_slope);
        let _ = writeln!(s, "# passed {}", self.passed);
        let _ = writeln!(s, "# radius velocity_max gradient_max");
        for k in 0..self.radii.len() {
            let _ = writeln!(s, "{} {:e} {:e}", self.radii[k], self.velocity_max[k], self.gradient_max[k]);
        }
        s
    }
}

pub const DECAY_SLACK: f64 = 0.15;
const DECAY_SHELLS: usize = 10;

/// Relative size of discrete-curl residue tolerated outside the support.
const SUPPORT_LEAK: f64 = 1e-2;

/// Fit shell maxima of `|u - far mean|` and `|grad u|` against `1 + r` on
/// shells from `max(2, support + 2h)` to `L/2`. The far mean is the mean of
/// `u` over the annulus `0.75 L <= r <= L`.
pub fn decay_check(u: &VectorField, support: f64) -> Result<DecayFit> {
    let g = *u.grid();
    let h = g.spacing();
    let w = curl(u);
    let outside: Vec<usize> = (0..g.len())
        .filter(|&k| {
            let [x, y] = g.point_of(k);
            let (i, j) = g.coords(k);
            let interior = i.min(j).min(g.n() - 1 - i).min(g.n() - 1 - j) >= 2;
            interior && x.hypot(y) > support + 2.0 * h
        })
        .collect();
    let leak = w.sup_on(&outside);
    if leak > SUPPORT_LEAK * w.sup_norm() {
        return Err(Error::Precondition(format!(
            "vorticity not supported within radius {support} (|omega| = {leak:e} outside)"
        )));
    }
    let l = g.half_width();
    let r0 = 2.0f64.max(support + 2.0 * h);
    if r0 >= l / 2.0 {
        return Err(Error::Precondition(format!(
            "no room for decay shells between {r0} and L/2 = {}",
            l / 2.0
        )));
    }
    let far_mean = u.mean_on(&g.outer_annulus_indices());
    let dev = u.shift([-far_mean[0], -far_mean[1]]).magnitude();
    let grad = gradient_magnitude(u);
    let sh = shells(&g, r0, l / 2.0, DECAY_SHELLS);
    let radii: Vec<f64> = sh.iter().map(|s| s.0).collect();
    let velocity_max: Vec<f64> = sh.iter().map(|(_, n)| dev.sup_on(n)).collect();
    let gradient_max: Vec<f64> = sh.iter().map(|(_, n)| grad.sup_on(n)).collect();
    let x: Vec<f64> = radii.iter().map(|r| 1.0 + r).collect();
    let velocity_slope = loglog_slope(&x, &velocity_max);
    let gradient_slope = loglog_slope(&x, &gradient_max);
    let passed = velocity_slope <= -1.0 + DECAY_SLACK && gradient_slope <= -2.0 + DECAY_SLACK;
    Ok(DecayFit {
        radii,
        velocity_max,
        gradient_max,
        far_mean,
        velocity_slope,
        gradient_slope,
        passed,
    })
}

/// `sup |grad p + U'| / ||u||_S^2` for the cutoff route.
pub fn boundedness_ratio(grad_p: &VectorField, uinf_prime: [f64; 2], u_s_norm: f64) -> f64 {
    let g = grad_p.shift(uinf_prime);
    let probe = grad_p.grid().probe_indices();
    g.sup_on(&probe) / (u_s_norm * u_s_norm)
}

/// Probe-box sup of `d_t u + u . grad u + grad p` at every interior
/// snapshot, with centred time differences and `grad p` from
/// [`grad_pressure`] at cutoff `a`.
pub fn momentum_residual(traj: &Trajectory, a: &RadialCutoff) -> Result<Vec<(f64, f64)>> {
    let snaps = traj.snapshots();
    if snaps.len() < 3 {
        return Err(Error::InsufficientSnapshots(format!(
            "momentum residual needs three snapshots, got {}",
            snaps.len()
        )));
    }
    let g = *traj.grid();
    let op = PressureOperator::new(g, *a)?;
    let probe = g.probe_indices();
    let mut out = vec![];
    for k in 1..snaps.len() - 1 {
        let (prev, cur, next) = (&snaps[k - 1], &snaps[k], &snaps[k + 1]);
        let dt = next.t - prev.t;
        let dudt = next.u.sub(&prev.u)?.scale(1.0 / dt);
        let du = velocity_gradient(&cur.u);
        let adv = VectorField::new(
            g,
            (0..g.len())
                .map(|n| cur.u.xs()[n] * du[0][0].values()[n] + cur.u.ys()[n] * du[1][0].values()[n])
                .collect(),
            (0..g.len())
                .map(|n| cur.u.xs()[n] * du[0][1].values()[n] + cur.u.ys()[n] * du[1][1].values()[n])
                .collect(),
        )?;
        let gp = op.apply(&cur.u, traj.uinf.derivative(cur.t))?;
        let r = dudt.add(&adv)?.add(&gp)?;
        out.push((cur.t, r.sup_on(&probe)));
    }
    Ok(out)
}

/// Pressure at every snapshot of a trajectory.
pub fn pressure_series(traj: &Trajectory) -> Result<Vec<(f64, PressureResult)>> {
    traj.snapshots()
        .iter()
        .map(|s| Ok((s.t, pressure_riesz(&s.u, traj.uinf.derivative(s.t))?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_velocity_gives_linear_pressure() {
        let g = Grid::new(32, 4.0).unwrap();
        let u = VectorField::zeros(g);
        let r = pressure_riesz(&u, [0.5, -1.0]).unwrap();
        for k in 0..g.len() {
            let [x, y] = g.point_of(k);
            assert_eq!(r.p.values()[k], -(0.5 * x - y));
        }
        assert_eq!(r.p.values()[g.origin_index()], 0.0);
        assert_eq!(pressure_growth_diagnostic(&r, 0.0).fitted_c, 0.0);
        let gp = grad_pressure(&u, [0.5, -1.0], &RadialCutoff::default(), 1.0).unwrap();
        assert!(gp.values_eq([-0.5, 1.0]));
    }

    trait Uniform {
        fn values_eq(&self, c: [f64; 2]) -> bool;
    }

    impl Uniform for VectorField {
        fn values_eq(&self, c: [f64; 2]) -> bool {
            self.xs().iter().all(|v| *v == c[0]) && self.ys().iter().all(|v| *v == c[1])
        }
    }

    #[test]
    fn div_div_flux_of_rotation() {
        // u = (-y, x): grad u : grad u^T = 2 * (0 * 0 + (-1)(1)) = -2
        let g = Grid::new(16, 2.0).unwrap();
        let u = VectorField::from_fn(g, |[x, y]| [-y, x]);
        let d = div_div_flux(&u);
        assert!(d.values().iter().all(|v| (v + 2.0).abs() < 1e-12));
    }

    #[test]
    fn shear_has_no_riesz_gradient() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let u = VectorField::from_fn(g, |[_, y]| [y.sin(), 0.0]);
        let r = pressure_riesz_with(&u, [0.0, 0.0], &RieszOptions { extension: None, periodic: true }).unwrap();
        let probe = g.probe_indices();
        assert!(r.grad_p.sup_on(&probe) < 1e-12, "{}", r.grad_p.sup_on(&probe));
    }
}
