//! The Serfati identity
//!
//! `u^j(t) - u0^j = U(t)^j + (a K^j) * (omega(t) - omega0)
//!                  - int_0^t T^j_{kl} * (u_k u_l)(s) ds`,
//!
//! with tail kernel `T^j_{kl} = d_k (grad^perp)_l [(1 - a) K^j]`, together
//! with extraction of the path `U` and discrete checks of the companion
//! identities. Time integrals use the composite trapezoid rule over stored
//! snapshots and are accumulated in Fourier space.

use crate::biot_savart::{cutoff_kernel, is_compact, serfati_tail};
use crate::conv::{Convolver, Spectrum};
use crate::error::{Error, Result};
use crate::fields::{
    divergence, gradient, hessian, Grid, RadialCutoff, ScalarField, Trajectory, UInfinityPath,
    VectorField,
};
use num_complex::Complex64;
use std::fmt::Write as _;

/// Products `u1 u1`, `u1 u2`, `u2 u2`, each less its mean over the outer
/// annulus of the box.
pub fn centred_flux(u: &VectorField) -> [Vec<f64>; 3] {
    let (x, y) = (u.xs(), u.ys());
    let outer = u.grid().outer_annulus_indices();
    let centre = |v: Vec<f64>| {
        let m = outer.iter().map(|&k| v[k]).sum::<f64>() / outer.len().max(1) as f64;
        v.into_iter().map(|a| a - m).collect()
    };
    [
        centre(x.iter().map(|a| a * a).collect()),
        centre(x.iter().zip(y).map(|(a, b)| a * b).collect()),
        centre(y.iter().map(|b| b * b).collect()),
    ]
}

/// Fourier-space running integral `int_0^t (u ⊗ u) ds`.
#[derive(Debug, Clone)]
pub struct FluxIntegral {
    pub t: f64,
    acc: [Spectrum; 3],
    last: [Spectrum; 3],
}

/// Cached kernels of the identity for one grid and cutoff.
#[derive(Debug)]
pub struct SerfatiOperator {
    conv: Convolver,
    cutoff: RadialCutoff,
    near: Spectrum,
    tail: [Spectrum; 3],
}

impl SerfatiOperator {
    pub fn new(grid: Grid, cutoff: RadialCutoff) -> Result<Self> {
        RadialCutoff::new(cutoff.profile, cutoff.scale)?;
        let conv = Convolver::new(grid);
        let near = conv.kernel_spectrum(
            |x| {
                let k = cutoff_kernel(&cutoff, x);
                Complex64::new(k[0], k[1])
            },
            Complex64::default(),
        );
        // symmetric data: the 12 and 21 products share one kernel
        let pick = |f: fn(&[[[f64; 2]; 2]; 2], usize) -> f64| {
            conv.kernel_spectrum(
                |x| {
                    let t = serfati_tail(&cutoff, x);
                    Complex64::new(f(&t, 0), f(&t, 1))
                },
                Complex64::default(),
            )
        };
        let tail = [
            pick(|t, j| t[0][0][j]),
            pick(|t, j| t[0][1][j] + t[1][0][j]),
            pick(|t, j| t[1][1][j]),
        ];
        Ok(Self {
            conv,
            cutoff,
            near,
            tail,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.conv.grid()
    }

    pub fn cutoff(&self) -> &RadialCutoff {
        &self.cutoff
    }

    pub fn flux_spectra(&self, u: &VectorField) -> [Spectrum; 3] {
        centred_flux(u).map(|c| self.conv.data_spectrum(&c, None))
    }

    /// Empty integral anchored at the initial velocity.
    pub fn start(&self, u0: &VectorField) -> FluxIntegral {
        let m = self.conv.padded_size();
        FluxIntegral {
            t: 0.0,
            acc: std::array::from_fn(|_| vec![Complex64::default(); m * m]),
            last: self.flux_spectra(u0),
        }
    }

    /// The integral extended by one trapezoid panel ending at `u` after
    /// `dt`.
    pub fn extend(&self, from: &FluxIntegral, dt: f64, u: &VectorField) -> FluxIntegral {
        let next = self.flux_spectra(u);
        let w = 0.5 * dt;
        let acc = std::array::from_fn(|c| {
            from.acc[c]
                .iter()
                .zip(&from.last[c])
                .zip(&next[c])
                .map(|((a, p), q)| a + (p + q) * w)
                .collect()
        });
        FluxIntegral {
            t: from.t + dt,
            acc,
            last: next,
        }
    }

    /// `(a K) * d_omega - int T *. (u ⊗ u)`.
    pub fn evaluate(&self, d_omega: &ScalarField, integral: &FluxIntegral) -> VectorField {
        let mut s = self.conv.data_spectrum(d_omega.values(), None);
        for (k, v) in s.iter_mut().enumerate() {
            let mut t = *v * self.near[k];
            for c in 0..3 {
                t -= self.tail[c][k] * integral.acc[c][k];
            }
            *v = t;
        }
        let (x, y) = self.conv.inverse(s);
        VectorField::from_raw(*self.grid(), x, y)
    }

    /// Right-hand side at every snapshot of the trajectory.
    pub fn series(&self, traj: &Trajectory) -> Result<Vec<VectorField>> {
        if traj.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        let snaps = traj.snapshots();
        let w0 = &snaps[0].omega;
        let mut integral = self.start(&snaps[0].u);
        let mut out = vec![VectorField::zeros(*self.grid())];
        for w in snaps.windows(2) {
            integral = self.extend(&integral, w[1].t - w[0].t, &w[1].u);
            out.push(self.evaluate(&w[1].omega.sub(w0)?, &integral));
        }
        Ok(out)
    }
}

fn check_snapshots(traj: &Trajectory, k: usize) -> Result<()> {
    if k == 0 || k >= 2 {
        return Ok(());
    }
    let s = traj.snapshots();
    let change = s[1].u.sub(&s[0].u)?.sup_norm();
    if change > 1e-12 * (1.0 + s[0].u.sup_norm()) {
        return Err(Error::InsufficientSnapshots(format!(
            "time quadrature on [0, {}] needs at least 3 snapshots for an unsteady flow",
            s[k].t
        )));
    }
    Ok(())
}

fn check_scale(traj: &Trajectory, a: &RadialCutoff) -> Result<()> {
    let g = traj.grid();
    let d = traj.last().omega.sub(&traj.initial().omega)?;
    if !is_compact(&d) && g.probe_half_width() + a.support_radius() > g.half_width() {
        return Err(Error::DomainCoverage {
            scale: a.scale,
            required: g.probe_half_width() + a.support_radius(),
            half_width: g.half_width(),
        });
    }
    Ok(())
}

/// `(a K) * (omega(t) - omega0) - int_0^t T *. (u ⊗ u) ds` at snapshot time
/// `t`. The identity predicts this equals `u(t) - u0 - U(t)`.
pub fn serfati_rhs(traj: &Trajectory, t: f64, a: &RadialCutoff) -> Result<VectorField> {
    let k = traj.index_of(t)?;
    check_snapshots(traj, k)?;
    let sub = traj.truncated(traj.snapshots()[k].t);
    check_scale(&sub, a)?;
    let op = SerfatiOperator::new(*traj.grid(), *a)?;
    Ok(op.series(&sub)?.pop().expect("non-empty"))
}

/// Probe-box mean and standard deviation of a vector field.
pub fn probe_statistics(f: &VectorField) -> ([f64; 2], f64) {
    let probe = f.grid().probe_indices();
    let mean = f.mean_on(&probe);
    let var = probe
        .iter()
        .map(|&k| {
            let v = f.get(k);
            (v[0] - mean[0]).powi(2) + (v[1] - mean[1]).powi(2)
        })
        .sum::<f64>()
        / probe.len() as f64;
    (mean, var.sqrt())
}

/// Result of [`extract_uinfty`].
#[derive(Debug, Clone, PartialEq)]
pub struct UInfinityEstimate {
    pub path: UInfinityPath,
    /// Probe-box standard deviation of the bracket at each snapshot.
    pub deviations: Vec<f64>,
    pub tolerance: f64,
    /// Set when some deviation exceeds the tolerance.
    pub warning: Option<String>,
}

/// Default x-independence tolerance, relative to `1 + sup|u0|`.
pub const DEVIATION_TOLERANCE: f64 = 1e-2;

/// `U(t)` as the probe-box mean of `u(t) - u0 - serfati_rhs(t)`.
pub fn extract_uinfty(traj: &Trajectory, a: &RadialCutoff) -> Result<UInfinityEstimate> {
    extract_uinfty_with(traj, a, DEVIATION_TOLERANCE)
}

pub fn extract_uinfty_with(
    traj: &Trajectory,
    a: &RadialCutoff,
    tolerance: f64,
) -> Result<UInfinityEstimate> {
    check_snapshots(traj, traj.len() - 1)?;
    check_scale(traj, a)?;
    let op = SerfatiOperator::new(*traj.grid(), *a)?;
    let rhs = op.series(traj)?;
    let u0 = &traj.initial().u;
    let mut values = vec![[0.0, 0.0]];
    let mut deviations = vec![0.0];
    for (s, r) in traj.snapshots().iter().zip(&rhs).skip(1) {
        let bracket = s.u.sub(u0)?.sub(r)?;
        let (mean, dev) = probe_statistics(&bracket);
        values.push(mean);
        deviations.push(dev);
    }
    let path = UInfinityPath::new(traj.times(), values)?;
    let limit = tolerance * (1.0 + u0.sup_norm());
    let warning = deviations
        .iter()
        .zip(traj.times())
        .find(|(d, _)| **d > limit)
        .map(|(d, t)| format!("bracket varies in x at t = {t}: deviation {d:e} > {limit:e}"));
    Ok(UInfinityEstimate {
        path,
        deviations,
        tolerance: limit,
        warning,
    })
}

/// Residual `u(t) - u0 - U(t) - serfati_rhs(t)` at every snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SerfatiResidual {
    pub cutoff: RadialCutoff,
    pub uinf: UInfinityPath,
    pub times: Vec<f64>,
    pub fields: Vec<VectorField>,
    /// Probe-box sup of each residual field.
    pub sup: Vec<f64>,
    pub mean: Vec<[f64; 2]>,
    pub deviation: Vec<f64>,
}

impl SerfatiResidual {
    pub fn max_sup(&self) -> f64 {
        self.sup.iter().copied().fold(0.0, f64::max)
    }

    /// Rows `time sup mean_x mean_y deviation`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# cutoff {}", self.cutoff);
        if let Some(f) = self.fields.first() {
            let g = f.grid();
            let _ = writeln!(s, "# grid N={} L={}", g.n(), g.half_width());
        }
        let _ = writeln!(s, "# time sup mean_x mean_y deviation");
        for k in 0..self.times.len() {
            let _ = writeln!(
                s,
                "{} {:e} {:e} {:e} {:e}",
                self.times[k], self.sup[k], self.mean[k][0], self.mean[k][1], self.deviation[k]
            );
        }
        s
    }
}

/// Residual of the identity with a given path (usually the trajectory's).
pub fn serfati_residual(
    traj: &Trajectory,
    a: &RadialCutoff,
    uinf: &UInfinityPath,
) -> Result<SerfatiResidual> {
    check_snapshots(traj, traj.len() - 1)?;
    check_scale(traj, a)?;
    let op = SerfatiOperator::new(*traj.grid(), *a)?;
    let rhs = op.series(traj)?;
    let u0 = &traj.initial().u;
    let probe = traj.grid().probe_indices();
    let mut out = SerfatiResidual {
        cutoff: *a,
        uinf: uinf.clone(),
        times: traj.times(),
        fields: vec![],
        sup: vec![],
        mean: vec![],
        deviation: vec![],
    };
    for (s, r) in traj.snapshots().iter().zip(&rhs) {
        let res = s.u.sub(u0)?.sub(r)?.shift({
            let v = uinf.eval(s.t);
            [-v[0], -v[1]]
        });
        let (mean, dev) = probe_statistics(&res);
        out.sup.push(res.sup_on(&probe));
        out.mean.push(mean);
        out.deviation.push(dev);
        out.fields.push(res);
    }
    Ok(out)
}

/// Probe-box sup of `serfati_rhs(a) - serfati_rhs(b)` at time `t`.
pub fn cutoff_independence(
    traj: &Trajectory,
    t: f64,
    a: &RadialCutoff,
    b: &RadialCutoff,
) -> Result<f64> {
    if a == b {
        serfati_rhs(traj, t, a)?;
        return Ok(0.0);
    }
    let ra = serfati_rhs(traj, t, a)?;
    let rb = serfati_rhs(traj, t, b)?;
    Ok(ra.sub(&rb)?.sup_on(&traj.grid().probe_indices()))
}

fn check_test_support(f: &ScalarField) -> Result<()> {
    if !is_compact(f) {
        return Err(Error::SupportViolation(
            "test function touches the grid edge".into(),
        ));
    }
    Ok(())
}

/// `sup_probe | h * (omega(t) - omega0) + int_0^t (grad grad^perp h) *. (u ⊗ u) ds |`
/// with second derivatives of `h` by finite differences.
pub fn gamma_identity_residual(h: &ScalarField, traj: &Trajectory, t: f64) -> Result<f64> {
    check_test_support(h)?;
    if h.grid() != traj.grid() {
        return Err(Error::GridMismatch);
    }
    let k = traj.index_of(t)?;
    let conv = Convolver::new(*h.grid());
    let [h11, h12, h22] = hessian(h);
    // d_k (grad^perp)_l h for the products 11, 12 (+21), 22
    let kern = [
        conv.field_kernel_spectrum(&h12.scale(-1.0).into_values()),
        conv.field_kernel_spectrum(&h11.sub(&h22)?.into_values()),
        conv.field_kernel_spectrum(h12.values()),
    ];
    let snaps = &traj.snapshots()[..=k];
    let m = conv.padded_size();
    let mut acc: [Spectrum; 3] = std::array::from_fn(|_| vec![Complex64::default(); m * m]);
    for w in snaps.windows(2) {
        let dt = 0.5 * (w[1].t - w[0].t);
        for s in [&w[0], &w[1]] {
            for (c, data) in centred_flux(&s.u).iter().enumerate() {
                let f = conv.data_spectrum(data, None);
                for (a, b) in acc[c].iter_mut().zip(f) {
                    *a += b * dt;
                }
            }
        }
    }
    let hk = conv.field_kernel_spectrum(h.values());
    let dw = snaps[k].omega.sub(&snaps[0].omega)?;
    let mut s = conv.data_spectrum(dw.values(), None);
    for (i, v) in s.iter_mut().enumerate() {
        let mut t = *v * hk[i];
        for c in 0..3 {
            t += kern[c][i] * acc[c][i];
        }
        *v = t;
    }
    let (re, _) = conv.inverse(s);
    let r = ScalarField::from_raw(*h.grid(), re);
    Ok(r.sup_on(&h.grid().probe_indices()))
}

/// `sup_probe | grad f *. v - f * div v |`, derivatives by finite
/// differences.
pub fn stardot_identity_check(f: &ScalarField, v: &VectorField) -> Result<f64> {
    check_test_support(f)?;
    if f.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    let conv = Convolver::new(*f.grid());
    let g = gradient(f);
    let k1 = conv.field_kernel_spectrum(g.xs());
    let k2 = conv.field_kernel_spectrum(g.ys());
    let kf = conv.field_kernel_spectrum(f.values());
    let s1 = conv.data_spectrum(v.xs(), None);
    let s2 = conv.data_spectrum(v.ys(), None);
    let sd = conv.data_spectrum(divergence(v).values(), None);
    let s: Spectrum = (0..s1.len())
        .map(|i| k1[i] * s1[i] + k2[i] * s2[i] - kf[i] * sd[i])
        .collect();
    let (re, _) = conv.inverse(s);
    Ok(ScalarField::from_raw(*f.grid(), re).sup_on(&f.grid().probe_indices()))
}
