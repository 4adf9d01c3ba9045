//! Biot-Savart evaluation: the classical law for compact vorticity, cutoff
//! convolutions `(a_R K) * omega`, their renormalized limit as `R` grows,
//! and the identity-side operator `curl(a_R K) * u`.
//!
//! All sums are the node quadrature `sum_y k(x - y) f(y) h^2` with the
//! singular cell dropped (the kernel is odd, so its average over a centred
//! cell is zero). Data are treated as zero outside the grid box.

pub mod bounds;
mod kernel;

pub use bounds::{verify_kernel_bounds, BoundRow, KernelBoundReport};
pub use kernel::{
    cutoff_curl_correction, cutoff_kernel, perp, serfati_tail, tail_hessian, tail_hessian_perp,
    KernelEval,
};

use crate::conv::{Convolver, Spectrum};
use crate::error::{Error, Result};
use crate::fields::{CutoffProfile, Grid, RadialCutoff, ScalarField, VectorField};
use num_complex::Complex64;
use std::fmt::Write as _;

/// Relative magnitude below which edge values count as "no mass".
pub const EDGE_TOLERANCE: f64 = 1e-10;

/// Cells next to the edge checked for truncated mass.
pub const EDGE_CELLS: usize = 2;

/// True when the field has no mass within [`EDGE_CELLS`] of the edge.
pub fn is_compact(f: &ScalarField) -> bool {
    f.edge_magnitude(EDGE_CELLS) <= EDGE_TOLERANCE * f.sup_norm()
}

fn vector_is_compact(u: &VectorField) -> bool {
    let (a, b) = u.components();
    is_compact(&a) && is_compact(&b)
}

/// Radius of the smallest origin-centred disk containing every node where
/// `|f|` exceeds `EDGE_TOLERANCE * sup|f|`.
pub fn support_radius(f: &ScalarField) -> f64 {
    let cut = EDGE_TOLERANCE * f.sup_norm();
    let g = f.grid();
    f.values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > cut)
        .map(|(k, _)| {
            let [x, y] = g.point_of(k);
            x.hypot(y)
        })
        .fold(0.0, f64::max)
}

fn check_coverage(grid: &Grid, a: &RadialCutoff, compact: bool) -> Result<()> {
    if compact {
        return Ok(());
    }
    let required = grid.probe_half_width() + a.support_radius();
    if required > grid.half_width() * (1.0 + 1e-12) {
        return Err(Error::DomainCoverage {
            scale: a.scale,
            required,
            half_width: grid.half_width(),
        });
    }
    Ok(())
}

/// Cached FFT machinery for Biot-Savart sums on one grid.
#[derive(Debug)]
pub struct BiotSavart {
    conv: Convolver,
    classical: Spectrum,
}

impl BiotSavart {
    pub fn new(grid: Grid) -> Self {
        let conv = Convolver::new(grid);
        let classical = conv.kernel_spectrum(
            |x| {
                let k = KernelEval::eval(x);
                Complex64::new(k[0], k[1])
            },
            Complex64::default(),
        );
        Self { conv, classical }
    }

    pub fn grid(&self) -> &Grid {
        self.conv.grid()
    }

    pub fn convolver(&self) -> &Convolver {
        &self.conv
    }

    /// Spectrum of `a_R K^1 + i a_R K^2`.
    pub fn cutoff_spectrum(&self, a: &RadialCutoff) -> Spectrum {
        self.conv.kernel_spectrum(
            |x| {
                let k = cutoff_kernel(a, x);
                Complex64::new(k[0], k[1])
            },
            Complex64::default(),
        )
    }

    /// Spectrum of the scalar `grad^perp a_R . K`.
    pub fn correction_spectrum(&self, a: &RadialCutoff) -> Spectrum {
        self.conv.kernel_spectrum(
            |x| Complex64::new(cutoff_curl_correction(a, x), 0.0),
            Complex64::default(),
        )
    }

    /// Convolve a scalar with a packed vector kernel spectrum.
    pub fn apply(&self, kernel: &Spectrum, omega: &ScalarField) -> VectorField {
        let (x, y) = self.conv.convolve(kernel, omega.values(), None);
        VectorField::from_raw(*self.grid(), x, y)
    }

    /// `K * omega` without any truncation checks.
    pub fn classical(&self, omega: &ScalarField) -> VectorField {
        self.apply(&self.classical, omega)
    }

    /// `(a_R K) * omega` without coverage checks.
    pub fn cutoff(&self, omega: &ScalarField, a: &RadialCutoff) -> VectorField {
        self.apply(&self.cutoff_spectrum(a), omega)
    }

    /// `u + (grad^perp a_R . K) * u` without coverage checks.
    pub fn curl_kernel(&self, u: &VectorField, a: &RadialCutoff) -> VectorField {
        let g = self.correction_spectrum(a);
        let (cx, cy) = self.conv.convolve(&g, u.xs(), Some(u.ys()));
        let x = u.xs().iter().zip(cx).map(|(a, b)| a + b).collect();
        let y = u.ys().iter().zip(cy).map(|(a, b)| a + b).collect();
        VectorField::from_raw(*self.grid(), x, y)
    }
}

/// Classical law `u = K * omega` for compactly supported vorticity.
///
/// Fails with [`Error::Truncation`] if `omega` has mass within two cells of
/// the grid edge, and with [`Error::SupportViolation`] if a declared support
/// radius is exceeded.
pub fn classical_bs(omega: &ScalarField, support: Option<f64>) -> Result<VectorField> {
    let edge = omega.edge_magnitude(EDGE_CELLS);
    if edge > EDGE_TOLERANCE * omega.sup_norm() {
        return Err(Error::Truncation {
            cells: EDGE_CELLS,
            magnitude: edge,
        });
    }
    if let Some(r) = support {
        let actual = support_radius(omega);
        if actual > r + omega.grid().spacing() * 1e-9 {
            return Err(Error::SupportViolation(format!(
                "vorticity extends to radius {actual}, declared support {r}"
            )));
        }
    }
    Ok(BiotSavart::new(*omega.grid()).classical(omega))
}

/// `(a_R K) * omega` with `a_R(x) = profile(|x| / R)`.
///
/// Compact data give the exact discrete sum for any `R`. Otherwise the
/// cutoff must fit around the probe box: `L/4 + r1 R <= L`.
pub fn cutoff_convolve(omega: &ScalarField, profile: &CutoffProfile, r: f64) -> Result<VectorField> {
    let a = RadialCutoff::new(*profile, r)?;
    check_coverage(omega.grid(), &a, is_compact(omega))?;
    Ok(BiotSavart::new(*omega.grid()).cutoff(omega, &a))
}

/// `curl(a_R K) * u = u + (grad^perp a_R . K) * u`.
pub fn curl_kernel_convolve(u: &VectorField, profile: &CutoffProfile, r: f64) -> Result<VectorField> {
    let a = RadialCutoff::new(*profile, r)?;
    check_coverage(u.grid(), &a, vector_is_compact(u))?;
    Ok(BiotSavart::new(*u.grid()).curl_kernel(u, &a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenormalizeOptions {
    /// Cauchy tolerance, relative to the probe-box sup of the iterate.
    pub tolerance: f64,
    /// Known support radius of the input; detected from the data if `None`
    /// and `detect_support` is set.
    pub support_radius: Option<f64>,
    pub detect_support: bool,
    /// Lower bound for the velocity scale the tolerance is relative to.
    pub scale_floor: f64,
}

impl Default for RenormalizeOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            support_radius: None,
            detect_support: true,
            scale_floor: f64::MIN_POSITIVE,
        }
    }
}

/// History of a renormalized Biot-Savart evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub profile: CutoffProfile,
    pub grid: Grid,
    pub tolerance: f64,
    /// Scales actually evaluated.
    pub schedule: Vec<f64>,
    /// Probe-box sup distance to the previous scale (`NaN` for the first).
    pub sup_differences: Vec<f64>,
    /// Probe-box mean of each iterate.
    pub probe_means: Vec<[f64; 2]>,
    pub converged: bool,
    pub converged_at: Option<usize>,
    /// Convergence was certified because the cutoff is identically one on
    /// every probe-to-support distance.
    pub exact_from_support: bool,
}

impl ConvergenceReport {
    pub fn last_difference(&self) -> f64 {
        self.sup_differences.last().copied().unwrap_or(f64::NAN)
    }

    /// Rows `R sup_diff mean_x mean_y` after a commented header.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# cutoff {}", self.profile);
        let _ = writeln!(
            s,
            "# grid N={} L={} tolerance={:e}",
            self.grid.n(),
            self.grid.half_width(),
            self.tolerance
        );
        let _ = writeln!(
            s,
            "# converged={} at={} exact_from_support={}",
            self.converged,
            self.converged_at.map_or("-".to_string(), |k| self.schedule[k].to_string()),
            self.exact_from_support
        );
        let _ = writeln!(s, "# R sup_diff probe_mean_x probe_mean_y");
        for k in 0..self.schedule.len() {
            let _ = writeln!(
                s,
                "{} {:e} {:e} {:e}",
                self.schedule[k], self.sup_differences[k], self.probe_means[k][0], self.probe_means[k][1]
            );
        }
        s
    }

    pub fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Renormalization {
                last_difference: self.last_difference(),
            })
        }
    }
}

/// Evaluate `(a_R K) * d_omega` along an increasing schedule of scales and
/// judge convergence on the probe box.
///
/// Non-convergence is reported (`converged = false`), not raised.
pub fn renormalized_bs(
    d_omega: &ScalarField,
    profile: &CutoffProfile,
    schedule: &[f64],
    opts: &RenormalizeOptions,
) -> Result<(VectorField, ConvergenceReport)> {
    let bs = BiotSavart::new(*d_omega.grid());
    renormalized_with(&bs, d_omega, profile, schedule, opts)
}

/// [`renormalized_bs`] reusing a cached operator.
pub fn renormalized_with(
    bs: &BiotSavart,
    d_omega: &ScalarField,
    profile: &CutoffProfile,
    schedule: &[f64],
    opts: &RenormalizeOptions,
) -> Result<(VectorField, ConvergenceReport)> {
    if schedule.is_empty() {
        return Err(Error::Config("empty scale schedule".into()));
    }
    if schedule.windows(2).any(|w| !(w[1] > w[0])) || !(schedule[0] > 0.0) {
        return Err(Error::Config("scale schedule must be positive and increasing".into()));
    }
    if d_omega.grid() != bs.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *bs.grid();
    let compact = is_compact(d_omega);
    let support = match opts.support_radius {
        Some(r) => Some(r),
        None if opts.detect_support && compact => Some(support_radius(d_omega)),
        None => None,
    };
    let probe = grid.probe_indices();
    let probe_radius = std::f64::consts::SQRT_2 * grid.probe_half_width();

    let mut report = ConvergenceReport {
        profile: *profile,
        grid,
        tolerance: opts.tolerance,
        schedule: vec![],
        sup_differences: vec![],
        probe_means: vec![],
        converged: false,
        converged_at: None,
        exact_from_support: false,
    };
    let mut prev: Option<VectorField> = None;
    for &r in schedule {
        let a = RadialCutoff::new(*profile, r)?;
        check_coverage(&grid, &a, compact)?;
        let u = bs.cutoff(d_omega, &a);
        let diff = match &prev {
            Some(p) => u.sub(p)?.sup_on(&probe),
            None => f64::NAN,
        };
        report.schedule.push(r);
        report.sup_differences.push(diff);
        report.probe_means.push(u.mean_on(&probe));
        let k = report.schedule.len() - 1;
        let exact = support.is_some_and(|s| a.plateau_radius() >= probe_radius + s);
        let scale = u.sup_on(&probe);
        let cauchy = diff.is_finite() && diff <= opts.tolerance * scale.max(opts.scale_floor);
        if exact || cauchy || scale == 0.0 && d_omega.sup_norm() == 0.0 {
            report.converged = true;
            report.converged_at = Some(k);
            report.exact_from_support = exact;
            return Ok((u, report));
        }
        prev = Some(u);
    }
    Ok((prev.expect("non-empty schedule"), report))
}
