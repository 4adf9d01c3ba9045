//! Scaling checks for integrals of the kernel against cutoff derivatives.
//!
//! Every integrand here is evaluated in polar coordinates around the
//! singularity: adaptive Gauss-Kronrod in the radius, the periodic
//! trapezoid rule in the angle.

use super::kernel::{tail_hessian, KernelEval};
use crate::error::{Error, Result};
use crate::fields::{CutoffProfile, RadialCutoff};
use crate::quad::integrate;
use std::f64::consts::PI;
use std::fmt::Write as _;

const ANGLES: usize = 512;
const SLOPE_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub name: String,
    pub scales: Vec<f64>,
    pub values: Vec<f64>,
    pub expected_slope: f64,
    pub fitted_slope: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelBoundReport {
    pub profile: CutoffProfile,
    pub rows: Vec<BoundRow>,
    /// `(eps, eps * ||grad grad [(1 - a_eps) K]||_1)`.
    pub tail_products: Vec<(f64, f64)>,
    pub tail_passed: bool,
    /// `max | |K(x)| |x| - 1/(2 pi) |` over sample points.
    pub kernel_radius_deviation: f64,
}

impl KernelBoundReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed) && self.tail_passed && self.kernel_radius_deviation < 1e-14
    }

    /// First failing bound as a named error.
    pub fn check(&self) -> Result<()> {
        if let Some(r) = self.rows.iter().find(|r| !r.passed) {
            return Err(Error::BoundViolation(format!(
                "{}: fitted slope {:.4}, expected {:.4}",
                r.name, r.fitted_slope, r.expected_slope
            )));
        }
        if !self.tail_passed {
            return Err(Error::BoundViolation(format!(
                "eps-scaled second-derivative tail not uniformly bounded: {:?}",
                self.tail_products
            )));
        }
        if self.kernel_radius_deviation >= 1e-14 {
            return Err(Error::BoundViolation(format!(
                "|K(x)||x| deviates from 1/(2 pi) by {:e}",
                self.kernel_radius_deviation
            )));
        }
        Ok(())
    }

    /// Rows `name expected fitted passed`, then tail products.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# cutoff {}", self.profile);
        let _ = writeln!(s, "# slope tolerance {SLOPE_TOLERANCE}");
        let _ = writeln!(s, "# bound expected_slope fitted_slope passed");
        for r in &self.rows {
            let _ = writeln!(s, "{} {} {:.6} {}", r.name, r.expected_slope, r.fitted_slope, r.passed);
        }
        let _ = writeln!(s, "# eps eps*tail_l1");
        for (e, p) in &self.tail_products {
            let _ = writeln!(s, "{e} {p:.10}");
        }
        let _ = writeln!(s, "# kernel_radius_deviation {:e}", self.kernel_radius_deviation);
        s
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// `int_{r0}^{r1} int_0^{2 pi} f(r, theta) r dtheta dr`.
fn polar_integral(f: impl Fn([f64; 2]) -> f64, r0: f64, r1: f64) -> f64 {
    let dt = 2.0 * PI / ANGLES as f64;
    integrate(
        |r| {
            let ring: f64 = (0..ANGLES)
                .map(|k| {
                    let t = (k as f64 + 0.5) * dt;
                    f([r * t.cos(), r * t.sin()])
                })
                .sum();
            ring * dt * r
        },
        r0,
        r1,
        0.0,
        1e-10,
        200,
    )
    .value
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// `D^alpha a_R` along `x_1` for `|alpha| in {1, 2}`.
fn cutoff_derivative(a: &RadialCutoff, x: [f64; 2], order: usize) -> f64 {
    let (_, g, h) = a.jet(x);
    match order {
        1 => g[0],
        _ => h[0],
    }
}

/// `D^beta K` along `x_1` for `|beta| in {0, 1, 2}`.
fn kernel_derivative(x: [f64; 2], order: usize) -> [f64; 2] {
    match order {
        0 => KernelEval::eval(x),
        1 => KernelEval::gradient(x)[0],
        _ => KernelEval::hessian(x)[0][0],
    }
}

/// `||D^alpha a_R D^beta K||_{L^1}` with `alpha`, `beta` along `x_1`.
pub fn product_l1(a: &RadialCutoff, alpha: usize, beta: usize) -> f64 {
    polar_integral(
        |x| {
            let d = cutoff_derivative(a, x, alpha);
            let k = kernel_derivative(x, beta);
            (d * norm(&k)).abs()
        },
        a.plateau_radius(),
        a.support_radius(),
    )
}

/// `||grad grad [(1 - a_eps) K]||_{L^1}`: the transition annulus by
/// quadrature, the region beyond it in closed form (the integrand is
/// `c / r^3` there, `c` independent of direction).
pub fn tail_l1(a: &RadialCutoff) -> f64 {
    let frob = |t: [[[f64; 2]; 2]; 2]| norm(&[
        t[0][0][0], t[0][0][1], t[0][1][0], t[0][1][1], t[1][0][0], t[1][0][1], t[1][1][0], t[1][1][1],
    ]);
    let annulus = polar_integral(|x| frob(tail_hessian(a, x)), a.plateau_radius(), a.support_radius());
    let c = frob(tail_hessian(&a.with_scale(1e-9), [1.0, 0.0]));
    annulus + 2.0 * PI * c / a.support_radius()
}

/// `int_{B(x, rho)} |K(x - y)|^p dy` for the worst-case disk of measure
/// `2 pi R^2`, i.e. radius `rho = sqrt(2) R` centred at the singularity.
pub fn rearrangement_integral(p: f64, r: f64) -> f64 {
    let rho = std::f64::consts::SQRT_2 * r;
    // r = rho e^{-s}; the integrand decays like e^{-(2-p)s}
    let s_max = 40.0 / (2.0 - p);
    integrate(
        |s| {
            let rr = rho * (-s).exp();
            let k = 1.0 / (2.0 * PI * rr);
            k.powf(p) * 2.0 * PI * rr * rr
        },
        0.0,
        s_max,
        0.0,
        1e-12,
        400,
    )
    .value
}

/// Fit scaling exponents of the kernel bounds.
///
/// `orders` lists `(|alpha|, |beta|)` pairs with `1 <= |alpha| <= 2` and
/// `|beta| <= 2`; `exponents` lists `p` values in `(1, 2)`.
pub fn verify_kernel_bounds(
    profile: &CutoffProfile,
    scales: &[f64],
    orders: &[(usize, usize)],
    exponents: &[f64],
) -> Result<KernelBoundReport> {
    profile.validate()?;
    if scales.len() < 2 || scales.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::Precondition("need at least two positive scales".into()));
    }
    let mut rows = vec![];
    for &(na, nb) in orders {
        if !(1..=2).contains(&na) || nb > 2 {
            return Err(Error::Precondition(format!(
                "unsupported derivative orders ({na}, {nb})"
            )));
        }
        let values: Vec<f64> = scales
            .iter()
            .map(|&r| product_l1(&RadialCutoff { profile: *profile, scale: r }, na, nb))
            .collect();
        let fitted = loglog_slope(scales, &values);
        let expected = 1.0 - na as f64 - nb as f64;
        rows.push(BoundRow {
            name: format!("cutoff-kernel(|a|={na},|b|={nb})"),
            scales: scales.to_vec(),
            values,
            expected_slope: expected,
            fitted_slope: fitted,
            passed: (fitted - expected).abs() <= SLOPE_TOLERANCE,
        });
    }
    for &p in exponents {
        if !(p >= 1.0 && p < 2.0) {
            return Err(Error::Precondition(format!("exponent p = {p} outside [1, 2)")));
        }
        let values: Vec<f64> = scales.iter().map(|&r| rearrangement_integral(p, r)).collect();
        let fitted = loglog_slope(scales, &values);
        let expected = 2.0 - p;
        rows.push(BoundRow {
            name: format!("rearrangement(p={p})"),
            scales: scales.to_vec(),
            values,
            expected_slope: expected,
            fitted_slope: fitted,
            passed: (fitted - expected).abs() <= SLOPE_TOLERANCE,
        });
    }
    let tail_products: Vec<(f64, f64)> = scales
        .iter()
        .map(|&e| (e, e * tail_l1(&RadialCutoff { profile: *profile, scale: e })))
        .collect();
    let (lo, hi) = tail_products
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, p)| (lo.min(p), hi.max(p)));
    let tail_passed = lo > 0.0 && hi / lo <= 2.0;

    let mut deviation: f64 = 0.0;
    for k in 0..64 {
        let t = 0.37 + k as f64 * 0.41;
        let r = 10f64.powf(-3.0 + 6.0 * k as f64 / 63.0);
        let x = [r * t.cos(), r * t.sin()];
        let v = KernelEval::eval(x);
        deviation = deviation.max((v[0].hypot(v[1]) * r - 1.0 / (2.0 * PI)).abs());
    }
    Ok(KernelBoundReport {
        profile: *profile,
        rows,
        tail_products,
        tail_passed,
        kernel_radius_deviation: deviation,
    })
}
