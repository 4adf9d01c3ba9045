use super::s_norm;
use crate::biot_savart::BiotSavart;
use crate::conv::Convolver;
use crate::error::{Error, Result};
use crate::fields::{curl, CutoffProfile, RadialCutoff, ScalarField, VectorField};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifyOptions {
    /// Cutoff radius per unit of `n`.
    pub radius_per_n: f64,
    pub profile: CutoffProfile,
}

impl Default for MollifyOptions {
    fn default() -> Self {
        Self {
            radius_per_n: 1.0,
            profile: CutoffProfile::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mollified {
    pub omega: ScalarField,
    pub u: VectorField,
    /// Gaussian width actually used.
    pub width: f64,
    /// Cutoff actually used, after clamping into the box.
    pub cutoff: RadialCutoff,
    /// `||u_n||_S / ||u0||_S`.
    pub norm_ratio: f64,
}

/// Gaussian convolution with discrete unit mass.
fn gaussian_smooth(conv: &Convolver, f: &ScalarField, sigma: f64) -> ScalarField {
    let g = *f.grid();
    let h = g.spacing();
    let n = g.n() as isize;
    let line: f64 = (-(n - 1)..n)
        .map(|d| (-((d as f64 * h) / sigma).powi(2) / 2.0).exp() * h)
        .sum();
    let norm = 1.0 / (line * line);
    let k = conv.kernel_spectrum(
        |[x, y]| Complex64::new(norm * (-(x * x + y * y) / (2.0 * sigma * sigma)).exp(), 0.0),
        Complex64::new(norm, 0.0),
    );
    let (re, _) = conv.convolve(&k, f.values(), None);
    ScalarField::new(g, re).expect("finite")
}

/// Approximating datum `u_n` with compactly supported vorticity.
///
/// The vorticity of `u0` is smoothed by a Gaussian of width `max(1/n, h)`
/// and cut off at radius `radius_per_n * n` (clamped to fit the box); the
/// velocity is the classical law of the result plus the probe-box mean of
/// the remainder.
pub fn mollify_truncate(u0: &VectorField, n: usize, opts: &MollifyOptions) -> Result<Mollified> {
    if n == 0 {
        return Err(Error::Precondition("mollifier index n must be at least 1".into()));
    }
    opts.profile.validate()?;
    if !(opts.radius_per_n > 0.0) {
        return Err(Error::Config("cutoff radius per n must be positive".into()));
    }
    let g = *u0.grid();
    let h = g.spacing();
    let sigma = (1.0 / n as f64).max(h);
    let bs = BiotSavart::new(g);
    let smooth = gaussian_smooth(bs.convolver(), &curl(u0), sigma);

    let room = g.half_width() - 2.0 * h - 6.0 * sigma;
    let max_support = if room > 0.0 { room } else { g.half_width() - 2.0 * h };
    let wanted = RadialCutoff { profile: opts.profile, scale: opts.radius_per_n * n as f64 };
    let cutoff = if wanted.support_radius() > max_support {
        wanted.with_scale(max_support / opts.profile.outer())
    } else {
        wanted
    };
    let omega = smooth.multiply_by(|x| cutoff.value(x));
    let base = bs.classical(&omega);
    let probe = g.probe_indices();
    let shift = u0.sub(&base)?.mean_on(&probe);
    let u = base.shift(shift);
    let s0 = s_norm(u0);
    let norm_ratio = if s0 > 0.0 { s_norm(&u) / s0 } else { 0.0 };
    Ok(Mollified {
        omega,
        u,
        width: sigma,
        cutoff,
        norm_ratio,
    })
}
