//! Tensor-product Lagrange interpolation of node samples.

use super::{Grid, ScalarField, VectorField};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    /// Four-point cubic Lagrange per axis; exact on bicubic polynomials.
    #[default]
    Bicubic,
    Bilinear,
}

impl Interpolation {
    fn width(self) -> usize {
        match self {
            Interpolation::Bicubic => 4,
            Interpolation::Bilinear => 2,
        }
    }
}

/// Precomputed stencil for one evaluation point.
#[derive(Debug, Clone, Copy)]
pub struct Stencil {
    bi: usize,
    bj: usize,
    width: usize,
    wx: [f64; 4],
    wy: [f64; 4],
}

impl Stencil {
    #[inline]
    pub fn apply(&self, grid: &Grid, values: &[f64]) -> f64 {
        let mut acc = 0.0;
        for b in 0..self.width {
            let row = grid.index(self.bi, self.bj + b);
            let mut r = 0.0;
            for a in 0..self.width {
                r += self.wx[a] * values[row + a];
            }
            acc += self.wy[b] * r;
        }
        acc
    }
}

fn axis_weights(s: f64, n: usize, order: Interpolation) -> (usize, [f64; 4]) {
    let width = order.width();
    let floor = s.floor().max(0.0) as usize;
    let mut w = [0.0; 4];
    match order {
        Interpolation::Bilinear => {
            let base = floor.min(n - 2);
            let t = s - base as f64;
            w[0] = 1.0 - t;
            w[1] = t;
            (base, w)
        }
        Interpolation::Bicubic => {
            let base = floor.saturating_sub(1).min(n - width);
            let t = s - base as f64;
            for (k, wk) in w.iter_mut().enumerate() {
                let mut p = 1.0;
                for m in 0..width {
                    if m != k {
                        p *= (t - m as f64) / (k as f64 - m as f64);
                    }
                }
                *wk = p;
            }
            (base, w)
        }
    }
}

/// The interpolable region: the grid box shrunk by one cell on each side.
pub fn interpolable(grid: &Grid, x: [f64; 2]) -> bool {
    let h = grid.spacing();
    let lo = -grid.half_width() + h;
    let hi = grid.half_width() - 2.0 * h;
    let tol = 1e-12 * grid.half_width();
    x.iter().all(|&c| c >= lo - tol && c <= hi + tol)
}

/// Clamp a point into the interpolable region.
pub fn clamp_to_interpolable(grid: &Grid, x: [f64; 2]) -> [f64; 2] {
    let h = grid.spacing();
    let lo = -grid.half_width() + h;
    let hi = grid.half_width() - 2.0 * h;
    [x[0].clamp(lo, hi), x[1].clamp(lo, hi)]
}

pub fn stencil(grid: &Grid, x: [f64; 2], order: Interpolation) -> Result<Stencil> {
    if !interpolable(grid, x) {
        return Err(Error::OutOfDomain { x: x[0], y: x[1] });
    }
    Ok(stencil_unchecked(grid, x, order))
}

/// Stencil for a point already known to be interpolable (or clamped).
pub fn stencil_unchecked(grid: &Grid, x: [f64; 2], order: Interpolation) -> Stencil {
    let h = grid.spacing();
    let l = grid.half_width();
    let (bi, wx) = axis_weights((x[0] + l) / h, grid.n(), order);
    let (bj, wy) = axis_weights((x[1] + l) / h, grid.n(), order);
    Stencil {
        bi,
        bj,
        width: order.width(),
        wx,
        wy,
    }
}

pub fn interpolate_scalar(f: &ScalarField, x: [f64; 2], order: Interpolation) -> Result<f64> {
    let s = stencil(f.grid(), x, order)?;
    Ok(s.apply(f.grid(), f.values()))
}

/// Off-node evaluation of a vector field.
pub fn interpolate(u: &VectorField, x: [f64; 2], order: Interpolation) -> Result<[f64; 2]> {
    let s = stencil(u.grid(), x, order)?;
    Ok([s.apply(u.grid(), u.xs()), s.apply(u.grid(), u.ys())])
}
