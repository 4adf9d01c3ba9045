//! Zero-padded FFT convolution on a uniform grid.
//!
//! Computes the discrete sums `out(x_i) = sum_j k(x_i - y_j) f(y_j) h^2`
//! exactly (up to rounding) by circular convolution on a `2N x 2N` padded
//! grid. The kernel is sampled on every offset `d h` with
//! `|d_1|, |d_2| <= N - 1`, so no wrap-around reaches the output block.
//! `direct_convolve` is the O(N^4) reference for the same sum.

use crate::fields::Grid;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

pub type Spectrum = Vec<Complex64>;

pub struct Convolver {
    grid: Grid,
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Convolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Convolver")
            .field("grid", &self.grid)
            .field("padded", &self.m)
            .finish()
    }
}

fn transpose(data: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            data.swap(i * m + j, j * m + i);
        }
    }
}

impl Convolver {
    pub fn new(grid: Grid) -> Self {
        let m = 2 * grid.n();
        let mut planner = FftPlanner::new();
        Self {
            grid,
            m,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }

    /// Unpadded transforms on the `N x N` box, for data periodic over it.
    /// Kernel spectra from this plan wrap around.
    pub fn periodic(grid: Grid) -> Self {
        let m = grid.n();
        let mut planner = FftPlanner::new();
        Self {
            grid,
            m,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn padded_size(&self) -> usize {
        self.m
    }

    fn fft2(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, self.m);
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, self.m);
    }

    /// Spectrum of a (possibly complex) kernel sampled at grid offsets,
    /// including the `h^2` quadrature weight. `at_zero` is the value used for
    /// the singular cell.
    pub fn kernel_spectrum(
        &self,
        kernel: impl Fn([f64; 2]) -> Complex64,
        at_zero: Complex64,
    ) -> Spectrum {
        let n = self.grid.n() as isize;
        let m = self.m;
        let h = self.grid.spacing();
        let w = h * h;
        let mut data = vec![Complex64::default(); m * m];
        for dj in -(n - 1)..n {
            let row = dj.rem_euclid(m as isize) as usize * m;
            for di in -(n - 1)..n {
                let v = if di == 0 && dj == 0 {
                    at_zero
                } else {
                    kernel([di as f64 * h, dj as f64 * h])
                };
                data[row + di.rem_euclid(m as isize) as usize] = v * w;
            }
        }
        self.fft2(&mut data, &self.forward);
        data
    }

    /// Spectrum of a real kernel given by its own node samples: node `x`
    /// supplies the value at offset `x`, and the kernel vanishes outside
    /// the box. Includes the `h^2` weight.
    pub fn field_kernel_spectrum(&self, values: &[f64]) -> Spectrum {
        let n = self.grid.n();
        let m = self.m;
        let half = (n / 2) as isize;
        let w = self.grid.spacing().powi(2);
        let mut data = vec![Complex64::default(); m * m];
        for j in 0..n {
            let dj = (j as isize - half).rem_euclid(m as isize) as usize;
            for i in 0..n {
                let di = (i as isize - half).rem_euclid(m as isize) as usize;
                data[dj * m + di] = Complex64::new(values[self.grid.index(i, j)] * w, 0.0);
            }
        }
        self.fft2(&mut data, &self.forward);
        data
    }

    /// Spectrum of grid data `re + i im`, zero-padded.
    pub fn data_spectrum(&self, re: &[f64], im: Option<&[f64]>) -> Spectrum {
        let n = self.grid.n();
        let m = self.m;
        let mut data = vec![Complex64::default(); m * m];
        for j in 0..n {
            for i in 0..n {
                let k = self.grid.index(i, j);
                data[j * m + i] = Complex64::new(re[k], im.map_or(0.0, |v| v[k]));
            }
        }
        self.fft2(&mut data, &self.forward);
        data
    }

    /// Inverse transform, returning real and imaginary parts on the grid.
    pub fn inverse(&self, mut spec: Spectrum) -> (Vec<f64>, Vec<f64>) {
        self.fft2(&mut spec, &self.inverse);
        let n = self.grid.n();
        let m = self.m;
        let scale = 1.0 / (m * m) as f64;
        let mut re = vec![0.0; n * n];
        let mut im = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                let v = spec[j * m + i] * scale;
                let k = self.grid.index(i, j);
                re[k] = v.re;
                im[k] = v.im;
            }
        }
        (re, im)
    }

    /// Convolve `re + i im` with the kernel; result real and imaginary parts.
    pub fn convolve(
        &self,
        kernel: &Spectrum,
        re: &[f64],
        im: Option<&[f64]>,
    ) -> (Vec<f64>, Vec<f64>) {
        let mut s = self.data_spectrum(re, im);
        for (a, b) in s.iter_mut().zip(kernel) {
            *a *= *b;
        }
        self.inverse(s)
    }

    /// Angular wavenumbers of the padded periodic box along one axis.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let m = self.m as isize;
        let length = self.m as f64 * self.grid.spacing();
        (0..m)
            .map(|k| {
                let s = if k <= m / 2 { k } else { k - m };
                2.0 * PI * s as f64 / length
            })
            .collect()
    }
}

/// O(N^4) reference for `Convolver::convolve` with the same kernel rule.
pub fn direct_convolve(
    grid: &Grid,
    kernel: impl Fn([f64; 2]) -> Complex64,
    at_zero: Complex64,
    data: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let h = grid.spacing();
    let w = h * h;
    let n = grid.n();
    let mut re = vec![0.0; grid.len()];
    let mut im = vec![0.0; grid.len()];
    for jx in 0..n {
        for ix in 0..n {
            let mut acc = Complex64::default();
            for jy in 0..n {
                for iy in 0..n {
                    let f = data[grid.index(iy, jy)];
                    if f == 0.0 {
                        continue;
                    }
                    let di = ix as isize - iy as isize;
                    let dj = jx as isize - jy as isize;
                    let k = if di == 0 && dj == 0 {
                        at_zero
                    } else {
                        kernel([di as f64 * h, dj as f64 * h])
                    };
                    acc += k * f;
                }
            }
            let k = grid.index(ix, jx);
            re[k] = acc.re * w;
            im[k] = acc.im * w;
        }
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_matches_direct_sum() {
        let g = Grid::new(12, 1.5).unwrap();
        let data: Vec<f64> = (0..g.len())
            .map(|k| {
                let [x, y] = g.point_of(k);
                (-(x * x + 2.0 * y * y)).exp() + 0.1 * x
            })
            .collect();
        let kernel = |x: [f64; 2]| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            Complex64::new(-x[1] / r2, x[0] / r2)
        };
        let c = Convolver::new(g);
        let spec = c.kernel_spectrum(kernel, Complex64::default());
        let (fr, fi) = c.convolve(&spec, &data, None);
        let (dr, di) = direct_convolve(&g, kernel, Complex64::default(), &data);
        let scale = dr.iter().chain(&di).fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..g.len() {
            assert!((fr[k] - dr[k]).abs() <= 1e-12 * scale);
            assert!((fi[k] - di[k]).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn field_kernel_matches_function_kernel() {
        let g = Grid::new(16, 2.0).unwrap();
        let bump = |x: [f64; 2]| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            if r2 < 1.0 { (1.0 - r2).powi(3) } else { 0.0 }
        };
        let samples: Vec<f64> = (0..g.len()).map(|k| bump(g.point_of(k))).collect();
        let c = Convolver::new(g);
        let a = c.field_kernel_spectrum(&samples);
        let b = c.kernel_spectrum(|x| Complex64::new(bump(x), 0.0), Complex64::new(1.0, 0.0));
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_kernel_is_identity() {
        let g = Grid::new(8, 1.0).unwrap();
        let h2 = g.spacing().powi(2);
        let c = Convolver::new(g);
        let spec = c.kernel_spectrum(|_| Complex64::default(), Complex64::new(1.0 / h2, 0.0));
        let data: Vec<f64> = (0..g.len()).map(|k| k as f64).collect();
        let (re, im) = c.convolve(&spec, &data, Some(&data));
        for k in 0..g.len() {
            assert!((re[k] - data[k]).abs() < 1e-10);
            assert!((im[k] - data[k]).abs() < 1e-10);
        }
    }
}
