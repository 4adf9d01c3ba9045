//! The full-plane Biot-Savart kernel `K(x) = x^perp / (2 pi |x|^2)` and its
//! analytic derivatives, plus products with a radial cutoff.

use crate::fields::RadialCutoff;
use std::f64::consts::PI;

const J: [[f64; 2]; 2] = [[0.0, -1.0], [1.0, 0.0]];

/// Rotation by `+pi/2`: `v^perp = (-v_2, v_1)`.
#[inline]
pub fn perp(v: [f64; 2]) -> [f64; 2] {
    [-v[1], v[0]]
}

/// Stateless evaluator for `K` and its first two derivatives.
///
/// Index conventions: `gradient(x)[m][i] = d_m K^i`,
/// `hessian(x)[n][m][i] = d_n d_m K^i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct KernelEval;

impl KernelEval {
    #[inline]
    pub fn eval(x: [f64; 2]) -> [f64; 2] {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let c = 1.0 / (2.0 * PI * r2);
        [-x[1] * c, x[0] * c]
    }

    /// `K^perp = -x / (2 pi |x|^2)`, the gradient of `-log|x| / (2 pi)`.
    #[inline]
    pub fn eval_perp(x: [f64; 2]) -> [f64; 2] {
        perp(Self::eval(x))
    }

    pub fn gradient(x: [f64; 2]) -> [[f64; 2]; 2] {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let r4 = r2 * r2;
        let c = 1.0 / (2.0 * PI);
        let jx = [-x[1], x[0]];
        let mut g = [[0.0; 2]; 2];
        for (m, gm) in g.iter_mut().enumerate() {
            for (i, gmi) in gm.iter_mut().enumerate() {
                *gmi = c * (J[i][m] / r2 - 2.0 * jx[i] * x[m] / r4);
            }
        }
        g
    }

    pub fn hessian(x: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let r4 = r2 * r2;
        let r6 = r4 * r2;
        let c = 1.0 / (2.0 * PI);
        let jx = [-x[1], x[0]];
        let mut h = [[[0.0; 2]; 2]; 2];
        for n in 0..2 {
            for m in 0..2 {
                let dmn = if m == n { 1.0 } else { 0.0 };
                for i in 0..2 {
                    h[n][m][i] = c
                        * (-2.0 * J[i][m] * x[n] / r4 - 2.0 * J[i][n] * x[m] / r4
                            - 2.0 * jx[i] * dmn / r4
                            + 8.0 * jx[i] * x[m] * x[n] / r6);
                }
            }
        }
        h
    }
}

/// `a_R K`, zero at the origin.
#[inline]
pub fn cutoff_kernel(a: &RadialCutoff, x: [f64; 2]) -> [f64; 2] {
    if x == [0.0, 0.0] {
        return [0.0, 0.0];
    }
    let v = a.value(x);
    if v == 0.0 {
        return [0.0, 0.0];
    }
    let k = KernelEval::eval(x);
    [v * k[0], v * k[1]]
}

/// `grad^perp a_R . K = a_R'(r) / (2 pi r)`, supported on the transition
/// annulus of the cutoff.
#[inline]
pub fn cutoff_curl_correction(a: &RadialCutoff, x: [f64; 2]) -> f64 {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return 0.0;
    }
    a.radial_derivative(r) / (2.0 * PI * r)
}

/// `d_n d_m [(1 - a_R) K^i]` as `[n][m][i]`, by the product rule.
pub fn tail_hessian(a: &RadialCutoff, x: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
    if x == [0.0, 0.0] {
        return [[[0.0; 2]; 2]; 2];
    }
    let (v, g, hh) = a.jet(x);
    if v == 1.0 && g == [0.0, 0.0] {
        return [[[0.0; 2]; 2]; 2];
    }
    let hm = [[hh[0], hh[1]], [hh[1], hh[2]]];
    let k = KernelEval::eval(x);
    let dk = KernelEval::gradient(x);
    let d2k = KernelEval::hessian(x);
    let mut out = [[[0.0; 2]; 2]; 2];
    for n in 0..2 {
        for m in 0..2 {
            for i in 0..2 {
                out[n][m][i] = (1.0 - v) * d2k[n][m][i]
                    - g[n] * dk[m][i]
                    - g[m] * dk[n][i]
                    - hm[n][m] * k[i];
            }
        }
    }
    out
}

/// `d_n d_m [(1 - a_R) K^perp,i]`.
pub fn tail_hessian_perp(a: &RadialCutoff, x: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
    let t = tail_hessian(a, x);
    let mut out = [[[0.0; 2]; 2]; 2];
    for n in 0..2 {
        for m in 0..2 {
            out[n][m] = perp(t[n][m]);
        }
    }
    out
}

/// Serfati tail kernel `T^j_{kl} = d_k (grad^perp)_l [(1 - a_R) K^j]` as
/// `[k][l][j]`, with `grad^perp = (-d_2, d_1)`.
pub fn serfati_tail(a: &RadialCutoff, x: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
    let t = tail_hessian(a, x);
    let mut out = [[[0.0; 2]; 2]; 2];
    for k in 0..2 {
        for j in 0..2 {
            out[k][0][j] = -t[k][1][j];
            out[k][1][j] = t[k][0][j];
        }
    }
    out
}
