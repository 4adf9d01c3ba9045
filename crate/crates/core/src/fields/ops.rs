//! Second-order finite-difference operators.
//!
//! Interior nodes use centred stencils. The outer ring uses either
//! second-order one-sided stencils or periodic wrap-around.

use super::{ScalarField, VectorField};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    #[default]
    OneSided,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// First derivative along `axis`.
pub fn partial(f: &ScalarField, axis: Axis, boundary: Boundary) -> ScalarField {
    let g = *f.grid();
    let n = g.n();
    let h = g.spacing();
    let v = f.values();
    let along_x = axis == Axis::X;
    let mut out = vec![0.0; g.len()];
    for j in 0..n {
        for i in 0..n {
            let pos = if along_x { i } else { j };
            let node = |p: usize| if along_x { v[g.index(p, j)] } else { v[g.index(i, p)] };
            let d = if pos > 0 && pos + 1 < n {
                (node(pos + 1) - node(pos - 1)) / (2.0 * h)
            } else {
                match boundary {
                    Boundary::Periodic => {
                        let next = (pos + 1) % n;
                        let prev = (pos + n - 1) % n;
                        (node(next) - node(prev)) / (2.0 * h)
                    }
                    Boundary::OneSided if pos == 0 => {
                        (-3.0 * node(0) + 4.0 * node(1) - node(2)) / (2.0 * h)
                    }
                    Boundary::OneSided => {
                        (3.0 * node(n - 1) - 4.0 * node(n - 2) + node(n - 3)) / (2.0 * h)
                    }
                }
            };
            out[g.index(i, j)] = d;
        }
    }
    ScalarField::from_raw(g, out)
}

/// Second derivative along a single axis.
pub fn second_partial(f: &ScalarField, axis: Axis, boundary: Boundary) -> ScalarField {
    let g = *f.grid();
    let n = g.n();
    let h2 = g.spacing() * g.spacing();
    let v = f.values();
    let along_x = axis == Axis::X;
    let mut out = vec![0.0; g.len()];
    for j in 0..n {
        for i in 0..n {
            let pos = if along_x { i } else { j };
            let node = |p: usize| if along_x { v[g.index(p, j)] } else { v[g.index(i, p)] };
            let d = if pos > 0 && pos + 1 < n {
                (node(pos + 1) - 2.0 * node(pos) + node(pos - 1)) / h2
            } else {
                match boundary {
                    Boundary::Periodic => {
                        let next = (pos + 1) % n;
                        let prev = (pos + n - 1) % n;
                        (node(next) - 2.0 * node(pos) + node(prev)) / h2
                    }
                    Boundary::OneSided if pos == 0 => {
                        (2.0 * node(0) - 5.0 * node(1) + 4.0 * node(2) - node(3)) / h2
                    }
                    Boundary::OneSided => {
                        (2.0 * node(n - 1) - 5.0 * node(n - 2) + 4.0 * node(n - 3) - node(n - 4))
                            / h2
                    }
                }
            };
            out[g.index(i, j)] = d;
        }
    }
    ScalarField::from_raw(g, out)
}

/// `omega(u) = d1 u2 - d2 u1`.
pub fn curl(u: &VectorField) -> ScalarField {
    curl_with(u, Boundary::OneSided)
}

pub fn curl_with(u: &VectorField, boundary: Boundary) -> ScalarField {
    let (ux, uy) = u.components();
    let a = partial(&uy, Axis::X, boundary);
    let b = partial(&ux, Axis::Y, boundary);
    a.sub(&b).expect("same grid")
}

pub fn divergence(u: &VectorField) -> ScalarField {
    divergence_with(u, Boundary::OneSided)
}

pub fn divergence_with(u: &VectorField, boundary: Boundary) -> ScalarField {
    let (ux, uy) = u.components();
    let a = partial(&ux, Axis::X, boundary);
    let b = partial(&uy, Axis::Y, boundary);
    a.add(&b).expect("same grid")
}

pub fn gradient(f: &ScalarField) -> VectorField {
    VectorField::from_components(
        partial(f, Axis::X, Boundary::OneSided),
        partial(f, Axis::Y, Boundary::OneSided),
    )
    .expect("same grid")
}

/// `grad-perp phi = (-d2 phi, d1 phi)`; divergence-free for any smooth `phi`.
pub fn perp_gradient(phi: &ScalarField) -> VectorField {
    let dx = partial(phi, Axis::X, Boundary::OneSided);
    let dy = partial(phi, Axis::Y, Boundary::OneSided);
    VectorField::from_components(dy.scale(-1.0), dx).expect("same grid")
}

/// Velocity gradient `[m][i] = d_m u^i`.
pub fn velocity_gradient(u: &VectorField) -> [[ScalarField; 2]; 2] {
    let (ux, uy) = u.components();
    [
        [
            partial(&ux, Axis::X, Boundary::OneSided),
            partial(&uy, Axis::X, Boundary::OneSided),
        ],
        [
            partial(&ux, Axis::Y, Boundary::OneSided),
            partial(&uy, Axis::Y, Boundary::OneSided),
        ],
    ]
}

/// Symmetric Hessian `[d11, d12, d22]`.
pub fn hessian(f: &ScalarField) -> [ScalarField; 3] {
    let d11 = second_partial(f, Axis::X, Boundary::OneSided);
    let d22 = second_partial(f, Axis::Y, Boundary::OneSided);
    let d12 = partial(
        &partial(f, Axis::X, Boundary::OneSided),
        Axis::Y,
        Boundary::OneSided,
    );
    [d11, d12, d22]
}

/// Pointwise Frobenius norm of the velocity gradient.
pub fn gradient_magnitude(u: &VectorField) -> ScalarField {
    let du = velocity_gradient(u);
    let g = *u.grid();
    let vals = (0..g.len())
        .map(|k| {
            let mut s = 0.0;
            for row in &du {
                for c in row {
                    s += c.values()[k].powi(2);
                }
            }
            s.sqrt()
        })
        .collect();
    ScalarField::from_raw(g, vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid {
        Grid::new(n, PI).unwrap()
    }

    #[test]
    fn curl_of_constant_is_zero() {
        let g = grid(16);
        let u = VectorField::constant(g, [1.5, -2.0]);
        assert!(curl(&u).sup_norm() < 1e-12);
        assert!(divergence(&u).sup_norm() < 1e-12);
    }

    #[test]
    fn solid_rotation_has_unit_vorticity() {
        let g = grid(32);
        let u = VectorField::from_fn(g, |[x, y]| [-0.5 * y, 0.5 * x]);
        let w = curl(&u);
        assert!(w.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(divergence(&u).sup_norm() < 1e-12);
    }

    #[test]
    fn radial_field_has_divergence_two() {
        let g = grid(32);
        let u = VectorField::from_fn(g, |[x, y]| [x, y]);
        let d = divergence(&u);
        assert!(d.values().iter().all(|v| (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn shear_curl_converges_second_order() {
        let mut errs = vec![];
        for n in [32, 64, 128] {
            let g = grid(n);
            let u = VectorField::from_fn(g, |[_, y]| [y.sin(), 0.0]);
            let w = curl(&u);
            let exact = ScalarField::from_fn(g, |[_, y]| -y.cos());
            errs.push(w.sub(&exact).unwrap().sup_norm());
            assert!(divergence(&u).sup_norm() < 1e-12);
        }
        for k in 1..errs.len() {
            let order = (errs[k - 1] / errs[k]).log2();
            assert!(order > 1.8, "order {order}, errors {errs:?}");
        }
    }

    #[test]
    fn periodic_boundary_is_exact_on_periodic_data() {
        // sin on [-pi, pi) is periodic on the grid.
        let g = grid(64);
        let f = ScalarField::from_fn(g, |[x, _]| x.sin());
        let d = partial(&f, Axis::X, Boundary::Periodic);
        let exact = ScalarField::from_fn(g, |[x, _]| x.cos());
        let h = g.spacing();
        assert!(d.sub(&exact).unwrap().sup_norm() < h * h);
    }

    #[test]
    fn second_partial_matches_analytic() {
        let g = grid(64);
        let f = ScalarField::from_fn(g, |[x, y]| x.sin() * y.cos());
        let [d11, d12, d22] = hessian(&f);
        let h2 = g.spacing().powi(2);
        for k in 0..g.len() {
            let [x, y] = g.point_of(k);
            assert!((d11.values()[k] + x.sin() * y.cos()).abs() < 2.0 * h2);
            assert!((d22.values()[k] + x.sin() * y.cos()).abs() < 2.0 * h2);
            assert!((d12.values()[k] + x.cos() * y.sin()).abs() < 2.0 * h2);
        }
    }
}
