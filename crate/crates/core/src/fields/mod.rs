//! Grids, sampled fields, finite-difference operators and interpolation.

mod cutoff;
mod field;
mod grid;
mod interp;
mod io;
mod ops;
mod path;
mod trajectory;

pub use cutoff::{CutoffProfile, RadialCutoff};
pub use field::{ScalarField, VectorField};
pub use grid::Grid;
pub use interp::{
    clamp_to_interpolable, interpolable, interpolate, interpolate_scalar, stencil,
    stencil_unchecked, Interpolation, Stencil,
};
pub use io::{FieldData, BINARY_MAGIC, BINARY_VERSION};
pub use ops::{
    curl, curl_with, divergence, divergence_with, gradient, gradient_magnitude, hessian, partial,
    perp_gradient, second_partial, velocity_gradient, Axis, Boundary,
};
pub use path::UInfinityPath;
pub use trajectory::{Snapshot, Trajectory, TrajectoryMeta};

/// How values outside the grid box are modelled by convolution-type
/// operators.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Extension {
    /// Data are zero outside the box.
    #[default]
    Compact,
    /// Data are multiplied by the default cutoff profile at the given
    /// radius before use, so they decay smoothly inside the box.
    Damped { radius: f64 },
}

impl Extension {
    pub fn apply_scalar(&self, f: &ScalarField) -> ScalarField {
        match *self {
            Extension::Compact => f.clone(),
            Extension::Damped { radius } => {
                let a = RadialCutoff {
                    profile: CutoffProfile::default(),
                    scale: radius,
                };
                f.multiply_by(|x| a.value(x))
            }
        }
    }

    pub fn apply_vector(&self, u: &VectorField) -> VectorField {
        match *self {
            Extension::Compact => u.clone(),
            Extension::Damped { radius } => {
                let a = RadialCutoff {
                    profile: CutoffProfile::default(),
                    scale: radius,
                };
                u.multiply_by(|x| a.value(x))
            }
        }
    }
}
