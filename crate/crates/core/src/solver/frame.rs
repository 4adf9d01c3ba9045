use crate::error::{Error, Result};
use crate::fields::{
    clamp_to_interpolable, interpolable, stencil_unchecked, Grid, Interpolation, ScalarField,
    Snapshot, Trajectory, UInfinityPath, VectorField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Remove the path: `u_bar(t, x) = u(t, x + X(t)) - U(t)`.
    Forward,
    /// Restore the path removed by a forward transform.
    Inverse,
}

fn shifted(
    g: &Grid,
    omega: &ScalarField,
    u: &VectorField,
    shift: [f64; 2],
    add: [f64; 2],
) -> Result<(ScalarField, VectorField)> {
    let size = shift[0].hypot(shift[1]);
    for k in g.probe_indices() {
        let x = g.point_of(k);
        if !interpolable(g, [x[0] + shift[0], x[1] + shift[1]]) {
            return Err(Error::ShiftExitsBox { shift: size });
        }
    }
    let n = g.len();
    let (mut w, mut ux, mut uy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for k in 0..n {
        let x = g.point_of(k);
        let p = clamp_to_interpolable(g, [x[0] + shift[0], x[1] + shift[1]]);
        let s = stencil_unchecked(g, p, Interpolation::Bicubic);
        w[k] = s.apply(g, omega.values());
        ux[k] = s.apply(g, u.xs()) + add[0];
        uy[k] = s.apply(g, u.ys()) + add[1];
    }
    Ok((ScalarField::new(*g, w)?, VectorField::new(*g, ux, uy)?))
}

/// Change to (or back from) the frame accelerating with the path `U`.
///
/// Nodes whose shifted position leaves the box read clamped values; only
/// a probe-box node leaving the interpolable region is an error.
pub fn transform_frame(traj: &Trajectory, direction: Direction) -> Result<Trajectory> {
    let (path, sign, new_uinf, removed) = match direction {
        Direction::Forward => {
            if traj.uinf.is_zero() {
                return Ok(traj.clone());
            }
            (traj.uinf.clone(), 1.0, UInfinityPath::zero(), Some(traj.uinf.clone()))
        }
        Direction::Inverse => {
            let Some(p) = traj.meta.removed_path.clone() else {
                return Err(Error::Precondition(
                    "trajectory carries no removed path to restore".into(),
                ));
            };
            (p.clone(), -1.0, p, None)
        }
    };
    let g = *traj.grid();
    let map = |s: &Snapshot| -> Result<Snapshot> {
        let x = path.integral(s.t);
        let v = path.eval(s.t);
        let (omega, u) = shifted(
            &g,
            &s.omega,
            &s.u,
            [sign * x[0], sign * x[1]],
            [-sign * v[0], -sign * v[1]],
        )?;
        Ok(Snapshot { t: s.t, omega, u })
    };
    let mut meta = traj.meta.clone();
    meta.removed_path = removed;
    let mut snaps = traj.snapshots().iter();
    let mut out = Trajectory::new(map(snaps.next().expect("non-empty"))?, new_uinf, meta)?;
    for s in snaps {
        out.push(map(s)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{RadialCutoff, TrajectoryMeta};

    fn traj(uinf: UInfinityPath) -> Trajectory {
        let g = Grid::new(64, 4.0).unwrap();
        let f = |t: f64| {
            let w = ScalarField::from_fn(g, |[x, y]| (-(x - t * t / 2.0).powi(2) - y * y).exp());
            let u = VectorField::from_fn(g, |[x, y]| [(-(x * x) - y * y).exp() + t, 0.0]);
            Snapshot { t, omega: w, u }
        };
        let meta = TrajectoryMeta {
            grid: g,
            cutoff: RadialCutoff::default(),
            dt: 0.25,
            removed_path: None,
            notes: Default::default(),
        };
        let mut tr = Trajectory::new(f(0.0), uinf, meta).unwrap();
        tr.push(f(0.25)).unwrap();
        tr.push(f(0.5)).unwrap();
        tr
    }

    #[test]
    fn zero_path_is_identity() {
        let t = traj(UInfinityPath::zero());
        assert_eq!(transform_frame(&t, Direction::Forward).unwrap(), t);
    }

    #[test]
    fn forward_removes_uniform_part() {
        let t = traj(UInfinityPath::linear([1.0, 0.0], 0.5).unwrap());
        let f = transform_frame(&t, Direction::Forward).unwrap();
        assert!(f.uinf.is_zero());
        let g = *f.grid();
        for s in f.snapshots() {
            let c = s.omega.values()[g.origin_index()];
            assert!((c - 1.0).abs() < 5e-3, "t = {} centre {c}", s.t);
        }
        let back = transform_frame(&f, Direction::Inverse).unwrap();
        assert_eq!(back.uinf, t.uinf);
        let probe = g.probe_indices();
        let last = back.last().u.sub(&t.last().u).unwrap();
        assert!(last.sup_on(&probe) < 1e-3);
    }

    #[test]
    fn inverse_without_path_fails() {
        let t = traj(UInfinityPath::zero());
        assert!(transform_frame(&t, Direction::Inverse).is_err());
    }

    #[test]
    fn large_shift_is_rejected() {
        let t = traj(UInfinityPath::linear([40.0, 0.0], 0.5).unwrap());
        assert!(matches!(
            transform_frame(&t, Direction::Forward),
            Err(Error::ShiftExitsBox { .. })
        ));
    }
}
