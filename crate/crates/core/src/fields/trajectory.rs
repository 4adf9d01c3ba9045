use super::{FieldData, Grid, RadialCutoff, ScalarField, UInfinityPath, VectorField};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub omega: ScalarField,
    pub u: VectorField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub grid: Grid,
    pub cutoff: RadialCutoff,
    pub dt: f64,
    /// Path removed by a forward frame change, restored by the inverse.
    pub removed_path: Option<UInfinityPath>,
    pub notes: BTreeMap<String, String>,
}

/// Time-ordered `(t, omega, u)` snapshots sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    snapshots: Vec<Snapshot>,
    pub uinf: UInfinityPath,
    pub meta: TrajectoryMeta,
}

const TIME_TOL: f64 = 1e-9;

impl Trajectory {
    pub fn new(initial: Snapshot, uinf: UInfinityPath, meta: TrajectoryMeta) -> Result<Self> {
        if initial.t != 0.0 {
            return Err(Error::Precondition("trajectory must start at t = 0".into()));
        }
        if *initial.omega.grid() != meta.grid || *initial.u.grid() != meta.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            snapshots: vec![initial],
            uinf,
            meta,
        })
    }

    pub fn push(&mut self, s: Snapshot) -> Result<()> {
        let last = self.snapshots.last().expect("non-empty").t;
        if !(s.t > last) {
            return Err(Error::Precondition(format!(
                "snapshot time {} not after {last}",
                s.t
            )));
        }
        if *s.omega.grid() != self.meta.grid || *s.u.grid() != self.meta.grid {
            return Err(Error::GridMismatch);
        }
        self.snapshots.push(s);
        Ok(())
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn initial(&self) -> &Snapshot {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("non-empty")
    }

    pub fn grid(&self) -> &Grid {
        &self.meta.grid
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Index of the snapshot at time `t`.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        self.snapshots
            .iter()
            .position(|s| (s.t - t).abs() <= TIME_TOL * (1.0 + t.abs()))
            .ok_or(Error::NotASnapshot(t))
    }

    /// Largest excess of `sup |omega(t)|` over `sup |omega(0)|`.
    pub fn sup_norm_excess(&self) -> f64 {
        let w0 = self.initial().omega.sup_norm();
        self.snapshots
            .iter()
            .map(|s| s.omega.sup_norm() - w0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Trajectory truncated to snapshots with `t <= t_end`.
    pub fn truncated(&self, t_end: f64) -> Self {
        let snapshots = self
            .snapshots
            .iter()
            .filter(|s| s.t <= t_end + TIME_TOL * (1.0 + t_end.abs()))
            .cloned()
            .collect();
        Self {
            snapshots,
            uinf: self.uinf.clone(),
            meta: self.meta.clone(),
        }
    }

    /// Write the directory layout: `trajectory.toml`, `uinf.txt`, and
    /// `omega_NNNNN.bin` / `u_NNNNN.bin` per snapshot.
    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let manifest = Manifest {
            n: self.meta.grid.n(),
            half_width: self.meta.grid.half_width(),
            dt: self.meta.dt,
            cutoff: self.meta.cutoff,
            times: self.times(),
            removed_path: self.meta.removed_path.as_ref().map(path_rows),
            notes: self.meta.notes.clone(),
        };
        let text = toml::to_string(&manifest).map_err(|e| Error::Parse(e.to_string()))?;
        fs::write(dir.join("trajectory.toml"), text)?;
        self.uinf.write_text(fs::File::create(dir.join("uinf.txt"))?)?;
        for (k, s) in self.snapshots.iter().enumerate() {
            FieldData::Scalar(s.omega.clone()).save(&dir.join(format!("omega_{k:05}.bin")))?;
            FieldData::Vector(s.u.clone()).save(&dir.join(format!("u_{k:05}.bin")))?;
        }
        Ok(())
    }

    pub fn load_dir(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(dir.join("trajectory.toml"))?;
        let m: Manifest = toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        let grid = Grid::new(m.n, m.half_width)?;
        let uinf = UInfinityPath::read_text(std::io::BufReader::new(fs::File::open(
            dir.join("uinf.txt"),
        )?))?;
        let removed_path = m.removed_path.map(|rows| rows_path(&rows)).transpose()?;
        let meta = TrajectoryMeta {
            grid,
            cutoff: m.cutoff,
            dt: m.dt,
            removed_path,
            notes: m.notes,
        };
        let mut snaps = m.times.iter().enumerate().map(|(k, &t)| -> Result<Snapshot> {
            let omega = FieldData::load(&dir.join(format!("omega_{k:05}.bin")))?.into_scalar()?;
            let u = FieldData::load(&dir.join(format!("u_{k:05}.bin")))?.into_vector()?;
            Ok(Snapshot { t, omega, u })
        });
        let first = snaps
            .next()
            .ok_or_else(|| Error::Parse("trajectory has no snapshots".into()))??;
        let mut traj = Trajectory::new(first, uinf, meta)?;
        for s in snaps {
            traj.push(s?)?;
        }
        Ok(traj)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    n: usize,
    half_width: f64,
    dt: f64,
    cutoff: RadialCutoff,
    times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    removed_path: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    notes: BTreeMap<String, String>,
}

fn path_rows(p: &UInfinityPath) -> Vec<[f64; 3]> {
    p.times()
        .iter()
        .zip(p.values())
        .map(|(&t, v)| [t, v[0], v[1]])
        .collect()
}

fn rows_path(rows: &[[f64; 3]]) -> Result<UInfinityPath> {
    UInfinityPath::new(
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| [r[1], r[2]]).collect(),
    )
}
