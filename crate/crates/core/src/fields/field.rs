use super::Grid;
use crate::error::{Error, Result};

/// Node samples of a scalar quantity (vorticity, pressure, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = (0..grid.len()).map(|k| f(grid.point_of(k))).collect();
        Self { grid, values }
    }

    /// Unchecked constructor for internal producers whose output is finite
    /// by construction.
    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Sup norm restricted to the given node set.
    pub fn sup_on(&self, nodes: &[usize]) -> f64 {
        nodes.iter().fold(0.0, |m, &k| m.max(self.values[k].abs()))
    }

    pub fn mean_on(&self, nodes: &[usize]) -> f64 {
        if nodes.is_empty() {
            return 0.0;
        }
        nodes.iter().map(|&k| self.values[k]).sum::<f64>() / nodes.len() as f64
    }

    pub fn probe_sup(&self) -> f64 {
        self.sup_on(&self.grid.probe_indices())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self::from_raw(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Pointwise product with a function of position.
    pub fn multiply_by(&self, f: impl Fn([f64; 2]) -> f64) -> Self {
        let g = self.grid;
        Self::from_raw(
            g,
            self.values
                .iter()
                .enumerate()
                .map(|(k, &v)| v * f(g.point_of(k)))
                .collect(),
        )
    }

    /// `h^2`-weighted sum, the discrete integral over the box.
    pub fn integral(&self) -> f64 {
        let h = self.grid.spacing();
        self.values.iter().sum::<f64>() * h * h
    }

    /// Largest |value| on the outer ring of `cells` nodes.
    pub fn edge_magnitude(&self, cells: usize) -> f64 {
        let n = self.grid.n();
        let mut m: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let d = i.min(j).min(n - 1 - i).min(n - 1 - j);
                if d < cells {
                    m = m.max(self.at(i, j).abs());
                }
            }
        }
        m
    }
}

/// Node samples of a planar vector field, stored as two component arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl VectorField {
    pub fn new(grid: Grid, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let sx = ScalarField::new(grid, x)?;
        let sy = ScalarField::new(grid, y)?;
        Ok(Self::from_components(sx, sy).expect("same grid"))
    }

    pub fn from_components(x: ScalarField, y: ScalarField) -> Result<Self> {
        if x.grid != y.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: x.grid,
            x: x.values,
            y: y.values,
        })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            x: vec![0.0; grid.len()],
            y: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, c: [f64; 2]) -> Self {
        Self {
            grid,
            x: vec![c[0]; grid.len()],
            y: vec![c[1]; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> [f64; 2]) -> Self {
        let (x, y) = (0..grid.len()).map(|k| f(grid.point_of(k))).map(|v| (v[0], v[1])).unzip();
        Self { grid, x, y }
    }

    pub(crate) fn from_raw(grid: Grid, x: Vec<f64>, y: Vec<f64>) -> Self {
        debug_assert_eq!(x.len(), grid.len());
        debug_assert_eq!(y.len(), grid.len());
        Self { grid, x, y }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn xs(&self) -> &[f64] {
        &self.x
    }

    #[inline]
    pub fn ys(&self) -> &[f64] {
        &self.y
    }

    #[inline]
    pub fn get(&self, k: usize) -> [f64; 2] {
        [self.x[k], self.y[k]]
    }

    pub fn component(&self, c: usize) -> ScalarField {
        let v = if c == 0 { &self.x } else { &self.y };
        ScalarField::from_raw(self.grid, v.clone())
    }

    pub fn components(&self) -> (ScalarField, ScalarField) {
        (self.component(0), self.component(1))
    }

    pub fn magnitude(&self) -> ScalarField {
        ScalarField::from_raw(
            self.grid,
            self.x.iter().zip(&self.y).map(|(a, b)| a.hypot(*b)).collect(),
        )
    }

    pub fn sup_norm(&self) -> f64 {
        self.x
            .iter()
            .zip(&self.y)
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }

    pub fn sup_on(&self, nodes: &[usize]) -> f64 {
        nodes
            .iter()
            .fold(0.0, |m, &k| m.max(self.x[k].hypot(self.y[k])))
    }

    pub fn probe_sup(&self) -> f64 {
        self.sup_on(&self.grid.probe_indices())
    }

    pub fn mean_on(&self, nodes: &[usize]) -> [f64; 2] {
        if nodes.is_empty() {
            return [0.0, 0.0];
        }
        let n = nodes.len() as f64;
        [
            nodes.iter().map(|&k| self.x[k]).sum::<f64>() / n,
            nodes.iter().map(|&k| self.y[k]).sum::<f64>() / n,
        ]
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let x = self.x.iter().zip(&other.x).map(|(&a, &b)| f(a, b)).collect();
        let y = self.y.iter().zip(&other.y).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_raw(self.grid, x, y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_raw(
            self.grid,
            self.x.iter().map(|v| c * v).collect(),
            self.y.iter().map(|v| c * v).collect(),
        )
    }

    pub fn shift(&self, c: [f64; 2]) -> Self {
        Self::from_raw(
            self.grid,
            self.x.iter().map(|v| v + c[0]).collect(),
            self.y.iter().map(|v| v + c[1]).collect(),
        )
    }

    pub fn multiply_by(&self, f: impl Fn([f64; 2]) -> f64) -> Self {
        let g = self.grid;
        let w: Vec<f64> = (0..g.len()).map(|k| f(g.point_of(k))).collect();
        Self::from_raw(
            g,
            self.x.iter().zip(&w).map(|(a, b)| a * b).collect(),
            self.y.iter().zip(&w).map(|(a, b)| a * b).collect(),
        )
    }
}
