//! Field file formats.
//!
//! Text: a header line `grid N L`, then `N^2` rows of one (scalar) or two
//! (vector) whitespace-separated columns in row-major node order. Values are
//! written with shortest round-trip formatting, so reading back is bit-exact.
//!
//! Binary: 16-byte header (`b"BVEFIELD"`, version `u32`, component count
//! `u32`), then `N` as `u64`, `L` as `f64`, then node values as `f64`, all
//! little-endian, components interleaved per node.

use super::{Grid, ScalarField, VectorField};
use crate::error::{Error, Result};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const BINARY_MAGIC: &[u8; 8] = b"BVEFIELD";
pub const BINARY_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldData {
    Scalar(ScalarField),
    Vector(VectorField),
}

impl FieldData {
    pub fn grid(&self) -> &Grid {
        match self {
            FieldData::Scalar(f) => f.grid(),
            FieldData::Vector(u) => u.grid(),
        }
    }

    pub fn into_scalar(self) -> Result<ScalarField> {
        match self {
            FieldData::Scalar(f) => Ok(f),
            FieldData::Vector(_) => Err(Error::Parse("expected a scalar field".into())),
        }
    }

    pub fn into_vector(self) -> Result<VectorField> {
        match self {
            FieldData::Vector(u) => Ok(u),
            FieldData::Scalar(_) => Err(Error::Parse("expected a vector field".into())),
        }
    }

    fn columns(&self) -> Vec<&[f64]> {
        match self {
            FieldData::Scalar(f) => vec![f.values()],
            FieldData::Vector(u) => vec![u.xs(), u.ys()],
        }
    }

    pub fn write_text<W: Write>(&self, w: W) -> Result<()> {
        let mut w = BufWriter::new(w);
        let g = self.grid();
        writeln!(w, "grid {} {}", g.n(), g.half_width())?;
        let cols = self.columns();
        for k in 0..g.len() {
            match cols.len() {
                1 => writeln!(w, "{}", cols[0][k])?,
                _ => writeln!(w, "{} {}", cols[0][k], cols[1][k])?,
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty field file".into()))??;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "grid" {
            return Err(Error::Parse(format!("bad header line: {header:?}")));
        }
        let n: usize = parts[1]
            .parse()
            .map_err(|e| Error::Parse(format!("grid size: {e}")))?;
        let l: f64 = parts[2]
            .parse()
            .map_err(|e| Error::Parse(format!("half width: {e}")))?;
        let grid = Grid::new(n, l)?;
        let mut cols: Vec<Vec<f64>> = vec![];
        let mut rows = 0;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|c| c.parse::<f64>().map_err(|e| Error::Parse(format!("{c}: {e}"))))
                .collect::<Result<_>>()?;
            if cols.is_empty() {
                if !(1..=2).contains(&vals.len()) {
                    return Err(Error::Parse(format!("expected 1 or 2 columns, got {}", vals.len())));
                }
                cols = vec![Vec::with_capacity(grid.len()); vals.len()];
            }
            if vals.len() != cols.len() {
                return Err(Error::Parse(format!("row {rows}: inconsistent column count")));
            }
            for (c, v) in cols.iter_mut().zip(vals) {
                c.push(v);
            }
            rows += 1;
        }
        if rows != grid.len() {
            return Err(Error::Parse(format!("expected {} rows, got {rows}", grid.len())));
        }
        Self::from_columns(grid, cols)
    }

    fn from_columns(grid: Grid, mut cols: Vec<Vec<f64>>) -> Result<Self> {
        match cols.len() {
            1 => Ok(FieldData::Scalar(ScalarField::new(grid, cols.remove(0))?)),
            2 => {
                let y = cols.remove(1);
                let x = cols.remove(0);
                Ok(FieldData::Vector(VectorField::new(grid, x, y)?))
            }
            c => Err(Error::Parse(format!("unsupported component count {c}"))),
        }
    }

    pub fn write_binary<W: Write>(&self, w: W) -> Result<()> {
        let mut w = BufWriter::new(w);
        let g = self.grid();
        let cols = self.columns();
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&BINARY_VERSION.to_le_bytes())?;
        w.write_all(&(cols.len() as u32).to_le_bytes())?;
        w.write_all(&(g.n() as u64).to_le_bytes())?;
        w.write_all(&g.half_width().to_le_bytes())?;
        for k in 0..g.len() {
            for c in &cols {
                w.write_all(&c[k].to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)?;
        if &header[..8] != BINARY_MAGIC {
            return Err(Error::Parse("bad magic".into()));
        }
        let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
        if version != BINARY_VERSION {
            return Err(Error::Parse(format!("unsupported version {version}")));
        }
        let ncomp = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
        if !(1..=2).contains(&ncomp) {
            return Err(Error::Parse(format!("unsupported component count {ncomp}")));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        r.read_exact(&mut b8)?;
        let l = f64::from_le_bytes(b8);
        let grid = Grid::new(n, l)?;
        let mut cols = vec![Vec::with_capacity(grid.len()); ncomp];
        for _ in 0..grid.len() {
            for c in cols.iter_mut() {
                r.read_exact(&mut b8)?;
                c.push(f64::from_le_bytes(b8));
            }
        }
        Self::from_columns(grid, cols)
    }

    /// Write by extension: `.bin` is binary, anything else text.
    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path)?;
        if path.extension().is_some_and(|e| e == "bin") {
            self.write_binary(f)
        } else {
            self.write_text(f)
        }
    }

    /// Read either format, sniffing the binary magic.
    pub fn load(path: &Path) -> Result<Self> {
        let mut f = BufReader::new(File::open(path)?);
        let is_binary = f.fill_buf()?.starts_with(BINARY_MAGIC);
        if is_binary {
            Self::read_binary(f)
        } else {
            Self::read_text(f)
        }
    }
}
