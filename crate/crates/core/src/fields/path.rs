use crate::error::{Error, Result};
use std::io::{BufRead, Write};

/// Piecewise-linear velocity-at-infinity path `U(t)` with `U(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct UInfinityPath {
    times: Vec<f64>,
    values: Vec<[f64; 2]>,
}

impl Default for UInfinityPath {
    fn default() -> Self {
        Self::zero()
    }
}

impl UInfinityPath {
    /// `U` identically zero.
    pub fn zero() -> Self {
        Self {
            times: vec![0.0],
            values: vec![[0.0, 0.0]],
        }
    }

    pub fn new(times: Vec<f64>, values: Vec<[f64; 2]>) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::Config(
                "path needs matching, non-empty time and value lists".into(),
            ));
        }
        if times[0] != 0.0 {
            return Err(Error::Config("path must start at t = 0".into()));
        }
        if values[0] != [0.0, 0.0] {
            return Err(Error::Config("path must vanish at t = 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("path times must be strictly increasing".into()));
        }
        if times.iter().chain(values.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::Config("path contains non-finite values".into()));
        }
        Ok(Self { times, values })
    }

    /// `U(t) = rate * t` sampled at the two ends of `[0, t_final]`.
    pub fn linear(rate: [f64; 2], t_final: f64) -> Result<Self> {
        if t_final <= 0.0 {
            return Ok(Self::zero());
        }
        Self::new(
            vec![0.0, t_final],
            vec![[0.0, 0.0], [rate[0] * t_final, rate[1] * t_final]],
        )
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[[f64; 2]] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == [0.0, 0.0])
    }

    /// Segment containing `t`; times beyond the last sample extend the
    /// final segment linearly.
    fn segment(&self, t: f64) -> Option<usize> {
        if self.times.len() < 2 {
            return None;
        }
        let k = self.times.partition_point(|&s| s <= t);
        Some(k.clamp(1, self.times.len() - 1) - 1)
    }

    fn slope(&self, seg: usize) -> [f64; 2] {
        let dt = self.times[seg + 1] - self.times[seg];
        let (a, b) = (self.values[seg], self.values[seg + 1]);
        [(b[0] - a[0]) / dt, (b[1] - a[1]) / dt]
    }

    pub fn eval(&self, t: f64) -> [f64; 2] {
        match self.segment(t) {
            None => self.values[0],
            Some(k) => {
                let s = self.slope(k);
                let dt = t - self.times[k];
                [self.values[k][0] + s[0] * dt, self.values[k][1] + s[1] * dt]
            }
        }
    }

    /// Derivative; centred (mean of adjacent slopes) at interior knots.
    pub fn derivative(&self, t: f64) -> [f64; 2] {
        let Some(k) = self.segment(t) else {
            return [0.0, 0.0];
        };
        let s = self.slope(k);
        if k > 0 && t == self.times[k] {
            let p = self.slope(k - 1);
            return [0.5 * (s[0] + p[0]), 0.5 * (s[1] + p[1])];
        }
        s
    }

    /// Exact `int_0^t U(s) ds` of the piecewise-linear path.
    pub fn integral(&self, t: f64) -> [f64; 2] {
        let mut acc = [0.0, 0.0];
        if t <= 0.0 || self.times.len() < 2 {
            return acc;
        }
        let mut lo = 0.0;
        let mut ulo = self.values[0];
        for k in 1..self.times.len() {
            let hi = if k == self.times.len() - 1 { t } else { self.times[k].min(t) };
            let uhi = self.eval(hi);
            let dt = hi - lo;
            acc[0] += 0.5 * (ulo[0] + uhi[0]) * dt;
            acc[1] += 0.5 * (ulo[1] + uhi[1]) * dt;
            if hi >= t {
                break;
            }
            lo = hi;
            ulo = uhi;
        }
        acc
    }

    /// Rows `time Ux Uy`.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# time Ux Uy")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(w, "{t} {} {}", v[0], v[1])?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut times = vec![];
        let mut values = vec![];
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<f64> = line
                .split_whitespace()
                .map(|c| c.parse::<f64>().map_err(|e| Error::Parse(format!("{c}: {e}"))))
                .collect::<Result<_>>()?;
            if cols.len() != 3 {
                return Err(Error::Parse(format!("expected 3 columns, got {}", cols.len())));
            }
            times.push(cols[0]);
            values.push([cols[1], cols[2]]);
        }
        Self::new(times, values)
    }
}
