use crate::error::{Error, Result};

/// Uniform, origin-centred square grid on `[-L, L)^2`.
///
/// Node `(i, j)` sits at `(-L + i h, -L + j h)` with `h = 2L / N`. Since `N`
/// is even, the origin is always the node `(N/2, N/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_width: f64,
    n: usize,
}

impl Grid {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::GridTooSmall(n));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        Ok(Self { half_width, n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Flat index of node `(i, j)`; `i` runs along x1 and is fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.n, idx / self.n)
    }

    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        [self.coordinate(i), self.coordinate(j)]
    }

    #[inline]
    pub fn point_of(&self, idx: usize) -> [f64; 2] {
        let (i, j) = self.coords(idx);
        self.point(i, j)
    }

    /// Nearest node to `x`, or `None` when `x` lies off the grid.
    pub fn node_of(&self, x: [f64; 2]) -> Option<(usize, usize)> {
        let h = self.spacing();
        let i = ((x[0] + self.half_width) / h).round();
        let j = ((x[1] + self.half_width) / h).round();
        let last = (self.n - 1) as f64;
        if (0.0..=last).contains(&i) && (0.0..=last).contains(&j) {
            Some((i as usize, j as usize))
        } else {
            None
        }
    }

    #[inline]
    pub fn origin_index(&self) -> usize {
        self.index(self.n / 2, self.n / 2)
    }

    /// Half-width of the central probe box, `L/4`.
    #[inline]
    pub fn probe_half_width(&self) -> f64 {
        0.25 * self.half_width
    }

    pub fn in_probe_box(&self, idx: usize) -> bool {
        let [x, y] = self.point_of(idx);
        let w = self.probe_half_width() + 1e-12 * self.half_width;
        x.abs() <= w && y.abs() <= w
    }

    /// Flat indices of every node in the central probe box.
    pub fn probe_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.in_probe_box(k)).collect()
    }

    /// Nodes inside a centred box of the given half-width.
    pub fn box_indices(&self, half_width: f64) -> Vec<usize> {
        let w = half_width + 1e-12 * self.half_width;
        (0..self.len())
            .filter(|&k| {
                let [x, y] = self.point_of(k);
                x.abs() <= w && y.abs() <= w
            })
            .collect()
    }

    /// Nodes of the far annulus `0.75 L <= r <= L`.
    pub fn outer_annulus_indices(&self) -> Vec<usize> {
        let l = self.half_width;
        (0..self.len())
            .filter(|&k| {
                let [x, y] = self.point_of(k);
                let r = x.hypot(y);
                r >= 0.75 * l && r <= l
            })
            .collect()
    }

    /// Same grid geometry at a different resolution.
    pub fn refined(&self, n: usize) -> Result<Self> {
        Self::new(n, self.half_width)
    }
}
