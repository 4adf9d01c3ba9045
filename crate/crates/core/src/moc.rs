//! Moduli of continuity: the log-Lipschitz modulus, Dini integrals, the
//! modulus of a Riesz transform, and estimates on sampled fields.

use crate::error::{Error, Result};
use crate::fields::{gradient_magnitude, Grid, ScalarField, VectorField};
use crate::quad::integrate;
use crate::solver::s_norm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{E, PI};
use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

/// `M (-r log r)` for `r <= 1/e`, `M / e` beyond.
pub fn mu_ll(m: f64, r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else if r <= 1.0 / E {
        -m * r * r.ln()
    } else {
        m / E
    }
}

#[derive(Clone)]
pub enum MocKind {
    LogLipschitz { m: f64 },
    /// `c r`.
    Lipschitz { c: f64 },
    /// `c r^alpha`.
    Holder { c: f64, alpha: f64 },
    /// `min(r, 1)`.
    CappedLinear,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A modulus of continuity with metadata.
#[derive(Clone)]
pub struct Moc {
    pub name: String,
    pub kind: MocKind,
    pub concave: bool,
}

impl fmt::Debug for Moc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Moc")
            .field("name", &self.name)
            .field("concave", &self.concave)
            .finish()
    }
}

impl fmt::Display for Moc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

const LADDER: usize = 40;

impl Moc {
    pub fn log_lipschitz(m: f64) -> Self {
        Self {
            name: format!("log-lipschitz(M={m})"),
            kind: MocKind::LogLipschitz { m },
            concave: true,
        }
    }

    pub fn lipschitz(c: f64) -> Self {
        Self {
            name: format!("lipschitz(c={c})"),
            kind: MocKind::Lipschitz { c },
            concave: true,
        }
    }

    pub fn holder(c: f64, alpha: f64) -> Self {
        Self {
            name: format!("holder(c={c},alpha={alpha})"),
            kind: MocKind::Holder { c, alpha },
            concave: alpha <= 1.0,
        }
    }

    pub fn capped_linear() -> Self {
        Self {
            name: "min(r,1)".into(),
            kind: MocKind::CappedLinear,
            concave: true,
        }
    }

    pub fn custom(name: &str, concave: bool, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            kind: MocKind::Custom(Arc::new(f)),
            concave,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            MocKind::LogLipschitz { m } => mu_ll(*m, r),
            MocKind::Lipschitz { c } => c * r,
            MocKind::Holder { c, alpha } => c * r.powf(*alpha),
            MocKind::CappedLinear => r.min(1.0),
            MocKind::Custom(f) => f(r),
        }
    }

    /// Check `mu(0) = 0`, positivity and monotonicity on `r = 2^-k`.
    pub fn validate(&self) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::InvalidModulus(format!("{}: mu(0) != 0", self.name)));
        }
        let mut prev = f64::INFINITY;
        for k in 0..LADDER {
            let r = 2f64.powi(-(k as i32) + 4);
            let v = self.eval(r);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidModulus(format!("{}: mu({r}) = {v}", self.name)));
            }
            if v > prev * (1.0 + 1e-14) {
                return Err(Error::InvalidModulus(format!(
                    "{}: not nondecreasing near r = {r}",
                    self.name
                )));
            }
            prev = v;
        }
        Ok(())
    }
}

/// `int_0^x mu(r) / r dr` in closed form.
fn dini_closed_form(mu: &Moc, x: f64) -> Option<f64> {
    match mu.kind {
        MocKind::LogLipschitz { m } => Some(if x <= 1.0 / E {
            m * (x - x * x.ln())
        } else {
            m / E * (2.0 + (x * E).ln())
        }),
        MocKind::Lipschitz { c } => Some(c * x),
        MocKind::Holder { c, alpha } if alpha > 0.0 => Some(c * x.powf(alpha) / alpha),
        MocKind::CappedLinear => Some(if x <= 1.0 { x } else { 1.0 + x.ln() }),
        _ => None,
    }
}

/// Largest `s` used in `r = x e^{-s}` substitutions; beyond this `r`
/// underflows.
const S_MAX: f64 = 640.0;
const FIRST_BLOCK: f64 = 5.0;
/// Ratio of successive block integrals above which a tail counts as
/// non-decaying.
const STALL_RATIO: f64 = 0.9;

/// `int_0^inf g(s) ds` over dyadic blocks with divergence detection.
fn blocked_tail(g: impl Fn(f64) -> f64, what: &str) -> Result<f64> {
    let mut total = 0.0;
    let mut blocks: Vec<f64> = vec![];
    let mut a = 0.0;
    let mut b = FIRST_BLOCK;
    while a < S_MAX {
        let q = integrate(&g, a, b, 1e-15, 1e-12, 400);
        if !q.value.is_finite() {
            return Err(Error::NonDini(format!("{what}: non-finite integrand")));
        }
        total += q.value;
        blocks.push(q.value);
        a = b;
        b *= 2.0;
    }
    let n = blocks.len();
    let stalled = blocks[n - 3..]
        .windows(2)
        .all(|w| w[0] > 0.0 && w[1] >= STALL_RATIO * w[0]);
    let last = blocks[n - 1];
    if stalled && last > 1e-12 * total.abs() {
        return Err(Error::NonDini(format!(
            "{what}: block integrals stop decaying (last {last:e}, total {total:e})"
        )));
    }
    // geometric tail estimate from the last two blocks
    let ratio = if blocks[n - 2] > 0.0 { last / blocks[n - 2] } else { 0.0 };
    if ratio > 0.0 && ratio < 1.0 {
        total += last * ratio / (1.0 - ratio);
    }
    Ok(total)
}

/// `S_mu(x) = int_0^x mu(r) / r dr`.
pub fn dini_integral(mu: &Moc, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Precondition(format!("Dini integral needs x > 0, got {x}")));
    }
    if let Some(v) = dini_closed_form(mu, x) {
        return Ok(v);
    }
    blocked_tail(|s| mu.eval(x * (-s).exp()), &mu.name)
}

/// `r int_r^inf mu(s) / s^2 ds`.
fn riesz_tail(mu: &Moc, r: f64) -> Result<f64> {
    match mu.kind {
        MocKind::LogLipschitz { m } => Ok(if r > 1.0 / E {
            m / E
        } else {
            m * r * (0.5 * r.ln().powi(2) + 0.5)
        }),
        MocKind::CappedLinear => Ok(if r >= 1.0 { 1.0 } else { r * (1.0 - r.ln()) }),
        MocKind::Holder { c, alpha } if alpha < 1.0 => Ok(c * r.powf(alpha) / (1.0 - alpha)),
        MocKind::Lipschitz { .. } | MocKind::Holder { .. } => Err(Error::Precondition(format!(
            "{}: r int mu(s)/s^2 ds diverges",
            mu.name
        ))),
        MocKind::Custom(_) => blocked_tail(|t| mu.eval(r * t.exp()) * (-t).exp(), &mu.name)
            .map_err(|e| Error::Precondition(format!("tail integral: {e}"))),
    }
}

/// `nu(r) = S_mu(r) + r int_r^inf mu(s) / s^2 ds`, the constant taken as 1.
pub fn riesz_moc(mu: &Moc, r: f64) -> Result<f64> {
    if !mu.concave {
        return Err(Error::InvalidModulus(format!("{} is not flagged concave", mu.name)));
    }
    if !(r > 0.0) {
        return Err(Error::Precondition(format!("need r > 0, got {r}")));
    }
    Ok(dini_integral(mu, r)? + riesz_tail(mu, r)?)
}

/// Sampled field with node values read as 2-vectors.
pub trait Sampled {
    fn grid(&self) -> &Grid;
    fn node(&self, k: usize) -> [f64; 2];
    fn sup(&self) -> f64;
}

impl Sampled for ScalarField {
    fn grid(&self) -> &Grid {
        ScalarField::grid(self)
    }
    fn node(&self, k: usize) -> [f64; 2] {
        [self.values()[k], 0.0]
    }
    fn sup(&self) -> f64 {
        self.sup_norm()
    }
}

impl Sampled for VectorField {
    fn grid(&self) -> &Grid {
        VectorField::grid(self)
    }
    fn node(&self, k: usize) -> [f64; 2] {
        self.get(k)
    }
    fn sup(&self) -> f64 {
        self.sup_norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MocEstimate {
    /// `sup |f(x) - f(y)| / mu(|x - y|)` over the sampled pairs.
    pub seminorm: f64,
    /// `seminorm + sup |f|`.
    pub norm: f64,
    pub pairs: usize,
    /// Distance of the maximizing pair.
    pub worst_distance: f64,
}

pub const DEFAULT_PAIRS: usize = 20_000;

/// Seminorm estimate over every nearest-neighbour pair (axis and diagonal)
/// and `pairs` random pairs at log-uniform distances.
pub fn empirical_moc<F: Sampled + ?Sized>(f: &F, mu: &Moc, seed: u64, pairs: usize) -> MocEstimate {
    let g = *f.grid();
    let n = g.n();
    let h = g.spacing();
    let mut best = 0.0f64;
    let mut worst_distance = 0.0;
    let mut count = 0;
    let mut consider = |a: usize, b: usize| {
        let (pa, pb) = (g.point_of(a), g.point_of(b));
        let d = (pa[0] - pb[0]).hypot(pa[1] - pb[1]);
        let m = mu.eval(d);
        if m <= 0.0 {
            return;
        }
        let (fa, fb) = (f.node(a), f.node(b));
        let v = (fa[0] - fb[0]).hypot(fa[1] - fb[1]) / m;
        count += 1;
        if v > best {
            best = v;
            worst_distance = d;
        }
    };
    for j in 0..n {
        for i in 0..n {
            let k = g.index(i, j);
            if i + 1 < n {
                consider(k, g.index(i + 1, j));
            }
            if j + 1 < n {
                consider(k, g.index(i, j + 1));
                if i + 1 < n {
                    consider(k, g.index(i + 1, j + 1));
                }
                if i > 0 {
                    consider(k, g.index(i - 1, j + 1));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_d = 2.0 * g.half_width();
    for _ in 0..pairs {
        let a = rng.random_range(0..g.len());
        let d = h * (max_d / h).powf(rng.random::<f64>());
        let th = rng.random::<f64>() * 2.0 * PI;
        let p = g.point_of(a);
        let q = [p[0] + d * th.cos(), p[1] + d * th.sin()];
        if let Some((i, j)) = g.node_of(q) {
            let b = g.index(i, j);
            if b != a {
                consider(a, b);
            }
        }
    }
    MocEstimate {
        seminorm: best,
        norm: best + f.sup(),
        pairs: count,
        worst_distance,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorreyRow {
    pub p: f64,
    pub lp_norm: f64,
    /// `|D|^{1/p} p^2 / (p - 1) ||u||_S`.
    pub scale: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorreyReport {
    pub radius: f64,
    pub s_norm: f64,
    pub rows: Vec<MorreyRow>,
    /// Every ratio is at most [`MORREY_CONSTANT`].
    pub bounded: bool,
}

impl MorreyReport {
    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# disk radius {} ||u||_S {:e}", self.radius, self.s_norm);
        let _ = writeln!(s, "# constant {MORREY_CONSTANT} bounded {}", self.bounded);
        let _ = writeln!(s, "# p lp_norm scale ratio");
        for r in &self.rows {
            let _ = writeln!(s, "{} {:e} {:e} {:e}", r.p, r.lp_norm, r.scale, r.ratio);
        }
        s
    }
}

pub const MORREY_CONSTANT: f64 = 1.0;
pub const MORREY_EXPONENTS: [f64; 5] = [1.25, 2.0, 4.0, 8.0, 16.0];

/// Discrete `||grad u||_{L^p(D)}` on the origin-centred disk of radius
/// `radius`, against `|D|^{1/p} p^2 / (p - 1) ||u||_S`.
pub fn morrey_gradient_check(u: &VectorField, exponents: &[f64], radius: f64) -> Result<MorreyReport> {
    if exponents.iter().any(|p| !(*p > 1.0)) {
        return Err(Error::Precondition("Morrey exponents must exceed 1".into()));
    }
    let g = *u.grid();
    if !(radius > 0.0) || radius > g.half_width() {
        return Err(Error::Precondition(format!("disk radius {radius} outside (0, L]")));
    }
    let gm = gradient_magnitude(u);
    let disk: Vec<usize> = (0..g.len())
        .filter(|&k| {
            let [x, y] = g.point_of(k);
            x.hypot(y) <= radius
        })
        .collect();
    let w = g.spacing().powi(2);
    let area = PI * radius * radius;
    let sn = s_norm(u);
    let rows: Vec<MorreyRow> = exponents
        .iter()
        .map(|&p| {
            let lp_norm = (disk.iter().map(|&k| gm.values()[k].powf(p)).sum::<f64>() * w).powf(1.0 / p);
            let scale = area.powf(1.0 / p) * p * p / (p - 1.0) * sn;
            let ratio = if scale > 0.0 { lp_norm / scale } else { 0.0 };
            MorreyRow {
                p,
                lp_norm,
                scale,
                ratio,
            }
        })
        .collect();
    let bounded = rows.iter().all(|r| r.ratio <= MORREY_CONSTANT);
    Ok(MorreyReport {
        radius,
        s_norm: sn,
        rows,
        bounded,
    })
}
