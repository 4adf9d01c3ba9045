//! Radial cutoff functions `a_R(x) = profile(|x| / R)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Transition shape between the inner radius `r0` (value 1) and outer
/// radius `r1` (value 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CutoffProfile {
    /// `1 - (6t^5 - 15t^4 + 10t^3)`, C^2.
    Smoothstep5 { r0: f64, r1: f64 },
    /// `f(1-t) / (f(1-t) + f(t))` with `f(t) = exp(-1/t)`, C-infinity.
    ExpBump { r0: f64, r1: f64 },
}

impl Default for CutoffProfile {
    fn default() -> Self {
        CutoffProfile::Smoothstep5 { r0: 0.5, r1: 1.0 }
    }
}

impl fmt::Display for CutoffProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutoffProfile::Smoothstep5 { r0, r1 } => write!(f, "smoothstep5(r0={r0},r1={r1})"),
            CutoffProfile::ExpBump { r0, r1 } => write!(f, "exp-bump(r0={r0},r1={r1})"),
        }
    }
}

fn exp_inv(t: f64) -> [f64; 3] {
    // f, f', f'' of exp(-1/t) for t > 0, zero otherwise
    if t <= 0.0 {
        return [0.0; 3];
    }
    let f = (-1.0 / t).exp();
    let t2 = t * t;
    [f, f / t2, f * (1.0 / (t2 * t2) - 2.0 / (t2 * t))]
}

impl CutoffProfile {
    pub fn smoothstep(r0: f64, r1: f64) -> Result<Self> {
        let p = CutoffProfile::Smoothstep5 { r0, r1 };
        p.validate()?;
        Ok(p)
    }

    pub fn exp_bump(r0: f64, r1: f64) -> Result<Self> {
        let p = CutoffProfile::ExpBump { r0, r1 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (r0, r1) = self.radii();
        if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
            return Err(Error::Config(format!(
                "cutoff radii must satisfy 0 < r0 < r1, got r0={r0}, r1={r1}"
            )));
        }
        Ok(())
    }

    pub fn radii(&self) -> (f64, f64) {
        match *self {
            CutoffProfile::Smoothstep5 { r0, r1 } | CutoffProfile::ExpBump { r0, r1 } => (r0, r1),
        }
    }

    pub fn inner(&self) -> f64 {
        self.radii().0
    }

    pub fn outer(&self) -> f64 {
        self.radii().1
    }

    /// Profile value and its first two derivatives at radius `s`.
    pub fn eval(&self, s: f64) -> [f64; 3] {
        let (r0, r1) = self.radii();
        if s <= r0 {
            return [1.0, 0.0, 0.0];
        }
        if s >= r1 {
            return [0.0, 0.0, 0.0];
        }
        let w = r1 - r0;
        let t = (s - r0) / w;
        let [v, d1, d2] = match self {
            CutoffProfile::Smoothstep5 { .. } => {
                let t2 = t * t;
                let s0 = t2 * t * (10.0 - 15.0 * t + 6.0 * t2);
                let s1 = 30.0 * t2 * (1.0 - t) * (1.0 - t);
                let s2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
                [1.0 - s0, -s1, -s2]
            }
            CutoffProfile::ExpBump { .. } => {
                let [fa, fa1, fa2] = exp_inv(1.0 - t);
                let [fb, fb1, fb2] = exp_inv(t);
                let (a, a1, a2) = (fa, -fa1, fa2);
                let (b, b1, b2) = (fb, fb1, fb2);
                let sum = a + b;
                let num = a1 * b - a * b1;
                let den = sum * sum;
                let dnum = a2 * b - a * b2;
                let dden = 2.0 * sum * (a1 + b1);
                [a / sum, num / den, (dnum * den - num * dden) / (den * den)]
            }
        };
        [v, d1 / w, d2 / (w * w)]
    }

    pub fn value(&self, s: f64) -> f64 {
        self.eval(s)[0]
    }
}

/// A radial cutoff profile together with its scale `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialCutoff {
    pub profile: CutoffProfile,
    pub scale: f64,
}

impl Default for RadialCutoff {
    fn default() -> Self {
        Self {
            profile: CutoffProfile::default(),
            scale: 1.0,
        }
    }
}

impl fmt::Display for RadialCutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at R={}", self.profile, self.scale)
    }
}

impl RadialCutoff {
    pub fn new(profile: CutoffProfile, scale: f64) -> Result<Self> {
        profile.validate()?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Config(format!("cutoff scale must be positive, got {scale}")));
        }
        Ok(Self { profile, scale })
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        Self { scale, ..*self }
    }

    /// Radius beyond which `a_R` vanishes.
    pub fn support_radius(&self) -> f64 {
        self.profile.outer() * self.scale
    }

    /// Radius within which `a_R` is identically one.
    pub fn plateau_radius(&self) -> f64 {
        self.profile.inner() * self.scale
    }

    pub fn value(&self, x: [f64; 2]) -> f64 {
        self.profile.value(x[0].hypot(x[1]) / self.scale)
    }

    /// Radial derivative `d/dr a_R` at radius `r`.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        self.profile.eval(r / self.scale)[1] / self.scale
    }

    pub fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let d = self.radial_derivative(r);
        [d * x[0] / r, d * x[1] / r]
    }

    /// Value, gradient and Hessian `[d11, d12, d22]`.
    pub fn jet(&self, x: [f64; 2]) -> (f64, [f64; 2], [f64; 3]) {
        let r = x[0].hypot(x[1]);
        let [v, p1, p2] = self.profile.eval(r / self.scale);
        if r == 0.0 || (p1 == 0.0 && p2 == 0.0) {
            return (v, [0.0; 2], [0.0; 3]);
        }
        let d1 = p1 / self.scale;
        let d2 = p2 / (self.scale * self.scale);
        let (e0, e1) = (x[0] / r, x[1] / r);
        let grad = [d1 * e0, d1 * e1];
        let t = d1 / r;
        let hess = [
            d2 * e0 * e0 + t * (1.0 - e0 * e0),
            d2 * e0 * e1 - t * e0 * e1,
            d2 * e1 * e1 + t * (1.0 - e1 * e1),
        ];
        (v, grad, hess)
    }
}
