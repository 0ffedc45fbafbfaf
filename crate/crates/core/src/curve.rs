//! Spherical Lissajous curves
//!
//! ```text
//! ℓ(t) = ( sin(m2 t) cos(m1 t − απ), sin(m2 t) sin(m1 t − απ), cos(m2 t) )
//! ```
//!
//! together with their canonical sampling times and the classification of
//! self-intersection points.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trig::gcd;

/// Default snapping tolerance of [`classify_time`].
pub const DEFAULT_TIME_TOL: f64 = 1e-9;

/// A validated frequency pair `m = (m1, m2)` together with `g = gcd(m1, m2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct FrequencyPair {
    m1: usize,
    m2: usize,
    g: usize,
}

impl FrequencyPair {
    /// Frequencies usable for node sets and interpolation: both positive, `m2` even.
    pub fn new(m1: usize, m2: usize) -> Result<Self> {
        let m = Self::general(m1, m2)?;
        if m2 % 2 != 0 {
            return Err(Error::OddM2(m2));
        }
        Ok(m)
    }

    /// Any positive pair. Only curve evaluation and intersection
    /// classification accept odd `m2`.
    pub fn general(m1: usize, m2: usize) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::ZeroFrequency { m1, m2 });
        }
        Ok(Self {
            m1,
            m2,
            g: gcd(m1, m2),
        })
    }

    #[inline]
    pub fn m1(&self) -> usize {
        self.m1
    }

    #[inline]
    pub fn m2(&self) -> usize {
        self.m2
    }

    /// `gcd(m1, m2)`.
    #[inline]
    pub fn g(&self) -> usize {
        self.g
    }

    #[inline]
    pub fn is_coprime(&self) -> bool {
        self.g == 1
    }

    #[inline]
    pub fn m2_is_even(&self) -> bool {
        self.m2 % 2 == 0
    }

    /// `m / g`, always coprime.
    pub fn reduced(&self) -> Self {
        Self {
            m1: self.m1 / self.g,
            m2: self.m2 / self.g,
            g: 1,
        }
    }

    /// `m1 · m2`, the dimension of the interpolation space.
    #[inline]
    pub fn product(&self) -> usize {
        self.m1 * self.m2
    }

    /// Number of Lissajous nodes, `(m1 − 1)·m2 + 2`.
    #[inline]
    pub fn node_count(&self) -> usize {
        (self.m1 - 1) * self.m2 + 2
    }

    pub(crate) fn require_even(&self) -> Result<()> {
        if self.m2_is_even() {
            Ok(())
        } else {
            Err(Error::OddM2(self.m2))
        }
    }
}

impl TryFrom<[usize; 2]> for FrequencyPair {
    type Error = Error;

    fn try_from(v: [usize; 2]) -> Result<Self> {
        Self::general(v[0], v[1])
    }
}

impl From<FrequencyPair> for [usize; 2] {
    fn from(m: FrequencyPair) -> Self {
        [m.m1, m.m2]
    }
}

impl std::fmt::Display for FrequencyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.m1, self.m2)
    }
}

/// Frequencies plus the rotation parameter `α`, stored in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub m: FrequencyPair,
    pub alpha: f64,
}

impl CurveParams {
    pub fn new(m: FrequencyPair, alpha: f64) -> Self {
        Self { m, alpha }
    }
}

/// Point `ℓ(t)` on the unit sphere.
pub fn eval_curve(p: &CurveParams, t: f64) -> [f64; 3] {
    let (s2, c2) = (p.m.m2 as f64 * t).sin_cos();
    let (s1, c1) = (p.m.m1 as f64 * t - p.alpha * PI).sin_cos();
    [s2 * c1, s2 * s1, c2]
}

/// The `2·m1·m2` equidistant times `lπ/(m1 m2)`, or the half-integer grid
/// `(l + ½)π/(m1 m2)` when `shifted` is set.
pub fn sample_times(m: &FrequencyPair, shifted: bool) -> Vec<f64> {
    let n = m.product();
    let offset = if shifted { 0.5 } else { 0.0 };
    (0..2 * n)
        .map(|l| (l as f64 + offset) * PI / n as f64)
        .collect()
}

/// Position of a time on one of the sampling grids of a coprime curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GridHit {
    Integer(usize),
    HalfInteger(usize),
    Off,
}

fn snap(reduced: &FrequencyPair, t: f64, tol: f64) -> GridHit {
    let n = reduced.product();
    let period = 2 * n;
    let step = PI / n as f64;
    let x = t / step;

    let l = x.round();
    if (t - l * step).abs() < tol {
        return GridHit::Integer((l as i64).rem_euclid(period as i64) as usize);
    }
    let l = (x - 0.5).round();
    if (t - (l + 0.5) * step).abs() < tol {
        return GridHit::HalfInteger((l as i64).rem_euclid(period as i64) as usize);
    }
    GridHit::Off
}

/// Number of parameters `s ∈ [0, 2π)` with `ℓ(s) = ℓ(t)`.
///
/// For non-coprime `m` the curve is rewritten as `ℓ^(m)(t) = ℓ^(m/g)(g t)`
/// and the multiplicity refers to the reduced curve. `t` is snapped to the
/// sampling grids when within `tol` of a grid time.
pub fn classify_time(m: &FrequencyPair, t: f64, tol: f64) -> Result<usize> {
    if !t.is_finite() {
        return Err(Error::NonFinite("t"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    let r = m.reduced();
    let t = (m.g as f64 * t).rem_euclid(2.0 * PI);
    let hit = snap(&r, t, tol);
    let mult = match hit {
        GridHit::Integer(l) if l % r.m1 == 0 => r.m2,
        GridHit::Integer(_) if r.m2_is_even() => 2,
        GridHit::HalfInteger(_) if !r.m2_is_even() => 2,
        _ => 1,
    };
    Ok(mult)
}

/// Counts of self-intersection points of `ℓ^(m)` over one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionSummary {
    /// Number of poles that are self-intersection points.
    pub pole_count: usize,
    /// How often each such pole is traversed in one period.
    pub pole_traversals: usize,
    pub double_point_count: usize,
    pub total: usize,
}

/// Intersection counts for the reduced pair `m / g`.
pub fn intersection_summary(m: &FrequencyPair) -> IntersectionSummary {
    let r = m.reduced();
    let (m1, m2) = (r.m1, r.m2);
    if m2 % 2 == 0 {
        IntersectionSummary {
            pole_count: 2,
            pole_traversals: m2,
            double_point_count: m2 * (m1 - 1),
            total: m2 * (m1 - 1) + 2,
        }
    } else if m2 > 1 {
        IntersectionSummary {
            pole_count: 2,
            pole_traversals: m2,
            double_point_count: m1 * m2,
            total: m1 * m2 + 2,
        }
    } else {
        IntersectionSummary {
            pole_count: 0,
            pole_traversals: 0,
            double_point_count: m1,
            total: m1,
        }
    }
}
