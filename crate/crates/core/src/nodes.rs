//! Lissajous node index sets and their coordinates on the sphere.
//!
//! The index set `I^(m)` holds all `(i1, i2)` with `0 ≤ i1 ≤ m1`,
//! `0 ≤ i2 < 2 m2`, `i1 + i2` even and `i2 < m2` on the pole rows
//! `i1 ∈ {0, m1}`. Node `i` sits at `θ = i1 π/m1`, `φ = i2 π/m2`, so every
//! index on a pole row names the same pole. The reduced set `I_S` keeps one
//! representative per pole and is in bijection with the node set on S².

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::curve::{eval_curve, CurveParams, FrequencyPair};
use crate::error::{Error, Result};
use crate::trig::sin_cos_pi_ratio;

/// Integer node index `(i1, i2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeIndex {
    pub i1: usize,
    pub i2: usize,
}

impl NodeIndex {
    pub const fn new(i1: usize, i2: usize) -> Self {
        Self { i1, i2 }
    }

    /// Membership in `I^(m)`.
    pub fn is_member(&self, m: &FrequencyPair) -> bool {
        let (m1, m2) = (m.m1(), m.m2());
        self.i1 <= m1
            && self.i2 < 2 * m2
            && (self.i1 + self.i2) % 2 == 0
            && (self.i2 < m2 || (self.i1 != 0 && self.i1 != m1))
    }

    /// Membership in the reduced set `I_S^(m)`.
    pub fn in_reduced_set(&self, m: &FrequencyPair) -> bool {
        self.is_member(m) && (!self.is_pole(m) || self.i2 <= 1)
    }

    #[inline]
    pub fn is_pole(&self, m: &FrequencyPair) -> bool {
        self.i1 == 0 || self.i1 == m.m1()
    }

    /// `I₀` (both even) or `I₁` (both odd).
    #[inline]
    pub fn parity(&self) -> Parity {
        if self.i1 % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::fmt::Display for NodeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.i1, self.i2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    /// `I₀`: both coordinates even.
    Even,
    /// `I₁`: both coordinates odd.
    Odd,
}

/// Spherical coordinates, `θ ∈ [0, π]` colatitude and `φ ∈ [0, 2π)` longitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// `θ = arccos(z)` with `z` clamped to `[−1, 1]`, `φ = atan2(y, x)` wrapped to `[0, 2π)`.
    pub fn from_cartesian(x: [f64; 3]) -> Self {
        let theta = x[2].clamp(-1.0, 1.0).acos();
        let mut phi = x[1].atan2(x[0]);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        if phi >= 2.0 * std::f64::consts::PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }
}

/// `I^(m)` in lexicographic `(i1, i2)` order.
#[derive(Debug, Clone)]
pub struct IndexSet {
    m: FrequencyPair,
    members: Vec<NodeIndex>,
    // dense (m1 + 1) × 2 m2 table of positions, usize::MAX for non-members
    position: Vec<usize>,
}

impl IndexSet {
    pub fn new(m: FrequencyPair) -> Result<Self> {
        m.require_even()?;
        let (m1, m2) = (m.m1(), m.m2());
        let mut members = Vec::with_capacity(m1 * m2);
        let mut position = vec![usize::MAX; (m1 + 1) * 2 * m2];
        for i1 in 0..=m1 {
            for i2 in 0..2 * m2 {
                let idx = NodeIndex::new(i1, i2);
                if idx.is_member(&m) {
                    position[i1 * 2 * m2 + i2] = members.len();
                    members.push(idx);
                }
            }
        }
        Ok(Self {
            m,
            members,
            position,
        })
    }

    #[inline]
    pub fn frequencies(&self) -> FrequencyPair {
        self.m
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn members(&self) -> &[NodeIndex] {
        &self.members
    }

    /// Canonical position of `i`, if it is a member.
    pub fn position(&self, i: NodeIndex) -> Option<usize> {
        if i.i1 > self.m.m1() || i.i2 >= 2 * self.m.m2() {
            return None;
        }
        match self.position[i.i1 * 2 * self.m.m2() + i.i2] {
            usize::MAX => None,
            p => Some(p),
        }
    }

    pub fn require_position(&self, i: NodeIndex) -> Result<usize> {
        self.position(i).ok_or_else(|| self.not_member(i, "I^(m)"))
    }

    pub(crate) fn not_member(&self, i: NodeIndex, set: &'static str) -> Error {
        Error::IndexNotInSet {
            i1: i.i1 as i64,
            i2: i.i2 as i64,
            m1: self.m.m1(),
            m2: self.m.m2(),
            set,
        }
    }

    pub fn parity_class(&self, parity: Parity) -> impl Iterator<Item = NodeIndex> + '_ {
        self.members.iter().copied().filter(move |i| i.parity() == parity)
    }

    /// Members of `I_S`, in canonical order.
    pub fn reduced(&self) -> impl Iterator<Item = NodeIndex> + '_ {
        self.members
            .iter()
            .copied()
            .filter(move |i| i.in_reduced_set(&self.m))
    }

    pub fn reduced_len(&self) -> usize {
        self.reduced().count()
    }

    /// All members of `I^(m)` that name the same point on S² as `i`.
    pub fn same_point(&self, i: NodeIndex) -> Vec<NodeIndex> {
        if i.is_pole(&self.m) {
            self.members.iter().copied().filter(|j| j.i1 == i.i1).collect()
        } else {
            vec![i]
        }
    }

    pub fn node_point(&self, i: NodeIndex) -> Result<(SphericalPoint, [f64; 3])> {
        node_point(&self.m, i)
    }
}

/// Spherical and Cartesian coordinates of node `i`. Poles come out exact.
pub fn node_point(m: &FrequencyPair, i: NodeIndex) -> Result<(SphericalPoint, [f64; 3])> {
    if !i.is_member(m) {
        return Err(Error::IndexNotInSet {
            i1: i.i1 as i64,
            i2: i.i2 as i64,
            m1: m.m1(),
            m2: m.m2(),
            set: "I^(m)",
        });
    }
    let (m1, m2) = (m.m1() as i64, m.m2() as i64);
    let (st, ct) = sin_cos_pi_ratio(i.i1 as i64, m1);
    let (sp, cp) = sin_cos_pi_ratio(i.i2 as i64, m2);
    let sph = SphericalPoint::new(
        i.i1 as f64 * std::f64::consts::PI / m1 as f64,
        i.i2 as f64 * std::f64::consts::PI / m2 as f64,
    );
    Ok((sph, [st * cp, st * sp, ct]))
}

/// Result of the class map `(l, ρ) ↦ (i, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecomposition {
    pub l: usize,
    pub rho: usize,
    pub v: i8,
    pub index: NodeIndex,
}

/// The unique `(i, v)` with `i1 ≡ v·l (mod 2m1)` and
/// `i2 ≡ l − 2ρ m2/g − (1−v)/2·m2 (mod 2m2)`.
pub fn class_map(m: &FrequencyPair, l: usize, rho: usize) -> Result<ClassDecomposition> {
    m.require_even()?;
    let (m1, m2, g) = (m.m1() as i64, m.m2() as i64, m.g() as i64);
    let h = 2 * m1 * m2 / g;
    if l as i64 >= h {
        return Err(Error::OutOfRange {
            what: "l",
            value: l as i64,
            bound: h,
        });
    }
    if rho as i64 >= g {
        return Err(Error::OutOfRange {
            what: "rho",
            value: rho as i64,
            bound: g,
        });
    }
    let li = l as i64;
    for v in [1i64, -1] {
        let i1 = (v * li).rem_euclid(2 * m1);
        if i1 > m1 {
            continue;
        }
        let i2 = (li - 2 * rho as i64 * m2 / g - (1 - v) / 2 * m2).rem_euclid(2 * m2);
        let index = NodeIndex::new(i1 as usize, i2 as usize);
        if index.is_member(m) {
            return Ok(ClassDecomposition {
                l,
                rho,
                v: v as i8,
                index,
            });
        }
    }
    unreachable!("class map is total for even m2")
}

/// One sample `ℓ_{2ρ/m2}(t_l)` of the generating curves together with the node it hits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverSample {
    pub rho: usize,
    pub l: usize,
    /// Rotation parameter of the generating curve, in units of π.
    pub alpha: f64,
    pub t: f64,
    pub point: [f64; 3],
    pub index: NodeIndex,
}

/// Samples of the `g` generating curves `ℓ_{2ρ/m2}` at `t_l`, `l < 2 m1 m2 / g`.
///
/// The samples cover every node, each index of `I^(m)` exactly twice.
pub fn curve_cover(m: &FrequencyPair) -> Result<Vec<CoverSample>> {
    m.require_even()?;
    let g = m.g();
    let h = 2 * m.product() / g;
    let step = std::f64::consts::PI / m.product() as f64;
    let mut out = Vec::with_capacity(g * h);
    for rho in 0..g {
        let alpha = 2.0 * rho as f64 / m.m2() as f64;
        let params = CurveParams::new(*m, alpha);
        for l in 0..h {
            let t = l as f64 * step;
            let index = cover_index(m, l, rho);
            out.push(CoverSample {
                rho,
                l,
                alpha,
                t,
                point: eval_curve(&params, t),
                index,
            });
        }
    }
    Ok(out)
}

/// Node hit by `ℓ_{2ρ/m2}(t_l)`: `θ = lπ/m1` folded into `[0, π]` and
/// `φ = (l − 2ρ)π/m2`, shifted by `π` when the fold flips the sign of `sin θ`.
fn cover_index(m: &FrequencyPair, l: usize, rho: usize) -> NodeIndex {
    let (m1, m2) = (m.m1() as i64, m.m2() as i64);
    let a = (l as i64).rem_euclid(2 * m1);
    let raw = l as i64 - 2 * rho as i64;
    let (i1, i2) = if a <= m1 { (a, raw) } else { (2 * m1 - a, raw + m2) };
    let i2 = if i1 == 0 || i1 == m1 {
        i2.rem_euclid(m2)
    } else {
        i2.rem_euclid(2 * m2)
    };
    NodeIndex::new(i1 as usize, i2 as usize)
}

/// Tolerance-based set of points in R³ backed by a spatial hash.
#[derive(Debug, Clone)]
pub struct PointSet {
    tol: f64,
    cell: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
    points: Vec<[f64; 3]>,
    counts: Vec<usize>,
}

impl PointSet {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            cell: (tol * 1e3).max(1e-12),
            cells: HashMap::new(),
            points: Vec::new(),
            counts: Vec::new(),
        }
    }

    fn key(&self, p: &[f64; 3]) -> [i64; 3] {
        p.map(|c| (c / self.cell).floor() as i64)
    }

    /// Position of a stored point within `tol` of `p`.
    pub fn find(&self, p: &[f64; 3]) -> Option<usize> {
        let k = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(bucket) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) else {
                        continue;
                    };
                    for &id in bucket {
                        let q = &self.points[id];
                        let d2 = (0..3).map(|a| (p[a] - q[a]).powi(2)).sum::<f64>();
                        if d2.sqrt() < self.tol {
                            return Some(id);
                        }
                    }
                }
            }
        }
        None
    }

    /// Inserts `p`, or bumps the multiplicity of a stored point within `tol`.
    /// Returns the position of the stored point.
    pub fn insert(&mut self, p: [f64; 3]) -> usize {
        if let Some(id) = self.find(&p) {
            self.counts[id] += 1;
            return id;
        }
        let id = self.points.len();
        let k = self.key(&p);
        self.cells.entry(k).or_default().push(id);
        self.points.push(p);
        self.counts.push(1);
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Number of insertions that landed on each stored point.
    pub fn multiplicities(&self) -> &[usize] {
        &self.counts
    }
}
