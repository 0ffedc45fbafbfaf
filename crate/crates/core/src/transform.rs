//! Forward and inverse transforms between node data and spectral coefficients,
//! interpolant evaluation and Lagrange functions.
//!
//! Node data on `I^(m)` is embedded into the group grid `J^(m) = [0, 2m1) × [0, 2m2)`
//! together with its image under the flip `i* = (−i1 mod 2m1, i2 + m2 mod 2m2)`.
//! One 2-D DFT of that grid yields `ĝ(γ) = ⟨f, χ_γ⟩` for every `γ ∈ Γ̄^(m)`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::curve::FrequencyPair;
use crate::error::{Error, Result};
use crate::nodes::{IndexSet, NodeIndex, SphericalPoint};
use crate::spectral::{
    basis_x, basis_x_with_gradient, complex_norm_sq, conj_partner_sign, real_norm_rule,
    real_part_rule, RealPart, SpectralClass, SpectralSet, Variant,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Points with `hypot(x, y) ≤ POLAR_AXIS_TOL·|z|` count as poles in
/// [`Interpolant::evaluate_cartesian`].
pub const POLAR_AXIS_TOL: f64 = 1e-14;

/// Relative tolerance for deciding whether pole rows carry one value.
pub const POLE_TOL: f64 = 1e-12;

/// Values on `I^(m)` in canonical index order.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeData {
    m: FrequencyPair,
    values: Vec<Complex64>,
}

impl NodeData {
    pub fn new(m: FrequencyPair, values: Vec<Complex64>) -> Result<Self> {
        m.require_even()?;
        if values.len() != m.product() {
            return Err(Error::SizeMismatch {
                expected: m.product(),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("node value"));
        }
        Ok(Self { m, values })
    }

    pub fn from_real(m: FrequencyPair, values: &[f64]) -> Result<Self> {
        Self::new(m, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Evaluates `f` at every index of `set`.
    pub fn from_fn<T, F>(set: &IndexSet, f: F) -> Self
    where
        T: Into<Complex64>,
        F: Fn(NodeIndex) -> T,
    {
        let values = set.members().iter().map(|&i| f(i).into()).collect();
        Self {
            m: set.frequencies(),
            values,
        }
    }

    /// Samples a function of `(θ, φ)` at the node coordinates `(i1π/m1, i2π/m2)`.
    pub fn sample<T, F>(set: &IndexSet, sampler: F) -> Self
    where
        T: Into<Complex64>,
        F: Fn(f64, f64) -> T,
    {
        let m = set.frequencies();
        let (m1, m2) = (m.m1() as f64, m.m2() as f64);
        Self::from_fn(set, |i| {
            sampler(
                i.i1 as f64 * std::f64::consts::PI / m1,
                i.i2 as f64 * std::f64::consts::PI / m2,
            )
        })
    }

    #[inline]
    pub fn frequencies(&self) -> FrequencyPair {
        self.m
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// True iff the data is constant on `{i1 = 0}` and on `{i1 = m1}` (relative
    /// tolerance [`POLE_TOL`]).
    pub fn is_pole_consistent(&self) -> bool {
        let set = IndexSet::new(self.m).expect("validated frequencies");
        let m1 = self.m.m1();
        [0, m1].iter().all(|&row| {
            let vals: Vec<Complex64> = set
                .members()
                .iter()
                .zip(&self.values)
                .filter(|(i, _)| i.i1 == row)
                .map(|(_, &v)| v)
                .collect();
            let v0 = vals[0];
            let tol = POLE_TOL * v0.norm().max(1.0);
            vals.iter().all(|v| (v - v0).norm() <= tol)
        })
    }

    pub fn max_abs_diff(&self, other: &NodeData) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Values on the group grid `J^(m)`, row-major with `2m1` rows of `2m2` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupGrid {
    m: FrequencyPair,
    values: Vec<Complex64>,
}

impl GroupGrid {
    #[inline]
    pub fn frequencies(&self) -> FrequencyPair {
        self.m
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, j1: usize, j2: usize) -> Complex64 {
        self.values[j1 * 2 * self.m.m2() + j2]
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|v| **v != ZERO).count()
    }
}

/// The flip `i* = ((2m1 − i1) mod 2m1, (i2 + m2) mod 2m2)` on `J^(m)`.
#[inline]
pub fn flip(m: &FrequencyPair, j1: usize, j2: usize) -> (usize, usize) {
    let (m1, m2) = (m.m1(), m.m2());
    ((2 * m1 - j1 % (2 * m1)) % (2 * m1), (j2 + m2) % (2 * m2))
}

/// `g(i) = f(i)/(2 m1 m2)` on `I^(m)` and `g(i*) = g(i)`, zero elsewhere.
pub fn extend_to_group(f: &NodeData) -> GroupGrid {
    let m = f.frequencies();
    let set = IndexSet::new(m).expect("validated frequencies");
    let cols = 2 * m.m2();
    let mut values = vec![ZERO; 4 * m.product()];
    let scale = 1.0 / (2 * m.product()) as f64;
    for (&i, &v) in set.members().iter().zip(f.values()) {
        let (k1, k2) = flip(&m, i.i1, i.i2);
        values[i.i1 * cols + i.i2] = v * scale;
        values[k1 * cols + k2] = v * scale;
    }
    GroupGrid { m, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Coefficients of `X_γ`, `γ ∈ Γ^(m)`.
    #[default]
    Complex,
    /// Coefficients of `X_{R,γ}`, `γ ∈ Γ^(m)`.
    Real,
    /// Coefficients of `X_γ` over all of `Γ̄^(m)`, split evenly between the
    /// linearly dependent classes.
    Averaged,
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Flavor::Complex => "complex",
            Flavor::Real => "real",
            Flavor::Averaged => "averaged",
        })
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(Flavor::Complex),
            "real" => Ok(Flavor::Real),
            "averaged" => Ok(Flavor::Averaged),
            other => Err(Error::Invalid(format!("unknown flavor {other:?}"))),
        }
    }
}

/// A trigonometric interpolant with its coefficients stored densely over `Γ̄^(m)`.
///
/// Excluded indices hold zero for the complex and real flavors.
#[derive(Debug, Clone)]
pub struct Interpolant {
    spectral: Arc<SpectralSet>,
    flavor: Flavor,
    coefficients: Vec<Complex64>,
    // the same function expanded in X_γ over Γ̄
    expansion: Vec<Complex64>,
    pole_consistent: bool,
}

impl Interpolant {
    /// Builds an interpolant from native coefficients of the given flavor.
    ///
    /// Entries outside the flavor's index set are rejected.
    pub fn from_coefficients(
        m: FrequencyPair,
        flavor: Flavor,
        variant: Variant,
        entries: impl IntoIterator<Item = ((i64, i64), Complex64)>,
    ) -> Result<Self> {
        let spectral = Arc::new(SpectralSet::new(m, variant)?);
        let mut coefficients = vec![ZERO; spectral.members().len()];
        for ((g1, g2), c) in entries {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite("coefficient"));
            }
            let ok = match flavor {
                Flavor::Averaged => spectral.position(g1, g2).is_some(),
                _ => spectral.is_selected(g1, g2),
            };
            if !ok {
                return Err(Error::SpectralIndexNotInSet { g1, g2 });
            }
            coefficients[spectral.position(g1, g2).unwrap()] += c;
        }
        Ok(Self::assemble(spectral, flavor, coefficients, true))
    }

    fn assemble(
        spectral: Arc<SpectralSet>,
        flavor: Flavor,
        coefficients: Vec<Complex64>,
        pole_consistent: bool,
    ) -> Self {
        let expansion = expand(&spectral, flavor, &coefficients);
        Self {
            spectral,
            flavor,
            coefficients,
            expansion,
            pole_consistent,
        }
    }

    #[inline]
    pub fn frequencies(&self) -> FrequencyPair {
        self.spectral.frequencies()
    }

    #[inline]
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    #[inline]
    pub fn variant(&self) -> Variant {
        self.spectral.variant()
    }

    #[inline]
    pub fn spectral_set(&self) -> &SpectralSet {
        &self.spectral
    }

    /// False when the source data had differing values at one pole; the
    /// interpolant is then unique only in `Π^(m)`.
    #[inline]
    pub fn pole_consistent(&self) -> bool {
        self.pole_consistent
    }

    /// Native coefficient at `γ`; zero for excluded indices, `None` outside `Γ̄^(m)`.
    pub fn coefficient(&self, g1: i64, g2: i64) -> Option<Complex64> {
        self.spectral
            .position(g1, g2)
            .map(|p| self.coefficients[p])
    }

    /// `(γ1, γ2, c)` over the flavor's index set in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        self.spectral
            .members()
            .iter()
            .zip(&self.coefficients)
            .filter(|(s, _)| {
                self.flavor == Flavor::Averaged || self.spectral.is_selected_class(s.class)
            })
            .map(|(s, &c)| (s.g1, s.g2, c))
    }

    /// Coefficients of the same function in the `X_γ` basis over `Γ̄^(m)`.
    pub fn x_expansion(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        self.spectral
            .members()
            .iter()
            .zip(&self.expansion)
            .map(|(s, &c)| (s.g1, s.g2, c))
    }

    pub fn evaluate(&self, theta: f64, phi: f64) -> Complex64 {
        self.spectral
            .members()
            .iter()
            .zip(&self.expansion)
            .filter(|(_, c)| **c != ZERO)
            .map(|(s, c)| c * basis_x(s.g1, s.g2, theta, phi))
            .sum()
    }

    /// Value at a point of `R³` (projected to the sphere).
    ///
    /// On the polar axis, where `P` depends on the direction of approach, the
    /// mean over `φ` is returned. For pole-consistent data this is the pole value.
    pub fn evaluate_cartesian(&self, x: [f64; 3]) -> Complex64 {
        if x[0].hypot(x[1]) <= POLAR_AXIS_TOL * x[2].abs() {
            let theta = if x[2] > 0.0 { 0.0 } else { std::f64::consts::PI };
            return self.pole_mean(theta);
        }
        let p = SphericalPoint::from_cartesian(x);
        self.evaluate(p.theta, p.phi)
    }

    /// `(1/2π) ∫ P(θ, φ) dφ` for `θ` on a pole; only `γ2 = 0` survives.
    pub fn pole_mean(&self, theta: f64) -> Complex64 {
        self.x_expansion()
            .filter(|&(_, g2, _)| g2 == 0)
            .map(|(g1, _, c)| c * (g1 as f64 * theta).cos())
            .sum()
    }

    /// Value and partial derivatives `[P, ∂P/∂θ, ∂P/∂φ]`.
    pub fn evaluate_with_gradient(&self, theta: f64, phi: f64) -> [Complex64; 3] {
        let mut out = [ZERO; 3];
        for (s, c) in self.spectral.members().iter().zip(&self.expansion) {
            if *c == ZERO {
                continue;
            }
            let b = basis_x_with_gradient(s.g1, s.g2, theta, phi);
            for k in 0..3 {
                out[k] += c * b[k];
            }
        }
        out
    }

    /// Values on the tensor grid `thetas × phis`, row-major by `θ`.
    pub fn evaluate_grid(&self, thetas: &[f64], phis: &[f64]) -> Vec<Complex64> {
        let m = self.frequencies();
        let m2 = m.m2() as i64;
        let width = (2 * m2 - 1) as usize;
        // e^{iγ2 φ} for γ2 ∈ (−m2, m2), one row per φ
        let phase: Vec<Complex64> = phis
            .iter()
            .flat_map(|&p| (-(m2 - 1)..m2).map(move |g2| Complex64::from_polar(1.0, g2 as f64 * p)))
            .collect();
        let members = self.spectral.members();
        let mut out = vec![ZERO; thetas.len() * phis.len()];
        out.par_chunks_mut(phis.len().max(1))
            .zip(thetas.par_iter())
            .for_each(|(row, &theta)| {
                let mut col = vec![ZERO; width];
                for (s, &c) in members.iter().zip(&self.expansion) {
                    if c == ZERO {
                        continue;
                    }
                    let (sn, cs) = (s.g1 as f64 * theta).sin_cos();
                    let t = if s.g2.rem_euclid(2) == 0 {
                        Complex64::new(cs, 0.0)
                    } else {
                        I * sn
                    };
                    col[(s.g2 + m2 - 1) as usize] += c * t;
                }
                for (v, ph) in row.iter_mut().zip(phase.chunks(width)) {
                    *v = col.iter().zip(ph).map(|(a, b)| a * b).sum();
                }
            });
        out
    }
}

/// Rewrites native coefficients of any flavor as coefficients of `X_γ` over `Γ̄`.
fn expand(spectral: &SpectralSet, flavor: Flavor, coefficients: &[Complex64]) -> Vec<Complex64> {
    if flavor != Flavor::Real {
        return coefficients.to_vec();
    }
    let m = spectral.frequencies();
    let mut a = vec![ZERO; coefficients.len()];
    for (s, &c) in spectral.members().iter().zip(coefficients) {
        if c == ZERO {
            continue;
        }
        let p = spectral.position(s.g1, s.g2).unwrap();
        let q = spectral.position(s.g1, -s.g2).unwrap();
        let sign = conj_partner_sign(s.g2);
        // Re X = (X_γ + (−1)^γ2 X_(γ1,−γ2))/2,  Im X = (X_γ − (−1)^γ2 X_(γ1,−γ2))/(2i)
        match real_part_rule(&m, spectral.variant(), s.class, s.g1, s.g2) {
            RealPart::Re => {
                a[p] += c * 0.5;
                a[q] += c * (0.5 * sign);
            }
            RealPart::Im => {
                let h = c / (2.0 * I);
                a[p] += h;
                a[q] -= h * sign;
            }
        }
    }
    a
}

/// Reusable FFT plans and index sets for one frequency pair.
#[derive(Clone)]
pub struct Scheme {
    set: IndexSet,
    spectral: Arc<SpectralSet>,
    row_fwd: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scheme")
            .field("m", &self.set.frequencies())
            .field("variant", &self.spectral.variant())
            .finish()
    }
}

impl Scheme {
    pub fn new(m: FrequencyPair, variant: Variant) -> Result<Self> {
        let set = IndexSet::new(m)?;
        let spectral = Arc::new(SpectralSet::new(m, variant)?);
        let mut planner = FftPlanner::new();
        Ok(Self {
            set,
            spectral,
            row_fwd: planner.plan_fft_forward(2 * m.m2()),
            col_fwd: planner.plan_fft_forward(2 * m.m1()),
            row_inv: planner.plan_fft_inverse(2 * m.m2()),
            col_inv: planner.plan_fft_inverse(2 * m.m1()),
        })
    }

    #[inline]
    pub fn frequencies(&self) -> FrequencyPair {
        self.set.frequencies()
    }

    #[inline]
    pub fn index_set(&self) -> &IndexSet {
        &self.set
    }

    #[inline]
    pub fn spectral_set(&self) -> &SpectralSet {
        &self.spectral
    }

    #[inline]
    pub fn variant(&self) -> Variant {
        self.spectral.variant()
    }

    fn check(&self, f: &NodeData) -> Result<()> {
        let (a, b) = (self.frequencies(), f.frequencies());
        if a != b {
            return Err(Error::FrequencyMismatch(a.m1(), a.m2(), b.m1(), b.m2()));
        }
        Ok(())
    }

    fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        let m = self.frequencies();
        let (rows, cols) = (2 * m.m1(), 2 * m.m2());
        let (row, col) = if inverse {
            (&self.row_inv, &self.col_inv)
        } else {
            (&self.row_fwd, &self.col_fwd)
        };
        row.process(data);
        let mut t = transpose(data, rows, cols);
        col.process(&mut t);
        data.copy_from_slice(&transpose(&t, cols, rows));
    }

    /// `ĝ` on `J^(m)`: the forward DFT of the group grid.
    pub fn spectrum(&self, f: &NodeData) -> Result<GroupGrid> {
        self.check(f)?;
        let mut g = extend_to_group(f);
        self.fft2(&mut g.values, false);
        Ok(g)
    }

    pub fn forward(&self, f: &NodeData, flavor: Flavor) -> Result<Interpolant> {
        let g = self.spectrum(f)?;
        let m = self.frequencies();
        let m2 = m.m2() as i64;
        let ghat = |g1: i64, g2: i64| g.get(g1 as usize, g2.rem_euclid(2 * m2) as usize);
        let sp = &self.spectral;
        let real_data = f.is_real();
        let coefficients = sp
            .members()
            .iter()
            .map(|s| {
                let (g1, g2) = (s.g1, s.g2);
                let norm = complex_norm_sq(&m, g1);
                match flavor {
                    Flavor::Complex if sp.is_selected_class(s.class) => ghat(g1, g2) / norm,
                    Flavor::Complex => ZERO,
                    Flavor::Averaged => {
                        let c = ghat(g1, g2) / norm;
                        if matches!(s.class, SpectralClass::Upper | SpectralClass::Lower) {
                            c * 0.5
                        } else {
                            c
                        }
                    }
                    Flavor::Real if sp.is_selected_class(s.class) => {
                        let a = ghat(g1, g2);
                        let b = ghat(g1, -g2) * conj_partner_sign(g2);
                        let ip = match real_part_rule(&m, sp.variant(), s.class, g1, g2) {
                            RealPart::Re => (a + b) * 0.5,
                            RealPart::Im => (a - b) * (0.5 * I),
                        };
                        let c = ip / real_norm_rule(&m, sp.variant(), g1, g2);
                        if real_data {
                            Complex64::new(c.re, 0.0)
                        } else {
                            c
                        }
                    }
                    Flavor::Real => ZERO,
                }
            })
            .collect();
        Ok(Interpolant::assemble(
            self.spectral.clone(),
            flavor,
            coefficients,
            f.is_pole_consistent(),
        ))
    }

    /// Node values of an `X_γ` expansion over `Γ̄^(m)` via one inverse DFT.
    fn synthesize(&self, expansion: &[Complex64]) -> Vec<Complex64> {
        let m = self.frequencies();
        let (m1, m2) = (m.m1() as i64, m.m2() as i64);
        let cols = 2 * m.m2();
        let mut h = vec![ZERO; 4 * m.product()];
        let at = |g1: i64, g2: i64| g1 as usize * cols + g2.rem_euclid(2 * m2) as usize;
        for (s, &c) in self.spectral.members().iter().zip(expansion) {
            if c == ZERO {
                continue;
            }
            if s.g1 == 0 || s.g1 == m1 {
                // odd γ2 carries sin(γ1 θ), which vanishes on both pole rows
                if s.g2 % 2 == 0 {
                    h[at(s.g1, s.g2)] += c;
                }
            } else {
                h[at(s.g1, s.g2)] += c * 0.5;
                h[at(2 * m1 - s.g1, s.g2)] += c * (0.5 * conj_partner_sign(s.g2));
            }
        }
        self.fft2(&mut h, true);
        self.set
            .members()
            .iter()
            .map(|i| h[i.i1 * cols + i.i2])
            .collect()
    }

    /// Node values of `p`; `inverse(forward(f)) = f`.
    pub fn inverse(&self, p: &Interpolant) -> Result<NodeData> {
        let (a, b) = (self.frequencies(), p.frequencies());
        if a != b {
            return Err(Error::FrequencyMismatch(a.m1(), a.m2(), b.m1(), b.m2()));
        }
        Ok(NodeData {
            m: a,
            values: self.synthesize(&p.expansion),
        })
    }

    /// Samples `sampler` at the node coordinates and transforms.
    pub fn interpolate_samples<T, F>(&self, sampler: F, flavor: Flavor) -> Result<Interpolant>
    where
        T: Into<Complex64>,
        F: Fn(f64, f64) -> T,
    {
        self.forward(&NodeData::sample(&self.set, sampler), flavor)
    }

    /// `L_i(θ, φ) = (1/(m1 m2)) Σ_{γ∈Γ} conj(χ_γ(i)) X_γ(θ, φ) / ‖χ_γ‖²`.
    pub fn lagrange(&self, i: NodeIndex, theta: f64, phi: f64) -> Result<Complex64> {
        self.set.require_position(i)?;
        let m = self.frequencies();
        let s: Complex64 = self
            .spectral
            .selected()
            .map(|s| {
                crate::spectral::chi(&m, s.g1, s.g2, i).conj() * basis_x(s.g1, s.g2, theta, phi)
                    / complex_norm_sq(&m, s.g1)
            })
            .sum();
        Ok(s / m.product() as f64)
    }

    /// `L_{S,i}`: the sum of `L_j` over all `j` sharing the pole row of `i`.
    pub fn lagrange_s(&self, i: NodeIndex, theta: f64, phi: f64) -> Result<Complex64> {
        let m = self.frequencies();
        if !i.in_reduced_set(&m) {
            return Err(self.set.not_member(i, "I_S"));
        }
        self.set
            .same_point(i)
            .into_iter()
            .map(|j| self.lagrange(j, theta, phi))
            .sum()
    }

    /// All `L_i(θ, φ)`, `i ∈ I^(m)` in canonical order, via one inverse DFT.
    pub fn lagrange_all(&self, theta: f64, phi: f64) -> Vec<Complex64> {
        let m = self.frequencies();
        let scale = 1.0 / m.product() as f64;
        // conj(χ_γ(i)) = (−1)^γ2 χ_(γ1,−γ2)(i), so L is an expansion with
        // coefficient (−1)^γ2 X_γ(θ,φ)/(m1 m2 ‖χ_γ‖²) at (γ1, −γ2).
        let mut b = vec![ZERO; self.spectral.members().len()];
        for s in self.spectral.selected() {
            let q = self.spectral.position(s.g1, -s.g2).unwrap();
            b[q] += basis_x(s.g1, s.g2, theta, phi)
                * (conj_partner_sign(s.g2) * scale / complex_norm_sq(&m, s.g1));
        }
        self.synthesize(&b)
    }
}

fn transpose(a: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut t = vec![ZERO; a.len()];
    for r in 0..rows {
        for c in 0..cols {
            t[c * rows + r] = a[r * cols + c];
        }
    }
    t
}

/// One-shot forward transform with the default variant.
pub fn forward(f: &NodeData, flavor: Flavor) -> Result<Interpolant> {
    Scheme::new(f.frequencies(), Variant::default())?.forward(f, flavor)
}

/// One-shot inverse transform.
pub fn inverse(p: &Interpolant) -> Result<NodeData> {
    Scheme::new(p.frequencies(), p.variant())?.inverse(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::chi;
    use std::f64::consts::PI;

    fn m(m1: usize, m2: usize) -> FrequencyPair {
        FrequencyPair::new(m1, m2).unwrap()
    }

    fn pseudo_random(n: usize, seed: u64) -> Vec<Complex64> {
        // small LCG keeps unit tests free of extra dependencies
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..n).map(|_| Complex64::new(next(), next())).collect()
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip(&m(7, 6), 1, 1), (13, 7));
        let mm = m(4, 6);
        for j1 in 0..8 {
            for j2 in 0..12 {
                let (k1, k2) = flip(&mm, j1, j2);
                assert_ne!((k1, k2), (j1, j2));
                assert_eq!(flip(&mm, k1, k2), (j1, j2));
            }
        }
    }

    #[test]
    fn group_extension_of_constant() {
        let mm = m(1, 2);
        let set = IndexSet::new(mm).unwrap();
        let g = extend_to_group(&NodeData::from_fn(&set, |_| 1.0));
        let mut expected = [ZERO; 8];
        for (a, b) in [(0, 0), (0, 2), (1, 1), (1, 3)] {
            expected[a * 4 + b] = Complex64::new(0.25, 0.0);
        }
        assert_eq!(g.values(), &expected[..]);
        let mm = m(7, 6);
        let set = IndexSet::new(mm).unwrap();
        let g = extend_to_group(&NodeData::from_fn(&set, |_| 1.0));
        assert_eq!(g.nonzero_count(), 2 * mm.product());
    }

    #[test]
    fn constant_has_single_coefficient() {
        for flavor in [Flavor::Complex, Flavor::Real, Flavor::Averaged] {
            let s = Scheme::new(m(7, 6), Variant::ExcludeU).unwrap();
            let p = s.interpolate_samples(|_, _| 1.0, flavor).unwrap();
            for (g1, g2, c) in p.entries() {
                let e = if (g1, g2) == (0, 0) { 1.0 } else { 0.0 };
                assert!((c - e).norm() < 1e-13, "{flavor} ({g1},{g2}) {c}");
            }
        }
    }

    #[test]
    fn basis_functions_are_reproduced() {
        for variant in [Variant::ExcludeU, Variant::ExcludeD] {
            for mm in [m(7, 6), m(6, 6), m(4, 4)] {
                let s = Scheme::new(mm, variant).unwrap();
                for t in s.spectral_set().selected() {
                    let p = s
                        .interpolate_samples(|th, ph| basis_x(t.g1, t.g2, th, ph), Flavor::Complex)
                        .unwrap();
                    for (g1, g2, c) in p.entries() {
                        let e = if (g1, g2) == (t.g1, t.g2) { 1.0 } else { 0.0 };
                        assert!((c - e).norm() < 1e-12, "{mm} {t:?} at ({g1},{g2}): {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn evaluation_reproduces_basis_off_nodes() {
        let s = Scheme::new(m(7, 6), Variant::ExcludeU).unwrap();
        let p = s
            .interpolate_samples(|th, ph| basis_x(1, 1, th, ph), Flavor::Complex)
            .unwrap();
        let v = p.evaluate(PI / 3.0, PI / 5.0);
        let e = I * (PI / 3.0).sin() * Complex64::from_polar(1.0, PI / 5.0);
        assert!((v - e).norm() < 1e-13);
    }

    #[test]
    fn round_trip_all_flavors() {
        for variant in [Variant::ExcludeU, Variant::ExcludeD] {
            for mm in [m(7, 6), m(6, 6), m(4, 4), m(1, 2), m(15, 16), m(3, 4)] {
                let s = Scheme::new(mm, variant).unwrap();
                let f = NodeData::new(mm, pseudo_random(mm.product(), 7)).unwrap();
                let re = NodeData::from_real(
                    mm,
                    &pseudo_random(mm.product(), 11).iter().map(|c| c.re).collect::<Vec<_>>(),
                )
                .unwrap();
                for flavor in [Flavor::Complex, Flavor::Real, Flavor::Averaged] {
                    for data in [&f, &re] {
                        let p = s.forward(data, flavor).unwrap();
                        let back = s.inverse(&p).unwrap();
                        assert!(back.max_abs_diff(data) < 1e-12, "{mm} {flavor} {variant:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn real_flavor_on_real_data_is_real() {
        let mm = m(7, 6);
        let s = Scheme::new(mm, Variant::ExcludeU).unwrap();
        let p = s
            .interpolate_samples(|t, p| (t.cos() + 0.3 * p.sin()).exp(), Flavor::Real)
            .unwrap();
        assert!(p.entries().all(|(_, _, c)| c.im == 0.0));
        for (t, ph) in [(0.3, 1.0), (2.0, 5.5), (0.0, 0.7)] {
            assert!(p.evaluate(t, ph).im.abs() < 1e-13);
        }
    }

    #[test]
    fn interpolation_condition() {
        let mm = m(7, 6);
        let s = Scheme::new(mm, Variant::ExcludeU).unwrap();
        let f = NodeData::new(mm, pseudo_random(mm.product(), 3)).unwrap();
        for flavor in [Flavor::Complex, Flavor::Real, Flavor::Averaged] {
            let p = s.forward(&f, flavor).unwrap();
            assert!(!p.pole_consistent());
            for (&i, &v) in s.index_set().members().iter().zip(f.values()) {
                let th = i.i1 as f64 * PI / 7.0;
                let ph = i.i2 as f64 * PI / 6.0;
                assert!((p.evaluate(th, ph) - v).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_matches_pointwise() {
        let mm = m(6, 6);
        let s = Scheme::new(mm, Variant::ExcludeU).unwrap();
        let f = NodeData::new(mm, pseudo_random(mm.product(), 5)).unwrap();
        let thetas: Vec<f64> = (0..9).map(|a| a as f64 * PI / 8.0).collect();
        let phis: Vec<f64> = (0..10).map(|b| b as f64 * 2.0 * PI / 10.0).collect();
        for flavor in [Flavor::Complex, Flavor::Real, Flavor::Averaged] {
            let p = s.forward(&f, flavor).unwrap();
            let grid = p.evaluate_grid(&thetas, &phis);
            for (a, &t) in thetas.iter().enumerate() {
                for (b, &ph) in phis.iter().enumerate() {
                    assert!((grid[a * phis.len() + b] - p.evaluate(t, ph)).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn gradient_matches_difference_quotient() {
        let mm = m(7, 6);
        let s = Scheme::new(mm, Variant::ExcludeU).unwrap();
        let f = NodeData::new(mm, pseudo_random(mm.product(), 9)).unwrap();
        let p = s.forward(&f, Flavor::Complex).unwrap();
        let h = 1e-6;
        let (t, ph) = (1.1, 4.0);
        let [v, dt, dp] = p.evaluate_with_gradient(t, ph);
        assert!((v - p.evaluate(t, ph)).norm() < 1e-13);
        let fdt = (p.evaluate(t + h, ph) - p.evaluate(t - h, ph)) / (2.0 * h);
        let fdp = (p.evaluate(t, ph + h) - p.evaluate(t, ph - h)) / (2.0 * h);
        assert!((dt - fdt).norm() < 1e-7);
        assert!((dp - fdp).norm() < 1e-7);
    }

    #[test]
    fn lagrange_examples() {
        let mm = m(7, 6);
        let s = Scheme::new(mm, Variant::ExcludeU).unwrap();
        let set = s.index_set().clone();
        for &j in set.members() {
            for &i in set.members() {
                let (th, ph) = (i.i1 as f64 * PI / 7.0, i.i2 as f64 * PI / 6.0);
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((s.lagrange(j, th, ph).unwrap() - e).norm() < 1e-12);
            }
        }
        let (th, ph) = (0.77, 2.9);
        let all = s.lagrange_all(th, ph);
        let total: Complex64 = all.iter().sum();
        assert!((total - 1.0).norm() < 1e-12);
        for (&i, &l) in set.members().iter().zip(&all) {
            assert!((s.lagrange(i, th, ph).unwrap() - l).norm() < 1e-13);
        }
        let pole = NodeIndex::new(0, 0);
        assert_eq!(set.same_point(pole).len(), 3);
        let ls = s.lagrange_s(pole, th, ph).unwrap();
        let direct: Complex64 = [0, 2, 4]
            .iter()
            .map(|&j2| s.lagrange(NodeIndex::new(0, j2), th, ph).unwrap())
            .sum();
        assert!((ls - direct).norm() < 1e-14);
        assert!(s.lagrange_s(NodeIndex::new(0, 2), th, ph).is_err());
        assert!(s.lagrange(NodeIndex::new(1, 0), th, ph).is_err());
    }

    #[test]
    fn spectrum_is_inner_product_with_chi() {
        let mm = m(6, 6);
        let s = Scheme::new(mm, Variant::ExcludeU).unwrap();
        let f = NodeData::new(mm, pseudo_random(mm.product(), 13)).unwrap();
        let g = s.spectrum(&f).unwrap();
        for t in s.spectral_set().members() {
            let direct: Complex64 = s
                .index_set()
                .members()
                .iter()
                .zip(f.values())
                .map(|(&i, v)| v * chi(&mm, t.g1, t.g2, i).conj())
                .sum::<Complex64>()
                / mm.product() as f64;
            let fft = g.get(t.g1 as usize, t.g2.rem_euclid(12) as usize);
            assert!((direct - fft).norm() < 1e-14);
        }
    }

    #[test]
    fn from_coefficients_validates() {
        let mm = m(6, 6);
        assert!(Interpolant::from_coefficients(
            mm,
            Flavor::Complex,
            Variant::ExcludeU,
            [((3, 3), Complex64::new(1.0, 0.0))]
        )
        .is_err());
        assert!(Interpolant::from_coefficients(
            mm,
            Flavor::Averaged,
            Variant::ExcludeU,
            [((3, 3), Complex64::new(1.0, 0.0))]
        )
        .is_ok());
        let p = Interpolant::from_coefficients(
            mm,
            Flavor::Complex,
            Variant::ExcludeU,
            [((0, 0), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let f = inverse(&p).unwrap();
        assert!(f.values().iter().all(|v| (v - 1.0).norm() < 1e-15));
    }
}
