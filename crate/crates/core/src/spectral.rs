//! Spectral index sets and the parity-modified double Fourier basis.
//!
//! The discrete basis on `I^(m)` is
//!
//! ```text
//! χ_γ(i) = cos(γ1 i1 π/m1) e^{iγ2 i2 π/m2}      γ2 even
//! χ_γ(i) = i sin(γ1 i1 π/m1) e^{iγ2 i2 π/m2}    γ2 odd
//! ```
//!
//! and `X_γ(θ, φ)` is its continuous counterpart, `X_γ(θ_i1, φ_i2) = χ_γ(i)`.
//! The functions indexed by the spectral set `Γ^(m)` form an orthogonal basis
//! of the data space with respect to the normalized counting measure on `I^(m)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::FrequencyPair;
use crate::error::{Error, Result};
use crate::nodes::{IndexSet, NodeIndex};
use crate::transform::NodeData;
use crate::trig::{sign_pow, sin_cos_pi_ratio};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Position of a spectral index within `Γ̄^(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralClass {
    /// `γ1 = 0`.
    Axis,
    /// `γ1 ≥ 1`, on neither anti-diagonal class.
    Interior,
    /// `Γ^U`: `γ1/m1 + γ2/m2 = 1`, `γ2 ≠ 0`.
    Upper,
    /// `Γ^D`: `γ1/m1 − γ2/m2 = 1`, `γ2 ≠ 0`.
    Lower,
}

/// Which of the two linearly dependent classes is dropped from `Γ̄^(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Variant {
    #[default]
    ExcludeU,
    ExcludeD,
}

impl Variant {
    fn excluded(self) -> SpectralClass {
        match self {
            Variant::ExcludeU => SpectralClass::Upper,
            Variant::ExcludeD => SpectralClass::Lower,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpectralIndex {
    pub g1: i64,
    pub g2: i64,
    pub class: SpectralClass,
}

/// Which real component of `χ_γ` makes up the real basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealPart {
    Re,
    Im,
}

/// `Γ̄^(m)` with class tags and the selected subset `Γ^(m)`.
#[derive(Debug, Clone)]
pub struct SpectralSet {
    m: FrequencyPair,
    variant: Variant,
    members: Vec<SpectralIndex>,
    // (m1 + 1) × (2 m2 − 1) table over γ2 ∈ (−m2, m2)
    position: Vec<usize>,
}

/// Class of `γ` in `Γ̄^(m)`, or `None` if `γ ∉ Γ̄^(m)`.
pub fn classify_spectral(m: &FrequencyPair, g1: i64, g2: i64) -> Option<SpectralClass> {
    let (m1, m2) = (m.m1() as i64, m.m2() as i64);
    if g1 == 0 {
        return (g2 % 2 == 0 && g2.abs() < m2).then_some(SpectralClass::Axis);
    }
    // γ1/m1 + |γ2|/m2 ≤ 1  ⇔  γ1 m2 + |γ2| m1 ≤ m1 m2
    if g1 < 1 || g1 > m1 || g1 * m2 + g2.abs() * m1 > m1 * m2 {
        return None;
    }
    let class = if g2 > 0 && g1 * m2 + g2 * m1 == m1 * m2 {
        SpectralClass::Upper
    } else if g2 < 0 && g1 * m2 - g2 * m1 == m1 * m2 {
        SpectralClass::Lower
    } else {
        SpectralClass::Interior
    };
    Some(class)
}

impl SpectralSet {
    pub fn new(m: FrequencyPair, variant: Variant) -> Result<Self> {
        m.require_even()?;
        let (m1, m2) = (m.m1() as i64, m.m2() as i64);
        let width = (2 * m2 - 1) as usize;
        let mut position = vec![usize::MAX; (m1 as usize + 1) * width];
        let mut members = Vec::with_capacity(m.product() + m.g());
        for g1 in 0..=m1 {
            for g2 in -(m2 - 1)..m2 {
                if let Some(class) = classify_spectral(&m, g1, g2) {
                    position[g1 as usize * width + (g2 + m2 - 1) as usize] = members.len();
                    members.push(SpectralIndex { g1, g2, class });
                }
            }
        }
        Ok(Self {
            m,
            variant,
            members,
            position,
        })
    }

    #[inline]
    pub fn frequencies(&self) -> FrequencyPair {
        self.m
    }

    #[inline]
    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// All of `Γ̄^(m)` in lexicographic `(γ1, γ2)` order.
    #[inline]
    pub fn members(&self) -> &[SpectralIndex] {
        &self.members
    }

    /// Position of `γ` in [`members`](Self::members).
    pub fn position(&self, g1: i64, g2: i64) -> Option<usize> {
        let (m1, m2) = (self.m.m1() as i64, self.m.m2() as i64);
        if !(0..=m1).contains(&g1) || g2.abs() >= m2 {
            return None;
        }
        let width = 2 * m2 - 1;
        match self.position[(g1 * width + g2 + m2 - 1) as usize] {
            usize::MAX => None,
            p => Some(p),
        }
    }

    pub fn class_of(&self, g1: i64, g2: i64) -> Option<SpectralClass> {
        self.position(g1, g2).map(|p| self.members[p].class)
    }

    #[inline]
    pub fn is_selected_class(&self, class: SpectralClass) -> bool {
        class != self.variant.excluded()
    }

    /// Membership in the selected set `Γ^(m)`.
    pub fn is_selected(&self, g1: i64, g2: i64) -> bool {
        self.class_of(g1, g2)
            .is_some_and(|c| self.is_selected_class(c))
    }

    /// Members of `Γ^(m)`.
    pub fn selected(&self) -> impl Iterator<Item = SpectralIndex> + '_ {
        self.members
            .iter()
            .copied()
            .filter(|s| self.is_selected_class(s.class))
    }

    pub fn selected_len(&self) -> usize {
        self.selected().count()
    }

    pub fn class_len(&self, class: SpectralClass) -> usize {
        self.members.iter().filter(|s| s.class == class).count()
    }

    fn require_selected(&self, g1: i64, g2: i64) -> Result<SpectralClass> {
        match self.class_of(g1, g2) {
            Some(c) if self.is_selected_class(c) => Ok(c),
            _ => Err(Error::SpectralIndexNotInSet { g1, g2 }),
        }
    }

    /// `‖χ_γ‖²`: 1 on `γ1 ∈ {0, m1}`, ½ otherwise.
    pub fn chi_norm_sq(&self, g1: i64, g2: i64) -> Result<f64> {
        self.require_selected(g1, g2)?;
        Ok(complex_norm_sq(&self.m, g1))
    }

    /// Whether the real basis function at `γ` is `Re χ_γ` or `Im χ_γ`.
    pub fn real_part(&self, g1: i64, g2: i64) -> Result<RealPart> {
        let class = self.require_selected(g1, g2)?;
        Ok(real_part_rule(&self.m, self.variant, class, g1, g2))
    }

    /// `χ_{R,γ}(i)`.
    pub fn chi_real(&self, g1: i64, g2: i64, i: NodeIndex) -> Result<f64> {
        let c = chi(&self.m, g1, g2, i);
        Ok(match self.real_part(g1, g2)? {
            RealPart::Re => c.re,
            RealPart::Im => c.im,
        })
    }

    /// `‖χ_{R,γ}‖²`.
    pub fn chi_real_norm_sq(&self, g1: i64, g2: i64) -> Result<f64> {
        self.require_selected(g1, g2)?;
        Ok(real_norm_rule(&self.m, self.variant, g1, g2))
    }

    /// `X_{R,γ}(θ, φ)`.
    pub fn basis_x_real(&self, g1: i64, g2: i64, theta: f64, phi: f64) -> Result<f64> {
        let x = basis_x(g1, g2, theta, phi);
        Ok(match self.real_part(g1, g2)? {
            RealPart::Re => x.re,
            RealPart::Im => x.im,
        })
    }
}

#[inline]
pub(crate) fn complex_norm_sq(m: &FrequencyPair, g1: i64) -> f64 {
    if g1 == 0 || g1 == m.m1() as i64 {
        1.0
    } else {
        0.5
    }
}

pub(crate) fn real_part_rule(
    m: &FrequencyPair,
    variant: Variant,
    class: SpectralClass,
    g1: i64,
    g2: i64,
) -> RealPart {
    let m1 = m.m1() as i64;
    // The ExcludeD system is the mirror image γ2 → −γ2 of the ExcludeU one.
    let (paired, g2) = match variant {
        Variant::ExcludeU => (class == SpectralClass::Lower, g2),
        Variant::ExcludeD => (class == SpectralClass::Upper, -g2),
    };
    let re = if paired { 2 * g1 <= m1 } else { g2 <= 0 };
    if re {
        RealPart::Re
    } else {
        RealPart::Im
    }
}

pub(crate) fn real_norm_rule(m: &FrequencyPair, variant: Variant, g1: i64, g2: i64) -> f64 {
    let (m1, m2) = (m.m1() as i64, m.m2() as i64);
    let g2 = match variant {
        Variant::ExcludeU => g2,
        Variant::ExcludeD => -g2,
    };
    if g2 == 0 && (g1 == 0 || g1 == m1) {
        1.0
    } else if g1 == 0 || g2 == 0 || (2 * g1 == m1 && 2 * g2 == -m2) {
        0.5
    } else {
        0.25
    }
}

/// `χ_γ(i)` for arbitrary `γ ∈ Z²`.
pub fn chi(m: &FrequencyPair, g1: i64, g2: i64, i: NodeIndex) -> Complex64 {
    let (m1, m2) = (m.m1() as i64, m.m2() as i64);
    let (s1, c1) = sin_cos_pi_ratio(g1 * i.i1 as i64, m1);
    let (s2, c2) = sin_cos_pi_ratio(g2 * i.i2 as i64, m2);
    let e = Complex64::new(c2, s2);
    if g2.rem_euclid(2) == 0 {
        e * c1
    } else {
        I * e * s1
    }
}

/// `X_γ(θ, φ)`.
pub fn basis_x(g1: i64, g2: i64, theta: f64, phi: f64) -> Complex64 {
    let (s2, c2) = (g2 as f64 * phi).sin_cos();
    let e = Complex64::new(c2, s2);
    if g2.rem_euclid(2) == 0 {
        e * (g1 as f64 * theta).cos()
    } else {
        I * e * (g1 as f64 * theta).sin()
    }
}

/// `(X_γ, ∂X_γ/∂θ, ∂X_γ/∂φ)` at `(θ, φ)`.
pub fn basis_x_with_gradient(g1: i64, g2: i64, theta: f64, phi: f64) -> [Complex64; 3] {
    let (s2, c2) = (g2 as f64 * phi).sin_cos();
    let e = Complex64::new(c2, s2);
    let (s1, c1) = (g1 as f64 * theta).sin_cos();
    let k = g1 as f64;
    let (v, dv) = if g2.rem_euclid(2) == 0 {
        (Complex64::new(c1, 0.0), Complex64::new(-k * s1, 0.0))
    } else {
        (I * s1, I * (k * c1))
    };
    let val = v * e;
    [val, dv * e, val * I * g2 as f64]
}

/// `⟨f, h⟩ = (1/(m1 m2)) Σ f(i) conj(h(i))`.
pub fn inner_product(f: &NodeData, h: &NodeData) -> Result<Complex64> {
    if f.frequencies() != h.frequencies() {
        let (a, b) = (f.frequencies(), h.frequencies());
        return Err(Error::FrequencyMismatch(a.m1(), a.m2(), b.m1(), b.m2()));
    }
    if f.values().len() != h.values().len() {
        return Err(Error::SizeMismatch {
            expected: f.values().len(),
            actual: h.values().len(),
        });
    }
    let n = f.frequencies().product() as f64;
    let s: Complex64 = f
        .values()
        .iter()
        .zip(h.values())
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(s / n)
}

/// Exact test for a nonzero discrete mean: `γ1 = h1 m1`, `γ2 = h2 m2`, `h1 + h2` even.
pub fn orthogonality_condition(m: &FrequencyPair, g1: i64, g2: i64) -> bool {
    let (m1, m2) = (m.m1() as i64, m.m2() as i64);
    g1 % m1 == 0 && g2 % m2 == 0 && (g1 / m1 + g2 / m2) % 2 == 0
}

/// `∫ χ_γ dω` by direct summation over `I^(m)`.
pub fn mean(set: &IndexSet, g1: i64, g2: i64) -> Complex64 {
    let m = set.frequencies();
    let s: Complex64 = set.members().iter().map(|&i| chi(&m, g1, g2, i)).sum();
    s / m.product() as f64
}

/// `(−1)^{γ2} χ_{(γ1, −γ2)} = conj(χ_γ)`, used when expanding real bases.
#[inline]
pub(crate) fn conj_partner_sign(g2: i64) -> f64 {
    sign_pow(g2)
}
