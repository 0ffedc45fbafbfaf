//! Clenshaw-Curtis type quadrature on the sphere at the Lissajous nodes.
//!
//! Integrals are normalized by `1/(4π)`, so the constant 1 integrates to 1. Only
//! the coefficients `c_(2k,0)` contribute:
//!
//! ```text
//! (1/4π) ∫∫ X_γ sinθ dθ dφ = 1/(1 − γ1²)   if γ2 = 0 and γ1 even,   0 otherwise.
//! ```

use num_complex::Complex64;
use serde::Serialize;

use crate::curve::FrequencyPair;
use crate::error::{Error, Result};
use crate::nodes::NodeIndex;
use crate::spectral::Variant;
use crate::transform::{Flavor, Interpolant, NodeData, Scheme};

/// Normalized integral of `X_γ` over the sphere.
pub fn basis_integral(g1: i64, g2: i64) -> f64 {
    if g2 == 0 && g1 % 2 == 0 {
        1.0 / (1.0 - (g1 * g1) as f64)
    } else {
        0.0
    }
}

/// `(1/4π) ∫∫ P sinθ dθ dφ` for any flavor.
pub fn integrate_coefficients(p: &Interpolant) -> Complex64 {
    p.x_expansion()
        .filter(|&(g1, g2, _)| g2 == 0 && g1 % 2 == 0)
        .map(|(g1, g2, c)| c * basis_integral(g1, g2))
        .sum()
}

/// Forward transform followed by [`integrate_coefficients`].
pub fn integrate_samples(scheme: &Scheme, f: &NodeData) -> Result<Complex64> {
    Ok(integrate_coefficients(&scheme.forward(f, Flavor::Complex)?))
}

/// Integrates `sampler` with the rule for `scheme`.
pub fn integrate_function<T, F>(scheme: &Scheme, sampler: F) -> Result<Complex64>
where
    T: Into<Complex64>,
    F: Fn(f64, f64) -> T,
{
    Ok(integrate_coefficients(
        &scheme.interpolate_samples(sampler, Flavor::Complex)?,
    ))
}

/// Weights on `I_S^(m)`, normalized so that they sum to 1.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureRule {
    m: FrequencyPair,
    nodes: Vec<NodeIndex>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    #[inline]
    pub fn frequencies(&self) -> FrequencyPair {
        self.m
    }

    /// Members of `I_S^(m)` in canonical order.
    #[inline]
    pub fn nodes(&self) -> &[NodeIndex] {
        &self.nodes
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.weights.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Σ w_i f(i)` over `I_S^(m)`; pole values are read at `i2 = 0`.
    pub fn apply(&self, f: &NodeData) -> Result<Complex64> {
        if f.frequencies() != self.m {
            let b = f.frequencies();
            return Err(Error::FrequencyMismatch(
                self.m.m1(),
                self.m.m2(),
                b.m1(),
                b.m2(),
            ));
        }
        let set = crate::nodes::IndexSet::new(self.m)?;
        Ok(self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&i, &w)| f.values()[set.position(i).unwrap()] * w)
            .sum())
    }
}

/// Integrates each reduced Lagrange function `L_{S,i}` to obtain the weights.
pub fn extract_weights(m: FrequencyPair) -> Result<QuadratureRule> {
    let scheme = Scheme::new(m, Variant::default())?;
    let set = scheme.index_set();
    let nodes: Vec<NodeIndex> = set.reduced().collect();
    let m1 = m.m1();
    let weights = nodes
        .iter()
        .map(|&i| {
            // δ on I_S lifts to the indicator of the whole pole row
            let delta = NodeData::from_fn(set, |j| {
                let hit = if i.i1 == 0 || i.i1 == m1 {
                    j.i1 == i.i1
                } else {
                    j == i
                };
                if hit {
                    1.0
                } else {
                    0.0
                }
            });
            integrate_samples(&scheme, &delta).map(|c| c.re)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadratureRule { m, nodes, weights })
}
