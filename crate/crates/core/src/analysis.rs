//! Lebesgue-constant estimates, sup-norm errors and convergence tables.
//!
//! All sup-norms are maxima over a finite grid and are therefore lower bounds.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::FrequencyPair;
use crate::error::{Error, Result};
use crate::spectral::Variant;
use crate::transform::{Flavor, Scheme};

/// A uniform `(θ, φ)` evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    /// `θ_a = aπ/(n_theta − 1)` when set, midpoints `(a + ½)π/n_theta` otherwise.
    pub include_poles: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_theta: 1001,
            n_phi: 2000,
            include_poles: true,
        }
    }
}

impl GridSpec {
    pub fn new(n_theta: usize, n_phi: usize, include_poles: bool) -> Result<Self> {
        if n_theta < 2 || n_phi < 2 {
            return Err(Error::Invalid(format!(
                "grid needs at least 2 points per axis, got {n_theta}×{n_phi}"
            )));
        }
        Ok(Self {
            n_theta,
            n_phi,
            include_poles,
        })
    }

    /// Smallest grid with at least `4·max(m1, m2)` points per axis.
    pub fn for_frequencies(m: &FrequencyPair) -> Self {
        let n = 4 * m.m1().max(m.m2());
        Self {
            n_theta: n + 1,
            n_phi: n,
            include_poles: true,
        }
    }

    pub fn thetas(&self) -> Vec<f64> {
        let pi = std::f64::consts::PI;
        (0..self.n_theta)
            .map(|a| {
                if self.include_poles {
                    a as f64 * pi / (self.n_theta - 1) as f64
                } else {
                    (a as f64 + 0.5) * pi / self.n_theta as f64
                }
            })
            .collect()
    }

    pub fn phis(&self) -> Vec<f64> {
        let tau = std::f64::consts::TAU;
        (0..self.n_phi)
            .map(|b| b as f64 * tau / self.n_phi as f64)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// A grid containing every point of `self`.
    pub fn refined(&self) -> Self {
        Self {
            n_theta: if self.include_poles {
                2 * self.n_theta - 1
            } else {
                3 * self.n_theta
            },
            n_phi: 2 * self.n_phi,
            include_poles: self.include_poles,
        }
    }
}

/// `Σ_{i∈I^(m)} |L_i(θ, φ)|`.
pub fn lebesgue_function(scheme: &Scheme, theta: f64, phi: f64) -> f64 {
    scheme
        .lagrange_all(theta, phi)
        .iter()
        .map(|l| l.norm())
        .sum()
}

/// Maximum of the Lebesgue function over `grid`.
pub fn lebesgue_estimate(scheme: &Scheme, grid: &GridSpec) -> f64 {
    let phis = grid.phis();
    grid.thetas()
        .par_iter()
        .map(|&t| {
            phis.iter()
                .map(|&p| lebesgue_function(scheme, t, p))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// `max |P_f − f|` over `grid`, where `P_f` interpolates `sampler` at the nodes.
pub fn sup_error<T, F>(scheme: &Scheme, sampler: F, grid: &GridSpec, flavor: Flavor) -> Result<f64>
where
    T: Into<Complex64>,
    F: Fn(f64, f64) -> T + Sync,
{
    let p = scheme.interpolate_samples(&sampler, flavor)?;
    let (thetas, phis) = (grid.thetas(), grid.phis());
    let values = p.evaluate_grid(&thetas, &phis);
    Ok(values
        .par_chunks(phis.len())
        .zip(thetas.par_iter())
        .map(|(row, &t)| {
            row.iter()
                .zip(&phis)
                .map(|(v, &ph)| (v - sampler(t, ph).into()).norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: FrequencyPair,
    pub node_count: usize,
    pub sup_error: f64,
}

/// One [`ConvergenceRow`] per frequency pair, in input order.
pub fn convergence_table<T, F>(
    sampler: F,
    m_list: &[FrequencyPair],
    grid: &GridSpec,
    flavor: Flavor,
) -> Result<Vec<ConvergenceRow>>
where
    T: Into<Complex64>,
    F: Fn(f64, f64) -> T + Sync,
{
    m_list
        .iter()
        .map(|&m| {
            let scheme = Scheme::new(m, Variant::default())?;
            Ok(ConvergenceRow {
                m,
                node_count: m.node_count(),
                sup_error: sup_error(&scheme, &sampler, grid, flavor)?,
            })
        })
        .collect()
}

/// Reference sup-norm errors of the two-Gaussian test function:
/// `((m1, m2), listed node count, error)`.
///
/// The listed count column equals `(m1 + 1)·m2`, not the node count
/// `(m1 − 1)·m2 + 2` reported by [`ConvergenceRow`].
pub const REFERENCE_ERRORS: [((usize, usize), usize, f64); 10] = [
    ((3, 4), 16, 0.89150031122784),
    ((7, 8), 64, 0.17505763622726),
    ((11, 12), 144, 0.01926746577677),
    ((15, 16), 256, 0.00126029913111),
    ((19, 20), 400, 0.00005152647682),
    ((23, 24), 576, 0.00000145422054),
    ((27, 28), 784, 3.014093e-8),
    ((31, 32), 1024, 4.7887e-10),
    ((35, 36), 1296, 6.04e-12),
    ((39, 40), 1600, 6e-14),
];

/// Frequency pairs of [`REFERENCE_ERRORS`].
pub fn reference_frequencies() -> Vec<FrequencyPair> {
    REFERENCE_ERRORS
        .iter()
        .map(|&((m1, m2), _, _)| FrequencyPair::new(m1, m2).expect("even m2"))
        .collect()
}
