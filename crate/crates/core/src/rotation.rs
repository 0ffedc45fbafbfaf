//! Rotation estimation from node samples by damped Gauss-Newton on Euler angles.
//!
//! The unknown rotation is parameterized by intrinsic Euler angles, by default
//! Z-Y-Z, `R_β = R_z(β1) R_y(β2) R_z(β3)`. The Z-Y-X sequence
//! `R_z(β1) R_y(β2) R_x(β3)` is also available; it has no gimbal singularity
//! at `β = 0`, which matters when Gauss-Newton starts from the identity. Given reference samples `f` and rotated
//! samples `f_rot`, the estimator minimizes
//!
//! ```text
//! F(β) = Σ_{i ∈ I_S} |f_rot(i) − P_f(R_β x_i)|²
//! ```
//!
//! where `P_f` interpolates `f`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodes::{IndexSet, NodeIndex, SphericalPoint};
use crate::spectral::Variant;
use crate::transform::{Flavor, Interpolant, NodeData, Scheme};
use crate::trig::wrap_angle;

/// Below this `sin θ` a point is treated as a pole when differentiating.
pub const POLE_SIN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EulerAngles {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

impl EulerAngles {
    pub const fn new(beta1: f64, beta2: f64, beta3: f64) -> Self {
        Self {
            beta1,
            beta2,
            beta3,
        }
    }

    pub fn from_degrees(b1: f64, b2: f64, b3: f64) -> Self {
        Self::new(b1.to_radians(), b2.to_radians(), b3.to_radians())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.beta1, self.beta2, self.beta3]
    }

    pub fn from_array(b: [f64; 3]) -> Self {
        Self::new(b[0], b[1], b[2])
    }

    /// Each angle mapped to `(−π, π]`.
    pub fn wrapped(self) -> Self {
        Self::new(
            wrap_angle(self.beta1),
            wrap_angle(self.beta2),
            wrap_angle(self.beta3),
        )
    }

    pub fn matrix(self) -> Matrix3<f64> {
        rotation_matrix(self)
    }
}

/// Axis sequence of intrinsic Euler angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EulerConvention {
    /// `R_z(β1) R_y(β2) R_z(β3)`.
    #[default]
    Zyz,
    /// `R_z(β1) R_y(β2) R_x(β3)`.
    Zyx,
}

impl EulerConvention {
    pub fn matrix(self, beta: EulerAngles) -> Matrix3<f64> {
        let (a, b, c) = (beta.beta1, beta.beta2, beta.beta3);
        match self {
            EulerConvention::Zyz => rz(a) * ry(b) * rz(c),
            EulerConvention::Zyx => rz(a) * ry(b) * rx(c),
        }
    }

    /// `∂R_β/∂β_k`, `k = 1, 2, 3`.
    pub fn derivatives(self, beta: EulerAngles) -> [Matrix3<f64>; 3] {
        let (a, b, c) = (beta.beta1, beta.beta2, beta.beta3);
        let (last, dlast) = match self {
            EulerConvention::Zyz => (rz(c), drz(c)),
            EulerConvention::Zyx => (rx(c), drx(c)),
        };
        [
            drz(a) * ry(b) * last,
            rz(a) * dry(b) * last,
            rz(a) * ry(b) * dlast,
        ]
    }
}

impl std::str::FromStr for EulerConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zyz" => Ok(EulerConvention::Zyz),
            "zyx" => Ok(EulerConvention::Zyx),
            other => Err(Error::Invalid(format!("unknown Euler convention {other:?}"))),
        }
    }
}

fn rx(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

fn drx(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(0.0, 0.0, 0.0, 0.0, -s, -c, 0.0, c, -s)
}

fn rz(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn ry(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

fn drz(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(-s, -c, 0.0, c, -s, 0.0, 0.0, 0.0, 0.0)
}

fn dry(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(-s, 0.0, c, 0.0, 0.0, 0.0, -c, 0.0, -s)
}

/// `R_z(β1) R_y(β2) R_z(β3)`.
pub fn rotation_matrix(beta: EulerAngles) -> Matrix3<f64> {
    EulerConvention::Zyz.matrix(beta)
}

/// `∂R_β/∂β_k` for the Z-Y-Z convention.
pub fn rotation_matrix_derivatives(beta: EulerAngles) -> [Matrix3<f64>; 3] {
    EulerConvention::Zyz.derivatives(beta)
}

/// Sum of two Gaussians centered at the north pole and at `(1/√2, −1/√2, 0)`.
pub fn test_function(x: [f64; 3]) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let [a, b, c] = x;
    (-3.0 * (a * a + b * b + (c - 1.0).powi(2))).exp()
        + (-4.0 * ((a - s).powi(2) + (b + s).powi(2) + c * c)).exp()
}

/// [`test_function`] in spherical coordinates.
pub fn test_function_spherical(theta: f64, phi: f64) -> f64 {
    test_function(SphericalPoint::new(theta, phi).to_cartesian())
}

/// Samples `sampler` at `R x_i` for every `i ∈ I^(m)`.
pub fn sample_rotated<F>(set: &IndexSet, sampler: F, r: &Matrix3<f64>) -> NodeData
where
    F: Fn([f64; 3]) -> f64,
{
    NodeData::from_fn(set, |i| {
        let (_, x) = set.node_point(i).expect("member of the set");
        let y = r * Vector3::from(x);
        sampler([y.x, y.y, y.z])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol_step: f64,
    pub tol_res: f64,
    pub max_iter: usize,
    /// Sufficient-decrease constant of the backtracking line search.
    pub armijo: f64,
    pub max_backtracks: usize,
    /// Relative diagonal shift applied to ill-conditioned normal equations.
    pub levenberg: f64,
    pub flavor: Flavor,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_step: 1e-10,
            tol_res: 1e-20,
            max_iter: 100,
            armijo: 1e-4,
            max_backtracks: 60,
            levenberg: 1e-12,
            flavor: Flavor::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StopReason {
    StepTolerance,
    ResidualTolerance,
    MaxIterations,
    LineSearchFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iteration: usize,
    pub beta: EulerAngles,
    pub objective: f64,
    pub step_norm: f64,
    pub step_length: f64,
    pub regularized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub convention: EulerConvention,
    pub beta_hat: EulerAngles,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub stop_reason: StopReason,
    /// True if any step needed the Levenberg shift.
    pub regularized: bool,
    pub trace: Vec<TraceStep>,
}

/// Interpolant of the reference data together with the rotated samples on `I_S`.
#[derive(Debug, Clone)]
pub struct RotationProblem {
    convention: EulerConvention,
    interpolant: Interpolant,
    nodes: Vec<(NodeIndex, [f64; 3])>,
    target: Vec<Complex64>,
}

impl RotationProblem {
    pub fn new(f: &NodeData, f_rot: &NodeData, flavor: Flavor) -> Result<Self> {
        let (a, b) = (f.frequencies(), f_rot.frequencies());
        if a != b {
            return Err(Error::FrequencyMismatch(a.m1(), a.m2(), b.m1(), b.m2()));
        }
        let scheme = Scheme::new(a, Variant::default())?;
        let interpolant = scheme.forward(f, flavor)?;
        let set = scheme.index_set();
        let mut nodes = Vec::with_capacity(set.reduced_len());
        let mut target = Vec::with_capacity(set.reduced_len());
        for i in set.reduced() {
            nodes.push((i, set.node_point(i)?.1));
            target.push(f_rot.values()[set.position(i).unwrap()]);
        }
        Ok(Self {
            convention: EulerConvention::default(),
            interpolant,
            nodes,
            target,
        })
    }

    /// Reference and rotated samples of `sampler` at the nodes of `set`, with
    /// `β_true` read in `convention`.
    pub fn synthetic<F>(
        set: &IndexSet,
        sampler: F,
        beta_true: EulerAngles,
        convention: EulerConvention,
        flavor: Flavor,
    ) -> Result<Self>
    where
        F: Fn([f64; 3]) -> f64,
    {
        let f = NodeData::from_fn(set, |i| sampler(set.node_point(i).expect("member").1));
        let f_rot = sample_rotated(set, &sampler, &convention.matrix(beta_true));
        Ok(Self::new(&f, &f_rot, flavor)?.with_convention(convention))
    }

    pub fn with_convention(mut self, convention: EulerConvention) -> Self {
        self.convention = convention;
        self
    }

    #[inline]
    pub fn convention(&self) -> EulerConvention {
        self.convention
    }

    #[inline]
    pub fn matrix(&self, beta: EulerAngles) -> Matrix3<f64> {
        self.convention.matrix(beta)
    }

    #[inline]
    pub fn interpolant(&self) -> &Interpolant {
        &self.interpolant
    }

    /// Rotated samples on `I_S`.
    pub fn target(&self) -> &[Complex64] {
        &self.target
    }

    /// Replaces the rotated samples by values of `P_f` at `R_β x_i`, which makes
    /// `β` an exact zero of the objective.
    pub fn with_exact_target(mut self, beta: EulerAngles) -> Self {
        let r = self.matrix(beta);
        self.target = self
            .nodes
            .iter()
            .map(|(_, x)| self.eval_at(r * Vector3::from(*x)))
            .collect();
        self
    }

    fn eval_at(&self, y: Vector3<f64>) -> Complex64 {
        self.interpolant.evaluate_cartesian([y.x, y.y, y.z])
    }

    /// `P_f(y)` and its derivatives along the tangent vectors `ds`.
    fn value_and_derivatives(&self, y: Vector3<f64>, ds: &[Vector3<f64>; 3]) -> (Complex64, [Complex64; 3]) {
        let p = SphericalPoint::from_cartesian([y.x, y.y, y.z]);
        let (st, ct) = p.theta.sin_cos();
        if st < POLE_SIN_TOL {
            // leaving the pole along d moves θ away from it with speed |d_xy|
            // at longitude atan2(d_y, d_x)
            let value = self.interpolant.evaluate_cartesian([y.x, y.y, y.z]);
            let (theta, sign) = if ct > 0.0 {
                (0.0, 1.0)
            } else {
                (std::f64::consts::PI, -1.0)
            };
            let der = ds.map(|d| {
                let [_, dt, _] = self.interpolant.evaluate_with_gradient(theta, d.y.atan2(d.x));
                dt * (sign * d.x.hypot(d.y))
            });
            return (value, der);
        }
        let (sp, cp) = p.phi.sin_cos();
        let e_theta = Vector3::new(ct * cp, ct * sp, -st);
        let e_phi = Vector3::new(-sp, cp, 0.0);
        let [v, dt, dp] = self.interpolant.evaluate_with_gradient(p.theta, p.phi);
        (v, ds.map(|d| dt * d.dot(&e_theta) + dp * (d.dot(&e_phi) / st)))
    }

    /// Complex residuals `f_rot(i) − P_f(R_β x_i)` on `I_S`.
    pub fn residuals(&self, beta: EulerAngles) -> Vec<Complex64> {
        let r = self.matrix(beta);
        self.nodes
            .par_iter()
            .zip(self.target.par_iter())
            .map(|((_, x), t)| t - self.eval_at(r * Vector3::from(*x)))
            .collect()
    }

    pub fn objective(&self, beta: EulerAngles) -> f64 {
        self.residuals(beta).iter().map(|r| r.norm_sqr()).sum()
    }

    /// Residuals and their derivatives `∂r_i/∂β_k`.
    pub fn residuals_and_jacobian(&self, beta: EulerAngles) -> (Vec<Complex64>, Vec<[Complex64; 3]>) {
        let r = self.matrix(beta);
        let dr = self.convention.derivatives(beta);
        self.nodes
            .par_iter()
            .zip(self.target.par_iter())
            .map(|((_, x), t)| {
                let x = Vector3::from(*x);
                let (value, der) = self.value_and_derivatives(r * x, &dr.map(|d| d * x));
                (t - value, der.map(|d| -d))
            })
            .unzip()
    }

    /// Central-difference Jacobian with step `h`.
    pub fn jacobian_fd(&self, beta: EulerAngles, h: f64) -> Vec<[Complex64; 3]> {
        let b = beta.to_array();
        let mut out = vec![[Complex64::new(0.0, 0.0); 3]; self.nodes.len()];
        for k in 0..3 {
            let (mut bp, mut bm) = (b, b);
            bp[k] += h;
            bm[k] -= h;
            let rp = self.residuals(EulerAngles::from_array(bp));
            let rm = self.residuals(EulerAngles::from_array(bm));
            for (row, (p, m)) in out.iter_mut().zip(rp.iter().zip(&rm)) {
                row[k] = (p - m) / (2.0 * h);
            }
        }
        out
    }

    /// Best lattice point of `steps` values per angle: `β1, β3 ∈ (−π, π]` and
    /// `β2 ∈ [0, π]` (Z-Y-Z) or `[−π/2, π/2]` (Z-Y-X).
    pub fn coarse_search(&self, steps: usize) -> EulerAngles {
        let pi = std::f64::consts::PI;
        let steps = steps.max(1);
        let ang = |k: usize| -pi + (k as f64 + 1.0) * 2.0 * pi / steps as f64;
        let lo = match self.convention {
            EulerConvention::Zyz => 0.0,
            EulerConvention::Zyx => -pi / 2.0,
        };
        let tilt = |k: usize| {
            if steps == 1 {
                0.0
            } else {
                lo + k as f64 * pi / (steps - 1) as f64
            }
        };
        let mut best = (f64::INFINITY, EulerAngles::default());
        for a in 0..steps {
            for b in 0..steps {
                for c in 0..steps {
                    let beta = EulerAngles::new(ang(a), tilt(b), ang(c));
                    let v = self.objective(beta);
                    if v < best.0 {
                        best = (v, beta);
                    }
                }
            }
        }
        best.1
    }

    /// Damped Gauss-Newton from `beta0`.
    pub fn estimate(&self, beta0: EulerAngles, opts: &SolverOptions) -> SolverReport {
        let mut beta = beta0;
        let mut obj = self.objective(beta);
        let mut trace = vec![TraceStep {
            iteration: 0,
            beta,
            objective: obj,
            step_norm: 0.0,
            step_length: 0.0,
            regularized: false,
        }];
        let mut any_regularized = false;
        let mut iterations = 0;
        let stop = loop {
            if obj < opts.tol_res {
                break StopReason::ResidualTolerance;
            }
            if iterations >= opts.max_iter {
                break StopReason::MaxIterations;
            }
            let (res, jac) = self.residuals_and_jacobian(beta);
            // real least squares on the stacked (Re, Im) system
            let mut jtj = Matrix3::<f64>::zeros();
            let mut jtr = Vector3::<f64>::zeros();
            for (r, row) in res.iter().zip(&jac) {
                for a in 0..3 {
                    jtr[a] += row[a].re * r.re + row[a].im * r.im;
                    for b in 0..3 {
                        jtj[(a, b)] += row[a].re * row[b].re + row[a].im * row[b].im;
                    }
                }
            }
            let (delta, regularized) = solve_normal(jtj, -jtr, opts.levenberg);
            any_regularized |= regularized;
            // directional derivative of F along delta
            let slope = 2.0 * jtr.dot(&delta);
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..=opts.max_backtracks {
                let cand = EulerAngles::from_array((Vector3::from(beta.to_array()) + delta * t).into());
                let v = self.objective(cand);
                if v <= obj + opts.armijo * t * slope.min(0.0) && v <= obj {
                    accepted = Some((cand, v));
                    break;
                }
                t *= 0.5;
            }
            let Some((cand, v)) = accepted else {
                break StopReason::LineSearchFailed;
            };
            iterations += 1;
            let step = t * delta.norm();
            beta = cand;
            obj = v;
            trace.push(TraceStep {
                iteration: iterations,
                beta,
                objective: obj,
                step_norm: step,
                step_length: t,
                regularized,
            });
            if step < opts.tol_step {
                break StopReason::StepTolerance;
            }
        };
        SolverReport {
            convention: self.convention,
            beta_hat: beta.wrapped(),
            iterations,
            residual: obj,
            converged: matches!(stop, StopReason::StepTolerance | StopReason::ResidualTolerance),
            stop_reason: stop,
            regularized: any_regularized,
            trace,
        }
    }
}

/// Solves `A x = b` for symmetric positive semi-definite `A`, shifting the
/// diagonal by `shift·λmax` when `A` is numerically singular.
fn solve_normal(a: Matrix3<f64>, b: Vector3<f64>, shift: f64) -> (Vector3<f64>, bool) {
    let eig = a.symmetric_eigen();
    let lmax = eig.eigenvalues.max().max(f64::MIN_POSITIVE);
    let lmin = eig.eigenvalues.min();
    if lmin > shift * lmax {
        if let Some(ch) = a.cholesky() {
            return (ch.solve(&b), false);
        }
    }
    let shifted = a + Matrix3::identity() * (shift * lmax);
    let x = shifted
        .cholesky()
        .map(|ch| ch.solve(&b))
        .unwrap_or_else(Vector3::zeros);
    (x, true)
}

/// Frobenius distance `‖R_a − R_b‖_F`.
pub fn rotation_distance(convention: EulerConvention, a: EulerAngles, b: EulerAngles) -> f64 {
    (convention.matrix(a) - convention.matrix(b)).norm()
}
