//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use lissphere::nodes::IndexSet;
use lissphere::spectral::{chi, SpectralSet};
use lissphere::{Flavor, FrequencyPair, NodeData, NodeIndex};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn fp(m1: usize, m2: usize) -> FrequencyPair {
    FrequencyPair::new(m1, m2).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut StdRng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_real(rng: &mut StdRng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect()
}

/// Random data that is constant on each pole row.
pub fn random_pole_consistent(rng: &mut StdRng, set: &IndexSet) -> NodeData {
    let m = set.frequencies();
    let north = rng.random_range(-1.0..1.0);
    let south = rng.random_range(-1.0..1.0);
    let vals: Vec<Complex64> = set
        .members()
        .iter()
        .map(|i| {
            let v = if i.i1 == 0 {
                north
            } else if i.i1 == m.m1() {
                south
            } else {
                rng.random_range(-1.0..1.0)
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    NodeData::new(m, vals).unwrap()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Curve intersections by exhaustive search.

fn curve(m1: f64, m2: f64, t: f64) -> [f64; 3] {
    let (s2, c2) = (m2 * t).sin_cos();
    let (s1, c1) = (m1 * t).sin_cos();
    [s2 * c1, s2 * s1, c2]
}

fn curve_d(m1: f64, m2: f64, t: f64) -> [f64; 3] {
    let (s2, c2) = (m2 * t).sin_cos();
    let (s1, c1) = (m1 * t).sin_cos();
    [
        m2 * c2 * c1 - m1 * s2 * s1,
        m2 * c2 * s1 + m1 * s2 * c1,
        -m2 * s2,
    ]
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn circ(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Solves `ℓ(t) = ℓ(s)` by damped Gauss-Newton from `(t, s)`. Branches through a
/// pole can be tangent there, so the solution may be degenerate and is only
/// resolved to about 1e−7 in the parameters.
fn refine_pair(m1: f64, m2: f64, mut t: f64, mut s: f64) -> Option<(f64, f64)> {
    for _ in 0..200 {
        let (a, b) = (curve(m1, m2, t), curve(m1, m2, s));
        let f = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        let (dt, ds) = (curve_d(m1, m2, t), curve_d(m1, m2, s));
        // J = [dt, −ds]; normal equations 2×2
        let j11: f64 = dt.iter().map(|x| x * x).sum();
        let j22: f64 = ds.iter().map(|x| x * x).sum();
        let j12: f64 = -dt.iter().zip(&ds).map(|(x, y)| x * y).sum::<f64>();
        let g1: f64 = dt.iter().zip(&f).map(|(x, y)| x * y).sum();
        let g2: f64 = -ds.iter().zip(&f).map(|(x, y)| x * y).sum::<f64>();
        let lambda = 1e-14 * (j11 + j22);
        let (j11, j22) = (j11 + lambda, j22 + lambda);
        let det = j11 * j22 - j12 * j12;
        if det.abs() < 1e-300 {
            return None;
        }
        let dt_step = -(j22 * g1 - j12 * g2) / det;
        let ds_step = -(j11 * g2 - j12 * g1) / det;
        t += dt_step;
        s += ds_step;
        if dt_step.abs() + ds_step.abs() < 1e-15 {
            break;
        }
    }
    let r = dist(curve(m1, m2, t), curve(m1, m2, s));
    (r < 1e-12 && circ(t, s) > 1e-6).then_some((t.rem_euclid(TAU), s.rem_euclid(TAU)))
}

/// One self-intersection point with all parameters through it.
#[derive(Debug, Clone)]
pub struct FoundPoint {
    pub point: [f64; 3],
    pub times: Vec<f64>,
}

/// All self-intersection points of `ℓ^(m)_0` on `[0, 2π)`, found by hashing a
/// fine sampling of the curve, pairing nearby samples from different branches
/// and refining each pair with Gauss-Newton.
pub fn brute_force_intersections(m1: usize, m2: usize) -> Vec<FoundPoint> {
    let (a, b) = (m1 as f64, m2 as f64);
    let vmax = (a * a + b * b).sqrt();
    let n = 2048 * m1 * m2;
    let h = TAU / n as f64;
    let c = 1.5 * vmax * h;
    let pts: Vec<[f64; 3]> = (0..n).map(|k| curve(a, b, k as f64 * h)).collect();
    let key = |p: &[f64; 3]| {
        (
            (p[0] / c).floor() as i64,
            (p[1] / c).floor() as i64,
            (p[2] / c).floor() as i64,
        )
    };
    let mut cells: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (k, p) in pts.iter().enumerate() {
        cells.entry(key(p)).or_default().push(k);
    }
    // the curve speed is at least m2, so samples of one branch within distance c
    // are less than c/m2 apart in parameter
    let same_branch = 4.0 * c / b;
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for (k, p) in pts.iter().enumerate() {
        let (x, y, z) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(list) = cells.get(&(x + dx, y + dy, z + dz)) else {
                        continue;
                    };
                    for &j in list {
                        if j <= k {
                            continue;
                        }
                        let (tk, tj) = (k as f64 * h, j as f64 * h);
                        if circ(tk, tj) < same_branch || dist(*p, pts[j]) > c {
                            continue;
                        }
                        if let Some(pair) = refine_pair(a, b, tk, tj) {
                            pairs.push(pair);
                        }
                    }
                }
            }
        }
    }
    // group parameters by point
    let mut found: Vec<FoundPoint> = Vec::new();
    for (t, s) in pairs {
        let p = curve(a, b, t);
        let entry = match found.iter_mut().position(|f| dist(f.point, p) < 1e-5) {
            Some(i) => &mut found[i],
            None => {
                found.push(FoundPoint {
                    point: p,
                    times: Vec::new(),
                });
                found.last_mut().unwrap()
            }
        };
        for u in [t, s] {
            if !entry.times.iter().any(|&v| circ(u, v) < 1e-5) {
                entry.times.push(u);
            }
        }
    }
    found
}

// ---------------------------------------------------------------------------
// Direct-summation transforms.

/// `⟨f, h⟩` by summation over `I^(m)`.
fn ip(values: &[Complex64], basis: &[Complex64]) -> Complex64 {
    values
        .iter()
        .zip(basis)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        / values.len() as f64
}

fn chi_column(set: &IndexSet, g1: i64, g2: i64) -> Vec<Complex64> {
    let m = set.frequencies();
    set.members().iter().map(|&i| chi(&m, g1, g2, i)).collect()
}

fn chi_real_column(set: &IndexSet, sp: &SpectralSet, g1: i64, g2: i64) -> Vec<Complex64> {
    set.members()
        .iter()
        .map(|&i| Complex64::new(sp.chi_real(g1, g2, i).unwrap(), 0.0))
        .collect()
}

/// Native coefficients over `Γ̄` (lexicographic order) by the projection formula.
pub fn direct_forward(set: &IndexSet, sp: &SpectralSet, f: &[Complex64], flavor: Flavor) -> Vec<Complex64> {
    use lissphere::SpectralClass::{Lower, Upper};
    sp.members()
        .iter()
        .map(|s| {
            let selected = sp.is_selected_class(s.class);
            match flavor {
                Flavor::Complex if selected => {
                    ip(f, &chi_column(set, s.g1, s.g2)) / sp.chi_norm_sq(s.g1, s.g2).unwrap()
                }
                Flavor::Real if selected => {
                    ip(f, &chi_real_column(set, sp, s.g1, s.g2))
                        / sp.chi_real_norm_sq(s.g1, s.g2).unwrap()
                }
                Flavor::Averaged => {
                    let norm = if s.g1 == 0 || s.g1 == set.frequencies().m1() as i64 {
                        1.0
                    } else {
                        0.5
                    };
                    let c = ip(f, &chi_column(set, s.g1, s.g2)) / norm;
                    if matches!(s.class, Upper | Lower) {
                        c * 0.5
                    } else {
                        c
                    }
                }
                _ => Complex64::new(0.0, 0.0),
            }
        })
        .collect()
}

/// Node values `Σ c_γ χ_γ(i)` (or `χ_{R,γ}` for the real flavor) by summation.
pub fn direct_inverse(set: &IndexSet, sp: &SpectralSet, coeffs: &[(i64, i64, Complex64)], flavor: Flavor) -> Vec<Complex64> {
    let m = set.frequencies();
    set.members()
        .iter()
        .map(|&i| {
            coeffs
                .iter()
                .map(|&(g1, g2, c)| match flavor {
                    Flavor::Real => c * sp.chi_real(g1, g2, i).unwrap(),
                    _ => c * chi(&m, g1, g2, i),
                })
                .sum()
        })
        .collect()
}

/// `χ_γ` sampled as `NodeData`.
pub fn chi_data(set: &IndexSet, g1: i64, g2: i64) -> NodeData {
    let m = set.frequencies();
    NodeData::from_fn(set, |i: NodeIndex| chi(&m, g1, g2, i))
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (7/15) quadrature.

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// `∫_a^b f` to absolute tolerance `tol` by recursive bisection.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let (v, e) = gk15(f, a, b);
        if e <= tol || depth > 40 {
            return v;
        }
        let c = 0.5 * (a + b);
        rec(f, a, c, 0.5 * tol, depth + 1) + rec(f, c, b, 0.5 * tol, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// `(1/4π) ∫∫ f(θ, φ) sinθ dθ dφ` by nested adaptive quadrature.
pub fn sphere_mean<F: Fn(f64, f64) -> f64>(f: F, tol: f64) -> f64 {
    let outer = |phi: f64| integrate(&|t: f64| f(t, phi) * t.sin(), 0.0, PI, tol / 100.0);
    integrate(&outer, 0.0, TAU, tol) / (4.0 * PI)
}

// ---------------------------------------------------------------------------
// Rotation helpers.

/// `‖J − J_fd‖_F / ‖J_fd‖_F` with a central-difference step `h`.
pub fn jacobian_relative_error(problem: &lissphere::RotationProblem, beta: lissphere::EulerAngles, h: f64) -> f64 {
    let (_, jac) = problem.residuals_and_jacobian(beta);
    let fd = problem.jacobian_fd(beta, h);
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in jac.iter().zip(&fd) {
        for k in 0..3 {
            num += (a[k] - b[k]).norm_sqr();
            den += b[k].norm_sqr();
        }
    }
    (num / den).sqrt()
}

pub fn random_beta(rng: &mut StdRng) -> lissphere::EulerAngles {
    lissphere::EulerAngles::new(
        rng.random_range(-PI..PI),
        rng.random_range(0.05..PI - 0.05),
        rng.random_range(-PI..PI),
    )
}
