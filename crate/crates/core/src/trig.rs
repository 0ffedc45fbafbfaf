//! Trigonometric values at rational multiples of π.
//!
//! Node coordinates and discrete basis values are all of the form `k·π/n`.
//! Reducing `k` in integer arithmetic before calling into libm keeps
//! multiples of π/2 exact and makes symmetric angles produce bitwise
//! symmetric values.

use std::f64::consts::PI;

/// Returns `(sin(kπ/n), cos(kπ/n))`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn sin_cos_pi_ratio(k: i64, n: i64) -> (f64, f64) {
    assert!(n > 0, "denominator must be positive");
    let r = k.rem_euclid(2 * n);
    let r2 = 2 * r;
    let base = |j: i64| (j as f64 * PI / n as f64).sin_cos();
    if r == 0 {
        (0.0, 1.0)
    } else if r2 < n {
        base(r)
    } else if r2 == n {
        (1.0, 0.0)
    } else if r < n {
        let (s, c) = base(n - r);
        (s, -c)
    } else if r == n {
        (0.0, -1.0)
    } else if r2 < 3 * n {
        let (s, c) = base(r - n);
        (-s, -c)
    } else if r2 == 3 * n {
        (-1.0, 0.0)
    } else {
        let (s, c) = base(2 * n - r);
        (-s, c)
    }
}

/// `(-1)^k` as a float.
#[inline]
pub fn sign_pow(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let mut w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w += 2.0 * PI;
    }
    w
}

/// Euclidean gcd.
pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
