//! Scalar type and tolerance helpers shared by every module.

use num_complex::Complex64;

/// Coefficient field of every model: complex double precision.
pub type C64 = Complex64;

/// Default comparison tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * scale(a, b)
}

/// `max(1, |a|, |b|)`, the scale used by [`approx_eq`].
pub fn scale(a: C64, b: C64) -> f64 {
    1f64.max(a.norm()).max(b.norm())
}

/// Relative discrepancy `|a - b| / max(1, |a|, |b|)`.
pub fn rel_diff(a: C64, b: C64) -> f64 {
    (a - b).norm() / scale(a, b)
}

/// Principal `k`-th root, with `0^(1/k) = 0`.
pub fn principal_root(z: C64, k: usize) -> C64 {
    if z == ZERO {
        ZERO
    } else {
        z.powf(1.0 / k as f64)
    }
}

/// Whether the imaginary part is negligible relative to the magnitude.
pub fn is_effectively_real(z: C64, tol: f64) -> bool {
    z.im.abs() <= tol * 1f64.max(z.norm())
}

/// Saturating `base^exp`.
pub fn saturating_pow(base: u64, exp: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == u64::MAX {
            break;
        }
    }
    acc
}
