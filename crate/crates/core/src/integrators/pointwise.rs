//! Pointwise nonlinear maps used by the steppers.

use num_complex::Complex64;

/// `|u|^2` below this is treated as zero when raising to fractional powers.
const TINY_MODULUS_SQ: f64 = 1e-300;

/// `p` is treated as an integer when within this distance of one.
const INTEGER_TOLERANCE: f64 = 1e-12;

pub(crate) fn as_integer(p: f64) -> Option<i32> {
    let r = p.round();
    ((p - r).abs() < INTEGER_TOLERANCE && r >= 0.0 && r < i32::MAX as f64).then_some(r as i32)
}

/// `|u|^{2p} u`.
pub(crate) fn power_nonlinearity(u: Complex64, p: f64) -> Complex64 {
    let m = u.norm_sqr();
    match as_integer(p) {
        Some(n) => u * m.powi(n),
        None if m < TINY_MODULUS_SQ => Complex64::default(),
        None => u * (p * m.ln()).exp(),
    }
}

/// `|u|^{2p}`.
pub(crate) fn modulus_power(u: Complex64, p: f64) -> f64 {
    let m = u.norm_sqr();
    match as_integer(p) {
        Some(n) => m.powi(n),
        None if m < TINY_MODULUS_SQ => 0.0,
        None => (p * m.ln()).exp(),
    }
}

/// `z^q` on the principal branch, with `0^q = 0` for `q > 0`.
pub(crate) fn complex_power(z: Complex64, q: f64) -> Complex64 {
    match as_integer(q) {
        Some(n) => z.powi(n),
        None if z.norm_sqr() < TINY_MODULUS_SQ => Complex64::default(),
        None => z.powf(q),
    }
}
