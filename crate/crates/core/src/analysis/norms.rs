use crate::error::{Error, Result};
use crate::spectral::Field;

/// Discrete Sobolev norm `sqrt(sum_k (1 + |k|)^{2r} |u_hat_k|^2)`, with `|k|`
/// the Euclidean length of the multi-index.
pub fn h_r_norm(f: &Field, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("Sobolev order must be >= 0, got {r}")));
    }
    let coeffs = f.coefficients();
    let sum: f64 = coeffs
        .iter()
        .zip(f.grid().norm_sq())
        .map(|(c, &k2)| {
            let w = if r == 0.0 {
                1.0
            } else {
                (1.0 + (k2 as f64).sqrt()).powf(2.0 * r)
            };
            w * c.norm_sqr()
        })
        .sum();
    Ok(sum.sqrt())
}

/// `h_r_norm(a - b, r)`.
pub fn h_r_distance(a: &Field, b: &Field, r: f64) -> Result<f64> {
    h_r_norm(&a.sub(b)?, r)
}
