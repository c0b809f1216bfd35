use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Coefficients of a complex quadratic exponent `p x² + q x + r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticExponent {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
}

impl QuadraticExponent {
    /// Exact coefficients of a quadratic from its values at `x0 − h, x0, x0 + h`.
    pub fn from_samples(x0: f64, h: f64, values: [Complex64; 3]) -> Self {
        let [fm, f0, fp] = values;
        let p = (fp + fm - 2.0 * f0) / (2.0 * h * h);
        let slope = (fp - fm) / (2.0 * h);
        // re-centre from x0 to the origin
        QuadraticExponent {
            p,
            q: slope - 2.0 * p * x0,
            r: f0 - slope * x0 + p * x0 * x0,
        }
    }

    /// `∫ exp(p x² + q x + r) dx` over the real line, by analytic continuation
    /// of the Gaussian integral (principal branch), valid for `Re p ≤ 0, p ≠ 0`.
    pub fn integrate(&self) -> Result<Complex64> {
        let QuadraticExponent { p, q, r } = *self;
        if p.norm() == 0.0 || !p.is_finite() || p.re > 1e-12 * p.norm() {
            return Err(Error::DegenerateGaussian { re: p.re, im: p.im });
        }
        Ok((Complex64::new(PI, 0.0) / -p).sqrt() * (r - q * q / (4.0 * p)).exp())
    }
}
