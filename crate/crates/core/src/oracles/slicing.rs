//! Time-sliced path integral with exact Gaussian elimination of the interior
//! points. Contains no `Δ`, no normalization convention and no branch choice
//! beyond the principal root of each one-dimensional Fresnel integral.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::classical::BoundaryData;
use crate::error::{Error, Result};
use crate::lagrangian::QuadraticLagrangian;

/// Discrete kernel with `slices` steps and the left-endpoint action
/// `S_N = Σ ε[a(t_k)(x_{k+1}−x_k)²/2ε² − b(t_k)x_k²/2 + c(t_k)x_k]`.
pub fn time_sliced_kernel(
    l: &QuadraticLagrangian,
    bd: &BoundaryData,
    slices: usize,
) -> Result<Complex64> {
    bd.validate()?;
    if slices == 0 {
        return Err(Error::InvalidParameter {
            name: "slices",
            reason: "at least one slice is required".into(),
        });
    }
    let eps = bd.duration() / slices as f64;
    let ih = Complex64::new(0.0, 1.0 / l.hbar);
    let time = |k: usize| bd.t_a + k as f64 * eps;
    let slice_norm = |a: f64| Complex64::new(0.0, -a / (2.0 * PI * l.hbar * eps)).sqrt();

    // exponent A x² + B x + C in the current integration variable
    let a0 = l.mass(time(0))?;
    let (b0, c0) = (l.b.eval(time(0)), l.c.eval(time(0)));
    let x_a = bd.x_a;
    let mut quad = ih * (a0 / (2.0 * eps));
    let mut lin = ih * (-a0 * x_a / eps);
    let mut cst = ih * (a0 * x_a * x_a / (2.0 * eps) - eps * b0 * x_a * x_a / 2.0 + eps * c0 * x_a);
    let mut amplitude = slice_norm(a0);

    for k in 1..slices {
        let t = time(k);
        let a = l.mass(t)?;
        let (b, c) = (l.b.eval(t), l.c.eval(t));
        let p = quad + ih * (a / (2.0 * eps) - eps * b / 2.0);
        if p.norm() <= 1e-14 * a / (eps * l.hbar) {
            return Err(Error::DegenerateSlice { slice: k });
        }
        let q0 = lin + ih * (eps * c);
        let q1 = ih * (-a / eps);
        let r2 = ih * (a / (2.0 * eps));
        let four_p = 4.0 * p;
        quad = r2 - q1 * q1 / four_p;
        lin = -2.0 * q0 * q1 / four_p;
        cst -= q0 * q0 / four_p;
        amplitude *= slice_norm(a) * (Complex64::new(PI, 0.0) / -p).sqrt();
    }
    let x_b = bd.x_b;
    Ok(amplitude * (quad * x_b * x_b + lin * x_b + cst).exp())
}

/// Romberg extrapolation of values computed at `N, 2N, 4N, …` slices,
/// assuming an error expansion in integer powers of `1/N`.
pub fn richardson(values: &[Complex64]) -> Option<Complex64> {
    let mut row: Vec<Complex64> = values.to_vec();
    if row.is_empty() {
        return None;
    }
    let mut factor = 2.0;
    while row.len() > 1 {
        row = row
            .windows(2)
            .map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 2.0;
    }
    row.pop()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceRow {
    pub slices: usize,
    pub value: Complex64,
    pub error: f64,
}

/// `|K_N − reference|` for each slice count.
pub fn slice_convergence(
    l: &QuadraticLagrangian,
    bd: &BoundaryData,
    slice_counts: &[usize],
    reference: Complex64,
) -> Result<Vec<SliceRow>> {
    slice_counts
        .iter()
        .map(|&n| {
            let value = time_sliced_kernel(l, bd, n)?;
            Ok(SliceRow {
                slices: n,
                value,
                error: (value - reference).norm(),
            })
        })
        .collect()
}

/// Richardson-extrapolated kernel from `levels` doublings starting at `base` slices.
pub fn extrapolated_kernel(
    l: &QuadraticLagrangian,
    bd: &BoundaryData,
    base: usize,
    levels: usize,
) -> Result<Complex64> {
    let values = (0..levels)
        .map(|j| time_sliced_kernel(l, bd, base << j))
        .collect::<Result<Vec<_>>>()?;
    richardson(&values).ok_or(Error::InvalidParameter {
        name: "levels",
        reason: "at least one level is required".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::Preset;

    /// Harmonic kernel with the Fresnel constant, principal √sin.
    fn harmonic_exact(x_a: f64, x_b: f64, t: f64) -> Complex64 {
        let s = t.sin();
        let pref = (Complex64::new(0.0, -1.0 / (2.0 * PI)) / Complex64::new(s, 0.0)).sqrt();
        pref * Complex64::from_polar(
            1.0,
            ((x_a * x_a + x_b * x_b) * t.cos() - 2.0 * x_a * x_b) / (2.0 * s),
        )
    }

    #[test]
    fn single_free_slice_is_exact() {
        let free = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        let bd = BoundaryData::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let k1 = time_sliced_kernel(&free, &bd, 1).unwrap();
        let exact = Complex64::new(0.0, -1.0 / (2.0 * PI)).sqrt() * Complex64::from_polar(1.0, 0.5);
        assert!((k1 - exact).norm() < 1e-15);
        let k7 = time_sliced_kernel(&free, &bd, 7).unwrap();
        assert!((k7 - exact).norm() < 1e-12 * exact.norm());
    }

    #[test]
    fn harmonic_slicing_converges() {
        let ho = Preset::HarmonicOscillator { m: 1.0, omega: 1.0 }
            .lagrangian()
            .unwrap();
        let bd = BoundaryData::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let exact = harmonic_exact(0.0, 1.0, 1.0);
        let rows = slice_convergence(&ho, &bd, &[8, 16, 32, 64, 128, 256], exact).unwrap();
        assert!(rows.windows(2).all(|w| w[1].error < w[0].error));
        // first order, reached from below at this boundary
        let orders: Vec<f64> = rows
            .windows(2)
            .map(|w| (w[0].error / w[1].error).log2())
            .collect();
        assert!(orders.windows(2).all(|w| w[1] > w[0]));
        assert!((orders[orders.len() - 1] - 1.0).abs() < 2e-3, "{orders:?}");

        // with xA = xB the first-order terms cancel
        let bd_sym = BoundaryData::new(0.5, 0.0, 0.5, 1.0).unwrap();
        let rows =
            slice_convergence(&ho, &bd_sym, &[16, 32], harmonic_exact(0.5, 0.5, 1.0)).unwrap();
        assert!((rows[0].error / rows[1].error).log2() > 1.9);
        let extrapolated = extrapolated_kernel(&ho, &bd, 8, 5).unwrap();
        assert!(
            (extrapolated - exact).norm() < 1e-8,
            "{}",
            (extrapolated - exact).norm()
        );
    }

    #[test]
    fn richardson_removes_polynomial_error() {
        let f = |n: f64| Complex64::new(2.0 + 1.0 / n - 3.0 / (n * n), 0.5 / n);
        let values: Vec<_> = [4.0, 8.0, 16.0].iter().map(|&n| f(n)).collect();
        let r = richardson(&values).unwrap();
        assert!((r - Complex64::new(2.0, 0.0)).norm() < 1e-13);
        assert!(richardson(&[]).is_none());
    }

    #[test]
    fn zero_slices_is_an_error() {
        let free = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        let bd = BoundaryData::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(time_sliced_kernel(&free, &bd, 0).is_err());
    }
}
