//! Integrated consequences of the Green-function property: the short-time
//! normalization `∫K(x+η, t+ε | x, t) dη → 1` and the composition law
//! `∫K(xB,tB|xM,tM) K(xM,tM|xA,tA) dxM = K(xB,tB|xA,tA)`.
//!
//! Every exponent involved is exactly quadratic in the integration variable,
//! so the integrals are evaluated in closed form.

use num_complex::Complex64;

use super::gaussian::QuadraticExponent;
use crate::classical::SolverOptions;
use crate::error::{Error, Result};
use crate::lagrangian::QuadraticLagrangian;
use crate::propagator::Kernel;

pub fn short_time_norm_check(
    l: &QuadraticLagrangian,
    x: f64,
    t: f64,
    eps: f64,
    opts: &SolverOptions,
) -> Result<Complex64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: format!("duration must be positive, got {eps}"),
        });
    }
    let kernel = Kernel::new(l, t, t + eps, opts)?;
    let form = &kernel.form;
    let ih = Complex64::new(0.0, 1.0 / l.hbar);
    // S_cl(x + η | x) as a quadratic in η
    let exponent = QuadraticExponent {
        p: ih * form.alpha,
        q: ih * form.final_momentum(x, x),
        r: ih * form.eval(x, x),
    };
    Ok(kernel.prefactor() * exponent.integrate()?)
}

pub fn composition_check(
    l: &QuadraticLagrangian,
    x_a: f64,
    x_b: f64,
    t_a: f64,
    t_m: f64,
    t_b: f64,
    opts: &SolverOptions,
) -> Result<Complex64> {
    if !(t_a < t_m && t_m < t_b) {
        return Err(Error::InvalidParameter {
            name: "tM",
            reason: format!("need tA < tM < tB, got {t_a}, {t_m}, {t_b}"),
        });
    }
    let first = Kernel::new(l, t_a, t_m, opts)?;
    let second = Kernel::new(l, t_m, t_b, opts)?;
    let ih = Complex64::new(0.0, 1.0 / l.hbar);
    let exponent_at = |x_m: f64| {
        ih * (second.evaluate(x_b, x_m).classical_action
            + first.evaluate(x_m, x_a).classical_action)
    };
    let centre = 0.5 * (x_a + x_b);
    let step = 1.0;
    let exponent = QuadraticExponent::from_samples(
        centre,
        step,
        [
            exponent_at(centre - step),
            exponent_at(centre),
            exponent_at(centre + step),
        ],
    );
    Ok(first.prefactor() * second.prefactor() * exponent.integrate()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::BoundaryData;
    use crate::lagrangian::Preset;
    use crate::propagator::propagator_evaluate;

    #[test]
    fn free_short_time_is_exact() {
        let l = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        for (x, t) in [(0.0, 0.0), (1.7, -3.0), (-4.0, 2.5)] {
            let r = short_time_norm_check(&l, x, t, 1e-4, &SolverOptions::default()).unwrap();
            assert!((r - 1.0).norm() < 1e-12, "{r}");
        }
    }

    #[test]
    fn oscillators_short_time() {
        let presets = [
            Preset::HarmonicOscillator { m: 1.0, omega: 1.0 },
            Preset::DampedOscillator {
                m: 1.0,
                omega: 1.0,
                gamma: 0.2,
            },
        ];
        for p in &presets {
            let l = p.lagrangian().unwrap();
            let r = short_time_norm_check(&l, 0.8, 0.5, 1e-4, &SolverOptions::default()).unwrap();
            assert!((r - 1.0).norm() <= 1e-3, "{p:?}: {r}");
        }
    }

    #[test]
    fn composition_matches_direct_kernel() {
        let opts = SolverOptions::default();
        let free = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        let c = composition_check(&free, 0.0, 1.0, 0.0, 0.5, 1.0, &opts).unwrap();
        let k = propagator_evaluate(
            &free,
            &BoundaryData::new(0.0, 0.0, 1.0, 1.0).unwrap(),
            &opts,
        )
        .unwrap()
        .value;
        assert!((c - k).norm() < 1e-12 * k.norm());

        let ho = Preset::HarmonicOscillator { m: 1.0, omega: 1.0 }
            .lagrangian()
            .unwrap();
        let c = composition_check(&ho, 0.2, -0.4, 0.0, 0.7, 1.3, &opts).unwrap();
        let k = propagator_evaluate(&ho, &BoundaryData::new(0.2, 0.0, -0.4, 1.3).unwrap(), &opts)
            .unwrap()
            .value;
        assert!((c - k).norm() < 1e-10 * k.norm());

        let c = composition_check(&ho, 0.2, -0.4, 0.0, 1e-6, 1.3, &opts).unwrap();
        assert!((c - k).norm() < 1e-5 * k.norm());
    }

    #[test]
    fn composition_requires_ordered_times() {
        let free = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        assert!(
            composition_check(&free, 0.0, 1.0, 0.0, 1.0, 1.0, &SolverOptions::default()).is_err()
        );
    }
}
