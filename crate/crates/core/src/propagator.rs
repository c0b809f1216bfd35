//! Assembly of the propagator `K = C·exp(iS_cl/ħ)·exp(iΔ/ħ)·(−i)^n`.
//!
//! `C = √(a(tA)/2πiħ)` is fixed by requiring `∫K(x+η, t+ε | x, t) dη → 1`
//! as `ε → 0⁺` under the regularized convention for `Δ`. The integer `n`
//! counts conjugate points crossed in `(tA, tB)`; each contributes `−i`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::classical::{ActionQuadraticForm, BoundaryData, FundamentalSystem, SolverOptions};
use crate::error::{Error, Result};
use crate::lagrangian::QuadraticLagrangian;
use crate::quantum_action::correction_integral;

/// A propagator value together with the factors it was assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorValue {
    pub value: Complex64,
    pub normalization: Complex64,
    /// `exp(iS_cl/ħ)`
    pub classical_phase_factor: Complex64,
    /// `exp(iΔ/ħ)`
    pub delta_factor: Complex64,
    pub caustic_index: u32,
    pub classical_action: f64,
    pub delta: Complex64,
}

/// `(−i)^n`
pub fn maslov_factor(caustic_index: u32) -> Complex64 {
    match caustic_index % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

impl PropagatorValue {
    pub fn from_parts(
        normalization: Complex64,
        classical_action: f64,
        delta: Complex64,
        caustic_index: u32,
        hbar: f64,
    ) -> Self {
        let classical_phase_factor = Complex64::from_polar(1.0, classical_action / hbar);
        let delta_factor = (Complex64::i() * delta / hbar).exp();
        PropagatorValue {
            value: normalization
                * classical_phase_factor
                * delta_factor
                * maslov_factor(caustic_index),
            normalization,
            classical_phase_factor,
            delta_factor,
            caustic_index,
            classical_action,
            delta,
        }
    }

    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }

    pub fn phase(&self) -> f64 {
        self.value.arg()
    }
}

/// Principal `√(z/(2πiħ))` for real `z > 0`.
fn fresnel_root(z: f64, hbar: f64) -> Complex64 {
    Complex64::new(0.0, -z / (2.0 * PI * hbar)).sqrt()
}

pub fn normalization_constant(l: &QuadraticLagrangian, t_a: f64) -> Result<Complex64> {
    Ok(fresnel_root(l.mass(t_a)?, l.hbar))
}

/// The kernel between two fixed times, reusable for any pair of positions.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub form: ActionQuadraticForm,
    pub normalization: Complex64,
    pub delta: Complex64,
    pub caustic_index: u32,
    pub hbar: f64,
    /// `C·exp(iΔ/ħ)·(−i)^n`, the position-independent prefactor.
    prefactor: Complex64,
}

impl Kernel {
    pub fn new(l: &QuadraticLagrangian, t_a: f64, t_b: f64, opts: &SolverOptions) -> Result<Self> {
        let fs = FundamentalSystem::new(l, t_a, t_b, opts)?;
        Self::on_system(&fs, l, t_b, opts)
    }

    pub fn on_system(
        fs: &FundamentalSystem,
        l: &QuadraticLagrangian,
        t_b: f64,
        opts: &SolverOptions,
    ) -> Result<Self> {
        let form = fs.action_form(t_b, opts.caustic_tol)?;
        let lambda = correction_integral(fs, t_b, opts.quad_tol, opts.caustic_tol)?;
        let delta = Complex64::new(0.0, 0.5 * l.hbar * lambda.value);
        let normalization = normalization_constant(l, fs.start())?;
        let prefactor = normalization
            * (Complex64::i() * delta / l.hbar).exp()
            * maslov_factor(lambda.caustic_index);
        Ok(Kernel {
            form,
            normalization,
            delta,
            caustic_index: lambda.caustic_index,
            hbar: l.hbar,
            prefactor,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        self.form.interval
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    pub fn amplitude(&self, x_b: f64, x_a: f64) -> Complex64 {
        self.prefactor * Complex64::from_polar(1.0, self.form.eval(x_b, x_a) / self.hbar)
    }

    pub fn evaluate(&self, x_b: f64, x_a: f64) -> PropagatorValue {
        PropagatorValue::from_parts(
            self.normalization,
            self.form.eval(x_b, x_a),
            self.delta,
            self.caustic_index,
            self.hbar,
        )
    }
}

pub fn propagator_evaluate(
    l: &QuadraticLagrangian,
    bd: &BoundaryData,
    opts: &SolverOptions,
) -> Result<PropagatorValue> {
    bd.validate()?;
    Ok(Kernel::new(l, bd.t_a, bd.t_b, opts)?.evaluate(bd.x_b, bd.x_a))
}

/// `√(−β/2πiħ)·exp(iS_cl/ħ)` with `β = ∂²S_cl/∂xA∂xB`; beyond conjugate points
/// `|β|` is used and the phase enters through `(−i)^n`.
pub fn vvpm_propagator(
    form: &ActionQuadraticForm,
    x_b: f64,
    x_a: f64,
    hbar: f64,
    caustic_index: u32,
) -> Result<Complex64> {
    if !form.beta.is_finite() || form.beta == 0.0 {
        return Err(Error::CausticSingularity {
            t: form.interval.1,
            v: 0.0,
        });
    }
    Ok(fresnel_root(form.beta.abs(), hbar)
        * Complex64::from_polar(1.0, form.eval(x_b, x_a) / hbar)
        * maslov_factor(caustic_index))
}

pub fn caustic_index(
    l: &QuadraticLagrangian,
    t_a: f64,
    t_b: f64,
    opts: &SolverOptions,
) -> Result<u32> {
    let fs = FundamentalSystem::new(l, t_a, t_b, opts)?;
    Ok(fs.caustics()?.len() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::action_quadratic_form;
    use crate::lagrangian::Preset;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm()
    }

    #[test]
    fn normalization_examples() {
        let free = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        let c = normalization_constant(&free, 0.0).unwrap();
        let expected = Complex64::from_polar((2.0 * PI).powf(-0.5), -FRAC_PI_4);
        assert!(close(c, expected, 1e-15));

        let damped = Preset::DampedOscillator {
            m: 1.0,
            omega: 1.0,
            gamma: 0.2,
        }
        .lagrangian()
        .unwrap();
        assert!(close(
            normalization_constant(&damped, 0.0).unwrap(),
            expected,
            1e-15
        ));
        assert!(close(
            normalization_constant(&damped, 1.0).unwrap(),
            expected * 0.1f64.exp(),
            1e-15
        ));
    }

    #[test]
    fn free_and_harmonic_values() {
        let free = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        let bd = BoundaryData::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let k = propagator_evaluate(&free, &bd, &SolverOptions::default()).unwrap();
        assert!((k.modulus() - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert!((k.phase() - (0.5 - FRAC_PI_4)).abs() < 1e-14);
        assert_eq!(k.caustic_index, 0);
        assert!((k.classical_phase_factor.norm() - 1.0).abs() < 1e-15);

        let ho = Preset::HarmonicOscillator { m: 1.0, omega: 1.0 }
            .lagrangian()
            .unwrap();
        let bd = BoundaryData::new(0.0, 0.0, 1.0, FRAC_PI_2).unwrap();
        let k = propagator_evaluate(&ho, &bd, &SolverOptions::default()).unwrap();
        assert!((k.modulus() - 0.398_942_280_401_432_7).abs() < 1e-12);
        assert!((k.phase() + FRAC_PI_4).abs() < 1e-12);
        let recomposed =
            k.normalization * k.classical_phase_factor * k.delta_factor * maslov_factor(0);
        assert_eq!(recomposed, k.value);
    }

    #[test]
    fn caustic_examples() {
        let opts = SolverOptions::default();
        let free = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        assert_eq!(caustic_index(&free, 0.0, 50.0, &opts).unwrap(), 0);
        let ho = Preset::HarmonicOscillator { m: 1.0, omega: 1.0 }
            .lagrangian()
            .unwrap();
        assert_eq!(caustic_index(&ho, 0.0, FRAC_PI_2, &opts).unwrap(), 0);
        assert_eq!(caustic_index(&ho, 0.0, 1.5 * PI, &opts).unwrap(), 1);
        assert_eq!(
            caustic_index(&ho, 0.0, 1.5 * PI, &SolverOptions::numeric()).unwrap(),
            1
        );
        let bd = BoundaryData::new(0.0, 0.0, 1.0, PI).unwrap();
        let err = propagator_evaluate(&ho, &bd, &opts).unwrap_err();
        assert_eq!(err.name(), "CausticSingularity");
    }

    #[test]
    fn vvpm_examples() {
        let opts = SolverOptions::default();
        let free = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        let form = action_quadratic_form(&free, 0.0, 1.0, &opts).unwrap();
        let v = vvpm_propagator(&form, 1.0, 0.0, 1.0, 0).unwrap();
        let bd = BoundaryData::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let k = propagator_evaluate(&free, &bd, &opts).unwrap();
        assert!(close(v, k.value, 1e-14));

        let ho = Preset::HarmonicOscillator { m: 1.0, omega: 1.0 }
            .lagrangian()
            .unwrap();
        let form = action_quadratic_form(&ho, 0.0, FRAC_PI_2, &opts).unwrap();
        let v = vvpm_propagator(&form, 1.0, 0.0, 1.0, 0).unwrap();
        assert!((v.norm() - (2.0 * PI).powf(-0.5)).abs() < 1e-14);
    }

    #[test]
    fn convention_invariance() {
        let l = Preset::DampedOscillator {
            m: 1.0,
            omega: 1.0,
            gamma: 0.3,
        }
        .lagrangian()
        .unwrap();
        let bd = BoundaryData::new(0.2, 0.0, -0.6, 1.2).unwrap();
        let k = propagator_evaluate(&l, &bd, &SolverOptions::default()).unwrap();
        for kappa in [0.37, -2.1, 5.0] {
            let shifted = PropagatorValue::from_parts(
                k.normalization * Complex64::from_polar(1.0, -kappa / l.hbar),
                k.classical_action,
                k.delta + kappa,
                k.caustic_index,
                l.hbar,
            );
            assert!(close(shifted.value, k.value, 1e-12));
            assert!(close(
                shifted.normalization * shifted.delta_factor,
                k.normalization * k.delta_factor,
                1e-12
            ));
        }
    }

    #[test]
    fn hermitian_symmetry_for_constant_coefficients() {
        let ho = Preset::HarmonicOscillator { m: 1.3, omega: 0.7 }
            .lagrangian()
            .unwrap();
        let k = Kernel::new(&ho, 0.0, 2.2, &SolverOptions::default()).unwrap();
        for (x, y) in [(0.3, -1.2), (2.0, 0.5), (-0.1, -0.9)] {
            assert!(close(k.amplitude(x, y), k.amplitude(y, x), 1e-14));
        }
    }

    #[test]
    fn maslov_cycle() {
        let mut acc = Complex64::new(1.0, 0.0);
        for n in 0..9 {
            assert_eq!(maslov_factor(n), acc);
            acc *= Complex64::new(0.0, -1.0);
        }
    }
}
