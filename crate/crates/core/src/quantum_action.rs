//! The quantum correction `Δ(t)` and the complex quantum action `S = S_cl + Δ`.
//!
//! For a quadratic Lagrangian `Δ` depends on time only and obeys
//! `∂Δ/∂t = (iħ/2a(t))·∂²S_cl/∂x²`. Integrating from `tA` diverges
//! logarithmically at the lower limit, since `∂²S_cl/∂x²/a → 1/(t − tA)`;
//! the pole is subtracted from the integrand and its logarithm added back,
//!
//! ```text
//! Δ(t) = (iħ/2)·ln(t − tA) + (iħ/2)·∫_{tA}^{t} [ ∂²S_cl/∂x²(τ)/a(τ) − 1/(τ − tA) ] dτ.
//! ```
//!
//! Past a conjugate point `τ_k` the integrand has another simple pole; it is
//! removed the same way, so that `Δ` continues with `ln|·|` and the phase of
//! the crossing is carried by the propagator's caustic index instead.

use num_complex::Complex64;

use crate::classical::{
    check_caustic, check_interval, BoundaryData, FundamentalSystem, SolverOptions,
};
use crate::error::{Error, Result};
use crate::lagrangian::{Preset, QuadraticLagrangian};
use crate::quadrature;

/// `S = S_cl + Δ` with both parts kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumAction {
    pub total: Complex64,
    pub classical_part: f64,
    pub delta: Complex64,
    pub interval: (f64, f64),
    /// Conjugate points crossed in `(tA, tB)`.
    pub caustic_index: u32,
}

/// Regularized log-amplitude `λ(t)`, with `Δ = (iħ/2)·λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionIntegral {
    pub value: f64,
    pub caustic_index: u32,
}

/// Evaluate `λ(t) = ln(t − tA) + ∫ [2α(τ)/a(τ) − 1/(τ − tA)] dτ` (plus the
/// analogous pole terms for interior conjugate points) on a solved basis.
pub fn correction_integral(
    fs: &FundamentalSystem,
    t: f64,
    quad_tol: f64,
    caustic_tol: f64,
) -> Result<CorrectionIntegral> {
    let t_a = fs.start();
    check_interval(t_a, t)?;
    check_caustic(&fs.state_at(t)?, t_a, caustic_tol)?;

    let mut poles = vec![t_a];
    poles.extend(fs.caustics()?.into_iter().filter(|&z| z < t));

    let integrand = |tau: f64| -> Result<f64> {
        let s = fs.state_at(tau)?;
        // 2α(τ)/a(τ) with α = a v̇ / 2v from the form on [tA, τ]
        let curvature = s.v_dot / s.v;
        let singular: f64 = poles.iter().map(|&z| 1.0 / (tau - z)).sum();
        Ok(curvature - singular)
    };

    let mut value = 0.0;
    let mut bounds = poles.clone();
    bounds.push(t);
    for w in bounds.windows(2) {
        value += quadrature::integrate(integrand, w[0], w[1], quad_tol)?.value;
    }
    value += poles.iter().map(|&z| (t - z).abs().ln()).sum::<f64>();
    value -= poles[1..].iter().map(|&z| (z - t_a).ln()).sum::<f64>();
    Ok(CorrectionIntegral {
        value,
        caustic_index: (poles.len() - 1) as u32,
    })
}

/// `Δ(t)` for a Lagrangian started at `tA`.
pub fn delta_correction(
    l: &QuadraticLagrangian,
    t_a: f64,
    t: f64,
    opts: &SolverOptions,
) -> Result<Complex64> {
    let fs = FundamentalSystem::new(l, t_a, t, opts)?;
    let lambda = correction_integral(&fs, t, opts.quad_tol, opts.caustic_tol)?;
    Ok(Complex64::new(0.0, 0.5 * l.hbar * lambda.value))
}

/// The preset closed forms `Δ_free = (iħ/2)ln T`, `Δ_HO = (iħ/2)ln sin ωT`,
/// `Δ_damped = −(iħγ/4)T + (iħ/2)ln sin ΩT`.
///
/// These differ from [`delta_correction`] by a constant that the normalization
/// absorbs (e.g. `(iħ/2)ln(1/ω)`). Beyond the first conjugate point the
/// principal complex logarithm is used.
pub fn closed_form_delta(p: &Preset, duration: f64, hbar: f64) -> Result<Complex64> {
    p.validate()?;
    if !(duration > 0.0) {
        return Err(Error::InvalidInterval {
            t_a: 0.0,
            t_b: duration,
        });
    }
    let half_i_hbar = Complex64::new(0.0, 0.5 * hbar);
    let log_sine = |w: f64| -> Result<Complex64> {
        let s = (w * duration).sin();
        if (s / w).abs() < 1e-9 * duration {
            return Err(Error::CausticSingularity { t: duration, v: s });
        }
        Ok(Complex64::new(s, 0.0).ln())
    };
    match p {
        Preset::FreeParticle { .. } => Ok(half_i_hbar * duration.ln()),
        Preset::HarmonicOscillator { omega, .. } | Preset::DrivenOscillator { omega, .. } => {
            Ok(half_i_hbar * log_sine(*omega)?)
        }
        Preset::DampedOscillator { gamma, .. } => {
            let big_omega = p
                .shifted_frequency()
                .expect("damped preset has a frequency");
            Ok(Complex64::new(0.0, -0.25 * hbar * gamma * duration)
                + half_i_hbar * log_sine(big_omega)?)
        }
    }
}

pub fn quantum_action_total(
    l: &QuadraticLagrangian,
    bd: &BoundaryData,
    opts: &SolverOptions,
) -> Result<QuantumAction> {
    bd.validate()?;
    let fs = FundamentalSystem::new(l, bd.t_a, bd.t_b, opts)?;
    quantum_action_on(&fs, l.hbar, bd, opts)
}

/// Quantum action from an already solved basis starting at `bd.t_a`.
pub fn quantum_action_on(
    fs: &FundamentalSystem,
    hbar: f64,
    bd: &BoundaryData,
    opts: &SolverOptions,
) -> Result<QuantumAction> {
    let form = fs.action_form(bd.t_b, opts.caustic_tol)?;
    let lambda = correction_integral(fs, bd.t_b, opts.quad_tol, opts.caustic_tol)?;
    let classical_part = form.eval(bd.x_b, bd.x_a);
    let delta = Complex64::new(0.0, 0.5 * hbar * lambda.value);
    Ok(QuantumAction {
        total: classical_part + delta,
        classical_part,
        delta,
        interval: (bd.t_a, bd.t_b),
        caustic_index: lambda.caustic_index,
    })
}
