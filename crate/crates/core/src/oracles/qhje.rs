//! Finite-difference residuals of the quantum Hamilton–Jacobi equation
//!
//! ```text
//! ∂S/∂t + V(x,t) + (∂S/∂x)²/2a(t) − (iħ/2a(t))·∂²S/∂x² = 0
//! ```
//!
//! and of the reduced equation for a time-only correction,
//! `∂Δ/∂t − (iħ/2a(t))·∂²S_cl/∂x² = 0`.

use num_complex::Complex64;

use crate::classical::{BoundaryData, SolverOptions};
use crate::error::{Error, Result};
use crate::lagrangian::QuadraticLagrangian;
use crate::quantum_action::quantum_action_total;

/// A complex action field `S(x, t)` defined for `t > start_time()`.
pub trait ActionField {
    fn action(&self, x: f64, t: f64) -> Result<Complex64>;
    fn start_time(&self) -> f64;
}

/// Quantum action `S(x, t | xA, tA)` assembled by the propagator pipeline.
#[derive(Debug, Clone)]
pub struct QuantumActionField<'a> {
    pub lagrangian: &'a QuadraticLagrangian,
    pub x_a: f64,
    pub t_a: f64,
    pub opts: SolverOptions,
}

impl ActionField for QuantumActionField<'_> {
    fn action(&self, x: f64, t: f64) -> Result<Complex64> {
        let bd = BoundaryData::new(self.x_a, self.t_a, x, t)?;
        Ok(quantum_action_total(self.lagrangian, &bd, &self.opts)?.total)
    }

    fn start_time(&self) -> f64 {
        self.t_a
    }
}

/// Adapter for closures.
pub struct FnField<F> {
    pub f: F,
    pub start: f64,
}

impl<F> ActionField for FnField<F>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    fn action(&self, x: f64, t: f64) -> Result<Complex64> {
        (self.f)(x, t)
    }

    fn start_time(&self) -> f64 {
        self.start
    }
}

fn check_stencil(start: f64, t: f64, h_t: f64) -> Result<()> {
    let t_low = t - h_t;
    if t_low <= start {
        Err(Error::StencilOutOfDomain { t_low, t_a: start })
    } else {
        Ok(())
    }
}

/// Central-difference QHJE residual of `field` at `(x, t)`.
pub fn qhje_residual<S: ActionField + ?Sized>(
    l: &QuadraticLagrangian,
    field: &S,
    x: f64,
    t: f64,
    h_x: f64,
    h_t: f64,
) -> Result<Complex64> {
    check_stencil(field.start_time(), t, h_t)?;
    let s0 = field.action(x, t)?;
    let s_xp = field.action(x + h_x, t)?;
    let s_xm = field.action(x - h_x, t)?;
    let s_t = (field.action(x, t + h_t)? - field.action(x, t - h_t)?) / (2.0 * h_t);
    let s_x = (s_xp - s_xm) / (2.0 * h_x);
    let s_xx = (s_xp - 2.0 * s0 + s_xm) / (h_x * h_x);
    let a = l.mass(t)?;
    let kinetic = Complex64::new(0.0, l.hbar / (2.0 * a));
    Ok(s_t + l.effective_potential(x, t) + s_x * s_x / (2.0 * a) - kinetic * s_xx)
}

/// Residual of the correction equation, given the classical action field and
/// a time-only correction `Δ(t)`.
pub fn delta_equation_residual<S, D>(
    l: &QuadraticLagrangian,
    classical: &S,
    delta: D,
    x: f64,
    t: f64,
    h_x: f64,
    h_t: f64,
) -> Result<Complex64>
where
    S: ActionField + ?Sized,
    D: Fn(f64) -> Result<Complex64>,
{
    check_stencil(classical.start_time(), t, h_t)?;
    let d_t = (delta(t + h_t)? - delta(t - h_t)?) / (2.0 * h_t);
    let s_xx = (classical.action(x + h_x, t)? - 2.0 * classical.action(x, t)?
        + classical.action(x - h_x, t)?)
        / (h_x * h_x);
    let a = l.mass(t)?;
    Ok(d_t - Complex64::new(0.0, l.hbar / (2.0 * a)) * s_xx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub rms_residual: f64,
    pub grid_steps: (f64, f64),
    pub points: usize,
}

impl ResidualReport {
    pub fn from_residuals(residuals: &[Complex64], h_x: f64, h_t: f64) -> Self {
        let max_abs_residual = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let rms_residual = if residuals.is_empty() {
            0.0
        } else {
            (residuals.iter().map(|r| r.norm_sqr()).sum::<f64>() / residuals.len() as f64).sqrt()
        };
        ResidualReport {
            max_abs_residual,
            rms_residual,
            grid_steps: (h_x, h_t),
            points: residuals.len(),
        }
    }
}

/// QHJE residuals at several `(x, t)` points with common steps.
pub fn residual_report<S: ActionField + ?Sized>(
    l: &QuadraticLagrangian,
    field: &S,
    points: &[(f64, f64)],
    h_x: f64,
    h_t: f64,
) -> Result<ResidualReport> {
    let residuals = points
        .iter()
        .map(|&(x, t)| qhje_residual(l, field, x, t, h_x, h_t))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::from_residuals(&residuals, h_x, h_t))
}
