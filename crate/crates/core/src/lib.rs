//! Feynman propagators for quadratic Lagrangians
//! `L = ½[a(t)ẋ² − b(t)x²] + c(t)x`, assembled as
//! `K = C·exp(i(S_cl + Δ)/ħ)` from the classical action, a time-only quantum
//! correction and a short-time normalization.

pub mod classical;
pub mod error;
pub mod lagrangian;
pub mod ode;
pub mod oracles;
pub mod propagator;
pub mod quadrature;
pub mod quantum_action;

pub use classical::{
    action_quadratic_form, classical_trajectory, closed_form_action, fundamental_system,
    ActionQuadraticForm, BoundaryData, ClassicalPath, FundamentalSystem, Method, SolverOptions,
};
pub use error::{Error, Result};
pub use lagrangian::{
    effective_potential, eval_coefficient, lagrangian_value, preset_lagrangian, Preset,
    QuadraticLagrangian, TimeCoefficient,
};
pub use num_complex::Complex64;
pub use propagator::{
    caustic_index, maslov_factor, normalization_constant, propagator_evaluate, vvpm_propagator,
    Kernel, PropagatorValue,
};
pub use quantum_action::{
    closed_form_delta, correction_integral, delta_correction, quantum_action_total,
    CorrectionIntegral, QuantumAction,
};
