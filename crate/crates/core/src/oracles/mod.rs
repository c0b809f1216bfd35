//! Independent checks of the propagator pipeline.

pub mod evolution;
pub mod gaussian;
pub mod qhje;
pub mod semigroup;
pub mod slicing;

pub use evolution::{crank_nicolson_evolve, kernel_evolve, GridWavefunction};
pub use gaussian::QuadraticExponent;
pub use qhje::{
    delta_equation_residual, qhje_residual, residual_report, ActionField, FnField,
    QuantumActionField, ResidualReport,
};
pub use semigroup::{composition_check, short_time_norm_check};
pub use slicing::{
    extrapolated_kernel, richardson, slice_convergence, time_sliced_kernel, SliceRow,
};
