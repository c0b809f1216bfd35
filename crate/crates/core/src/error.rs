use thiserror::Error;

/// Failures raised by the propagator pipeline and its oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mass coefficient a(t) = {value} is not positive at t = {t}")]
    NonPositiveMass { t: f64, value: f64 },

    #[error("underdamped regime requires omega^2 > gamma^2/4 (omega = {omega}, gamma = {gamma})")]
    OverdampedPreset { omega: f64, gamma: f64 },

    #[error("invalid time interval: tB = {t_b} must exceed tA = {t_a}")]
    InvalidInterval { t_a: f64, t_b: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("integrator could not meet tolerance {tol} near t = {t}")]
    ToleranceNotMet { t: f64, tol: f64 },

    #[error("boundary-value problem is degenerate at t = {t} (conjugate point, v = {v})")]
    CausticSingularity { t: f64, v: f64 },

    #[error("time-slicing elimination degenerated at slice {slice}")]
    DegenerateSlice { slice: usize },

    #[error("complex Gaussian integral undefined (quadratic coefficient {re} + {im}i)")]
    DegenerateGaussian { re: f64, im: f64 },

    #[error("finite-difference stencil leaves the domain (t - h_t = {t_low} <= tA = {t_a})")]
    StencilOutOfDomain { t_low: f64, t_a: f64 },

    #[error("wavefunction edge amplitude {amplitude:e} exceeds {threshold:e}")]
    EdgeLeakage { amplitude: f64, threshold: f64 },
}

impl Error {
    /// Stable identifier used in machine-readable error documents.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPositiveMass { .. } => "NonPositiveMass",
            Error::OverdampedPreset { .. } => "OverdampedPreset",
            Error::InvalidInterval { .. } => "InvalidInterval",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::ToleranceNotMet { .. } => "ToleranceNotMet",
            Error::CausticSingularity { .. } => "CausticSingularity",
            Error::DegenerateSlice { .. } => "DegenerateSlice",
            Error::DegenerateGaussian { .. } => "DegenerateGaussian",
            Error::StencilOutOfDomain { .. } => "StencilOutOfDomain",
            Error::EdgeLeakage { .. } => "EdgeLeakage",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
