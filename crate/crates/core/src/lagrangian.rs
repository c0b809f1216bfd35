//! Quadratic Lagrangians `L = ½[a(t)v² − b(t)x²] + c(t)x` with declarative
//! time-dependent coefficients.
//!
//! Coefficients are closed variants rather than closures so that the
//! classical solver can recognise constant coefficients and use exact
//! trigonometric solutions, and so that configurations serialize to JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A scalar coefficient of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TimeCoefficient {
    Constant {
        value: f64,
    },
    /// `prefactor · e^{rate·t}`
    Exponential {
        prefactor: f64,
        rate: f64,
    },
    /// `amplitude · sin(angularFrequency·t + phase)`
    Sinusoid {
        amplitude: f64,
        #[serde(rename = "angularFrequency")]
        angular_frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `Σ coefficients[k] · t^k`
    Polynomial {
        coefficients: Vec<f64>,
    },
}

impl TimeCoefficient {
    pub fn constant(value: f64) -> Self {
        TimeCoefficient::Constant { value }
    }

    pub fn exponential(prefactor: f64, rate: f64) -> Self {
        TimeCoefficient::Exponential { prefactor, rate }
    }

    pub fn sinusoid(amplitude: f64, angular_frequency: f64, phase: f64) -> Self {
        TimeCoefficient::Sinusoid {
            amplitude,
            angular_frequency,
            phase,
        }
    }

    pub fn polynomial(coefficients: Vec<f64>) -> Self {
        TimeCoefficient::Polynomial { coefficients }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeCoefficient::Constant { value } => *value,
            TimeCoefficient::Exponential { prefactor, rate } => {
                if *rate == 0.0 {
                    *prefactor
                } else {
                    prefactor * (rate * t).exp()
                }
            }
            TimeCoefficient::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
            } => amplitude * (angular_frequency * t + phase).sin(),
            TimeCoefficient::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
            }
        }
    }

    /// The value if the coefficient does not depend on time.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            TimeCoefficient::Constant { value } => Some(*value),
            TimeCoefficient::Exponential { prefactor, rate } => {
                (*rate == 0.0 || *prefactor == 0.0).then_some(*prefactor)
            }
            TimeCoefficient::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
            } => {
                if *amplitude == 0.0 {
                    Some(0.0)
                } else if *angular_frequency == 0.0 {
                    Some(amplitude * phase.sin())
                } else {
                    None
                }
            }
            TimeCoefficient::Polynomial { coefficients } => match coefficients.as_slice() {
                [] => Some(0.0),
                [c0, rest @ ..] if rest.iter().all(|&c| c == 0.0) => Some(*c0),
                _ => None,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    fn validate(&self, name: &'static str) -> Result<()> {
        let finite = match self {
            TimeCoefficient::Constant { value } => value.is_finite(),
            TimeCoefficient::Exponential { prefactor, rate } => {
                prefactor.is_finite() && rate.is_finite()
            }
            TimeCoefficient::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
            } => amplitude.is_finite() && angular_frequency.is_finite() && phase.is_finite(),
            TimeCoefficient::Polynomial { coefficients } => {
                coefficients.iter().all(|c| c.is_finite())
            }
        };
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name,
                reason: "coefficient parameters must be finite".into(),
            })
        }
    }
}

/// `L = ½[a(t)v² − b(t)x²] + c(t)x` together with ħ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticLagrangian {
    pub a: TimeCoefficient,
    pub b: TimeCoefficient,
    pub c: TimeCoefficient,
    pub hbar: f64,
}

impl QuadraticLagrangian {
    pub fn new(
        a: TimeCoefficient,
        b: TimeCoefficient,
        c: TimeCoefficient,
        hbar: f64,
    ) -> Result<Self> {
        let lagrangian = QuadraticLagrangian { a, b, c, hbar };
        lagrangian.validate()?;
        Ok(lagrangian)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be positive and finite, got {}", self.hbar),
            });
        }
        self.a.validate("a")?;
        self.b.validate("b")?;
        self.c.validate("c")
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        self.hbar = hbar;
        self.validate()?;
        Ok(self)
    }

    /// `a(t)`, checked to be positive.
    pub fn mass(&self, t: f64) -> Result<f64> {
        let value = self.a.eval(t);
        if value > 0.0 {
            Ok(value)
        } else {
            Err(Error::NonPositiveMass { t, value })
        }
    }

    /// All three coefficients as constants, when none of them varies in time.
    pub fn constant_coefficients(&self) -> Option<(f64, f64, f64)> {
        Some((
            self.a.as_constant()?,
            self.b.as_constant()?,
            self.c.as_constant()?,
        ))
    }

    pub fn value(&self, x: f64, v: f64, t: f64) -> f64 {
        0.5 * (self.a.eval(t) * v * v - self.b.eval(t) * x * x) + self.c.eval(t) * x
    }

    /// Potential of the associated Hamiltonian, `½b(t)x² − c(t)x`.
    pub fn effective_potential(&self, x: f64, t: f64) -> f64 {
        0.5 * self.b.eval(t) * x * x - self.c.eval(t) * x
    }
}

pub fn eval_coefficient(c: &TimeCoefficient, t: f64) -> f64 {
    c.eval(t)
}

pub fn lagrangian_value(l: &QuadraticLagrangian, x: f64, v: f64, t: f64) -> f64 {
    l.value(x, v, t)
}

pub fn effective_potential(l: &QuadraticLagrangian, x: f64, t: f64) -> f64 {
    l.effective_potential(x, t)
}

fn one() -> f64 {
    1.0
}

/// The named model systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Preset {
    #[serde(rename = "free")]
    FreeParticle {
        #[serde(default = "one")]
        m: f64,
    },
    #[serde(rename = "harmonic")]
    HarmonicOscillator {
        #[serde(default = "one")]
        m: f64,
        #[serde(default = "one")]
        omega: f64,
    },
    #[serde(rename = "driven")]
    DrivenOscillator {
        #[serde(default = "one")]
        m: f64,
        #[serde(default = "one")]
        omega: f64,
        drive: TimeCoefficient,
    },
    /// Caldirola–Kanai: `a = m e^{γt}`, `b = mω² e^{γt}`.
    #[serde(rename = "damped")]
    DampedOscillator {
        #[serde(default = "one")]
        m: f64,
        #[serde(default = "one")]
        omega: f64,
        gamma: f64,
    },
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::FreeParticle { .. } => "free",
            Preset::HarmonicOscillator { .. } => "harmonic",
            Preset::DrivenOscillator { .. } => "driven",
            Preset::DampedOscillator { .. } => "damped",
        }
    }

    pub fn mass(&self) -> f64 {
        match self {
            Preset::FreeParticle { m }
            | Preset::HarmonicOscillator { m, .. }
            | Preset::DrivenOscillator { m, .. }
            | Preset::DampedOscillator { m, .. } => *m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.mass();
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "m",
                reason: format!("mass must be positive and finite, got {m}"),
            });
        }
        match self {
            Preset::FreeParticle { .. } => Ok(()),
            Preset::HarmonicOscillator { omega, .. } | Preset::DrivenOscillator { omega, .. } => {
                if omega.is_finite() && *omega > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter {
                        name: "omega",
                        reason: format!("must be positive and finite, got {omega}"),
                    })
                }
            }
            Preset::DampedOscillator { omega, gamma, .. } => {
                if !(omega.is_finite() && *omega > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidParameter {
                        name: "omega",
                        reason: "omega must be positive and gamma finite".into(),
                    });
                }
                if omega * omega <= gamma * gamma / 4.0 {
                    Err(Error::OverdampedPreset {
                        omega: *omega,
                        gamma: *gamma,
                    })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// `Ω = √(ω² − γ²/4)` for the damped preset, `ω` for the oscillators.
    pub fn shifted_frequency(&self) -> Option<f64> {
        match self {
            Preset::FreeParticle { .. } => None,
            Preset::HarmonicOscillator { omega, .. } | Preset::DrivenOscillator { omega, .. } => {
                Some(*omega)
            }
            Preset::DampedOscillator { omega, gamma, .. } => {
                Some((omega * omega - gamma * gamma / 4.0).sqrt())
            }
        }
    }

    /// The Lagrangian in natural units (ħ = 1).
    pub fn lagrangian(&self) -> Result<QuadraticLagrangian> {
        self.validate()?;
        let (a, b, c) = match self {
            Preset::FreeParticle { m } => (
                TimeCoefficient::constant(*m),
                TimeCoefficient::zero(),
                TimeCoefficient::zero(),
            ),
            Preset::HarmonicOscillator { m, omega } => (
                TimeCoefficient::constant(*m),
                TimeCoefficient::constant(m * omega * omega),
                TimeCoefficient::zero(),
            ),
            Preset::DrivenOscillator { m, omega, drive } => (
                TimeCoefficient::constant(*m),
                TimeCoefficient::constant(m * omega * omega),
                drive.clone(),
            ),
            Preset::DampedOscillator { m, omega, gamma } => (
                TimeCoefficient::exponential(*m, *gamma),
                TimeCoefficient::exponential(m * omega * omega, *gamma),
                TimeCoefficient::zero(),
            ),
        };
        QuadraticLagrangian::new(a, b, c, 1.0)
    }
}

pub fn preset_lagrangian(p: &Preset) -> Result<QuadraticLagrangian> {
    p.lagrangian()
}
