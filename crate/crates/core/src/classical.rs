//! Classical dynamics of a quadratic Lagrangian.
//!
//! The Euler–Lagrange equation `d/dt[a(t)ẋ] + b(t)x = c(t)` is linear, so the
//! extremal path is `x_cl = xA·u + B·v + p` with the fundamental pair `(u, v)`
//! and a particular solution `p`. The classical action then follows from the
//! boundary form `S_cl = ½[a ẋ x]_{tA}^{tB} + ½∫c x dt` as an exact quadratic
//! in the endpoints, without differentiating anything numerically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lagrangian::{Preset, QuadraticLagrangian};
use crate::ode::{self, Checkpoints};
use crate::quadrature;

/// Endpoints `(xA, tA)` and `(xB, tB)` with `tB > tA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    #[serde(rename = "xA")]
    pub x_a: f64,
    #[serde(rename = "tA")]
    pub t_a: f64,
    #[serde(rename = "xB")]
    pub x_b: f64,
    #[serde(rename = "tB")]
    pub t_b: f64,
}

impl BoundaryData {
    pub fn new(x_a: f64, t_a: f64, x_b: f64, t_b: f64) -> Result<Self> {
        let bd = BoundaryData { x_a, t_a, x_b, t_b };
        bd.validate()?;
        Ok(bd)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.x_a, self.t_a, self.x_b, self.t_b]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "boundary",
                reason: "endpoints must be finite".into(),
            });
        }
        check_interval(self.t_a, self.t_b)
    }

    pub fn duration(&self) -> f64 {
        self.t_b - self.t_a
    }
}

pub(crate) fn check_interval(t_a: f64, t_b: f64) -> Result<()> {
    if t_b > t_a && t_a.is_finite() && t_b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInterval { t_a, t_b })
    }
}

/// How the fundamental system is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed-form solutions when every coefficient is constant, otherwise numeric.
    #[default]
    Auto,
    /// Always integrate the Euler–Lagrange equation numerically.
    Numeric,
}

/// Numerical settings shared by the classical and quantum stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Per-step tolerance of the Euler–Lagrange integrator.
    pub ode_tol: f64,
    /// Tolerance of the quantum-correction quadrature.
    pub quad_tol: f64,
    /// `|v(tB)| < caustic_tol·(tB − tA)` is treated as a conjugate point.
    pub caustic_tol: f64,
    pub method: Method,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            ode_tol: 1e-12,
            quad_tol: 1e-10,
            caustic_tol: 1e-9,
            method: Method::Auto,
        }
    }
}

impl SolverOptions {
    pub fn numeric() -> Self {
        SolverOptions {
            method: Method::Numeric,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("ode_tol", self.ode_tol),
            ("quad_tol", self.quad_tol),
            ("caustic_tol", self.caustic_tol),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("tolerance must be positive, got {value}"),
                });
            }
        }
        Ok(())
    }
}

/// Values of the fundamental system and its running integrals at one time.
///
/// `u(tA)=1, u̇(tA)=0`, `v(tA)=0, v̇(tA)=1`, `p(tA)=ṗ(tA)=0`; the three
/// integrals are `∫_{tA}^{t} c·u`, `∫ c·v` and `∫ c·p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisState {
    pub t: f64,
    /// `a(t)`
    pub mass: f64,
    pub u: f64,
    pub u_dot: f64,
    pub v: f64,
    pub v_dot: f64,
    pub p: f64,
    pub p_dot: f64,
    pub int_cu: f64,
    pub int_cv: f64,
    pub int_cp: f64,
}

const DIM: usize = 9;

#[derive(Debug, Clone, Copy)]
struct ConstantBasis {
    a: f64,
    b: f64,
    c: f64,
}

/// `(x − sin x)` without cancellation for small `x`.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x * x2 / 6.0
            * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))))
    } else {
        x - x.sin()
    }
}

/// `(sinh x − x)` without cancellation for small `x`.
fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x * x2 / 6.0
            * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0 * (1.0 + x2 / 110.0))))
    } else {
        x.sinh() - x
    }
}

impl ConstantBasis {
    fn state(&self, s: f64, t: f64) -> BasisState {
        let ConstantBasis { a, b, c } = *self;
        let (u, u_dot, v, v_dot, p, p_dot, int_cu, int_cv, int_cp);
        if b == 0.0 {
            u = 1.0;
            u_dot = 0.0;
            v = s;
            v_dot = 1.0;
            p = c * s * s / (2.0 * a);
            p_dot = c * s / a;
            int_cu = c * s;
            int_cv = c * s * s / 2.0;
            int_cp = c * c * s * s * s / (6.0 * a);
        } else if b > 0.0 {
            let w = (b / a).sqrt();
            let (sn, cs) = (w * s).sin_cos();
            let half = (0.5 * w * s).sin();
            let one_minus_cos = 2.0 * half * half;
            u = cs;
            u_dot = -w * sn;
            v = sn / w;
            v_dot = cs;
            p = c / b * one_minus_cos;
            p_dot = c / b * w * sn;
            int_cu = c * sn / w;
            int_cv = c * one_minus_cos / (w * w);
            int_cp = c * c / b * x_minus_sin(w * s) / w;
        } else {
            let k = (-b / a).sqrt();
            let (sh, ch) = ((k * s).sinh(), (k * s).cosh());
            let half = (0.5 * k * s).sinh();
            let cosh_minus_one = 2.0 * half * half;
            u = ch;
            u_dot = k * sh;
            v = sh / k;
            v_dot = ch;
            p = -c / b * cosh_minus_one;
            p_dot = -c / b * k * sh;
            int_cu = c * sh / k;
            int_cv = c * cosh_minus_one / (k * k);
            int_cp = -c * c / b * sinh_minus_x(k * s) / k;
        }
        BasisState {
            t,
            mass: a,
            u,
            u_dot,
            v,
            v_dot,
            p,
            p_dot,
            int_cu,
            int_cv,
            int_cp,
        }
    }
}

#[derive(Debug, Clone)]
enum Basis {
    Constant(ConstantBasis),
    Numeric {
        lagrangian: QuadraticLagrangian,
        checkpoints: Checkpoints<DIM>,
    },
}

/// Solution basis of the Euler–Lagrange equation on `[tA, t_end]`, with
/// dense evaluation anywhere in that interval.
#[derive(Debug, Clone)]
pub struct FundamentalSystem {
    t_a: f64,
    t_end: f64,
    mass_a: f64,
    basis: Basis,
}

/// Momentum-form right-hand side: `y = [u, a u̇, v, a v̇, p, a ṗ, ∫cu, ∫cv, ∫cp]`.
fn rhs(l: &QuadraticLagrangian, t: f64, y: &[f64; DIM]) -> Result<[f64; DIM]> {
    let a = l.mass(t)?;
    let b = l.b.eval(t);
    let c = l.c.eval(t);
    Ok([
        y[1] / a,
        -b * y[0],
        y[3] / a,
        -b * y[2],
        y[5] / a,
        c - b * y[4],
        c * y[0],
        c * y[2],
        c * y[4],
    ])
}

impl FundamentalSystem {
    pub fn new(
        l: &QuadraticLagrangian,
        t_a: f64,
        t_end: f64,
        opts: &SolverOptions,
    ) -> Result<Self> {
        check_interval(t_a, t_end)?;
        opts.validate()?;
        let mass_a = l.mass(t_a)?;
        l.mass(t_end)?;
        let basis = match (opts.method, l.constant_coefficients()) {
            (Method::Auto, Some((a, b, c))) => Basis::Constant(ConstantBasis { a, b, c }),
            _ => {
                let f = |t: f64, y: &[f64; DIM]| rhs(l, t, y);
                let y0 = [1.0, 0.0, 0.0, mass_a, 0.0, 0.0, 0.0, 0.0, 0.0];
                let checkpoints = ode::integrate(&f, t_a, y0, t_end, opts.ode_tol)?;
                Basis::Numeric {
                    lagrangian: l.clone(),
                    checkpoints,
                }
            }
        };
        Ok(FundamentalSystem {
            t_a,
            t_end,
            mass_a,
            basis,
        })
    }

    pub fn start(&self) -> f64 {
        self.t_a
    }

    pub fn end(&self) -> f64 {
        self.t_end
    }

    /// `a(tA)`, the conserved Wronskian `a(u v̇ − u̇ v)`.
    pub fn initial_mass(&self) -> f64 {
        self.mass_a
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.basis, Basis::Constant(_))
    }

    pub fn state_at(&self, t: f64) -> Result<BasisState> {
        let slack = 1e-12 * (self.t_end - self.t_a);
        if !(t >= self.t_a - slack && t <= self.t_end + slack) {
            return Err(Error::InvalidParameter {
                name: "t",
                reason: format!(
                    "{t} outside the solved interval [{}, {}]",
                    self.t_a, self.t_end
                ),
            });
        }
        let t = t.clamp(self.t_a, self.t_end);
        match &self.basis {
            Basis::Constant(cb) => Ok(cb.state(t - self.t_a, t)),
            Basis::Numeric {
                lagrangian,
                checkpoints,
            } => {
                let f = |t: f64, y: &[f64; DIM]| rhs(lagrangian, t, y);
                let y = checkpoints.eval(&f, t)?;
                let a = lagrangian.mass(t)?;
                Ok(BasisState {
                    t,
                    mass: a,
                    u: y[0],
                    u_dot: y[1] / a,
                    v: y[2],
                    v_dot: y[3] / a,
                    p: y[4],
                    p_dot: y[5] / a,
                    int_cu: y[6],
                    int_cv: y[7],
                    int_cp: y[8],
                })
            }
        }
    }

    /// Interior zeros of `v` in `(tA, t_end)`, in increasing order.
    pub fn caustics(&self) -> Result<Vec<f64>> {
        match &self.basis {
            Basis::Constant(cb) => {
                if cb.b <= 0.0 {
                    return Ok(Vec::new());
                }
                let half_period = std::f64::consts::PI / (cb.b / cb.a).sqrt();
                let mut zeros = Vec::new();
                let mut k = 1.0;
                loop {
                    let tk = self.t_a + k * half_period;
                    if tk >= self.t_end {
                        break;
                    }
                    zeros.push(tk);
                    k += 1.0;
                }
                Ok(zeros)
            }
            Basis::Numeric { checkpoints, .. } => {
                let mut zeros = Vec::new();
                let v = |i: usize| checkpoints.states[i][2];
                for i in 1..checkpoints.times.len() - 1 {
                    let (v0, v1) = (v(i), v(i + 1));
                    if v0 == 0.0 {
                        zeros.push(checkpoints.times[i]);
                    } else if v0.signum() != v1.signum() && v1 != 0.0 {
                        zeros.push(self.bisect_zero(
                            checkpoints.times[i],
                            checkpoints.times[i + 1],
                            v0,
                        )?);
                    }
                }
                Ok(zeros)
            }
        }
    }

    fn bisect_zero(&self, mut lo: f64, mut hi: f64, v_lo: f64) -> Result<f64> {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let vm = self.state_at(mid)?.v;
            if vm == 0.0 {
                return Ok(mid);
            }
            if vm.signum() == v_lo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Quadratic form of the classical action on `[tA, t_b]`.
    pub fn action_form(&self, t_b: f64, caustic_tol: f64) -> Result<ActionQuadraticForm> {
        check_interval(self.t_a, t_b)?;
        let state = self.state_at(t_b)?;
        ActionQuadraticForm::from_state(self.mass_a, self.t_a, &state, caustic_tol)
    }
}

pub fn fundamental_system(
    l: &QuadraticLagrangian,
    t_a: f64,
    t_b: f64,
    opts: &SolverOptions,
) -> Result<FundamentalSystem> {
    FundamentalSystem::new(l, t_a, t_b, opts)
}

pub(crate) fn check_caustic(state: &BasisState, t_a: f64, caustic_tol: f64) -> Result<()> {
    if state.v.abs() < caustic_tol * (state.t - t_a) || state.v == 0.0 {
        Err(Error::CausticSingularity {
            t: state.t,
            v: state.v,
        })
    } else {
        Ok(())
    }
}

/// `S_cl = α xB² + β xB xA + γ xA² + λB xB + λA xA + σ` on `interval`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionQuadraticForm {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lam_b: f64,
    pub lam_a: f64,
    pub sigma: f64,
    pub interval: (f64, f64),
}

impl ActionQuadraticForm {
    /// Assemble the form from the basis at the final time. `mass_a` is `a(tA)`.
    pub fn from_state(mass_a: f64, t_a: f64, state: &BasisState, caustic_tol: f64) -> Result<Self> {
        check_caustic(state, t_a, caustic_tol)?;
        let BasisState {
            mass,
            u,
            v,
            v_dot,
            p,
            p_dot,
            int_cu,
            int_cv,
            int_cp,
            ..
        } = *state;
        let mom_v = mass * v_dot;
        let mom_p = mass * p_dot;
        Ok(ActionQuadraticForm {
            alpha: mom_v / (2.0 * v),
            // Wronskian: u·(a v̇) − (a u̇)·v = a(tA)
            beta: -mass_a / v,
            gamma: mass_a * u / (2.0 * v),
            lam_b: 0.5 * (mom_p - mom_v * p / v + int_cv / v),
            lam_a: 0.5 * (mass_a * p / v + int_cu - int_cv * u / v),
            sigma: 0.5 * (int_cp - int_cv * p / v),
            interval: (t_a, state.t),
        })
    }

    pub fn eval(&self, x_b: f64, x_a: f64) -> f64 {
        self.alpha * x_b * x_b
            + self.beta * x_b * x_a
            + self.gamma * x_a * x_a
            + self.lam_b * x_b
            + self.lam_a * x_a
            + self.sigma
    }

    /// `∂S_cl/∂xB`
    pub fn final_momentum(&self, x_b: f64, x_a: f64) -> f64 {
        2.0 * self.alpha * x_b + self.beta * x_a + self.lam_b
    }

    /// `∂²S_cl/∂xB²`
    pub fn second_derivative(&self) -> f64 {
        2.0 * self.alpha
    }
}

pub fn action_quadratic_form(
    l: &QuadraticLagrangian,
    t_a: f64,
    t_b: f64,
    opts: &SolverOptions,
) -> Result<ActionQuadraticForm> {
    FundamentalSystem::new(l, t_a, t_b, opts)?.action_form(t_b, opts.caustic_tol)
}

/// The extremal path between two endpoints.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalPath<'a> {
    system: &'a FundamentalSystem,
    x_a: f64,
    /// Coefficient of `v` fixed by the final endpoint.
    coeff_v: f64,
}

impl ClassicalPath<'_> {
    pub fn position(&self, t: f64) -> Result<f64> {
        let s = self.system.state_at(t)?;
        Ok(self.x_a * s.u + self.coeff_v * s.v + s.p)
    }

    pub fn velocity(&self, t: f64) -> Result<f64> {
        let s = self.system.state_at(t)?;
        Ok(self.x_a * s.u_dot + self.coeff_v * s.v_dot + s.p_dot)
    }
}

pub fn classical_trajectory<'a>(
    fs: &'a FundamentalSystem,
    bd: &BoundaryData,
    caustic_tol: f64,
) -> Result<ClassicalPath<'a>> {
    bd.validate()?;
    if bd.t_a != fs.start() {
        return Err(Error::InvalidParameter {
            name: "tA",
            reason: "boundary start differs from the fundamental system's".into(),
        });
    }
    let end = fs.state_at(bd.t_b)?;
    check_caustic(&end, bd.t_a, caustic_tol)?;
    Ok(ClassicalPath {
        system: fs,
        x_a: bd.x_a,
        coeff_v: (bd.x_b - bd.x_a * end.u - end.p) / end.v,
    })
}

/// Default relative caustic threshold used by the closed forms.
const CLOSED_FORM_CAUSTIC_TOL: f64 = 1e-9;

/// Closed-form classical action of a preset.
///
/// The driven oscillator uses the standard forced-oscillator action, whose
/// force integrals are evaluated by quadrature; it never touches the
/// Euler–Lagrange integrator.
pub fn closed_form_action(p: &Preset, bd: &BoundaryData) -> Result<f64> {
    p.validate()?;
    bd.validate()?;
    let BoundaryData { x_a, t_a, x_b, t_b } = *bd;
    let dur = t_b - t_a;
    let sine_guard = |w: f64| -> Result<(f64, f64)> {
        let (sn, cs) = (w * dur).sin_cos();
        if (sn / w).abs() < CLOSED_FORM_CAUSTIC_TOL * dur {
            Err(Error::CausticSingularity { t: t_b, v: sn / w })
        } else {
            Ok((sn, cs))
        }
    };
    match p {
        Preset::FreeParticle { m } => Ok(m * (x_b - x_a).powi(2) / (2.0 * dur)),
        Preset::HarmonicOscillator { m, omega } => {
            let (sn, cs) = sine_guard(*omega)?;
            Ok(m * omega / (2.0 * sn) * ((x_b * x_b + x_a * x_a) * cs - 2.0 * x_b * x_a))
        }
        Preset::DrivenOscillator { m, omega, drive } => {
            let (sn, cs) = sine_guard(*omega)?;
            let w = *omega;
            let tol = 1e-13;
            let f = |t: f64| drive.eval(t);
            let fwd = quadrature::integrate(|t| Ok(f(t) * (w * (t - t_a)).sin()), t_a, t_b, tol)?;
            let bwd = quadrature::integrate(|t| Ok(f(t) * (w * (t_b - t)).sin()), t_a, t_b, tol)?;
            let double = quadrature::integrate(
                |t| {
                    let inner =
                        quadrature::integrate(|s| Ok(f(s) * (w * (s - t_a)).sin()), t_a, t, tol)?;
                    Ok(f(t) * (w * (t_b - t)).sin() * inner.value)
                },
                t_a,
                t_b,
                tol,
            )?;
            Ok(m * w / (2.0 * sn)
                * ((x_b * x_b + x_a * x_a) * cs - 2.0 * x_a * x_b
                    + 2.0 * x_b / (m * w) * fwd.value
                    + 2.0 * x_a / (m * w) * bwd.value
                    - 2.0 / (m * m * w * w) * double.value))
        }
        Preset::DampedOscillator { m, gamma, .. } => {
            let big_omega = p
                .shifted_frequency()
                .expect("damped preset has a frequency");
            let (sn, cs) = sine_guard(big_omega)?;
            let ea = (gamma * t_a).exp();
            let eb = (gamma * t_b).exp();
            let mixed = (0.5 * gamma * (t_a + t_b)).exp();
            Ok(m * big_omega / (2.0 * sn)
                * ((ea * x_a * x_a + eb * x_b * x_b) * cs - 2.0 * mixed * x_a * x_b)
                + 0.25 * m * gamma * (ea * x_a * x_a - eb * x_b * x_b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::TimeCoefficient;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn free() -> QuadraticLagrangian {
        Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap()
    }

    fn harmonic() -> QuadraticLagrangian {
        Preset::HarmonicOscillator { m: 1.0, omega: 1.0 }
            .lagrangian()
            .unwrap()
    }

    fn damped(gamma: f64) -> Preset {
        Preset::DampedOscillator {
            m: 1.0,
            omega: 1.0,
            gamma,
        }
    }

    /// Independent route: ∫ L(x_cl, ẋ_cl, t) dt along the reconstructed path.
    fn quadrature_action(
        l: &QuadraticLagrangian,
        fs: &FundamentalSystem,
        bd: &BoundaryData,
    ) -> f64 {
        let path = classical_trajectory(fs, bd, 1e-9).unwrap();
        quadrature::integrate(
            |t| Ok(l.value(path.position(t)?, path.velocity(t)?, t)),
            bd.t_a,
            bd.t_b,
            1e-13,
        )
        .unwrap()
        .value
    }

    #[test]
    fn free_fundamental_system() {
        for opts in [SolverOptions::default(), SolverOptions::numeric()] {
            let fs = FundamentalSystem::new(&free(), 0.5, 3.0, &opts).unwrap();
            for t in [0.5, 1.0, 2.2, 3.0] {
                let s = fs.state_at(t).unwrap();
                assert!((s.u - 1.0).abs() < 1e-14);
                assert!((s.v - (t - 0.5)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn harmonic_quarter_period() {
        for opts in [SolverOptions::default(), SolverOptions::numeric()] {
            let fs = FundamentalSystem::new(&harmonic(), 0.0, FRAC_PI_2, &opts).unwrap();
            let s = fs.state_at(FRAC_PI_2).unwrap();
            assert!(s.u.abs() < 1e-11, "{}", s.u);
            assert!((s.v - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn damped_wronskian_is_conserved() {
        let l = damped(0.2).lagrangian().unwrap();
        let opts = SolverOptions::numeric();
        let fs = FundamentalSystem::new(&l, 0.0, 3.0, &opts).unwrap();
        for k in 0..10 {
            let t = 0.3 * k as f64 + 0.1;
            let s = fs.state_at(t).unwrap();
            let w = s.mass * (s.u * s.v_dot - s.u_dot * s.v);
            assert!((w - 1.0).abs() < 1e-10, "t={t}: {w}");
        }
    }

    #[test]
    fn trajectories() {
        let fs = FundamentalSystem::new(&free(), 0.0, 1.0, &SolverOptions::default()).unwrap();
        let bd = BoundaryData::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let path = classical_trajectory(&fs, &bd, 1e-9).unwrap();
        for t in [0.0, 0.25, 0.8, 1.0] {
            assert!((path.position(t).unwrap() - t).abs() < 1e-15);
            assert!((path.velocity(t).unwrap() - 1.0).abs() < 1e-15);
        }

        let fs =
            FundamentalSystem::new(&harmonic(), 0.3, 0.3 + FRAC_PI_2, &SolverOptions::numeric())
                .unwrap();
        let bd = BoundaryData::new(0.0, 0.3, 1.0, 0.3 + FRAC_PI_2).unwrap();
        let path = classical_trajectory(&fs, &bd, 1e-9).unwrap();
        assert!((path.position(bd.t_b).unwrap() - 1.0).abs() < 1e-14);
        for t in [0.3, 0.7, 1.2, 1.8] {
            assert!((path.position(t).unwrap() - (t - 0.3).sin()).abs() < 1e-11);
        }

        let fs = FundamentalSystem::new(&harmonic(), 0.0, PI, &SolverOptions::default()).unwrap();
        let bd = BoundaryData::new(0.0, 0.0, 1.0, PI).unwrap();
        assert_eq!(
            classical_trajectory(&fs, &bd, 1e-9).unwrap_err().name(),
            "CausticSingularity"
        );
    }

    #[test]
    fn form_examples() {
        let f = action_quadratic_form(&free(), 0.0, 1.0, &SolverOptions::default()).unwrap();
        assert_eq!((f.alpha, f.beta, f.gamma), (0.5, -1.0, 0.5));
        assert_eq!((f.lam_a, f.lam_b, f.sigma), (0.0, 0.0, 0.0));

        let h =
            action_quadratic_form(&harmonic(), 0.0, FRAC_PI_2, &SolverOptions::default()).unwrap();
        assert!(h.alpha.abs() < 1e-15 && h.gamma.abs() < 1e-15);
        assert!((h.beta + 1.0).abs() < 1e-15);

        let err = action_quadratic_form(&harmonic(), 0.0, PI, &SolverOptions::default());
        assert_eq!(err.unwrap_err().name(), "CausticSingularity");
    }

    #[test]
    fn damped_form_matches_closed_form() {
        let p = damped(0.2);
        let l = p.lagrangian().unwrap();
        let form = action_quadratic_form(&l, 0.0, 1.0, &SolverOptions::default()).unwrap();
        for (x_a, x_b) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            let bd = BoundaryData::new(x_a, 0.0, x_b, 1.0).unwrap();
            let exact = closed_form_action(&p, &bd).unwrap();
            assert!((form.eval(x_b, x_a) - exact).abs() < 1e-9, "{x_a},{x_b}");
        }
        assert!(form.lam_a == 0.0 && form.lam_b == 0.0 && form.sigma == 0.0);
    }

    #[test]
    fn closed_form_examples() {
        let bd = BoundaryData::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(
            closed_form_action(&Preset::FreeParticle { m: 1.0 }, &bd).unwrap(),
            0.5
        );
        let bd = BoundaryData::new(0.0, 0.0, 1.0, FRAC_PI_2).unwrap();
        let ho = Preset::HarmonicOscillator { m: 1.0, omega: 1.0 };
        assert!(closed_form_action(&ho, &bd).unwrap().abs() < 1e-15);

        let bd = BoundaryData::new(0.4, 0.2, -0.9, 1.7).unwrap();
        let limit = closed_form_action(&damped(1e-12), &bd).unwrap();
        let reference = closed_form_action(&ho, &bd).unwrap();
        assert!((limit - reference).abs() <= 1e-10);

        let bd = BoundaryData::new(0.0, 0.0, 1.0, PI).unwrap();
        assert_eq!(
            closed_form_action(&ho, &bd).unwrap_err().name(),
            "CausticSingularity"
        );
    }

    #[test]
    fn driven_form_matches_forced_oscillator_action() {
        let drive = TimeCoefficient::sinusoid(0.7, 1.9, 0.3);
        let p = Preset::DrivenOscillator {
            m: 1.3,
            omega: 0.8,
            drive,
        };
        let l = p.lagrangian().unwrap();
        let form = action_quadratic_form(&l, 0.2, 2.1, &SolverOptions::default()).unwrap();
        for (x_a, x_b) in [(0.0, 0.0), (1.0, -0.5), (-0.3, 0.8)] {
            let bd = BoundaryData::new(x_a, 0.2, x_b, 2.1).unwrap();
            let exact = closed_form_action(&p, &bd).unwrap();
            assert!((form.eval(x_b, x_a) - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_force_analytic_basis() {
        // free particle under a constant force, and an inverted oscillator
        let cases = [
            QuadraticLagrangian::new(
                TimeCoefficient::constant(2.0),
                TimeCoefficient::zero(),
                TimeCoefficient::constant(0.7),
                1.0,
            )
            .unwrap(),
            QuadraticLagrangian::new(
                TimeCoefficient::constant(1.5),
                TimeCoefficient::constant(-0.6),
                TimeCoefficient::constant(-0.4),
                1.0,
            )
            .unwrap(),
            QuadraticLagrangian::new(
                TimeCoefficient::constant(1.5),
                TimeCoefficient::constant(2.6),
                TimeCoefficient::constant(0.9),
                1.0,
            )
            .unwrap(),
        ];
        for l in &cases {
            let exact = action_quadratic_form(l, 0.1, 1.6, &SolverOptions::default()).unwrap();
            let numeric = action_quadratic_form(l, 0.1, 1.6, &SolverOptions::numeric()).unwrap();
            for (e, n) in [
                (exact.alpha, numeric.alpha),
                (exact.beta, numeric.beta),
                (exact.gamma, numeric.gamma),
                (exact.lam_a, numeric.lam_a),
                (exact.lam_b, numeric.lam_b),
                (exact.sigma, numeric.sigma),
            ] {
                assert!((e - n).abs() < 1e-10 * (1.0 + e.abs()), "{e} vs {n}");
            }
        }
        // constant force free particle: S = m(Δx)²/2T + cT(xA+xB)/2 − c²T³/(24m)
        let f = action_quadratic_form(&cases[0], 0.0, 2.0, &SolverOptions::default()).unwrap();
        assert!((f.lam_a - 0.7).abs() < 1e-15 && (f.lam_b - 0.7).abs() < 1e-15);
        assert!((f.sigma + 0.49 * 8.0 / 48.0).abs() < 1e-15);
    }

    #[test]
    fn form_equals_direct_action_quadrature() {
        let generic = QuadraticLagrangian::new(
            TimeCoefficient::exponential(1.2, 0.3),
            TimeCoefficient::polynomial(vec![0.8, 0.2, -0.05]),
            TimeCoefficient::sinusoid(0.6, 2.3, 0.4),
            1.0,
        )
        .unwrap();
        let systems = [
            (generic.clone(), SolverOptions::default()),
            (damped(0.5).lagrangian().unwrap(), SolverOptions::default()),
            (harmonic(), SolverOptions::default()),
            (harmonic(), SolverOptions::numeric()),
        ];
        let mut seed = 0x2545_f491_4f6c_dd1du64;
        let mut uniform = move |lo: f64, hi: f64| {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            lo + (hi - lo) * (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for (l, opts) in &systems {
            let (t_a, t_b) = (0.3, 2.1);
            let fs = FundamentalSystem::new(l, t_a, t_b, opts).unwrap();
            let form = fs.action_form(t_b, 1e-9).unwrap();
            for _ in 0..20 {
                let bd =
                    BoundaryData::new(uniform(-2.0, 2.0), t_a, uniform(-2.0, 2.0), t_b).unwrap();
                let direct = quadrature_action(l, &fs, &bd);
                let value = form.eval(bd.x_b, bd.x_a);
                assert!(
                    (value - direct).abs() <= 1e-9 * direct.abs().max(1e-3),
                    "{value} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn time_translation_and_symmetry() {
        for opts in [SolverOptions::default(), SolverOptions::numeric()] {
            let f0 = action_quadratic_form(&harmonic(), 0.0, 1.3, &opts).unwrap();
            let f1 = action_quadratic_form(&harmonic(), 2.5, 3.8, &opts).unwrap();
            for (x, y) in [
                (f0.alpha, f1.alpha),
                (f0.beta, f1.beta),
                (f0.gamma, f1.gamma),
            ] {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{x} vs {y}");
            }
            assert!((f0.alpha - f0.gamma).abs() <= 1e-12);
        }
    }

    #[test]
    fn caustic_detection() {
        for opts in [SolverOptions::default(), SolverOptions::numeric()] {
            let fs = FundamentalSystem::new(&harmonic(), 0.0, 3.5 * PI, &opts).unwrap();
            let zeros = fs.caustics().unwrap();
            assert_eq!(zeros.len(), 3);
            for (k, z) in zeros.iter().enumerate() {
                assert!((z - (k + 1) as f64 * PI).abs() < 1e-10, "{z}");
            }
            let fs = FundamentalSystem::new(&free(), 0.0, 40.0, &opts).unwrap();
            assert!(fs.caustics().unwrap().is_empty());
        }
    }

    #[test]
    fn non_positive_mass_is_reported() {
        let l = QuadraticLagrangian::new(
            TimeCoefficient::polynomial(vec![1.0, -1.0]),
            TimeCoefficient::zero(),
            TimeCoefficient::zero(),
            1.0,
        )
        .unwrap();
        let err = FundamentalSystem::new(&l, 0.0, 2.0, &SolverOptions::default()).unwrap_err();
        assert_eq!(err.name(), "NonPositiveMass");
        assert_eq!(
            FundamentalSystem::new(&l, 1.0, 1.0, &SolverOptions::default())
                .unwrap_err()
                .name(),
            "InvalidInterval"
        );
    }
}
