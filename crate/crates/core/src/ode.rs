//! Adaptive Dormand–Prince 5(4) integration for small real systems.
//!
//! Accepted steps are kept as checkpoints. Off-grid values are produced by a
//! single Runge–Kutta step from the preceding checkpoint, which keeps the full
//! order of the method at every evaluation point (including points arbitrarily
//! close to the initial time, where interpolants lose relative accuracy).

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 1_000_000;

/// Result of one Dormand–Prince step: fifth-order solution and local error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub y: [f64; N],
    pub error: [f64; N],
}

/// One explicit step of size `h` from `(t, y)`.
pub fn dp_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> Result<Step<N>>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, y)?;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        if s == 6 {
            // stage 7 is evaluated at the fifth-order solution itself
            k[6] = f(t + h, &ys)?;
            let mut error = [0.0; N];
            for (s, ks) in k.iter().enumerate() {
                for i in 0..N {
                    error[i] += h * E[s] * ks[i];
                }
            }
            return Ok(Step { y: ys, error });
        }
        k[s] = f(t + C[s] * h, &ys)?;
    }
    unreachable!()
}

fn error_norm<const N: usize>(y0: &[f64; N], y1: &[f64; N], err: &[f64; N], tol: f64) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let scale = tol * (1.0 + y0[i].abs().max(y1[i].abs()));
            (err[i] / scale).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Accepted integration steps on `[times[0], times[last]]`.
#[derive(Debug, Clone)]
pub struct Checkpoints<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
}

impl<const N: usize> Checkpoints<N> {
    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        *self.times.last().expect("checkpoints are never empty")
    }

    /// Index of the last checkpoint at or before `t`.
    pub fn locate(&self, t: f64) -> usize {
        match self
            .times
            .binary_search_by(|probe| probe.partial_cmp(&t).expect("finite times"))
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    /// State at `t` by a single step from the preceding checkpoint.
    pub fn eval<F>(&self, f: &F, t: f64) -> Result<[f64; N]>
    where
        F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        let i = self.locate(t);
        let t0 = self.times[i];
        if t == t0 {
            return Ok(self.states[i]);
        }
        Ok(dp_step(f, t0, &self.states[i], t - t0)?.y)
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t1 > t0` with mixed absolute/relative
/// tolerance `tol`.
pub fn integrate<const N: usize, F>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    tol: f64,
) -> Result<Checkpoints<N>>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    assert!(t1 > t0, "integration interval must be increasing");
    let span = t1 - t0;
    let max_step = span / 4.0;
    let mut h = initial_step(f, t0, &y0, tol)?.min(max_step);

    let mut times = vec![t0];
    let mut states = vec![y0];
    let mut t = t0;
    let mut y = y0;
    let mut steps = 0usize;

    while t < t1 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::ToleranceNotMet { t, tol });
        }
        let last = t + h >= t1 || (t1 - (t + h)) < 1e-12 * span;
        let h_try = if last { t1 - t } else { h };
        let step = dp_step(f, t, &y, h_try)?;
        let err = error_norm(&y, &step.y, &step.error, tol);
        if !err.is_finite() {
            return Err(Error::ToleranceNotMet { t, tol });
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h_try };
            y = step.y;
            times.push(t);
            states.push(y);
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h_try * factor).min(max_step);
        } else {
            h = h_try * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
        if t < t1 && h <= 1e-14 * t.abs().max(span) {
            return Err(Error::ToleranceNotMet { t, tol });
        }
    }
    Ok(Checkpoints { times, states })
}

fn initial_step<const N: usize, F>(f: &F, t0: f64, y0: &[f64; N], tol: f64) -> Result<f64>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let scaled = |v: &[f64; N]| -> f64 {
        let s: f64 = (0..N)
            .map(|i| (v[i] / (tol * (1.0 + y0[i].abs()))).powi(2))
            .sum();
        (s / N as f64).sqrt()
    };
    let f0 = f(t0, y0)?;
    let d0 = scaled(y0);
    let d1 = scaled(&f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let mut y1 = *y0;
    for i in 0..N {
        y1[i] += h0 * f0[i];
    }
    let f1 = f(t0 + h0, &y1)?;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = scaled(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1))
}
