//! Wavefunction evolution on a uniform grid, once by quadrature against the
//! propagator and once by a Crank–Nicolson integration of the Schrödinger
//! equation `iħ∂ψ/∂t = −(ħ²/2a(t))∂²ψ/∂x² + V(x,t)ψ`.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::classical::SolverOptions;
use crate::error::{Error, Result};
use crate::lagrangian::QuadraticLagrangian;
use crate::propagator::Kernel;

/// Largest amplitude tolerated at the grid edges.
pub const EDGE_THRESHOLD: f64 = 1e-10;

pub const MIN_GRID_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    pub x_min: f64,
    pub x_max: f64,
    pub samples: Vec<Complex64>,
    pub time: f64,
}

impl GridWavefunction {
    pub fn new(x_min: f64, x_max: f64, samples: Vec<Complex64>, time: f64) -> Result<Self> {
        if samples.len() < MIN_GRID_POINTS {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("grid needs at least {MIN_GRID_POINTS} points"),
            });
        }
        if !(x_max > x_min && x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "xMax",
                reason: format!("need xMin < xMax, got [{x_min}, {x_max}]"),
            });
        }
        if !samples.iter().all(|z| z.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: "wavefunction samples must be finite".into(),
            });
        }
        Ok(GridWavefunction {
            x_min,
            x_max,
            samples,
            time,
        })
    }

    /// Sample `f` on `n` uniformly spaced points.
    pub fn from_fn<F>(x_min: f64, x_max: f64, n: usize, time: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        let h = (x_max - x_min) / (n.max(2) - 1) as f64;
        let samples = (0..n).map(|i| f(x_min + i as f64 * h)).collect();
        Self::new(x_min, x_max, samples, time)
    }

    /// Gaussian packet with `|ψ|²` of standard deviation `sigma0`, centred at
    /// `x0` with mean momentum `p0`.
    #[allow(clippy::too_many_arguments)]
    pub fn gaussian_packet(
        x_min: f64,
        x_max: f64,
        n: usize,
        x0: f64,
        p0: f64,
        sigma0: f64,
        hbar: f64,
        time: f64,
    ) -> Result<Self> {
        if !(sigma0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma0",
                reason: "packet width must be positive".into(),
            });
        }
        let norm = (2.0 * PI * sigma0 * sigma0).powf(-0.25);
        Self::from_fn(x_min, x_max, n, time, |x| {
            let d = x - x0;
            Complex64::from_polar(
                norm * (-d * d / (4.0 * sigma0 * sigma0)).exp(),
                p0 * x / hbar,
            )
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.len() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if i == 0 || i + 1 == self.len() {
            0.5 * h
        } else {
            h
        }
    }

    /// Trapezoidal `⟨self|other⟩`.
    pub fn inner(&self, other: &GridWavefunction) -> Complex64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .enumerate()
            .map(|(i, (a, b))| a.conj() * b * self.weight(i))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    pub fn l2_distance(&self, other: &GridWavefunction) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .enumerate()
            .map(|(i, (a, b))| (a - b).norm_sqr() * self.weight(i))
            .sum::<f64>()
            .sqrt()
    }

    /// `|⟨self|other⟩| / (‖self‖‖other‖)`
    pub fn fidelity(&self, other: &GridWavefunction) -> f64 {
        self.inner(other).norm() / (self.norm() * other.norm())
    }

    /// Largest amplitude among the outermost samples on either side.
    pub fn edge_amplitude(&self) -> f64 {
        let n = self.len();
        let band = (n / 128).max(1);
        self.samples[..band]
            .iter()
            .chain(&self.samples[n - band..])
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn check_edges(&self) -> Result<()> {
        let amplitude = self.edge_amplitude();
        if amplitude > EDGE_THRESHOLD {
            Err(Error::EdgeLeakage {
                amplitude,
                threshold: EDGE_THRESHOLD,
            })
        } else {
            Ok(())
        }
    }

    /// Mean and variance of `|ψ|²`.
    pub fn position_moments(&self) -> (f64, f64) {
        let mut mass = 0.0;
        let mut first = 0.0;
        let mut second = 0.0;
        for (i, z) in self.samples.iter().enumerate() {
            let w = z.norm_sqr() * self.weight(i);
            let x = self.x(i);
            mass += w;
            first += w * x;
            second += w * x * x;
        }
        let mean = first / mass;
        (mean, second / mass - mean * mean)
    }

    fn same_grid(&self, n: usize) -> Self {
        GridWavefunction {
            x_min: self.x_min,
            x_max: self.x_max,
            samples: vec![Complex64::new(0.0, 0.0); n],
            time: self.time,
        }
    }
}

/// `ψ(xB, tB) = ∫K(xB,tB|xA,t0)ψ0(xA)dxA` by the trapezoidal rule on the grid.
pub fn kernel_evolve(
    l: &QuadraticLagrangian,
    psi0: &GridWavefunction,
    t_b: f64,
    opts: &SolverOptions,
) -> Result<GridWavefunction> {
    psi0.check_edges()?;
    let kernel = Kernel::new(l, psi0.time, t_b, opts)?;
    let n = psi0.len();
    let weighted: Vec<(f64, Complex64)> = (0..n)
        .map(|j| (psi0.x(j), psi0.samples[j] * psi0.weight(j)))
        .collect();
    let samples = (0..n)
        .into_par_iter()
        .map(|i| {
            let x_b = psi0.x(i);
            weighted
                .iter()
                .map(|&(x_a, w)| kernel.amplitude(x_b, x_a) * w)
                .sum()
        })
        .collect();
    Ok(GridWavefunction {
        samples,
        time: t_b,
        ..psi0.same_grid(0)
    })
}

/// Solve a complex tridiagonal system in place (Thomas algorithm).
fn solve_tridiagonal(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &mut [Complex64],
) {
    let n = diag.len();
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = diag[0];
    c_prime[0] = upper[0] / denom;
    rhs[0] /= denom;
    for i in 1..n {
        denom = diag[i] - lower[i] * c_prime[i - 1];
        if i + 1 < n {
            c_prime[i] = upper[i] / denom;
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= c_prime[i] * next;
    }
}

/// Crank–Nicolson integration with Dirichlet edges and coefficients sampled
/// at the half step.
pub fn crank_nicolson_evolve(
    l: &QuadraticLagrangian,
    psi0: &GridWavefunction,
    t_b: f64,
    steps: usize,
) -> Result<GridWavefunction> {
    psi0.check_edges()?;
    if !(t_b > psi0.time) {
        return Err(Error::InvalidInterval {
            t_a: psi0.time,
            t_b,
        });
    }
    if steps == 0 {
        return Err(Error::InvalidParameter {
            name: "steps",
            reason: "at least one step is required".into(),
        });
    }
    let n = psi0.len();
    let interior = n - 2;
    let h = psi0.spacing();
    let dt = (t_b - psi0.time) / steps as f64;
    let hbar = l.hbar;
    let xs: Vec<f64> = (1..n - 1).map(|i| psi0.x(i)).collect();

    let mut psi: Vec<Complex64> = psi0.samples[1..n - 1].to_vec();
    let mut diag = vec![Complex64::new(0.0, 0.0); interior];
    let mut off = vec![Complex64::new(0.0, 0.0); interior];
    let mut rhs = vec![Complex64::new(0.0, 0.0); interior];

    for step in 0..steps {
        let t_mid = psi0.time + (step as f64 + 0.5) * dt;
        let a = l.mass(t_mid)?;
        let hop = -hbar * hbar / (2.0 * a * h * h);
        // i·dt/(2ħ)·H
        let scale = Complex64::new(0.0, dt / (2.0 * hbar));
        for (i, &x) in xs.iter().enumerate() {
            let h_diag = -2.0 * hop + l.effective_potential(x, t_mid);
            diag[i] = 1.0 + scale * h_diag;
            off[i] = scale * hop;
            let left = if i > 0 {
                psi[i - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let right = if i + 1 < interior {
                psi[i + 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            rhs[i] = (1.0 - scale * h_diag) * psi[i] - scale * hop * (left + right);
        }
        solve_tridiagonal(&off, &diag, &off, &mut rhs);
        psi.copy_from_slice(&rhs);
    }

    let mut samples = Vec::with_capacity(n);
    samples.push(Complex64::new(0.0, 0.0));
    samples.extend_from_slice(&psi);
    samples.push(Complex64::new(0.0, 0.0));
    Ok(GridWavefunction {
        samples,
        time: t_b,
        ..psi0.same_grid(0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::Preset;

    fn packet(n: usize, x0: f64, sigma0: f64) -> GridWavefunction {
        GridWavefunction::gaussian_packet(-12.0, 12.0, n, x0, 0.0, sigma0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn packets_are_normalized() {
        let psi = packet(1024, 0.3, 1.0);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let (mean, var) = psi.position_moments();
        assert!((mean - 0.3).abs() < 1e-12 && (var - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_packet_spreads_as_expected() {
        let l = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        let psi0 = packet(1024, 0.0, 1.0);
        let psi = kernel_evolve(&l, &psi0, 1.0, &SolverOptions::default()).unwrap();
        // exact free evolution of the packet, ħ = m = 1
        let spread = Complex64::new(1.0, 0.5);
        let exact = GridWavefunction::from_fn(-12.0, 12.0, 1024, 1.0, |x| {
            (2.0 * PI).powf(-0.25) / spread.sqrt() * (-(x * x) / (4.0 * spread)).exp()
        })
        .unwrap();
        assert!(
            psi.l2_distance(&exact) < 1e-6,
            "{}",
            psi.l2_distance(&exact)
        );
        let (_, var) = psi.position_moments();
        assert!((var - 1.25).abs() < 1e-6);
    }

    #[test]
    fn crank_nicolson_conserves_norm() {
        let l = Preset::HarmonicOscillator { m: 1.0, omega: 1.0 }
            .lagrangian()
            .unwrap();
        let psi0 = packet(512, 1.0, 0.8);
        let psi = crank_nicolson_evolve(&l, &psi0, 2.0, 1000).unwrap();
        assert!((psi.norm() - psi0.norm()).abs() < 1e-10);
    }

    #[test]
    fn ground_state_phase() {
        let l = Preset::HarmonicOscillator { m: 1.0, omega: 1.0 }
            .lagrangian()
            .unwrap();
        let psi0 = packet(1024, 0.0, std::f64::consts::FRAC_1_SQRT_2);
        let psi = crank_nicolson_evolve(&l, &psi0, PI, 4000).unwrap();
        let overlap = psi0.inner(&psi);
        assert!(psi0.fidelity(&psi) >= 1.0 - 1e-6);
        assert!((overlap.arg() + PI / 2.0).abs() < 2e-4, "{}", overlap.arg());
    }

    #[test]
    fn edge_leakage_is_rejected() {
        let l = Preset::FreeParticle { m: 1.0 }.lagrangian().unwrap();
        let wide =
            GridWavefunction::gaussian_packet(-3.0, 3.0, 64, 0.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(
            kernel_evolve(&l, &wide, 1.0, &SolverOptions::default())
                .unwrap_err()
                .name(),
            "EdgeLeakage"
        );
        assert_eq!(
            crank_nicolson_evolve(&l, &wide, 1.0, 10)
                .unwrap_err()
                .name(),
            "EdgeLeakage"
        );
    }

    #[test]
    fn small_grids_are_rejected() {
        assert!(GridWavefunction::gaussian_packet(-5.0, 5.0, 8, 0.0, 0.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn tridiagonal_solver() {
        let lower = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.3, 0.0),
        ];
        let diag = vec![
            Complex64::new(4.0, 0.0),
            Complex64::new(3.0, 1.0),
            Complex64::new(5.0, -1.0),
        ];
        let upper = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, 0.0),
        ];
        let x = [
            Complex64::new(1.0, -1.0),
            Complex64::new(0.5, 2.0),
            Complex64::new(-1.0, 0.0),
        ];
        let mut b: Vec<Complex64> = (0..3)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += lower[i] * x[i - 1];
                }
                if i < 2 {
                    s += upper[i] * x[i + 1];
                }
                s
            })
            .collect();
        solve_tridiagonal(&lower, &diag, &upper, &mut b);
        for i in 0..3 {
            assert!((b[i] - x[i]).norm() < 1e-14);
        }
    }
}
