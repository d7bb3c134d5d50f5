use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use super::TimeSeries;
use crate::error::{Error, Result};
use crate::redfield::{DensityTrajectory, RateTensor};
use crate::vanvleck::{EigenstateTable, Spectrum};

/// Projection of sigma_z onto the energy basis:
/// P = sum_n diag[n] rho_nn + sum_{n>m} off[(n, m)] Re rho_nm.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationWeights {
    pub diag: Vec<f64>,
    /// Symmetric, zero on the diagonal.
    pub off: DMatrix<f64>,
}

impl PopulationWeights {
    pub fn n_levels(&self) -> usize {
        self.diag.len()
    }

    pub fn evaluate(&self, rho: &DMatrix<Complex64>) -> f64 {
        let n = self.n_levels();
        let mut p = 0.0;
        for a in 0..n {
            p += self.diag[a] * rho[(a, a)].re;
            for b in 0..a {
                p += self.off[(a, b)] * rho[(a, b)].re;
            }
        }
        p
    }
}

/// Weights from the eigenstate overlaps with the oscillator sum running over 0..=j_max.
pub fn population_coefficients(table: &EigenstateTable, theta: f64, j_max: usize) -> PopulationWeights {
    let n = table.n_levels();
    let (c, s) = (theta.cos(), theta.sin());
    let js = 0..=j_max.min(table.basis.j_max);
    let diag = (0..n)
        .map(|a| {
            js.clone()
                .map(|j| {
                    let (g, e) = (table.ground(j, a), table.excited(j, a));
                    c * (g * g - e * e) + 2.0 * s * g * e
                })
                .sum()
        })
        .collect();
    let mut off = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..a {
            let w: f64 = js
                .clone()
                .map(|j| {
                    let (ga, ea, gb, eb) = (table.ground(j, a), table.excited(j, a), table.ground(j, b), table.excited(j, b));
                    2.0 * (c * (ga * gb - ea * eb) + s * (ea * gb + eb * ga))
                })
                .sum();
            off[(a, b)] = w;
            off[(b, a)] = w;
        }
    }
    PopulationWeights { diag, off }
}

/// Weights combined with a starting state and the Boltzmann end point.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationCoefficients {
    pub weights: PopulationWeights,
    /// p_nn(0).
    pub p_diag: Vec<f64>,
    /// p_nm(0) for n != m, symmetric.
    pub p_off: DMatrix<f64>,
    pub p0: f64,
    pub p_inf: f64,
}

impl PopulationCoefficients {
    pub fn new(weights: PopulationWeights, rho0: &DMatrix<Complex64>, spectrum: &Spectrum, beta: f64) -> Result<Self> {
        let n = weights.n_levels();
        if rho0.nrows() != n || spectrum.n_levels() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rho0.nrows().min(spectrum.n_levels()) });
        }
        let p_diag: Vec<f64> = (0..n).map(|a| weights.diag[a] * rho0[(a, a)].re).collect();
        let p_off = DMatrix::from_fn(n, n, |a, b| if a == b { 0.0 } else { weights.off[(a, b)] * rho0[(a.max(b), a.min(b))].re });
        let p0 = p_diag.iter().sum();
        let p_inf = equilibrium_population(&weights, spectrum, beta);
        Ok(PopulationCoefficients { weights, p_diag, p_off, p0, p_inf })
    }

    /// (n, m, p_nm(0)) for n > m.
    pub fn cosine_terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.p_diag.len();
        (0..n).flat_map(move |a| (0..a).map(move |b| (a, b, self.p_off[(a, b)])))
    }
}

/// Population difference for a Boltzmann distribution over the retained levels.
pub fn equilibrium_population(weights: &PopulationWeights, spectrum: &Spectrum, beta: f64) -> f64 {
    let e0 = spectrum.energies.iter().copied().fold(f64::INFINITY, f64::min);
    let b: Vec<f64> = spectrum.energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = b.iter().sum();
    weights.diag.iter().zip(&b).map(|(d, w)| d * w / z).sum()
}

/// Undamped P(t) = p0 + sum_{n>m} p_nm(0) cos(w_nm t).
pub fn free_dynamics(spectrum: &Spectrum, coeffs: &PopulationCoefficients, t_grid: &[f64]) -> TimeSeries {
    let values = t_grid
        .iter()
        .map(|t| coeffs.p0 + coeffs.cosine_terms().map(|(a, b, p)| p * (spectrum.w(a, b) * t).cos()).sum::<f64>())
        .collect();
    TimeSeries { t: t_grid.to_vec(), values, solver: "free".into() }
}

pub fn population_from_trajectory(traj: &DensityTrajectory, weights: &PopulationWeights) -> Result<TimeSeries> {
    if traj.n_levels() != weights.n_levels() {
        return Err(Error::DimensionMismatch { expected: weights.n_levels(), got: traj.n_levels() });
    }
    Ok(TimeSeries {
        t: traj.times.clone(),
        values: traj.states.iter().map(|r| weights.evaluate(r)).collect(),
        solver: traj.solver.name().into(),
    })
}

/// Single relaxation rate for the populations, secular decay for each coherence.
pub fn longtime_population(spectrum: &Spectrum, coeffs: &PopulationCoefficients, rates: &RateTensor, gamma_r: f64, t_grid: &[f64]) -> TimeSeries {
    let values = t_grid
        .iter()
        .map(|&t| {
            let osc: f64 = coeffs
                .cosine_terms()
                .map(|(a, b, p)| p * (PI * rates.get(a, b, a, b) * t).exp() * (spectrum.w(a, b) * t).cos())
                .sum();
            (coeffs.p0 - coeffs.p_inf) * (-gamma_r * t).exp() + coeffs.p_inf + osc
        })
        .collect();
    TimeSeries { t: t_grid.to_vec(), values, solver: "longtime".into() }
}
