//! Bloch-Redfield rate tensor and the solvers built on it.
//!
//! The master equation in the dressed eigenbasis reads
//! `d rho_nm/dt = -i w_nm rho_nm + pi * sum_kl L_{nm,kl} rho_kl`.

mod integrator;
mod relaxation;
mod secular;
mod tensor;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use integrator::{propagate_numeric, propagate_with, IntegratorOptions};
pub use relaxation::{relaxation_from_rates, relaxation_rate, RelaxationSpec};
pub use secular::{dephasing_pairs, fsa_diagonal_matrix, solve_fsa, solve_psa, DephasingSpec, PairSpec, PSA_PAIRS};
pub use tensor::{closed_form_dephasing, rate_tensor, ClosedFormEntry, RateTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverTag {
    Numeric,
    Fsa,
    Psa,
}

impl SolverTag {
    pub fn name(&self) -> &'static str {
        match self {
            SolverTag::Numeric => "numeric",
            SolverTag::Fsa => "fsa",
            SolverTag::Psa => "psa",
        }
    }
}

/// Density matrices rho_nm(t) in the dressed eigenbasis on a time grid.
#[derive(Debug, Clone)]
pub struct DensityTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DMatrix<Complex64>>,
    pub solver: SolverTag,
}

impl DensityTrajectory {
    pub fn n_levels(&self) -> usize {
        self.states.first().map_or(0, |s| s.nrows())
    }

    pub fn max_trace_deviation(&self) -> f64 {
        self.states.iter().map(|s| (s.trace() - Complex64::new(1.0, 0.0)).norm()).fold(0.0, f64::max)
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        self.states.iter().map(|s| (s - s.adjoint()).camax()).fold(0.0, f64::max)
    }

    /// Most negative eigenvalue over the trajectory (Redfield does not guarantee positivity).
    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|s| {
                let h = (s + s.adjoint()) * Complex64::new(0.5, 0.0);
                h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn check_rho0(rho0: &DMatrix<Complex64>, n: usize) -> crate::Result<()> {
    if rho0.nrows() != n || rho0.ncols() != n {
        return Err(crate::Error::DimensionMismatch { expected: n, got: rho0.nrows() });
    }
    Ok(())
}

pub(crate) fn check_grid(t_grid: &[f64]) -> crate::Result<()> {
    if t_grid.iter().any(|t| !t.is_finite() || *t < 0.0) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(crate::Error::Config("time grid must be non-negative and strictly increasing".into()));
    }
    Ok(())
}
