//! Assembles spectrum, states, rates and the starting state for one parameter point, and
//! dispatches to the solvers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::coupling::analytic_x;
use crate::error::{Error, Result};
use crate::jaynes_cummings::{jc_eigenstates, jc_spectrum};
use crate::observables::{
    analytic_fourier, free_dynamics, free_fourier, initial_density, longtime_population, normalized, numeric_fourier, population_coefficients,
    population_from_trajectory, FourierOptions, PopulationCoefficients, SpectrumSeries, TimeSeries,
};
use crate::params::SystemParams;
use crate::redfield::{
    dephasing_pairs, propagate_numeric, rate_tensor, relaxation_from_rates, solve_fsa, solve_psa, DensityTrajectory, DephasingSpec,
    RateTensor, RelaxationSpec,
};
use crate::vanvleck::{eigenenergies, eigenstates, EigenstateTable, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Numeric,
    Fsa,
    Psa,
    Longtime,
    Free,
    JcNumeric,
    JcFree,
}

impl Solver {
    pub const ALL: [Solver; 7] = [Solver::Numeric, Solver::Fsa, Solver::Psa, Solver::Longtime, Solver::Free, Solver::JcNumeric, Solver::JcFree];

    pub fn name(&self) -> &'static str {
        match self {
            Solver::Numeric => "numeric",
            Solver::Fsa => "fsa",
            Solver::Psa => "psa",
            Solver::Longtime => "longtime",
            Solver::Free => "free",
            Solver::JcNumeric => "jc-numeric",
            Solver::JcFree => "jc-free",
        }
    }

    pub fn branch(&self) -> Branch {
        match self {
            Solver::JcNumeric | Solver::JcFree => Branch::JaynesCummings,
            _ => Branch::Full,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Solver::Free | Solver::JcFree)
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Solver::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown solver '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Full,
    JaynesCummings,
}

/// Truncation choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    pub n_levels: usize,
    pub j_max: usize,
    pub j_cut: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { n_levels: 5, j_max: 10, j_cut: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct System {
    pub params: SystemParams,
    pub settings: Settings,
    pub branch: Branch,
    pub spectrum: Spectrum,
    pub table: EigenstateTable,
    pub x: DMatrix<f64>,
    pub rates: RateTensor,
    /// Starting state rescaled to unit trace after truncation.
    pub rho0: DMatrix<Complex64>,
    pub coeffs: PopulationCoefficients,
}

impl System {
    pub fn new(params: &SystemParams, settings: Settings, branch: Branch) -> Result<Self> {
        params.validate()?;
        let n = settings.n_levels;
        let (spectrum, table, x) = match branch {
            Branch::Full => (eigenenergies(params, n)?, eigenstates(params, n, settings.j_max)?, analytic_x(params, n)?),
            Branch::JaynesCummings => {
                let t = jc_eigenstates(params, n, settings.j_max)?;
                let x = t.position_elements();
                (jc_spectrum(params, n)?.spectrum(), t, x)
            }
        };
        let rates = rate_tensor(&spectrum, &x, params)?;
        let rho0 = normalized(&initial_density(params, &table, settings.j_cut));
        let weights = population_coefficients(&table, params.derive().theta, settings.j_max);
        let coeffs = PopulationCoefficients::new(weights, &rho0, &spectrum, params.beta)?;
        Ok(System { params: *params, settings, branch, spectrum, table, x, rates, rho0, coeffs })
    }

    pub fn for_solver(params: &SystemParams, settings: Settings, solver: Solver) -> Result<Self> {
        System::new(params, settings, solver.branch())
    }

    pub fn relaxation(&self) -> Result<RelaxationSpec> {
        relaxation_from_rates(&self.rates, self.params.omega < self.params.delta_b())
    }

    pub fn dephasing(&self) -> Result<DephasingSpec> {
        dephasing_pairs(&self.spectrum, &self.rates)
    }

    pub fn trajectory(&self, solver: Solver, t_grid: &[f64]) -> Result<DensityTrajectory> {
        match solver {
            Solver::Numeric | Solver::JcNumeric => propagate_numeric(&self.rho0, &self.spectrum, &self.rates, t_grid),
            Solver::Fsa => solve_fsa(&self.rho0, &self.spectrum, &self.rates, t_grid),
            Solver::Psa => solve_psa(&self.rho0, &self.spectrum, &self.rates, t_grid),
            other => Err(Error::Config(format!("solver '{other}' does not produce density matrices"))),
        }
    }

    pub fn population(&self, solver: Solver, t_grid: &[f64]) -> Result<TimeSeries> {
        self.check_branch(solver)?;
        let mut ts = match solver {
            Solver::Free | Solver::JcFree => free_dynamics(&self.spectrum, &self.coeffs, t_grid),
            Solver::Longtime => {
                crate::redfield::check_grid(t_grid)?;
                let gr = self.relaxation()?.gamma_r;
                longtime_population(&self.spectrum, &self.coeffs, &self.rates, gr, t_grid)
            }
            _ => population_from_trajectory(&self.trajectory(solver, t_grid)?, &self.coeffs.weights)?,
        };
        ts.solver = solver.name().into();
        Ok(ts)
    }

    /// Spectrum of P(t); closed form for the long-time ansatz and free evolution, quadrature otherwise.
    pub fn fourier(&self, solver: Solver, t_grid: &[f64], omega_grid: &[f64], opts: &FourierOptions) -> Result<SpectrumSeries> {
        self.check_branch(solver)?;
        let mut s = if solver.is_free() {
            crate::observables::check_increasing(omega_grid, "omega")?;
            free_fourier(&self.spectrum, &self.coeffs, omega_grid)
        } else if solver == Solver::Longtime {
            let gr = self.relaxation()?.gamma_r;
            analytic_fourier(&self.spectrum, &self.coeffs, &self.rates, gr, omega_grid)
        } else {
            numeric_fourier(&self.population(solver, t_grid)?, omega_grid, opts)?
        };
        s.solver = solver.name().into();
        Ok(s)
    }

    fn check_branch(&self, solver: Solver) -> Result<()> {
        if solver.branch() != self.branch {
            return Err(Error::Config(format!("solver '{solver}' does not belong to this branch")));
        }
        Ok(())
    }
}
