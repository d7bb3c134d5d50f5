//! Initial states, the population difference P(t), and its spectra.

mod correlation;
mod fourier;
mod initial;
mod population;

pub use correlation::{symmetrized_correlation, CorrelationResult};
pub use fourier::{analytic_fourier, cosine_transform, free_fourier, numeric_fourier, FourierOptions};
pub use initial::{initial_density, normalized};
pub use population::{
    equilibrium_population, free_dynamics, longtime_population, population_coefficients, population_from_trajectory,
    PopulationCoefficients, PopulationWeights,
};

use serde::Serialize;

/// Sampled real curve, P(t) or S(t).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub solver: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaPeak {
    pub position: f64,
    pub weight: f64,
}

/// Continuous spectrum on an omega grid plus delta peaks kept apart from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSeries {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub peaks: Vec<DeltaPeak>,
    pub solver: String,
}

impl SpectrumSeries {
    /// Continuous part with each delta peak drawn as a Lorentzian of half-width `width`.
    pub fn rendered(&self, width: f64) -> Vec<f64> {
        self.omega
            .iter()
            .zip(&self.values)
            .map(|(w, v)| {
                v + self
                    .peaks
                    .iter()
                    .map(|p| p.weight * width / (std::f64::consts::PI * ((w - p.position).powi(2) + width * width)))
                    .sum::<f64>()
            })
            .collect()
    }

    /// Value at the grid point nearest to `omega`.
    pub fn value_near(&self, omega: f64) -> f64 {
        let i = self
            .omega
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - omega).abs().total_cmp(&(b.1 - omega).abs()))
            .map_or(0, |(i, _)| i);
        self.values[i]
    }
}

pub(crate) fn check_increasing(grid: &[f64], what: &str) -> crate::Result<()> {
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(crate::Error::Config(format!("{what} grid must be finite, non-empty and strictly increasing")));
    }
    Ok(())
}
