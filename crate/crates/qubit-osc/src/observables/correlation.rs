use super::{numeric_fourier, FourierOptions, SpectrumSeries, TimeSeries};
use crate::error::Result;
use crate::model::{Settings, Solver, System};
use crate::params::SystemParams;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    pub time: TimeSeries,
    pub spectrum: SpectrumSeries,
    /// Odd part of p_inf in epsilon, the constant entering S(t).
    pub p_inf: f64,
}

/// S(t) = P_s(t) + p_inf (P_a(t) - p_inf) from runs at +epsilon and -epsilon.
///
/// Every piece is assembled from even or odd combinations of the two runs, so the result is
/// bitwise identical under epsilon -> -epsilon.
pub fn symmetrized_correlation(
    params: &SystemParams,
    settings: Settings,
    solver: Solver,
    t_grid: &[f64],
    omega_grid: &[f64],
    opts: &FourierOptions,
) -> Result<CorrelationResult> {
    let run = |eps: f64| -> Result<(TimeSeries, f64)> {
        let sys = System::for_solver(&params.with_epsilon(eps), settings, solver)?;
        Ok((sys.population(solver, t_grid)?, sys.coeffs.p_inf))
    };
    let (plus, minus) = rayon::join(|| run(params.epsilon), || run(-params.epsilon));
    let ((pp, ip), (pm, im)) = (plus?, minus?);
    let p_inf = 0.5 * (ip - im);
    let values = pp
        .values
        .iter()
        .zip(&pm.values)
        .map(|(a, b)| {
            let s = 0.5 * (a + b);
            let anti = 0.5 * (a - b);
            s + p_inf * (anti - p_inf)
        })
        .collect();
    let time = TimeSeries { t: t_grid.to_vec(), values, solver: solver.name().into() };
    let spectrum = numeric_fourier(&time, omega_grid, opts)?;
    Ok(CorrelationResult { time, spectrum, p_inf })
}
