//! F(w) = 2 int_0^inf cos(w t) P(t) dt, in closed form for the long-time ansatz and by
//! quadrature for sampled curves.

use std::f64::consts::PI;

use super::{check_increasing, DeltaPeak, PopulationCoefficients, SpectrumSeries, TimeSeries};
use crate::error::{Error, Result};
use crate::redfield::RateTensor;
use crate::vanvleck::Spectrum;

/// Lorentzian pairs for the coherences, one relaxation Lorentzian at zero and a delta peak of weight 2 pi p_inf.
pub fn analytic_fourier(spectrum: &Spectrum, coeffs: &PopulationCoefficients, rates: &RateTensor, gamma_r: f64, omega_grid: &[f64]) -> SpectrumSeries {
    let relax = coeffs.p0 - coeffs.p_inf;
    let values = omega_grid
        .iter()
        .map(|&w| {
            let mut f = if gamma_r > 0.0 { 2.0 * relax * gamma_r / (w * w + gamma_r * gamma_r) } else { 0.0 };
            for (a, b, p) in coeffs.cosine_terms() {
                let g = -PI * rates.get(a, b, a, b);
                let w0 = spectrum.w(a, b);
                if g > 0.0 {
                    f += p * g * (1.0 / (g * g + (w0 + w).powi(2)) + 1.0 / (g * g + (w0 - w).powi(2)));
                }
            }
            f
        })
        .collect();
    let mut peaks = Vec::new();
    if coeffs.p_inf.abs() > 1e-12 {
        peaks.push(DeltaPeak { position: 0.0, weight: 2.0 * PI * coeffs.p_inf });
    }
    SpectrumSeries { omega: omega_grid.to_vec(), values, peaks, solver: "longtime".into() }
}

/// Undamped curves have a purely discrete spectrum: pi p_nm at each w_nm and 2 pi p0 at zero.
pub fn free_fourier(spectrum: &Spectrum, coeffs: &PopulationCoefficients, omega_grid: &[f64]) -> SpectrumSeries {
    let mut peaks = Vec::new();
    if coeffs.p0.abs() > 1e-12 {
        peaks.push(DeltaPeak { position: 0.0, weight: 2.0 * PI * coeffs.p0 });
    }
    for (a, b, p) in coeffs.cosine_terms().filter(|t| t.2.abs() > 1e-12) {
        peaks.push(DeltaPeak { position: spectrum.w(a, b), weight: PI * p });
    }
    peaks.sort_by(|x, y| x.position.total_cmp(&y.position));
    SpectrumSeries { omega: omega_grid.to_vec(), values: vec![0.0; omega_grid.len()], peaks, solver: "free".into() }
}

/// 2 int cos(w t) y(t) dt over the sampled range, exact for the piecewise-linear interpolant.
pub fn cosine_transform(t: &[f64], y: &[f64], omega: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..t.len().saturating_sub(1) {
        let (t0, t1, y0, y1) = (t[i], t[i + 1], y[i], y[i + 1]);
        let h = t1 - t0;
        if (omega * h).abs() < 1e-2 {
            let tm = 0.5 * (t0 + t1);
            let ym = 0.5 * (y0 + y1);
            acc += h / 6.0 * (y0 * (omega * t0).cos() + 4.0 * ym * (omega * tm).cos() + y1 * (omega * t1).cos());
        } else {
            let s = (y1 - y0) / h;
            let (s0, s1, c0, c1) = ((omega * t0).sin(), (omega * t1).sin(), (omega * t0).cos(), (omega * t1).cos());
            acc += (y1 * s1 - y0 * s0) / omega + s * (c1 - c0) / (omega * omega);
        }
    }
    2.0 * acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierOptions {
    /// Exponential damping rate applied before transforming; required for curves that do not decay.
    pub window: Option<f64>,
    /// Largest tail-to-head envelope ratio accepted as decayed.
    pub decay_tolerance: f64,
}

impl Default for FourierOptions {
    fn default() -> Self {
        FourierOptions { window: None, decay_tolerance: 0.05 }
    }
}

fn window_indices(t: &[f64], from: f64, to: f64) -> Vec<usize> {
    let (t0, t1) = (t[0], t[t.len() - 1]);
    let (a, b) = (t0 + from * (t1 - t0), t0 + to * (t1 - t0));
    (0..t.len()).filter(|&i| t[i] >= a && t[i] <= b).collect()
}

fn rms(y: &[f64], idx: &[usize]) -> f64 {
    (idx.iter().map(|&i| y[i] * y[i]).sum::<f64>() / idx.len().max(1) as f64).sqrt()
}

/// Transform of a sampled curve. The late-time constant is split off as a delta peak at zero and
/// the remainder is continued past the last sample as a fitted exponential.
pub fn numeric_fourier(series: &TimeSeries, omega_grid: &[f64], opts: &FourierOptions) -> Result<SpectrumSeries> {
    check_increasing(&series.t, "time")?;
    check_increasing(omega_grid, "omega")?;
    if series.t.len() != series.values.len() || series.t.len() < 10 {
        return Err(Error::Config("time series needs at least 10 samples".into()));
    }
    let t = &series.t;
    let mut peaks = Vec::new();
    let resid: Vec<f64> = match opts.window {
        Some(g) => series.values.iter().zip(t).map(|(y, t)| y * (-g * t).exp()).collect(),
        None => {
            let last = window_indices(t, 0.9, 1.0);
            let c = last.iter().map(|&i| series.values[i]).sum::<f64>() / last.len() as f64;
            let r: Vec<f64> = series.values.iter().map(|y| y - c).collect();
            let head = window_indices(t, 0.0, 0.1).iter().map(|&i| r[i].abs()).fold(0.0, f64::max);
            let tail = last.iter().map(|&i| r[i].abs()).fold(0.0, f64::max);
            if tail > opts.decay_tolerance * head {
                return Err(Error::NonDecayingSeries);
            }
            if c.abs() > 1e-9 {
                peaks.push(DeltaPeak { position: 0.0, weight: 2.0 * PI * c });
            }
            r
        }
    };
    let t_end = t[t.len() - 1];
    let span = t_end - t[0];
    let gamma = (rms(&resid, &window_indices(t, 0.8, 0.9)) / rms(&resid, &window_indices(t, 0.9, 1.0))).ln() / (0.1 * span);
    let y_end = resid[resid.len() - 1];
    let values = omega_grid
        .iter()
        .map(|&w| {
            let body = cosine_transform(t, &resid, w);
            let tail = if gamma.is_finite() && gamma > 0.0 {
                2.0 * y_end * (gamma * (w * t_end).cos() - w * (w * t_end).sin()) / (gamma * gamma + w * w)
            } else {
                0.0
            };
            body + tail
        })
        .collect();
    Ok(SpectrumSeries { omega: omega_grid.to_vec(), values, peaks, solver: series.solver.clone() })
}
