//! Rotating-wave comparison branch. Without counter-rotating terms the
//! doublet picture is exact: no second-order shifts and no dressing.

use crate::error::{Error, Result};
use crate::oracle::ProductBasis;
use crate::params::SystemParams;
use crate::vanvleck::{check_levels, doublet_states, EigenstateTable, Spectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct JcSpectrum {
    pub energies: Vec<f64>,
    /// Delta_b - Omega.
    pub delta_jc: f64,
    /// Doublet angles alpha_j, one per doublet touched by `energies`.
    pub alpha: Vec<f64>,
}

impl JcSpectrum {
    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_energies(self.energies.clone())
    }
}

fn require_unbiased(params: &SystemParams) -> Result<()> {
    params.validate()?;
    if params.epsilon != 0.0 {
        return Err(Error::BiasedJaynesCummings(params.epsilon));
    }
    Ok(())
}

fn alpha_jc(params: &SystemParams, j: usize) -> f64 {
    let coupling = params.g * params.delta0 / params.delta_b();
    (2.0 * (j as f64 + 1.0).sqrt() * coupling).atan2(params.delta_b() - params.omega)
}

pub fn jc_spectrum(params: &SystemParams, n_levels: usize) -> Result<JcSpectrum> {
    require_unbiased(params)?;
    if n_levels == 0 {
        return Err(Error::Truncation("n_levels must be >= 1".into()));
    }
    let db = params.delta_b();
    let delta_jc = db - params.omega;
    let coupling = params.g * params.delta0 / db;
    let mut energies = vec![-db / 2.0];
    for n in 1..n_levels {
        let j = (n - 1) / 2;
        let jf = j as f64;
        let root = 0.5 * (delta_jc * delta_jc + 4.0 * (jf + 1.0) * coupling * coupling).sqrt();
        let mid = (jf + 0.5) * params.omega;
        energies.push(if n % 2 == 1 { mid - root } else { mid + root });
    }
    let alpha = (0..n_levels.saturating_sub(1).div_ceil(2)).map(|j| alpha_jc(params, j)).collect();
    Ok(JcSpectrum { energies, delta_jc, alpha })
}

pub fn jc_eigenstates(params: &SystemParams, n_levels: usize, j_max: usize) -> Result<EigenstateTable> {
    require_unbiased(params)?;
    check_levels(n_levels, j_max)?;
    let basis = ProductBasis::new(j_max);
    let vectors = doublet_states(basis, n_levels, |j| alpha_jc(params, j));
    Ok(EigenstateTable { basis, vectors })
}

/// Whether the unbiased JC coherence rho_nm contributes to P(t).
pub fn selection_allowed(n: usize, m: usize) -> bool {
    if n == m {
        return false;
    }
    let (lo, hi) = (n.min(m), n.max(m));
    if lo == 0 {
        return hi == 1 || hi == 2;
    }
    match (n.is_multiple_of(2), m.is_multiple_of(2)) {
        (true, true) | (false, false) => hi - lo == 2,
        _ => {
            let (ev, od) = if n.is_multiple_of(2) { (n, m) } else { (m, n) };
            ev as i64 - od as i64 == 3 || od as i64 - ev as i64 == 1
        }
    }
}

/// Oscillator frequency at which doublet j of the full model is resonant.
pub fn bloch_siegert_resonance(params: &SystemParams, j: usize) -> f64 {
    let db = params.delta_b();
    let d0 = params.delta0;
    db * (1.0 + 2.0 * (j as f64 + 1.0) * d0 * d0 * params.g * params.g / db.powi(4)).sqrt()
}
