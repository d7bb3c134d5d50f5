use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::params::SystemParams;
use crate::vanvleck::EigenstateTable;

/// rho_nm(0) for the qubit in |R> and the oscillator thermal, with the oscillator sum cut at `j_cut`.
///
/// The trace falls short of one by the weight outside the retained levels and oscillator states.
pub fn initial_density(params: &SystemParams, table: &EigenstateTable, j_cut: usize) -> DMatrix<Complex64> {
    let n = table.n_levels();
    let theta = params.derive().theta;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let bo = params.beta * params.omega;
    // Z = e^{-beta Omega/2} / (1 - e^{-beta Omega})
    let log_z = -0.5 * bo - (-(-bo).exp()).ln_1p();
    let j_top = j_cut.min(table.basis.j_max);
    let mut rho = DMatrix::zeros(n, n);
    for j in 0..=j_top {
        let w = (-bo * (j as f64 + 0.5) - log_z).exp();
        let r: Vec<f64> = (0..n).map(|k| c * table.ground(j, k) + s * table.excited(j, k)).collect();
        for a in 0..n {
            for b in 0..n {
                rho[(a, b)] += w * r[a] * r[b];
            }
        }
    }
    rho.map(|x| Complex64::new(x, 0.0))
}

/// Rescale to unit trace.
pub fn normalized(rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let tr = rho.trace();
    rho / tr
}
