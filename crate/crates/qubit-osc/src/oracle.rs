//! Brute-force reference: the truncated qubit-oscillator Hamiltonian in the
//! product basis, diagonalized numerically.
//!
//! Basis ordering: index `2j` is `|j g>`, index `2j+1` is `|j e>`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductBasis {
    pub j_max: usize,
}

impl ProductBasis {
    pub fn new(j_max: usize) -> Self {
        ProductBasis { j_max }
    }

    pub fn dim(&self) -> usize {
        2 * (self.j_max + 1)
    }

    pub fn ground(j: usize) -> usize {
        2 * j
    }

    pub fn excited(j: usize) -> usize {
        2 * j + 1
    }

    /// B + B^dagger acting on the oscillator factor, identity on the qubit.
    pub fn position_operator(&self) -> DMatrix<f64> {
        let mut x = DMatrix::zeros(self.dim(), self.dim());
        for j in 0..self.j_max {
            let s = ((j + 1) as f64).sqrt();
            for (a, b) in [(Self::ground(j), Self::ground(j + 1)), (Self::excited(j), Self::excited(j + 1))] {
                x[(a, b)] = s;
                x[(b, a)] = s;
            }
        }
        x
    }
}

#[derive(Debug, Clone)]
pub struct DenseHamiltonian {
    pub basis: ProductBasis,
    pub elements: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub energies: Vec<f64>,
    /// Columns are eigenvectors over the product basis.
    pub vectors: DMatrix<f64>,
}

fn check_jmax(j_max: usize) -> Result<()> {
    if j_max < 1 {
        return Err(Error::Truncation(format!("j_max must be >= 1, got {j_max}")));
    }
    Ok(())
}

fn build(params: &SystemParams, j_max: usize, counter_rotating: bool) -> Result<DenseHamiltonian> {
    params.validate()?;
    check_jmax(j_max)?;
    let basis = ProductBasis::new(j_max);
    let db = params.delta_b();
    let z = params.g * params.epsilon / db;
    let x = -params.g * params.delta0 / db;
    let mut h = DMatrix::zeros(basis.dim(), basis.dim());
    for j in 0..=j_max {
        let (g, e) = (ProductBasis::ground(j), ProductBasis::excited(j));
        h[(g, g)] = -db / 2.0 + j as f64 * params.omega;
        h[(e, e)] = db / 2.0 + j as f64 * params.omega;
        if j == j_max {
            continue;
        }
        let s = ((j + 1) as f64).sqrt();
        let (g1, e1) = (ProductBasis::ground(j + 1), ProductBasis::excited(j + 1));
        let mut set = |a: usize, b: usize, v: f64| {
            h[(a, b)] = v;
            h[(b, a)] = v;
        };
        set(g, g1, z * s);
        set(e, e1, -z * s);
        // |j e> <-> |(j+1) g> conserves excitation number; |j g> <-> |(j+1) e> does not.
        set(e, g1, x * s);
        if counter_rotating {
            set(g, e1, x * s);
        }
    }
    Ok(DenseHamiltonian { basis, elements: h })
}

pub fn build_hamiltonian(params: &SystemParams, j_max: usize) -> Result<DenseHamiltonian> {
    build(params, j_max, true)
}

/// Rotating-wave version: the counter-rotating `|j g> <-> |(j+1) e>` elements are zeroed.
pub fn build_rwa_hamiltonian(params: &SystemParams, j_max: usize) -> Result<DenseHamiltonian> {
    build(params, j_max, false)
}

/// Full symmetric eigendecomposition, ascending, with each vector's
/// largest-magnitude component made positive.
pub fn diagonalize(h: &DenseHamiltonian) -> Result<EigenDecomposition> {
    let m = &h.elements;
    let n = m.nrows();
    let eig = m.clone().try_symmetric_eigen(1e-15, 10_000).ok_or(Error::EigenNonConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).into_owned();
        let imax = v.iamax();
        if v[imax] < 0.0 {
            v.neg_mut();
        }
        vectors.set_column(col, &v);
    }
    let scale = m.amax().max(1.0);
    for (col, &e) in energies.iter().enumerate() {
        let v = vectors.column(col);
        let res = (m * v - v * e).norm();
        if !res.is_finite() || res > 1e-10 * scale {
            return Err(Error::EigenNonConvergence);
        }
    }
    Ok(EigenDecomposition { energies, vectors })
}

impl EigenDecomposition {
    /// Component of eigenvector `n` on basis state `k`.
    pub fn component(&self, k: usize, n: usize) -> f64 {
        self.vectors[(k, n)]
    }
}

/// X_nm = <n|B + B^dagger|m> between the numerically obtained eigenvectors.
pub fn numeric_position_elements(decomp: &EigenDecomposition, basis: &ProductBasis) -> DMatrix<f64> {
    let v = &decomp.vectors;
    let x = v.transpose() * basis.position_operator() * v;
    (&x + x.transpose()) * 0.5
}

/// For each approximate energy, the nearest exact one. Level labels of the doublet picture need not
/// follow ascending order, and far from resonance higher oscillator states interleave.
pub fn nearest_levels(approx: &[f64], exact: &[f64]) -> Vec<f64> {
    approx
        .iter()
        .map(|a| exact.iter().copied().min_by(|x, y| (x - a).abs().total_cmp(&(y - a).abs())).unwrap_or(f64::NAN))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn paper() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn uncoupled_hamiltonian_is_diagonal() {
        let p = paper().with_g(0.0).with_epsilon(0.4);
        let h = build_hamiltonian(&p, 6).unwrap();
        let db = p.delta_b();
        for j in 0..=6 {
            assert_eq!(h.elements[(2 * j, 2 * j)], -db / 2.0 + j as f64 * p.omega);
            assert_eq!(h.elements[(2 * j + 1, 2 * j + 1)], db / 2.0 + j as f64 * p.omega);
        }
        let off: f64 = (0..14).flat_map(|a| (0..14).map(move |b| (a, b))).filter(|(a, b)| a != b).map(|(a, b)| h.elements[(a, b)].abs()).sum();
        assert_eq!(off, 0.0);
    }

    #[test]
    fn unbiased_has_no_sigma_z_coupling() {
        let h = build_hamiltonian(&paper(), 8).unwrap();
        for j in 0..8 {
            assert_eq!(h.elements[(2 * j, 2 * j + 2)], 0.0);
            assert_eq!(h.elements[(2 * j + 1, 2 * j + 3)], 0.0);
        }
    }

    #[test]
    fn single_element() {
        let p = paper().with_epsilon(0.5);
        let h = build_hamiltonian(&p, 4).unwrap();
        // <0e|H|1g>
        assert_relative_eq!(h.elements[(1, 2)], -p.g * p.delta0 / p.delta_b(), epsilon = 1e-15);
    }

    #[test]
    fn rejects_tiny_truncation() {
        assert!(build_hamiltonian(&paper(), 0).is_err());
    }

    #[test]
    fn trivial_matrices() {
        let basis = ProductBasis::new(0);
        let h = DenseHamiltonian { basis, elements: DMatrix::from_row_slice(2, 2, &[0.0, 0.3, 0.3, 0.0]) };
        let d = diagonalize(&h).unwrap();
        assert_relative_eq!(d.energies[0], -0.3, epsilon = 1e-14);
        assert_relative_eq!(d.energies[1], 0.3, epsilon = 1e-14);
        let h = DenseHamiltonian { basis, elements: DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -1.0]) };
        let d = diagonalize(&h).unwrap();
        assert_eq!(d.energies, vec![-1.0, 2.0]);
        assert_relative_eq!(d.vectors[(1, 0)], 1.0, epsilon = 1e-15);
        assert_relative_eq!(d.vectors[(0, 1)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn resonant_vacuum_rabi_gap() {
        let g = 0.18;
        let d = diagonalize(&build_hamiltonian(&paper(), 12).unwrap()).unwrap();
        assert!((d.energies[2] - d.energies[1] - 2.0 * g).abs() < g.powi(3));
    }

    #[test]
    fn eigen_residual_and_orthonormality() {
        for eps in [0.0, 0.5] {
            let h = build_hamiltonian(&paper().with_epsilon(eps), 10).unwrap();
            let d = diagonalize(&h).unwrap();
            let n = d.vectors.ncols();
            let gram = d.vectors.transpose() * &d.vectors;
            assert!((gram - DMatrix::<f64>::identity(n, n)).amax() < 1e-12);
            for k in 0..n {
                let v = d.vectors.column(k);
                assert!((&h.elements * v - v * d.energies[k]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn spectrum_converged_in_jmax() {
        for eps in [0.0, 0.5] {
            let p = paper().with_epsilon(eps);
            let a = diagonalize(&build_hamiltonian(&p, 10).unwrap()).unwrap();
            let b = diagonalize(&build_hamiltonian(&p, 14).unwrap()).unwrap();
            for n in 0..5 {
                assert!((a.energies[n] - b.energies[n]).abs() < 1e-8, "n={n}");
            }
        }
    }

    #[test]
    fn free_ladder_elements() {
        let p = paper().with_g(0.0).with_epsilon(0.3);
        let basis = ProductBasis::new(6);
        let d = diagonalize(&build_hamiltonian(&p, 6).unwrap()).unwrap();
        let x = numeric_position_elements(&d, &basis);
        // ground |0g> and the |1g>-like state
        let one_g = (0..basis.dim()).find(|&n| d.component(ProductBasis::ground(1), n).abs() > 0.99).unwrap();
        assert_relative_eq!(x[(0, one_g)].abs(), 1.0, epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn structure(eps in -1.0f64..1.0, g in 0.0f64..0.3, omega in 0.5f64..2.0, j_max in 4usize..12) {
            let p = SystemParams::default().with_epsilon(eps).with_g(g).with_omega(omega);
            let h = build_hamiltonian(&p, j_max).unwrap();
            let m = &h.elements;
            prop_assert!((m - m.transpose()).amax() <= 1e-14);
            for a in 0..m.nrows() {
                for b in 0..m.ncols() {
                    if (a / 2).abs_diff(b / 2) >= 2 {
                        prop_assert_eq!(m[(a, b)], 0.0);
                    }
                }
            }
            let d = diagonalize(&h).unwrap();
            let x = numeric_position_elements(&d, &h.basis);
            prop_assert!((&x - x.transpose()).amax() <= 1e-12);
            for w in d.energies.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
        }
    }
}
