//! Second-order Van-Vleck block diagonalization of the qubit-oscillator Hamiltonian.
//!
//! The effective Hamiltonian couples only the doublets `{|(j+1) g>, |j e>}`;
//! physical eigenstates are recovered as `|n> = exp(-iS) |n>_eff`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::oracle::ProductBasis;
use crate::params::SystemParams;

/// Guard on the `2 Omega - Delta_b` denominator of the second-order transformation.
pub const RESONANCE_GUARD: f64 = 1e-6;

pub const DEFAULT_N_LEVELS: usize = 5;
pub const DEFAULT_J_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanVleckCoefficients {
    /// First-order doublet coupling, -g delta0 / delta_b.
    pub delta: f64,
    pub w0: f64,
    pub w1: f64,
    pub delta_b: f64,
    pub omega: f64,
}

impl VanVleckCoefficients {
    pub fn delta_j(&self, j: usize) -> f64 {
        self.delta_b - self.omega - 2.0 * (j as f64 + 1.0) * self.w0
    }

    /// Doublet mixing angle in [0, pi]; pi is reached only for g = 0 with negative detuning.
    pub fn alpha_j(&self, j: usize) -> f64 {
        (2.0 * (j as f64 + 1.0).sqrt() * self.delta.abs()).atan2(self.delta_j(j))
    }

    /// E_0, then E_{2j+1} (lower) and E_{2j+2} (upper) for each doublet.
    pub fn energy(&self, n: usize) -> f64 {
        if n == 0 {
            return -self.delta_b / 2.0 + self.w0 + self.w1;
        }
        let j = (n - 1) / 2;
        let jf = j as f64;
        let d = self.delta_j(j);
        let root = 0.5 * (d * d + 4.0 * (jf + 1.0) * self.delta * self.delta).sqrt();
        let mid = (jf + 0.5) * self.omega + self.w1 + self.w0;
        if n % 2 == 1 {
            mid - root
        } else {
            mid + root
        }
    }

    pub fn energies(&self, n_levels: usize) -> Vec<f64> {
        (0..n_levels).map(|n| self.energy(n)).collect()
    }
}

pub fn effective_coefficients(params: &SystemParams) -> VanVleckCoefficients {
    let db = params.delta_b();
    let (g, eps, d0, om) = (params.g, params.epsilon, params.delta0, params.omega);
    VanVleckCoefficients {
        delta: -g * d0 / db,
        w0: -d0 * d0 * g * g / (db * db * (db + om)),
        w1: -eps * eps * g * g / (db * db * om),
        delta_b: db,
        omega: om,
    }
}

/// Eigenenergies `E_n` and transition frequencies `omega_nm = E_n - E_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub omega: DMatrix<f64>,
}

impl Spectrum {
    pub fn from_energies(energies: Vec<f64>) -> Self {
        let n = energies.len();
        let omega = DMatrix::from_fn(n, n, |a, b| energies[a] - energies[b]);
        Spectrum { energies, omega }
    }

    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    pub fn w(&self, n: usize, m: usize) -> f64 {
        self.omega[(n, m)]
    }
}

pub fn eigenenergies(params: &SystemParams, n_levels: usize) -> Result<Spectrum> {
    params.validate()?;
    if n_levels == 0 {
        return Err(Error::Truncation("n_levels must be >= 1".into()));
    }
    Ok(Spectrum::from_energies(effective_coefficients(params).energies(n_levels)))
}

/// Real antisymmetric matrices `iS^(1)` and `iS^(2)` over the product basis.
#[derive(Debug, Clone)]
pub struct TransformationS {
    pub basis: ProductBasis,
    pub first_order: DMatrix<f64>,
    pub second_order: DMatrix<f64>,
}

pub fn build_s_matrix(params: &SystemParams, j_max: usize) -> Result<TransformationS> {
    params.validate()?;
    if j_max < 1 {
        return Err(Error::Truncation(format!("j_max must be >= 1, got {j_max}")));
    }
    let db = params.delta_b();
    let (g, eps, d0, om) = (params.g, params.epsilon, params.delta0, params.omega);
    let gap = 2.0 * om - db;
    let bias_mixing = eps * d0 * g * g;
    if bias_mixing != 0.0 && gap.abs() < RESONANCE_GUARD {
        return Err(Error::ResonanceDegeneracy { omega: om, delta_b: db, gap: gap.abs() });
    }
    let basis = ProductBasis::new(j_max);
    let dim = basis.dim();
    let (gs, es) = (ProductBasis::ground, ProductBasis::excited);
    let mut s1 = DMatrix::zeros(dim, dim);
    let mut s2 = DMatrix::zeros(dim, dim);
    let put = |m: &mut DMatrix<f64>, a: usize, b: usize, v: f64| {
        m[(a, b)] = v;
        m[(b, a)] = -v;
    };

    let z1 = eps * g / (db * om);
    let x1 = d0 * g / (db * (db + om));
    for j in 0..j_max {
        let s = (j as f64 + 1.0).sqrt();
        put(&mut s1, es(j), es(j + 1), s * z1);
        put(&mut s1, gs(j), gs(j + 1), -s * z1);
        put(&mut s1, gs(j), es(j + 1), s * x1);
    }

    let g2 = g * g;
    let c_eg = if bias_mixing == 0.0 { 0.0 } else { 2.0 * bias_mixing / (db * db * om * gap) };
    let c_ee = -d0 * d0 * g2 / (2.0 * db * db * om * (db + om));
    let c_ge0 = -0.5 * bias_mixing / (db * db * om * (db + om));
    let c_gg = 0.5 * d0 * d0 * g2 / (db * db * om * (om + db));
    let c_ge2 = -bias_mixing / (db * db * om * (db + om) * (db + 2.0 * om));
    for j in 0..=j_max {
        put(&mut s2, gs(j), es(j), (2.0 * j as f64 + 1.0) * c_ge0);
        if j + 2 > j_max {
            continue;
        }
        let s = ((j as f64 + 1.0) * (j as f64 + 2.0)).sqrt();
        put(&mut s2, es(j), gs(j + 2), s * c_eg);
        put(&mut s2, es(j), es(j + 2), s * c_ee);
        put(&mut s2, gs(j), gs(j + 2), s * c_gg);
        put(&mut s2, gs(j), es(j + 2), s * c_ge2);
    }
    Ok(TransformationS { basis, first_order: s1, second_order: s2 })
}

/// `exp(+-iS)` truncated at second order: `1 +- iS1 +- iS2 + (iS1)^2 / 2`.
pub fn transform_operator(s: &TransformationS, sign: f64) -> DMatrix<f64> {
    let dim = s.basis.dim();
    let a = &s.first_order;
    DMatrix::identity(dim, dim) + a * sign + &s.second_order * sign + (a * a) * 0.5
}

/// Overlaps `<j g|n>` and `<j e|n>` as the columns of `vectors` (rows follow the product basis).
#[derive(Debug, Clone)]
pub struct EigenstateTable {
    pub basis: ProductBasis,
    pub vectors: DMatrix<f64>,
}

impl EigenstateTable {
    pub fn n_levels(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn ground(&self, j: usize, n: usize) -> f64 {
        self.vectors[(ProductBasis::ground(j), n)]
    }

    pub fn excited(&self, j: usize, n: usize) -> f64 {
        self.vectors[(ProductBasis::excited(j), n)]
    }

    /// X_nm = <n|B + B^dagger|m> evaluated directly from the table.
    pub fn position_elements(&self) -> DMatrix<f64> {
        let v = &self.vectors;
        let x = v.transpose() * self.basis.position_operator() * v;
        (&x + x.transpose()) * 0.5
    }

    /// Flip column signs so that each column has a non-negative overlap with `reference`.
    pub fn aligned_to(&self, reference: &EigenstateTable) -> EigenstateTable {
        let mut v = self.vectors.clone();
        for n in 0..v.ncols().min(reference.vectors.ncols()) {
            if v.column(n).dot(&reference.vectors.column(n)) < 0.0 {
                v.column_mut(n).neg_mut();
            }
        }
        EigenstateTable { basis: self.basis, vectors: v }
    }
}

/// Two-component doublet states `|2j+1>_eff`, `|2j+2>_eff` and `|0>_eff = |0 g>`.
pub(crate) fn doublet_states(basis: ProductBasis, n_levels: usize, alpha: impl Fn(usize) -> f64) -> DMatrix<f64> {
    let mut v = DMatrix::zeros(basis.dim(), n_levels);
    for n in 0..n_levels {
        if n == 0 {
            v[(ProductBasis::ground(0), 0)] = 1.0;
            continue;
        }
        let j = (n - 1) / 2;
        let (c, s) = ((alpha(j) / 2.0).cos(), (alpha(j) / 2.0).sin());
        let (g1, e0) = (ProductBasis::ground(j + 1), ProductBasis::excited(j));
        if n % 2 == 1 {
            v[(g1, n)] = c;
            v[(e0, n)] = s;
        } else {
            v[(g1, n)] = -s;
            v[(e0, n)] = c;
        }
    }
    v
}

pub(crate) fn check_levels(n_levels: usize, j_max: usize) -> Result<()> {
    if n_levels == 0 {
        return Err(Error::Truncation("n_levels must be >= 1".into()));
    }
    let j_top = n_levels.saturating_sub(2) / 2 + 1;
    if j_top + 2 > j_max {
        return Err(Error::Truncation(format!("j_max = {j_max} too small for n_levels = {n_levels}; need >= {}", j_top + 2)));
    }
    Ok(())
}

pub fn eigenstates(params: &SystemParams, n_levels: usize, j_max: usize) -> Result<EigenstateTable> {
    check_levels(n_levels, j_max)?;
    let s = build_s_matrix(params, j_max)?;
    let c = effective_coefficients(params);
    let eff = doublet_states(s.basis, n_levels, |j| c.alpha_j(j));
    let vectors = transform_operator(&s, -1.0) * eff;
    Ok(EigenstateTable { basis: s.basis, vectors })
}
