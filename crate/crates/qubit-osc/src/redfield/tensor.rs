use nalgebra::DMatrix;

use crate::coupling::coupling_factors;
use crate::error::{Error, Result};
use crate::params::{thermal_rate, SystemParams};
use crate::vanvleck::{effective_coefficients, Spectrum};

/// Dense L_{nm,kl}, all indices below `n_levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTensor {
    pub n_levels: usize,
    data: Vec<f64>,
}

impl RateTensor {
    fn idx(&self, n: usize, m: usize, k: usize, l: usize) -> usize {
        let d = self.n_levels;
        ((n * d + m) * d + k) * d + l
    }

    pub fn get(&self, n: usize, m: usize, k: usize, l: usize) -> f64 {
        self.data[self.idx(n, m, k, l)]
    }

    /// Population block: entry (n, k) is L_{nn,kk}.
    pub fn population_block(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n_levels, self.n_levels, |n, k| self.get(n, n, k, k))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0.0)
    }
}

/// Literal evaluation over the given spectrum and matrix elements. Every G*N product goes
/// through `thermal_rate`, so the w = 0 entries use the kappa/beta limit.
pub fn rate_tensor(spectrum: &Spectrum, x: &DMatrix<f64>, params: &SystemParams) -> Result<RateTensor> {
    params.validate()?;
    let d = spectrum.n_levels();
    if x.nrows() != d || x.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.nrows() });
    }
    let tr = DMatrix::from_fn(d, d, |a, b| thermal_rate(spectrum.w(a, b), params.kappa, params.beta));
    let mut t = RateTensor { n_levels: d, data: vec![0.0; d.pow(4)] };
    for n in 0..d {
        for m in 0..d {
            for k in 0..d {
                for l in 0..d {
                    // -G(w_lm) N_ml = G(w_ml) N_ml since G is odd
                    let mut v = (tr[(n, k)] + tr[(m, l)]) * x[(n, k)] * x[(l, m)];
                    if m == l {
                        v -= (0..d).map(|q| tr[(q, k)] * x[(n, q)] * x[(q, k)]).sum::<f64>();
                    }
                    if n == k {
                        v -= (0..d).map(|q| tr[(q, l)] * x[(l, q)] * x[(q, m)]).sum::<f64>();
                    }
                    let i = t.idx(n, m, k, l);
                    t.data[i] = v;
                }
            }
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEntry {
    pub index: (usize, usize, usize, usize),
    pub closed: f64,
    pub generic: f64,
}

/// Closed forms for the five-level coherence rates, listed next to the generic tensor values.
///
/// The diagonal forms keep only the emission rates out of the two levels involved,
/// so they sit above the generic values by half the dropped absorption rates.
pub fn closed_form_dephasing(params: &SystemParams, spectrum: &Spectrum, x: &DMatrix<f64>, rates: &RateTensor) -> Result<Vec<ClosedFormEntry>> {
    if rates.n_levels != 5 || spectrum.n_levels() != 5 || x.nrows() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: rates.n_levels });
    }
    let f = coupling_factors(params)?;
    let c = effective_coefficients(params);
    let (ca0, ca1) = (c.alpha_j(0).cos(), c.alpha_j(1).cos());
    let kb = params.kappa / params.beta;
    let l02 = 4.0 * kb * f.l0 * f.l0;
    let r = |n, m| rates.get(n, n, m, m);
    let tr = |a: usize, b: usize| thermal_rate(spectrum.w(a, b), params.kappa, params.beta);
    let xx = |a: usize, b: usize| x[(a, b)];

    let diag = [
        ((0, 1), l02 * (2.0 * ca0 - ca0 * ca0 - 1.0) - 0.5 * r(0, 1)),
        ((0, 2), l02 * (-2.0 * ca0 - ca0 * ca0 - 1.0) - 0.5 * r(0, 2)),
        ((0, 3), l02 * (2.0 * ca1 - ca1 * ca1 - 1.0) - 0.5 * r(1, 3) - 0.5 * r(2, 3)),
        ((0, 4), l02 * (-2.0 * ca1 - ca1 * ca1 - 1.0) - 0.5 * r(1, 4) - 0.5 * r(2, 4)),
        ((1, 2), -4.0 * l02 * ca0 * ca0 - 0.5 * r(0, 1) - 0.5 * r(0, 2)),
        ((1, 3), -l02 * (ca0 - ca1).powi(2) - 0.5 * r(0, 1) - 0.5 * r(1, 3) - 0.5 * r(2, 3)),
        ((1, 4), -l02 * (ca0 + ca1).powi(2) - 0.5 * r(0, 1) - 0.5 * r(1, 4) - 0.5 * r(2, 4)),
        ((2, 3), -l02 * (ca0 + ca1).powi(2) - 0.5 * r(0, 2) - 0.5 * r(1, 3) - 0.5 * r(2, 3)),
        ((2, 4), -l02 * (ca0 - ca1).powi(2) - 0.5 * r(0, 2) - 0.5 * r(1, 4) - 0.5 * r(2, 4)),
        ((3, 4), -4.0 * l02 * ca1 * ca1 - 0.5 * r(1, 3) - 0.5 * r(2, 3) - 0.5 * r(1, 4) - 0.5 * r(2, 4)),
    ];
    let mut out: Vec<ClosedFormEntry> = diag
        .iter()
        .map(|&((n, m), closed)| ClosedFormEntry { index: (n, m, n, m), closed, generic: rates.get(n, m, n, m) })
        .collect();

    let k4 = 4.0 * kb;
    let tail2 = -tr(0, 2) * xx(0, 1) * xx(0, 2) - tr(3, 2) * xx(1, 3) * xx(2, 3) - tr(4, 2) * xx(1, 4) * xx(2, 4);
    let tail1 = -tr(0, 1) * xx(0, 1) * xx(0, 2) - tr(3, 1) * xx(1, 3) * xx(2, 3) - tr(4, 1) * xx(1, 4) * xx(2, 4);
    let x12 = xx(1, 2);
    let off = [
        ((0, 1, 0, 2), k4 * (xx(0, 0) * x12 - x12 * xx(2, 2)) - tr(1, 2) * xx(1, 1) * x12 + tail2),
        ((0, 2, 0, 1), k4 * (xx(0, 0) * x12 - x12 * xx(1, 1)) - tr(2, 1) * xx(2, 2) * x12 + tail1),
        ((1, 3, 2, 3), k4 * (xx(3, 3) * x12 - x12 * xx(2, 2)) - tr(1, 2) * (xx(1, 1) * x12 - x12 * xx(3, 3)) + tail2),
        ((2, 3, 1, 3), k4 * (xx(3, 3) * x12 - x12 * xx(1, 1)) - tr(2, 1) * (xx(2, 2) * x12 - x12 * xx(3, 3)) + tail1),
        ((1, 4, 2, 4), k4 * (xx(4, 4) * x12 - x12 * xx(2, 2)) - tr(1, 2) * (xx(1, 1) * x12 - x12 * xx(4, 4)) + tail2),
        ((2, 4, 1, 4), k4 * (xx(4, 4) * x12 - x12 * xx(1, 1)) - tr(2, 1) * (xx(2, 2) * x12 - x12 * xx(4, 4)) + tail1),
    ];
    out.extend(off.iter().map(|&((n, m, k, l), closed)| ClosedFormEntry { index: (n, m, k, l), closed, generic: rates.get(n, m, k, l) }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::analytic_x;
    use crate::params::{ohmic_density, thermal_factor};
    use crate::vanvleck::eigenenergies;
    use proptest::prelude::*;

    const EIGHT: [(usize, usize); 8] = [(0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

    fn build(p: &SystemParams) -> (Spectrum, DMatrix<f64>, RateTensor) {
        let s = eigenenergies(p, 5).unwrap();
        let x = analytic_x(p, 5).unwrap();
        let t = rate_tensor(&s, &x, p).unwrap();
        (s, x, t)
    }

    fn reference_sets() -> [SystemParams; 2] {
        let b = SystemParams::default().with_epsilon(0.5);
        [SystemParams::default(), b.with_omega(b.delta_b())]
    }

    #[test]
    fn independent_and_dependent_rates() {
        for p in reference_sets() {
            let (s, x, t) = build(&p);
            for (j, k) in EIGHT {
                let w = s.w(j, k);
                let g = ohmic_density(w, p.kappa);
                let n = thermal_factor(w, p.beta).unwrap();
                let want = 2.0 * g * n * x[(j, k)].powi(2);
                assert!((t.get(j, j, k, k) - want).abs() < 1e-12);
                assert!((t.get(k, k, j, j) - (want + 2.0 * g * x[(j, k)].powi(2))).abs() < 1e-12);
                assert!((t.get(k, k, j, j) - (n + 1.0) * 2.0 * g * x[(j, k)].powi(2)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn population_columns_sum_to_zero() {
        for p in reference_sets() {
            let (_, _, t) = build(&p);
            let b = t.population_block();
            for k in 0..5 {
                assert!(b.column(k).sum().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unbiased_zeros() {
        let (_, _, t) = build(&SystemParams::default());
        for (a, b) in [(0, 3), (0, 4), (3, 0), (4, 0)] {
            assert_eq!(t.get(a, a, b, b), 0.0);
        }
    }

    #[test]
    fn biased_zeros_are_fourth_order() {
        // X_03 and X_04 are O(g^2) once epsilon != 0, so these rates are O(g^4) rather than zero
        let p = reference_sets()[1];
        let (_, _, t) = build(&p);
        let (_, _, th) = build(&p.with_g(p.g / 2.0));
        for (a, b) in [(0, 3), (0, 4), (3, 0), (4, 0)] {
            assert!(t.get(a, a, b, b).abs() < 1e-5);
            // absorption entries are Boltzmann suppressed far below this and carry only rounding
            if t.get(a, a, b, b).abs() > 1e-12 {
                assert!(t.get(a, a, b, b) / th.get(a, a, b, b) > 14.0);
            }
        }
    }

    #[test]
    fn undamped_is_zero() {
        let (_, _, t) = build(&SystemParams::default().with_kappa(0.0));
        assert!(t.is_zero());
    }

    #[test]
    fn pinned_index_convention() {
        // L_{jj,kk} for j < k uses N(w_jk), the emission weight: a positive rate of order kappa*w
        let p = SystemParams::default();
        let (s, x, t) = build(&p);
        let w = s.w(1, 0);
        let want = 2.0 * p.kappa * w * (1.0 + 1.0 / (p.beta * w).exp_m1()) * x[(0, 1)].powi(2);
        assert!((t.get(0, 0, 1, 1) - want).abs() < 1e-14);
        assert!(t.get(1, 1, 0, 0) < 1e-3 * t.get(0, 0, 1, 1));
    }

    #[test]
    fn coherence_conjugation_symmetry() {
        let (_, _, t) = build(&reference_sets()[1]);
        for n in 0..5 {
            for m in 0..5 {
                for k in 0..5 {
                    for l in 0..5 {
                        assert!((t.get(n, m, k, l) - t.get(m, n, l, k)).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_forms_account_for_dropped_absorption() {
        let p = SystemParams::default();
        let (s, x, t) = build(&p);
        let entries = closed_form_dephasing(&p, &s, &x, &t).unwrap();
        let emission_listed = |a: usize| -> Vec<usize> {
            match a {
                0 => vec![],
                1 | 2 => vec![0],
                _ => vec![1, 2],
            }
        };
        for e in entries.iter().filter(|e| e.index.0 == e.index.2 && e.index.1 == e.index.3) {
            let (n, m, _, _) = e.index;
            // the generic form carries -1/2 of every rate out of n and m
            let mut dropped = 0.0;
            for a in [n, m] {
                for q in (0..5).filter(|q| *q != a && !emission_listed(a).contains(q)) {
                    dropped += t.get(q, q, a, a);
                }
            }
            let closed_gap = e.closed - e.generic;
            let fix = 0.5 * dropped;
            assert!((closed_gap - fix).abs() < 1e-12, "{:?}: gap {closed_gap} vs {fix}", e.index);
            assert!((0.0..1e-5).contains(&closed_gap));
        }
    }

    #[test]
    fn closed_off_diagonal_forms_match_when_unbiased() {
        let p = SystemParams::default().with_omega(0.9);
        let (s, x, t) = build(&p);
        let entries = closed_form_dephasing(&p, &s, &x, &t).unwrap();
        for e in entries.iter().filter(|e| e.index.0 != e.index.2 || e.index.1 != e.index.3) {
            assert!((e.closed - e.generic).abs() < 1e-12, "{:?}", e.index);
        }
    }

    #[test]
    fn closed_form_example() {
        let p = SystemParams::default();
        let (s, x, t) = build(&p);
        let e = closed_form_dephasing(&p, &s, &x, &t).unwrap()[0];
        assert_eq!(e.index, (0, 1, 0, 1));
        assert!((e.closed + 0.5 * t.get(0, 0, 1, 1)).abs() < 1e-15);
    }

    #[test]
    fn rejects_mismatch() {
        let p = SystemParams::default();
        let s = eigenenergies(&p, 5).unwrap();
        assert!(rate_tensor(&s, &DMatrix::zeros(4, 4), &p).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn trace_preserving(eps in -1.0f64..1.0, om in 0.6f64..1.6, beta in 1.0f64..30.0) {
            let p = SystemParams::default().with_epsilon(eps).with_omega(om).with_beta(beta);
            prop_assume!((p.delta_b() - 2.0 * om).abs() > 1e-3);
            let (_, _, t) = build(&p);
            for k in 0..5 {
                for l in 0..5 {
                    let s: f64 = (0..5).map(|n| t.get(n, n, k, l)).sum();
                    prop_assert!(s.abs() < 1e-12);
                }
            }
        }

        #[test]
        fn detailed_balance_ratio(eps in -1.0f64..1.0, om in 0.6f64..1.6, beta in 1.0f64..20.0) {
            let p = SystemParams::default().with_epsilon(eps).with_omega(om).with_beta(beta);
            prop_assume!((p.delta_b() - 2.0 * om).abs() > 1e-3);
            let (s, _, t) = build(&p);
            for (j, k) in [(0usize, 1usize), (0, 2), (1, 3)] {
                let down = t.get(j, j, k, k);
                let up = t.get(k, k, j, j);
                prop_assume!(down > 1e-300);
                let ratio = up / down;
                let want = (beta * s.w(j, k)).exp();
                prop_assert!((ratio - want).abs() <= 1e-9 * want.max(1e-300));
            }
        }
    }
}
