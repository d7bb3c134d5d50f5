//! Relaxation among the three lowest levels, with all absorption terms kept.

use nalgebra::DMatrix;
use std::f64::consts::PI;

use super::{rate_tensor, RateTensor};
use crate::coupling::analytic_x;
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::vanvleck::eigenenergies;

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationSpec {
    /// Smallest nonzero decay rate.
    pub gamma_r: f64,
    pub second: f64,
    /// sigma' = M sigma on levels 0, 1, 2, pi included.
    pub matrix: DMatrix<f64>,
    /// Same two rates from a general eigensolver, ascending.
    pub numeric: [f64; 2],
    /// pi L_{00,22} below resonance, pi L_{00,11} above it.
    pub approx: f64,
}

pub fn relaxation_from_rates(rates: &RateTensor, below_resonance: bool) -> Result<RelaxationSpec> {
    if rates.n_levels < 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: rates.n_levels });
    }
    let mut m = DMatrix::from_fn(3, 3, |n, k| if n == k { 0.0 } else { PI * rates.get(n, n, k, k) });
    for k in 0..3 {
        m[(k, k)] = -m.column(k).sum();
    }
    let s = -m.trace();
    let p = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)] + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let root = (s * s - 4.0 * p).max(0.0).sqrt();
    // the small root via the product avoids cancellation when p << s^2
    let second = 0.5 * (s + root);
    let gamma_r = if second > 0.0 { p / second } else { 0.0 };

    let mut ev: Vec<f64> = m.complex_eigenvalues().iter().map(|z| -z.re).collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    let approx = PI * if below_resonance { rates.get(0, 0, 2, 2) } else { rates.get(0, 0, 1, 1) };
    Ok(RelaxationSpec { gamma_r, second, matrix: m, numeric: [ev[1], ev[2]], approx })
}

pub fn relaxation_rate(params: &SystemParams) -> Result<RelaxationSpec> {
    let s = eigenenergies(params, 5)?;
    let x = analytic_x(params, 5)?;
    let r = rate_tensor(&s, &x, params)?;
    relaxation_from_rates(&r, params.omega < params.delta_b())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_form_matches_eigensolver() {
        for eps in [0.0, 0.5] {
            for om in [0.75, 0.9, 1.0, 1.118, 1.4, 1.5] {
                let r = relaxation_rate(&SystemParams::default().with_epsilon(eps).with_omega(om)).unwrap();
                assert!((r.gamma_r - r.numeric[0]).abs() < 1e-10, "eps={eps} om={om}");
                assert!((r.second - r.numeric[1]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn slower_off_resonance() {
        let p = SystemParams::default();
        let peak = relaxation_rate(&p).unwrap().gamma_r;
        for om in [0.75, 1.5] {
            assert!(relaxation_rate(&p.with_omega(om)).unwrap().gamma_r < peak);
        }
    }

    #[test]
    fn detuned_approximation() {
        let p = SystemParams::default();
        for om in [0.6, 1.6] {
            let r = relaxation_rate(&p.with_omega(om)).unwrap();
            assert!((r.approx - r.gamma_r).abs() < 0.1 * r.gamma_r, "om={om} {} {}", r.approx, r.gamma_r);
        }
    }

    #[test]
    fn undamped_is_zero() {
        let r = relaxation_rate(&SystemParams::default().with_kappa(0.0)).unwrap();
        assert_eq!(r.gamma_r, 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn ordered_and_nonnegative(eps in -0.8f64..0.8, om in 0.6f64..1.6, beta in 2.0f64..30.0) {
            let r = relaxation_rate(&SystemParams::default().with_epsilon(eps).with_omega(om).with_beta(beta)).unwrap();
            prop_assert!(r.gamma_r >= 0.0);
            prop_assert!(r.gamma_r <= r.second);
        }
    }
}
