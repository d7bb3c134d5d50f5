//! Secular solvers. FSA decouples populations from coherences entirely; PSA keeps the
//! coupling inside three near-degenerate coherence pairs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use super::{check_grid, check_rho0, DensityTrajectory, RateTensor, SolverTag};
use crate::error::{Error, Result};
use crate::vanvleck::Spectrum;

/// Coherence pairs `((n, m), (j, k))` coupled in the partial secular approximation.
pub const PSA_PAIRS: [((usize, usize), (usize, usize)); 3] = [((0, 1), (0, 2)), ((1, 3), (2, 3)), ((1, 4), (2, 4))];

const DENOM_FLOOR: f64 = 1e-10;

/// Population generator with sigma' = M sigma, pi included.
///
/// For five levels only emission is kept below the doublets (levels 1, 2 feed 0; levels 3, 4
/// feed 1 and 2), which makes the matrix upper triangular with zero column sums.
/// Other sizes use the full population block.
pub fn fsa_diagonal_matrix(rates: &RateTensor) -> DMatrix<f64> {
    let d = rates.n_levels;
    if d != 5 {
        return rates.population_block() * PI;
    }
    let mut m = DMatrix::zeros(5, 5);
    let feeds: [(usize, &[usize]); 4] = [(1, &[0]), (2, &[0]), (3, &[1, 2]), (4, &[1, 2])];
    for (src, dsts) in feeds {
        for &dst in dsts {
            let r = PI * rates.get(dst, dst, src, src);
            m[(dst, src)] += r;
            m[(src, src)] -= r;
        }
    }
    m
}

fn diagonal_closed_form(m: &DMatrix<f64>, s0: &[f64; 5], t: f64) -> Option<[f64; 5]> {
    let a = -m[(1, 1)];
    let b = -m[(2, 2)];
    let c3 = -m[(3, 3)];
    let c4 = -m[(4, 4)];
    for (x, y) in [(a, c3), (a, c4), (b, c3), (b, c4)] {
        if (x - y).abs() < DENOM_FLOOR {
            return None;
        }
    }
    let feed = |rate: f64, from: f64, k: f64, c: f64| rate * from * ((-c * t).exp() - (-k * t).exp()) / (k - c);
    let s3 = s0[3] * (-c3 * t).exp();
    let s4 = s0[4] * (-c4 * t).exp();
    let s1 = s0[1] * (-a * t).exp() + feed(m[(1, 3)], s0[3], a, c3) + feed(m[(1, 4)], s0[4], a, c4);
    let s2 = s0[2] * (-b * t).exp() + feed(m[(2, 3)], s0[3], b, c3) + feed(m[(2, 4)], s0[4], b, c4);
    let total: f64 = s0.iter().sum();
    Some([total - s1 - s2 - s3 - s4, s1, s2, s3, s4])
}

fn populations(m: &DMatrix<f64>, s0: &DVector<f64>, t: f64) -> DVector<f64> {
    if m.nrows() == 5 {
        let arr = [s0[0], s0[1], s0[2], s0[3], s0[4]];
        if let Some(s) = diagonal_closed_form(m, &arr, t) {
            return DVector::from_row_slice(&s);
        }
    }
    (m * t).exp() * s0
}

fn check_inputs(rho0: &DMatrix<Complex64>, spectrum: &Spectrum, rates: &RateTensor, t_grid: &[f64]) -> Result<()> {
    check_rho0(rho0, rates.n_levels)?;
    check_grid(t_grid)?;
    if spectrum.n_levels() != rates.n_levels {
        return Err(Error::DimensionMismatch { expected: rates.n_levels, got: spectrum.n_levels() });
    }
    Ok(())
}

fn secular_coherence(rho0: &DMatrix<Complex64>, spectrum: &Spectrum, rates: &RateTensor, n: usize, m: usize, t: f64) -> Complex64 {
    rho0[(n, m)] * Complex64::new(PI * rates.get(n, m, n, m) * t, -spectrum.w(n, m) * t).exp()
}

fn fsa_states(rho0: &DMatrix<Complex64>, spectrum: &Spectrum, rates: &RateTensor, t_grid: &[f64]) -> Vec<DMatrix<Complex64>> {
    let d = rates.n_levels;
    let gen = fsa_diagonal_matrix(rates);
    let s0 = DVector::from_fn(d, |n, _| rho0[(n, n)].re);
    t_grid
        .iter()
        .map(|&t| {
            let pops = populations(&gen, &s0, t);
            let mut r = DMatrix::from_fn(d, d, |n, m| if n < m { secular_coherence(rho0, spectrum, rates, n, m, t) } else { Complex64::new(0.0, 0.0) });
            for n in 0..d {
                r[(n, n)] = Complex64::new(pops[n], 0.0);
                for m in 0..n {
                    r[(n, m)] = r[(m, n)].conj();
                }
            }
            r
        })
        .collect()
}

/// Full secular approximation.
pub fn solve_fsa(rho0: &DMatrix<Complex64>, spectrum: &Spectrum, rates: &RateTensor, t_grid: &[f64]) -> Result<DensityTrajectory> {
    check_inputs(rho0, spectrum, rates, t_grid)?;
    Ok(DensityTrajectory { times: t_grid.to_vec(), states: fsa_states(rho0, spectrum, rates, t_grid), solver: SolverTag::Fsa })
}

/// Eigen-decomposition of one 2x2 coherence block.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub first: (usize, usize),
    pub second: (usize, usize),
    /// [[a, b], [c, d]] acting on (rho_first, rho_second).
    pub generator: [[Complex64; 2]; 2],
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub r: Complex64,
    /// Eigenvectors are (v, 1); `None` when the pair is uncoupled (c = 0).
    pub v_plus: Option<Complex64>,
    pub v_minus: Option<Complex64>,
}

impl PairSpec {
    fn new(first: (usize, usize), second: (usize, usize), spectrum: &Spectrum, rates: &RateTensor) -> Result<Self> {
        let (n, m) = first;
        let (j, k) = second;
        let a = Complex64::new(PI * rates.get(n, m, n, m), -spectrum.w(n, m));
        let b = Complex64::new(PI * rates.get(n, m, j, k), 0.0);
        let c = Complex64::new(PI * rates.get(j, k, n, m), 0.0);
        let d = Complex64::new(PI * rates.get(j, k, j, k), -spectrum.w(j, k));
        let r = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
        if b.norm() > 0.0 && c.norm() > 0.0 && r.norm() < DENOM_FLOOR * (a.norm() + d.norm()).max(1.0) {
            return Err(Error::DegeneratePair(n, m, j, k));
        }
        // keep Re(lambda+) >= Re(lambda-)
        let r = if r.re < 0.0 { -r } else { r };
        let (v_plus, v_minus) = if c.norm() > 0.0 { (Some((a - d + r) / (2.0 * c)), Some((a - d - r) / (2.0 * c))) } else { (None, None) };
        Ok(PairSpec {
            first,
            second,
            generator: [[a, b], [c, d]],
            lambda_plus: 0.5 * (a + d + r),
            lambda_minus: 0.5 * (a + d - r),
            r,
            v_plus,
            v_minus,
        })
    }

    pub fn is_coupled(&self) -> bool {
        self.generator[0][1].norm() > 0.0 || self.generator[1][0].norm() > 0.0
    }

    /// Weights c+- with x0 = c+ (v+, 1) + c- (v-, 1).
    pub fn amplitudes(&self, x0: [Complex64; 2]) -> Option<[Complex64; 2]> {
        let (vp, vm) = (self.v_plus?, self.v_minus?);
        let cp = (x0[0] - vm * x0[1]) / (vp - vm);
        Some([cp, x0[1] - cp])
    }

    /// exp(A t) x0 by Sylvester's formula.
    pub fn evolve(&self, x0: [Complex64; 2], t: f64) -> [Complex64; 2] {
        let [[a, b], [c, d]] = self.generator;
        if !self.is_coupled() {
            return [x0[0] * (a * t).exp(), x0[1] * (d * t).exp()];
        }
        let (lp, lm) = (self.lambda_plus, self.lambda_minus);
        let ep = (lp * t).exp();
        let em = (lm * t).exp();
        let apply = |shift: Complex64| [(a - shift) * x0[0] + b * x0[1], c * x0[0] + (d - shift) * x0[1]];
        let p = apply(lm);
        let q = apply(lp);
        [(ep * p[0] - em * q[0]) / self.r, (ep * p[1] - em * q[1]) / self.r]
    }

    /// Slowest decay rate of the pair, -Re(lambda+).
    pub fn gamma_plus(&self) -> f64 {
        -self.lambda_plus.re
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DephasingSpec {
    pub pairs: Vec<PairSpec>,
}

pub fn dephasing_pairs(spectrum: &Spectrum, rates: &RateTensor) -> Result<DephasingSpec> {
    if rates.n_levels != 5 || spectrum.n_levels() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: rates.n_levels });
    }
    let pairs = PSA_PAIRS.iter().map(|&(f, s)| PairSpec::new(f, s, spectrum, rates)).collect::<Result<Vec<_>>>()?;
    Ok(DephasingSpec { pairs })
}

/// Partial secular approximation: FSA plus the three coupled coherence pairs.
pub fn solve_psa(rho0: &DMatrix<Complex64>, spectrum: &Spectrum, rates: &RateTensor, t_grid: &[f64]) -> Result<DensityTrajectory> {
    check_inputs(rho0, spectrum, rates, t_grid)?;
    let spec = dephasing_pairs(spectrum, rates)?;
    let mut states = fsa_states(rho0, spectrum, rates, t_grid);
    for (st, &t) in states.iter_mut().zip(t_grid) {
        for p in &spec.pairs {
            let x = p.evolve([rho0[(p.first.0, p.first.1)], rho0[(p.second.0, p.second.1)]], t);
            for (idx, v) in [(p.first, x[0]), (p.second, x[1])] {
                st[idx] = v;
                st[(idx.1, idx.0)] = v.conj();
            }
        }
    }
    Ok(DensityTrajectory { times: t_grid.to_vec(), states, solver: SolverTag::Psa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::analytic_x;
    use crate::redfield::{propagate_numeric, rate_tensor};
    use crate::vanvleck::eigenenergies;
    use crate::SystemParams;
    use proptest::prelude::*;

    fn setup(p: &SystemParams) -> (Spectrum, RateTensor) {
        let s = eigenenergies(p, 5).unwrap();
        let x = analytic_x(p, 5).unwrap();
        (s.clone(), rate_tensor(&s, &x, p).unwrap())
    }

    fn test_rho() -> DMatrix<Complex64> {
        let v = DVector::from_vec([0.6, 0.5, 0.45, 0.3, 0.2].iter().map(|x| Complex64::new(*x, 0.0)).collect());
        let v = &v / Complex64::new(v.norm(), 0.0);
        &v * v.adjoint()
    }

    #[test]
    fn closed_form_matches_exponential() {
        for (eps, om) in [(0.0, 1.0), (0.5, 1.118), (0.0, 0.75), (0.5, 1.5)] {
            let (_, r) = setup(&SystemParams::default().with_epsilon(eps).with_omega(om));
            let m = fsa_diagonal_matrix(&r);
            let s0 = [0.1, 0.3, 0.25, 0.2, 0.15];
            for t in [0.5, 10.0, 80.0, 400.0] {
                let c = diagonal_closed_form(&m, &s0, t).expect("distinct rates");
                let e = (&m * t).exp() * DVector::from_row_slice(&s0);
                for n in 0..5 {
                    assert!((c[n] - e[n]).abs() < 1e-9, "eps={eps} om={om} t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn diagonal_generator_shape() {
        let (_, r) = setup(&SystemParams::default());
        let m = fsa_diagonal_matrix(&r);
        for k in 0..5 {
            assert!(m.column(k).sum().abs() < 1e-14);
            for n in k + 1..5 {
                assert_eq!(m[(n, k)], 0.0);
            }
        }
        assert_eq!(m[(1, 2)], 0.0);
        assert_eq!(m[(3, 4)], 0.0);
    }

    #[test]
    fn fsa_dephasing_rates() {
        let (s, r) = setup(&SystemParams::default().with_epsilon(0.5));
        let rho0 = test_rho();
        let tr = solve_fsa(&rho0, &s, &r, &[0.0, 7.0]).unwrap();
        let gamma = -PI * r.get(0, 2, 0, 2);
        assert!((tr.states[1][(0, 2)].norm() - rho0[(0, 2)].norm() * (-gamma * 7.0).exp()).abs() < 1e-14);
    }

    #[test]
    fn psa_decouples_to_fsa() {
        let p = SystemParams::default().with_kappa(0.0);
        let (s, r) = setup(&p);
        let rho0 = test_rho();
        let ts = [0.0, 1.0, 5.0];
        let a = solve_fsa(&rho0, &s, &r, &ts).unwrap();
        let b = solve_psa(&rho0, &s, &r, &ts).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            assert!((x - y).camax() < 1e-14);
        }
    }

    #[test]
    fn pair_evolution_matches_exponential() {
        let (s, r) = setup(&SystemParams::default().with_omega(0.9));
        let spec = dephasing_pairs(&s, &r).unwrap();
        for p in &spec.pairs {
            let [[a, b], [c, d]] = p.generator;
            let g = DMatrix::from_row_slice(2, 2, &[a, b, c, d]);
            let x0 = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.05)];
            let t = 13.0;
            let e = (&g * Complex64::new(t, 0.0)).exp() * DVector::from_row_slice(&x0);
            let x = p.evolve(x0, t);
            assert!((x[0] - e[0]).norm() < 1e-12 && (x[1] - e[1]).norm() < 1e-12);
            let amp = p.amplitudes(x0).unwrap();
            let (vp, vm) = (p.v_plus.unwrap(), p.v_minus.unwrap());
            assert!((amp[0] * vp + amp[1] * vm - x0[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn psa_and_fsa_track_numeric() {
        // the dropped non-secular terms matter while coherences are large, and fade with them
        let (s, r) = setup(&SystemParams::default());
        let rho0 = test_rho();
        let ts: Vec<f64> = (0..400).map(|i| i as f64).collect();
        let num = propagate_numeric(&rho0, &s, &r, &ts).unwrap();
        let dev = |tr: &DensityTrajectory, from: usize| num.states[from..].iter().zip(&tr.states[from..]).map(|(a, b)| (a - b).camax()).fold(0.0, f64::max);
        let psa = solve_psa(&rho0, &s, &r, &ts).unwrap();
        let fsa = solve_fsa(&rho0, &s, &r, &ts).unwrap();
        assert!(dev(&psa, 0) < 0.15);
        assert!(dev(&psa, 200) < 1e-3);
        assert!(dev(&psa, 0) < dev(&fsa, 0));
    }

    #[test]
    fn populations_conserved() {
        let (s, r) = setup(&SystemParams::default().with_epsilon(0.5).with_omega(1.118));
        let tr = solve_psa(&test_rho(), &s, &r, &[0.0, 10.0, 100.0, 1000.0]).unwrap();
        assert!(tr.max_trace_deviation() < 1e-10);
    }

    #[test]
    fn psa_requires_five_levels() {
        let p = SystemParams::default();
        let s = eigenenergies(&p, 3).unwrap();
        let r = rate_tensor(&s, &analytic_x(&p, 3).unwrap(), &p).unwrap();
        let rho = DMatrix::identity(3, 3) / Complex64::new(3.0, 0.0);
        assert!(solve_psa(&rho, &s, &r, &[0.0]).is_err());
        assert!(solve_fsa(&rho, &s, &r, &[0.0, 5.0]).unwrap().max_trace_deviation() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn pair_trace_identity(eps in -0.8f64..0.8, om in 0.6f64..1.6) {
            let (s, r) = setup(&SystemParams::default().with_epsilon(eps).with_omega(om));
            let spec = dephasing_pairs(&s, &r).unwrap();
            for p in &spec.pairs {
                let tr = p.generator[0][0] + p.generator[1][1];
                prop_assert!((p.lambda_plus + p.lambda_minus - tr).norm() < 1e-12);
                prop_assert!(p.lambda_plus.re <= 1e-12 && p.lambda_minus.re <= 1e-12);
                prop_assert!(p.lambda_plus.re >= p.lambda_minus.re);
            }
        }

        #[test]
        fn fsa_conserves(eps in -0.8f64..0.8, om in 0.6f64..1.6, t in 0.0f64..500.0) {
            let (s, r) = setup(&SystemParams::default().with_epsilon(eps).with_omega(om));
            let tr = solve_fsa(&test_rho(), &s, &r, &[t]).unwrap();
            prop_assert!(tr.max_trace_deviation() < 1e-10);
        }
    }
}
