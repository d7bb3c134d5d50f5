//! Dormand-Prince 5(4) with cubic Hermite output onto the requested grid.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{check_grid, check_rho0, DensityTrajectory, RateTensor, SolverTag};
use crate::error::{Error, Result};
use crate::vanvleck::Spectrum;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Steps shorter than this fraction of the span count as underflow.
    pub min_step_fraction: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions { rtol: 1e-10, atol: 1e-12, min_step_fraction: 1e-14, max_steps: 10_000_000 }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// The generator as a dense matrix on vec(rho), row-major index n*N+m.
pub(crate) fn liouvillian(spectrum: &Spectrum, rates: &RateTensor) -> DMatrix<Complex64> {
    let d = rates.n_levels;
    let mut m = DMatrix::zeros(d * d, d * d);
    for n in 0..d {
        for mm in 0..d {
            let row = n * d + mm;
            for k in 0..d {
                for l in 0..d {
                    m[(row, k * d + l)] = Complex64::new(PI * rates.get(n, mm, k, l), 0.0);
                }
            }
            m[(row, row)] -= Complex64::new(0.0, spectrum.w(n, mm));
        }
    }
    m
}

fn unvec(v: &DVector<Complex64>, d: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |n, m| v[n * d + m])
}

fn hermitize(v: &mut DVector<Complex64>, d: usize) {
    for n in 0..d {
        v[n * d + n].im = 0.0;
        for m in n + 1..d {
            let a = 0.5 * (v[n * d + m] + v[m * d + n].conj());
            v[n * d + m] = a;
            v[m * d + n] = a.conj();
        }
    }
}

fn error_norm(err: &DVector<Complex64>, y0: &DVector<Complex64>, y1: &DVector<Complex64>, o: &IntegratorOptions) -> f64 {
    (0..err.len())
        .map(|i| err[i].norm() / (o.atol + o.rtol * y0[i].norm().max(y1[i].norm())))
        .fold(0.0, f64::max)
}

/// Integrate d vec(rho)/dt = M vec(rho) and sample on `t_grid` (which must start at or after 0).
pub fn propagate_with(
    rho0: &DMatrix<Complex64>,
    spectrum: &Spectrum,
    rates: &RateTensor,
    t_grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<DensityTrajectory> {
    let d = rates.n_levels;
    check_rho0(rho0, d)?;
    check_grid(t_grid)?;
    if spectrum.n_levels() != d {
        return Err(Error::DimensionMismatch { expected: d, got: spectrum.n_levels() });
    }
    let gen = liouvillian(spectrum, rates);
    let mut y = DVector::from_fn(d * d, |i, _| rho0[(i / d, i % d)]);
    let mut t = 0.0;
    let t_end = t_grid.last().copied().unwrap_or(0.0);
    let mut out = Vec::with_capacity(t_grid.len());
    let mut next = 0;
    while next < t_grid.len() && t_grid[next] <= 0.0 {
        out.push(unvec(&y, d));
        next += 1;
    }
    let scale = gen.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-12);
    let mut h = (0.01 / scale).min(t_end.max(1e-12));
    let h_min = opts.min_step_fraction * t_end.max(1.0);
    let mut f0 = &gen * &y;
    let mut steps = 0usize;
    let mut k: Vec<DVector<Complex64>> = vec![DVector::zeros(d * d); 7];

    while next < t_grid.len() {
        if steps >= opts.max_steps {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        h = h.min(t_end - t);
        if h < h_min && t_end - t > h_min {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        k[0].copy_from(&f0);
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, a) in A[s].iter().enumerate().take(s) {
                if *a != 0.0 {
                    ys.axpy(Complex64::new(h * a, 0.0), &k[j], Complex64::new(1.0, 0.0));
                }
            }
            k[s] = &gen * &ys;
            debug_assert!(C[s] > 0.0);
        }
        // stage 7 was evaluated at the fifth-order solution (FSAL)
        let mut y1 = y.clone();
        for (j, b) in A[6].iter().enumerate() {
            if *b != 0.0 {
                y1.axpy(Complex64::new(h * b, 0.0), &k[j], Complex64::new(1.0, 0.0));
            }
        }
        let mut err = DVector::zeros(d * d);
        for (j, e) in E.iter().enumerate() {
            if *e != 0.0 {
                err.axpy(Complex64::new(h * e, 0.0), &k[j], Complex64::new(1.0, 0.0));
            }
        }
        let en = error_norm(&err, &y, &y1, opts);
        steps += 1;
        if en <= 1.0 {
            hermitize(&mut y1, d);
            let f1 = &gen * &y1;
            let t1 = t + h;
            while next < t_grid.len() && t_grid[next] <= t1 + 1e-12 * t1.max(1.0) {
                let th = ((t_grid[next] - t) / h).clamp(0.0, 1.0);
                let (h00, h10, h01, h11) = hermite(th);
                let v = &y * Complex64::new(h00, 0.0) + &f0 * Complex64::new(h * h10, 0.0) + &y1 * Complex64::new(h01, 0.0) + &f1 * Complex64::new(h * h11, 0.0);
                out.push(unvec(&v, d));
                next += 1;
            }
            t = t1;
            y = y1;
            f0 = f1;
        }
        let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
        h *= if en <= 1.0 { fac } else { fac.min(1.0) };
        if !h.is_finite() {
            return Err(Error::StepSizeUnderflow { t, h });
        }
    }
    Ok(DensityTrajectory { times: t_grid.to_vec(), states: out, solver: SolverTag::Numeric })
}

fn hermite(s: f64) -> (f64, f64, f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0, s3 - 2.0 * s2 + s, -2.0 * s3 + 3.0 * s2, s3 - s2)
}

pub fn propagate_numeric(rho0: &DMatrix<Complex64>, spectrum: &Spectrum, rates: &RateTensor, t_grid: &[f64]) -> Result<DensityTrajectory> {
    propagate_with(rho0, spectrum, rates, t_grid, &IntegratorOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::analytic_x;
    use crate::redfield::rate_tensor;
    use crate::vanvleck::eigenenergies;
    use crate::SystemParams;

    fn setup(p: &SystemParams) -> (Spectrum, RateTensor) {
        let s = eigenenergies(p, 5).unwrap();
        let x = analytic_x(p, 5).unwrap();
        let r = rate_tensor(&s, &x, p).unwrap();
        (s, r)
    }

    fn test_rho() -> DMatrix<Complex64> {
        let v = DVector::from_vec(vec![0.6, 0.5, 0.45, 0.3, 0.2].into_iter().map(|x| Complex64::new(x, 0.0)).collect());
        let v = &v / Complex64::new(v.norm(), 0.0);
        &v * v.adjoint()
    }

    fn grid(t_max: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn free_phases() {
        let p = SystemParams::default().with_kappa(0.0);
        let (s, r) = setup(&p);
        let rho0 = test_rho();
        let ts = grid(100.0, 501);
        let tr = propagate_numeric(&rho0, &s, &r, &ts).unwrap();
        let mut worst: f64 = 0.0;
        for (t, st) in ts.iter().zip(&tr.states) {
            for n in 0..5 {
                for m in 0..5 {
                    let want = rho0[(n, m)] * Complex64::new(0.0, -s.w(n, m) * t).exp();
                    worst = worst.max((st[(n, m)] - want).norm());
                }
            }
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn conserves_trace_and_hermiticity() {
        for eps in [0.0, 0.5] {
            let (s, r) = setup(&SystemParams::default().with_epsilon(eps));
            let tr = propagate_numeric(&test_rho(), &s, &r, &grid(200.0, 801)).unwrap();
            assert!(tr.max_trace_deviation() < 1e-8);
            assert!(tr.max_hermiticity_defect() < 1e-10);
            // Redfield dynamics is not positivity preserving; a pure start dips slightly below zero
            assert!(tr.min_eigenvalue() > -1e-2);
        }
    }

    #[test]
    fn matches_matrix_exponential() {
        let (s, r) = setup(&SystemParams::default().with_epsilon(0.5).with_omega(0.9));
        let rho0 = test_rho();
        let ts = [0.0, 3.3, 17.0, 40.0];
        let tr = propagate_numeric(&rho0, &s, &r, &ts).unwrap();
        let gen = liouvillian(&s, &r);
        let v0 = DVector::from_fn(25, |i, _| rho0[(i / 5, i % 5)]);
        for (t, st) in ts.iter().zip(&tr.states) {
            let v = (&gen * Complex64::new(*t, 0.0)).exp() * &v0;
            assert!((unvec(&v, 5) - st).camax() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn approaches_population_fixed_point() {
        let p = SystemParams::default();
        let (s, r) = setup(&p);
        let tr = propagate_numeric(&test_rho(), &s, &r, &[0.0, 2000.0]).unwrap();
        let b = r.population_block();
        let last = tr.states.last().unwrap();
        let pops = DVector::from_fn(5, |n, _| last[(n, n)].re);
        assert!((&b * &pops).amax() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        let (s, r) = setup(&SystemParams::default());
        assert!(propagate_numeric(&DMatrix::zeros(3, 3), &s, &r, &[0.0, 1.0]).is_err());
        assert!(propagate_numeric(&test_rho(), &s, &r, &[1.0, 0.5]).is_err());
    }
}
