//! Closed-form matrix elements X_nm = <n|B + B^dagger|m> in the dressed eigenbasis.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::vanvleck::{effective_coefficients, VanVleckCoefficients, RESONANCE_GUARD};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingFactors {
    pub l0: f64,
    pub losc: f64,
    pub lq: f64,
    pub lq_osc_plus: f64,
    pub lq_osc_minus: f64,
}

pub fn coupling_factors(params: &SystemParams) -> Result<CouplingFactors> {
    params.validate()?;
    let db = params.delta_b();
    let (g, eps, d0, om) = (params.g, params.epsilon, params.delta0, params.omega);
    let bias_mixing = 4.0 * eps * d0 * g * g;
    let gap = db - 2.0 * om;
    if bias_mixing != 0.0 && gap.abs() < RESONANCE_GUARD {
        return Err(Error::ResonanceDegeneracy { omega: om, delta_b: db, gap: gap.abs() });
    }
    let db2 = db * db;
    Ok(CouplingFactors {
        l0: eps * g / (db * om),
        losc: (2.0 * db + 3.0 * om) * d0 * d0 * g * g / (db2 * om * (db + om).powi(2)),
        lq: d0 * g / (db * (db + om)),
        lq_osc_plus: bias_mixing / (db2 * (db + om) * (db + 2.0 * om)),
        lq_osc_minus: if bias_mixing == 0.0 { 0.0 } else { -bias_mixing / (db2 * om * gap) },
    })
}

/// True where the closed-form table has a (generically) nonzero entry.
pub fn in_pattern(n: usize, m: usize) -> bool {
    let (a, b) = (n.min(m), n.max(m));
    if a == 0 {
        return b <= 4;
    }
    let j = (a - 1) / 2;
    b <= 2 * j + 6
}

pub fn analytic_x(params: &SystemParams, n_levels: usize) -> Result<DMatrix<f64>> {
    let f = coupling_factors(params)?;
    Ok(x_table(&f, &effective_coefficients(params), n_levels))
}

/// The closed-form table for given coupling factors and doublet angles.
pub fn x_table(f: &CouplingFactors, c: &VanVleckCoefficients, n_levels: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n_levels, n_levels);
    let half = |j: usize| {
        let a = c.alpha_j(j) / 2.0;
        (a.sin(), a.cos())
    };
    let mut set = |n: usize, m: usize, v: f64| {
        if n < n_levels && m < n_levels {
            x[(n, m)] = v;
            x[(m, n)] = v;
        }
    };

    let (s0, c0) = half(0);
    let (s1, c1) = half(1);
    set(0, 0, -2.0 * f.l0);
    set(0, 1, s0 * f.lq + c0 * (1.0 + f.losc));
    set(0, 2, c0 * f.lq - s0 * (1.0 + f.losc));
    set(0, 3, s1 * f.lq_osc_plus);
    set(0, 4, c1 * f.lq_osc_plus);

    let mut j = 0;
    while 2 * j + 1 < n_levels {
        let a = c.alpha_j(j);
        let (sa, ca) = half(j);
        let (sb, cb) = half(j + 1);
        let (sc, cc) = half(j + 2);
        let r1 = (j as f64 + 1.0).sqrt();
        let r2 = (j as f64 + 2.0).sqrt();
        let up = 1.0 + f.losc;
        let dn = 1.0 - f.losc;
        let (o, e) = (2 * j + 1, 2 * j + 2);

        set(o, o, -2.0 * f.l0 * a.cos() + r1 * f.lq_osc_minus * a.sin());
        set(o, o + 1, 2.0 * f.l0 * a.sin() + r1 * f.lq_osc_minus * a.cos());
        set(o, o + 2, f.lq * ca * sb + r2 * up * ca * cb + r1 * dn * sa * sb);
        set(o, o + 3, f.lq * ca * cb - r2 * up * ca * sb + r1 * dn * sa * cb);
        set(o, o + 4, r2 * f.lq_osc_plus * ca * sc);
        set(o, o + 5, r2 * f.lq_osc_plus * ca * cc);

        set(e, e, 2.0 * f.l0 * a.cos() - r1 * f.lq_osc_minus * a.sin());
        set(e, e + 1, -f.lq * sa * sb - r2 * up * sa * cb + r1 * dn * ca * sb);
        set(e, e + 2, -f.lq * sa * cb + r2 * up * sa * sb + r1 * dn * ca * cb);
        set(e, e + 3, -r2 * f.lq_osc_plus * sa * sc);
        set(e, e + 4, -r2 * f.lq_osc_plus * sa * cc);
        j += 1;
    }
    x
}
