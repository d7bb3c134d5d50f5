//! One function per subcommand; each maps a resolved config to a table.

use rayon::prelude::*;
use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::f64::consts::PI;

use super::config::{RunConfig, SweepParam};
use super::output::{Cell, Table};
use crate::coupling::coupling_factors;
use crate::error::{Error, Result};
use crate::model::{Branch, Solver, System};
use crate::observables::{symmetrized_correlation, FourierOptions, SpectrumSeries};
use crate::oracle::{build_hamiltonian, diagonalize, nearest_levels};
use crate::params::SystemParams;
use crate::vanvleck::eigenenergies;

/// Evaluates `f` at every sweep point on a pool of `cfg.workers` threads and stitches the
/// tables together in sweep order, prefixing the swept value when there is a sweep.
pub fn over_points<F>(cfg: &RunConfig, f: F) -> Result<Table>
where
    F: Fn(&SystemParams) -> Result<Table> + Sync,
{
    let points = cfg.points()?;
    let sweep = cfg.sweep()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<Table>> = pool.install(|| points.par_iter().map(|(_, p)| f(p)).collect());

    let mut out: Option<Table> = None;
    for (i, (res, (value, _))) in results.into_iter().zip(&points).enumerate() {
        let mut t = match (res, sweep) {
            (Ok(t), _) => t,
            (Err(e), Some(s)) => {
                return Err(Error::AtPoint { point: format!("sweep point {i} ({}={})", s.param.name(), value.unwrap_or(f64::NAN)), source: Box::new(e) })
            }
            (Err(e), None) => return Err(e),
        };
        if let (Some(s), Some(v)) = (sweep, value) {
            prefix(&mut t, s.param.name(), *v);
        }
        match &mut out {
            None => out = Some(t),
            Some(acc) => acc.append(t),
        }
    }
    Ok(out.unwrap_or_default())
}

fn prefix(t: &mut Table, name: &str, v: f64) {
    t.columns.insert(0, name.to_string());
    for r in &mut t.rows {
        r.insert(0, Cell::Num(v));
    }
    if let Some(p) = &mut t.peaks {
        prefix(p, name, v);
    }
}

/// Full-model and JC systems, built on demand.
fn systems(cfg: &RunConfig, p: &SystemParams, solvers: &[Solver]) -> Result<HashMap<Branch, System>> {
    let mut map = HashMap::new();
    for s in solvers {
        let b = s.branch();
        if let Entry::Vacant(slot) = map.entry(b) {
            slot.insert(System::new(p, cfg.settings(), b)?);
        }
    }
    Ok(map)
}

/// Van Vleck energies next to the nearest exact eigenvalue.
pub fn spectrum(cfg: &RunConfig) -> Result<Table> {
    let n = cfg.n_levels;
    over_points(cfg, |p| {
        // the energies alone stay finite at 2 Omega = Delta_b, but the transformation behind them does not
        coupling_factors(p)?;
        let vv = eigenenergies(p, n)?.energies;
        let exact = nearest_levels(&vv, &diagonalize(&build_hamiltonian(p, cfg.j_max)?)?.energies);
        let diff = vv.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let mut cols: Vec<String> = (0..n).map(|i| format!("E{i}_vv")).collect();
        cols.extend((0..n).map(|i| format!("E{i}_oracle")));
        cols.push("max_abs_diff".into());
        let mut t = Table::new(cols);
        let mut row: Vec<Cell> = vv.into_iter().map(Cell::Num).collect();
        row.extend(exact.iter().map(|&e| Cell::Num(e)));
        row.push(diff.into());
        t.push(row);
        Ok(t)
    })
}

pub fn dynamics(cfg: &RunConfig) -> Result<Table> {
    let solvers = cfg.solvers()?;
    let ts = cfg.t_grid();
    over_points(cfg, |p| {
        let sys = systems(cfg, p, &solvers)?;
        let series = solvers.iter().map(|s| sys[&s.branch()].population(*s, &ts)).collect::<Result<Vec<_>>>()?;
        let mut t = Table::new(std::iter::once("t".to_string()).chain(solvers.iter().map(|s| format!("P_{s}"))));
        for (i, &time) in ts.iter().enumerate() {
            t.push(std::iter::once(Cell::Num(time)).chain(series.iter().map(|s| Cell::Num(s.values[i]))).collect());
        }
        Ok(t)
    })
}

fn spectrum_table(cfg: &RunConfig, label: &str, spectra: &[(String, SpectrumSeries)]) -> Table {
    let omega = &spectra[0].1.omega;
    let mut cols = vec!["omega".to_string()];
    cols.extend(spectra.iter().map(|(n, _)| format!("{label}_{n}")));
    let broadened = cfg.peak_width > 0.0;
    if broadened {
        cols.extend(spectra.iter().map(|(n, _)| format!("{label}_{n}_broadened")));
    }
    let rendered: Vec<Vec<f64>> = if broadened { spectra.iter().map(|(_, s)| s.rendered(cfg.peak_width)).collect() } else { Vec::new() };
    let mut t = Table::new(cols);
    for (i, &w) in omega.iter().enumerate() {
        let mut row = vec![Cell::Num(w)];
        row.extend(spectra.iter().map(|(_, s)| Cell::Num(s.values[i])));
        row.extend(rendered.iter().map(|r| Cell::Num(r[i])));
        t.push(row);
    }
    let mut peaks = Table::new(["solver", "position", "weight"]);
    for (n, s) in spectra {
        for pk in &s.peaks {
            peaks.push(vec![n.clone().into(), pk.position.into(), pk.weight.into()]);
        }
    }
    t.peaks = Some(Box::new(peaks));
    t
}

pub fn fourier(cfg: &RunConfig) -> Result<Table> {
    let solvers = cfg.solvers()?;
    let (ts, ws) = (cfg.t_grid(), cfg.omega_grid());
    over_points(cfg, |p| {
        let sys = systems(cfg, p, &solvers)?;
        let spectra = solvers
            .iter()
            .map(|s| Ok((s.name().to_string(), sys[&s.branch()].fourier(*s, &ts, &ws, &FourierOptions::default())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(spectrum_table(cfg, "F", &spectra))
    })
}

pub fn rates(cfg: &RunConfig) -> Result<Table> {
    over_points(cfg, |p| {
        let sys = System::new(p, cfg.settings(), Branch::Full)?;
        let r = sys.relaxation()?;
        let pair = &sys.dephasing()?.pairs[0];
        let mut t = Table::new([
            "gamma_r",
            "second",
            "gamma_r_eig",
            "second_eig",
            "gamma_r_approx",
            "gamma_01",
            "gamma_02",
            "re_lambda_plus",
            "re_lambda_minus",
        ]);
        t.push(vec![
            r.gamma_r.into(),
            r.second.into(),
            r.numeric[0].into(),
            r.numeric[1].into(),
            r.approx.into(),
            (-PI * sys.rates.get(0, 1, 0, 1)).into(),
            (-PI * sys.rates.get(0, 2, 0, 2)).into(),
            pair.lambda_plus.re.into(),
            pair.lambda_minus.re.into(),
        ]);
        Ok(t)
    })
}

/// Long format (epsilon, omega, S) with one S column per solver.
pub fn correlation(cfg: &RunConfig) -> Result<Table> {
    if cfg.points()?.iter().any(|(_, p)| p.kappa == 0.0) {
        return Err(Error::Config("correlation needs kappa > 0: an undamped system has no stationary spectrum".into()));
    }
    let solvers = cfg.solvers()?;
    let (ts, ws) = (cfg.t_grid(), cfg.omega_grid());
    let eps_swept = matches!(cfg.sweep()?, Some(s) if s.param == SweepParam::Epsilon);
    over_points(cfg, |p| {
        let spectra = solvers
            .iter()
            .map(|s| {
                let c = symmetrized_correlation(p, cfg.settings(), *s, &ts, &ws, &FourierOptions::default())?;
                Ok((s.name().to_string(), c.spectrum))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut t = spectrum_table(cfg, "S", &spectra);
        if !eps_swept {
            prefix(&mut t, "epsilon", p.epsilon);
        }
        Ok(t)
    })
}
