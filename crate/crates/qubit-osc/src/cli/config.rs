//! Flat JSON run configuration; every key can be overridden by the flag of the same name.

use clap::Args;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::model::{Settings, Solver};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub epsilon: f64,
    pub delta0: f64,
    pub g: f64,
    pub omega: f64,
    pub kappa: f64,
    pub beta: f64,
    /// Comma-separated solver list.
    pub solver: String,
    pub n_levels: usize,
    pub j_max: usize,
    pub j_cut: usize,
    pub t_max: f64,
    pub t_points: usize,
    pub omega_max: f64,
    pub omega_points: usize,
    /// PARAM:START:STOP:COUNT
    pub sweep: Option<String>,
    /// Half-width used to draw delta peaks in broadened spectra; 0 disables the column.
    pub peak_width: f64,
    pub format: Format,
    #[serde(skip_serializing)]
    pub workers: usize,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = SystemParams::default();
        let s = Settings::default();
        RunConfig {
            epsilon: p.epsilon,
            delta0: p.delta0,
            g: p.g,
            omega: p.omega,
            kappa: p.kappa,
            beta: p.beta,
            solver: "numeric".into(),
            n_levels: s.n_levels,
            j_max: s.j_max,
            j_cut: s.j_cut,
            t_max: 1500.0,
            t_points: 15001,
            omega_max: 2.0,
            omega_points: 201,
            sweep: None,
            peak_width: 0.01,
            format: Format::Csv,
            workers: 0,
            out: None,
        }
    }
}

/// Command-line overrides, named after the config keys.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub solver: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub delta0: Option<f64>,
    #[arg(long, global = true)]
    pub g: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub n_levels: Option<usize>,
    #[arg(long, global = true)]
    pub j_max: Option<usize>,
    #[arg(long, global = true)]
    pub j_cut: Option<usize>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub t_points: Option<usize>,
    #[arg(long, global = true)]
    pub omega_max: Option<f64>,
    #[arg(long, global = true)]
    pub omega_points: Option<usize>,
    /// PARAM:START:STOP:COUNT
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    #[arg(long, global = true)]
    pub peak_width: Option<f64>,
}

macro_rules! apply {
    ($cfg:ident, $ov:ident, $($field:ident),*) => {
        $(if let Some(v) = $ov.$field.clone() { $cfg.$field = v; })*
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Epsilon,
    Delta0,
    G,
    Omega,
    Kappa,
    Beta,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Epsilon => "epsilon",
            SweepParam::Delta0 => "delta0",
            SweepParam::G => "g",
            SweepParam::Omega => "omega",
            SweepParam::Kappa => "kappa",
            SweepParam::Beta => "beta",
        }
    }

    pub fn set(&self, p: &mut SystemParams, v: f64) {
        match self {
            SweepParam::Epsilon => p.epsilon = v,
            SweepParam::Delta0 => p.delta0 = v,
            SweepParam::G => p.g = v,
            SweepParam::Omega => p.omega = v,
            SweepParam::Kappa => p.kappa = v,
            SweepParam::Beta => p.beta = v,
        }
    }
}

impl std::str::FromStr for Sweep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("sweep '{s}' is not PARAM:START:STOP:COUNT"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let param = match parts[0] {
            "epsilon" => SweepParam::Epsilon,
            "delta0" => SweepParam::Delta0,
            "g" => SweepParam::G,
            "omega" => SweepParam::Omega,
            "kappa" => SweepParam::Kappa,
            "beta" => SweepParam::Beta,
            other => return Err(Error::Config(format!("cannot sweep '{other}'"))),
        };
        let start: f64 = parts[1].parse().map_err(|_| bad())?;
        let stop: f64 = parts[2].parse().map_err(|_| bad())?;
        let count: usize = parts[3].parse().map_err(|_| bad())?;
        if !start.is_finite() || !stop.is_finite() || count == 0 {
            return Err(bad());
        }
        if stop < start {
            return Err(Error::Config(format!("sweep bounds out of order: {start} > {stop}")));
        }
        Ok(Sweep { param, start, stop, count })
    }
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count).map(|i| self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64).collect()
    }
}

pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect()
}

impl RunConfig {
    /// Defaults, then the config file, then flags.
    pub fn resolve(ov: &Overrides) -> Result<Self> {
        let mut cfg = match &ov.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        apply!(cfg, ov, solver, format, workers, epsilon, delta0, g, omega, kappa, beta, n_levels, j_max, j_cut, t_max, t_points, omega_max, omega_points, peak_width);
        if ov.out.is_some() {
            cfg.out = ov.out.clone();
        }
        if ov.sweep.is_some() {
            cfg.sweep = ov.sweep.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.params().validate()?;
        if !(self.t_max > 0.0 && self.t_max.is_finite()) || self.t_points < 2 {
            return Err(Error::Config("t_max must be > 0 and t_points >= 2".into()));
        }
        if !(self.omega_max > 0.0 && self.omega_max.is_finite()) || self.omega_points < 2 {
            return Err(Error::Config("omega_max must be > 0 and omega_points >= 2".into()));
        }
        if !(self.peak_width >= 0.0 && self.peak_width.is_finite()) {
            return Err(Error::Config("peak_width must be >= 0".into()));
        }
        if self.j_cut > self.j_max {
            return Err(Error::Config(format!("j_cut = {} exceeds j_max = {}", self.j_cut, self.j_max)));
        }
        let solvers = self.solvers()?;
        self.sweep()?;
        for s in solvers {
            if s.branch() == crate::model::Branch::JaynesCummings {
                self.for_each_point_epsilon(|eps| if eps != 0.0 { Err(Error::BiasedJaynesCummings(eps)) } else { Ok(()) })?;
            }
        }
        Ok(())
    }

    fn for_each_point_epsilon(&self, f: impl Fn(f64) -> Result<()>) -> Result<()> {
        for p in self.points()? {
            f(p.1.epsilon)?;
        }
        Ok(())
    }

    pub fn params(&self) -> SystemParams {
        SystemParams { epsilon: self.epsilon, delta0: self.delta0, g: self.g, omega: self.omega, kappa: self.kappa, beta: self.beta }
    }

    pub fn settings(&self) -> Settings {
        Settings { n_levels: self.n_levels, j_max: self.j_max, j_cut: self.j_cut }
    }

    pub fn solvers(&self) -> Result<Vec<Solver>> {
        let list: Vec<Solver> = self.solver.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(Error::Config("no solver given".into()));
        }
        Ok(list)
    }

    pub fn sweep(&self) -> Result<Option<Sweep>> {
        self.sweep.as_deref().map(str::parse).transpose()
    }

    /// (sweep value, params) per point; a single point when no sweep is set.
    pub fn points(&self) -> Result<Vec<(Option<f64>, SystemParams)>> {
        let base = self.params();
        Ok(match self.sweep()? {
            None => vec![(None, base)],
            Some(s) => s
                .values()
                .into_iter()
                .map(|v| {
                    let mut p = base;
                    s.param.set(&mut p, v);
                    (Some(v), p)
                })
                .collect(),
        })
    }

    pub fn t_grid(&self) -> Vec<f64> {
        linspace(0.0, self.t_max, self.t_points)
    }

    pub fn omega_grid(&self) -> Vec<f64> {
        linspace(0.0, self.omega_max, self.omega_points)
    }

    /// SHA-256 of the canonical JSON form. Output path and worker count are left out since
    /// they do not change the emitted data.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
