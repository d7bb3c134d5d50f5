use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("thermal factor has a pole at omega = 0; use thermal_rate for G*N products")]
    ThermalPole,

    #[error("second-order denominator vanishes: |2*Omega - Delta_b| = {gap:.3e} (Omega = {omega}, Delta_b = {delta_b})")]
    ResonanceDegeneracy { omega: f64, delta_b: f64, gap: f64 },

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("the Jaynes-Cummings branch requires epsilon = 0, got {0}")]
    BiasedJaynesCummings(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigensolver did not converge")]
    EigenNonConvergence,

    #[error("step size underflow at t = {t:.6} (h = {h:.3e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("defective 2x2 generator for coherence pair ({0}{1}),({2}{3})")]
    DegeneratePair(usize, usize, usize, usize),

    #[error("series has not decayed by the end of the time grid (increase t_max)")]
    NonDecayingSeries,

    #[error("config: {0}")]
    Config(String),

    #[error("at {point}: {source}")]
    AtPoint { point: String, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// Process exit status: 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::Truncation(_) | Error::BiasedJaynesCummings(_) | Error::Config(_) => 2,
            Error::AtPoint { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}
