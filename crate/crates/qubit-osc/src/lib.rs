//! Dissipative dynamics of a biased qubit coupled to a damped harmonic oscillator.
//!
//! The coupled qubit-oscillator system is diagonalized perturbatively (second-order
//! Van-Vleck), the oscillator's Ohmic bath enters through a Bloch-Redfield rate tensor,
//! and the qubit population difference P(t) is obtained from one of several solvers.

pub mod cli;
pub mod coupling;
pub mod jaynes_cummings;
pub mod model;
pub mod observables;
pub mod error;
pub mod oracle;
pub mod params;
pub mod redfield;
pub mod vanvleck;

pub use error::{Error, Result};
pub use params::SystemParams;
