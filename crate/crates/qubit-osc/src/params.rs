//! Physical inputs, derived TLS quantities and the bath spectral functions.
//!
//! Units: hbar = 1 and energies/frequencies are measured in units of `delta0`
//! (conventionally 1).

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this |omega| the thermal rate is replaced by its analytic limit kappa/beta.
pub const OMEGA_ZERO_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub epsilon: f64,
    pub delta0: f64,
    pub g: f64,
    pub omega: f64,
    pub kappa: f64,
    pub beta: f64,
}

impl Default for SystemParams {
    /// Unbiased qubit at resonance, the reference working point.
    fn default() -> Self {
        SystemParams { epsilon: 0.0, delta0: 1.0, g: 0.18, omega: 1.0, kappa: 0.0154, beta: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub delta_b: f64,
    /// Mixing angle with cos = epsilon/delta_b and sin = -delta0/delta_b.
    pub theta: f64,
}

impl SystemParams {
    pub fn new(epsilon: f64, g: f64, omega: f64, kappa: f64, beta: f64) -> Self {
        SystemParams { epsilon, delta0: 1.0, g, omega, kappa, beta }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.epsilon, self.delta0, self.g, self.omega, self.kappa, self.beta];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("params", "all parameters must be finite"));
        }
        if self.delta0 <= 0.0 {
            return Err(Error::param("delta0", format!("must be > 0, got {}", self.delta0)));
        }
        if self.g < 0.0 {
            return Err(Error::param("g", format!("must be >= 0, got {}", self.g)));
        }
        if self.omega <= 0.0 {
            return Err(Error::param("omega", format!("must be > 0, got {}", self.omega)));
        }
        if self.kappa < 0.0 {
            return Err(Error::param("kappa", format!("must be >= 0, got {}", self.kappa)));
        }
        if self.beta <= 0.0 {
            return Err(Error::param("beta", format!("must be > 0, got {}", self.beta)));
        }
        Ok(())
    }

    /// True when g is large enough that second-order perturbation theory is doubtful.
    pub fn outside_perturbative_regime(&self) -> bool {
        self.g >= 0.5 * self.omega.min(self.delta_b())
    }

    pub fn delta_b(&self) -> f64 {
        self.epsilon.hypot(self.delta0)
    }

    pub fn derive(&self) -> DerivedParams {
        DerivedParams { delta_b: self.delta_b(), theta: (-self.delta0).atan2(self.epsilon) }
    }

    /// alpha = 8 kappa g^2 / Omega^2, the dimensionless coupling of the effective bath.
    pub fn alpha(&self) -> f64 {
        8.0 * self.kappa * self.g * self.g / (self.omega * self.omega)
    }
}

pub fn ohmic_density(omega: f64, kappa: f64) -> f64 {
    kappa * omega
}

/// Peaked spectral density seen by the bare qubit once the oscillator is folded into the bath.
pub fn effective_density(omega: f64, params: &SystemParams) -> f64 {
    let big = params.omega;
    let a = big * big - omega * omega;
    let b = 2.0 * PI * params.kappa * omega * big;
    2.0 * params.alpha() * omega * big.powi(4) / (a * a + b * b)
}

/// Bose factor N(omega) = [coth(beta omega / 2) - 1] / 2.
pub fn thermal_factor(omega: f64, beta: f64) -> Result<f64> {
    if omega.abs() < OMEGA_ZERO_THRESHOLD {
        return Err(Error::ThermalPole);
    }
    Ok(1.0 / (beta * omega).exp_m1())
}

/// G(omega) N(omega) for the Ohmic bath, finite at omega = 0.
pub fn thermal_rate(omega: f64, kappa: f64, beta: f64) -> f64 {
    if omega.abs() < OMEGA_ZERO_THRESHOLD {
        return kappa / beta;
    }
    kappa * omega / (beta * omega).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn derive_examples() {
        let d = SystemParams::default().with_epsilon(0.5).derive();
        assert!((d.delta_b - 1.118).abs() < 5e-4);
        let d = SystemParams::default().derive();
        assert_eq!(d.delta_b, 1.0);
        assert_eq!(d.theta, -PI / 2.0);
        let d = SystemParams::default().with_epsilon(1.0).derive();
        assert_relative_eq!(d.delta_b, 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(d.theta, -PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn theta_reproduces_rotation() {
        for eps in [-2.0, -0.5, 0.0, 0.3, 4.0] {
            let p = SystemParams::default().with_epsilon(eps);
            let d = p.derive();
            assert_relative_eq!(d.theta.cos(), eps / d.delta_b, epsilon = 1e-15);
            assert_relative_eq!(d.theta.sin(), -1.0 / d.delta_b, epsilon = 1e-15);
        }
    }

    #[test]
    fn ohmic_examples() {
        assert_eq!(ohmic_density(1.0, 0.0154), 0.0154);
        assert_eq!(ohmic_density(0.0, 0.0154), 0.0);
        assert_relative_eq!(ohmic_density(-2.0, 0.0154), -0.0308, epsilon = 1e-15);
    }

    #[test]
    fn effective_density_at_peak() {
        let p = SystemParams::default().with_omega(1.3);
        let alpha = p.alpha();
        let expect = alpha * p.omega / (2.0 * PI * PI * p.kappa * p.kappa);
        assert_relative_eq!(effective_density(p.omega, &p), expect, max_relative = 1e-13);
        assert_eq!(effective_density(0.0, &p), 0.0);
        assert_eq!(effective_density(0.7, &p.with_g(0.0)), 0.0);
    }

    #[test]
    fn thermal_limits() {
        assert!(thermal_factor(200.0, 10.0).unwrap() < 1e-300);
        assert_relative_eq!(thermal_factor(-200.0, 10.0).unwrap(), -1.0, epsilon = 1e-15);
        assert_eq!(thermal_factor(0.0, 10.0), Err(Error::ThermalPole));
        assert_relative_eq!(thermal_rate(0.0, 0.0154, 10.0), 0.00154, max_relative = 1e-15);
        // continuity across the threshold
        let near = thermal_rate(2e-8, 0.0154, 10.0);
        assert_relative_eq!(near, 0.00154, max_relative = 1e-6);
    }

    #[test]
    fn validate_rejects() {
        assert!(SystemParams::default().validate().is_ok());
        assert!(SystemParams::default().with_g(-0.1).validate().is_err());
        assert!(SystemParams::default().with_omega(0.0).validate().is_err());
        assert!(SystemParams::default().with_beta(0.0).validate().is_err());
        assert!(SystemParams::default().with_kappa(-1.0).validate().is_err());
        assert!(SystemParams::default().with_g(0.6).outside_perturbative_regime());
        assert!(!SystemParams::default().outside_perturbative_regime());
    }

    proptest! {
        #[test]
        fn detailed_balance_antisymmetry(logw in -6.0f64..2.0, kappa in 0.0f64..0.1, beta in 0.5f64..50.0) {
            let w = 10f64.powf(logw);
            let lhs = thermal_rate(w, kappa, beta) - thermal_rate(-w, kappa, beta);
            prop_assert!((lhs + ohmic_density(w, kappa)).abs() <= 1e-12);
        }

        #[test]
        fn effective_density_nonnegative(w in 0.0f64..10.0, g in 0.0f64..0.5, omega in 0.1f64..3.0) {
            let p = SystemParams::default().with_g(g).with_omega(omega);
            prop_assert!(effective_density(w, &p) >= 0.0);
        }

        #[test]
        fn derive_is_pure(eps in -3.0f64..3.0) {
            let p = SystemParams::default().with_epsilon(eps);
            prop_assert_eq!(p.derive(), p.derive());
            prop_assert!(p.derive().delta_b >= p.delta0);
        }
    }
}
