//! Material parameters of the Lamé operator and the derived wave scalings.
//!
//! Admissibility is `mu > 0` and `lambda + mu > 0`, which keeps the energy
//!
//! ```text
//!     mu |grad u|^2 + (lambda + mu) (div u)^2
//! ```
//!
//! coercive. In terms of the Poisson ratio `nu = lambda / (2 (lambda + mu))`
//! admissibility is exactly `nu` in `(-1, 1/2)`.

use crate::{Error, Result};

/// Validated Lamé coefficients `(mu, lambda)`.
///
/// Constructed through [`ElasticityParams::from_lame`],
/// [`ElasticityParams::from_poisson`] or [`ElasticityParams::from_young`];
/// every instance satisfies `mu > 0`, `lambda + mu > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticityParams {
    mu: f64,
    lambda: f64,
}

/// Wave-speed scalings entering the disk spectrum: for an eigenvalue
/// `Lambda = omega^2`, the compressional and shear potentials oscillate with
/// arguments `omega1 = a1 omega` and `omega2 = a2 omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveScalings {
    /// `1 / sqrt(lambda + 2 mu)` (compressional).
    pub a1: f64,
    /// `1 / sqrt(mu)` (shear).
    pub a2: f64,
    /// `a1 / a2 = sqrt(mu / (lambda + 2 mu))`, always in `(0, 1)`.
    pub omega_ratio: f64,
}

impl ElasticityParams {
    /// Build from the Lamé pair, rejecting inadmissible combinations.
    pub fn from_lame(lambda: f64, mu: f64) -> Result<Self> {
        if !(mu.is_finite() && lambda.is_finite()) || mu <= 0.0 || lambda + mu <= 0.0 {
            return Err(Error::Inadmissible { mu, lambda });
        }
        Ok(Self { mu, lambda })
    }

    /// Build from Poisson ratio `nu` in `(-1, 1/2)` and shear modulus `mu`,
    /// via `lambda = 2 mu nu / (1 - 2 nu)`.
    pub fn from_poisson(nu: f64, mu: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= -1.0 || nu >= 0.5 {
            return Err(Error::Domain(format!(
                "Poisson ratio must lie in (-1, 0.5), got {nu}"
            )));
        }
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::Inadmissible {
                mu,
                lambda: f64::NAN,
            });
        }
        let lambda = 2.0 * mu * nu / (1.0 - 2.0 * nu);
        Self::from_lame(lambda, mu)
    }

    /// Build from Young's modulus `E > 0` and Poisson ratio `nu`, via
    /// `mu = E / (2 (1 + nu))`, `lambda = E nu / ((1 + nu)(1 - 2 nu))`.
    pub fn from_young(young: f64, nu: f64) -> Result<Self> {
        if !young.is_finite() || young <= 0.0 {
            return Err(Error::Domain(format!(
                "Young modulus must be positive, got {young}"
            )));
        }
        if !nu.is_finite() || nu <= -1.0 || nu >= 0.5 {
            return Err(Error::Domain(format!(
                "Poisson ratio must lie in (-1, 0.5), got {nu}"
            )));
        }
        let mu = young / (2.0 * (1.0 + nu));
        let lambda = young * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        Self::from_lame(lambda, mu)
    }

    /// Shear modulus `mu`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// First Lamé parameter `lambda`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Poisson ratio `nu = lambda / (2 (lambda + mu))`, in `(-1, 1/2)`.
    pub fn nu(&self) -> f64 {
        self.lambda / (2.0 * (self.lambda + self.mu))
    }

    /// Divergence-penalty ratio `a = (lambda + mu) / mu = 1 / (1 - 2 nu)`.
    pub fn a_ratio(&self) -> f64 {
        (self.lambda + self.mu) / self.mu
    }

    /// Young's modulus `E = mu (3 lambda + 2 mu) / (lambda + mu)`.
    pub fn young(&self) -> f64 {
        self.mu * (3.0 * self.lambda + 2.0 * self.mu) / (self.lambda + self.mu)
    }

    /// `lambda + 2 mu`, the compressional (P-wave) modulus.
    pub fn p_modulus(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    /// The wave scalings `(a1, a2, a1/a2)`; admissibility makes all three
    /// finite and `omega_ratio < 1`.
    pub fn wave_scalings(&self) -> WaveScalings {
        let a1 = 1.0 / self.p_modulus().sqrt();
        let a2 = 1.0 / self.mu.sqrt();
        WaveScalings {
            a1,
            a2,
            omega_ratio: a1 / a2,
        }
    }

    /// For an eigenvalue `Lambda > 0`, the frequency `omega = sqrt(Lambda)`
    /// and the pair `(omega1, omega2) = (a1 omega, a2 omega)`.
    pub fn wave_numbers(&self, lambda_value: f64) -> Result<(f64, f64, f64)> {
        if !(lambda_value > 0.0) {
            return Err(Error::Domain(format!(
                "eigenvalue must be positive, got {lambda_value}"
            )));
        }
        let w = self.wave_scalings();
        let omega = lambda_value.sqrt();
        Ok((omega, w.a1 * omega, w.a2 * omega))
    }
}
