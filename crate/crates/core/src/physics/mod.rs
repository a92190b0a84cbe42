//! Landau levels of a charged spin-1/2 particle and magnetic resonance of a neutral one.

mod landau;
mod resonance;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use landau::{
    landau_energy, landau_h0, landau_kinetic_fields, landau_normalization, landau_residuals, landau_star_checks,
    landau_wigner_reduced, pauli_symbol,
    LandauGauge, LandauMode, LandauResiduals,
};
pub use resonance::{
    fit_rabi, pure_amplitude, purity_check, rabi_frequency, rabi_period, resonance_analytic, resonance_initial,
    resonance_integrate, zeta_residual, GammaState, PurityReport, RabiFit, ResonanceRun, PURITY_TOL,
};

/// Physical constants and field parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EMParams {
    pub m0: f64,
    pub e0: f64,
    pub c: f64,
    pub hbar: f64,
    #[serde(rename = "B3")]
    pub b3: f64,
    /// Amplitude of the rotating transverse field.
    pub b: f64,
    /// Drive angular frequency.
    pub omega: f64,
    /// Magnetic moment.
    pub mu0: f64,
}

impl Default for EMParams {
    fn default() -> Self {
        Self {
            m0: 1.0,
            e0: 1.0,
            c: 1.0,
            hbar: 1.0,
            b3: 1.0,
            b: 0.5,
            omega: 2.0,
            mu0: 1.0,
        }
    }
}

impl EMParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.m0, self.e0, self.c, self.hbar, self.b3, self.b, self.omega, self.mu0];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("physical parameters must be finite".into()));
        }
        for (name, v) in [("m0", self.m0), ("c", self.c), ("hbar", self.hbar)] {
            if v <= 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Cyclotron frequency `|e0| B3 / (m0 c)`.
    pub fn omega0(&self) -> f64 {
        self.e0.abs() * self.b3 / (self.m0 * self.c)
    }
}
