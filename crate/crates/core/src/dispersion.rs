//! In-plane dispersion of a planar (or whispering-gallery) cavity photon.
//!
//! Confinement along the cavity axis freezes one momentum component and
//! leaves a rest energy `E₀ = ħω₀`. The in-plane dispersion is then exactly
//! that of a relativistic particle of mass `m = E₀/c̃²` moving at the medium
//! speed of light `c̃ = c/n_s`:
//!
//! ```text
//! (ħω)² = (m c̃²)² + (ħ c̃ k)²
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR};
use crate::error::{positive, Error, Result};

/// What pins the rest energy of the mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resonance {
    /// Spacer thickness (m) and longitudinal order; `E₀ = ħπjc/(L·n_s)`.
    Geometry { thickness: f64, order: u32 },
    /// Vacuum wavelength of the resonance (m); `E₀ = 2πħc/λ₀`.
    Wavelength { lambda0: f64 },
}

/// Cavity geometry and material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    pub resonance: Resonance,
    /// Background refractive index of the spacer, ≥ 1.
    pub n_s: f64,
    /// Quality factor. Only the interferometry model reads it.
    pub q: Option<f64>,
}

fn check_index(n_s: f64) -> Result<f64> {
    if n_s.is_finite() && n_s >= 1.0 {
        Ok(n_s)
    } else {
        Err(Error::invalid(
            "n_s",
            format!("must be finite and >= 1, got {n_s}"),
        ))
    }
}

impl CavitySpec {
    pub fn from_geometry(thickness: f64, order: u32, n_s: f64) -> Result<Self> {
        positive("L", thickness)?;
        if order == 0 {
            return Err(Error::invalid("j", "mode order must be >= 1"));
        }
        Ok(CavitySpec {
            resonance: Resonance::Geometry { thickness, order },
            n_s: check_index(n_s)?,
            q: None,
        })
    }

    pub fn from_wavelength(lambda0: f64, n_s: f64) -> Result<Self> {
        positive("lambda0", lambda0)?;
        Ok(CavitySpec {
            resonance: Resonance::Wavelength { lambda0 },
            n_s: check_index(n_s)?,
            q: None,
        })
    }

    pub fn with_q(mut self, q: f64) -> Result<Self> {
        self.q = Some(positive("Q", q)?);
        Ok(self)
    }

    /// Rest energy `E₀ = ħω₀` (J).
    pub fn rest_energy(&self) -> f64 {
        match self.resonance {
            Resonance::Geometry { thickness, order } => {
                HBAR * PI * f64::from(order) * C / (thickness * self.n_s)
            }
            Resonance::Wavelength { lambda0 } => 2.0 * PI * HBAR * C / lambda0,
        }
    }

    /// Rest angular frequency ω₀ (rad/s).
    pub fn omega0(&self) -> f64 {
        self.rest_energy() / HBAR
    }

    /// Speed of light in the spacer, `c/n_s`.
    pub fn light_speed(&self) -> f64 {
        C / self.n_s
    }

    /// The vacuum-cavity mass `E₀/c²` at the same rest energy.
    pub fn vacuum_mass(&self) -> f64 {
        self.rest_energy() / (C * C)
    }

    /// Wavenumber `m c̃/ħ` at which the kinetic term equals the rest energy.
    pub fn rest_wavenumber(&self) -> f64 {
        self.rest_energy() / (HBAR * self.light_speed())
    }
}

/// One sample of the dispersion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub k_par: f64,
    pub omega: f64,
    pub v_g: f64,
}

/// Effective rest mass `E₀/c̃²` (kg).
///
/// In vacuum this is `ħπj/(cL)`. With a dielectric spacer it equals `n_s²`
/// times the vacuum mass at the same rest energy, so `m c̃² = E₀` holds by
/// construction.
pub fn effective_mass(cav: &CavitySpec) -> f64 {
    let c_tilde = cav.light_speed();
    cav.rest_energy() / (c_tilde * c_tilde)
}

/// Photon energy `ħω(k)` (J) on the exact relativistic dispersion.
pub fn photon_energy(cav: &CavitySpec, k_par: f64) -> f64 {
    cav.rest_energy().hypot(HBAR * cav.light_speed() * k_par)
}

/// Angular frequency ω(k) (rad/s).
pub fn angular_frequency(cav: &CavitySpec, k_par: f64) -> f64 {
    photon_energy(cav, k_par) / HBAR
}

/// Exact group velocity `c̃² ħk / ħω` (m/s).
pub fn group_velocity(cav: &CavitySpec, k_par: f64) -> f64 {
    let c_tilde = cav.light_speed();
    c_tilde * c_tilde * HBAR * k_par / photon_energy(cav, k_par)
}

pub fn dispersion_point(cav: &CavitySpec, k_par: f64) -> DispersionPoint {
    DispersionPoint {
        k_par,
        omega: angular_frequency(cav, k_par),
        v_g: group_velocity(cav, k_par),
    }
}

/// Non-relativistic kinetic energy `ħ²k²/2m` (J).
pub fn kinetic_energy_nonrel(cav: &CavitySpec, k_par: f64) -> f64 {
    let p = HBAR * k_par;
    p * p / (2.0 * effective_mass(cav))
}

/// The transverse Klein-Gordon operator applied to a plane wave `exp(i k·r)`
/// of frequency ω, divided by the wave:
///
/// `−k² + (ω² − m²c̃⁴/ħ²)/c̃²` (1/m²). Zero exactly on the dispersion curve.
pub fn kg_residual(cav: &CavitySpec, k_par: f64, omega: f64) -> f64 {
    let c_tilde = cav.light_speed();
    let omega_rest = cav.rest_energy() / HBAR;
    // factored to avoid squaring 1e15-scale frequencies twice
    (omega - omega_rest) * (omega + omega_rest) / (c_tilde * c_tilde) - k_par * k_par
}
