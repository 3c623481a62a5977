//! Canonical quantum nondimensionalization.
//!
//! A [`UnitScaling`] is fixed by a reference mass and a reference length; the
//! reference time is `M·L²/ħ` and the reference energy `ħ/T`, so that ħ = 1
//! in scaled units. With the photon effective mass as the reference mass the
//! Schrödinger envelope equation also has m = 1, which keeps SI magnitudes
//! like 1e-36 kg and 1e15 rad/s out of the propagator's arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{positive, Error, Result};

/// Physical dimensions understood by the scaling layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Length,
    Time,
    Mass,
    Energy,
    Wavenumber,
    Velocity,
    Acceleration,
}

impl Dimension {
    pub const ALL: [Dimension; 7] = [
        Dimension::Length,
        Dimension::Time,
        Dimension::Mass,
        Dimension::Energy,
        Dimension::Wavenumber,
        Dimension::Velocity,
        Dimension::Acceleration,
    ];

    fn as_str(self) -> &'static str {
        match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Mass => "mass",
            Dimension::Energy => "energy",
            Dimension::Wavenumber => "wavenumber",
            Dimension::Velocity => "velocity",
            Dimension::Acceleration => "acceleration",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::UnknownDimension(s.to_string()))
    }
}

/// Reference scales for converting SI quantities to and from dimensionless form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitScaling {
    /// Reference length (m).
    pub length: f64,
    /// Reference mass (kg).
    pub mass: f64,
    /// Reference time (s), `mass · length² / ħ`.
    pub time: f64,
    /// Reference energy (J), `ħ / time`.
    pub energy: f64,
}

impl UnitScaling {
    /// Builds the canonical scaling with ħ = 1 from a reference mass and length.
    pub fn new(mass: f64, length: f64) -> Result<Self> {
        let mass = positive("mass", mass)?;
        let length = positive("length", length)?;
        let time = mass * length * length / HBAR;
        let energy = HBAR / time;
        if !(time.is_finite() && time > 0.0 && energy.is_finite() && energy > 0.0) {
            return Err(Error::invalid(
                "mass",
                format!("reference time {time:e} s is not representable"),
            ));
        }
        Ok(UnitScaling {
            length,
            mass,
            time,
            energy,
        })
    }

    /// SI value of one scaled unit of the given dimension.
    pub fn unit(&self, dim: Dimension) -> f64 {
        match dim {
            Dimension::Length => self.length,
            Dimension::Time => self.time,
            Dimension::Mass => self.mass,
            Dimension::Energy => self.energy,
            Dimension::Wavenumber => 1.0 / self.length,
            Dimension::Velocity => self.length / self.time,
            Dimension::Acceleration => self.length / (self.time * self.time),
        }
    }

    pub fn to_dimensionless(&self, value: f64, dim: Dimension) -> f64 {
        value / self.unit(dim)
    }

    pub fn from_dimensionless(&self, value: f64, dim: Dimension) -> f64 {
        value * self.unit(dim)
    }
}

/// Canonical scaling from a mass (kg) and a length (m).
pub fn make_scaling(mass: f64, length: f64) -> Result<UnitScaling> {
    UnitScaling::new(mass, length)
}

/// Converts an SI value to scaled units, looking the dimension up by tag.
pub fn to_dimensionless(value: f64, tag: &str, scaling: &UnitScaling) -> Result<f64> {
    Ok(scaling.to_dimensionless(value, tag.parse()?))
}

/// Inverse of [`to_dimensionless`].
pub fn from_dimensionless(value: f64, tag: &str, scaling: &UnitScaling) -> Result<f64> {
    Ok(scaling.from_dimensionless(value, tag.parse()?))
}
