//! Physical constants (CODATA 2018, SI units).

/// Speed of light in vacuum (m/s), exact.
pub const C: f64 = 299_792_458.0;

/// Reduced Planck constant (J·s), exact since the 2019 SI redefinition.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Newtonian gravitational constant (m³·kg⁻¹·s⁻²).
pub const G: f64 = 6.674_30e-11;

/// Default surface gravitational acceleration (m/s²).
pub const G_EARTH: f64 = 9.81;

/// Mass of the earth (kg).
pub const M_EARTH: f64 = 5.9722e24;

/// Mean radius of the earth (m).
pub const R_EARTH: f64 = 6.371e6;
