//! Weak-field gravity as seen by a cavity photon.
//!
//! Time dilation in the weak-field metric appears to a laboratory observer as
//! an inhomogeneous refractive index `n(y) = n_s[1 + g(y_ref − y)/c²]`. The
//! y-dependent part of the rest energy `m c̃² n(y)/n_s` is then a linear
//! potential `m g̃ y` with `g̃ = g/n_s²`, and the standing wavepacket falls on a
//! Newtonian parabola independent of its mass.

use serde::{Deserialize, Serialize};

use crate::constants::{C, G, G_EARTH, HBAR};
use crate::dispersion::{effective_mass, CavitySpec};
use crate::error::{Error, Result};

/// Largest |g(y_ref − y)/c²| accepted by the linearized index.
pub const LINEAR_INDEX_LIMIT: f64 = 1e-4;

/// Largest 2GM/(rc²) for which a point-mass source counts as weak field.
pub const WEAK_FIELD_LIMIT: f64 = 1e-4;

/// Fraction of c̃ above which the non-relativistic free fall is refused.
pub const NONREL_SPEED_FRACTION: f64 = 1e-3;

/// A gravitating point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    /// Mass (kg).
    pub mass: f64,
    /// Distance from its centre (m).
    pub radius: f64,
}

impl PointMass {
    /// Schwarzschild compactness 2GM/(rc²).
    pub fn compactness(&self) -> f64 {
        2.0 * G * self.mass / (self.radius * C * C)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GravityProfile {
    /// Surface gravitational acceleration (m/s²).
    pub g: f64,
    /// Height at which the index equals `n_s` (m).
    pub y_ref: f64,
    /// Background medium index.
    pub n_s: f64,
    pub source: Option<PointMass>,
}

impl Default for GravityProfile {
    fn default() -> Self {
        GravityProfile {
            g: G_EARTH,
            y_ref: 0.0,
            n_s: 1.0,
            source: None,
        }
    }
}

impl GravityProfile {
    pub fn new(g: f64, y_ref: f64, n_s: f64) -> Result<Self> {
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::invalid(
                "g",
                format!("must be finite and >= 0, got {g}"),
            ));
        }
        if !y_ref.is_finite() {
            return Err(Error::invalid("y_ref", "must be finite"));
        }
        if !(n_s.is_finite() && n_s >= 1.0) {
            return Err(Error::invalid(
                "n_s",
                format!("must be finite and >= 1, got {n_s}"),
            ));
        }
        Ok(GravityProfile {
            g,
            y_ref,
            n_s,
            source: None,
        })
    }

    /// Surface field of a point mass, with the index reference placed at the
    /// source radius (the earth-radius offset of the linearized index).
    pub fn from_point_mass(mass: f64, radius: f64, n_s: f64) -> Result<Self> {
        if !(mass.is_finite() && mass >= 0.0 && radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid("source", "need mass >= 0 and radius > 0"));
        }
        let source = PointMass { mass, radius };
        if source.compactness() >= WEAK_FIELD_LIMIT {
            return Err(Error::WeakField(format!(
                "2GM/(rc²) = {:e} is not below {WEAK_FIELD_LIMIT:e}",
                source.compactness()
            )));
        }
        let mut p = GravityProfile::new(G * mass / (radius * radius), radius, n_s)?;
        p.source = Some(source);
        Ok(p)
    }

    /// Renormalized acceleration `g/n_s²` felt by light in the medium.
    pub fn g_tilde(&self) -> f64 {
        self.g / (self.n_s * self.n_s)
    }

    /// False when a point-mass source is present and too compact.
    pub fn weak_field_valid(&self) -> bool {
        self.source
            .is_none_or(|s| s.compactness() < WEAK_FIELD_LIMIT)
    }

    fn linear_term(&self, y: f64) -> Result<f64> {
        let x = self.g * (self.y_ref - y) / (C * C);
        if !(x.abs() < LINEAR_INDEX_LIMIT) {
            return Err(Error::WeakField(format!(
                "|g(y_ref - y)/c²| = {:e} at y = {y} m exceeds {LINEAR_INDEX_LIMIT:e}",
                x.abs()
            )));
        }
        Ok(x)
    }
}

/// Free fall of the standing wavepacket at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreefallState {
    /// Time since release (s).
    pub t: f64,
    /// Displacement from the release point (m), negative below it.
    pub y: f64,
    /// Group velocity (m/s), negative when falling.
    pub v: f64,
    /// Magnitude of the envelope wavenumber (rad/m), `m|v|/ħ`.
    pub k_y: f64,
}

fn check_same_medium(cav: &CavitySpec, p: &GravityProfile) -> Result<()> {
    if (cav.n_s - p.n_s).abs() > 1e-12 * cav.n_s {
        return Err(Error::invalid(
            "n_s",
            format!(
                "cavity index {} differs from gravity-profile index {}",
                cav.n_s, p.n_s
            ),
        ));
    }
    Ok(())
}

/// `dτ/dt = sqrt(1 − 2GM/(rc²))` outside a point mass.
pub fn proper_time_factor(mass: f64, r: f64) -> Result<f64> {
    if !(mass.is_finite() && mass >= 0.0) {
        return Err(Error::invalid(
            "M",
            format!("must be finite and >= 0, got {mass}"),
        ));
    }
    let schwarzschild = 2.0 * G * mass / (C * C);
    if !(r.is_finite() && r > 100.0 * schwarzschild && r > 0.0) {
        return Err(Error::WeakField(format!(
            "r = {r:e} m is not beyond 100 Schwarzschild radii ({:e} m)",
            100.0 * schwarzschild
        )));
    }
    Ok((1.0 - schwarzschild / r).sqrt())
}

/// Linearized gravitational index `n_s[1 + g(y_ref − y)/c²]`.
pub fn gravitational_index(p: &GravityProfile, y: f64) -> Result<f64> {
    Ok(p.n_s * (1.0 + p.linear_term(y)?))
}

/// `n(y) − n_s`, which stays resolvable where `n(y)` itself rounds to `n_s`.
pub fn gravitational_index_offset(p: &GravityProfile, y: f64) -> Result<f64> {
    Ok(p.n_s * p.linear_term(y)?)
}

/// Relative size of the neglected gravitational correction to the kinetic
/// term, `|g(y_ref − y)/c²|`.
pub fn kinetic_correction_magnitude(p: &GravityProfile, y: f64) -> Result<f64> {
    Ok(p.linear_term(y)?.abs())
}

/// Linear potential `m g̃ y` (J), zero at the release point.
pub fn potential_energy(cav: &CavitySpec, p: &GravityProfile, y: f64) -> Result<f64> {
    check_same_medium(cav, p)?;
    p.linear_term(y)?;
    Ok(effective_mass(cav) * p.g_tilde() * y)
}

/// Wavenumber gained after dropping `y_drop` from rest: the positive root of
/// `m g̃ y = ħ²k²/2m`.
pub fn momentum_from_drop(cav: &CavitySpec, p: &GravityProfile, y_drop: f64) -> Result<f64> {
    check_same_medium(cav, p)?;
    if !(y_drop.is_finite() && y_drop >= 0.0) {
        return Err(Error::invalid(
            "y_drop",
            format!("must be >= 0, got {y_drop}"),
        ));
    }
    Ok(effective_mass(cav) / HBAR * (2.0 * p.g_tilde() * y_drop).sqrt())
}

/// Newtonian trajectory `y = −½g̃t²`, `v = −g̃t` of a wavepacket released at rest.
pub fn freefall_trajectory(cav: &CavitySpec, p: &GravityProfile, t: f64) -> Result<FreefallState> {
    check_same_medium(cav, p)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid("t", format!("must be >= 0, got {t}")));
    }
    let g_tilde = p.g_tilde();
    let v = -g_tilde * t;
    let v_max = NONREL_SPEED_FRACTION * cav.light_speed();
    if v.abs() >= v_max {
        return Err(Error::Relativistic {
            t,
            speed: v.abs(),
            t_limit: v_max / g_tilde,
        });
    }
    let y = -0.5 * g_tilde * t * t;
    Ok(FreefallState {
        t,
        y,
        v,
        k_y: momentum_from_drop(cav, p, -y)?,
    })
}

/// Vertical phase gradient `ω₀ g t/c²` (rad/m) of the falling packet; the
/// medium index cancels between the heavier mass and the weaker fall.
pub fn phase_gradient(omega0: f64, p: &GravityProfile, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid("t", format!("must be >= 0, got {t}")));
    }
    Ok(omega0 * p.g * t / (C * C))
}
