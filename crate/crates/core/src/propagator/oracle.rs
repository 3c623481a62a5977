//! Closed-form Gaussian solution in a uniform field.
//!
//! For `iħ∂ₜψ = [−ħ²/2m ∂²_y + F y]ψ` with `F = m g̃`, a packet released at
//! rest from `y = 0` is the freely spreading Gaussian translated onto the
//! parabola `−½g̃t²` and multiplied by the plane wave of the accumulated
//! impulse:
//!
//! ```text
//! ψ(y, t) = exp(−i[F t y + F² t³/(6m)]/ħ) · φ_free(y + ½g̃t², t)
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::HBAR;

/// Moments of the exact solution at one time, in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMoments {
    /// ⟨y⟩ (m).
    pub centroid: f64,
    /// Standard deviation of |ψ|² (m).
    pub width: f64,
    /// ⟨k⟩ (rad/m).
    pub mean_k: f64,
    /// ∂arg ψ/∂y at the centroid (rad/m); negative while falling.
    pub phase_gradient: f64,
}

/// Moments of the accelerating Gaussian released at rest from y = 0 with
/// initial width `sigma0`.
pub fn analytic_gaussian_oracle(sigma0: f64, mass: f64, g_tilde: f64, t: f64) -> GaussianMoments {
    let spread = HBAR * t / (2.0 * mass * sigma0 * sigma0);
    let k = -mass * g_tilde * t / HBAR;
    GaussianMoments {
        centroid: -0.5 * g_tilde * t * t,
        width: sigma0 * (1.0 + spread * spread).sqrt(),
        mean_k: k,
        // the spreading chirp is symmetric about the centroid
        phase_gradient: k,
    }
}

/// Complex amplitude (m^-1/2) of the same exact solution at position `y`.
pub fn analytic_gaussian_amplitude(
    sigma0: f64,
    mass: f64,
    g_tilde: f64,
    t: f64,
    y: f64,
) -> Complex64 {
    let force = mass * g_tilde;
    let z = y + 0.5 * g_tilde * t * t;
    let spread = Complex64::new(1.0, HBAR * t / (2.0 * mass * sigma0 * sigma0));
    let prefactor = (2.0 * std::f64::consts::PI * sigma0 * sigma0).powf(-0.25) / spread.sqrt();
    let envelope = (-(z * z) / (4.0 * sigma0 * sigma0 * spread)).exp();
    let phase = -(force * t * y + force * force * t * t * t / (6.0 * mass)) / HBAR;
    prefactor * envelope * Complex64::from_polar(1.0, phase)
}
