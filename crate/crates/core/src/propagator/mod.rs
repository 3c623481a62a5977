//! Split-step spectral propagation of the cavity-photon envelope.
//!
//! The non-relativistic limit of the transverse Klein-Gordon equation with the
//! gravitational index is a Schrödinger equation for the envelope `u(y)`:
//!
//! ```text
//! iħ ∂ₜu = [−ħ²/(2m) ∂²_y + m g̃ y] u
//! ```
//!
//! It is integrated by Strang splitting on a periodic grid: half a potential
//! kick in position space, a full kinetic phase in Fourier space, another half
//! kick. Everything inside this module runs in the canonical scaling of
//! [`UnitScaling`] (ħ = 1); public inputs and outputs are SI.

mod fft;
mod oracle;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::units::{Dimension, UnitScaling};
use fft::{unit_phasor, Radix2};

pub use oracle::{analytic_gaussian_amplitude, analytic_gaussian_oracle, GaussianMoments};

/// Packet half-extent, in widths, that must stay inside a periodic domain.
pub const EDGE_GUARD_WIDTHS: f64 = 4.0;

/// Uniform periodic grid along the vertical axis (SI metres).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub y_min: f64,
    pub y_max: f64,
    pub n_points: usize,
}

impl Grid1D {
    pub fn new(y_min: f64, y_max: f64, n_points: usize) -> Result<Self> {
        if !(y_min.is_finite() && y_max.is_finite() && y_max > y_min) {
            return Err(Error::GridResolution(format!(
                "need finite y_max > y_min, got [{y_min}, {y_max}]"
            )));
        }
        if n_points < 64 || !n_points.is_power_of_two() {
            return Err(Error::GridResolution(format!(
                "n_points must be a power of two >= 64, got {n_points}"
            )));
        }
        Ok(Grid1D {
            y_min,
            y_max,
            n_points,
        })
    }

    pub fn extent(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn dy(&self) -> f64 {
        self.extent() / self.n_points as f64
    }

    pub fn position(&self, i: usize) -> f64 {
        self.y_min + i as f64 * self.dy()
    }
}

/// Envelope samples on a grid. Amplitudes are stored in scaled units with
/// `Σ|u|² dy = 1` at preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub grid: Grid1D,
    pub amplitudes: Vec<Complex64>,
    /// Simulation time (s).
    pub t: f64,
    pub scaling: UnitScaling,
}

impl WaveState {
    /// Grid positions in scaled units.
    fn scaled_positions(&self) -> Vec<f64> {
        let y0 = self
            .scaling
            .to_dimensionless(self.grid.y_min, Dimension::Length);
        let dy = self.scaled_dy();
        (0..self.grid.n_points)
            .map(|i| y0 + i as f64 * dy)
            .collect()
    }

    fn scaled_dy(&self) -> f64 {
        self.scaling
            .to_dimensionless(self.grid.dy(), Dimension::Length)
    }

    /// Amplitudes in SI normalization (m^-1/2).
    pub fn amplitudes_si(&self) -> Vec<Complex64> {
        let f = self.scaling.length.sqrt().recip();
        self.amplitudes.iter().map(|a| a * f).collect()
    }

    /// Multiplies the envelope by `exp(i q y)`, q in rad/m.
    pub fn boost(&mut self, q: f64) {
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, q * self.grid.position(i));
        }
    }

    fn check(&self) -> Result<()> {
        if self.amplitudes.len() != self.grid.n_points {
            return Err(Error::invalid("amplitudes", "length differs from grid"));
        }
        if self
            .amplitudes
            .iter()
            .any(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::NumericalBlowup { step: 0 });
        }
        Ok(())
    }
}

/// Canonical scaling for a propagation: ħ = m = σ₀ = 1.
pub fn canonical_scaling(mass: f64, sigma0: f64) -> Result<UnitScaling> {
    UnitScaling::new(mass, sigma0)
}

/// Normalized Gaussian `exp(−(y−y_c)²/(4σ₀²) + i k₀ y)`; the standard
/// deviation of |u|² is σ₀.
pub fn init_gaussian(
    grid: &Grid1D,
    sigma0: f64,
    y_center: f64,
    k0: f64,
    scaling: UnitScaling,
) -> Result<WaveState> {
    positive("sigma0", sigma0)?;
    if !(4.0 * sigma0 < grid.extent()) {
        return Err(Error::GridResolution(format!(
            "4·sigma0 = {} m does not fit in the domain extent {} m",
            4.0 * sigma0,
            grid.extent()
        )));
    }
    if !(sigma0 > 4.0 * grid.dy()) {
        return Err(Error::GridResolution(format!(
            "sigma0 = {sigma0} m is not resolved by dy = {} m (need sigma0 > 4·dy)",
            grid.dy()
        )));
    }
    if !(y_center >= grid.y_min && y_center <= grid.y_max) || !k0.is_finite() {
        return Err(Error::invalid("y_center", "must lie inside the grid"));
    }
    let mut amplitudes: Vec<Complex64> = (0..grid.n_points)
        .map(|i| {
            let y = grid.position(i);
            let z = (y - y_center) / sigma0;
            Complex64::from_polar((-0.25 * z * z).exp(), k0 * y)
        })
        .collect();
    let dy = scaling.to_dimensionless(grid.dy(), Dimension::Length);
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * dy;
    let f = norm.sqrt().recip();
    amplitudes.iter_mut().for_each(|a| *a *= f);
    Ok(WaveState {
        grid: *grid,
        amplitudes,
        t: 0.0,
        scaling,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    /// Smooth imaginary potential of the given width (m) and peak rate (1/s)
    /// at both edges.
    Absorbing {
        width: f64,
        strength: f64,
    },
}

/// Physical and numerical parameters of one propagation (SI).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationScenario {
    /// Effective mass (kg).
    pub mass: f64,
    /// Renormalized gravity g/n_s² (m/s²).
    pub g_tilde: f64,
    /// Requested time step (s). The step actually used divides `t_final`.
    pub dt: f64,
    pub t_final: f64,
    /// Steps between recorded trace samples.
    pub record_stride: usize,
    pub boundary: Boundary,
}

impl PropagationScenario {
    fn validate(&self, grid: &Grid1D) -> Result<()> {
        positive("mass", self.mass)?;
        if !(self.g_tilde.is_finite() && self.g_tilde >= 0.0) {
            return Err(Error::invalid("g_tilde", "must be finite and >= 0"));
        }
        positive("dt", self.dt)?;
        if !(self.t_final.is_finite() && self.t_final >= self.dt) {
            return Err(Error::invalid("t_final", "must be >= dt"));
        }
        if self.record_stride == 0 {
            return Err(Error::invalid("record_stride", "must be >= 1"));
        }
        if let Boundary::Absorbing { width, strength } = self.boundary {
            positive("boundary.width", width)?;
            if !(width < 0.25 * grid.extent()) {
                return Err(Error::invalid(
                    "boundary.width",
                    "absorbing layer must be narrower than a quarter of the domain",
                ));
            }
            if !(strength.is_finite() && strength >= 0.0) {
                return Err(Error::invalid("boundary.strength", "must be >= 0"));
            }
        }
        Ok(())
    }

    /// Number of steps and the step size that lands exactly on `t_final`.
    pub fn step_plan(&self) -> (usize, f64) {
        let n = (self.t_final / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_final / n as f64)
    }
}

/// One sample of the propagation trace (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub centroid: f64,
    pub width: f64,
    pub mean_k: f64,
    pub norm: f64,
    pub energy: f64,
    pub phase_gradient: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

/// Reusable FFT plans and phase tables for a grid/scenario pair.
pub struct Propagator {
    fft: Radix2,
    ifft: Radix2,
    spectrum: Vec<Complex64>,
    half_kick: Vec<Complex64>,
    drift: Vec<Complex64>,
    wavenumbers: Vec<f64>,
    positions: Vec<f64>,
    mass: f64,
    force: f64,
    dt_si: f64,
    n_steps: usize,
    steps_taken: usize,
    boundary: Boundary,
}

fn wavenumbers(n: usize, dy: f64) -> Vec<f64> {
    let dk = 2.0 * PI / (n as f64 * dy);
    (0..n)
        .map(|j| {
            let j = if j < n / 2 {
                j as f64
            } else {
                j as f64 - n as f64
            };
            j * dk
        })
        .collect()
}

impl Propagator {
    pub fn new(state: &WaveState, scenario: &PropagationScenario) -> Result<Self> {
        state.check()?;
        scenario.validate(&state.grid)?;
        let s = &state.scaling;
        let n = state.grid.n_points;
        let (n_steps, dt_si) = scenario.step_plan();
        let dt = s.to_dimensionless(dt_si, Dimension::Time);
        let mass = s.to_dimensionless(scenario.mass, Dimension::Mass);
        let force = mass * s.to_dimensionless(scenario.g_tilde, Dimension::Acceleration);
        let positions = state.scaled_positions();
        let wavenumbers = wavenumbers(n, state.scaled_dy());

        let absorb = |i: usize| -> f64 {
            match scenario.boundary {
                Boundary::Periodic => 1.0,
                Boundary::Absorbing { width, strength } => {
                    let y = state.grid.position(i);
                    let d = (y - state.grid.y_min).min(state.grid.y_max - y);
                    if d >= width {
                        1.0
                    } else {
                        let profile = (0.5 * PI * d / width).cos().powi(2);
                        (-0.5 * strength * profile * dt_si).exp()
                    }
                }
            }
        };
        let half_kick = positions
            .iter()
            .enumerate()
            .map(|(i, &y)| unit_phasor(-0.5 * force * y * dt) * absorb(i))
            .collect();
        let inv_n = 1.0 / n as f64;
        let drift = wavenumbers
            .iter()
            .map(|&k| unit_phasor(-0.5 * k * k / mass * dt) * inv_n)
            .collect();

        Ok(Propagator {
            fft: Radix2::new(n, false),
            ifft: Radix2::new(n, true),
            spectrum: vec![Complex64::default(); n],
            half_kick,
            drift,
            wavenumbers,
            positions,
            mass,
            force,
            dt_si,
            n_steps,
            steps_taken: 0,
            boundary: scenario.boundary,
        })
    }

    /// Step size actually used (s).
    pub fn dt(&self) -> f64 {
        self.dt_si
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// One Strang step: half kick, kinetic drift in k-space, half kick.
    pub fn step(&mut self, state: &mut WaveState) -> Result<()> {
        let u = &mut state.amplitudes;
        for (a, k) in u.iter_mut().zip(&self.half_kick) {
            *a *= k;
        }
        self.fft.process(u);
        for (a, d) in u.iter_mut().zip(&self.drift) {
            *a *= d;
        }
        self.ifft.process(u);
        for (a, k) in u.iter_mut().zip(&self.half_kick) {
            *a *= k;
        }
        self.steps_taken += 1;
        state.t = self.steps_taken as f64 * self.dt_si;
        if u.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NumericalBlowup {
                step: self.steps_taken,
            });
        }
        Ok(())
    }

    /// Norm, centroid and width in scaled units.
    fn position_moments(&self, state: &WaveState) -> Result<(f64, f64, f64)> {
        let dy = state.scaled_dy();
        let (mut n0, mut n1) = (0.0, 0.0);
        for (a, y) in state.amplitudes.iter().zip(&self.positions) {
            let p = a.norm_sqr();
            n0 += p;
            n1 += p * y;
        }
        if !(n0 > 0.0) {
            return Err(Error::ZeroNorm);
        }
        let mean = n1 / n0;
        let var = state
            .amplitudes
            .iter()
            .zip(&self.positions)
            .map(|(a, y)| a.norm_sqr() * (y - mean) * (y - mean))
            .sum::<f64>()
            / n0;
        Ok((n0 * dy, mean, var.sqrt()))
    }

    fn check_edges(&self, state: &WaveState) -> Result<()> {
        if self.boundary != Boundary::Periodic {
            return Ok(());
        }
        let (_, mean, width) = self.position_moments(state)?;
        let s = &state.scaling;
        let centre = s.from_dimensionless(mean, Dimension::Length);
        let half = EDGE_GUARD_WIDTHS * s.from_dimensionless(width, Dimension::Length);
        let (lo, hi) = (centre - half, centre + half);
        let g = &state.grid;
        if lo < g.y_min || hi > g.y_max {
            let pad = 2.0 * half;
            return Err(Error::DomainEscape {
                t: state.t,
                lo,
                hi,
                y_min: g.y_min,
                y_max: g.y_max,
                suggest_min: g.y_min.min(lo - pad),
                suggest_max: g.y_max.max(hi + pad),
            });
        }
        Ok(())
    }

    /// Expectation values of the current state, converted to SI.
    pub fn observables(&mut self, state: &WaveState) -> Result<TraceRecord> {
        let (norm, mean, width) = self.position_moments(state)?;

        self.spectrum.copy_from_slice(&state.amplitudes);
        self.fft.process(&mut self.spectrum);
        let (mut p0, mut p1, mut p2) = (0.0, 0.0, 0.0);
        for (a, &k) in self.spectrum.iter().zip(&self.wavenumbers) {
            let p = a.norm_sqr();
            p0 += p;
            p1 += p * k;
            p2 += p * k * k;
        }
        let mean_k = p1 / p0;
        let kinetic = p2 / p0 / (2.0 * self.mass);
        let energy = kinetic + self.force * mean;

        let phase_gradient = centroid_phase_gradient(state, &self.positions, mean);

        let s = &state.scaling;
        Ok(TraceRecord {
            t: state.t,
            centroid: s.from_dimensionless(mean, Dimension::Length),
            width: s.from_dimensionless(width, Dimension::Length),
            mean_k: s.from_dimensionless(mean_k, Dimension::Wavenumber),
            norm,
            energy: s.from_dimensionless(energy, Dimension::Energy),
            phase_gradient: s.from_dimensionless(phase_gradient, Dimension::Wavenumber),
        })
    }
}

/// ∂arg u/∂y at `centroid` from a least-squares quadratic through the
/// unwrapped phase of the five samples nearest to it. Scaled units.
fn centroid_phase_gradient(state: &WaveState, positions: &[f64], centroid: f64) -> f64 {
    let n = positions.len();
    let dy = state.scaled_dy();
    let nearest = ((centroid - positions[0]) / dy).round();
    let nearest = nearest.clamp(0.0, (n - 1) as f64) as usize;
    let at = |offset: isize| {
        state.amplitudes[(nearest as isize + offset).rem_euclid(n as isize) as usize]
    };

    let mut phase = [0.0f64; 5];
    for j in 1..5 {
        let step = (at(j as isize - 2) * at(j as isize - 3).conj()).arg();
        phase[j] = phase[j - 1] + step;
    }
    // x ∈ {−2..2}: slope Σxφ/10, curvature Σ(x²−2)φ/14
    let (mut slope, mut curv) = (0.0, 0.0);
    for (j, p) in phase.iter().enumerate() {
        let x = j as f64 - 2.0;
        slope += x * p;
        curv += (x * x - 2.0) * p;
    }
    slope /= 10.0;
    curv /= 14.0;
    let offset = (centroid - positions[nearest]) / dy;
    (slope + 2.0 * curv * offset) / dy
}

/// Expectation values of `state` under the Hamiltonian of `scenario`.
pub fn observables(state: &WaveState, scenario: &PropagationScenario) -> Result<TraceRecord> {
    Propagator::new(state, scenario)?.observables(state)
}

/// Advances `state` by one step of `scenario`'s step plan.
pub fn step(state: &WaveState, scenario: &PropagationScenario) -> Result<WaveState> {
    let mut next = state.clone();
    let mut p = Propagator::new(state, scenario)?;
    p.steps_taken = (state.t / p.dt_si).round() as usize;
    p.step(&mut next)?;
    next.t = state.t + p.dt_si;
    Ok(next)
}

/// Propagates to `scenario.t_final`, recording observables every
/// `record_stride` steps and at the final step.
pub fn propagate(state: &WaveState, scenario: &PropagationScenario) -> Result<(WaveState, Trace)> {
    let mut p = Propagator::new(state, scenario)?;
    let mut state = state.clone();
    state.t = 0.0;
    let mut trace = Trace::default();
    p.check_edges(&state)?;
    trace.records.push(p.observables(&state)?);
    for i in 1..=p.n_steps {
        p.step(&mut state)?;
        p.check_edges(&state)?;
        if i % scenario.record_stride == 0 || i == p.n_steps {
            trace.records.push(p.observables(&state)?);
        }
    }
    Ok((state, trace))
}
