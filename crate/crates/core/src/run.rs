//! Command execution and reproducible output artifacts.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dispersion::{dispersion_point, effective_mass, CavitySpec};
use crate::error::{Error, Result};
use crate::gravity::{freefall_trajectory, phase_gradient};
use crate::interferometry::{
    default_t_max, q_threshold, snr_trace, width_model_divergence, ExperimentConfig,
    WidthModelDivergence,
};
use crate::propagator::{
    analytic_gaussian_oracle, canonical_scaling, init_gaussian, propagate, PropagationScenario,
    Trace,
};
use crate::scenario::{DispersionSection, ScenarioFile, Spacing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Dispersion,
    FreefallAnalytic,
    FreefallNumeric,
    Fig2b,
    Qthreshold,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::FreefallAnalytic => "freefall-analytic",
            Command::FreefallNumeric => "freefall-numeric",
            Command::Fig2b => "fig2b",
            Command::Qthreshold => "qthreshold",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub sha256: String,
}

/// Quantities derived from the scenario, recorded for reference.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    /// ω₀ (rad/s).
    pub omega0: Option<f64>,
    /// Vacuum effective mass E₀/c² (kg).
    pub m_par: Option<f64>,
    /// Medium effective mass n_s²E₀/c² (kg).
    pub m_s_par: Option<f64>,
    /// g/n_s² (m/s²).
    pub g_tilde: Option<f64>,
    /// Canonical time unit of the propagator (s).
    pub t_ref: Option<f64>,
}

/// Accuracy diagnostics of a numerical free-fall run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub n_steps: usize,
    pub dt_used: f64,
    pub n_points: usize,
    pub dy: f64,
    /// max |⟨y⟩ + ½g̃t²| / (½g̃t_final²), or absolute (m) when g̃ = 0.
    pub max_centroid_error: f64,
    /// max |σ − σ_exact| / σ_exact.
    pub max_width_error: f64,
    /// max |⟨k⟩ − k_exact| / max(|k_exact(t_final)|, 1/σ₀).
    pub max_mean_k_error: f64,
    /// max |norm − norm₀|.
    pub norm_drift: f64,
    /// max |⟨H⟩ − ⟨H⟩₀| / |⟨H⟩₀|.
    pub energy_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: Command,
    /// Fully defaulted scenario; replaying it reproduces the outputs.
    pub scenario: ScenarioFile,
    pub derived: Derived,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Convergence>,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputFile>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Shortest round-trip decimal; exponent form outside [1e-4, 1e15).
/// Negative zero prints as `0`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(format_float).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

struct OutputDir {
    dir: PathBuf,
    files: Vec<OutputFile>,
}

impl OutputDir {
    fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    /// Writes through a temporary file in the same directory, then renames.
    fn write(&mut self, name: &str, contents: &[u8]) -> Result<()> {
        write_atomic(&self.dir.join(name), contents)?;
        self.files.push(OutputFile {
            file: name.to_string(),
            sha256: hex::encode(Sha256::digest(contents)),
        });
        Ok(())
    }
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

fn require<'a, T>(section: &'a Option<T>, name: &str, cmd: Command) -> Result<&'a T> {
    section
        .as_ref()
        .ok_or_else(|| Error::config(name, format!("section required by `{}`", cmd.name())))
}

fn cavity(scenario: &ScenarioFile, cmd: Command) -> Result<CavitySpec> {
    require(&scenario.cavity, "cavity", cmd)?.spec()
}

fn derive(scenario: &ScenarioFile) -> Derived {
    let cav = scenario
        .cavity
        .as_ref()
        .and_then(|c| c.spec().ok())
        .or_else(|| {
            let e = scenario.experiment.as_ref()?;
            CavitySpec::from_wavelength(e.lambda0.0, e.n_s.0).ok()
        });
    let Some(cav) = cav else {
        return Derived::default();
    };
    let g = scenario
        .gravity_profile(&cav)
        .ok()
        .map(|p| p.g)
        .or_else(|| scenario.experiment.as_ref().map(|e| e.g.0));
    let m = effective_mass(&cav);
    let t_ref = scenario
        .propagation
        .as_ref()
        .and_then(|p| canonical_scaling(m, p.sigma0.0).ok())
        .map(|s| s.time);
    Derived {
        omega0: Some(cav.omega0()),
        m_par: Some(cav.vacuum_mass()),
        m_s_par: Some(m),
        g_tilde: g.map(|g| g / (cav.n_s * cav.n_s)),
        t_ref,
    }
}

/// Runs `command`, writing its outputs and then `manifest.json` into `out_dir`.
pub fn run(command: Command, scenario: &ScenarioFile, out_dir: &Path) -> Result<RunManifest> {
    let start = Instant::now();
    let mut out = OutputDir::create(out_dir)?;
    let convergence = match command {
        Command::Dispersion => run_dispersion(scenario, &mut out).map(|_| None),
        Command::FreefallAnalytic => run_freefall_analytic(scenario, &mut out).map(|_| None),
        Command::FreefallNumeric => run_freefall_numeric(scenario, &mut out).map(Some),
        Command::Fig2b => run_fig2b(scenario, &mut out).map(|_| None),
        Command::Qthreshold => run_qthreshold(scenario, &mut out).map(|_| None),
    }?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command,
        scenario: scenario.clone(),
        derived: derive(scenario),
        convergence,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: out.files,
    };
    write_atomic(&out_dir.join(MANIFEST_FILE), &json(&manifest))?;
    Ok(manifest)
}

fn k_grid(d: &DispersionSection, cav: &CavitySpec) -> Vec<f64> {
    let k_min = d.k_min.0;
    let k_max = d.k_max.map_or(3.0 * cav.rest_wavenumber(), |k| k.0);
    let last = (d.n_points - 1) as f64;
    (0..d.n_points)
        .map(|i| {
            let f = i as f64 / last;
            match d.spacing {
                Spacing::Linear => k_min + f * (k_max - k_min),
                Spacing::Log => k_min * (k_max / k_min).powf(f),
            }
        })
        .collect()
}

fn run_dispersion(scenario: &ScenarioFile, out: &mut OutputDir) -> Result<()> {
    let cav = cavity(scenario, Command::Dispersion)?;
    let section = scenario.dispersion.clone().unwrap_or_default();
    let rows = k_grid(&section, &cav).into_iter().map(|k| {
        let p = dispersion_point(&cav, k);
        vec![p.k_par, p.omega, p.v_g]
    });
    out.write(
        "dispersion.csv",
        csv(&["k_par", "omega", "v_g"], rows).as_bytes(),
    )
}

fn run_freefall_analytic(scenario: &ScenarioFile, out: &mut OutputDir) -> Result<()> {
    let cmd = Command::FreefallAnalytic;
    let cav = cavity(scenario, cmd)?;
    let profile = scenario.gravity_profile(&cav)?;
    let prop = require(&scenario.propagation, "propagation", cmd)?;
    let plan = PropagationScenario {
        mass: effective_mass(&cav),
        g_tilde: profile.g_tilde(),
        dt: prop.dt.0,
        t_final: prop.t_final.0,
        record_stride: scenario.output.stride,
        boundary: prop.boundary,
    };
    let (n_steps, dt) = plan.step_plan();
    let mut rows = Vec::new();
    for i in (0..=n_steps).filter(|i| i % plan.record_stride == 0 || *i == n_steps) {
        let t = i as f64 * dt;
        let s = freefall_trajectory(&cav, &profile, t)
            .map_err(|e| e.in_module("gravitational_optics"))?;
        let pg = phase_gradient(cav.omega0(), &profile, t)
            .map_err(|e| e.in_module("gravitational_optics"))?;
        rows.push(vec![s.t, s.y, s.v, s.k_y, pg]);
    }
    out.write(
        "freefall_analytic.csv",
        csv(&["t", "y", "v", "k_y", "phase_gradient"], rows).as_bytes(),
    )
}

/// Numerical free fall from rest at y = 0, with accuracy diagnostics against
/// the exact accelerating Gaussian.
pub fn simulate_freefall(scenario: &ScenarioFile) -> Result<(Trace, Convergence)> {
    let cmd = Command::FreefallNumeric;
    let cav = cavity(scenario, cmd)?;
    let profile = scenario.gravity_profile(&cav)?;
    let prop = require(&scenario.propagation, "propagation", cmd)?;
    let grid = prop.grid()?;
    let mass = effective_mass(&cav);
    let sigma0 = prop.sigma0.0;
    let plan = PropagationScenario {
        mass,
        g_tilde: profile.g_tilde(),
        dt: prop.dt.0,
        t_final: prop.t_final.0,
        record_stride: scenario.output.stride,
        boundary: prop.boundary,
    };
    let module = |e: Error| e.in_module("wavepacket_propagator");
    let scaling = canonical_scaling(mass, sigma0).map_err(module)?;
    let state = init_gaussian(&grid, sigma0, 0.0, 0.0, scaling).map_err(module)?;
    let (_, trace) = propagate(&state, &plan).map_err(module)?;

    let (n_steps, dt_used) = plan.step_plan();
    let g = plan.g_tilde;
    let fall = 0.5 * g * plan.t_final * plan.t_final;
    let k_scale = (mass * g * plan.t_final / crate::constants::HBAR)
        .abs()
        .max(1.0 / sigma0);
    let first = trace.records[0];
    let mut c = Convergence {
        n_steps,
        dt_used,
        n_points: grid.n_points,
        dy: grid.dy(),
        max_centroid_error: 0.0,
        max_width_error: 0.0,
        max_mean_k_error: 0.0,
        norm_drift: 0.0,
        energy_drift: 0.0,
    };
    for r in &trace.records {
        let exact = analytic_gaussian_oracle(sigma0, mass, g, r.t);
        let dc = (r.centroid - exact.centroid).abs();
        c.max_centroid_error = c
            .max_centroid_error
            .max(if fall > 0.0 { dc / fall } else { dc });
        c.max_width_error = c
            .max_width_error
            .max((r.width - exact.width).abs() / exact.width);
        c.max_mean_k_error = c
            .max_mean_k_error
            .max((r.mean_k - exact.mean_k).abs() / k_scale);
        c.norm_drift = c.norm_drift.max((r.norm - first.norm).abs());
        c.energy_drift = c
            .energy_drift
            .max((r.energy - first.energy).abs() / first.energy.abs());
    }
    Ok((trace, c))
}

fn run_freefall_numeric(scenario: &ScenarioFile, out: &mut OutputDir) -> Result<Convergence> {
    let (trace, convergence) = simulate_freefall(scenario)?;
    let rows = trace.records.iter().map(|r| {
        vec![
            r.t,
            r.centroid,
            r.width,
            r.mean_k,
            r.norm,
            r.energy,
            r.phase_gradient,
        ]
    });
    let header = [
        "t_si",
        "y_si",
        "sigma_si",
        "k_si",
        "norm",
        "energy_si",
        "phase_grad_si",
    ];
    out.write("freefall_numeric.csv", csv(&header, rows).as_bytes())?;
    Ok(convergence)
}

/// Per-Q entry of the fig2b summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2bCurve {
    #[serde(rename = "Q")]
    pub q: f64,
    pub file: String,
    pub t_max: f64,
    pub t_cross: Option<f64>,
    pub t_peak: f64,
    pub sn_peak: f64,
    pub peak_interior: bool,
    pub width_model_divergence: WidthModelDivergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2bSummary {
    pub width_model: String,
    pub curves: Vec<Fig2bCurve>,
}

fn q_file_name(q: f64) -> String {
    format!("fig2b_Q{q:e}.csv")
}

fn run_fig2b(scenario: &ScenarioFile, out: &mut OutputDir) -> Result<()> {
    let exp = require(&scenario.experiment, "experiment", Command::Fig2b)?;
    let configs = exp.configs()?;
    let module = |e: Error| e.in_module("interferometry");
    let results: Vec<(ExperimentConfig, f64, _, _)> = configs
        .par_iter()
        .map(|cfg| {
            let t_max = exp.t_max.map_or_else(|| default_t_max(cfg), |t| t.0);
            let trace = snr_trace(cfg, t_max, exp.n_samples).map_err(module)?;
            let div = width_model_divergence(cfg, t_max, exp.n_samples).map_err(module)?;
            Ok((*cfg, t_max, trace, div))
        })
        .collect::<Result<_>>()?;

    let mut curves = Vec::new();
    for (cfg, t_max, trace, div) in results {
        let file = q_file_name(cfg.q);
        let rows = trace
            .samples
            .iter()
            .step_by(scenario.output.stride)
            .map(|s| vec![s.t, s.signal, s.sn]);
        out.write(&file, csv(&["t", "I", "Sn"], rows).as_bytes())?;
        curves.push(Fig2bCurve {
            q: cfg.q,
            file,
            t_max,
            t_cross: trace.t_cross,
            t_peak: trace.t_peak,
            sn_peak: trace.sn_peak,
            peak_interior: trace.peak_interior,
            width_model_divergence: div,
        });
    }
    let summary = Fig2bSummary {
        width_model: exp.width_model.label().to_string(),
        curves,
    };
    out.write("fig2b_summary.json", &json(&summary))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QThresholdReport {
    pub width_model: String,
    pub q_lo: f64,
    pub q_hi: f64,
    pub q_min: f64,
    pub sn_peak_lo: f64,
    pub sn_peak_hi: f64,
    pub iterations: usize,
}

fn run_qthreshold(scenario: &ScenarioFile, out: &mut OutputDir) -> Result<()> {
    let exp = require(&scenario.experiment, "experiment", Command::Qthreshold)?;
    let bracket = scenario.qthreshold.clone().unwrap_or_default();
    let cfg = exp.configs()?[0];
    let r = q_threshold(&cfg, bracket.q_lo.0, bracket.q_hi.0)
        .map_err(|e| e.in_module("interferometry"))?;
    let mut log = String::from("iteration,q_lo,q_hi,q_mid,sn_peak_mid\n");
    for s in &r.log {
        let _ = writeln!(
            log,
            "{},{},{},{},{}",
            s.iteration,
            format_float(s.q_lo),
            format_float(s.q_hi),
            format_float(s.q_mid),
            format_float(s.sn_peak_mid)
        );
    }
    out.write("qthreshold_log.csv", log.as_bytes())?;
    let report = QThresholdReport {
        width_model: cfg.width_model.label().to_string(),
        q_lo: bracket.q_lo.0,
        q_hi: bracket.q_hi.0,
        q_min: r.q_min,
        sn_peak_lo: r.sn_peak_lo,
        sn_peak_hi: r.sn_peak_hi,
        iterations: r.log.len(),
    };
    out.write("qthreshold.json", &json(&report))
}
