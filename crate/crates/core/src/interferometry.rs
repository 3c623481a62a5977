//! Interferometric detection of the free fall in a whispering-gallery
//! cylinder.
//!
//! A Gaussian pulse expands along the cylinder axis; light coupled out at
//! ±y_out is recombined on a photodiode with a π offset, so the detected
//! fraction is `exp(−ω₀t/Q − y_out²/σ²(t))·(1 − cos Δφ)`, where
//! `Δφ = 2y_out·ω₀gt/c²` is the gravity-induced phase difference. The
//! shot-noise limited SNR counts the detected photons over the integration
//! time.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C, G_EARTH, HBAR};
use crate::error::{positive, Error, Result};

/// How the packet width grows with time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthModel {
    /// `σ² = σ₀² + c²t/(2ω₀n_s²σ₀)`: length² plus length, kept verbatim
    /// so the reference curves can be regenerated.
    #[serde(alias = "paper")]
    PaperVerbatim,
    /// `σ² = σ₀² + [c²t/(2ω₀n_s²σ₀)]²`, free Gaussian spreading with
    /// ħ/m = c²/(n_s²ω₀).
    #[default]
    Corrected,
}

impl WidthModel {
    pub fn other(self) -> Self {
        match self {
            WidthModel::PaperVerbatim => WidthModel::Corrected,
            WidthModel::Corrected => WidthModel::PaperVerbatim,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WidthModel::PaperVerbatim => "paper_verbatim",
            WidthModel::Corrected => "corrected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Vacuum wavelength (m).
    pub lambda0: f64,
    /// Initial packet width (m).
    pub sigma0: f64,
    /// Out-coupling half separation (m).
    pub y_out: f64,
    /// Average optical power (W).
    pub p_avg: f64,
    /// Overall detection efficiency.
    pub eta_det: f64,
    /// Integration time (s).
    pub t_int: f64,
    /// Quality factor.
    pub q: f64,
    pub n_s: f64,
    /// Gravitational acceleration (m/s²).
    pub g: f64,
    pub width_model: WidthModel,
}

impl Default for ExperimentConfig {
    /// CaF₂ cylinder at 1064 nm, 10 cm packet, ±50 cm out-couplers, 1 mW,
    /// 1e-3 detection efficiency, one hour of integration, Q = 7e10.
    fn default() -> Self {
        ExperimentConfig {
            lambda0: 1064e-9,
            sigma0: 0.1,
            y_out: 0.5,
            p_avg: 1e-3,
            eta_det: 1e-3,
            t_int: 3600.0,
            q: 7e10,
            n_s: 1.43,
            g: G_EARTH,
            width_model: WidthModel::Corrected,
        }
    }
}

/// Quality factors of the three reference curves.
pub const FIG2_Q_VALUES: [f64; 3] = [3e10, 5e10, 7e10];

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        positive("lambda0", self.lambda0)?;
        positive("sigma0", self.sigma0)?;
        positive("y_out", self.y_out)?;
        if !(self.p_avg.is_finite() && self.p_avg >= 0.0) {
            return Err(Error::invalid("P_avg", "must be finite and >= 0"));
        }
        if !(self.eta_det > 0.0 && self.eta_det <= 1.0) {
            return Err(Error::invalid("eta_det", "must lie in (0, 1]"));
        }
        positive("T_int", self.t_int)?;
        positive("Q", self.q)?;
        if !(self.n_s.is_finite() && self.n_s >= 1.0) {
            return Err(Error::invalid("n_s", "must be finite and >= 1"));
        }
        positive("g", self.g)?;
        Ok(())
    }

    pub fn omega0(&self) -> f64 {
        2.0 * PI * C / self.lambda0
    }

    /// Photon lifetime Q/ω₀ (s).
    pub fn lifetime(&self) -> f64 {
        self.q / self.omega0()
    }

    pub fn with_q(self, q: f64) -> Self {
        ExperimentConfig { q, ..self }
    }

    pub fn with_width_model(self, width_model: WidthModel) -> Self {
        ExperimentConfig {
            width_model,
            ..self
        }
    }

    /// `c²/(2ω₀n_s²σ₀)`, the expansion coefficient shared by both width models.
    fn expansion_rate(&self) -> f64 {
        C * C / (2.0 * self.omega0() * self.n_s * self.n_s * self.sigma0)
    }

    fn width_squared(&self, t: f64) -> f64 {
        let a = self.expansion_rate() * t;
        match self.width_model {
            WidthModel::PaperVerbatim => self.sigma0 * self.sigma0 + a,
            WidthModel::Corrected => self.sigma0 * self.sigma0 + a * a,
        }
    }

    fn d_width_squared(&self, t: f64) -> f64 {
        let r = self.expansion_rate();
        match self.width_model {
            WidthModel::PaperVerbatim => r,
            WidthModel::Corrected => 2.0 * r * r * t,
        }
    }

    /// Detected photon flux per unit signal fraction, `P η T/(ħω₀)`.
    fn photon_budget(&self) -> f64 {
        self.p_avg * self.eta_det * self.t_int / (HBAR * self.omega0())
    }
}

/// Packet width σ(t) (m).
pub fn mode_width(cfg: &ExperimentConfig, t: f64) -> f64 {
    cfg.width_squared(t).sqrt()
}

/// Gravity-induced phase difference between ±y_out (rad).
pub fn phase_difference(cfg: &ExperimentConfig, t: f64) -> f64 {
    cfg.omega0() * cfg.g * t * 2.0 * cfg.y_out / (C * C)
}

/// Detected signal fraction I(t).
pub fn interference_signal(cfg: &ExperimentConfig, t: f64) -> f64 {
    let envelope = (-cfg.omega0() * t / cfg.q - cfg.y_out * cfg.y_out / cfg.width_squared(t)).exp();
    // 1 − cos Δφ, written without the cancellation at Δφ ~ 1e-5
    let half = 0.5 * phase_difference(cfg, t);
    envelope * 2.0 * half.sin().powi(2)
}

/// Shot-noise limited signal-to-noise ratio `sqrt(I P η T/(ħω₀))`.
pub fn snr(cfg: &ExperimentConfig, t: f64) -> f64 {
    (interference_signal(cfg, t) * cfg.photon_budget()).sqrt()
}

/// d ln I / dt, used to pin the peak.
fn log_signal_slope(cfg: &ExperimentConfig, t: f64) -> f64 {
    let w2 = cfg.width_squared(t);
    let dphi_rate = cfg.omega0() * cfg.g * 2.0 * cfg.y_out / (C * C);
    let half = 0.5 * dphi_rate * t;
    -cfg.omega0() / cfg.q
        + cfg.y_out * cfg.y_out * cfg.d_width_squared(t) / (w2 * w2)
        + dphi_rate * half.cos() / half.sin()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrSample {
    pub t: f64,
    pub signal: f64,
    pub sn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrTrace {
    pub samples: Vec<SnrSample>,
    /// First time with Sn ≥ 1.
    pub t_cross: Option<f64>,
    pub t_peak: f64,
    pub sn_peak: f64,
    /// False when the largest sample sits on the window edge.
    pub peak_interior: bool,
}

impl SnrTrace {
    /// Indices of strict local maxima of Sn over the samples.
    pub fn local_maxima(&self) -> Vec<usize> {
        self.samples
            .windows(3)
            .enumerate()
            .filter(|(_, w)| w[1].sn > w[0].sn && w[1].sn > w[2].sn)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Bisection on a sign change of `f` in `[lo, hi]` down to relative `tol`.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= tol * mid.abs() {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Pins the maximum of Sn between two samples bracketing a local maximum.
fn refine_peak(cfg: &ExperimentConfig, lo: f64, hi: f64) -> (f64, f64) {
    let lo = lo.max(f64::MIN_POSITIVE);
    let t = if log_signal_slope(cfg, lo) > 0.0 && log_signal_slope(cfg, hi) < 0.0 {
        bisect(lo, hi, 1e-14, |t| log_signal_slope(cfg, t))
    } else {
        // degenerate bracket; keep the better endpoint
        if snr(cfg, lo) >= snr(cfg, hi) {
            lo
        } else {
            hi
        }
    };
    (t, snr(cfg, t))
}

/// Uniformly sampled Sn(t) on `[0, t_max]` with the first Sn = 1 crossing and
/// the peak refined between samples.
pub fn snr_trace(cfg: &ExperimentConfig, t_max: f64, n_samples: usize) -> Result<SnrTrace> {
    cfg.validate()?;
    positive("t_max", t_max)?;
    if n_samples < 16 {
        return Err(Error::invalid(
            "n_samples",
            format!("need >= 16, got {n_samples}"),
        ));
    }
    let last = (n_samples - 1) as f64;
    let samples: Vec<SnrSample> = (0..n_samples)
        .map(|i| {
            let t = t_max * i as f64 / last;
            let signal = interference_signal(cfg, t);
            SnrSample {
                t,
                signal,
                sn: (signal * cfg.photon_budget()).sqrt(),
            }
        })
        .collect();

    let t_cross = samples.iter().position(|s| s.sn >= 1.0).map(|i| {
        if i == 0 {
            samples[0].t
        } else {
            bisect(samples[i - 1].t, samples[i].t, 1e-12, |t| snr(cfg, t) - 1.0)
        }
    });

    let (i_max, _) = samples
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, s)| {
            if s.sn > bv {
                (i, s.sn)
            } else {
                (bi, bv)
            }
        });
    let peak_interior = i_max > 0 && i_max < n_samples - 1;
    let (t_peak, sn_peak) = if peak_interior {
        refine_peak(cfg, samples[i_max - 1].t, samples[i_max + 1].t)
    } else {
        (samples[i_max].t, samples[i_max].sn)
    };
    Ok(SnrTrace {
        samples,
        t_cross,
        t_peak,
        sn_peak,
        peak_interior,
    })
}

/// Default trace window: ten photon lifetimes.
pub fn default_t_max(cfg: &ExperimentConfig) -> f64 {
    10.0 * cfg.lifetime()
}

/// Global maximum of Sn(t) over `[1e-3, 1e3]` photon lifetimes.
pub fn peak_snr(cfg: &ExperimentConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let tau = cfg.lifetime();
    let n = 4001;
    let ts: Vec<f64> = (0..n)
        .map(|i| tau * 10f64.powf(-3.0 + 6.0 * i as f64 / (n - 1) as f64))
        .collect();
    let (i_max, _) = ts.iter().map(|&t| snr(cfg, t)).enumerate().fold(
        (0, f64::NEG_INFINITY),
        |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) },
    );
    let lo = ts[i_max.saturating_sub(1)];
    let hi = ts[(i_max + 1).min(n - 1)];
    Ok(refine_peak(cfg, lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectionStep {
    pub iteration: usize,
    pub q_lo: f64,
    pub q_hi: f64,
    pub q_mid: f64,
    pub sn_peak_mid: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QThreshold {
    pub q_min: f64,
    pub sn_peak_lo: f64,
    pub sn_peak_hi: f64,
    pub log: Vec<BisectionStep>,
}

/// Smallest Q whose peak Sn reaches 1, by geometric bisection to relative
/// `1e-4` in Q.
pub fn q_threshold(cfg: &ExperimentConfig, q_lo: f64, q_hi: f64) -> Result<QThreshold> {
    q_threshold_with_tolerance(cfg, q_lo, q_hi, 1e-4)
}

pub fn q_threshold_with_tolerance(
    cfg: &ExperimentConfig,
    q_lo: f64,
    q_hi: f64,
    rel_tol: f64,
) -> Result<QThreshold> {
    positive("q_lo", q_lo)?;
    positive("q_hi", q_hi)?;
    positive("rel_tol", rel_tol)?;
    let peak = |q: f64| peak_snr(&cfg.with_q(q)).map(|(_, s)| s);
    let (sn_lo, sn_hi) = (peak(q_lo)?, peak(q_hi)?);
    if !(q_lo < q_hi && sn_lo < 1.0 && sn_hi > 1.0) {
        return Err(Error::Bracket {
            q_lo,
            q_hi,
            sn_lo,
            sn_hi,
        });
    }
    let (mut lo, mut hi) = (q_lo, q_hi);
    let mut log = Vec::new();
    while hi / lo - 1.0 > rel_tol {
        let mid = (lo * hi).sqrt();
        let sn = peak(mid)?;
        log.push(BisectionStep {
            iteration: log.len() + 1,
            q_lo: lo,
            q_hi: hi,
            q_mid: mid,
            sn_peak_mid: sn,
        });
        if sn < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(QThreshold {
        q_min: (lo * hi).sqrt(),
        sn_peak_lo: sn_lo,
        sn_peak_hi: sn_hi,
        log,
    })
}

/// Side-by-side comparison of the two width models on one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthModelDivergence {
    pub t_peak_paper: f64,
    pub sn_peak_paper: f64,
    pub t_peak_corrected: f64,
    pub sn_peak_corrected: f64,
    /// Sn_peak(paper) / Sn_peak(corrected).
    pub peak_ratio: f64,
    /// max over the window of |log10 Sn_paper − log10 Sn_corrected|.
    pub max_abs_log10_sn_ratio: f64,
    /// σ_paper/σ_corrected at the end of the window.
    pub final_width_ratio: f64,
}

pub fn width_model_divergence(
    cfg: &ExperimentConfig,
    t_max: f64,
    n_samples: usize,
) -> Result<WidthModelDivergence> {
    let paper = cfg.with_width_model(WidthModel::PaperVerbatim);
    let corrected = cfg.with_width_model(WidthModel::Corrected);
    let tp = snr_trace(&paper, t_max, n_samples)?;
    let tc = snr_trace(&corrected, t_max, n_samples)?;
    let max_abs_log10_sn_ratio = tp
        .samples
        .iter()
        .zip(&tc.samples)
        .filter(|(a, b)| a.sn > 0.0 && b.sn > 0.0)
        .map(|(a, b)| (a.sn.log10() - b.sn.log10()).abs())
        .fold(0.0, f64::max);
    Ok(WidthModelDivergence {
        t_peak_paper: tp.t_peak,
        sn_peak_paper: tp.sn_peak,
        t_peak_corrected: tc.t_peak,
        sn_peak_corrected: tc.sn_peak,
        peak_ratio: tp.sn_peak / tc.sn_peak,
        max_abs_log10_sn_ratio,
        final_width_ratio: mode_width(&paper, t_max) / mode_width(&corrected, t_max),
    })
}
