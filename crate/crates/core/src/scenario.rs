//! JSON scenario files.
//!
//! Every value is a plain SI number. Unknown keys are rejected, and each
//! violation is reported with the dotted path of the offending key.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::dispersion::CavitySpec;
use crate::error::{Error, Result};
use crate::gravity::GravityProfile;
use crate::interferometry::{ExperimentConfig, WidthModel, FIG2_Q_VALUES};
use crate::propagator::{Boundary, Grid1D};

/// A plain SI number. Strings such as `"1064 nm"` are refused.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Si(pub f64);

impl<'de> Deserialize<'de> for Si {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(Si(x)),
            Raw::Text(s) => Err(de::Error::custom(format!(
                "unit suffixes are not accepted (got {s:?}); give a plain number in SI units"
            ))),
        }
    }
}

impl From<f64> for Si {
    fn from(x: f64) -> Self {
        Si(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<Si>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<Si>,
    #[serde(default = "one")]
    pub n_s: Si,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Si>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    #[serde(rename = "M")]
    pub mass: Si,
    pub r: Si,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GravitySection {
    #[serde(default = "earth_g")]
    pub g: Si,
    /// Defaults to the cavity index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_s: Option<Si>,
    #[serde(default = "zero")]
    pub y_ref: Si,
    /// When present, g and y_ref are derived from the point mass.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceSection>,
}

impl Default for GravitySection {
    fn default() -> Self {
        GravitySection {
            g: earth_g(),
            n_s: None,
            y_ref: zero(),
            source: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub y_min: Si,
    pub y_max: Si,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    pub grid: GridSection,
    pub dt: Si,
    pub t_final: Si,
    pub sigma0: Si,
    #[serde(default = "periodic")]
    pub boundary: Boundary,
}

/// One quality factor or a list of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QValues {
    One(Si),
    Many(Vec<Si>),
}

impl QValues {
    pub fn values(&self) -> Vec<f64> {
        match self {
            QValues::One(q) => vec![q.0],
            QValues::Many(qs) => qs.iter().map(|q| q.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(default = "fig2_lambda0")]
    pub lambda0: Si,
    #[serde(default = "fig2_sigma0")]
    pub sigma0: Si,
    #[serde(default = "fig2_y_out")]
    pub y_out: Si,
    #[serde(rename = "P_avg", default = "fig2_power")]
    pub p_avg: Si,
    #[serde(default = "fig2_eta")]
    pub eta_det: Si,
    #[serde(rename = "T_int", default = "fig2_t_int")]
    pub t_int: Si,
    #[serde(rename = "Q", default = "fig2_q")]
    pub q: QValues,
    #[serde(default = "fig2_n_s")]
    pub n_s: Si,
    #[serde(default = "earth_g")]
    pub g: Si,
    #[serde(default)]
    pub width_model: WidthModel,
    /// Trace window (s); ten photon lifetimes per Q when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<Si>,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all experiment fields have defaults")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionSection {
    #[serde(default = "zero")]
    pub k_min: Si,
    /// Three rest wavenumbers when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<Si>,
    #[serde(default = "default_k_points")]
    pub n_points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Default for DispersionSection {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all dispersion fields have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QThresholdSection {
    #[serde(default = "default_q_lo")]
    pub q_lo: Si,
    #[serde(default = "default_q_hi")]
    pub q_hi: Si,
}

impl Default for QThresholdSection {
    fn default() -> Self {
        QThresholdSection {
            q_lo: default_q_lo(),
            q_hi: default_q_hi(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    /// Steps (or samples) between written rows.
    #[serde(default = "default_stride")]
    pub stride: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            directory: None,
            stride: default_stride(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity: Option<CavitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gravity: Option<GravitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagation: Option<PropagationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<DispersionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qthreshold: Option<QThresholdSection>,
    #[serde(default)]
    pub output: OutputSection,
}

fn one() -> Si {
    Si(1.0)
}
fn zero() -> Si {
    Si(0.0)
}
fn earth_g() -> Si {
    Si(crate::constants::G_EARTH)
}
fn periodic() -> Boundary {
    Boundary::Periodic
}
fn fig2_lambda0() -> Si {
    Si(ExperimentConfig::default().lambda0)
}
fn fig2_sigma0() -> Si {
    Si(ExperimentConfig::default().sigma0)
}
fn fig2_y_out() -> Si {
    Si(ExperimentConfig::default().y_out)
}
fn fig2_power() -> Si {
    Si(ExperimentConfig::default().p_avg)
}
fn fig2_eta() -> Si {
    Si(ExperimentConfig::default().eta_det)
}
fn fig2_t_int() -> Si {
    Si(ExperimentConfig::default().t_int)
}
fn fig2_n_s() -> Si {
    Si(ExperimentConfig::default().n_s)
}
fn fig2_q() -> QValues {
    QValues::Many(FIG2_Q_VALUES.iter().map(|&q| Si(q)).collect())
}
fn default_samples() -> usize {
    2001
}
fn default_k_points() -> usize {
    201
}
fn default_q_lo() -> Si {
    Si(1e9)
}
fn default_q_hi() -> Si {
    Si(1e12)
}
fn default_stride() -> usize {
    1
}

/// Re-labels a module error with a scenario key path.
fn at(path: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => Error::config(format!("{path}.{name}"), reason),
        Error::Config { .. } => e,
        other => Error::config(path, other.to_string()),
    }
}

impl CavitySection {
    pub fn spec(&self) -> Result<CavitySpec> {
        let cav = match (self.thickness, self.j, self.lambda0) {
            (Some(l), Some(j), None) => CavitySpec::from_geometry(l.0, j, self.n_s.0),
            (None, None, Some(lambda0)) => CavitySpec::from_wavelength(lambda0.0, self.n_s.0),
            (_, _, Some(_)) => {
                return Err(Error::config(
                    "cavity",
                    "both (L, j) and lambda0 given; specify exactly one",
                ))
            }
            (Some(_), None, None) => return Err(Error::config("cavity.j", "L given without j")),
            (None, Some(_), None) => return Err(Error::config("cavity.L", "j given without L")),
            (None, None, None) => {
                return Err(Error::config(
                    "cavity",
                    "specify exactly one of (L, j) or lambda0",
                ))
            }
        }
        .map_err(|e| at("cavity", e))?;
        match self.q {
            Some(q) => cav.with_q(q.0).map_err(|e| at("cavity", e)),
            None => Ok(cav),
        }
    }
}

impl GravitySection {
    pub fn profile(&self, n_s: f64) -> Result<GravityProfile> {
        if let Some(ns) = self.n_s {
            if ns.0 != n_s {
                return Err(Error::config(
                    "gravity.n_s",
                    format!("{} differs from the cavity index {n_s}", ns.0),
                ));
            }
        }
        match &self.source {
            Some(src) => GravityProfile::from_point_mass(src.mass.0, src.r.0, n_s)
                .map_err(|e| at("gravity.source", e)),
            None => GravityProfile::new(self.g.0, self.y_ref.0, n_s).map_err(|e| at("gravity", e)),
        }
    }
}

impl PropagationSection {
    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.grid.y_min.0, self.grid.y_max.0, self.grid.n_points)
            .map_err(|e| at("propagation.grid", e))
    }
}

impl ExperimentSection {
    /// One configuration per listed Q.
    pub fn configs(&self) -> Result<Vec<ExperimentConfig>> {
        let qs = self.q.values();
        if qs.is_empty() {
            return Err(Error::config(
                "experiment.Q",
                "at least one quality factor required",
            ));
        }
        qs.into_iter()
            .map(|q| {
                let cfg = ExperimentConfig {
                    lambda0: self.lambda0.0,
                    sigma0: self.sigma0.0,
                    y_out: self.y_out.0,
                    p_avg: self.p_avg.0,
                    eta_det: self.eta_det.0,
                    t_int: self.t_int.0,
                    q,
                    n_s: self.n_s.0,
                    g: self.g.0,
                    width_model: self.width_model,
                };
                cfg.validate().map_err(|e| at("experiment", e))?;
                Ok(cfg)
            })
            .collect()
    }
}

impl ScenarioFile {
    pub fn gravity_profile(&self, cav: &CavitySpec) -> Result<GravityProfile> {
        self.gravity.clone().unwrap_or_default().profile(cav.n_s)
    }

    fn validate(&self) -> Result<()> {
        let cav = self.cavity.as_ref().map(CavitySection::spec).transpose()?;
        if let Some(g) = &self.gravity {
            let n_s = cav.map_or_else(|| g.n_s.map_or(1.0, |n| n.0), |c| c.n_s);
            g.profile(n_s)?;
        }
        if let Some(p) = &self.propagation {
            p.grid()?;
            for (name, v) in [
                ("dt", p.dt.0),
                ("t_final", p.t_final.0),
                ("sigma0", p.sigma0.0),
            ] {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::config(format!("propagation.{name}"), "must be > 0"));
                }
            }
            if p.t_final.0 < p.dt.0 {
                return Err(Error::config("propagation.t_final", "must be >= dt"));
            }
        }
        if let Some(e) = &self.experiment {
            e.configs()?;
            if e.n_samples < 16 {
                return Err(Error::config("experiment.n_samples", "must be >= 16"));
            }
            if let Some(t) = e.t_max {
                if !(t.0.is_finite() && t.0 > 0.0) {
                    return Err(Error::config("experiment.t_max", "must be > 0"));
                }
            }
        }
        if let Some(d) = &self.dispersion {
            if d.n_points < 2 {
                return Err(Error::config("dispersion.n_points", "must be >= 2"));
            }
            if d.spacing == Spacing::Log && !(d.k_min.0 > 0.0) {
                return Err(Error::config(
                    "dispersion.k_min",
                    "log spacing needs k_min > 0",
                ));
            }
            if let Some(k_max) = d.k_max {
                if !(k_max.0 > d.k_min.0) {
                    return Err(Error::config("dispersion.k_max", "must exceed k_min"));
                }
            }
        }
        if let Some(q) = &self.qthreshold {
            if !(q.q_lo.0 > 0.0 && q.q_hi.0 > 0.0) {
                return Err(Error::config("qthreshold", "q_lo and q_hi must be > 0"));
            }
        }
        if self.output.stride == 0 {
            return Err(Error::config("output.stride", "must be >= 1"));
        }
        Ok(())
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile> {
    let mut de = serde_json::Deserializer::from_str(text);
    let scenario: ScenarioFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." {
            "<root>".to_string()
        } else {
            path
        };
        Error::config(path, e.into_inner().to_string())
    })?;
    scenario.validate()?;
    Ok(scenario)
}
