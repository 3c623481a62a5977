use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised across the library. The CLI maps each variant onto an exit
/// code through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown dimension tag `{0}`")]
    UnknownDimension(String),

    #[error("weak-field approximation violated: {0}")]
    WeakField(String),

    #[error("non-relativistic domain exceeded: |v| = {speed:e} m/s at t = {t:e} s; the limit |v| < 1e-3·c̃ is reached at t = {t_limit:e} s")]
    Relativistic { t: f64, speed: f64, t_limit: f64 },

    #[error("grid resolution: {0}")]
    GridResolution(String),

    #[error("numerical blow-up: non-finite amplitude after step {step}")]
    NumericalBlowup { step: usize },

    #[error("wavepacket escaped the domain at t = {t:e} s (packet spans [{lo:e}, {hi:e}] m, grid [{y_min:e}, {y_max:e}] m); try a grid of at least [{suggest_min:e}, {suggest_max:e}] m")]
    DomainEscape {
        t: f64,
        lo: f64,
        hi: f64,
        y_min: f64,
        y_max: f64,
        suggest_min: f64,
        suggest_max: f64,
    },

    #[error("wave state has zero norm")]
    ZeroNorm,

    #[error("Q bracket does not straddle Sn_peak = 1: Sn_peak(q_lo = {q_lo:e}) = {sn_lo:e}, Sn_peak(q_hi = {q_hi:e}) = {sn_hi:e}")]
    Bracket {
        q_lo: f64,
        q_hi: f64,
        sn_lo: f64,
        sn_hi: f64,
    },

    #[error("scenario: {path}: {message}")]
    Config { path: String, message: String },

    #[error("{module}: {source}")]
    Module {
        module: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Wraps an error with the name of the module that raised it.
    pub fn in_module(self, module: &'static str) -> Self {
        match self {
            e @ Error::Module { .. } => e,
            e => Error::Module {
                module,
                source: Box::new(e),
            },
        }
    }

    /// Process exit code: 2 validation, 3 numerical domain, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::UnknownDimension(_)
            | Error::GridResolution(_)
            | Error::Bracket { .. }
            | Error::Config { .. } => 2,
            Error::WeakField(_)
            | Error::Relativistic { .. }
            | Error::NumericalBlowup { .. }
            | Error::DomainEscape { .. }
            | Error::ZeroNorm => 3,
            Error::Io { .. } => 4,
            Error::Module { source, .. } => source.exit_code(),
        }
    }
}

/// Returns `Ok(x)` when `x` is finite and strictly positive.
pub(crate) fn positive(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {x}"),
        ))
    }
}
