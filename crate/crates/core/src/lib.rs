//! Photons brought to rest in a planar or whispering-gallery cavity behave as
//! massive particles. This crate evaluates their exact dispersion and
//! effective mass, propagates the photon envelope through the weak-field
//! gravitational potential, checks the resulting Newtonian free fall against
//! closed-form solutions, and models the interferometric free-fall
//! measurement and its shot-noise-limited signal-to-noise ratio.

// `!(x < limit)` rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dispersion;
pub mod error;
pub mod gravity;
pub mod interferometry;
pub mod propagator;
pub mod run;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
pub use run::{run, Command, RunManifest};
pub use scenario::{parse_scenario, ScenarioFile};
