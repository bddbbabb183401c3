//! The two post-critically finite cubics, escape-time classification, and
//! the initial marked configuration of the mating.

mod escape;
mod init;
mod params;

pub use escape::{classify, classify_with_capture, EscapeClassification, EscapeStatus, DEFAULT_CUTOFF_POTENTIAL};
pub use init::{initial_configuration, level_normalizer, raw_positions};
pub use params::{c_equation, solve_parameters, truncate_decimals, x_equation, DynamicsError, MatingParameters, ParametersJson, C_APPROX, X_APPROX};
