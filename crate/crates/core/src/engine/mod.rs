//! Thurston pull-back along the slow-mating schedule `R_n = R0^(1/3ⁿ)`.

mod chain;
mod config;
mod step;
pub mod system;

pub use chain::{
    format_truncated, measure, measurements_csv, run_chain, run_chain_from, run_chain_with, ChainJson, LevelJson,
    MapJson, MeasurementRow, PullbackChain, CSV_HEADER, DEFAULT_PRECISION, DEFAULT_R0,
};
pub use config::{Label, Level, MarkedConfiguration, MatingSchema};
pub use step::{pullback_step, raw_seed, seed_map, StepOptions, StepOutcome, StepSeed};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::numerics::NumericError;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("continuation stalled at s = {s}")]
    Stalled { s: f64 },
    #[error("marked points nearly collided (separation {separation:e}); isotopy class may have changed")]
    Isotopy { separation: f64 },
    #[error("the base level has no level above it")]
    BaseLevel,
    #[error("chain needs at least two configurations to measure")]
    TooShort,
    #[error("v at level {} is below the precision floor", .n - 1)]
    PrecisionFloor { n: usize, source: NumericError },
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<EngineError> },
}
