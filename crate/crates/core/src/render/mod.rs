//! Pictures: Julia sets of the two cubics, basins of the limit maps, and
//! the mated sphere at a chain level. All evaluation is at [`RENDER_PREC`]
//! bits and pixel-parallel with deterministic output.

mod basins;
mod color;
mod grid;
mod image;
mod julia;
mod mating;

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::numerics::NumericError;

pub use basins::{classify_basin, render_basins, BasinRender};
pub use color::{ColorClass, BACKGROUND, FREE_DOT, PINNED_DOT};
pub use grid::{par_grid, thread_cap, Window};
pub use image::{write_atomic, Image, Rgb};
pub use julia::{render_polynomial, JuliaOptions, PolyTarget};
pub use mating::{classify_via_chain, render_mated_sphere, MarkedSample, MatingRender, Projection, RenderChain, Side, SphereClass};

pub const RENDER_PREC: u32 = 128;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("render configuration: {0}")]
    Config(String),
    #[error("level {n} is beyond the chain length {len}")]
    Level { n: usize, len: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Sidecar metadata written next to each image.
#[derive(Clone, Debug, Serialize)]
pub struct RenderMeta {
    pub kind: String,
    pub width: usize,
    pub height: usize,
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection: Option<Projection>,
    pub max_iter: usize,
    pub target: String,
}
