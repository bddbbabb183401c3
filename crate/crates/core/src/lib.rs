//! Slow polynomial mating of a degenerate cubic pair, computed by
//! high-precision Thurston pull-back.
//!
//! * [`numerics`] — MPFR-backed complex arithmetic, polynomials, roots,
//!   Möbius maps and a dense Newton solver.
//! * [`dynamics`] — the two post-critically finite cubics and escape-time
//!   classification.
//! * [`engine`] — the pull-back step and the chain `R_n = 10^(4/3^n)`.
//! * [`limits`] — the exact limit maps, their conjugacies and the
//!   obstruction matrix.
//! * [`render`] — Julia sets, basins and mated-sphere pictures as PPM.

pub mod numerics;
pub mod dynamics;
pub mod engine;
pub mod limits;
pub mod render;
