//! Arbitrary-precision complex arithmetic, polynomials, root finding,
//! Möbius maps, rational maps and a dense Newton solver.

mod complex;
mod mobius;
mod newton;
mod poly;
mod rational;
mod roots;

pub use complex::{cmp_abs, decimal_string, truncated_string, BigComplex, ComplexRepr, RiemannPoint};
pub use mobius::{mobius_from_triple, Mobius};
pub use newton::{lu_solve, newton_solve, NewtonOptions, NewtonOutcome};
pub use poly::Poly;
pub use rational::RationalMap;
pub use roots::poly_roots;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("denominator collapsed relative to numerator")]
    DivisionCollapse,
    #[error("non-finite value produced")]
    NonFinite,
    #[error("singular linear system")]
    Singular,
    #[error("newton iteration did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("root finder failed for degree {degree}: residual {residual:e}")]
    RootFailure { degree: usize, residual: f64 },
    #[error("cannot parse number {0}")]
    Parse(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// Smallest supported working precision in bits.
pub const MIN_PREC: u32 = 64;
