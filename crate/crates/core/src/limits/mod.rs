//! The pinched limit: three bubble spheres mapped cyclically by `F1`, `F2`,
//! `F3`, whose degree-6 return maps `H1`, `H2` are checked exactly, together
//! with the Thurston matrix of the obstructing multicurve.

mod conjugacy;
mod diagram;
mod maps;
mod matrix;
mod qpoly;
mod report;

use thiserror::Error;

use crate::numerics::NumericError;

pub use conjugacy::{
    conjugation_symmetry, f2_is_inverted_g2, verify_conjugacies, IdentityCheck, CONJUGACY_PREC, CONJUGACY_SAMPLES,
    CONJUGACY_TOL,
};
pub use diagram::{critical_diagram, critical_diagram_numeric, CriticalDiagram, CriticalEntry};
pub use maps::{derive_f2, DerivedF2, LimitMapSet};
pub use matrix::{
    build_transition_matrix, leading_eigenvalue, obstruction_preimage_data, Eigenvalue, PreimageRecord, Spectrum,
    TransitionMatrix, TRIVIAL,
};
pub use qpoly::{parse_rational, rat, rational_to_float, QPoint, QPoly, QRationalMap};
pub use report::{expected_diagrams, verify, DiagramCheck, ExactCheck, VerifyReport};

#[derive(Debug, Error)]
pub enum LimitError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("critical points are not all rational: {0}")]
    NonRational(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("derivation failed: {0}")]
    Derivation(String),
    #[error("transition matrix: {0}")]
    Matrix(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
