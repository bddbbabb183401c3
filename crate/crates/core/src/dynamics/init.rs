use rug::Float;

use super::{DynamicsError, MatingParameters};
use crate::engine::{Label, Level, MarkedConfiguration};
use crate::numerics::{mobius_from_triple, BigComplex, Mobius, RiemannPoint};

/// Raw sphere coordinates at level `R` in the identity-chart approximation:
/// `K1` points sit at their own positions, `K2` points at `R²/w`, and the
/// equator point at `R`.
pub fn raw_positions(params: &MatingParameters, r: &Float) -> Vec<(Label, RiemannPoint)> {
    let prec = params.prec;
    let r = BigComplex::real(Float::with_val(prec, r));
    let r2 = r.square();
    let inv = |w: &BigComplex| RiemannPoint::Finite(r2.checked_div(w).expect("nonzero cycle point"));
    vec![
        (Label::X, RiemannPoint::Finite(params.x.clone())),
        (Label::Y, RiemannPoint::Finite(params.y.clone())),
        (Label::Y1, RiemannPoint::Finite(params.y1.clone())),
        (Label::C0, RiemannPoint::Infinity),
        (Label::C1, inv(&params.c)),
        (Label::C2, inv(&params.c2)),
        (Label::E0, RiemannPoint::Finite(r)),
    ]
}

/// The normalizer at level `R`: `(∞, R, x) ↦ (0, 1, ∞)`, i.e. `ζ ↦ (R − x)/(ζ − x)`.
pub fn level_normalizer(params: &MatingParameters, r: &Float) -> Mobius {
    let prec = params.prec;
    mobius_from_triple(
        &RiemannPoint::Infinity,
        &RiemannPoint::Finite(BigComplex::real(Float::with_val(prec, r))),
        &RiemannPoint::Finite(params.x.clone()),
        prec,
    )
    .expect("R and x are distinct")
}

/// Normalized marked configuration at level `level` (typically `R0 = 10⁴`).
pub fn initial_configuration(
    params: &MatingParameters,
    level: Level,
) -> Result<MarkedConfiguration, DynamicsError> {
    let prec = params.prec;
    let r = level.value(prec);
    let m = level_normalizer(params, &r);
    let raw = raw_positions(params, &r);
    let pos = |l: Label| -> Result<BigComplex, DynamicsError> {
        let (_, p) = raw.iter().find(|(k, _)| *k == l).expect("all labels present");
        match m.apply(p) {
            RiemannPoint::Finite(z) => Ok(z),
            RiemannPoint::Infinity => Err(DynamicsError::Numeric(crate::numerics::NumericError::Degenerate(
                format!("{l} collides with x"),
            ))),
        }
    };
    Ok(MarkedConfiguration::new(
        level,
        pos(Label::Y)?,
        pos(Label::Y1)?,
        pos(Label::C1)?,
        pos(Label::C2)?,
    )?)
}
