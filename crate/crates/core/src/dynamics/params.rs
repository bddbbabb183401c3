use rug::Float;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{poly_roots, BigComplex, ComplexRepr, NumericError, Poly, MIN_PREC};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("precision {0} bits is below the supported minimum of 64")]
    PrecisionTooLow(u32),
    #[error("no root of the {equation} equation within {tolerance} of {target}")]
    RootNotFound {
        equation: &'static str,
        target: String,
        tolerance: f64,
    },
    #[error("orbit identity `{identity}` fails: residual {residual:e}")]
    Invariant { identity: &'static str, residual: f64 },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// The two post-critically finite cubics.
///
/// `P1 = z³ + a z + b` has critical points `x`, `y = −x` on a 3-cycle
/// `x → y → y1 → x`; `P2 = z³ + c` has its double critical point `0` on the
/// 3-cycle `0 → c → c2 → 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatingParameters {
    pub prec: u32,
    pub x: BigComplex,
    pub y: BigComplex,
    pub y1: BigComplex,
    pub a: BigComplex,
    pub b: BigComplex,
    pub c: BigComplex,
    pub c2: BigComplex,
}

/// `32x⁸ − 24x⁶ + 2x² − 1`.
pub fn x_equation(prec: u32) -> Poly {
    let mut k = vec![(0.0, 0.0); 9];
    k[0] = (-1.0, 0.0);
    k[2] = (2.0, 0.0);
    k[6] = (-24.0, 0.0);
    k[8] = (32.0, 0.0);
    Poly::from_f64(&k, prec)
}

/// `c⁸ + 3c⁶ + 3c⁴ + c² + 1`.
pub fn c_equation(prec: u32) -> Poly {
    let mut k = vec![(0.0, 0.0); 9];
    k[0] = (1.0, 0.0);
    k[2] = (1.0, 0.0);
    k[4] = (3.0, 0.0);
    k[6] = (3.0, 0.0);
    k[8] = (1.0, 0.0);
    Poly::from_f64(&k, prec)
}

pub const X_APPROX: (f64, f64) = (0.8445, 0.0);
pub const C_APPROX: (f64, f64) = (-0.264, 1.260);
const SELECTION_RADIUS: f64 = 0.05;

fn nearest_root(
    p: &Poly,
    target: (f64, f64),
    equation: &'static str,
    prec: u32,
) -> Result<BigComplex, DynamicsError> {
    let t = BigComplex::from_f64(target.0, target.1, prec);
    let roots = poly_roots(p, prec)?;
    let (best, dist) = roots
        .into_iter()
        .map(|r| {
            let d = (&r - &t).abs_f64();
            (r, d)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("degree-8 polynomial has roots");
    if dist > SELECTION_RADIUS {
        return Err(DynamicsError::RootNotFound {
            equation,
            target: format!("{}{:+}i", target.0, target.1),
            tolerance: SELECTION_RADIUS,
        });
    }
    Ok(best)
}

/// Solves for the two cubics at `prec` bits and validates every orbit identity.
pub fn solve_parameters(prec: u32) -> Result<MatingParameters, DynamicsError> {
    if prec < MIN_PREC {
        return Err(DynamicsError::PrecisionTooLow(prec));
    }
    let mut x = nearest_root(&x_equation(prec), X_APPROX, "x", prec)?;
    // The selected root is real; drop the rounding-level imaginary part.
    x = BigComplex::real(x.re().clone());
    let c = nearest_root(&c_equation(prec), C_APPROX, "c", prec)?;

    let x2 = x.square();
    let a = x2.scale_f64(-3.0);
    let b = &(&x2 * &x).scale_f64(2.0) - &x;
    let y = -&x;
    let y1 = &(&x2 * &x).scale_f64(4.0) - &x;
    let c2 = &(&c.square() * &c) + &c;
    let params = MatingParameters { prec, x, y, y1, a, b, c, c2 };
    params.validate()?;
    Ok(params)
}

impl MatingParameters {
    pub fn p1(&self) -> Poly {
        let p = self.prec;
        Poly::new(vec![self.b.clone(), self.a.clone(), BigComplex::zero(p), BigComplex::one(p)], p)
    }

    pub fn p2(&self) -> Poly {
        let p = self.prec;
        Poly::new(vec![self.c.clone(), BigComplex::zero(p), BigComplex::zero(p), BigComplex::one(p)], p)
    }

    /// Every identity with its residual; all must be below `2^(20−prec)`.
    pub fn invariant_residuals(&self) -> Vec<(&'static str, f64)> {
        let p1 = self.p1();
        let p2 = self.p2();
        let zero = BigComplex::zero(self.prec);
        let crit = |z: &BigComplex| (&z.square().scale_f64(3.0) + &self.a).abs_f64();
        vec![
            ("3x^2 + a = 0", crit(&self.x)),
            ("3y^2 + a = 0", crit(&self.y)),
            ("P1(x) = y", (&p1.eval(&self.x) - &self.y).abs_f64()),
            ("P1(y) = y1", (&p1.eval(&self.y) - &self.y1).abs_f64()),
            ("P1(y1) = x", (&p1.eval(&self.y1) - &self.x).abs_f64()),
            ("P2(0) = c", (&p2.eval(&zero) - &self.c).abs_f64()),
            ("P2(c) = c2", (&p2.eval(&self.c) - &self.c2).abs_f64()),
            ("P2(c2) = 0", p2.eval(&self.c2).abs_f64()),
            ("32x^8 - 24x^6 + 2x^2 - 1 = 0", x_equation(self.prec).eval(&self.x).abs_f64()),
            ("c^8 + 3c^6 + 3c^4 + c^2 + 1 = 0", c_equation(self.prec).eval(&self.c).abs_f64()),
        ]
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let tol = 2f64.powi(20 - self.prec as i32);
        for (identity, residual) in self.invariant_residuals() {
            if !(residual <= tol) {
                return Err(DynamicsError::Invariant { identity, residual });
            }
        }
        Ok(())
    }

    pub fn with_prec(&self, prec: u32) -> Result<Self, DynamicsError> {
        if prec <= self.prec {
            let conv = |v: &BigComplex| v.with_prec(prec);
            Ok(MatingParameters {
                prec,
                x: conv(&self.x),
                y: conv(&self.y),
                y1: conv(&self.y1),
                a: conv(&self.a),
                b: conv(&self.b),
                c: conv(&self.c),
                c2: conv(&self.c2),
            })
        } else {
            solve_parameters(prec)
        }
    }

    pub fn to_json(&self) -> ParametersJson {
        ParametersJson {
            precision: self.prec,
            x: (&self.x).into(),
            y: (&self.y).into(),
            y1: (&self.y1).into(),
            a: (&self.a).into(),
            b: (&self.b).into(),
            c: (&self.c).into(),
            c2: (&self.c2).into(),
            residuals: self
                .invariant_residuals()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParametersJson {
    pub precision: u32,
    pub x: ComplexRepr,
    pub y: ComplexRepr,
    pub y1: ComplexRepr,
    pub a: ComplexRepr,
    pub b: ComplexRepr,
    pub c: ComplexRepr,
    pub c2: ComplexRepr,
    pub residuals: Vec<(String, f64)>,
}

/// Truncates `v` to `digits` decimals after the point (toward zero).
pub fn truncate_decimals(v: &Float, digits: u32) -> f64 {
    let scale = 10f64.powi(digits as i32);
    (v.to_f64() * scale).trunc() / scale
}
