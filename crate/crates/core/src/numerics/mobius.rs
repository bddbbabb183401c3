use super::{BigComplex, NumericError, RiemannPoint};

/// `z ↦ (a z + b) / (c z + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius {
    pub a: BigComplex,
    pub b: BigComplex,
    pub c: BigComplex,
    pub d: BigComplex,
}

impl Mobius {
    pub fn new(a: BigComplex, b: BigComplex, c: BigComplex, d: BigComplex) -> Result<Self, NumericError> {
        let m = Self { a, b, c, d };
        m.check_det()?;
        Ok(m)
    }

    pub fn identity(prec: u32) -> Self {
        Self {
            a: BigComplex::one(prec),
            b: BigComplex::zero(prec),
            c: BigComplex::zero(prec),
            d: BigComplex::one(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.a.prec()
    }

    fn check_det(&self) -> Result<(), NumericError> {
        let det = &(&self.a * &self.d) - &(&self.b * &self.c);
        let scale = [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|v| v.norm_sqr())
            .fold(rug::Float::new(self.prec()), |m, v| if v > m { v } else { m });
        // |det| must exceed 2^(-prec/2) * max|entry|^2.
        let mut bound = scale.clone();
        bound.square_mut();
        bound >>= self.prec();
        if det.is_zero() || det.norm_sqr() <= bound {
            return Err(NumericError::Degenerate("Möbius determinant vanishes".into()));
        }
        Ok(())
    }

    pub fn determinant(&self) -> BigComplex {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn apply(&self, z: &RiemannPoint) -> RiemannPoint {
        match z {
            RiemannPoint::Infinity => match self.a.checked_div(&self.c) {
                Ok(v) => RiemannPoint::Finite(v),
                Err(_) => RiemannPoint::Infinity,
            },
            RiemannPoint::Finite(z) => self.apply_finite(z),
        }
    }

    pub fn apply_finite(&self, z: &BigComplex) -> RiemannPoint {
        let num = &(&self.a * z) + &self.b;
        let den = &(&self.c * z) + &self.d;
        match num.checked_div(&den) {
            Ok(v) => RiemannPoint::Finite(v),
            Err(_) => RiemannPoint::Infinity,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: &(&self.a * &other.a) + &(&self.b * &other.c),
            b: &(&self.a * &other.b) + &(&self.b * &other.d),
            c: &(&self.c * &other.a) + &(&self.d * &other.c),
            d: &(&self.c * &other.b) + &(&self.d * &other.d),
        }
    }

    /// Adjugate inverse (projectively equal to the true inverse).
    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn with_prec(&self, prec: u32) -> Mobius {
        Mobius {
            a: self.a.with_prec(prec),
            b: self.b.with_prec(prec),
            c: self.c.with_prec(prec),
            d: self.d.with_prec(prec),
        }
    }
}

/// The Möbius map sending `p0 ↦ 0`, `p1 ↦ 1`, `pinf ↦ ∞`.
pub fn mobius_from_triple(
    p0: &RiemannPoint,
    p1: &RiemannPoint,
    pinf: &RiemannPoint,
    prec: u32,
) -> Result<Mobius, NumericError> {
    use RiemannPoint::*;
    let one = BigComplex::one(prec);
    let zero = BigComplex::zero(prec);
    let m = match (p0, p1, pinf) {
        (Finite(a), Finite(b), Finite(c)) => {
            let (a, b, c) = (a.with_prec(prec), b.with_prec(prec), c.with_prec(prec));
            let bc = &b - &c;
            let ba = &b - &a;
            Mobius {
                b: -(&a * &bc),
                d: -(&c * &ba),
                a: bc,
                c: ba,
            }
        }
        (Finite(a), Finite(b), Infinity) => {
            let (a, b) = (a.with_prec(prec), b.with_prec(prec));
            Mobius {
                d: &b - &a,
                a: one,
                b: -a,
                c: zero,
            }
        }
        (Infinity, Finite(b), Finite(c)) => {
            let (b, c) = (b.with_prec(prec), c.with_prec(prec));
            Mobius {
                a: zero,
                b: &b - &c,
                c: one,
                d: -c,
            }
        }
        (Finite(a), Infinity, Finite(c)) => Mobius {
            a: one.clone(),
            b: -a.with_prec(prec),
            c: one,
            d: -c.with_prec(prec),
        },
        _ => return Err(NumericError::Degenerate("coincident triple points".into())),
    };
    m.check_det()
        .map_err(|_| NumericError::Degenerate("coincident triple points".into()))?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 192;

    fn pt(re: f64, im: f64) -> RiemannPoint {
        RiemannPoint::from_f64(re, im, P)
    }

    fn near(a: &RiemannPoint, b: &RiemannPoint, tol: f64) -> bool {
        a.chordal_distance(b) <= tol
    }

    #[test]
    fn standard_triple_is_identity() {
        let m = mobius_from_triple(&pt(0.0, 0.0), &pt(1.0, 0.0), &RiemannPoint::Infinity, P).unwrap();
        let z = pt(0.3, -2.0);
        assert!(near(&m.apply(&z), &z, 1e-50));
        assert!(m.apply(&RiemannPoint::Infinity).is_infinity());
    }

    #[test]
    fn swap_zero_and_one() {
        let m = mobius_from_triple(&pt(1.0, 0.0), &pt(0.0, 0.0), &RiemannPoint::Infinity, P).unwrap();
        let z = pt(0.25, 0.5);
        assert!(near(&m.apply(&z), &pt(0.75, -0.5), 1e-50));
    }

    #[test]
    fn infinity_r_x_normalizer() {
        // (∞, R, x) ↦ (0, 1, ∞) is ζ ↦ (R − x)/(ζ − x).
        let (r, x) = (1.0e4, 0.8445);
        let m = mobius_from_triple(&RiemannPoint::Infinity, &pt(r, 0.0), &pt(x, 0.0), P).unwrap();
        assert!(near(&m.apply(&RiemannPoint::Infinity), &pt(0.0, 0.0), 1e-50));
        assert!(near(&m.apply(&pt(r, 0.0)), &pt(1.0, 0.0), 1e-50));
        assert!(m.apply(&pt(x, 0.0)).is_infinity());
        let z = pt(-3.0, 1.0);
        let xb = BigComplex::from_f64(x, 0.0, P);
        let expect = (&BigComplex::from_f64(r, 0.0, P) - &xb)
            .checked_div(&(&BigComplex::from_f64(-3.0, 1.0, P) - &xb))
            .unwrap();
        assert!(near(&m.apply(&z), &RiemannPoint::Finite(expect), 1e-30));
    }

    #[test]
    fn coincident_points_rejected() {
        assert!(mobius_from_triple(&pt(1.0, 0.0), &pt(1.0, 0.0), &pt(2.0, 0.0), P).is_err());
        assert!(mobius_from_triple(&RiemannPoint::Infinity, &pt(1.0, 0.0), &RiemannPoint::Infinity, P).is_err());
    }

    #[test]
    fn inverse_undoes() {
        let m = mobius_from_triple(&pt(2.0, 1.0), &pt(-1.0, 0.5), &pt(0.0, 3.0), P).unwrap();
        let z = pt(0.7, -0.1);
        assert!(near(&m.inverse().apply(&m.apply(&z)), &z, 1e-50));
        assert!(near(&m.compose(&m.inverse()).apply(&z), &z, 1e-50));
    }

    proptest! {
        #[test]
        fn triple_lands_on_standard_points(
            a in (-5.0f64..5.0, -5.0f64..5.0),
            b in (-5.0f64..5.0, -5.0f64..5.0),
            c in (-5.0f64..5.0, -5.0f64..5.0),
            which_inf in 0usize..4,
        ) {
            let mut pts = vec![pt(a.0, a.1), pt(b.0, b.1), pt(c.0, c.1)];
            if which_inf < 3 {
                pts[which_inf] = RiemannPoint::Infinity;
            }
            for i in 0..3 {
                for j in 0..i {
                    prop_assume!(pts[i].chordal_distance(&pts[j]) > 1e-3);
                }
            }
            let m = mobius_from_triple(&pts[0], &pts[1], &pts[2], P).unwrap();
            prop_assert!(near(&m.apply(&pts[0]), &pt(0.0, 0.0), 1e-45));
            prop_assert!(near(&m.apply(&pts[1]), &pt(1.0, 0.0), 1e-45));
            prop_assert!(near(&m.apply(&pts[2]), &RiemannPoint::Infinity, 1e-45));
        }
    }
}
