use super::{BigComplex, Mobius, NumericError, Poly, RiemannPoint};

/// `z ↦ p(z) / q(z)` with the formal degree taken as `max(len p, len q) - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    pub p: Poly,
    pub q: Poly,
}

impl RationalMap {
    pub fn new(p: Poly, q: Poly) -> Self {
        assert_eq!(p.prec(), q.prec(), "numerator/denominator precision mismatch");
        Self { p, q }
    }

    pub fn prec(&self) -> u32 {
        self.p.prec()
    }

    /// Formal degree `max(deg p, deg q)` ignoring exactly-zero top coefficients.
    pub fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0).max(self.q.degree().unwrap_or(0))
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.p.with_prec(prec), self.q.with_prec(prec))
    }

    pub fn eval(&self, z: &RiemannPoint) -> Result<RiemannPoint, NumericError> {
        match z {
            RiemannPoint::Finite(z) => self.eval_finite(z),
            RiemannPoint::Infinity => self.eval_infinity(),
        }
    }

    pub fn eval_finite(&self, z: &BigComplex) -> Result<RiemannPoint, NumericError> {
        let num = self.p.eval(z);
        let den = self.q.eval(z);
        if num.is_zero() && den.is_zero() {
            return Err(NumericError::Degenerate("numerator and denominator vanish together".into()));
        }
        Ok(match num.checked_div(&den) {
            Ok(v) => RiemannPoint::Finite(v),
            Err(_) => RiemannPoint::Infinity,
        })
    }

    fn eval_infinity(&self) -> Result<RiemannPoint, NumericError> {
        let d = self.degree();
        let (pd, qd) = (self.p.coeff(d), self.q.coeff(d));
        if pd.is_zero() && qd.is_zero() {
            return Err(NumericError::Degenerate("zero map".into()));
        }
        Ok(match pd.checked_div(&qd) {
            Ok(v) => RiemannPoint::Finite(v),
            Err(_) => RiemannPoint::Infinity,
        })
    }

    /// `p' q − p q'`; its roots are the finite critical points.
    pub fn wronskian(&self) -> Poly {
        self.p.derivative().mul(&self.q).sub(&self.p.mul(&self.q.derivative()))
    }

    /// `self ∘ inner`, of degree `deg self · deg inner`.
    pub fn compose(&self, inner: &RationalMap) -> RationalMap {
        let d = self.degree();
        let prec = self.prec();
        // Σ a_i P^i Q^(d-i) for both numerator and denominator.
        let homog = |poly: &Poly| {
            let mut acc = Poly::new(vec![BigComplex::zero(prec)], prec);
            for i in 0..=d {
                let term = inner
                    .p
                    .pow(i as u32)
                    .mul(&inner.q.pow((d - i) as u32))
                    .scale(&poly.coeff(i));
                acc = acc.add(&term);
            }
            acc
        };
        RationalMap::new(homog(&self.p), homog(&self.q))
    }

    pub fn from_mobius(m: &Mobius) -> RationalMap {
        let prec = m.prec();
        RationalMap::new(
            Poly::new(vec![m.b.clone(), m.a.clone()], prec),
            Poly::new(vec![m.d.clone(), m.c.clone()], prec),
        )
    }

    /// `m ∘ self`.
    pub fn post_compose(&self, m: &Mobius) -> RationalMap {
        RationalMap::new(
            self.p.scale(&m.a).add(&self.q.scale(&m.b)),
            self.p.scale(&m.c).add(&self.q.scale(&m.d)),
        )
    }

    /// `self ∘ m`.
    pub fn pre_compose(&self, m: &Mobius) -> RationalMap {
        self.compose(&RationalMap::from_mobius(m))
    }

    /// Rescales so that `q(0) = 1`.
    pub fn normalized_q0(&self) -> Result<RationalMap, NumericError> {
        let q0 = self.q.coeff(0);
        let inv = q0.recip()?;
        Ok(RationalMap::new(self.p.scale(&inv), self.q.scale(&inv)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::mobius_from_triple;

    const P: u32 = 192;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(re, im, P)
    }

    fn f2() -> RationalMap {
        // 4z^3 / (3z + 1)
        RationalMap::new(
            Poly::from_f64(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (4.0, 0.0)], P),
            Poly::from_f64(&[(1.0, 0.0), (3.0, 0.0)], P),
        )
    }

    #[test]
    fn evaluation_at_poles_and_infinity() {
        let f = f2();
        assert!(f.eval(&RiemannPoint::Infinity).unwrap().is_infinity());
        let pole = RiemannPoint::Finite(BigComplex::from_ratio(-1, 3, P));
        assert!(f.eval(&pole).unwrap().is_infinity());
        let half = RiemannPoint::Finite(BigComplex::from_ratio(-1, 2, P));
        let v = f.eval(&half).unwrap();
        assert!(v.chordal_distance(&RiemannPoint::from_f64(1.0, 0.0, P)) < 1e-50);
    }

    #[test]
    fn wronskian_of_f2() {
        // 12z^2(3z+1) - 4z^3*3 = 24z^3 + 12z^2 = 12z^2(2z+1)
        let w = f2().wronskian();
        let want = [0.0, 0.0, 12.0, 24.0];
        for (i, v) in want.iter().enumerate() {
            assert!((w.coeff(i).re_f64() - v).abs() < 1e-40);
        }
    }

    #[test]
    fn composition_agrees_with_nested_evaluation() {
        let g = RationalMap::new(
            Poly::from_f64(&[(0.0, 0.0), (-1.0, 0.0), (0.5, 0.0)], P),
            Poly::from_f64(&[(1.0, 0.0)], P),
        );
        let h = f2().compose(&g);
        assert_eq!(h.degree(), 6);
        let z = RiemannPoint::Finite(c(0.37, -0.81));
        let nested = f2().eval(&g.eval(&z).unwrap()).unwrap();
        assert!(h.eval(&z).unwrap().chordal_distance(&nested) < 1e-50);
    }

    #[test]
    fn mobius_conjugation() {
        let m = mobius_from_triple(
            &RiemannPoint::Finite(c(0.5, 0.5)),
            &RiemannPoint::Finite(c(2.0, 0.0)),
            &RiemannPoint::Finite(c(-1.0, 0.25)),
            P,
        )
        .unwrap();
        let conj = f2().pre_compose(&m.inverse()).post_compose(&m);
        let z = RiemannPoint::Finite(c(0.1, 0.9));
        let direct = m.apply(&f2().eval(&m.inverse().apply(&z)).unwrap());
        assert!(conj.eval(&z).unwrap().chordal_distance(&direct) < 1e-45);
        let n = conj.normalized_q0().unwrap();
        assert!((&n.q.coeff(0) - &c(1.0, 0.0)).abs_f64() < 1e-50);
    }
}
