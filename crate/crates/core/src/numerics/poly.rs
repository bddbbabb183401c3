use std::fmt;

use rug::Float;

use super::BigComplex;

/// Dense polynomial with coefficients in ascending order of degree.
///
/// Trailing zero coefficients are kept: a cubic whose leading coefficient
/// happens to vanish is still reported with `len() == 4`, which matters for
/// rational maps whose degree is fixed by construction.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<BigComplex>,
    prec: u32,
}

impl Poly {
    pub fn new(coeffs: Vec<BigComplex>, prec: u32) -> Self {
        for c in &coeffs {
            assert_eq!(c.prec(), prec, "coefficient precision mismatch");
        }
        Self { coeffs, prec }
    }

    pub fn from_f64(coeffs: &[(f64, f64)], prec: u32) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&(re, im)| BigComplex::from_f64(re, im, prec))
                .collect(),
            prec,
        )
    }

    pub fn constant(c: BigComplex) -> Self {
        let prec = c.prec();
        Self::new(vec![c], prec)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[BigComplex], prec: u32) -> Self {
        let mut p = Self::constant(BigComplex::one(prec));
        for r in roots {
            p = p.mul(&Self::new(vec![-r, BigComplex::one(prec)], prec));
        }
        p
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigComplex {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| BigComplex::zero(self.prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Number of stored coefficients (formal degree + 1).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree ignoring exactly-zero leading coefficients; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn formal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn trimmed(&self) -> Self {
        let n = self.degree().map_or(0, |d| d + 1);
        Self::new(self.coeffs[..n].to_vec(), self.prec)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.with_prec(prec)).collect(), prec)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &BigComplex) -> BigComplex {
        let mut acc = BigComplex::zero(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: &BigComplex) -> (BigComplex, BigComplex) {
        let mut p = BigComplex::zero(self.prec);
        let mut dp = BigComplex::zero(self.prec);
        for c in self.coeffs.iter().rev() {
            dp *= z;
            dp += &p;
            p *= z;
            p += c;
        }
        (p, dp)
    }

    /// `sum |a_i| |z|^i`, the natural scale for the rounding error of `eval(z)`.
    pub fn abs_scale(&self, z: &BigComplex) -> Float {
        let r = z.abs();
        let mut acc = Float::new(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= &r;
            acc += c.abs();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![BigComplex::zero(self.prec)], self.prec);
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&Float::with_val(self.prec, i + 1)))
                .collect(),
            self.prec,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect(), self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect(), self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::new(vec![], self.prec);
        }
        let mut out = vec![BigComplex::zero(self.prec); self.len() + other.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out, self.prec)
    }

    pub fn scale(&self, k: &BigComplex) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect(), self.prec)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(BigComplex::one(self.prec));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Composition `self(inner(z))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::new(vec![BigComplex::zero(self.prec)], self.prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Homogenized at formal degree `d`: returns `z^d p(1/z)` (coefficients reversed).
    pub fn reversed(&self, d: usize) -> Self {
        Self::new((0..=d).map(|i| self.coeff(d - i)).collect(), self.prec)
    }

    /// Euclidean division; panics if `divisor` is the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.trimmed();
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.trimmed().coeffs;
        if rem.len() <= dd {
            return (Self::new(vec![BigComplex::zero(self.prec)], self.prec), self.clone());
        }
        let mut quo = vec![BigComplex::zero(self.prec); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let q = rem[k + dd]
                .checked_div(&lead)
                .expect("leading coefficient of a trimmed divisor is nonzero");
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &(&q * dc);
            }
            quo[k] = q;
        }
        rem.truncate(dd.max(1));
        (Self::new(quo, self.prec), Self::new(rem, self.prec))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigComplex, b: &BigComplex, tol: f64) -> bool {
        (a - b).abs_f64() <= tol
    }

    #[test]
    fn horner_matches_expanded_cubic() {
        // p(z) = 2 - z + 3 z^3 at z = 2: 2 - 2 + 24 = 24
        let p = Poly::from_f64(&[(2.0, 0.0), (-1.0, 0.0), (0.0, 0.0), (3.0, 0.0)], 128);
        let z = BigComplex::from_f64(2.0, 0.0, 128);
        assert_eq!(p.eval(&z).re_f64(), 24.0);
        let (v, dv) = p.eval_with_derivative(&z);
        assert_eq!(v.re_f64(), 24.0);
        // p'(z) = -1 + 9 z^2 = 35
        assert_eq!(dv.re_f64(), 35.0);
    }

    #[test]
    fn from_roots_vanishes_on_roots() {
        let prec = 128;
        let roots = vec![
            BigComplex::from_f64(1.0, 2.0, prec),
            BigComplex::from_f64(-0.5, 0.0, prec),
            BigComplex::from_f64(0.0, -3.0, prec),
        ];
        let p = Poly::from_roots(&roots, prec);
        for r in &roots {
            assert!(p.eval(r).abs_f64() < 1e-30);
        }
    }

    #[test]
    fn compose_and_div_rem() {
        let prec = 128;
        let p = Poly::from_f64(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], prec); // 1 + z^2
        let q = Poly::from_f64(&[(0.0, 1.0), (2.0, 0.0)], prec); // i + 2z
        let z = BigComplex::from_f64(0.3, -0.4, prec);
        assert!(close(&p.compose(&q).eval(&z), &p.eval(&q.eval(&z)), 1e-30));
        let prod = p.mul(&q).add(&Poly::constant(BigComplex::from_f64(5.0, 0.0, prec)));
        let (quo, rem) = prod.div_rem(&p);
        assert!(close(&quo.eval(&z), &q.eval(&z), 1e-30));
        assert!(close(&rem.coeff(0), &BigComplex::from_f64(5.0, 0.0, prec), 1e-30));
    }

    #[test]
    fn degree_ignores_zero_leading_terms() {
        let p = Poly::from_f64(&[(1.0, 0.0), (2.0, 0.0), (0.0, 0.0)], 64);
        assert_eq!(p.formal_degree(), 2);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly::from_f64(&[(0.0, 0.0)], 64).degree(), None);
    }
}
