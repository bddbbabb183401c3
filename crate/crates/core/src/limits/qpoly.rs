use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rug::Float;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LimitError;
use crate::numerics::{BigComplex, Poly, RationalMap, RiemannPoint};

pub(crate) fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<BigRational, LimitError> {
    BigRational::from_str(s.trim()).map_err(|_| LimitError::Parse(format!("not a rational: {s:?}")))
}

pub fn rational_to_float(r: &BigRational, prec: u32) -> Float {
    let parse = |i: &BigInt| Float::with_val(prec, Float::parse(i.to_string()).expect("integer literal"));
    parse(r.numer()) / parse(r.denom())
}

/// Polynomial with exact rational coefficients, lowest degree first and
/// without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| rat(k, 1)).collect())
    }

    pub fn parse(c: &[&str]) -> Result<Self, LimitError> {
        Ok(Self::new(c.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?))
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(BigRational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Exact long division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let f = &rem[k + dd] / &lead;
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &f * c;
            }
            quot[k] = f;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn to_poly(&self, prec: u32) -> Poly {
        let mut c: Vec<BigComplex> = self
            .coeffs
            .iter()
            .map(|r| BigComplex::real(rational_to_float(r, prec)))
            .collect();
        if c.is_empty() {
            c.push(BigComplex::zero(prec));
        }
        Poly::new(c, prec)
    }

    /// Rational roots with multiplicities, and the cofactor left after
    /// dividing them all out.
    pub fn rational_roots(&self) -> (Vec<(BigRational, usize)>, QPoly) {
        let mut rest = self.clone();
        let mut out: Vec<(BigRational, usize)> = Vec::new();
        if rest.is_zero() {
            return (out, rest);
        }
        let push = |r: BigRational, out: &mut Vec<(BigRational, usize)>| match out.iter_mut().find(|(x, _)| *x == r) {
            Some(e) => e.1 += 1,
            None => out.push((r, 1)),
        };
        while rest.degree().unwrap_or(0) > 0 && rest.coeffs[0].is_zero() {
            rest = Self::new(rest.coeffs[1..].to_vec());
            push(BigRational::zero(), &mut out);
        }
        loop {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let ints = rest.integer_coeffs();
            let a0 = ints[0].abs();
            let an = ints.last().unwrap().abs();
            let mut found = None;
            'search: for p in divisors(&a0) {
                for q in divisors(&an) {
                    for sign in [1, -1] {
                        let r = BigRational::new(BigInt::from(sign) * &p, q.clone());
                        if rest.eval(&r).is_zero() {
                            found = Some(r);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    let lin = Self::new(vec![-r.clone(), BigRational::one()]);
                    rest = rest.div_rem(&lin).0;
                    push(r, &mut out);
                }
                None => break,
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        (out, rest)
    }

    /// Coefficients scaled by the common denominator, as integers.
    fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect()
    }
}

/// Positive divisors by trial division; fine for the small integers met here.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                _ => write!(f, "({mag})")?,
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        Self::parse(&refs).map_err(serde::de::Error::custom)
    }
}

/// A point of the Riemann sphere with rational coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum QPoint {
    Finite(BigRational),
    Infinity,
}

impl QPoint {
    pub fn int(n: i64) -> Self {
        Self::Finite(rat(n, 1))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::Finite(rat(n, d))
    }

    pub fn to_riemann(&self, prec: u32) -> RiemannPoint {
        match self {
            Self::Finite(r) => RiemannPoint::Finite(BigComplex::real(rational_to_float(r, prec))),
            Self::Infinity => RiemannPoint::Infinity,
        }
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(r) => write!(f, "{r}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for QPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.trim() {
            "inf" | "∞" => Ok(Self::Infinity),
            t => parse_rational(t).map(Self::Finite).map_err(serde::de::Error::custom),
        }
    }
}

/// `p / q` over the rationals. Numerator and denominator are assumed coprime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRationalMap {
    pub p: QPoly,
    pub q: QPoly,
}

impl QRationalMap {
    pub fn new(p: QPoly, q: QPoly) -> Self {
        Self { p, q }
    }

    pub fn polynomial(p: QPoly) -> Self {
        Self::new(p, QPoly::constant(BigRational::one()))
    }

    pub fn identity() -> Self {
        Self::polynomial(QPoly::from_ints(&[0, 1]))
    }

    pub fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0).max(self.q.degree().unwrap_or(0))
    }

    pub fn eval(&self, z: &QPoint) -> QPoint {
        match z {
            QPoint::Finite(z) => {
                let den = self.q.eval(z);
                if den.is_zero() {
                    QPoint::Infinity
                } else {
                    QPoint::Finite(self.p.eval(z) / den)
                }
            }
            QPoint::Infinity => {
                let d = self.degree();
                let qd = self.q.coeff(d);
                if qd.is_zero() {
                    QPoint::Infinity
                } else {
                    QPoint::Finite(self.p.coeff(d) / qd)
                }
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        let d = self.degree() as u32;
        let homog = |poly: &QPoly| {
            (0..=d).fold(QPoly::zero(), |acc, i| {
                let term = inner.p.pow(i).mul(&inner.q.pow(d - i)).scale(&poly.coeff(i as usize));
                acc.add(&term)
            })
        };
        Self::new(homog(&self.p), homog(&self.q))
    }

    /// `p' q − p q'`.
    pub fn wronskian(&self) -> QPoly {
        self.p.derivative().mul(&self.q).sub(&self.p.mul(&self.q.derivative()))
    }

    /// Equality as rational functions, `p₁ q₂ = p₂ q₁`.
    pub fn same_function(&self, other: &Self) -> bool {
        self.p.mul(&other.q) == other.p.mul(&self.q)
    }

    pub fn to_map(&self, prec: u32) -> RationalMap {
        RationalMap::new(self.p.to_poly(prec), self.q.to_poly(prec))
    }
}

impl fmt::Display for QRationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots_with_multiplicity() {
        // 4a³ − 27a² + 54a − 27 = (a − 3)²(4a − 3)
        let p = QPoly::from_ints(&[-27, 54, -27, 4]);
        let (roots, rest) = p.rational_roots();
        assert_eq!(roots, vec![(rat(3, 4), 1), (rat(3, 1), 2)]);
        assert_eq!(rest.degree(), Some(0));
    }

    #[test]
    fn irrational_cofactor_is_returned() {
        // z (z² − 2)
        let (roots, rest) = QPoly::from_ints(&[0, -2, 0, 1]).rational_roots();
        assert_eq!(roots, vec![(rat(0, 1), 1)]);
        assert_eq!(rest, QPoly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn division_round_trip() {
        let a = QPoly::parse(&["1/2", "-3", "0", "5/7"]).unwrap();
        let b = QPoly::parse(&["2", "1/3"]).unwrap();
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn composition_and_evaluation_agree() {
        let f = QRationalMap::new(QPoly::from_ints(&[0, 0, 0, 4]), QPoly::from_ints(&[1, 3]));
        let g = QRationalMap::polynomial(QPoly::parse(&["0", "-1", "1/2"]).unwrap());
        let h = f.compose(&g);
        assert_eq!(h.degree(), 6);
        for z in [QPoint::frac(1, 3), QPoint::int(-5), QPoint::Infinity] {
            assert_eq!(h.eval(&z), f.eval(&g.eval(&z)));
        }
        // the pole of f pulled back: g(z) = −1/3
        assert_eq!(f.eval(&QPoint::frac(-1, 3)), QPoint::Infinity);
    }

    #[test]
    fn display_is_readable() {
        let p = QPoly::parse(&["0", "-1", "1/2"]).unwrap();
        assert_eq!(p.to_string(), "(1/2)z^2 - z");
    }
}
