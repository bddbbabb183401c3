use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Round;
use rug::Float;
use serde::ser::SerializeTuple;
use serde::{Deserialize, Serialize, Serializer};

use super::NumericError;

/// Complex number with MPFR real and imaginary parts of a common precision.
///
/// Arithmetic operators require both operands to carry the same precision and
/// panic otherwise; convert explicitly with [`BigComplex::with_prec`].
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    re: Float,
    im: Float,
}

fn check_prec(a: u32, b: u32) {
    assert!(
        a == b,
        "mixed-precision complex arithmetic ({a} vs {b} bits); convert with with_prec first"
    );
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        Self {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    /// Builds from two floats; the imaginary part is rounded to the real part's precision.
    pub fn from_parts(re: Float, im: Float) -> Self {
        let prec = re.prec();
        let im = if im.prec() == prec {
            im
        } else {
            Float::with_val(prec, im)
        };
        Self { re, im }
    }

    /// Exact small rational `num/den` rounded once at `prec`.
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        let mut re = Float::with_val(prec, num);
        re /= den;
        Self::real(re)
    }

    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self, NumericError> {
        let parse_one = |s: &str| {
            Float::parse(s.trim())
                .map(|v| Float::with_val(prec, v))
                .map_err(|e| NumericError::Parse(format!("{s:?}: {e}")))
        };
        Ok(Self {
            re: parse_one(re)?,
            im: parse_one(im)?,
        })
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn ensure_finite(self) -> Result<Self, NumericError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(NumericError::NonFinite)
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), &self.re * &self.re + &self.im * &self.im)
    }

    /// Modulus `|z|`.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        Self {
            re: Float::with_val(self.prec(), &self.re * k),
            im: Float::with_val(self.prec(), &self.im * k),
        }
    }

    pub fn scale(&self, k: &Float) -> Self {
        Self {
            re: Float::with_val(self.prec(), &self.re * k),
            im: Float::with_val(self.prec(), &self.im * k),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = Self::one(self.prec());
        for _ in 0..n {
            acc *= self;
        }
        acc
    }

    /// Division that refuses collapsing denominators: `|den|` must exceed
    /// `2^(-prec/2)` times the numerator scale (or be nonzero when the
    /// numerator vanishes).
    pub fn checked_div(&self, den: &Self) -> Result<Self, NumericError> {
        check_prec(self.prec(), den.prec());
        let prec = self.prec();
        let dn = den.norm_sqr();
        if dn.is_zero() {
            return Err(NumericError::DivisionCollapse);
        }
        let nn = self.norm_sqr();
        if !nn.is_zero() {
            // |den|^2 <= 2^-prec |num|^2  <=>  |den| <= 2^(-prec/2) |num|
            let mut bound = nn.clone();
            bound >>= prec;
            if dn <= bound {
                return Err(NumericError::DivisionCollapse);
            }
        }
        let num = self * &den.conj();
        let mut re = num.re;
        re /= &dn;
        let mut im = num.im;
        im /= &dn;
        Self { re, im }.ensure_finite()
    }

    /// Division that only refuses an exactly zero denominator.
    pub fn div_nonzero(&self, den: &Self) -> Result<Self, NumericError> {
        check_prec(self.prec(), den.prec());
        let dn = den.norm_sqr();
        if dn.is_zero() {
            return Err(NumericError::DivisionCollapse);
        }
        let num = self * &den.conj();
        let mut re = num.re;
        re /= &dn;
        let mut im = num.im;
        im /= &dn;
        Self { re, im }.ensure_finite()
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        Self::one(self.prec()).checked_div(self)
    }

    /// `log|z|` as a float at the value's precision.
    pub fn ln_abs(&self) -> Float {
        let mut n = self.norm_sqr();
        n.ln_mut();
        n /= 2;
        n
    }

    /// Full-precision decimal string pair, as used in JSON outputs.
    pub fn to_decimal_pair(&self) -> [String; 2] {
        [decimal_string(&self.re), decimal_string(&self.im)]
    }
}

/// Decimal representation carrying every significant bit of `x`.
pub fn decimal_string(x: &Float) -> String {
    x.to_string_radix(10, None)
}

/// `x` printed with `digits` significant decimal digits, truncated toward zero.
pub fn truncated_string(x: &Float, digits: usize) -> String {
    x.to_string_radix_round(10, Some(digits.max(1)), Round::Zero)
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} {:+e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(
            f,
            "{} + {}i",
            self.re.to_string_radix(10, Some(digits)),
            self.im.to_string_radix(10, Some(digits))
        )
    }
}

impl Serialize for BigComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let [re, im] = self.to_decimal_pair();
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&re)?;
        t.serialize_element(&im)?;
        t.end()
    }
}

/// JSON form of a complex value: `["re", "im"]` decimal strings.
///
/// Precision is not recoverable from the digits alone, so parsing back goes
/// through [`ComplexRepr::to_big`] with an explicit precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRepr(pub String, pub String);

impl ComplexRepr {
    pub fn to_big(&self, prec: u32) -> Result<BigComplex, NumericError> {
        BigComplex::parse(&self.0, &self.1, prec)
    }
}

impl From<&BigComplex> for ComplexRepr {
    fn from(z: &BigComplex) -> Self {
        let [re, im] = z.to_decimal_pair();
        ComplexRepr(re, im)
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        check_prec(self.prec(), rhs.prec());
        BigComplex {
            re: Float::with_val(self.prec(), &self.re + &rhs.re),
            im: Float::with_val(self.prec(), &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        check_prec(self.prec(), rhs.prec());
        BigComplex {
            re: Float::with_val(self.prec(), &self.re - &rhs.re),
            im: Float::with_val(self.prec(), &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        check_prec(self.prec(), rhs.prec());
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &rhs.re - &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im + &self.im * &rhs.re);
        BigComplex { re, im }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.prec(), -&self.re),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(mut self) -> BigComplex {
        self.re = -self.re;
        self.im = -self.im;
        self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                self.$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &BigComplex) {
        check_prec(self.prec(), rhs.prec());
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &BigComplex) {
        check_prec(self.prec(), rhs.prec());
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&BigComplex> for BigComplex {
    fn mul_assign(&mut self, rhs: &BigComplex) {
        check_prec(self.prec(), rhs.prec());
        let p = self.prec();
        let im = Float::with_val(p, &self.re * &rhs.im + &self.im * &rhs.re);
        self.re = Float::with_val(p, &self.re * &rhs.re - &self.im * &rhs.im);
        self.im = im;
    }
}

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq)]
pub enum RiemannPoint {
    Finite(BigComplex),
    Infinity,
}

impl RiemannPoint {
    pub fn finite(&self) -> Option<&BigComplex> {
        match self {
            RiemannPoint::Finite(z) => Some(z),
            RiemannPoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RiemannPoint::Infinity)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        RiemannPoint::Finite(BigComplex::from_f64(re, im, prec))
    }

    /// Chordal distance on the unit sphere, in `[0, 2]`.
    pub fn chordal_distance(&self, other: &RiemannPoint) -> f64 {
        match (self, other) {
            (RiemannPoint::Infinity, RiemannPoint::Infinity) => 0.0,
            (RiemannPoint::Finite(z), RiemannPoint::Infinity)
            | (RiemannPoint::Infinity, RiemannPoint::Finite(z)) => {
                let n = z.norm_sqr();
                let mut d = Float::with_val(z.prec(), &n + 1u32);
                d.sqrt_mut();
                (Float::with_val(z.prec(), 2u32) / d).to_f64()
            }
            (RiemannPoint::Finite(a), RiemannPoint::Finite(b)) => {
                let p = a.prec().max(b.prec());
                let (a, b) = (a.with_prec(p), b.with_prec(p));
                let diff = (&a - &b).abs();
                let mut da = Float::with_val(p, a.norm_sqr() + 1u32);
                da.sqrt_mut();
                let mut db = Float::with_val(p, b.norm_sqr() + 1u32);
                db.sqrt_mut();
                let mut r = diff * 2u32;
                r /= da;
                r /= db;
                r.to_f64()
            }
        }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        match self {
            RiemannPoint::Finite(z) => RiemannPoint::Finite(z.with_prec(prec)),
            RiemannPoint::Infinity => RiemannPoint::Infinity,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            RiemannPoint::Finite(z) => RiemannPoint::Finite(z.conj()),
            RiemannPoint::Infinity => RiemannPoint::Infinity,
        }
    }
}

impl From<BigComplex> for RiemannPoint {
    fn from(z: BigComplex) -> Self {
        RiemannPoint::Finite(z)
    }
}

/// Orders two floats by absolute value.
pub fn cmp_abs(a: &Float, b: &Float) -> Ordering {
    a.cmp_abs(b).unwrap_or(Ordering::Equal)
}
