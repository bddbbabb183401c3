use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::qpoly::{rat, QPoly};
use super::LimitError;
use crate::numerics::poly_roots;

/// Homotopy class of a preimage component that does not count: null-homotopic
/// or peripheral.
pub const TRIVIAL: &str = "trivial";

/// One component of the preimage of `target`, homotopic to `class`, mapped
/// onto `target` with the given degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageRecord {
    pub class: String,
    pub target: String,
    pub degree: u32,
}

impl PreimageRecord {
    pub fn new(class: &str, target: &str, degree: u32) -> Self {
        Self {
            class: class.into(),
            target: target.into(),
            degree,
        }
    }
}

/// The preimage data of the obstructing multicurve `{a, b}`: the preimage of
/// `a` has a component homotopic to `a` (mapped 2:1) and one homotopic to `b`
/// (1:1); the preimage of `b` has a component homotopic to `a` (2:1) and a
/// trivial one.
pub fn obstruction_preimage_data() -> Vec<PreimageRecord> {
    vec![
        PreimageRecord::new("a", "a", 2),
        PreimageRecord::new("b", "a", 1),
        PreimageRecord::new("a", "b", 2),
        PreimageRecord::new(TRIVIAL, "b", 1),
    ]
}

fn ser_rationals<S: Serializer>(m: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    rows.serialize(s)
}

/// `entries[γ][δ] = Σ 1/deg` over preimage components of `δ` homotopic to `γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionMatrix {
    pub labels: Vec<String>,
    #[serde(serialize_with = "ser_rationals")]
    pub entries: Vec<Vec<BigRational>>,
}

impl TransitionMatrix {
    pub fn from_rows(labels: &[&str], rows: &[&[(i64, i64)]]) -> Self {
        Self {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            entries: rows.iter().map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect()).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }

    /// Characteristic polynomial `det(λI − M)` by Faddeev–LeVerrier.
    pub fn characteristic_polynomial(&self) -> QPoly {
        let n = self.size();
        let mul = |a: &[Vec<BigRational>], b: &[Vec<BigRational>]| -> Vec<Vec<BigRational>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
                .collect()
        };
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c[n - k + 1];
            }
            let am = mul(&self.entries, &m);
            let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
            c[n - k] = -tr / rat(k as i64, 1);
            m = am;
        }
        QPoly::new(c)
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Accumulates the preimage records. Labels are the non-trivial curve names
/// in order of first appearance.
pub fn build_transition_matrix(data: &[PreimageRecord]) -> Result<TransitionMatrix, LimitError> {
    let mut labels: Vec<String> = Vec::new();
    for r in data {
        if r.degree == 0 {
            return Err(LimitError::Matrix(format!("record {} <- {} has degree 0", r.class, r.target)));
        }
        for name in [&r.target, &r.class] {
            if name != TRIVIAL && !labels.contains(name) {
                labels.push(name.clone());
            }
        }
    }
    let n = labels.len();
    let idx = |s: &str| labels.iter().position(|l| l == s);
    let mut entries = vec![vec![BigRational::zero(); n]; n];
    for r in data {
        if let (Some(i), Some(j)) = (idx(&r.class), idx(&r.target)) {
            entries[i][j] += rat(1, r.degree as i64);
        }
    }
    Ok(TransitionMatrix { labels, entries })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalue {
    Exact(BigRational),
    Approx { re: f64, im: f64 },
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        match self {
            Self::Exact(r) => rational_f64(&r.abs()),
            Self::Approx { re, im } => re.hypot(*im),
        }
    }
}

fn rational_f64(r: &BigRational) -> f64 {
    let s = |i: &BigInt| i.to_string().parse::<f64>().unwrap_or(f64::NAN);
    s(r.numer()) / s(r.denom())
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(r) => write!(f, "{r}"),
            Self::Approx { re, im } => write!(f, "{re:.17e}{im:+.17e}i"),
        }
    }
}

impl Serialize for Eigenvalue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub characteristic_polynomial: String,
    /// With multiplicity, by decreasing modulus; ties put the larger real value first.
    pub eigenvalues: Vec<Eigenvalue>,
    pub leading: Eigenvalue,
    pub obstructed: bool,
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Exact eigenvalues where they are rational (including a quadratic factor
/// with square discriminant); the rest numerically. Obstructed iff the
/// leading eigenvalue is real and at least 1.
pub fn leading_eigenvalue(m: &TransitionMatrix) -> Result<Spectrum, LimitError> {
    let n = m.size();
    if n == 0 || n > 4 || m.entries.len() != n || m.entries.iter().any(|r| r.len() != n) {
        return Err(LimitError::Matrix(format!("expected a square matrix of size 1..=4, got {n}")));
    }
    let chi = m.characteristic_polynomial();
    let (roots, rest) = chi.rational_roots();
    let mut eig: Vec<Eigenvalue> = roots
        .into_iter()
        .flat_map(|(r, k)| std::iter::repeat(Eigenvalue::Exact(r)).take(k))
        .collect();
    match rest.degree().unwrap_or(0) {
        0 => {}
        2 => {
            let (c, b, a) = (rest.coeff(0), rest.coeff(1), rest.coeff(2));
            let disc = &b * &b - rat(4, 1) * &a * &c;
            match rational_sqrt(&disc) {
                Some(sq) => {
                    for sgn in [1, -1] {
                        eig.push(Eigenvalue::Exact((-&b + rat(sgn, 1) * &sq) / (rat(2, 1) * &a)));
                    }
                }
                None => eig.extend(numeric_roots(&rest)?),
            }
        }
        _ => eig.extend(numeric_roots(&rest)?),
    }
    eig.sort_by(|x, y| {
        y.modulus().total_cmp(&x.modulus()).then_with(|| match (x, y) {
            (Eigenvalue::Exact(a), Eigenvalue::Exact(b)) => b.cmp(a),
            _ => std::cmp::Ordering::Equal,
        })
    });
    let leading = eig[0].clone();
    let obstructed = match &leading {
        Eigenvalue::Exact(r) => *r >= BigRational::one(),
        Eigenvalue::Approx { re, im } => *im == 0.0 && *re >= 1.0,
    };
    Ok(Spectrum {
        characteristic_polynomial: chi.to_string().replace('z', "λ"),
        eigenvalues: eig,
        leading,
        obstructed,
    })
}

fn numeric_roots(p: &QPoly) -> Result<Vec<Eigenvalue>, LimitError> {
    let roots = poly_roots(&p.to_poly(128), 128)?;
    Ok(roots
        .into_iter()
        .map(|r| {
            // a real root of a real polynomial: drop the rounding-level imaginary part
            let im = if r.im_f64().abs() < 1e-30 { 0.0 } else { r.im_f64() };
            Eigenvalue::Approx { re: r.re_f64(), im }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact(list: &[(i64, i64)]) -> Vec<Eigenvalue> {
        list.iter().map(|&(n, d)| Eigenvalue::Exact(rat(n, d))).collect()
    }

    #[test]
    fn obstruction_matrix() {
        let m = build_transition_matrix(&obstruction_preimage_data()).unwrap();
        assert_eq!(m, TransitionMatrix::from_rows(&["a", "b"], &[&[(1, 2), (1, 2)], &[(1, 1), (0, 1)]]));
        let s = leading_eigenvalue(&m).unwrap();
        assert_eq!(m.characteristic_polynomial(), QPoly::parse(&["-1/2", "-1/2", "1"]).unwrap());
        assert_eq!(s.eigenvalues, exact(&[(1, 1), (-1, 2)]));
        assert!(s.obstructed);
    }

    #[test]
    fn small_cases() {
        let sym = TransitionMatrix::from_rows(&["a", "b"], &[&[(0, 1), (1, 2)], &[(1, 2), (0, 1)]]);
        let s = leading_eigenvalue(&sym).unwrap();
        assert_eq!(s.eigenvalues, exact(&[(1, 2), (-1, 2)]));
        assert!(!s.obstructed);
        let id = TransitionMatrix::from_rows(&["a", "b"], &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let s = leading_eigenvalue(&id).unwrap();
        assert_eq!(s.eigenvalues, exact(&[(1, 1), (1, 1)]));
        assert!(s.obstructed);
    }

    #[test]
    fn degenerate_data() {
        let empty = build_transition_matrix(&[]).unwrap();
        assert_eq!(empty.size(), 0);
        assert!(empty.is_zero());
        assert!(leading_eigenvalue(&empty).is_err());
        let levy = build_transition_matrix(&[PreimageRecord::new("a", "a", 1)]).unwrap();
        assert_eq!(levy.entries, vec![vec![rat(1, 1)]]);
        assert!(leading_eigenvalue(&levy).unwrap().obstructed);
        assert!(build_transition_matrix(&[PreimageRecord::new("a", "a", 0)]).is_err());
    }

    #[test]
    fn irrational_spectrum_goes_numeric() {
        // [[1, 1], [1, 0]]: golden ratio
        let m = TransitionMatrix::from_rows(&["a", "b"], &[&[(1, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        let s = leading_eigenvalue(&m).unwrap();
        assert!((s.leading.modulus() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(s.obstructed);
    }

    proptest! {
        #[test]
        fn char_poly_trace_and_determinant(e in proptest::collection::vec((-6i64..7, 1i64..5), 9)) {
            let rows: Vec<&[(i64, i64)]> = e.chunks(3).collect();
            let m = TransitionMatrix::from_rows(&["a", "b", "c"], &rows);
            let chi = m.characteristic_polynomial();
            let a = &m.entries;
            let tr = &a[0][0] + &a[1][1] + &a[2][2];
            let det = &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
                - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
                + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0]);
            prop_assert_eq!(chi.coeff(3), BigRational::one());
            prop_assert_eq!(chi.coeff(2), -tr);
            prop_assert_eq!(chi.coeff(0), -det);
        }
    }
}
