use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::qpoly::{rat, ser_display, QPoint, QPoly, QRationalMap};
use super::LimitError;

/// The three limit maps between the bubble spheres, and the touching points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitMapSet {
    pub f1: QRationalMap,
    pub f2: QRationalMap,
    pub f3: QRationalMap,
    pub g2: QPoly,
    /// Where the left sphere touches the middle one, in the middle chart.
    pub touching_left_on_middle: QPoint,
    /// The same node, in the left sphere's chart.
    pub touching_on_left: QPoint,
}

impl LimitMapSet {
    pub fn standard() -> Self {
        Self {
            // z²/2 − z
            f1: QRationalMap::polynomial(QPoly::parse(&["0", "-1", "1/2"]).unwrap()),
            // 4z³ / (3z + 1)
            f2: QRationalMap::new(QPoly::from_ints(&[0, 0, 0, 4]), QPoly::from_ints(&[1, 3])),
            f3: QRationalMap::identity(),
            // z²(z + 3)/4
            g2: QPoly::parse(&["0", "0", "3/4", "1/4"]).unwrap(),
            touching_left_on_middle: QPoint::frac(-1, 2),
            touching_on_left: QPoint::int(1),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, LimitError> {
        serde_json::from_str(s).map_err(|e| LimitError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map set serializes")
    }

    /// `F2 ∘ F3 ∘ F1`, the return map of the left sphere.
    pub fn h1(&self) -> QRationalMap {
        self.f2.compose(&self.f3.compose(&self.f1))
    }

    /// `F3 ∘ F1 ∘ F2`, the return map of the middle sphere.
    pub fn h2(&self) -> QRationalMap {
        self.f3.compose(&self.f1.compose(&self.f2))
    }

    /// `F1 ∘ F2 ∘ F3`.
    pub fn h3(&self) -> QRationalMap {
        self.f1.compose(&self.f2.compose(&self.f3))
    }

    /// Structural checks; returns one message per violated property.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, f, d) in [("F1", &self.f1, 2), ("F2", &self.f2, 3), ("F3", &self.f3, 1)] {
            if f.degree() != d {
                out.push(format!("deg {name} = {}, expected {d}", f.degree()));
            }
            if f.eval(&QPoint::int(0)) != QPoint::int(0) {
                out.push(format!("{name}(0) ≠ 0"));
            }
        }
        if self.f2.eval(&self.touching_left_on_middle) != self.touching_on_left {
            out.push(format!("F2({}) ≠ {}", self.touching_left_on_middle, self.touching_on_left));
        }
        if self.f1.eval(&self.touching_on_left) != self.touching_left_on_middle {
            out.push(format!("F1({}) ≠ {}", self.touching_on_left, self.touching_left_on_middle));
        }
        out
    }
}

impl Default for LimitMapSet {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedF2 {
    #[serde(serialize_with = "ser_display")]
    pub a: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub b: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub rejected: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub free_critical_point: BigRational,
    pub g2: QPoly,
    pub f2: QRationalMap,
}

/// Finds `G2(z) = a z² + b z³` with `G2(1) = 1` and critical value `1` at
/// the free critical point `−2a/(3b)`: `a + b = 1`, `4a³ = 27b²`.
///
/// Substituting `b = 1 − a` gives `4a³ − 27a² + 54a − 27 = (a − 3)²(4a − 3)`.
/// The double root puts the free critical point at `1`, on top of the other
/// touching point, so the simple root is taken. `F2` is `1/G2(1/z)`.
pub fn derive_f2() -> Result<DerivedF2, LimitError> {
    let cubic = QPoly::from_ints(&[-27, 54, -27, 4]);
    let (roots, _) = cubic.rational_roots();
    let pick = |m: usize| {
        roots
            .iter()
            .find(|(_, k)| *k == m)
            .map(|(r, _)| r.clone())
            .ok_or_else(|| LimitError::Derivation(format!("no root of multiplicity {m}")))
    };
    let a = pick(1)?;
    let rejected = pick(2)?;
    let b = BigRational::one() - &a;
    let free = -(rat(2, 1) * &a) / (rat(3, 1) * &b);
    let crit_of = |a: &BigRational| -(rat(2, 1) * a) / (rat(3, 1) * (BigRational::one() - a));
    if crit_of(&rejected) != BigRational::one() {
        return Err(LimitError::Derivation("rejected branch does not collide with 1".into()));
    }
    let g2 = QPoly::new(vec![BigRational::zero(), BigRational::zero(), a.clone(), b.clone()]);
    // 1/G2(1/z) = z³ / (a z + b)
    let f2 = QRationalMap::new(
        QPoly::new(vec![BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::one()]),
        QPoly::new(vec![b.clone(), a.clone()]),
    );
    Ok(DerivedF2 {
        a,
        b,
        rejected,
        free_critical_point: free,
        g2,
        f2,
    })
}
