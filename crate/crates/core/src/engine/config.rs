use std::fmt;

use rug::ops::PowAssign;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::numerics::{BigComplex, NumericError, RiemannPoint};

/// The seven marked points of the mating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    X,
    Y,
    Y1,
    C0,
    C1,
    C2,
    E0,
}

impl Label {
    pub const ALL: [Label; 7] = [Label::X, Label::Y, Label::Y1, Label::C0, Label::C1, Label::C2, Label::E0];
    /// Labels whose positions are not fixed by the normalization.
    pub const FREE: [Label; 4] = [Label::Y, Label::Y1, Label::C1, Label::C2];

    pub fn name(self) -> &'static str {
        match self {
            Label::X => "x",
            Label::Y => "y",
            Label::Y1 => "y1",
            Label::C0 => "c0",
            Label::C1 => "c1",
            Label::C2 => "c2",
            Label::E0 => "e0",
        }
    }

    pub fn is_pinned(self) -> bool {
        matches!(self, Label::X | Label::C0 | Label::E0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Combinatorics of the formal mating: where each marked point goes and
/// with what local degree.
#[derive(Clone, Copy, Debug, Default)]
pub struct MatingSchema;

impl MatingSchema {
    pub const DEGREE: u32 = 3;

    pub fn labels(&self) -> &'static [Label] {
        &Label::ALL
    }

    pub fn image_of(&self, l: Label) -> Label {
        match l {
            Label::X => Label::Y,
            Label::Y => Label::Y1,
            Label::Y1 => Label::X,
            Label::C0 => Label::C1,
            Label::C1 => Label::C2,
            Label::C2 => Label::C0,
            Label::E0 => Label::E0,
        }
    }

    pub fn local_degree_at(&self, l: Label) -> u32 {
        match l {
            Label::X | Label::Y => 2,
            Label::C0 => 3,
            _ => 1,
        }
    }
}

/// A level `R = r0^(1/3^depth)`, kept symbolically so that the cube of
/// level `n` is level `n − 1` exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub r0: f64,
    pub depth: u32,
}

impl Level {
    pub fn base(r0: f64) -> Self {
        Self { r0, depth: 0 }
    }

    /// The level whose cube is `self`.
    pub fn cube_root(self) -> Self {
        Self { depth: self.depth + 1, ..self }
    }

    pub fn cube(self) -> Option<Self> {
        self.depth.checked_sub(1).map(|depth| Self { depth, ..self })
    }

    pub fn value(&self, prec: u32) -> Float {
        let mut l = Float::with_val(prec, self.r0);
        l.ln_mut();
        let mut scale = Float::with_val(prec, 3u32);
        scale.pow_assign(self.depth);
        scale.recip_mut();
        l *= scale;
        l.exp_mut();
        l
    }

    pub fn value_f64(&self) -> f64 {
        (self.r0.ln() / 3f64.powi(self.depth as i32)).exp()
    }
}

/// Normalized positions of the marked points at one level:
/// `c0 = 0`, `e0 = 1` and `x = ∞` are pinned, the other four are free.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedConfiguration {
    pub level: Level,
    pub y: BigComplex,
    pub y1: BigComplex,
    pub c1: BigComplex,
    pub c2: BigComplex,
}

impl MarkedConfiguration {
    pub fn new(
        level: Level,
        y: BigComplex,
        y1: BigComplex,
        c1: BigComplex,
        c2: BigComplex,
    ) -> Result<Self, NumericError> {
        let conf = Self { level, y, y1, c1, c2 };
        let prec = conf.prec();
        if [&conf.y1, &conf.c1, &conf.c2].iter().any(|v| v.prec() != prec) {
            return Err(NumericError::Degenerate("mixed precision configuration".into()));
        }
        if conf.min_separation() <= 0.0 || !conf.free().iter().all(|v| v.is_finite()) {
            return Err(NumericError::Degenerate("coincident marked points".into()));
        }
        Ok(conf)
    }

    pub fn prec(&self) -> u32 {
        self.y.prec()
    }

    pub fn position(&self, l: Label) -> RiemannPoint {
        let p = self.prec();
        match l {
            Label::X => RiemannPoint::Infinity,
            Label::C0 => RiemannPoint::Finite(BigComplex::zero(p)),
            Label::E0 => RiemannPoint::Finite(BigComplex::one(p)),
            Label::Y => RiemannPoint::Finite(self.y.clone()),
            Label::Y1 => RiemannPoint::Finite(self.y1.clone()),
            Label::C1 => RiemannPoint::Finite(self.c1.clone()),
            Label::C2 => RiemannPoint::Finite(self.c2.clone()),
        }
    }

    /// Free positions in the order `y, y1, c1, c2`.
    pub fn free(&self) -> [&BigComplex; 4] {
        [&self.y, &self.y1, &self.c1, &self.c2]
    }

    /// The six finite positions (free points plus `c0 = 0` and `e0 = 1`).
    fn finite_points(&self) -> Vec<BigComplex> {
        let p = self.prec();
        vec![
            self.y.clone(),
            self.y1.clone(),
            self.c1.clone(),
            self.c2.clone(),
            BigComplex::zero(p),
            BigComplex::one(p),
        ]
    }

    /// For each free point, the distance to the nearest other finite marked point.
    pub fn nearest_distances(&self) -> [Float; 4] {
        let pts = self.finite_points();
        std::array::from_fn(|i| {
            let mut best: Option<Float> = None;
            for (j, q) in pts.iter().enumerate() {
                if j != i {
                    let d = (&pts[i] - q).abs();
                    if best.as_ref().map_or(true, |b| d < *b) {
                        best = Some(d);
                    }
                }
            }
            best.expect("six points")
        })
    }

    /// Smallest pairwise distance among the six finite marked points.
    pub fn min_separation(&self) -> f64 {
        let pts = self.finite_points();
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            for j in 0..i {
                best = best.min((&pts[i] - &pts[j]).abs_f64());
            }
        }
        best
    }

    /// `v = c1 − y`.
    pub fn v(&self) -> BigComplex {
        &self.c1 - &self.y
    }

    /// `u = c2 − y1`.
    pub fn u(&self) -> BigComplex {
        &self.c2 - &self.y1
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self {
            level: self.level,
            y: self.y.with_prec(prec),
            y1: self.y1.with_prec(prec),
            c1: self.c1.with_prec(prec),
            c2: self.c2.with_prec(prec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_critical_count_is_2d_minus_2() {
        let s = MatingSchema;
        let total: u32 = s.labels().iter().map(|&l| s.local_degree_at(l) - 1).sum();
        assert_eq!(total, 2 * MatingSchema::DEGREE - 2);
    }

    #[test]
    fn schema_cycles_are_bijections() {
        let s = MatingSchema;
        for group in [[Label::X, Label::Y, Label::Y1], [Label::C0, Label::C1, Label::C2]] {
            let mut images: Vec<Label> = group.iter().map(|&l| s.image_of(l)).collect();
            images.sort();
            let mut g = group.to_vec();
            g.sort();
            assert_eq!(images, g);
        }
        assert_eq!(s.image_of(Label::E0), Label::E0);
    }

    #[test]
    fn schedule_values() {
        let l1 = Level::base(1e4).cube_root();
        let l2 = l1.cube_root();
        let l3 = l2.cube_root();
        assert!((l1.value(128).to_f64() - 21.544346900318837).abs() < 1e-12);
        assert!((l2.value(128).to_f64() - 2.7825594022071245).abs() < 1e-12);
        assert!((l3.value(128).to_f64() - 1.406527242105237).abs() < 1e-12);
        assert_eq!(l3.cube(), Some(l2));
        assert_eq!(Level::base(1e4).cube(), None);
        // cubing the value reproduces the parent level
        let mut cubed = l3.value(256);
        cubed.pow_assign(3u32);
        assert!((cubed - l2.value(256)).abs() < 1e-70);
    }
}
