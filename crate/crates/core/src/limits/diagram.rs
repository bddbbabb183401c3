use std::fmt;

use serde::Serialize;

use super::qpoly::{QPoint, QRationalMap};
use super::LimitError;
use crate::numerics::{poly_roots, RationalMap, RiemannPoint};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalEntry<P> {
    pub point: P,
    pub local_degree: usize,
    pub image: P,
}

/// Critical points of a rational map with local degrees and images.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalDiagram<P> {
    pub degree: usize,
    pub entries: Vec<CriticalEntry<P>>,
}

impl<P> CriticalDiagram<P> {
    /// `Σ (local degree − 1)`.
    pub fn multiplicity_sum(&self) -> usize {
        self.entries.iter().map(|e| e.local_degree - 1).sum()
    }

    /// Riemann–Hurwitz: the sum equals `2d − 2`.
    pub fn is_complete(&self) -> bool {
        self.multiplicity_sum() + 2 == 2 * self.degree
    }
}

impl CriticalDiagram<QPoint> {
    pub fn from_table(degree: usize, table: &[(QPoint, usize, QPoint)]) -> Self {
        let mut entries: Vec<_> = table
            .iter()
            .map(|(p, k, i)| CriticalEntry {
                point: p.clone(),
                local_degree: *k,
                image: i.clone(),
            })
            .collect();
        entries.sort_by(|a, b| a.point.cmp(&b.point));
        Self { degree, entries }
    }
}

impl fmt::Display for CriticalDiagram<QPoint> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| format!("{} -{}-> {}", e.point, e.local_degree, e.image))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Exact critical diagram: rational roots of the Wronskian (a root of
/// multiplicity `m` has local degree `m + 1`) plus `∞` when the Wronskian
/// falls short of degree `2d − 2`. Fails if some critical point is irrational.
pub fn critical_diagram(f: &QRationalMap) -> Result<CriticalDiagram<QPoint>, LimitError> {
    let d = f.degree();
    if d == 0 || d > 8 {
        return Err(LimitError::Unsupported(format!("critical diagram of degree {d}")));
    }
    let w = f.wronskian();
    let (roots, rest) = w.rational_roots();
    if rest.degree().unwrap_or(0) > 0 {
        return Err(LimitError::NonRational(format!("Wronskian factor {rest} has no rational roots")));
    }
    let mut entries: Vec<_> = roots
        .into_iter()
        .map(|(r, m)| {
            let point = QPoint::Finite(r);
            CriticalEntry {
                image: f.eval(&point),
                point,
                local_degree: m + 1,
            }
        })
        .collect();
    let at_inf = (2 * d - 2).saturating_sub(w.degree().unwrap_or(0));
    if at_inf > 0 {
        entries.push(CriticalEntry {
            point: QPoint::Infinity,
            local_degree: at_inf + 1,
            image: f.eval(&QPoint::Infinity),
        });
    }
    entries.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(CriticalDiagram { degree: d, entries })
}

/// Floating-point critical diagram. Roots of the Wronskian closer than
/// `2^(−prec/8)` are merged into one critical point of higher multiplicity.
pub fn critical_diagram_numeric(f: &RationalMap) -> Result<CriticalDiagram<RiemannPoint>, LimitError> {
    let d = f.degree();
    if d == 0 || d > 8 {
        return Err(LimitError::Unsupported(format!("critical diagram of degree {d}")));
    }
    let prec = f.prec();
    let w = f.wronskian().trimmed();
    let wd = w.degree().unwrap_or(0);
    let roots = if wd > 0 { poly_roots(&w, prec)? } else { Vec::new() };
    let merge = 2f64.powf(-(prec as f64) / 8.0);
    let mut clusters: Vec<(RiemannPoint, usize)> = Vec::new();
    for r in roots {
        match clusters.iter_mut().find(|(c, _)| c.finite().is_some_and(|c| (c - &r).abs_f64() < merge)) {
            Some(c) => c.1 += 1,
            None => clusters.push((RiemannPoint::Finite(r), 1)),
        }
    }
    let at_inf = (2 * d - 2).saturating_sub(wd);
    if at_inf > 0 {
        clusters.push((RiemannPoint::Infinity, at_inf));
    }
    let entries = clusters
        .into_iter()
        .map(|(point, m)| {
            Ok(CriticalEntry {
                image: f.eval(&point)?,
                point,
                local_degree: m + 1,
            })
        })
        .collect::<Result<_, LimitError>>()?;
    Ok(CriticalDiagram { degree: d, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::LimitMapSet;
    use crate::limits::qpoly::QPoly;

    #[test]
    fn f2_diagram() {
        let s = LimitMapSet::standard();
        // p'q − pq' = 12z²(3z + 1) − 12z³ = 12z²(2z + 1)
        assert_eq!(s.f2.wronskian(), QPoly::from_ints(&[0, 0, 12, 24]));
        let got = critical_diagram(&s.f2).unwrap();
        let want = CriticalDiagram::from_table(
            3,
            &[
                (QPoint::int(0), 3, QPoint::int(0)),
                (QPoint::frac(-1, 2), 2, QPoint::int(1)),
                (QPoint::Infinity, 2, QPoint::Infinity),
            ],
        );
        assert_eq!(got, want);
        assert!(got.is_complete());
    }

    #[test]
    fn irrational_critical_points_are_refused() {
        // z³ − 3z: critical points ±1, fine; z³ − 6z: ±√2, refused.
        let ok = QRationalMap::polynomial(QPoly::from_ints(&[0, -3, 0, 1]));
        assert!(critical_diagram(&ok).unwrap().is_complete());
        let bad = QRationalMap::polynomial(QPoly::from_ints(&[0, -6, 0, 1]));
        assert!(matches!(critical_diagram(&bad), Err(LimitError::NonRational(_))));
    }

    #[test]
    fn numeric_diagram_matches_exact() {
        let s = LimitMapSet::standard();
        for h in [s.h1(), s.h2()] {
            let exact = critical_diagram(&h).unwrap();
            let num = critical_diagram_numeric(&h.to_map(256)).unwrap();
            assert_eq!(num.entries.len(), exact.entries.len());
            assert!(num.is_complete());
            for e in &exact.entries {
                let p = e.point.to_riemann(256);
                let m = num
                    .entries
                    .iter()
                    .find(|n| n.point.chordal_distance(&p) < 1e-12)
                    .unwrap_or_else(|| panic!("no numeric critical point near {}", e.point));
                assert_eq!(m.local_degree, e.local_degree);
                assert!(m.image.chordal_distance(&e.image.to_riemann(256)) < 1e-12);
            }
        }
    }
}
