use super::color::ColorClass;
use super::grid::{image_from, par_grid, Window};
use super::image::Image;
use super::RENDER_PREC;
use crate::numerics::{RationalMap, RiemannPoint};

/// Iterates `h` until the orbit is within chordal distance `eps` of one of
/// `attractors`; `JuliaResidual` if that does not happen in `max_iter` steps.
pub fn classify_basin(h: &RationalMap, z: &RiemannPoint, attractors: &[RiemannPoint], eps: f64, max_iter: usize) -> ColorClass {
    let mut z = z.clone();
    for k in 0..=max_iter {
        if let Some(i) = attractors.iter().position(|a| a.chordal_distance(&z) < eps) {
            return ColorClass::BasinOf(i);
        }
        if k == max_iter {
            break;
        }
        z = match h.eval(&z) {
            Ok(v) => v,
            Err(_) => break,
        };
    }
    ColorClass::JuliaResidual
}

#[derive(Clone, Debug)]
pub struct BasinRender {
    pub image: Image,
    pub classes: Vec<ColorClass>,
}

impl BasinRender {
    /// Fraction of pixels in each basin, then the residual fraction last.
    pub fn fractions(&self, n_attractors: usize) -> Vec<f64> {
        let mut counts = vec![0usize; n_attractors + 1];
        for c in &self.classes {
            match c {
                ColorClass::BasinOf(i) if *i < n_attractors => counts[*i] += 1,
                _ => counts[n_attractors] += 1,
            }
        }
        counts.iter().map(|&c| c as f64 / self.classes.len() as f64).collect()
    }

    /// Fraction of pixels whose class differs from `other`.
    pub fn churn(&self, other: &BasinRender) -> f64 {
        let diff = self.classes.iter().zip(&other.classes).filter(|(a, b)| a != b).count();
        diff as f64 / self.classes.len() as f64
    }
}

pub fn render_basins(
    h: &RationalMap,
    attractors: &[RiemannPoint],
    window: &Window,
    size: (usize, usize),
    eps: f64,
    max_iter: usize,
) -> BasinRender {
    let (w, hgt) = size;
    let h = h.with_prec(RENDER_PREC);
    let attractors: Vec<_> = attractors.iter().map(|a| a.with_prec(RENDER_PREC)).collect();
    let classes = par_grid(w, hgt, |i, j| {
        let (re, im) = window.pixel_point(i, j, w, hgt);
        classify_basin(&h, &RiemannPoint::from_f64(re, im, RENDER_PREC), &attractors, eps, max_iter)
    });
    let image = image_from(w, hgt, classes.iter().map(|c| c.rgb()));
    BasinRender { image, classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::LimitMapSet;

    fn pts(v: &[Option<f64>]) -> Vec<RiemannPoint> {
        v.iter()
            .map(|x| match x {
                Some(r) => RiemannPoint::from_f64(*r, 0.0, RENDER_PREC),
                None => RiemannPoint::Infinity,
            })
            .collect()
    }

    #[test]
    fn point_examples() {
        let set = LimitMapSet::standard();
        let h2 = set.h2().to_map(RENDER_PREC);
        let att = pts(&[Some(0.0), Some(-0.5), None]);
        let zero = RiemannPoint::from_f64(0.0, 0.0, RENDER_PREC);
        assert_eq!(classify_basin(&h2, &zero, &att, 1e-6, 0), ColorClass::BasinOf(0));
        let third = set.h2().eval(&crate::limits::QPoint::frac(-1, 3));
        assert_eq!(third, crate::limits::QPoint::Infinity);
        let z = crate::limits::QPoint::frac(-1, 3).to_riemann(RENDER_PREC);
        assert_eq!(classify_basin(&h2, &z, &att, 1e-6, 1), ColorClass::BasinOf(2));
    }

    #[test]
    fn small_h1_render_is_symmetric() {
        let set = LimitMapSet::standard();
        let r = render_basins(
            &set.h1().to_map(RENDER_PREC),
            &pts(&[Some(0.0), Some(1.0), None]),
            &Window::square((0.0, 0.0), 3.0),
            (32, 32),
            1e-6,
            200,
        );
        for j in 0..32 {
            for i in 0..32 {
                assert_eq!(r.classes[j * 32 + i], r.classes[(31 - j) * 32 + i]);
            }
        }
        let f = r.fractions(3);
        assert!(f[..3].iter().all(|&x| x > 0.0), "{f:?}");
    }
}
