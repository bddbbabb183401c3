use serde::Serialize;

use super::color::ColorClass;
use super::grid::{image_from, par_grid, Window};
use super::image::Image;
use super::RENDER_PREC;
use crate::dynamics::{classify_with_capture, DynamicsError, MatingParameters};
use crate::numerics::{BigComplex, Poly};

#[derive(Clone, Debug, Serialize)]
pub struct JuliaOptions {
    pub max_iter: usize,
    pub cutoff_potential: f64,
    /// Capture radius around the superattracting cycle.
    pub capture_radius: f64,
    /// Ray half-width in turns per unit of window width.
    pub ray_band: f64,
}

impl Default for JuliaOptions {
    fn default() -> Self {
        Self {
            max_iter: 400,
            cutoff_potential: 20.0,
            capture_radius: 1e-4,
            ray_band: 0.02,
        }
    }
}

/// A monic cubic with its critical cycle.
#[derive(Clone, Debug)]
pub struct PolyTarget {
    pub poly: Poly,
    pub cycle: Vec<BigComplex>,
    pub interior: ColorClass,
}

impl PolyTarget {
    pub fn p1(params: &MatingParameters) -> Result<Self, DynamicsError> {
        let p = params.with_prec(RENDER_PREC)?;
        Ok(Self {
            poly: p.p1(),
            cycle: vec![p.x.clone(), p.y.clone(), p.y1.clone()],
            interior: ColorClass::K1Interior,
        })
    }

    pub fn p2(params: &MatingParameters) -> Result<Self, DynamicsError> {
        let p = params.with_prec(RENDER_PREC)?;
        Ok(Self {
            poly: p.p2(),
            cycle: vec![BigComplex::zero(RENDER_PREC), p.c.clone(), p.c2.clone()],
            interior: ColorClass::K2Interior,
        })
    }

    /// Interior, or escaped with shade `frac(log₃ potential)`; the ray of
    /// angle 0 wins where the angle is within `ray_tol` turns of 0.
    pub fn classify(&self, z: &BigComplex, opts: &JuliaOptions, ray_tol: f64) -> ColorClass {
        let c = classify_with_capture(
            &self.poly,
            z,
            opts.cutoff_potential,
            opts.max_iter,
            &self.cycle,
            opts.capture_radius,
        );
        if c.is_interior() {
            return self.interior;
        }
        let a = c.angle_f64();
        if a.min(1.0 - a) < ray_tol {
            return ColorClass::RayMarker;
        }
        let g = c.potential_f64();
        ColorClass::Annulus {
            shade: (g.ln() / 3f64.ln()).rem_euclid(1.0),
        }
    }
}

pub fn render_polynomial(target: &PolyTarget, window: &Window, size: (usize, usize), opts: &JuliaOptions) -> Image {
    let (w, h) = size;
    let ray_tol = opts.ray_band / window.width();
    let colors = par_grid(w, h, |i, j| {
        let (re, im) = window.pixel_point(i, j, w, h);
        target.classify(&BigComplex::from_f64(re, im, RENDER_PREC), opts, ray_tol).rgb()
    });
    image_from(w, h, colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::solve_parameters;

    #[test]
    fn point_classes() {
        let params = solve_parameters(128).unwrap();
        let t = PolyTarget::p1(&params).unwrap();
        let o = JuliaOptions::default();
        assert_eq!(t.classify(&params.x, &o, 0.0), ColorClass::K1Interior);
        let far = t.classify(&BigComplex::from_f64(0.0, 1e3, 128), &o, 0.0);
        let g = classify_with_capture(&t.poly, &BigComplex::from_f64(0.0, 1e3, 128), 20.0, 400, &[], 0.0);
        assert!((g.potential_f64() - 1e3f64.ln()).abs() < 1e-5);
        assert!(matches!(far, ColorClass::Annulus { .. }));
        assert_eq!(t.classify(&BigComplex::from_f64(50.0, 0.0, 128), &o, 1e-3), ColorClass::RayMarker);
    }

    #[test]
    fn p1_picture_is_not_odd() {
        let params = solve_parameters(128).unwrap();
        let t = PolyTarget::p1(&params).unwrap();
        let o = JuliaOptions::default();
        let mut differ = 0;
        for k in 0..200 {
            let z = BigComplex::from_f64(-1.6 + 0.016 * k as f64, 0.07, 128);
            let (a, b) = (t.classify(&z, &o, 0.0), t.classify(&-&z, &o, 0.0));
            if a.is_interior() != b.is_interior() {
                differ += 1;
            }
        }
        assert!(differ > 0);
    }

    #[test]
    fn small_render_has_both_kinds() {
        let params = solve_parameters(128).unwrap();
        let im = render_polynomial(&PolyTarget::p2(&params).unwrap(), &Window::square((0.0, 0.0), 2.0), (24, 24), &JuliaOptions::default());
        let px: Vec<_> = im.pixels.chunks(3).collect();
        assert!(px.iter().any(|p| *p == ColorClass::K2Interior.rgb()));
        assert!(px.iter().any(|p| *p != ColorClass::K2Interior.rgb()));
    }
}
