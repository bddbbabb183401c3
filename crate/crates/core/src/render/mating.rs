use serde::{Deserialize, Serialize};

use super::color::{ColorClass, BACKGROUND, FREE_DOT, PINNED_DOT};
use super::grid::{image_from, par_grid, Window};
use super::image::Image;
use super::julia::{JuliaOptions, PolyTarget};
use super::{RenderError, RENDER_PREC};
use crate::dynamics::classify_with_capture;
use crate::engine::{Label, PullbackChain};
use crate::numerics::{BigComplex, Mobius, RationalMap, RiemannPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    K1,
    K2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereClass {
    pub class: ColorClass,
    pub side: Side,
    /// Potential on `side`; `None` for interior points.
    pub potential: Option<f64>,
    pub angle: Option<f64>,
    pub on_ray: bool,
}

impl SphereClass {
    pub fn rgb(&self) -> [u8; 3] {
        if self.on_ray {
            ColorClass::RayMarker.rgb()
        } else {
            self.class.rgb()
        }
    }
}

/// A chain lowered to render precision, ready for per-pixel queries.
#[derive(Clone, Debug)]
pub struct RenderChain {
    maps: Vec<RationalMap>,
    base_inverse: Mobius,
    r0_sq: BigComplex,
    ln_r0: f64,
    k1: PolyTarget,
    k2: PolyTarget,
    configs: Vec<[(Label, RiemannPoint); 7]>,
    pub opts: JuliaOptions,
    /// Ray half-width in turns.
    pub ray_tol: f64,
}

impl RenderChain {
    pub fn new(chain: &PullbackChain) -> Result<Self, RenderError> {
        let r0 = chain.r0();
        let configs = chain
            .configs
            .iter()
            .map(|c| Label::ALL.map(|l| (l, c.position(l).with_prec(RENDER_PREC))))
            .collect();
        Ok(Self {
            maps: chain.maps.iter().map(|m| m.with_prec(RENDER_PREC)).collect(),
            base_inverse: chain.base_normalizer().with_prec(RENDER_PREC).inverse(),
            r0_sq: BigComplex::from_f64(r0 * r0, 0.0, RENDER_PREC),
            ln_r0: r0.ln(),
            k1: PolyTarget::p1(&chain.params)?,
            k2: PolyTarget::p2(&chain.params)?,
            configs,
            opts: JuliaOptions {
                max_iter: 300,
                cutoff_potential: 2.0 * r0.ln() + 4.0,
                capture_radius: 1e-4,
                ray_band: 0.0,
            },
            ray_tol: 2e-3,
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Marked positions at level `n`.
    pub fn marked(&self, n: usize) -> &[(Label, RiemannPoint); 7] {
        &self.configs[n]
    }

    /// `F_1 ∘ … ∘ F_n (p)`, at level 0.
    pub fn push_to_base(&self, p: &RiemannPoint, n: usize) -> Result<RiemannPoint, RenderError> {
        if n > self.maps.len() {
            return Err(RenderError::Level { n, len: self.maps.len() });
        }
        let mut z = p.with_prec(RENDER_PREC);
        for k in (1..=n).rev() {
            z = self.maps[k - 1].eval(&z)?;
        }
        Ok(z)
    }

    /// Pushes `p` from level `n` to level 0, undoes the base normalization and
    /// classifies the raw point: by `P1` if it stays bounded or escapes below
    /// `log R0`, otherwise by `P2` in `w = R0²/ζ`.
    pub fn classify(&self, p: &RiemannPoint, n: usize) -> Result<SphereClass, RenderError> {
        let raw = self.base_inverse.apply(&self.push_to_base(p, n)?);
        let w = match &raw {
            RiemannPoint::Infinity => BigComplex::zero(RENDER_PREC),
            RiemannPoint::Finite(z) => {
                let c = self.side(&self.k1, z);
                match c {
                    Some(c) if c.potential.map_or(true, |g| g < self.ln_r0) => return Ok(c),
                    _ => {}
                }
                match self.r0_sq.checked_div(z) {
                    Ok(w) => w,
                    Err(_) => return Ok(self.annulus(Side::K2, 0.0, 0.0)),
                }
            }
        };
        Ok(self.side(&self.k2, &w).unwrap_or_else(|| self.annulus(Side::K2, 0.0, 0.0)))
    }

    fn side(&self, t: &PolyTarget, z: &BigComplex) -> Option<SphereClass> {
        let side = if t.interior == ColorClass::K1Interior { Side::K1 } else { Side::K2 };
        let c = classify_with_capture(&t.poly, z, self.opts.cutoff_potential, self.opts.max_iter, &t.cycle, self.opts.capture_radius);
        if c.is_interior() {
            return Some(SphereClass {
                class: t.interior,
                side,
                potential: None,
                angle: None,
                on_ray: false,
            });
        }
        Some(self.annulus(side, c.potential_f64(), c.angle_f64()))
    }

    /// Shade runs from 0 at `K1` through ½ on the equator to 1 at `K2`.
    fn annulus(&self, side: Side, g: f64, angle: f64) -> SphereClass {
        let t = 0.5 * (g / self.ln_r0).min(1.0);
        let shade = match side {
            Side::K1 => t,
            Side::K2 => 1.0 - t,
        };
        SphereClass {
            class: ColorClass::Annulus { shade },
            side,
            potential: Some(g),
            angle: Some(angle),
            on_ray: angle.min(1.0 - angle) < self.ray_tol,
        }
    }
}

/// Convenience wrapper building a [`RenderChain`] for one query.
pub fn classify_via_chain(p: &RiemannPoint, chain: &PullbackChain, n: usize) -> Result<SphereClass, RenderError> {
    RenderChain::new(chain)?.classify(p, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Projection {
    Flat(Window),
    /// The unit sphere seen from direction `axis`; `ζ` is the stereographic
    /// image of the visible point.
    Orthographic { axis: [f64; 3] },
}

impl Projection {
    pub fn label(&self) -> String {
        match self {
            Projection::Flat(w) => format!("flat_{}", w.label()),
            Projection::Orthographic { axis } => format!("ortho_{}_{}_{}", axis[0], axis[1], axis[2]),
        }
    }

    fn basis(axis: [f64; 3]) -> [[f64; 3]; 3] {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let a = axis.map(|v| v / n);
        let helper = if a[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [0.0, 1.0, 0.0] };
        let cross = |u: [f64; 3], v: [f64; 3]| [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        let mut e1 = cross(helper, a);
        let m = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
        e1 = e1.map(|v| v / m);
        let e2 = cross(a, e1);
        [e1, e2, a]
    }

    /// Point shown at pixel `(i, j)`, if any.
    pub fn pixel_point(&self, i: usize, j: usize, w: usize, h: usize) -> Option<RiemannPoint> {
        match self {
            Projection::Flat(win) => {
                let (re, im) = win.pixel_point(i, j, w, h);
                Some(RiemannPoint::from_f64(re, im, RENDER_PREC))
            }
            Projection::Orthographic { axis } => {
                let s = w.min(h) as f64 / 2.0;
                let x = (i as f64 + 0.5 - w as f64 / 2.0) / s;
                let y = (h as f64 / 2.0 - j as f64 - 0.5) / s;
                let r2 = x * x + y * y;
                if r2 > 1.0 {
                    return None;
                }
                let [e1, e2, a] = Self::basis(*axis);
                let zc = (1.0 - r2).sqrt();
                let p: [f64; 3] = std::array::from_fn(|k| x * e1[k] + y * e2[k] + zc * a[k]);
                if 1.0 - p[2] < 1e-15 {
                    return Some(RiemannPoint::Infinity);
                }
                let d = 1.0 - p[2];
                Some(RiemannPoint::from_f64(p[0] / d, p[1] / d, RENDER_PREC))
            }
        }
    }

    /// Continuous pixel position of `p`, if it is on the visible side.
    pub fn point_pixel(&self, p: &RiemannPoint, w: usize, h: usize) -> Option<(f64, f64)> {
        match self {
            Projection::Flat(win) => {
                let z = p.finite()?;
                let (x, y) = win.point_pixel(z.re_f64(), z.im_f64(), w, h);
                (x >= 0.0 && y >= 0.0 && x < w as f64 && y < h as f64).then_some((x, y))
            }
            Projection::Orthographic { axis } => {
                let q = match p {
                    RiemannPoint::Infinity => [0.0, 0.0, 1.0],
                    RiemannPoint::Finite(z) => {
                        let (a, b) = (z.re_f64(), z.im_f64());
                        let n = 1.0 + a * a + b * b;
                        [2.0 * a / n, 2.0 * b / n, (n - 2.0) / n]
                    }
                };
                let [e1, e2, ax] = Self::basis(*axis);
                let dot = |u: [f64; 3]| u[0] * q[0] + u[1] * q[1] + u[2] * q[2];
                if dot(ax) < 0.0 {
                    return None;
                }
                let s = w.min(h) as f64 / 2.0;
                Some((w as f64 / 2.0 + dot(e1) * s, h as f64 / 2.0 - dot(e2) * s))
            }
        }
    }
}

/// A marked point, classified at its exact position, and the pixel it falls in.
/// At deep levels several marked points can share a pixel, so the pixel-centre
/// sample says nothing about them individually.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedSample {
    pub label: Label,
    pub pixel: Option<(usize, usize)>,
    pub class: SphereClass,
}

#[derive(Clone, Debug)]
pub struct MatingRender {
    pub image: Image,
    pub classes: Vec<Option<SphereClass>>,
    pub marked: Vec<MarkedSample>,
}

/// The sphere at level `n` as seen through `projection`, with the marked
/// points overdrawn: green for the normalizing triple, red for the rest.
pub fn render_mated_sphere(
    chain: &RenderChain,
    n: usize,
    projection: &Projection,
    size: (usize, usize),
) -> Result<MatingRender, RenderError> {
    if n > chain.len() {
        return Err(RenderError::Level { n, len: chain.len() });
    }
    let (w, h) = size;
    let classes = par_grid(w, h, |i, j| {
        projection
            .pixel_point(i, j, w, h)
            .map(|p| chain.classify(&p, n))
            .transpose()
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut image = image_from(w, h, classes.iter().map(|c| c.map_or(BACKGROUND, |c| c.rgb())));
    let radius = (w.min(h) as f64 / 150.0).max(1.5);
    let mut marked = Vec::with_capacity(7);
    for (label, pos) in chain.marked(n) {
        let at = projection.point_pixel(pos, w, h);
        if let Some((x, y)) = at {
            image.dot(x, y, radius, if label.is_pinned() { PINNED_DOT } else { FREE_DOT });
        }
        marked.push(MarkedSample {
            label: *label,
            pixel: at.map(|(x, y)| ((x as usize).min(w - 1), (y as usize).min(h - 1))),
            class: chain.classify(pos, n)?,
        });
    }
    Ok(MatingRender { image, classes, marked })
}
