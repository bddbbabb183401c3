use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::image::{Image, Rgb};
use super::RenderError;

/// Axis-aligned rectangle of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, RenderError> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) && re_min < re_max && im_min < im_max;
        if !ok {
            return Err(RenderError::Config(format!("bad window [{re_min},{re_max}]x[{im_min},{im_max}]")));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    /// `[−h, h]²` around `center`.
    pub fn square(center: (f64, f64), h: f64) -> Self {
        Self {
            re_min: center.0 - h,
            re_max: center.0 + h,
            im_min: center.1 - h,
            im_max: center.1 + h,
        }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    fn center(&self) -> (f64, f64) {
        (0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    /// Centre of pixel `(i, j)`, row 0 at the top. Written as
    /// `centre + half·(W − 1 − 2i)/W` so that a window symmetric about the
    /// real axis gives exactly conjugate points in rows `j` and `H − 1 − j`.
    pub fn pixel_point(&self, i: usize, j: usize, w: usize, h: usize) -> (f64, f64) {
        let (cr, ci) = self.center();
        let (hr, hi) = (0.5 * self.width(), 0.5 * (self.im_max - self.im_min));
        let re = cr - hr * ((w as f64 - 1.0 - 2.0 * i as f64) / w as f64);
        let im = ci + hi * ((h as f64 - 1.0 - 2.0 * j as f64) / h as f64);
        (re, im)
    }

    /// Continuous pixel coordinates of a point (pixel `(i, j)` spans `[i, i+1)`).
    pub fn point_pixel(&self, re: f64, im: f64, w: usize, h: usize) -> (f64, f64) {
        let x = (re - self.re_min) / self.width() * w as f64;
        let y = (self.im_max - im) / (self.im_max - self.im_min) * h as f64;
        (x, y)
    }

    pub fn label(&self) -> String {
        format!("{}_{}_{}_{}", self.re_min, self.re_max, self.im_min, self.im_max)
    }
}

impl FromStr for Window {
    type Err = RenderError;

    /// `re_min,re_max,im_min,im_max`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| RenderError::Config(format!("window {s:?}: {e}")))?;
        match v[..] {
            [a, b, c, d] => Window::new(a, b, c, d),
            _ => Err(RenderError::Config(format!("window {s:?} needs four numbers"))),
        }
    }
}

/// Upper bound on render threads from `MATINGLAB_THREADS`, if set.
pub fn thread_cap() -> Option<usize> {
    std::env::var("MATINGLAB_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Evaluates `f` at every pixel in parallel. Each value depends only on its
/// own coordinates, so the output does not depend on scheduling.
pub fn par_grid<T, F>(w: usize, h: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync,
{
    let run = || (0..w * h).into_par_iter().map(|k| f(k % w, k / w)).collect();
    match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(run),
        None => run(),
    }
}

pub fn image_from(w: usize, h: usize, colors: impl IntoIterator<Item = Rgb>) -> Image {
    Image::from_pixels(w, h, colors.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_rows_are_conjugate() {
        let win = Window::square((0.0, 0.0), 3.0);
        for j in [0, 7, 255] {
            let (a, b) = (win.pixel_point(13, j, 512, 512), win.pixel_point(13, 511 - j, 512, 512));
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, -b.1);
        }
    }

    #[test]
    fn pixel_round_trip() {
        let win: Window = "-2,1,-0.5,1.5".parse().unwrap();
        let (re, im) = win.pixel_point(40, 90, 300, 200);
        let (x, y) = win.point_pixel(re, im, 300, 200);
        assert!((x - 40.5).abs() < 1e-9 && (y - 90.5).abs() < 1e-9);
        assert!("1,2,3".parse::<Window>().is_err());
        assert!("1,0,0,1".parse::<Window>().is_err());
    }

    #[test]
    fn grid_order_is_row_major() {
        let v = par_grid(3, 2, |i, j| (i, j));
        assert_eq!(v, vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]);
    }
}
