use serde::Serialize;

use super::image::Rgb;

/// What a pixel shows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ColorClass {
    K1Interior,
    K2Interior,
    /// Escaping point; `shade` in `[0, 1]` from the potential.
    Annulus { shade: f64 },
    RayMarker,
    /// Converges to the attractor with this index.
    BasinOf(usize),
    JuliaResidual,
}

pub const BACKGROUND: Rgb = [0, 0, 0];
pub const FREE_DOT: Rgb = [230, 30, 30];
pub const PINNED_DOT: Rgb = [30, 200, 60];

impl ColorClass {
    pub fn rgb(self) -> Rgb {
        match self {
            ColorClass::K1Interior => [25, 25, 35],
            ColorClass::K2Interior => [70, 95, 190],
            ColorClass::Annulus { shade } => {
                let g = (110.0 + 145.0 * shade.clamp(0.0, 1.0)).round() as u8;
                [g, g, g]
            }
            ColorClass::RayMarker => [240, 170, 20],
            // white, light gray, dark gray, then darker for extra attractors
            ColorClass::BasinOf(i) => {
                let g = [255u8, 190, 110, 70].get(i).copied().unwrap_or(50);
                [g, g, g]
            }
            ColorClass::JuliaResidual => [0, 0, 0],
        }
    }

    pub fn is_interior(self) -> bool {
        matches!(self, ColorClass::K1Interior | ColorClass::K2Interior)
    }
}
