use rug::float::Constant;
use rug::ops::PowAssign;
use rug::Float;

use crate::numerics::{BigComplex, Poly};

/// Default escape threshold on `log|z|`. Large enough that the Böttcher
/// correction `log|1 + a/z² + b/z³|` is below `10^-30` at the cut.
pub const DEFAULT_CUTOFF_POTENTIAL: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EscapeStatus {
    Interior,
    Escaped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EscapeClassification {
    pub status: EscapeStatus,
    /// Green's function value; zero when interior.
    pub potential: Float,
    /// External angle in turns, `[0, 1)`; meaningful only when escaped.
    pub angle: Float,
    pub iterations: usize,
}

impl EscapeClassification {
    pub fn is_interior(&self) -> bool {
        self.status == EscapeStatus::Interior
    }

    pub fn potential_f64(&self) -> f64 {
        self.potential.to_f64()
    }

    pub fn angle_f64(&self) -> f64 {
        self.angle.to_f64()
    }

    fn interior(prec: u32, iterations: usize) -> Self {
        Self {
            status: EscapeStatus::Interior,
            potential: Float::new(prec),
            angle: Float::new(prec),
            iterations,
        }
    }
}

/// Escape-time classification under a monic cubic.
///
/// Iterates until `log|z_k|` exceeds `cutoff_potential`, then reports the
/// potential `3^-(k+1) log|z_(k+1)|` (one refining iterate past the cut) and
/// the Böttcher argument
/// `arg z_0 + Σ_j 3^-(j+1) arg(z_(j+1) / z_j³)`, in turns mod 1.
pub fn classify(poly: &Poly, z: &BigComplex, cutoff_potential: f64, max_iter: usize) -> EscapeClassification {
    classify_with_capture(poly, z, cutoff_potential, max_iter, &[], 0.0)
}

/// As [`classify`], but an orbit coming within `capture_radius` of one of
/// `attractors` is declared interior at once. Used for rendering, where the
/// superattracting cycles are known.
pub fn classify_with_capture(
    poly: &Poly,
    z: &BigComplex,
    cutoff_potential: f64,
    max_iter: usize,
    attractors: &[BigComplex],
    capture_radius: f64,
) -> EscapeClassification {
    let prec = z.prec();
    let cut = cutoff_potential;
    let cap2 = capture_radius * capture_radius;
    // The angle is only needed once the orbit escapes, so the (costly)
    // arguments are taken afterwards from the stored orbit.
    let mut orbit = vec![z.clone()];
    loop {
        let zk = orbit.last().unwrap();
        if zk.ln_abs().to_f64() > cut {
            break;
        }
        let k = orbit.len() - 1;
        if k >= max_iter {
            return EscapeClassification::interior(prec, k);
        }
        if cap2 > 0.0 && attractors.iter().any(|a| (zk - a).norm_sqr().to_f64() < cap2) {
            return EscapeClassification::interior(prec, k);
        }
        let next = poly.eval(zk);
        if !next.is_finite() {
            break;
        }
        orbit.push(next);
    }
    // Refine by one more iterate past the cut.
    let next = poly.eval(orbit.last().unwrap());
    if next.is_finite() && !next.is_zero() {
        orbit.push(next);
    }
    let steps = orbit.len() - 1;
    let mut potential = orbit[steps].ln_abs();
    let mut scale = Float::with_val(prec, 3u32);
    scale.pow_assign(steps as u32);
    potential /= scale;

    // arg z_0 + Σ_j 3^-(j+1) arg(z_(j+1) / z_j³)
    let mut arg_sum = z.arg();
    let mut weight = Float::with_val(prec, 1u32);
    for w in orbit.windows(2) {
        weight /= 3u32;
        let cube = &w[0].square() * &w[0];
        if let Ok(ratio) = w[1].checked_div(&cube) {
            arg_sum += Float::with_val(prec, &ratio.arg() * &weight);
        }
    }
    let tau = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut angle = arg_sum / &tau;
    angle -= Float::with_val(prec, angle.floor_ref());
    if angle >= 1u32 {
        angle -= 1u32;
    }
    EscapeClassification {
        status: EscapeStatus::Escaped,
        potential,
        angle,
        iterations: steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::solve_parameters;
    use proptest::prelude::*;

    #[test]
    fn far_point_escapes_with_log_modulus() {
        let p = solve_parameters(128).unwrap();
        let z = BigComplex::from_f64(1e6, 0.0, 128);
        let c = classify(&p.p1(), &z, DEFAULT_CUTOFF_POTENTIAL, 100);
        assert_eq!(c.status, EscapeStatus::Escaped);
        assert!((c.potential_f64() - 1e6f64.ln()).abs() < 1e-6);
        assert!(c.angle_f64() < 1e-9 || c.angle_f64() > 1.0 - 1e-9);
    }

    #[test]
    fn critical_point_is_interior() {
        let p = solve_parameters(128).unwrap();
        let c = classify(&p.p1(), &p.x, DEFAULT_CUTOFF_POTENTIAL, 300);
        assert!(c.is_interior());
        assert_eq!(c.potential_f64(), 0.0);
        let c2 = classify(&p.p2(), &BigComplex::zero(128), DEFAULT_CUTOFF_POTENTIAL, 300);
        assert!(c2.is_interior());
    }

    #[test]
    fn capture_agrees_on_cycle_points() {
        let p = solve_parameters(128).unwrap();
        let cycle = [p.x.clone(), p.y.clone(), p.y1.clone()];
        let c = classify_with_capture(&p.p1(), &p.y1, DEFAULT_CUTOFF_POTENTIAL, 300, &cycle, 1e-3);
        assert!(c.is_interior());
        assert_eq!(c.iterations, 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bottcher_functional_equation(r in 2.5f64..50.0, t in 0.0f64..std::f64::consts::TAU) {
            let p = solve_parameters(256).unwrap();
            let p1 = p.p1();
            let z = BigComplex::from_f64(r * t.cos(), r * t.sin(), 256);
            let g = classify(&p1, &z, DEFAULT_CUTOFF_POTENTIAL, 200);
            let g1 = classify(&p1, &p1.eval(&z), DEFAULT_CUTOFF_POTENTIAL, 200);
            prop_assert_eq!(g.status, EscapeStatus::Escaped);
            let diff = Float::with_val(256, &g1.potential - Float::with_val(256, &g.potential * 3u32));
            prop_assert!(diff.clone().abs() < 1e-20, "diff {}", diff);
        }

        #[test]
        fn conjugation_negates_angle(r in 1.8f64..20.0, t in 0.05f64..3.0) {
            let p = solve_parameters(128).unwrap();
            let p1 = p.p1();
            let z = BigComplex::from_f64(r * t.cos(), r * t.sin(), 128);
            let a = classify(&p1, &z, DEFAULT_CUTOFF_POTENTIAL, 200);
            let b = classify(&p1, &z.conj(), DEFAULT_CUTOFF_POTENTIAL, 200);
            prop_assume!(a.status == EscapeStatus::Escaped);
            prop_assert!((a.potential_f64() - b.potential_f64()).abs() < 1e-25);
            let s = (a.angle_f64() + b.angle_f64()).rem_euclid(1.0);
            prop_assert!(s < 1e-12 || s > 1.0 - 1e-12, "angles {} {}", a.angle_f64(), b.angle_f64());
        }
    }
}
