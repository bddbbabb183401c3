use rug::ops::PowAssign;
use rug::Float;

use super::system::{self, Targets, N_UNKNOWNS};
use super::{EngineError, MarkedConfiguration};
use crate::dynamics::{initial_configuration, level_normalizer, MatingParameters};
use crate::engine::Level;
use crate::numerics::{newton_solve, BigComplex, NewtonOptions, NumericError, Poly, RationalMap};

#[derive(Clone, Debug)]
pub struct StepOptions {
    /// Newton stops at `‖residual‖∞ <= 2^tol_exponent`.
    pub tol_exponent: i32,
    /// Corrector iterations per continuation substep.
    pub corrector_iter: usize,
    /// A substep is rejected if any free point moves by more than this
    /// fraction of its distance to the nearest other marked point.
    pub max_relative_move: f64,
    /// Give up once the continuation step falls below this.
    pub min_substep: f64,
}

impl StepOptions {
    pub fn for_precision(prec: u32) -> Self {
        Self {
            tol_exponent: 30 - prec as i32,
            corrector_iter: 10,
            max_relative_move: 0.2,
            min_substep: 2f64.powi(-40),
        }
    }

    pub fn tol(&self) -> f64 {
        2f64.powi(self.tol_exponent)
    }
}

/// Where a pull-back step starts.
pub enum StepSeed<'a> {
    /// An approximate map and positions, corrected by the Newton homotopy
    /// `G(X) − (1 − s) G(X₀)`.
    Approximate {
        map: RationalMap,
        positions: MarkedConfiguration,
    },
    /// The solved step for an earlier target; the target is moved along the
    /// straight line from `target` to the new one.
    Previous {
        target: &'a MarkedConfiguration,
        map: &'a RationalMap,
        solution: &'a MarkedConfiguration,
    },
}

#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub map: RationalMap,
    pub config: MarkedConfiguration,
    pub residual: f64,
    pub substeps: usize,
}

/// Large-`R` approximation of the mating map, conjugated into normalized
/// coordinates: `M_{R³} ∘ F̃ ∘ M_R⁻¹` with
/// `F̃(ζ) = (ζ³ + aζ + b) / (1 + cζ³/R⁶)`, rescaled so `q(0) = 1`.
/// Returns the map together with the level-`R` initial configuration.
pub fn seed_map(
    params: &MatingParameters,
    level: Level,
) -> Result<(RationalMap, MarkedConfiguration), EngineError> {
    let prec = params.prec;
    let r = level.value(prec);
    let target_level = level.cube().ok_or(EngineError::BaseLevel)?;
    let r3 = target_level.value(prec);
    let f = raw_seed(params, &r);
    let inner = level_normalizer(params, &r).inverse();
    let outer = level_normalizer(params, &r3);
    let map = f.pre_compose(&inner).post_compose(&outer).normalized_q0()?;
    let positions = initial_configuration(params, level)?;
    Ok((map, positions))
}

/// `F̃` in raw coordinates.
pub fn raw_seed(params: &MatingParameters, r: &Float) -> RationalMap {
    let prec = params.prec;
    let mut r6 = Float::with_val(prec, r);
    r6.pow_assign(6u32);
    let cr = params.c.scale(&Float::with_val(prec, r6.recip_ref()));
    let z = || BigComplex::zero(prec);
    RationalMap::new(
        Poly::new(vec![params.b.clone(), params.a.clone(), z(), BigComplex::one(prec)], prec),
        Poly::new(vec![BigComplex::one(prec), z(), z(), cr], prec),
    )
}

fn targets_of(c: &MarkedConfiguration) -> Targets {
    Targets {
        y: c.y.clone(),
        y1: c.y1.clone(),
        c1: c.c1.clone(),
        c2: c.c2.clone(),
    }
}

/// One Thurston pull-back: finds `F` and the configuration one level down
/// whose image under `F` is `target`, marked point by marked point.
pub fn pullback_step(
    target: &MarkedConfiguration,
    seed: StepSeed<'_>,
    opts: &StepOptions,
) -> Result<StepOutcome, EngineError> {
    let level = target.level.cube_root();
    let end = targets_of(target);
    let (x0, start, offset) = match seed {
        StepSeed::Approximate { map, positions } => {
            let x0 = system::pack(&map, &positions.y1, &positions.c1, &positions.c2);
            let (g0, _) = system::residual(&x0, &end)?;
            (x0, end.clone(), Some(g0))
        }
        StepSeed::Previous { target: prev, map, solution } => (
            system::pack(map, &solution.y1, &solution.c1, &solution.c2),
            targets_of(prev),
            None,
        ),
    };
    let (x, substeps) = track(x0, &start, &end, offset.as_deref(), opts)?;
    let (f, yp) = system::residual(&x, &end)?;
    let residual = system_norm(&f);
    if !(residual <= opts.tol()) {
        return Err(NumericError::NoConvergence { residual, iterations: 0 }.into());
    }
    let config = MarkedConfiguration::new(level, yp, x[7].clone(), x[8].clone(), x[9].clone())?;
    let floor = 2f64.powi(-(target.prec() as i32) / 4);
    let sep = config.min_separation();
    if sep <= floor {
        return Err(EngineError::Isotopy { separation: sep });
    }
    Ok(StepOutcome {
        map: system::unpack_map(&x),
        config,
        residual,
        substeps,
    })
}

fn system_norm(f: &[BigComplex]) -> f64 {
    f.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
}

/// Free positions `[y', y1', c1', c2']` of an unknown vector.
fn positions(x: &[BigComplex], yp: &BigComplex) -> [BigComplex; 4] {
    [yp.clone(), x[7].clone(), x[8].clone(), x[9].clone()]
}

fn nearest_distances(pts: &[BigComplex; 4]) -> [f64; 4] {
    let prec = pts[0].prec();
    let pinned = [BigComplex::zero(prec), BigComplex::one(prec)];
    std::array::from_fn(|i| {
        pts.iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q)
            .chain(pinned.iter())
            .map(|q| (&pts[i] - q).abs_f64())
            .fold(f64::INFINITY, f64::min)
    })
}

/// Path tracking from `s = 0` to `s = 1` with adaptive steps.
///
/// The system at parameter `s` is `G(X; lerp(start, end, s)) − (1 − s)·offset`.
/// A substep is accepted only if the plain Newton corrector converges and
/// no free point moves by more than `max_relative_move` of its distance to
/// its nearest neighbour — the guard that keeps each marked point on the
/// preimage branch continuous with the previous solution.
fn track(
    x0: Vec<BigComplex>,
    start: &Targets,
    end: &Targets,
    offset: Option<&[BigComplex]>,
    opts: &StepOptions,
) -> Result<(Vec<BigComplex>, usize), EngineError> {
    let prec = x0[0].prec();
    let mut x = x0;
    let mut yp = system::critical_y(&x)?;
    let mut s = 0.0f64;
    let mut ds = 1.0f64;
    let mut accepted = 0usize;
    let newton = NewtonOptions {
        tol: opts.tol(),
        max_iter: opts.corrector_iter,
        damping: false,
        max_halvings: 0,
    };
    while s < 1.0 {
        ds = ds.min(1.0 - s);
        let s_new = if s + ds >= 1.0 { 1.0 } else { s + ds };
        let t = Targets::lerp(start, end, s_new);
        let shift: Option<Vec<BigComplex>> = offset.map(|g0| {
            let w = BigComplex::from_f64(1.0 - s_new, 0.0, prec);
            g0.iter().map(|g| &w * g).collect()
        });
        let result = newton_solve(
            |x| {
                let (mut f, _) = system::residual(x, &t)?;
                if let Some(sh) = &shift {
                    for (fi, si) in f.iter_mut().zip(sh) {
                        *fi -= si;
                    }
                }
                Ok(f)
            },
            |x| system::jacobian(x, &t),
            x.clone(),
            &newton,
        );
        let ok = match result {
            Ok(out) => match system::critical_y(&out.x) {
                Ok(yp_new) => {
                    let old = positions(&x, &yp);
                    let new = positions(&out.x, &yp_new);
                    let near = nearest_distances(&old);
                    let moved_ok = (0..4).all(|i| (&new[i] - &old[i]).abs_f64() < opts.max_relative_move * near[i]);
                    if moved_ok {
                        x = out.x;
                        yp = yp_new;
                        true
                    } else {
                        false
                    }
                }
                Err(_) => false,
            },
            Err(_) => false,
        };
        if ok {
            s = s_new;
            ds *= 2.0;
            accepted += 1;
        } else {
            ds *= 0.5;
            if ds < opts.min_substep {
                return Err(EngineError::Stalled { s });
            }
        }
    }
    debug_assert_eq!(x.len(), N_UNKNOWNS);
    Ok((x, accepted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::solve_parameters;
    use crate::numerics::{poly_roots, RiemannPoint};

    #[test]
    fn raw_seed_tends_to_p1() {
        let p = solve_parameters(128).unwrap();
        let z = BigComplex::from_f64(0.3, -0.7, 128);
        let want = p.p1().eval(&z);
        let big = raw_seed(&p, &Float::with_val(128, 1e8));
        let got = big.eval_finite(&z).unwrap();
        assert!(got.chordal_distance(&RiemannPoint::Finite(want.clone())) < 1e-40);
        let at0 = raw_seed(&p, &Float::with_val(128, 1e4)).eval_finite(&BigComplex::zero(128)).unwrap();
        assert_eq!(at0.finite().unwrap(), &p.b);
    }

    #[test]
    fn raw_seed_critical_points_near_pm_x() {
        let p = solve_parameters(256).unwrap();
        let f = raw_seed(&p, &Float::with_val(256, 1e4));
        let roots = poly_roots(&f.wronskian(), 256).unwrap();
        for target in [&p.x, &p.y] {
            let d = roots.iter().map(|r| (r - target).abs_f64()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-6, "no Wronskian root near {target:?}: {d:e}");
        }
    }
}
