use rug::Float;

use super::{BigComplex, NumericError, Poly};

const MAX_ITER: usize = 600;

/// All roots of `p` by Aberth–Ehrlich simultaneous iteration, then Newton polish.
///
/// Each returned root satisfies `|p(r)| <= 2^(10-prec) * sum |a_i| |r|^i`; the
/// right-hand side is the rounding floor of evaluating `p` at `r`.
pub fn poly_roots(p: &Poly, prec: u32) -> Result<Vec<BigComplex>, NumericError> {
    let p = p.with_prec(prec).trimmed();
    if !matches!(p.degree(), Some(d) if d >= 1) {
        return Err(NumericError::Degenerate("poly_roots needs degree >= 1".into()));
    }
    // Exact zero roots are split off: near a multiple root at 0 the
    // componentwise acceptance test below cannot be met.
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        let rest = Poly::new(p.coeffs()[zeros..].to_vec(), prec);
        let mut roots = vec![BigComplex::zero(prec); zeros];
        if rest.degree().unwrap_or(0) >= 1 {
            roots.extend(poly_roots(&rest, prec)?);
        }
        return Ok(roots);
    }
    let n = p.degree().unwrap_or(0);
    let lead = p.coeff(n);
    let monic = Poly::new(
        p.coeffs()
            .iter()
            .map(|c| c.div_nonzero(&lead))
            .collect::<Result<_, _>>()?,
        prec,
    );
    let dp = monic.derivative();

    // Initial guesses on a circle enclosing every root, rotated off the real axis.
    let mut radius = Float::with_val(prec, 0u32);
    for c in &monic.coeffs()[..n] {
        let m = c.abs();
        if m > radius {
            radius = m;
        }
    }
    radius += 1u32;
    let radius = radius.to_f64();
    let mut z: Vec<BigComplex> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64) / (n as f64) + 0.4;
            let r = radius * (1.0 + 0.01 * k as f64 / n as f64);
            BigComplex::from_f64(r * theta.cos(), r * theta.sin(), prec)
        })
        .collect();

    let accept = |r: &BigComplex, shift: i32| {
        let mut floor = monic.abs_scale(r);
        floor <<= shift;
        floor >>= prec;
        monic.eval(r).abs() <= floor
    };

    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        if done.iter().all(|&d| d) {
            break;
        }
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, dv) = (monic.eval(&z[k]), dp.eval(&z[k]));
            if v.is_zero() {
                done[k] = true;
                continue;
            }
            let Ok(ratio) = v.checked_div(&dv) else {
                // Stationary point of p: nudge and retry next sweep.
                z[k] = &z[k] + &BigComplex::from_f64(1e-3, 1e-3, prec);
                continue;
            };
            let mut sum = BigComplex::zero(prec);
            for j in 0..n {
                if j != k {
                    if let Ok(inv) = (&z[k] - &z[j]).recip() {
                        sum += &inv;
                    }
                }
            }
            let denom = &BigComplex::one(prec) - &(&ratio * &sum);
            let step = ratio.checked_div(&denom).unwrap_or(ratio);
            z[k] -= &step;
            if accept(&z[k], 4) {
                done[k] = true;
            }
        }
    }

    // Newton polish; keep a step only if it lowers the residual.
    for r in z.iter_mut() {
        for _ in 0..4 {
            let (v, dv) = monic.eval_with_derivative(r);
            let Ok(step) = v.checked_div(&dv) else { break };
            let cand = &*r - &step;
            if monic.eval(&cand).abs() < v.abs() {
                *r = cand;
            } else {
                break;
            }
        }
    }

    for r in &z {
        if !r.is_finite() || !accept(r, 10) {
            return Err(NumericError::RootFailure {
                degree: n,
                residual: monic.eval(r).abs_f64(),
            });
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nearest<'a>(roots: &'a [BigComplex], re: f64, im: f64) -> &'a BigComplex {
        let t = BigComplex::from_f64(re, im, roots[0].prec());
        roots
            .iter()
            .min_by(|a, b| (*a - &t).abs_f64().total_cmp(&(*b - &t).abs_f64()))
            .unwrap()
    }

    #[test]
    fn exact_zero_roots_are_split_off() {
        // z²(z − 1)
        let p = Poly::from_f64(&[(0.0, 0.0), (0.0, 0.0), (-1.0, 0.0), (1.0, 0.0)], 128);
        let roots = poly_roots(&p, 128).unwrap();
        assert_eq!(roots.iter().filter(|r| r.is_zero()).count(), 2);
        assert!((nearest(&roots, 1.0, 0.0).re_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn symmetric_pair() {
        let p = Poly::from_f64(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], 128);
        let roots = poly_roots(&p, 128).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((nearest(&roots, 1.0, 0.0).re_f64() - 1.0).abs() < 1e-35);
        assert!((nearest(&roots, -1.0, 0.0).re_f64() + 1.0).abs() < 1e-35);
    }

    #[test]
    fn octic_defining_x() {
        let p = Poly::from_f64(
            &[
                (-1.0, 0.0),
                (0.0, 0.0),
                (2.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (-24.0, 0.0),
                (0.0, 0.0),
                (32.0, 0.0),
            ],
            128,
        );
        let roots = poly_roots(&p, 128).unwrap();
        let x = nearest(&roots, 0.8445, 0.0);
        assert_eq!((x.re_f64() * 1e4).floor(), 8445.0);
        assert!(x.im_f64().abs() < 1e-30);
    }

    #[test]
    fn octic_defining_c() {
        let p = Poly::from_f64(
            &[
                (1.0, 0.0),
                (0.0, 0.0),
                (1.0, 0.0),
                (0.0, 0.0),
                (3.0, 0.0),
                (0.0, 0.0),
                (3.0, 0.0),
                (0.0, 0.0),
                (1.0, 0.0),
            ],
            128,
        );
        let roots = poly_roots(&p, 128).unwrap();
        let c = nearest(&roots, -0.264, 1.260);
        assert!((c.re_f64() + 0.264).abs() < 5e-4);
        assert!((c.im_f64() - 1.260).abs() < 5e-4);
    }

    #[test]
    fn double_root_is_found() {
        // (z - 3)^2 (z - 3/4)
        let prec = 192;
        let r = [
            BigComplex::from_f64(3.0, 0.0, prec),
            BigComplex::from_f64(3.0, 0.0, prec),
            BigComplex::from_f64(0.75, 0.0, prec),
        ];
        let p = Poly::from_roots(&r, prec);
        let roots = poly_roots(&p, prec).unwrap();
        assert!((nearest(&roots, 0.75, 0.0).re_f64() - 0.75).abs() < 1e-40);
        let close_to_3 = roots.iter().filter(|z| (*z - &r[0]).abs_f64() < 1e-20).count();
        assert_eq!(close_to_3, 2);
    }

    #[test]
    fn precision_refinement_moves_simple_roots_negligibly() {
        let coeffs = [(-1.0, 0.0), (0.0, 0.0), (2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-24.0, 0.0), (0.0, 0.0), (32.0, 0.0)];
        let lo = poly_roots(&Poly::from_f64(&coeffs, 128), 128).unwrap();
        let hi = poly_roots(&Poly::from_f64(&coeffs, 256), 256).unwrap();
        for r in &lo {
            let r = r.with_prec(256);
            let d = hi
                .iter()
                .map(|h| (h - &r).abs_f64())
                .fold(f64::INFINITY, f64::min);
            assert!(d < 2f64.powi(-100));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn expansion_reproduces_monic_coefficients(
            coeffs in prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 2..=9),
        ) {
            let prec = 128;
            let mut coeffs = coeffs;
            let last = coeffs.len() - 1;
            if coeffs[last].0.abs() + coeffs[last].1.abs() < 0.1 {
                coeffs[last] = (1.0, 0.0);
            }
            let p = Poly::from_f64(&coeffs, prec);
            let roots = poly_roots(&p, prec).unwrap();
            let q = Poly::from_roots(&roots, prec);
            let lead = p.coeff(last);
            let tol = 2f64.powi(20 - prec as i32);
            let monic: Vec<_> = (0..=last).map(|i| p.coeff(i).checked_div(&lead).unwrap()).collect();
            let scale = monic.iter().map(|c| c.abs_f64()).fold(1.0, f64::max);
            for (i, want) in monic.iter().enumerate() {
                prop_assert!((&q.coeff(i) - want).abs_f64() <= tol * scale,
                    "coefficient {} off by {:e}", i, (&q.coeff(i) - want).abs_f64());
            }
        }
    }
}
