use rug::Float;

use super::{BigComplex, NumericError};

#[derive(Clone, Debug)]
pub struct NewtonOptions {
    /// Stop once `‖residual‖∞ <= tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Halve the step on residual increase (up to `max_halvings` times);
    /// without damping an increase aborts the solve.
    pub damping: bool,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-30,
            max_iter: 60,
            damping: true,
            max_halvings: 30,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub x: Vec<BigComplex>,
    pub residual: f64,
    pub iterations: usize,
}

pub fn sup_norm(v: &[BigComplex]) -> f64 {
    v.iter().map(|z| z.abs_f64()).fold(0.0, f64::max)
}

/// Damped Newton iteration for a square system.
pub fn newton_solve<R, J>(
    mut residual: R,
    mut jacobian: J,
    seed: Vec<BigComplex>,
    opts: &NewtonOptions,
) -> Result<NewtonOutcome, NumericError>
where
    R: FnMut(&[BigComplex]) -> Result<Vec<BigComplex>, NumericError>,
    J: FnMut(&[BigComplex]) -> Result<Vec<Vec<BigComplex>>, NumericError>,
{
    let mut x = seed;
    let mut f = residual(&x)?;
    let mut norm = sup_norm(&f);
    for iter in 0..opts.max_iter {
        if norm <= opts.tol {
            return Ok(NewtonOutcome { x, residual: norm, iterations: iter });
        }
        let jac = jacobian(&x)?;
        let neg_f: Vec<BigComplex> = f.iter().map(|v| -v).collect();
        let dx = lu_solve(jac, neg_f)?;

        let mut t = 1.0f64;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let cand: Vec<BigComplex> = x
                .iter()
                .zip(&dx)
                .map(|(xi, di)| xi + &di.scale_f64(t))
                .collect();
            if let Ok(fc) = residual(&cand) {
                let nc = sup_norm(&fc);
                if nc.is_finite() && nc < norm {
                    accepted = Some((cand, fc, nc));
                    break;
                }
            }
            if !opts.damping {
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, fc, nc)) => {
                x = cand;
                f = fc;
                norm = nc;
            }
            None => {
                return Err(NumericError::NoConvergence { residual: norm, iterations: iter });
            }
        }
    }
    if norm <= opts.tol {
        Ok(NewtonOutcome { x, residual: norm, iterations: opts.max_iter })
    } else {
        Err(NumericError::NoConvergence { residual: norm, iterations: opts.max_iter })
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn lu_solve(mut a: Vec<Vec<BigComplex>>, mut b: Vec<BigComplex>) -> Result<Vec<BigComplex>, NumericError> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n), "non-square system");
    if n == 0 {
        return Ok(b);
    }
    let prec = b[0].prec();
    let mut max_entry = Float::new(prec);
    for row in &a {
        for v in row {
            let m = v.norm_sqr();
            if m > max_entry {
                max_entry = m;
            }
        }
    }
    // A pivot below 2^(8-prec) times the largest entry is treated as zero.
    let mut floor = max_entry;
    floor >>= 2 * prec - 16;

    for k in 0..n {
        let (piv, piv_norm) = (k..n)
            .map(|i| (i, a[i][k].norm_sqr()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        if piv_norm.is_zero() || piv_norm <= floor {
            return Err(NumericError::Singular);
        }
        a.swap(k, piv);
        b.swap(k, piv);
        let inv = a[k][k].recip()?;
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] * &inv;
            for j in k..n {
                let delta = &factor * &a[k][j];
                a[i][j] -= &delta;
            }
            let delta = &factor * &b[k];
            b[i] -= &delta;
        }
    }
    let mut x = vec![BigComplex::zero(prec); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in (i + 1)..n {
            acc -= &(&a[i][j] * &x[j]);
        }
        x[i] = acc.checked_div(&a[i][i])?;
    }
    Ok(x)
}
