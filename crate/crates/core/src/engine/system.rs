//! The square pull-back system.
//!
//! Unknowns `X = [p0, p1, p2, p3, q1, q2, q3, y1', c1', c2']` describe
//! `F = p/q` with `q0 = 1` and three of the new free positions; the fourth,
//! `y'`, is the remaining root `−w2/w3` of the Wronskian
//! `W = p'q − pq' = Σ w_k z^k` once `w0 = w1 = w4 = 0` force a triple point
//! at `0` and a critical point at `∞`.

use crate::numerics::{BigComplex, NumericError, Poly, RationalMap};

pub const N_UNKNOWNS: usize = 10;
const IY1: usize = 7;
const IC1: usize = 8;
const IC2: usize = 9;

/// Free positions of the configuration being pulled back.
#[derive(Clone, Debug)]
pub struct Targets {
    pub y: BigComplex,
    pub y1: BigComplex,
    pub c1: BigComplex,
    pub c2: BigComplex,
}

impl Targets {
    /// `(1 − s) a + s b`, componentwise.
    pub fn lerp(a: &Targets, b: &Targets, s: f64) -> Targets {
        let prec = a.y.prec();
        let sc = BigComplex::from_f64(s, 0.0, prec);
        let oc = BigComplex::from_f64(1.0 - s, 0.0, prec);
        let mix = |u: &BigComplex, v: &BigComplex| &(&oc * u) + &(&sc * v);
        Targets {
            y: mix(&a.y, &b.y),
            y1: mix(&a.y1, &b.y1),
            c1: mix(&a.c1, &b.c1),
            c2: mix(&a.c2, &b.c2),
        }
    }
}

pub(crate) struct Coeffs<'a> {
    p: [&'a BigComplex; 4],
    q: [BigComplex; 4],
}

pub(crate) fn coeffs(x: &[BigComplex]) -> Coeffs<'_> {
    let prec = x[0].prec();
    Coeffs {
        p: [&x[0], &x[1], &x[2], &x[3]],
        q: [BigComplex::one(prec), x[4].clone(), x[5].clone(), x[6].clone()],
    }
}

fn horner(c: &[&BigComplex; 4], z: &BigComplex) -> (BigComplex, BigComplex) {
    let prec = z.prec();
    let mut v = BigComplex::zero(prec);
    let mut d = BigComplex::zero(prec);
    for k in c.iter().rev() {
        d *= z;
        d += &v;
        v *= z;
        v += k;
    }
    (v, d)
}

impl Coeffs<'_> {
    fn q_refs(&self) -> [&BigComplex; 4] {
        [&self.q[0], &self.q[1], &self.q[2], &self.q[3]]
    }

    fn p_at(&self, z: &BigComplex) -> (BigComplex, BigComplex) {
        horner(&self.p, z)
    }

    fn q_at(&self, z: &BigComplex) -> (BigComplex, BigComplex) {
        horner(&self.q_refs(), z)
    }

    /// `[w0, w1, w2, w3, w4]`.
    fn wronskian(&self) -> [BigComplex; 5] {
        let (p, q) = (&self.p, &self.q);
        let m = |a: &BigComplex, b: &BigComplex| a * b;
        let w0 = p[1] - &m(p[0], &q[1]);
        let w1 = (p[2] - &m(p[0], &q[2])).scale_f64(2.0);
        let w2 = &(&(&p[3].scale_f64(3.0) + &m(p[2], &q[1])) - &m(p[1], &q[2])) - &m(p[0], &q[3]).scale_f64(3.0);
        let w3 = (&m(p[3], &q[1]) - &m(p[1], &q[3])).scale_f64(2.0);
        let w4 = &m(p[3], &q[2]) - &m(p[2], &q[3]);
        [w0, w1, w2, w3, w4]
    }
}

/// `y' = −w2/w3` for the map encoded in `x`.
pub fn critical_y(x: &[BigComplex]) -> Result<BigComplex, NumericError> {
    let w = coeffs(x).wronskian();
    (-&w[2]).checked_div(&w[3])
}

/// Residual vector and the derived `y'`.
pub fn residual(x: &[BigComplex], t: &Targets) -> Result<(Vec<BigComplex>, BigComplex), NumericError> {
    let c = coeffs(x);
    let w = c.wronskian();
    let yp = (-&w[2]).checked_div(&w[3])?;
    let one = BigComplex::one(x[0].prec());

    let (p1, _) = c.p_at(&one);
    let (q1, _) = c.q_at(&one);
    let (pyp, _) = c.p_at(&yp);
    let (qyp, _) = c.q_at(&yp);
    let (qy1, _) = c.q_at(&x[IY1]);
    let (pc1, _) = c.p_at(&x[IC1]);
    let (qc1, _) = c.q_at(&x[IC1]);
    let (pc2, _) = c.p_at(&x[IC2]);

    let f = vec![
        w[0].clone(),
        w[1].clone(),
        w[4].clone(),
        c.p[0] - &t.c1,
        c.p[3] - &(&t.y * &c.q[3]),
        &p1 - &q1,
        &pyp - &(&t.y1 * &qyp),
        qy1,
        &pc1 - &(&t.c2 * &qc1),
        pc2,
    ];
    for v in &f {
        if !v.is_finite() {
            return Err(NumericError::NonFinite);
        }
    }
    Ok((f, yp))
}

/// Analytic Jacobian of [`residual`].
pub fn jacobian(x: &[BigComplex], t: &Targets) -> Result<Vec<Vec<BigComplex>>, NumericError> {
    let prec = x[0].prec();
    let c = coeffs(x);
    let w = c.wronskian();
    let yp = (-&w[2]).checked_div(&w[3])?;
    let zero = || BigComplex::zero(prec);
    let k = |v: f64| BigComplex::from_f64(v, 0.0, prec);
    let mut j = vec![vec![zero(); N_UNKNOWNS]; N_UNKNOWNS];
    // Column indices: p_i -> i, q_j -> 3 + j (j = 1..3).
    let qi = |jj: usize| 3 + jj;
    let (p, q) = (&c.p, &c.q);

    // w0 = p1 − p0 q1
    j[0][0] = -&q[1];
    j[0][1] = k(1.0);
    j[0][qi(1)] = -p[0];
    // w1 = 2 p2 − 2 p0 q2
    j[1][0] = q[2].scale_f64(-2.0);
    j[1][2] = k(2.0);
    j[1][qi(2)] = p[0].scale_f64(-2.0);
    // w4 = p3 q2 − p2 q3
    j[2][3] = q[2].clone();
    j[2][qi(2)] = p[3].clone();
    j[2][2] = -&q[3];
    j[2][qi(3)] = -p[2];
    // p0 − t_c1
    j[3][0] = k(1.0);
    // p3 − t_y q3
    j[4][3] = k(1.0);
    j[4][qi(3)] = -&t.y;
    // p(1) − q(1)
    for i in 0..4 {
        j[5][i] = k(1.0);
    }
    for jj in 1..4 {
        j[5][qi(jj)] = k(-1.0);
    }
    // p(y') − t_y1 q(y'), with y' = −w2/w3 depending on the coefficients.
    {
        let mut dw2 = vec![zero(); N_UNKNOWNS];
        let mut dw3 = vec![zero(); N_UNKNOWNS];
        dw2[3] = k(3.0);
        dw2[2] = q[1].clone();
        dw2[qi(1)] = p[2].clone();
        dw2[1] = -&q[2];
        dw2[qi(2)] = -p[1];
        dw2[0] = q[3].scale_f64(-3.0);
        dw2[qi(3)] = p[0].scale_f64(-3.0);
        dw3[3] = q[1].scale_f64(2.0);
        dw3[qi(1)] = p[3].scale_f64(2.0);
        dw3[1] = q[3].scale_f64(-2.0);
        dw3[qi(3)] = p[1].scale_f64(-2.0);

        let (_, dp) = c.p_at(&yp);
        let (_, dq) = c.q_at(&yp);
        let g_prime = &dp - &(&t.y1 * &dq);
        let pows = [k(1.0), yp.clone(), yp.square(), &yp.square() * &yp];
        for col in 0..7 {
            let num = &dw2[col] + &(&yp * &dw3[col]);
            let dyp = (-&num).checked_div(&w[3])?;
            let direct = if col < 4 {
                pows[col].clone()
            } else {
                -(&t.y1 * &pows[col - 3])
            };
            j[6][col] = &direct + &(&g_prime * &dyp);
        }
    }
    // q(y1')
    {
        let z = &x[IY1];
        let pows = [k(1.0), z.clone(), z.square(), &z.square() * z];
        for jj in 1..4 {
            j[7][qi(jj)] = pows[jj].clone();
        }
        j[7][IY1] = c.q_at(z).1;
    }
    // p(c1') − t_c2 q(c1')
    {
        let z = &x[IC1];
        let pows = [k(1.0), z.clone(), z.square(), &z.square() * z];
        for i in 0..4 {
            j[8][i] = pows[i].clone();
        }
        for jj in 1..4 {
            j[8][qi(jj)] = -(&t.c2 * &pows[jj]);
        }
        j[8][IC1] = &c.p_at(z).1 - &(&t.c2 * &c.q_at(z).1);
    }
    // p(c2')
    {
        let z = &x[IC2];
        let pows = [k(1.0), z.clone(), z.square(), &z.square() * z];
        for i in 0..4 {
            j[9][i] = pows[i].clone();
        }
        j[9][IC2] = c.p_at(z).1;
    }
    Ok(j)
}

/// Central finite-difference Jacobian, for cross-checking [`jacobian`].
pub fn jacobian_fd(x: &[BigComplex], t: &Targets, h: f64) -> Result<Vec<Vec<BigComplex>>, NumericError> {
    let prec = x[0].prec();
    let mut j = vec![vec![BigComplex::zero(prec); N_UNKNOWNS]; N_UNKNOWNS];
    let hc = BigComplex::from_f64(h, 0.0, prec);
    let inv2h = hc.scale_f64(2.0).recip()?;
    for col in 0..N_UNKNOWNS {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[col] += &hc;
        xm[col] -= &hc;
        let (fp, _) = residual(&xp, t)?;
        let (fm, _) = residual(&xm, t)?;
        for row in 0..N_UNKNOWNS {
            j[row][col] = &(&fp[row] - &fm[row]) * &inv2h;
        }
    }
    Ok(j)
}

/// Packs a map with `q(0) = 1` and three positions into an unknown vector.
pub fn pack(map: &RationalMap, y1: &BigComplex, c1: &BigComplex, c2: &BigComplex) -> Vec<BigComplex> {
    vec![
        map.p.coeff(0),
        map.p.coeff(1),
        map.p.coeff(2),
        map.p.coeff(3),
        map.q.coeff(1),
        map.q.coeff(2),
        map.q.coeff(3),
        y1.clone(),
        c1.clone(),
        c2.clone(),
    ]
}

pub fn unpack_map(x: &[BigComplex]) -> RationalMap {
    let prec = x[0].prec();
    RationalMap::new(
        Poly::new(x[0..4].to_vec(), prec),
        Poly::new(vec![BigComplex::one(prec), x[4].clone(), x[5].clone(), x[6].clone()], prec),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng, prec: u32) -> (Vec<BigComplex>, Targets) {
        let mut c = || BigComplex::from_f64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), prec);
        let x: Vec<BigComplex> = (0..N_UNKNOWNS).map(|_| c()).collect();
        let t = Targets { y: c(), y1: c(), c1: c(), c2: c() };
        (x, t)
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let (x, t) = random_point(&mut rng, 256);
            let ja = jacobian(&x, &t).unwrap();
            let jf = jacobian_fd(&x, &t, 1e-20).unwrap();
            for r in 0..N_UNKNOWNS {
                for col in 0..N_UNKNOWNS {
                    let scale = ja[r][col].abs_f64().max(1.0);
                    let d = (&ja[r][col] - &jf[r][col]).abs_f64() / scale;
                    assert!(d < 1e-20, "entry ({r},{col}) differs by {d:e}");
                }
            }
        }
    }

    #[test]
    fn wronskian_coefficients_match_polynomial_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (x, _) = random_point(&mut rng, 128);
        let map = unpack_map(&x);
        let w = map.wronskian();
        let ws = coeffs(&x).wronskian();
        for k in 0..5 {
            assert!((&w.coeff(k) - &ws[k]).abs_f64() < 1e-30, "w{k}");
        }
        assert!(w.coeff(5).abs_f64() < 1e-30);
    }
}
