use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::step::{pullback_step, seed_map, StepOptions, StepOutcome, StepSeed};
use super::{EngineError, Label, Level, MarkedConfiguration};
use crate::dynamics::{initial_configuration, level_normalizer, MatingParameters};
use crate::numerics::{BigComplex, ComplexRepr, Mobius, NumericError, Poly, RationalMap};

pub const DEFAULT_R0: f64 = 1e4;
pub const DEFAULT_PRECISION: u32 = 256;

/// The slow-mating path: `configs[n]` lives at level `R_n = R0^(1/3ⁿ)` and
/// `map(n)` sends level `n` to level `n − 1`.
#[derive(Clone, Debug)]
pub struct PullbackChain {
    pub params: MatingParameters,
    pub configs: Vec<MarkedConfiguration>,
    /// `maps[n − 1]` is the map from level `n` to level `n − 1`.
    pub maps: Vec<RationalMap>,
    pub residuals: Vec<f64>,
    pub substeps: Vec<usize>,
}

impl PullbackChain {
    pub fn prec(&self) -> u32 {
        self.params.prec
    }

    pub fn r0(&self) -> f64 {
        self.configs[0].level.r0
    }

    /// Number of pull-back steps taken.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// The map `F_n` from level `n` to level `n − 1` (`1 <= n <= len`).
    pub fn map(&self, n: usize) -> &RationalMap {
        &self.maps[n - 1]
    }

    pub fn schedule(&self) -> Vec<Level> {
        self.configs.iter().map(|c| c.level).collect()
    }

    /// The base normalizer `(∞, R0, x) ↦ (0, 1, ∞)`.
    pub fn base_normalizer(&self) -> Mobius {
        level_normalizer(&self.params, &self.configs[0].level.value(self.prec()))
    }

    /// Extends the chain by `steps` more pull-backs.
    pub fn extend(&mut self, steps: usize, opts: &StepOptions) -> Result<(), EngineError> {
        self.extend_with(steps, opts, |_, _| {})
    }

    pub fn extend_with(
        &mut self,
        steps: usize,
        opts: &StepOptions,
        mut on_step: impl FnMut(usize, &StepOutcome),
    ) -> Result<(), EngineError> {
        for _ in 0..steps {
            let n = self.maps.len() + 1;
            let target = &self.configs[n - 1];
            let outcome = if n == 1 {
                let (map, positions) = seed_map(&self.params, target.level.cube_root())?;
                pullback_step(target, StepSeed::Approximate { map, positions }, opts)
            } else {
                pullback_step(
                    target,
                    StepSeed::Previous {
                        target: &self.configs[n - 2],
                        map: &self.maps[n - 2],
                        solution: &self.configs[n - 1],
                    },
                    opts,
                )
            }
            .map_err(|e| EngineError::AtStep { step: n, source: Box::new(e) })?;
            on_step(n, &outcome);
            self.residuals.push(outcome.residual);
            self.substeps.push(outcome.substeps);
            self.maps.push(outcome.map);
            self.configs.push(outcome.config);
        }
        Ok(())
    }
}

/// Runs `n_steps` pull-backs from the standard initial configuration at `r0`.
pub fn run_chain(
    params: &MatingParameters,
    r0: f64,
    n_steps: usize,
    opts: &StepOptions,
) -> Result<PullbackChain, EngineError> {
    let initial = initial_configuration(params, Level::base(r0))?;
    run_chain_from(params, initial, n_steps, opts)
}

/// Runs `n_steps` pull-backs from an arbitrary configuration at the base level.
pub fn run_chain_from(
    params: &MatingParameters,
    initial: MarkedConfiguration,
    n_steps: usize,
    opts: &StepOptions,
) -> Result<PullbackChain, EngineError> {
    run_chain_with(params, initial, n_steps, opts, |_, _| {})
}

pub fn run_chain_with(
    params: &MatingParameters,
    initial: MarkedConfiguration,
    n_steps: usize,
    opts: &StepOptions,
    on_step: impl FnMut(usize, &StepOutcome),
) -> Result<PullbackChain, EngineError> {
    if initial.level.depth != 0 {
        return Err(EngineError::BaseLevel);
    }
    if initial.prec() != params.prec {
        return Err(NumericError::Degenerate("initial configuration precision differs from parameters".into()).into());
    }
    let mut chain = PullbackChain {
        params: params.clone(),
        configs: vec![initial],
        maps: Vec::new(),
        residuals: Vec::new(),
        substeps: Vec::new(),
    };
    chain.extend_with(n_steps, opts, on_step)?;
    Ok(chain)
}

#[derive(Clone, Debug)]
pub struct MeasurementRow {
    pub n: usize,
    pub r_n: Float,
    pub v: BigComplex,
    pub u: BigComplex,
    pub v_ratio: BigComplex,
    pub uv: BigComplex,
    pub uvprev: BigComplex,
}

/// `v_n = c1 − y`, `u_n = c2 − y1` and their ratios, for `n = 1..=len`.
pub fn measure(chain: &PullbackChain) -> Result<Vec<MeasurementRow>, EngineError> {
    if chain.configs.len() < 2 {
        return Err(EngineError::TooShort);
    }
    let prec = chain.prec();
    let mut rows = Vec::with_capacity(chain.configs.len() - 1);
    for n in 1..chain.configs.len() {
        let prev = &chain.configs[n - 1];
        let cur = &chain.configs[n];
        let v_prev = prev.v();
        let v = cur.v();
        let u = cur.u();
        let floor = |e: NumericError| EngineError::PrecisionFloor { n, source: e };
        rows.push(MeasurementRow {
            n,
            r_n: cur.level.value(prec),
            v_ratio: v.checked_div(&v_prev).map_err(floor)?,
            uv: u.checked_div(&v).map_err(floor)?,
            uvprev: u.checked_div(&v_prev).map_err(floor)?,
            v,
            u,
        });
    }
    Ok(rows)
}

/// `x` with `digits` significant digits, truncated toward zero, in
/// positional notation when the exponent is moderate.
pub fn format_truncated(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let (neg, ds, exp) = x.to_sign_string_exp_round(10, Some(digits.max(1)), Round::Zero);
    let exp = exp.unwrap_or(0);
    let ds = ds.as_str();
    let sign = if neg { "-" } else { "" };
    // value = 0.<ds> × 10^exp
    let body = if (-20..=21).contains(&exp) {
        if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), ds)
        } else if (exp as usize) >= ds.len() {
            format!("{}{}", ds, "0".repeat(exp as usize - ds.len()))
        } else {
            format!("{}.{}", &ds[..exp as usize], &ds[exp as usize..])
        }
    } else {
        let (head, tail) = ds.split_at(1);
        let tail = if tail.is_empty() { "0" } else { tail };
        format!("{head}.{tail}e{}", exp - 1)
    };
    format!("{sign}{body}")
}

pub const CSV_HEADER: &str =
    "n,R_n,v_re,v_im,u_re,u_im,v_ratio_re,v_ratio_im,uv_re,uv_im,uvprev_re,uvprev_im";

pub fn measurements_csv(rows: &[MeasurementRow], digits: usize) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let f = |x: &Float| format_truncated(x, digits);
        let fields = [
            r.n.to_string(),
            f(&r.r_n),
            f(r.v.re()),
            f(r.v.im()),
            f(r.u.re()),
            f(r.u.im()),
            f(r.v_ratio.re()),
            f(r.v_ratio.im()),
            f(r.uv.re()),
            f(r.uv.im()),
            f(r.uvprev.re()),
            f(r.uvprev.im()),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MapJson {
    pub p: Vec<ComplexRepr>,
    pub q: Vec<ComplexRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LevelJson {
    pub n: u32,
    pub r0: f64,
    pub r_n: String,
    pub positions: Vec<(Label, ComplexRepr)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChainJson {
    pub precision: u32,
    pub r0: f64,
    pub levels: Vec<LevelJson>,
    /// `maps[n − 1]` sends level `n` to level `n − 1`.
    pub maps: Vec<MapJson>,
    pub residuals: Vec<f64>,
    pub substeps: Vec<usize>,
}

impl PullbackChain {
    pub fn to_json(&self) -> ChainJson {
        let prec = self.prec();
        ChainJson {
            precision: prec,
            r0: self.r0(),
            levels: self
                .configs
                .iter()
                .map(|c| LevelJson {
                    n: c.level.depth,
                    r0: c.level.r0,
                    r_n: crate::numerics::decimal_string(&c.level.value(prec)),
                    positions: Label::FREE
                        .iter()
                        .map(|&l| (l, ComplexRepr::from(c.position(l).finite().expect("free point"))))
                        .collect(),
                })
                .collect(),
            maps: self
                .maps
                .iter()
                .map(|m| MapJson {
                    p: m.p.coeffs().iter().map(ComplexRepr::from).collect(),
                    q: m.q.coeffs().iter().map(ComplexRepr::from).collect(),
                })
                .collect(),
            residuals: self.residuals.clone(),
            substeps: self.substeps.clone(),
        }
    }

    /// Rebuilds a chain from its JSON form; parameters are re-solved at the
    /// recorded precision.
    pub fn from_json(json: &ChainJson, params: &MatingParameters) -> Result<Self, EngineError> {
        let prec = json.precision;
        if params.prec != prec {
            return Err(NumericError::Degenerate("parameter precision differs from chain".into()).into());
        }
        let mut configs = Vec::new();
        for lv in &json.levels {
            let get = |l: Label| -> Result<BigComplex, EngineError> {
                let (_, v) = lv
                    .positions
                    .iter()
                    .find(|(k, _)| *k == l)
                    .ok_or_else(|| NumericError::Parse(format!("missing {l}")))?;
                Ok(v.to_big(prec)?)
            };
            configs.push(MarkedConfiguration::new(
                Level { r0: lv.r0, depth: lv.n },
                get(Label::Y)?,
                get(Label::Y1)?,
                get(Label::C1)?,
                get(Label::C2)?,
            )?);
        }
        let poly = |v: &[ComplexRepr]| -> Result<Poly, EngineError> {
            Ok(Poly::new(v.iter().map(|c| c.to_big(prec)).collect::<Result<_, _>>()?, prec))
        };
        let maps = json
            .maps
            .iter()
            .map(|m| Ok(RationalMap::new(poly(&m.p)?, poly(&m.q)?)))
            .collect::<Result<Vec<_>, EngineError>>()?;
        if configs.is_empty() || maps.len() + 1 != configs.len() {
            return Err(NumericError::Parse("chain has inconsistent level/map counts".into()).into());
        }
        Ok(Self {
            params: params.clone(),
            configs,
            maps,
            residuals: json.residuals.clone(),
            substeps: json.substeps.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_formatting() {
        let f = |s: &str, d| format_truncated(&Float::with_val(256, Float::parse(s).unwrap()), d);
        assert_eq!(f("0.16024995224", 10), "0.1602499522");
        assert_eq!(f("-0.88888888888885659", 16), "-0.8888888888888565");
        assert_eq!(f("2.4018739106", 10), "2.401873910");
        assert_eq!(f("21.544346900318837", 6), "21.5443");
        assert_eq!(f("-2.2426438791e-14", 3), "-0.0000000000000224");
        assert_eq!(f("7.888609052210118e-31", 2), "7.8e-31");
        assert_eq!(f("12345", 3), "12300");
    }
}
