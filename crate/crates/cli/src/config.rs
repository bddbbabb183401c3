use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;
use matinglab::engine::{DEFAULT_PRECISION, DEFAULT_R0};
use matinglab::numerics::MIN_PREC;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RenderKind {
    Julia,
    Basins,
    Mating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionKind {
    Flat,
    Ortho,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    pub kind: RenderKind,
    pub size: usize,
    /// `re_min,re_max,im_min,im_max`; the default depends on the kind.
    pub window: Option<String>,
    pub level: usize,
    /// `p1`/`p2` for Julia sets, `h1`/`h2` for basins; both when unset.
    pub target: Option<String>,
    pub max_iter: Option<usize>,
    pub eps: f64,
    pub projection: ProjectionKind,
    pub axis: [f64; 3],
    /// A chain JSON to render from instead of recomputing one.
    pub chain: Option<PathBuf>,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            kind: RenderKind::Julia,
            size: 512,
            window: None,
            level: 8,
            target: None,
            max_iter: None,
            eps: 1e-6,
            projection: ProjectionKind::Flat,
            axis: [0.0, 0.0, 1.0],
            chain: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub precision: u32,
    pub r0: f64,
    pub n_steps: usize,
    /// Newton stops at residual `2^tol_exponent`; `30 − precision` when unset.
    pub tol_exponent: Option<i32>,
    pub out: PathBuf,
    /// Significant digits in the measurement table; all digits when unset.
    pub digits: Option<usize>,
    pub seed: u64,
    /// Limit-map fixture to verify instead of the built-in set.
    pub maps: Option<PathBuf>,
    pub render: RenderConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: DEFAULT_PRECISION,
            r0: DEFAULT_R0,
            n_steps: 30,
            tol_exponent: None,
            out: PathBuf::from("out"),
            digits: Some(16),
            seed: 2024,
            maps: None,
            render: RenderConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision < MIN_PREC {
            return Err(CliError::Config(format!("precision must be at least {MIN_PREC} bits, got {}", self.precision)));
        }
        if self.n_steps < 1 {
            return Err(CliError::Config("steps must be at least 1".into()));
        }
        if !(self.r0 > 1.0) || !self.r0.is_finite() {
            return Err(CliError::Config(format!("r0 must be a finite number above 1, got {}", self.r0)));
        }
        if self.render.size == 0 {
            return Err(CliError::Config("size must be positive".into()));
        }
        if let Some(d) = self.digits {
            if d == 0 {
                return Err(CliError::Config("digits must be positive".into()));
            }
        }
        let a = self.render.axis;
        if !a.iter().all(|v| v.is_finite()) || a.iter().all(|&v| v == 0.0) {
            return Err(CliError::Config(format!("axis must be a finite nonzero vector, got {a:?}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn invariants_are_enforced() {
        let bad = [
            RunConfig { precision: 32, ..RunConfig::default() },
            RunConfig { n_steps: 0, ..RunConfig::default() },
            RunConfig { r0: 1.0, ..RunConfig::default() },
            RunConfig { r0: f64::INFINITY, ..RunConfig::default() },
            RunConfig { digits: Some(0), ..RunConfig::default() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(CliError::Config(_))), "{c:?}");
        }
        let mut c = RunConfig::default();
        c.render.axis = [0.0; 3];
        assert!(c.validate().is_err());
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{ "n_steps": 5, "render": { "kind": "basins" } }"#).unwrap();
        assert_eq!(c.n_steps, 5);
        assert_eq!(c.precision, 256);
        assert_eq!(c.render.kind, RenderKind::Basins);
        assert_eq!(c.render.size, 512);
        assert!(serde_json::from_str::<RunConfig>(r#"{ "n_step": 5 }"#).is_err());
    }
}
