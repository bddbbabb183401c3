//! `matinglab` — setup, chain, verify and render commands.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ProjectionKind, RenderKind, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or arguments: exit code 2.
    Config(String),
    /// Numerical or verification failure, or an output that could not be written: exit code 3.
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Failure(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Failure(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "matinglab", version, about = "Slow polynomial mating by Thurston pull-back")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Solve for the cubic pair and write params.json.
    Setup,
    /// Run the pull-back chain; write chain.json and measurements.csv.
    Chain,
    /// Check the limit maps and the obstruction; write verify.json.
    Verify,
    /// Write PPM pictures.
    Render,
}

#[derive(clap::Args, Debug)]
struct Flags {
    /// JSON run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true)]
    r0: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    tol_exponent: Option<i32>,
    /// Significant digits in the measurement table (truncated).
    #[arg(long, global = true)]
    digits: Option<usize>,
    /// Limit-map fixture JSON for `verify`.
    #[arg(long, global = true)]
    maps: Option<PathBuf>,
    #[arg(long, global = true)]
    size: Option<usize>,
    /// Chain level for mating renders.
    #[arg(long, global = true)]
    level: Option<usize>,
    /// `re_min,re_max,im_min,im_max`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, global = true, value_enum)]
    kind: Option<RenderKind>,
    /// p1 | p2 (julia), h1 | h2 (basins).
    #[arg(long, global = true)]
    target: Option<String>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true, value_enum)]
    projection: Option<ProjectionKind>,
    /// View direction for orthographic renders, `x,y,z`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_axis)]
    axis: Option<[f64; 3]>,
    /// Chain JSON to render from.
    #[arg(long, global = true)]
    chain: Option<PathBuf>,
}

fn parse_axis(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x, y, z] if x.is_finite() && y.is_finite() && z.is_finite() && x * x + y * y + z * z > 0.0 => Ok([x, y, z]),
        _ => Err("expected three finite numbers, not all zero".into()),
    }
}

impl Flags {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($flag:expr, $field:expr) => {
                if let Some(v) = $flag {
                    $field = v;
                }
            };
        }
        set!(self.precision, c.precision);
        set!(self.steps, c.n_steps);
        set!(self.r0, c.r0);
        set!(self.out, c.out);
        set!(self.size, c.render.size);
        set!(self.level, c.render.level);
        set!(self.kind, c.render.kind);
        set!(self.projection, c.render.projection);
        set!(self.axis, c.render.axis);
        if self.tol_exponent.is_some() {
            c.tol_exponent = self.tol_exponent;
        }
        if self.digits.is_some() {
            c.digits = self.digits;
        }
        if self.maps.is_some() {
            c.maps = self.maps;
        }
        if self.window.is_some() {
            c.render.window = self.window;
        }
        if self.target.is_some() {
            c.render.target = self.target;
        }
        if self.max_iter.is_some() {
            c.render.max_iter = self.max_iter;
        }
        if self.chain.is_some() {
            c.render.chain = self.chain;
        }
        c.validate()?;
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.flags.resolve().and_then(|cfg| match cli.command {
        Command::Setup => commands::setup(&cfg),
        Command::Chain => commands::chain(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Render => commands::render(&cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("matinglab: {e}");
            ExitCode::from(e.code())
        }
    }
}
