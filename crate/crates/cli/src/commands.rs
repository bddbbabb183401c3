use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ProjectionKind, RenderKind, RunConfig};
use crate::CliError;
use matinglab::dynamics::{solve_parameters, MatingParameters};
use matinglab::engine::{measure, measurements_csv, run_chain, run_chain_with, ChainJson, PullbackChain, StepOptions};
use matinglab::dynamics::initial_configuration;
use matinglab::engine::Level;
use matinglab::limits::{obstruction_preimage_data, LimitMapSet};
use matinglab::numerics::RiemannPoint;
use matinglab::render::{
    render_basins, render_mated_sphere, render_polynomial, write_atomic, Image, JuliaOptions, PolyTarget, Projection,
    RenderChain, RenderMeta, Window, RENDER_PREC,
};

fn fail(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

fn out_dir(cfg: &RunConfig) -> Result<&Path, CliError> {
    fs::create_dir_all(&cfg.out).map_err(|e| fail(format!("{}: {e}", cfg.out.display())))?;
    Ok(&cfg.out)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(fail)?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn params(prec: u32) -> Result<MatingParameters, CliError> {
    solve_parameters(prec).map_err(fail)
}

pub fn setup(cfg: &RunConfig) -> Result<(), CliError> {
    let p = params(cfg.precision)?;
    let json = p.to_json();
    println!("x = {}", json.x.0);
    println!("c = {} + {} i", json.c.0, json.c.1);
    write_json(&out_dir(cfg)?.join("params.json"), &json)
}

fn step_options(cfg: &RunConfig) -> StepOptions {
    let mut o = StepOptions::for_precision(cfg.precision);
    if let Some(t) = cfg.tol_exponent {
        o.tol_exponent = t;
    }
    o
}

pub fn chain(cfg: &RunConfig) -> Result<(), CliError> {
    let p = params(cfg.precision)?;
    let initial = initial_configuration(&p, Level::base(cfg.r0)).map_err(fail)?;
    let chain = run_chain_with(&p, initial, cfg.n_steps, &step_options(cfg), |n, o| {
        eprintln!("step {n:>2}: residual {:.3e}, {} substeps", o.residual, o.substeps);
    })
    .map_err(fail)?;
    let rows = measure(&chain).map_err(fail)?;
    let digits = cfg.digits.unwrap_or((cfg.precision as f64 * std::f64::consts::LOG10_2) as usize);
    let dir = out_dir(cfg)?;
    write_json(&dir.join("chain.json"), &chain.to_json())?;
    write_file(&dir.join("measurements.csv"), measurements_csv(&rows, digits).as_bytes())
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let set = match &cfg.maps {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            LimitMapSet::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => LimitMapSet::standard(),
    };
    let report = matinglab::limits::verify(&set, &obstruction_preimage_data(), cfg.seed).map_err(fail)?;
    for d in &report.diagrams {
        println!("[{}] critical diagram {}", if d.passed { "ok" } else { "FAIL" }, d.map);
    }
    for c in report.exact.iter() {
        println!("[{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name);
    }
    for c in &report.identities {
        println!("[{}] {}  (max error {:.2e})", if c.passed { "ok" } else { "FAIL" }, c.name, c.max_error);
    }
    let eig: Vec<String> = report.spectrum.eigenvalues.iter().map(|e| e.to_string()).collect();
    println!("matrix {} spectrum {{{}}} obstructed = {}", report.matrix, eig.join(", "), report.spectrum.obstructed);
    write_json(&out_dir(cfg)?.join("verify.json"), &report)?;
    if report.passed {
        Ok(())
    } else {
        Err(fail("limit-map verification failed; see verify.json"))
    }
}

fn window(cfg: &RunConfig, default: &str) -> Result<Window, CliError> {
    cfg.render
        .window
        .as_deref()
        .unwrap_or(default)
        .parse()
        .map_err(|e: matinglab::render::RenderError| CliError::Config(e.to_string()))
}

fn targets<'a>(cfg: &'a RunConfig, all: &[&'a str]) -> Result<Vec<&'a str>, CliError> {
    match cfg.render.target.as_deref() {
        None => Ok(all.to_vec()),
        Some(t) if all.contains(&t) => Ok(vec![t]),
        Some(t) => Err(CliError::Config(format!("target {t:?} is not one of {all:?}"))),
    }
}

fn save(dir: &Path, stem: &str, image: &Image, meta: &RenderMeta) -> Result<(), CliError> {
    write_file(&dir.join(format!("{stem}.ppm")), &image.to_ppm())?;
    write_json(&dir.join(format!("{stem}.json")), meta)
}

pub fn render(cfg: &RunConfig) -> Result<(), CliError> {
    let r = &cfg.render;
    let size = (r.size, r.size);
    let meta = |kind: &str, target: &str, window: Option<Window>, level: Option<usize>, projection: Option<Projection>, max_iter: usize| RenderMeta {
        kind: kind.into(),
        width: r.size,
        height: r.size,
        precision: RENDER_PREC,
        window,
        level,
        projection,
        max_iter,
        target: target.into(),
    };
    match r.kind {
        RenderKind::Julia => {
            let win = window(cfg, "-2,2,-2,2")?;
            let p = params(RENDER_PREC.max(cfg.precision))?;
            let mut opts = JuliaOptions::default();
            if let Some(m) = r.max_iter {
                opts.max_iter = m;
            }
            for t in targets(cfg, &["p1", "p2"])? {
                let target = if t == "p1" { PolyTarget::p1(&p) } else { PolyTarget::p2(&p) }.map_err(fail)?;
                let image = render_polynomial(&target, &win, size, &opts);
                let stem = format!("julia_{t}_w{}_{}", win.label(), r.size);
                save(out_dir(cfg)?, &stem, &image, &meta("julia", t, Some(win), None, None, opts.max_iter))?;
            }
        }
        RenderKind::Basins => {
            let win = window(cfg, "-3,3,-3,3")?;
            let max_iter = r.max_iter.unwrap_or(200);
            let set = LimitMapSet::standard();
            let pt = |v: Option<f64>| v.map_or(RiemannPoint::Infinity, |x| RiemannPoint::from_f64(x, 0.0, RENDER_PREC));
            for t in targets(cfg, &["h1", "h2"])? {
                let (h, att) = if t == "h1" {
                    (set.h1(), [pt(Some(0.0)), pt(Some(1.0)), pt(None)])
                } else {
                    (set.h2(), [pt(Some(0.0)), pt(Some(-0.5)), pt(None)])
                };
                let out = render_basins(&h.to_map(RENDER_PREC), &att, &win, size, r.eps, max_iter);
                let stem = format!("basins_{t}_w{}_{}", win.label(), r.size);
                save(out_dir(cfg)?, &stem, &out.image, &meta("basins", t, Some(win), None, None, max_iter))?;
            }
        }
        RenderKind::Mating => {
            let chain = load_or_run_chain(cfg, r.chain.as_ref(), r.level)?;
            if r.level > chain.len() {
                return Err(CliError::Config(format!("level {} exceeds the chain length {}", r.level, chain.len())));
            }
            let projection = match r.projection {
                ProjectionKind::Flat => Projection::Flat(window(cfg, "-2,2,-2,2")?),
                ProjectionKind::Ortho => Projection::Orthographic { axis: r.axis },
            };
            let mut rc = RenderChain::new(&chain).map_err(fail)?;
            if let Some(m) = r.max_iter {
                rc.opts.max_iter = m;
            }
            let out = render_mated_sphere(&rc, r.level, &projection, size).map_err(fail)?;
            let stem = format!("mating_L{}_{}_{}", r.level, projection.label(), r.size);
            let win = match projection {
                Projection::Flat(w) => Some(w),
                _ => None,
            };
            save(out_dir(cfg)?, &stem, &out.image, &meta("mating", "chain", win, Some(r.level), Some(projection), rc.opts.max_iter))?;
        }
    }
    Ok(())
}

fn load_or_run_chain(cfg: &RunConfig, path: Option<&PathBuf>, level: usize) -> Result<PullbackChain, CliError> {
    match path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let json: ChainJson =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let p = params(json.precision)?;
            PullbackChain::from_json(&json, &p).map_err(fail)
        }
        None => {
            let p = params(cfg.precision)?;
            run_chain(&p, cfg.r0, level, &step_options(cfg)).map_err(fail)
        }
    }
}
