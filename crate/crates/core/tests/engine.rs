use std::sync::OnceLock;

use matinglab::dynamics::solve_parameters;
use matinglab::engine::system::{jacobian, jacobian_fd, pack, residual, Targets};
use matinglab::engine::*;
use matinglab::numerics::BigComplex;

const PREC: u32 = 256;

fn chain() -> &'static PullbackChain {
    static CHAIN: OnceLock<PullbackChain> = OnceLock::new();
    CHAIN.get_or_init(|| {
        let p = solve_parameters(PREC).unwrap();
        run_chain(&p, DEFAULT_R0, 25, &StepOptions::for_precision(PREC)).unwrap()
    })
}

fn rows() -> &'static [MeasurementRow] {
    static ROWS: OnceLock<Vec<MeasurementRow>> = OnceLock::new();
    ROWS.get_or_init(|| measure(chain()).unwrap())
}

fn trunc(x: &BigComplex, digits: usize) -> (String, String) {
    (format_truncated(x.re(), digits), format_truncated(x.im(), digits))
}

#[test]
fn schedule_levels() {
    let c = chain();
    let r: Vec<String> = (1..=3).map(|n| format_truncated(&c.configs[n].level.value(PREC), 3)).collect();
    assert_eq!(r, ["21.5", "2.78", "1.40"]);
    for n in 1..c.configs.len() {
        let lv = c.configs[n].level;
        assert_eq!(lv.cube(), Some(c.configs[n - 1].level));
        let mut cubed = lv.value(PREC);
        cubed.pow_assign(3u32);
        let rel = (cubed / c.configs[n - 1].level.value(PREC) - 1u32).abs().to_f64();
        assert!(rel < 1e-70, "R_{n}^3 / R_{} - 1 = {rel:e}", n - 1);
    }
}

use rug::ops::PowAssign;

#[test]
fn residuals_within_tolerance() {
    let tol = StepOptions::for_precision(PREC).tol();
    for (n, r) in chain().residuals.iter().enumerate() {
        assert!(*r <= tol, "step {}: residual {r:e} > {tol:e}", n + 1);
    }
}

#[test]
fn resubstitution_follows_the_schema() {
    let c = chain();
    let schema = MatingSchema;
    for n in 1..=c.len() {
        let f = c.map(n);
        for &l in schema.labels() {
            let got = f.eval(&c.configs[n].position(l)).unwrap();
            let want = c.configs[n - 1].position(schema.image_of(l));
            let d = got.chordal_distance(&want);
            assert!(d < 1e-50, "step {n}: F({l:?}) off by {d:e}");
        }
    }
}

#[test]
fn critical_structure_of_each_map() {
    let c = chain();
    let tol = StepOptions::for_precision(PREC).tol();
    for n in 1..=c.len() {
        let w = c.map(n).wronskian();
        for k in [0, 1, 4] {
            assert!(w.coeff(k).abs_f64() <= tol, "step {n}: w{k} = {:e}", w.coeff(k).abs_f64());
        }
        // W(z)/z² has a nonzero limit at 0 and deg W = 3
        assert!(w.coeff(2).abs_f64() > 1e-12);
        assert!(w.coeff(3).abs_f64() > 1e-12);
        // F(1) = 1 and F(c2') = 0, as the equations p(1) = q(1), p(c2') = 0
        let f = c.map(n);
        let one = BigComplex::one(PREC);
        assert!((&f.p.eval(&one) - &f.q.eval(&one)).abs_f64() <= tol);
        assert!(f.p.eval(&c.configs[n].c2).abs_f64() <= tol);
    }
}

#[test]
fn reference_ratios_at_rows_ten_and_twenty() {
    let r = rows();
    // v_10 / v_9 ≈ 0.16016 + 0.27763i
    assert_eq!(trunc(&r[9].v_ratio, 5), ("0.16016".into(), "0.27763".into()));
    // v_20 / v_19 ≈ 0.160249937 + 0.277561021i
    assert_eq!(trunc(&r[19].v_ratio, 9), ("0.160249937".into(), "0.277561021".into()));
}

#[test]
fn uvprev_at_row_fifteen() {
    // u_15 / v_14 ≈ −0.88888972
    assert_eq!(format_truncated(rows()[14].uvprev.re(), 8), "-0.88888972");
}

#[test]
fn rotation_factor_settles() {
    let r = rows();
    let target = std::f64::consts::FRAC_PI_3;
    for row in &r[24..] {
        let a = row.v_ratio.im_f64().atan2(row.v_ratio.re_f64());
        assert!((a - target).abs() < 1e-6, "n = {}: arg = {a}", row.n);
        let m = row.v_ratio.abs_f64();
        assert!(m > 0.315 && m < 0.325, "|rho| = {m}");
        assert!((m - 1.0 / 3.0).abs() > 0.01);
    }
}

#[test]
fn csv_is_truncated_and_shaped() {
    let csv = measurements_csv(rows(), 10);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 26);
    assert!(lines[20].starts_with("20,1.000000002"));
    assert!(lines[20].contains(",0.1602499379,0.2775610217,"));
}

#[test]
fn measuring_a_collapsed_level_fails() {
    let mut c = chain().clone();
    c.configs[3].c1 = c.configs[3].y.clone();
    match measure(&c) {
        Err(EngineError::PrecisionFloor { n, .. }) => assert_eq!(n, 3),
        other => panic!("expected a precision-floor error, got {other:?}"),
    }
}

#[test]
fn json_round_trip() {
    let c = chain();
    let text = serde_json::to_string(&c.to_json()).unwrap();
    let back = PullbackChain::from_json(&serde_json::from_str(&text).unwrap(), &c.params).unwrap();
    assert_eq!(back.configs, c.configs);
    assert_eq!(back.maps, c.maps);
    assert_eq!(back.residuals, c.residuals);
}

#[test]
fn analytic_jacobian_at_a_solved_step() {
    let c = chain();
    let n = 5;
    let sol = &c.configs[n];
    let x = pack(c.map(n), &sol.y1, &sol.c1, &sol.c2);
    let t = Targets {
        y: c.configs[n - 1].y.clone(),
        y1: c.configs[n - 1].y1.clone(),
        c1: c.configs[n - 1].c1.clone(),
        c2: c.configs[n - 1].c2.clone(),
    };
    let (f, _) = residual(&x, &t).unwrap();
    assert!(f.iter().all(|v| v.abs_f64() < 1e-60));
    let ja = jacobian(&x, &t).unwrap();
    let jf = jacobian_fd(&x, &t, 1e-30).unwrap();
    for (ra, rf) in ja.iter().zip(&jf) {
        for (a, b) in ra.iter().zip(rf) {
            assert!((a - b).abs_f64() < 1e-3 * (1.0 + a.abs_f64()));
        }
    }
}

#[test]
fn extending_matches_a_longer_run() {
    let p = solve_parameters(PREC).unwrap();
    let opts = StepOptions::for_precision(PREC);
    let mut short = run_chain(&p, DEFAULT_R0, 3, &opts).unwrap();
    short.extend(2, &opts).unwrap();
    for n in 0..=5 {
        assert_eq!(short.configs[n], chain().configs[n]);
    }
}
