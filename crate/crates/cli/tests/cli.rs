use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_matinglab"));
    c.env("MATINGLAB_THREADS", "1");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("matinglab-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

#[test]
fn setup_writes_parameters() {
    let d = scratch("setup");
    let o = run(&["setup", "--precision", "128"], &d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("params.json")).unwrap()).unwrap();
    assert_eq!(v["precision"], 128);
    let x: f64 = v["x"][0].as_str().unwrap().parse().unwrap();
    assert!((x - 0.8445).abs() < 1e-4);
    let c_im: f64 = v["c"][1].as_str().unwrap().parse().unwrap();
    assert!((c_im - 1.2604).abs() < 1e-3);
}

#[test]
fn low_precision_is_a_config_error() {
    let d = scratch("lowprec");
    let o = run(&["setup", "--precision", "32"], &d);
    assert_eq!(o.status.code(), Some(2));
    assert!(!d.join("params.json").exists());
}

#[test]
fn unknown_config_key_is_rejected() {
    let d = scratch("badkey");
    let cfg = fixture("config_unknown_key.json");
    let o = run(&["--config", cfg.to_str().unwrap(), "setup"], &d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_standard_maps_passes() {
    let d = scratch("verify");
    let maps = fixture("maps_standard.json");
    let o = run(&["verify", "--maps", maps.to_str().unwrap()], &d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("verify.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["spectrum"]["obstructed"], true);
}

#[test]
fn verify_typo_in_maps_fails() {
    let d = scratch("typo");
    let maps = fixture("maps_typo.json");
    let o = run(&["verify", "--maps", maps.to_str().unwrap()], &d);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("verify.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn julia_render_has_exact_size() {
    let d = scratch("julia");
    let o = run(&["render", "--kind", "julia", "--target", "p1", "--size", "40", "--window=-1.5,1.5,-1.5,1.5"], &d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ppm = d.join("julia_p1_w-1.5_1.5_-1.5_1.5_40.ppm");
    let bytes = fs::read(&ppm).unwrap();
    let header = b"P6\n40 40\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 40 * 40 * 3);
    assert!(d.join("julia_p1_w-1.5_1.5_-1.5_1.5_40.json").exists());
}

#[test]
fn chain_csv_is_deterministic() {
    let a = scratch("chain-a");
    let b = scratch("chain-b");
    for d in [&a, &b] {
        let o = run(&["chain", "--steps", "4", "--digits", "20"], d);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ca = fs::read(a.join("measurements.csv")).unwrap();
    assert_eq!(ca, fs::read(b.join("measurements.csv")).unwrap());
    assert_eq!(fs::read(a.join("chain.json")).unwrap(), fs::read(b.join("chain.json")).unwrap());
    let text = String::from_utf8(ca).unwrap();
    assert_eq!(text.lines().count(), 5);
    // v2 = 1.15567254331 + 0.357269506200 i
    let row2: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert!(row2[2].starts_with("1.1556725433"));
    assert!(row2[3].starts_with("0.35726950620"));
}

#[test]
fn mating_from_saved_chain_rejects_excess_level() {
    let d = scratch("mating");
    assert!(run(&["chain", "--steps", "3"], &d).status.success());
    let chain = d.join("chain.json");
    let ok = run(&["render", "--kind", "mating", "--chain", chain.to_str().unwrap(), "--level", "3", "--size", "24"], &d);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    let bytes = fs::read(d.join("mating_L3_flat_-2_2_-2_2_24.ppm")).unwrap();
    assert_eq!(bytes.len(), b"P6\n24 24\n255\n".len() + 24 * 24 * 3);
    let bad = run(&["render", "--kind", "mating", "--chain", chain.to_str().unwrap(), "--level", "4", "--size", "24"], &d);
    assert_eq!(bad.status.code(), Some(2));
}
