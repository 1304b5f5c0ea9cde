use rydberg_penning::cli::{parse_angular, parse_grid, run};
use std::process::Command;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("rydpen").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (vec![], vec![]);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn rows(out: &str) -> Vec<&str> {
    out.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_rydpen");
    let st = |a: &[&str]| Command::new(bin).args(a).output().unwrap().status.code().unwrap();
    assert_eq!(st(&["trap", "--B", "1.85", "--beta", "7e5"]), 0);
    assert_eq!(st(&["trap", "--B", "0.1", "--beta", "7e5"]), 2);
    assert_eq!(st(&["trap", "--B", "1", "--beta", "1", "--species", "/no/such/file.species"]), 1);
    assert_eq!(st(&["trap", "--B", "abc", "--beta", "1"]), 1);
    assert_eq!(st(&["modes", "--wr", "2pi*220kHz", "--ratio", "1.5"]), 2);
}

#[test]
fn header_is_deterministic_and_hashes_config() {
    let (c1, a, _) = call(&["trap", "--B", "1.85", "--beta", "7e5"]);
    let (_, b, _) = call(&["trap", "--B", "1.85", "--beta", "7e5"]);
    let (_, c, _) = call(&["trap", "--B", "1.85", "--beta", "7.1e5"]);
    assert_eq!(c1, 0);
    assert_eq!(a, b);
    let hash = |s: &str| s.lines().find(|l| l.starts_with("# config-sha256")).unwrap().to_string();
    assert_ne!(hash(&a), hash(&c));
    assert!(a.starts_with("# rydpen "));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("rydpen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("trap.cfg");
    std::fs::write(&cfg, "# unstable on its own\nB = 0.1\nbeta = 7e5\n").unwrap();
    let p = cfg.to_str().unwrap();
    assert_eq!(call(&["trap", "--config", p]).0, 2);
    assert_eq!(call(&["trap", "--config", p, "--B", "1.85"]).0, 0);
    let out = dir.join("o.csv");
    let (code, stdout, _) = call(&["trap", "--config", p, "--B", "1.85", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("omega_z"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn spectrum_track_counts() {
    let labels = |out: &str| {
        let mut v: Vec<String> = rows(out).iter().map(|r| r.split('"').nth(1).unwrap().to_string()).collect();
        v.sort();
        v.dedup();
        v.len()
    };
    let (c, out, _) = call(&["spectrum", "--n", "45", "--B", "0:2:200"]);
    assert_eq!(c, 0);
    assert_eq!(labels(&out), 126);
    assert_eq!(rows(&out).len(), 126 * 200);
    let (_, out, _) = call(&["spectrum", "--n", "45", "--B", "0:2:20", "--lmax", "2"]);
    assert_eq!(labels(&out), 18);
    let (_, out, _) = call(&["spectrum", "--n", "45", "--B", "0:2:20", "--block-mj", "0.5"]);
    assert!(rows(&out).iter().all(|r| r.split(',').nth(1) == Some("1/2")));
    assert_eq!(call(&["spectrum", "--n", "45", "--B", "0:2:20", "--block-mj", "7.5"]).0, 1);
}

#[test]
fn spectrum_warns_past_diamagnetic_threshold() {
    let (c, _, err) = call(&["spectrum", "--n", "60", "--B", "0:2:5", "--lmax", "2"]);
    assert_eq!(c, 0);
    assert!(err.contains("warning"));
}

#[test]
fn radial_cache_directory_is_reused() {
    let dir = std::env::temp_dir().join(format!("rydpen-rc-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let (_, a, _) = call(&["spectrum", "--n", "25", "--B", "0:1:5", "--cache-dir", d]);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    let (_, b, _) = call(&["spectrum", "--n", "25", "--B", "0:1:5", "--cache-dir", d]);
    assert_eq!(rows(&a), rows(&b));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn limits_and_modes() {
    let (c, out, _) = call(&["limits", "--n", "50"]);
    assert_eq!(c, 0);
    let beta: f64 = out.lines().find(|l| l.starts_with("ionization_gradient")).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((beta / 9.2e10 - 1.0).abs() < 0.02);
    let (c, out, _) = call(&["modes", "--N", "3", "--wr", "2pi*220kHz"]);
    assert_eq!(c, 0);
    assert_eq!(rows(&out).len(), 6);
}

#[test]
fn spin_sweep_dataset() {
    let (c, out, _) = call(&["spin", "--Omega-sweep", "0:0.5:100", "--facilitation"]);
    assert_eq!(c, 0);
    assert_eq!(rows(&out).len(), 800);
    assert_eq!(call(&["spin", "--Omega-sweep", "0:0.5:10"]).0, 1);
}

#[test]
fn value_parsers() {
    let w = 2.0 * std::f64::consts::PI * 1.5e6;
    for s in ["2pi*1.5MHz", "1.5MHz", "1500kHz", "1.5e6Hz"] {
        assert!((parse_angular(s).unwrap() / w - 1.0).abs() < 1e-12, "{s}");
    }
    assert!(parse_angular("2pi*3rad/s").is_err());
    assert_eq!(parse_grid("1.5").unwrap().values(), vec![1.5]);
    assert!(parse_grid("0:1").is_err());
}
