//! End-to-end runs of the command-line driver.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lr_staggered::params::ModelParams;
use lr_staggered::states::{mixed_neel, Quadrature};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_lr-staggered")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

fn invoke(sub: &str, config: Option<&Path>, out: &Path, extra: &[&str]) -> Output {
    let mut c = Command::new(bin());
    c.arg(sub).arg("--out").arg(out).args(extra);
    if let Some(cfg) = config {
        c.arg("--config").arg(cfg);
    }
    c.output().unwrap()
}

/// Data rows of a CSV artifact (metadata and header skipped).
fn rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn spectrum_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"model": {"J": 2.0, "h": 1.0, "n_spins": 50}}"#);
    let out = dir.path().join("out");
    let o = invoke("spectrum", Some(&cfg), &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&out.join("spectrum.csv")).len(), 676);
    let text = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert!(text.starts_with("# lr-staggered "));
    assert!(text.contains("# config_sha256: "));
    assert!(text.contains("# conventions: "));
    assert!(out.join("resolved_config.json").exists());
}

#[test]
fn evolve_starts_at_mixed_moment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"model": {"J": 5.0, "h": 1.0, "n_spins": 500},
            "state": {"kind": "mixed", "theta": 2.356194490192345, "sigma": 0.01},
            "times": {"kind": "linear", "t_min": 0.0, "t_max": 5.0, "points": 11}}"#,
    );
    let out = dir.path().join("out");
    let o = invoke("evolve", Some(&cfg), &out, &["--threads", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&out.join("evolve.csv"));
    assert_eq!(r.len(), 11);
    assert_eq!(r[0][0], 0.0);
    let p = ModelParams::new(5.0, 1.0, 500).unwrap();
    let m = mixed_neel(&p, (2.356194490192345, 0.0), 0.01, Quadrature::default()).unwrap().moments();
    assert!((r[0][1] - m.mean_nz).abs() < 1e-9, "{} vs {}", r[0][1], m.mean_nz);
}

#[test]
fn brute_reports_reduction() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"model": {"J": 1.0, "h": 0.5, "n_spins": 8}, "brute": {"sites": 4}}"#,
    );
    let out = dir.path().join("out");
    let o = invoke("brute", Some(&cfg), &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("brute_summary.json")).unwrap()).unwrap();
    let red = &v["result"]["reduction"];
    assert_eq!(red["sites"], 4);
    assert!(red["identity_error"].as_f64().unwrap() < 1e-12);
    assert!(red["relative_residual"].as_f64().unwrap() < 1.0);
    assert!(v["result"]["oracle"]["max_abs_diff"].as_f64().unwrap() < 1e-10);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"model": {"J": 3.0, "h": 1.0, "n_spins": 20},
            "state": {"kind": "mixed", "theta": 2.0, "sigma": 0.2,
                      "quadrature": {"scheme": "monte_carlo", "samples": 50, "seed": 1}},
            "times": {"kind": "linear", "t_min": 0.0, "t_max": 10.0, "points": 51}}"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = invoke("evolve", Some(&cfg), out, &["--seed", "9"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["evolve.csv", "evolve_summary.json", "resolved_config.json"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
    // the seed flag lands in the resolved copy
    let resolved = std::fs::read_to_string(a.join("resolved_config.json")).unwrap();
    assert!(resolved.contains("\"seed\": 9"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(invoke("spectrum", None, &out, &[]).status.code(), Some(2));

    let cfg = write_config(dir.path(), r#"{"model": {"J": 2.0, "h": 1.0, "n_spins": 20}, "bogus": 1}"#);
    let o = invoke("spectrum", Some(&cfg), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));

    let cfg = write_config(dir.path(), r#"{"model": {"J": 2.0, "h": 1.0, "n_spins": 9}}"#);
    let o = invoke("spectrum", Some(&cfg), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("model.n_spins"));
}
