use std::path::Path;
use std::process::{Command, Output};

fn ucfw(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucfw"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("UCFW_SEED")
        .output()
        .expect("spawn ucfw")
}

const CONFIG: &str = r#"{
    "name": "small",
    "problem": {"family": "quadratic", "dim": 5, "cond": 10, "x0_direction": "e1", "x0_scale": 1},
    "set": {"family": "lp", "p": 3, "radius": 1, "dim": 5},
    "p_grid": [2.5, 4],
    "horizon": 50,
    "optimum_location": "flat",
    "reference_steps": 2000
}"#;

#[test]
fn solve_writes_one_row_per_iterate_and_a_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    std::fs::write(&cfg, CONFIG).unwrap();
    let out = tmp.path().join("run");
    let o = ucfw(&out, &["solve", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("summary.json")).unwrap()).unwrap();
    let runs = summary["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 6);
    for r in runs {
        let stem = r["stem"].as_str().unwrap();
        let mut rd = csv::Reader::from_path(out.join(format!("{stem}.csv"))).unwrap();
        assert_eq!(rd.records().count() as u64, r["iterations"].as_u64().unwrap() + 1, "{stem}");
    }
    let manifest: Vec<serde_json::Value> =
        serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.len(), 6 * 2 + 3 + 1);
    for e in &manifest {
        let len = std::fs::metadata(out.join(e["file"].as_str().unwrap())).unwrap().len();
        assert_eq!(len, e["bytes"].as_u64().unwrap());
    }
}

#[test]
fn bad_config_exits_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    std::fs::write(&cfg, CONFIG.replace("\"dim\": 5}", "\"dim\": 4}")).unwrap();
    let o = ucfw(tmp.path(), &["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = ucfw(tmp.path(), &["solve", "--config", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_code_tracks_the_verdict() {
    let tmp = tempfile::tempdir().unwrap();
    let set = r#"{"family": "lp", "p": 3, "radius": 1, "dim": 3}"#;
    let ok = ucfw(tmp.path(), &["verify", "--set", set, "--check", "uniform_convexity", "--pairs", "300"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    assert!(tmp.path().join("verify_uniform_convexity.json").exists());

    let uc = r#"{"alpha": 10, "q": 3, "norm": {"lp": 3}}"#;
    let bad = ucfw(tmp.path(), &["verify", "--set", set, "--check", "uniform_convexity", "--uc", uc, "--pairs", "300"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn online_config_runs_and_bounds_regret() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("online.json");
    std::fs::write(
        &cfg,
        r#"{"name": "drift", "set": {"family": "lp", "p": 3, "radius": 1, "dim": 3},
            "stream": {"kind": "drifting_mean", "base": [1, -0.5, 0.2], "noise_scale": 0.3, "seed": 4},
            "horizon": 500}"#,
    )
    .unwrap();
    let o = ucfw(tmp.path(), &["online", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rd = csv::Reader::from_path(tmp.path().join("drift/regret.csv")).unwrap();
    assert_eq!(rd.records().count(), 500);
}
