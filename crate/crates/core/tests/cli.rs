use std::process::Command;

fn reachkit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_reachkit")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn sample_then_sdr_on_the_plugin_metric() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = dir.path().join("c.csv");
    let c = cloud.to_str().unwrap();
    let (code, _) = reachkit(&["sample", "--shape", "circle", "--params", "r=1", "--n", "800", "--seed", "3", "--out", c]);
    assert_eq!(code, 0);
    let (code, out) = reachkit(&[
        "sdr", "--input", c, "--delta", "0.5", "--d", "1", "--rch-min", "1", "--f-min", "0.159",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let r = v["value"].as_f64().unwrap();
    assert!((r - 1.0).abs() < 0.05, "{r}");
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let out = dir.path().join("s.csv");
    std::fs::write(&cfg, "shape=sphere\nparams=d=2,r=2\nn=5\nseed=9\n").unwrap();
    let (code, _) = reachkit(&["sample", "--config", cfg.to_str().unwrap(), "--n", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# dim=3"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 7);
}

#[test]
fn bench_is_reproducible_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let (code, _) = reachkit(&[
            "bench", "--shape", "circle", "--estimator", "metric", "--n-grid", "100,200,400",
            "--replicates", "3", "--seed", "5", "--sources", "16", "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let (code, out) = reachkit(&["fit-rate", "--input", dir.path().join("a.csv").to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["slope"].as_f64().unwrap() < 0.0);
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(reachkit(&["sample", "--shape", "circle", "--params", "r=-1", "--n", "3"]).0, 2);
    assert_eq!(reachkit(&["bench", "--shape", "circle", "--n-grid", "50,20"]).0, 2);
    assert_eq!(reachkit(&["frobnicate"]).0, 2);
}
