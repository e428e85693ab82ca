use std::path::Path;
use std::process::{Command, Output};

fn freezelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freezelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--out", p]);
    let out = freezelab(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    std::fs::read(&path).unwrap()
}

#[test]
fn files_are_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["freeze", "--n", "64", "--samples", "120", "--seed", "9"][..],
        &["extremes", "--model", "fourier", "--n", "32", "--samples", "200", "--format", "json"][..],
        &["table1", "--samples", "12", "--t-center", "1e5"][..],
    ] {
        let files: Vec<Vec<u8>> = ["1", "4", "8"]
            .iter()
            .map(|w| {
                let mut a = args.to_vec();
                a.extend(["--workers", w]);
                run_to(dir.path(), &format!("{}-{w}.out", args[0]), &a)
            })
            .collect();
        assert_eq!(files[0], files[1], "{args:?}");
        assert_eq!(files[0], files[2], "{args:?}");
    }
}

#[test]
fn csv_header_and_rows() {
    let out = freezelab(&["fh-ratio", "--sizes", "8,16", "--betas", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# schema_version: freezelab-output/1");
    assert!(lines.iter().any(|l| l.starts_with("# build: ")));
    assert!(lines.contains(&"# rng: chacha20-sha256-lineage-v1"));
    assert!(lines.contains(&"# sizes: 8,16"));
    let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    assert_eq!(lines[header], "beta,n,ratio");
    let ratio: f64 = lines[header + 1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((ratio - 9.0 / 8.0).abs() < 1e-12);
    assert_eq!(lines.len(), header + 3);
    assert!(!text.contains('\r'));
}

#[test]
fn json_mirror() {
    let out = freezelab(&["covariance", "--window", "500", "--separations", "0.05,0.3", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["separation", "estimate", "stderr"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert_eq!(doc["metadata"]["window"], "500");
}

#[test]
fn exit_codes() {
    assert_eq!(freezelab(&["--help"]).status.code(), Some(0));
    assert_eq!(freezelab(&["extremes", "--n", "0"]).status.code(), Some(2));
    assert_eq!(freezelab(&["freeze", "--betas", "x"]).status.code(), Some(2));
    assert_eq!(freezelab(&["table1", "--model", "cue"]).status.code(), Some(2));
    // the longest lag does not fit 32 times into the window
    let numeric = freezelab(&["covariance", "--window", "100", "--separations", "5"]);
    assert_eq!(numeric.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&numeric.stderr).contains("covariance"));
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.csv");
    let io = freezelab(&["fh-ratio", "--out", missing.to_str().unwrap()]);
    assert_eq!(io.status.code(), Some(4));
}

#[test]
fn usage_errors_are_reported_together() {
    let out = freezelab(&["moments", "--model", "zeta", "--samples", "1", "--c", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 4, "{err}");
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cov.csv");
    let out = freezelab(&["covariance", "--window", "100", "--separations", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "experiment = \"freeze\"\nn = 32\nsamples = 50\nseed = 5\nworkers = 8\n").unwrap();
    let c = cfg.to_str().unwrap();
    let a = run_to(dir.path(), "a.csv", &["freeze", "--config", c]);
    let b = run_to(dir.path(), "b.csv", &["freeze", "--config", c, "--workers", "2"]);
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("# n: 32\n") && text.contains("# seed: 5\n"));
}
