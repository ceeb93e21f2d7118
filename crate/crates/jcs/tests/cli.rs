//! End-to-end runs of the `jcs` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn jcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcs")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn out_arg(dir: &Path, stem: &str) -> String {
    dir.join(stem).to_str().unwrap().to_string()
}

/// Rows of a CSV table, skipping `#` comments and the column header.
fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn default_harmonic_verify_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (out_arg(dir.path(), "a"), out_arg(dir.path(), "b"));
    let o = jcs(&["verify", "--out", &a]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&jcs(&["verify", "--out", &b])), 0);

    let mut ra = read_json(&dir.path().join("a.json"));
    let mut rb = read_json(&dir.path().join("b.json"));
    let entries = ra["entries"].as_array().unwrap();
    assert_eq!(ra["summary"]["total"].as_u64().unwrap() as usize, entries.len());
    assert_eq!(ra["summary"]["passed"], ra["summary"]["total"]);
    for e in entries {
        assert_eq!(
            e["passed"].as_bool().unwrap(),
            e["abs_error"].as_f64().unwrap() <= e["tolerance"].as_f64().unwrap()
        );
    }
    assert!(dir.path().join("a.txt").exists());
    ra["summary"]["wall_time_seconds"] = Value::Null;
    rb["summary"]["wall_time_seconds"] = Value::Null;
    assert_eq!(ra, rb);
}

#[test]
fn impossible_tolerance_fails() {
    let o = jcs(&["verify", "--tol", "harmonic_tridiagonal=1e-30"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL   harmonic.tridiagonal"));
}

#[test]
fn config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "r");
    // V0 = β²/8 puts the depth parameter D at zero
    let o = jcs(&["verify", "--model", "morse", "--beta", "0.5", "--v0", "0.03125", "--out", &out]);
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("r.json").exists());
    assert_eq!(code(&jcs(&["verify", "--tol", "bogus=1"])), 2);
    assert_eq!(code(&jcs(&["verify", "--tol", "landau=0"])), 2);
    assert_eq!(code(&jcs(&["verify", "--omega", "-1"])), 2);

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[harmonic]\nfrequency = 1.0\n").unwrap();
    assert_eq!(code(&jcs(&["verify", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&jcs(&["verify", "--config", "/nonexistent/jcs.toml"])), 2);
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "model = \"harmonic\"\n[harmonic]\nz_re = 0.2\nz_im = -0.1\nomega = 1.0\n[kernel]\nm = 2\nw_re = 0.5\n[truncations]\nkernel_terms = 120\n",
    )
    .unwrap();
    let out = out_arg(dir.path(), "k");
    let o = jcs(&["kernel", "--config", cfg.to_str().unwrap(), "--out", &out]);
    assert_eq!(code(&o), 0);
    let r = read_json(&dir.path().join("k.json"));
    assert_eq!(r["entries"][0]["check_id"], "kernel.m=2.N=120");
}

#[test]
fn numerical_failure_is_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "n");
    let o = jcs(&["verify", "--model", "morse", "--tol", "quadrature=1e-300", "--out", &out]);
    assert_eq!(code(&o), 3);
    let r = read_json(&dir.path().join("n.json"));
    let failed: Vec<&Value> = r["entries"].as_array().unwrap().iter().filter(|e| e.get("failure").is_some()).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|e| !e["passed"].as_bool().unwrap()));
}

#[test]
fn tabulate_contract() {
    let dir = tempfile::tempdir().unwrap();
    let grid = ["--x-min", "-5", "--x-max", "5", "--points", "101"];
    let run = |stem: &str, extra: &[&str]| -> String {
        let out = out_arg(dir.path(), stem);
        let mut args = vec!["tabulate", "--out", &out];
        args.extend_from_slice(&grid);
        args.extend_from_slice(extra);
        assert_eq!(code(&jcs(&args)), 0);
        std::fs::read_to_string(dir.path().join(format!("{stem}.csv"))).unwrap()
    };
    let phi = run("phi", &["--what", "phi", "--m", "0", "--z-re", "0", "--z-im", "0"]);
    let psi = run("psi", &["--what", "psi", "--m", "0"]);
    assert!(phi.lines().next().unwrap().starts_with('#'));
    let (pr, sr) = (rows(&phi), rows(&psi));
    assert_eq!(pr.len(), 101);
    for (a, b) in pr.iter().zip(&sr) {
        assert_eq!(a.len(), 4);
        assert_eq!(a[0], b[0]);
        assert!((a[1] - b[1]).abs() < 1e-12 && (a[2] - b[2]).abs() < 1e-12);
        assert!((a[3] - a[1].hypot(a[2])).abs() < 1e-15);
    }

    let again = run("phi2", &["--what", "phi", "--m", "0", "--z-re", "0", "--z-im", "0"]);
    assert_eq!(phi, again);

    for what in ["phi", "psi", "glauber", "coefficients"] {
        let out = out_arg(dir.path(), what);
        let o = jcs(&["tabulate", "--model", "morse", "--what", what, "--m", "1", "--n-max", "12", "--out", &out]);
        assert_eq!(code(&o), 0, "{what}: {}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(dir.path().join(format!("{what}.csv"))).unwrap();
        assert!(rows(&text).iter().all(|r| r.len() == 4 && r.iter().all(|v| v.is_finite())));
    }
    // the default well holds 8 bound states
    assert_eq!(code(&jcs(&["tabulate", "--model", "morse", "--what", "psi", "--m", "8"])), 2);
}

#[test]
fn kernel_diagonal_and_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "k");
    let o = jcs(&["kernel", "--z-re", "0.8", "--z-im", "-0.6", "--m", "0", "--out", &out]);
    assert_eq!(code(&o), 0);
    let r = read_json(&dir.path().join("k.json"));
    assert_eq!(r["entries"].as_array().unwrap().len(), 1);
    let target = r["entries"][0]["target"]["re"].as_f64().unwrap();
    let want = 1f64.exp() / std::f64::consts::PI;
    assert!((target - want).abs() < 1e-13 * want);

    let gap = |n: &str| -> f64 {
        let out = out_arg(dir.path(), n);
        let args = [
            "kernel", "--z-re", "4", "--z-im", "1", "--w-re", "3.5", "--w-im", "2", "--m", "2", "--n-max", n, "--out",
            &out,
        ];
        jcs(&args);
        read_json(&dir.path().join(format!("{n}.json")))["entries"][0]["abs_error"].as_f64().unwrap()
    };
    let (g50, g100, g200) = (gap("50"), gap("100"), gap("200"));
    assert!(g100 < g50 && g200 <= g100, "{g50} {g100} {g200}");
    assert_eq!(code(&jcs(&["kernel", "--omega", "2"])), 2);
    assert_eq!(code(&jcs(&["kernel", "--n-max", "0"])), 2);
}

#[test]
fn limit_study_rows_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "l");
    let o = jcs(&["limit-study", "--m", "0", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let data = rows(&std::fs::read_to_string(dir.path().join("l.csv")).unwrap());
    let betas: Vec<f64> = data.iter().map(|r| r[0]).collect();
    assert_eq!(betas, vec![0.5, 0.25, 0.125, 0.0625]);
    assert!(data.windows(2).all(|w| w[1][1] < w[0][1]));
    let r = read_json(&dir.path().join("l.json"));
    assert!(r["entries"].as_array().unwrap().iter().any(|e| e["check_id"] == "morse.limit.m=0.monotone"));

    let single = out_arg(dir.path(), "s");
    jcs(&["limit-study", "--beta-path", "0.0625", "--out", &single]);
    assert_eq!(rows(&std::fs::read_to_string(dir.path().join("s.csv")).unwrap()).len(), 1);
    let r = read_json(&dir.path().join("s.json"));
    let ids: Vec<&str> = r["entries"].as_array().unwrap().iter().map(|e| e["check_id"].as_str().unwrap()).collect();
    assert_eq!(ids, vec!["morse.limit.m=0.final_distance"]);
    assert_eq!(code(&jcs(&["limit-study", "--beta-path", "0.5,-1"])), 2);
}
