use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ecdsep"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    bin()
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("cfg.toml");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn run_writes_csv_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config("hand_trace.toml");
    let out = run(
        &["run", "--config", cfg.to_str().unwrap(), "--svg"],
        tmp.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,f,energy,pi_norm,theta_norm"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert!((row[4].parse::<f64>().unwrap() - 0.6097560976).abs() < 1e-10);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["steps"], 1);
    assert!(summary["wall_ms"].is_null());
    assert!(tmp.path().join("trajectory.svg").exists());
}

#[test]
fn record_every_and_step_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "max_steps = 5\nrecord_every = 10\n[problem]\nkind = \"quadratic\"\nn = 3\nf_min = 1.0\n[optimizer]\nkind = \"ecdsep\"\n",
    );
    let out = run(
        &["run", "--config", cfg.to_str().unwrap(), "--steps", "100"],
        &tmp.path().join("o"),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(tmp.path().join("o/trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn same_seed_same_bytes_different_seed_different_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config("logistic_minibatch.toml");
    let cfg = cfg.to_str().unwrap();
    for (dir, seed) in [("a", "5"), ("b", "5"), ("c", "6")] {
        let out = run(
            &["run", "--config", cfg, "--seed", seed],
            &tmp.path().join(dir),
        );
        assert!(out.status.success());
    }
    let read = |d: &str, f: &str| std::fs::read(tmp.path().join(d).join(f)).unwrap();
    for f in ["trajectory.csv", "summary.json"] {
        assert_eq!(read("a", f), read("b", f));
    }
    assert_ne!(read("a", "trajectory.csv"), read("c", "trajectory.csv"));
}

#[test]
fn timing_is_opt_in() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config("hand_trace.toml");
    let out = run(
        &["run", "--config", cfg.to_str().unwrap(), "--timing"],
        tmp.path(),
    );
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("summary.json")).unwrap())
            .unwrap();
    assert!(summary["wall_ms"].is_u64());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");

    let missing = run(&["run", "--config", "/nonexistent/cfg.toml"], &out_dir);
    assert_eq!(missing.status.code(), Some(4));

    let unknown = write_config(
        tmp.path(),
        "max_steps = 5\n[problem]\nkind = \"rastrigin\"\n[optimizer]\nkind = \"ecdsep\"\n",
    );
    assert_eq!(
        run(&["run", "--config", unknown.to_str().unwrap()], &out_dir)
            .status
            .code(),
        Some(2)
    );

    let diverging = write_config(
        tmp.path(),
        "max_steps = 500\n[problem]\nkind = \"zakharov\"\nn = 10\n[optimizer]\nkind = \"gdm\"\nalpha = 1.0\n",
    );
    let out = run(&["run", "--config", diverging.to_str().unwrap()], &out_dir);
    assert_eq!(out.status.code(), Some(3));
    // the partial trajectory and a failed summary are still written
    let summary = std::fs::read_to_string(out_dir.join("summary.json")).unwrap();
    assert!(summary.contains("\"failed\": true"));

    let no_section = config("hand_trace.toml");
    let out = run(
        &["concentrate", "--config", no_section.to_str().unwrap()],
        &out_dir,
    );
    assert_eq!(out.status.code(), Some(2));

    let usage = bin().arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn sweep_and_analysis_subcommands() {
    let tmp = tempfile::tempdir().unwrap();
    let sweep = config("zakharov_sweep.toml");
    let out = run(
        &[
            "sweep",
            "--config",
            sweep.to_str().unwrap(),
            "--steps",
            "20",
        ],
        &tmp.path().join("s"),
    );
    assert!(out.status.success());
    let table = std::fs::read_to_string(tmp.path().join("s/sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 3 * 100);
    assert!(table.starts_with("optimizer,trial,rank,"));

    let conc = config("concentration.toml");
    let out = run(
        &[
            "concentrate",
            "--config",
            conc.to_str().unwrap(),
            "--steps",
            "20000",
        ],
        &tmp.path().join("c"),
    );
    assert!(out.status.success());
    let hist = std::fs::read_to_string(tmp.path().join("c/histogram.csv")).unwrap();
    assert_eq!(hist.lines().count(), 61);

    let eta = config("eta_scan.toml");
    let out = run(
        &[
            "eta-scan",
            "--config",
            eta.to_str().unwrap(),
            "--steps",
            "1000",
        ],
        &tmp.path().join("e"),
    );
    assert!(out.status.success());
    let rows = std::fs::read_to_string(tmp.path().join("e/eta_scan.csv")).unwrap();
    assert_eq!(rows.lines().count(), 4);

    let swa = config("swa_logistic.toml");
    let out = run(
        &["swa", "--config", swa.to_str().unwrap()],
        &tmp.path().join("w"),
    );
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("w/swa.json")).unwrap())
            .unwrap();
    assert!(summary["f_average"].as_f64().unwrap() <= summary["f_last"].as_f64().unwrap());
}
