use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qcost(dir: &Path, args: &[&str], config: &str) -> Output {
    let path = dir.join("run.cfg");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_qcost"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn out_path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn tau_sweep_minimum_sits_at_the_optimal_time() {
    let dir = TempDir::new().unwrap();
    let out = out_path(&dir, "tau.csv");
    let run = qcost(
        dir.path(),
        &["lz-sweep-tau", "--out", out.to_str().unwrap(), "--svg"],
        "experiment = lz-sweep-tau\n",
    );
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["tau", "zeta_z", "zeta_cd", "zeta_total"]);
    assert_eq!(rows.len(), 200);
    assert_eq!((rows[0][0], rows[199][0]), (0.05, 50.0));
    let best = rows.iter().min_by(|a, b| a[3].total_cmp(&b[3])).unwrap();
    // τ_min = √(b/a) with a = g0²·131/231 and b = ζ_CD(τ = 1) for g0/Δ = 0.2.
    let tau_min = (0.056_078_773_750_718_32_f64 / (0.04 * 131.0 / 231.0)).sqrt();
    let spacing = (50f64 / 0.05).ln() / 199.0;
    assert!(
        (best[0] / tau_min).ln().abs() <= spacing,
        "{} vs {tau_min}",
        best[0]
    );
    let svg = std::fs::read_to_string(dir.path().join("tau.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("<polyline").count() == 3);
}

#[test]
fn bures_sweep_reproduces_the_qualitative_shapes() {
    let dir = TempDir::new().unwrap();
    let out = out_path(&dir, "bures.csv");
    let run = qcost(
        dir.path(),
        &["lz-sweep-bures", "--out", out.to_str().unwrap()],
        "",
    );
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["bures", "zeta_min", "tau_min", "zeta_cd", "bound"]);
    assert!(rows.windows(2).all(|w| w[1][1] > w[0][1]));
    assert!(rows.iter().all(|r| r[3] > r[4]));
}

#[test]
fn penning_eta_sweep_respects_bounds() {
    let dir = TempDir::new().unwrap();
    let out = out_path(&dir, "eta.csv");
    let run = qcost(
        dir.path(),
        &["penning-sweep-eta", "--out", out.to_str().unwrap(), "--svg"],
        "c = 1.3333333333333333\nnu = 0.5\n",
    );
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        ["ratio", "eta", "zeta_d", "lower_bound", "static_term"]
    );
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r[3] <= r[2]));
    assert!(rows.iter().any(|r| r[0] < 1.0) && rows.iter().any(|r| r[0] > 1.0));
}

#[test]
fn unrealizable_eta_exits_with_code_three() {
    let dir = TempDir::new().unwrap();
    let run = qcost(
        dir.path(),
        &["penning-sweep-eta", "--eta_min", "0.5"],
        "experiment=penning-sweep-eta\n",
    );
    assert_eq!(run.status.code(), Some(3));
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("eta = 0.5") && err.contains("s = "), "{err}");
}

#[test]
fn penning_bures_sweep_shows_asymmetry() {
    let dir = TempDir::new().unwrap();
    let out = out_path(&dir, "pb.csv");
    let run = qcost(
        dir.path(),
        &["penning-sweep-bures", "--out", out.to_str().unwrap()],
        "eta = 1\n",
    );
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        ["bures", "c", "zeta_d_compression", "zeta_d_expansion"]
    );
    assert!(rows.iter().all(|r| r[2] > r[3] && r[1] > 1.0));
}

#[test]
fn circuit_validation_is_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let config = "experiment = circuit-validate\nseed = 42\ntrajectories = 500\n";
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "4", "4"].iter().enumerate() {
        let path = out_path(&dir, &format!("c{i}.csv"));
        let cfg_path = dir.path().join("run.cfg");
        std::fs::write(&cfg_path, config).unwrap();
        let run = Command::new(env!("CARGO_BIN_EXE_qcost"))
            .args([
                "circuit-validate",
                "--config",
                cfg_path.to_str().unwrap(),
                "--out",
                path.to_str().unwrap(),
            ])
            .env("QCOST_THREADS", threads)
            .output()
            .unwrap();
        assert!(
            run.status.success(),
            "{}",
            String::from_utf8_lossy(&run.stderr)
        );
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let (header, rows) = read_csv(&out_path(&dir, "c0.csv"));
    assert_eq!(header[0], "t");
    assert_eq!(header.len(), 8);
    assert!(rows.iter().all(|r| (r[2] - r[1]).abs() < 5.0 * r[3]));

    let reseeded = out_path(&dir, "c3.csv");
    let cfg_path = dir.path().join("run.cfg");
    let run = Command::new(env!("CARGO_BIN_EXE_qcost"))
        .args([
            "circuit-validate",
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            reseeded.to_str().unwrap(),
            "--seed",
            "7",
        ])
        .output()
        .unwrap();
    assert!(run.status.success());
    assert_ne!(std::fs::read(&reseeded).unwrap(), outputs[0]);
}

#[test]
fn configuration_errors_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let unknown = qcost(dir.path(), &["lz-sweep-tau", "--bogus", "1"], "");
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("bogus"));

    let mismatch = qcost(
        dir.path(),
        &["lz-sweep-tau"],
        "experiment = penning-sweep-eta\n",
    );
    assert_eq!(mismatch.status.code(), Some(2));

    let bad_threads = Command::new(env!("CARGO_BIN_EXE_qcost"))
        .args(["lz-sweep-tau", "--config", "/nonexistent.cfg"])
        .env("QCOST_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));

    let missing_config = qcost(
        dir.path(),
        &["lz-sweep-tau", "--config", "/nonexistent.cfg"],
        "",
    );
    assert_eq!(missing_config.status.code(), Some(2));
}

#[test]
fn default_output_name_follows_the_experiment() {
    let dir = TempDir::new().unwrap();
    let run = qcost(dir.path(), &["lz-sweep-tau", "--points", "5"], "");
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let (_, rows) = read_csv(&dir.path().join("lz-sweep-tau.csv"));
    assert_eq!(rows.len(), 5);
}
