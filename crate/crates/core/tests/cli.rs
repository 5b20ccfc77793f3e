use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qd_hom::io::ResultDocument;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qd-hom"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["hom-dip", "--points", "many"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn bad_config_exits_3_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "g_uev = 34\nkappa_mev = wide\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "simulate"]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn malformed_dataset_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("dip.csv");
    std::fs::write(&csv, "tau_d_ns,g2hom,g2hom_err\n0.0,0.2,0.02\n0.1,oops,0.02\n").unwrap();
    let o = run(&["fit", "dip", "--data", csv.to_str().unwrap(), "--t1", "67"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 3"));
}

#[test]
fn strict_validity_exits_5_and_lenient_warns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("detuned.cfg");
    std::fs::write(&cfg, "delta_mev = 0.6\n").unwrap();
    let c = cfg.to_str().unwrap();
    let strict = run(&["--config", c, "--strict", "simulate"]);
    assert_eq!(code(&strict), 5);
    let lenient = run(&["--config", c, "simulate"]);
    assert_eq!(code(&lenient), 0);
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("validity ratio"));
}

#[test]
fn hom_dip_csv_shape() {
    let o = run(&["hom-dip"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tau_d_ps,g2hom_analytic,g2hom_numeric");
    assert_eq!(lines.len(), 42);
    let mid: Vec<f64> = lines[21].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(mid[0], 0.0);
    assert!((mid[1] - mid[2]).abs() < 1e-3);
}

#[test]
fn sweep_accepts_negative_bounds() {
    let o = run(&[
        "sweep", "--param", "delta_mev", "--from", "-0.05", "--to", "0.05", "--steps", "3",
        "--observable", "t1",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("delta_mev,t1_ps\n"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|s| s.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1], rows[2][1]);
    assert!(rows[1][1] < rows[0][1]);
    assert_eq!(code(&run(&["sweep", "--param", "emission_channel", "--from", "0", "--to", "1", "--steps", "2"])), 3);
}

#[test]
fn fit_documents_chain() {
    let dir = tempfile::tempdir().unwrap();
    let lt = dir.path().join("lt.json");
    let o = run(&[
        "fit", "lifetime", "--data", data("lifetime.csv").to_str().unwrap(), "--bootstrap", "20",
        "--out", lt.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = ResultDocument::read(&lt).unwrap();
    let fp = doc.get("fit").unwrap()["params"]["purcell_factor"].as_f64().unwrap();
    assert!(fp > 5.0 && fp < 20.0, "{fp}");
    let interval = doc.get("fit").unwrap()["intervals"]["purcell_factor"].as_array().unwrap();
    assert!(interval[0].as_f64().unwrap() <= fp && fp <= interval[1].as_f64().unwrap());

    let joint = dir.path().join("joint.json");
    let o = run(&[
        "fit", "joint", "--dip", data("homdip.csv").to_str().unwrap(), "--lifetime", lt.to_str().unwrap(),
        "--bootstrap", "0", "--out", joint.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = ResultDocument::read(&joint).unwrap();
    assert!(doc.get("regime").unwrap().is_string());
    assert!(doc.get("fit").unwrap()["params"]["t_alpha_ps"].as_f64().unwrap() > 0.0);
}

#[test]
fn phonon_rates_table() {
    let o = run(&["phonon-rates", "--from", "-1", "--to", "1", "--steps", "5"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("omega_mev,spectral_density_mev,rate_re_per_ps,rate_im_per_ps\n"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|s| s.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[2][2], 0.0);
    assert!(rows[4][2] > rows[0][2]);
}

#[test]
fn g2_correct_reports_clamping() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("dip.csv");
    std::fs::write(&csv, "tau_d_ns,g2hom\n0.0,0.01\n0.2,0.5\n").unwrap();
    let o = run(&["g2-correct", "--data", csv.to_str().unwrap(), "--g2zero", "0.04"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 values clamped"));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text, "tau_d_ns,g2hom\n0.0,0.0\n0.2,0.48\n");
}

#[test]
fn timing_is_opt_in() {
    let plain = String::from_utf8(run(&["simulate"]).stdout).unwrap();
    assert!(!plain.contains("wall_time_s"));
    let timed = String::from_utf8(run(&["--timing", "simulate"]).stdout).unwrap();
    assert!(timed.contains("wall_time_s"));
}
