use std::process::{Command, Output};

use serde_json::Value;

fn icoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icoh"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_csv_and_json_carry_identical_records() {
    let args = [
        "sweep", "--param", "T", "--grid", "0:1:5", "--va", "2", "--vb", "0.5", "--phi", "0.2",
    ];
    let csv = icoh(&args);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout(&csv);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        header,
        [
            "T",
            "n1_det",
            "n2_det",
            "visibility",
            "gamma12",
            "n_minus_mean",
            "n_minus_var",
            "snr"
        ]
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);

    let json = icoh(&[&args[..], &["--format", "json"]].concat());
    let records: Vec<serde_json::Map<String, Value>> =
        serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(records.len(), 5);
    for (rec, row) in records.iter().zip(&rows) {
        let keys: Vec<&String> = rec.keys().collect();
        assert_eq!(keys, header);
        for (h, x) in header.iter().zip(row) {
            assert_eq!(rec[*h].as_f64().unwrap(), *x);
        }
    }
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sub").join("sweep.csv");
    let out = out.to_str().unwrap();
    let args = [
        "sweep", "--param", "tau", "--vary", "phase", "--grid", "0:1:7", "--out", out,
    ];
    assert_eq!(icoh(&args).status.code(), Some(0));
    let first = std::fs::read(out).unwrap();
    assert_eq!(icoh(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(out).unwrap());
    assert!(String::from_utf8(first).unwrap().starts_with("tau,"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# optimize defaults\nva = 100\nt = 0.5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_cfg = stdout(&icoh(&["optimize", "--config", cfg]));
    assert!(from_cfg
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("1.00000000000e2,5.00000000000e-1,"));
    let overridden = stdout(&icoh(&["optimize", "--config", cfg, "--t", "0.1"]));
    let values: Vec<f64> = overridden
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(values[1], 0.1);
    assert!((values[3] - 0.9582).abs() < 1e-4);
}

#[test]
fn optimize_reports_infeasible_t2_with_exit_zero() {
    let o = icoh(&["optimize", "--va", "1", "--t", "1", "--vb", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().contains("infeasible"));
    let feasible = stdout(&icoh(&["optimize", "--va", "1", "--t", "1", "--vb", "2"]));
    assert!(feasible.contains("T2_opt"));
    assert!(feasible
        .lines()
        .nth(1)
        .unwrap()
        .contains("2.50000000000e-1"));
}

#[test]
fn figure_writes_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = icoh(&[
        "figure",
        "visibility",
        "--gains",
        "0,10",
        "--points",
        "11",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "visibility_eg_va0.csv",
            "visibility_eg_va10.csv",
            "visibility_opt_va0.csv",
            "visibility_opt_va10.csv"
        ]
    );
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["sweep", "--param", "T", "--grid", "0:2:5"][..],
        &["sweep", "--param", "T", "--grid", "0:1:1"],
        &["sweep", "--param", "T"],
        &["sweep", "--param", "gain", "--grid", "0:1:3"],
        &["figure", "fig2"],
        &["validate", "--samples", "0"],
        &["optimize", "--va", "-1"],
        &["launch"],
        &["sweep", "--bogus"],
    ] {
        let o = icoh(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(icoh(&["--help"]).status.code(), Some(0));
    assert_eq!(icoh(&["sweep", "--help"]).status.code(), Some(0));
}

#[test]
fn validate_passes_at_small_gain_and_flags_under_truncation() {
    let ok = icoh(&[
        "validate",
        "--r-max",
        "0.3",
        "--cutoff",
        "12",
        "--samples",
        "6",
        "--seed",
        "3",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert_eq!(stdout(&ok).matches("PASS").count(), 2);

    let bad = icoh(&[
        "validate",
        "--r-max",
        "0.6",
        "--cutoff",
        "3",
        "--samples",
        "5",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("increase the cutoff"));
}
