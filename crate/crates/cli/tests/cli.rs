use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn help_matches_golden_file() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/help.txt"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["paircorr", "--i1", "0,1,2"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--alpha", "1,3,1"]).status.code(), Some(2));
    assert_eq!(run(&["paircorr", "--n", "6000", "--oracle"]).status.code(), Some(2));
    let o = bin().env("TORUS_SPECTRA_THREADS", "zero").arg("solve-g").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_g_json() {
    let v = json(&["solve-g"]);
    assert_eq!(v["schema"], "torus-spectra/1");
    assert_eq!(v["command"], "solve-g");
    let g = v["result"]["G"].as_f64().unwrap();
    let c = v["result"]["C"].as_f64().unwrap();
    assert!((g - 2.006361938925098).abs() < 1e-12);
    assert!((c - 1.652955).abs() < 1e-6);
    assert_eq!(v["result"]["used_fallback"], false);
}

#[test]
fn spectrum_csv() {
    let o = run(&["spectrum", "--alpha", "1,0,1", "--count", "4", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,value,m,n");
    assert_eq!(lines.len(), 5);
    let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(v, std::f64::consts::FRAC_PI_2);
    assert_eq!(lines[1], "0,1.5707963267948966e0,0,1");
}

#[test]
fn construct_csv_and_json_agree() {
    let csv = stdout(&run(&["construct", "--n", "500", "--seed", "9", "--format", "csv"]));
    let v = json(&["construct", "--n", "500", "--seed", "9"]);
    let values: Vec<f64> = v["result"]["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let from_csv: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(values, from_csv);
    assert!(v["result"]["max_gap"].as_f64().unwrap() <= 2.0);
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 4));
    // Deterministic for a fixed seed.
    assert_eq!(csv, stdout(&run(&["construct", "--n", "500", "--seed", "9", "--format", "csv"])));
}

#[test]
fn config_round_trip() {
    let dumped = run(&["triplecorr", "--i1", "-1,0.5", "--i2", "0.2,1", "--n", "2000", "--dump-config"]);
    assert!(dumped.status.success());
    let path = std::env::temp_dir().join(format!("torus-spectra-config-{}.json", std::process::id()));
    std::fs::write(&path, &dumped.stdout).unwrap();
    let from_file = json(&["--config", path.to_str().unwrap()]);
    let direct = json(&["triplecorr", "--i1", "-1,0.5", "--i2", "0.2,1", "--n", "2000"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(from_file, direct);
    let conflict = run(&["--config", "x.json", "solve-g"]);
    assert_eq!(conflict.status.code(), Some(1));
}

#[test]
fn fast_and_oracle_counts_agree() {
    for cmd in ["paircorr", "triplecorr"] {
        let base = [cmd, "--n", "1500", "--i1", "-0.5,1.2", "--alpha", "1.1,0.4,1.4"];
        let fast = json(&base);
        let oracle = json(&[&base[..], &["--oracle"]].concat());
        assert_eq!(fast["result"]["count"], oracle["result"]["count"], "{cmd}");
        assert_eq!(oracle["result"]["method"], "oracle");
    }
}

#[test]
fn small_prop4_sum_is_exact() {
    let v = json(&["prop4-sum", "--m", "2", "--delta", "0.5", "--eps-prime", "0.1", "--exact"]);
    assert_eq!(v["result"]["tuples"], 680);
    assert_eq!(v["result"]["exact"], "6354/35");
}

#[test]
fn endgame_reports_positive_slack() {
    let v = json(&["endgame", "--eps", "0.05"]);
    let r = &v["result"];
    assert_eq!(r["contradiction"], true);
    assert!(r["endgame"]["slack"].as_f64().unwrap() > 0.0);
}
