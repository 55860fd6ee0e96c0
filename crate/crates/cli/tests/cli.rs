use std::process::{Command, Output};

use dof_align::regions::{DofPoint, DofRegion};
use dof_align::regions::polytope::rat;
use dof_align::scheme::Scheme;
use dof_align::sim::RateCurve;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dof-align")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn points(v: &[(i64, i64, i64, i64)]) -> Vec<DofPoint> {
    v.iter().map(|&(a, b, p, q)| DofPoint::new(rat(a, b), rat(p, q))).collect()
}

#[test]
fn region_without_csit() {
    let o = run(&["region", "--system", "1,2,3,3", "--channel", "zic", "--csit", "no", "--modes", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: DofRegion = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.vertices(), points(&[(0, 1, 0, 1), (1, 1, 0, 1), (1, 1, 3, 2), (0, 1, 3, 1)]));
    assert_eq!(serde_json::to_string(&r).unwrap(), stdout(&o).trim_end());
}

#[test]
fn region_with_csit() {
    let o = run(&["region", "--system", "1,2,3,3", "--channel", "zic", "--csit", "yes"]);
    assert_eq!(o.status.code(), Some(0));
    let r: DofRegion = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.vertices(), points(&[(0, 1, 0, 1), (1, 1, 0, 1), (1, 1, 2, 1), (0, 1, 3, 1)]));
}

#[test]
fn region_table_shows_fractions_and_decimals() {
    let o = run(&["region", "--system", "2,5,6,6", "--modes", "4", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("d1 + 4/5 d2 <= 24/5"), "{text}");
    assert!(text.contains("7/2") && text.contains("3.5000"), "{text}");
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        vec!["region", "--system", "1,2,3"],
        vec!["region", "--system", "1,2,3,3", "--modes", "0"],
        vec!["region", "--system", "1,2,3,3", "--channel", "xyz"],
        vec!["simulate", "--system", "1,2,3,3", "--snr-db", "10:0:20"],
        vec!["simulate", "--system", "2,2,3,3", "--trials", "1"],
        vec!["synthesize", "--system", "1,2,3,3", "--modes", "2", "--channel", "zic", "--out", "/nonexistent/dir/x.json"],
        vec!["verify", "--suite", "everything"],
        vec!["frobnicate"],
        vec!["--threads", "0", "region", "--system", "1,2,3,3"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn synthesize_emits_scheme_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scheme.json");
    let o = run(&["synthesize", "--system", "1,3,4,4", "--modes", "2", "--seed", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s: Scheme = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(s.streams, (2, 5));
    assert_eq!(s.nulling.shape(), (2, 6));
    assert!(s.channel_dependent);

    let again = run(&["synthesize", "--system", "1,3,4,4", "--modes", "2", "--seed", "5"]);
    assert_eq!(stdout(&again).trim_end(), std::fs::read_to_string(&path).unwrap().trim_end());

    let blind = run(&["synthesize", "--system", "1,2,3,3", "--modes", "2"]);
    let s: Scheme = serde_json::from_str(&stdout(&blind)).unwrap();
    assert!(!s.channel_dependent);
    assert_eq!(s.streams, (2, 3));
}

#[test]
fn simulate_writes_csv_and_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let args = ["simulate", "--system", "1,2,3,3", "--modes", "2", "--snr-db", "30:10:50", "--trials", "40", "--seed", "3", "--out", path.to_str().unwrap()];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("d1 = "), "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("snr_db,r1_bits,r2_bits,trials,seed\n30,"));
    let curve = RateCurve::read_csv(text.as_bytes()).unwrap();
    assert_eq!(curve.snr_db, vec![30.0, 40.0, 50.0]);
    assert_eq!((curve.trials, curve.seed), (40, 3));

    let single = Command::new(env!("CARGO_BIN_EXE_dof-align"))
        .args(&args[..args.len() - 2])
        .env("DOF_ALIGN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(stdout(&single), text);
}

#[test]
fn verify_small_grid_passes() {
    let o = run(&["verify", "--suite", "all", "--max-antennas", "4", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 3);
    assert!(!stdout(&o).contains("wall_time"));
}

#[test]
fn verify_single_suite() {
    let o = run(&["verify", "--suite", "regions", "--max-antennas", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suites"][0]["suite"], "regions");
    assert!(v["suites"][0]["cases"].as_u64().unwrap() >= 81);
}
