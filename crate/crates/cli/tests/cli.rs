use std::path::Path;
use std::process::{Command, Output};

fn uplink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uplink"))
        .args(args)
        .env_remove("UPLINK_SCENARIO_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) {
    let o = uplink(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let i = rdr.headers().unwrap().iter().position(|h| h == name).unwrap();
    rdr.records().map(|r| r.unwrap()[i].parse().unwrap()).collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn success_sweep_covers_the_grid_and_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    ok(&["success-sweep", "--theta-db", "-20:65:1", "--scheme", "urdc", "--env", "suburban", "--out", s(&out)]);
    let v = column(&out.join("success-sweep.csv"), "value");
    assert_eq!(v.len(), 86);
    assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    assert!(out.join("manifest.json").exists());
}

#[test]
fn delay_table_baseline_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    ok(&["delay-table", "--scheme", "urdc", "--packets", "1e6:11e6:1e6", "--out", s(&out)]);
    let q = column(&out.join("delay-table.csv"), "q_w_slots");
    assert_eq!(q.len(), 11);
    assert!((q[0] - 149.5).abs() < 1.0, "{}", q[0]);
}

#[test]
fn same_seed_diffs_to_zero_and_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, r) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("r"));
    let args = |o: &Path| vec!["simulate".to_string(), "--trials".into(), "300".into(), "--theta-db".into(), "0:20:10".into(), "--seed".into(), "7".into(), "--out".into(), s(o).into()];
    for o in [&a, &b] {
        let v = args(o);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    }
    ok(&["diff", s(&a), s(&b)]);
    ok(&["replay", s(&a), "--out", s(&r)]);
    let x = std::fs::read(a.join("simulate.csv")).unwrap();
    let y = std::fs::read(r.join("simulate.csv")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn different_seeds_agree_within_intervals() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["simulate", "--trials", "2000", "--theta-db", "0:20:10", "--seed", "1", "--out", s(&a)]);
    ok(&["simulate", "--trials", "2000", "--theta-db", "0:20:10", "--seed", "2", "--out", s(&b)]);
    ok(&["diff", s(&a), s(&b), "--ci-multiple", "2"]);
    // without the interval allowance the estimates differ
    assert_eq!(uplink(&["diff", s(&a), s(&b)]).status.code(), Some(1));
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "environment = \"urban\"\ncolour = 3\n").unwrap();
    let o = uplink(&["success-sweep", "--config", s(&cfg), "--out", s(&dir.path().join("o"))]);
    assert_eq!(o.status.code(), Some(2));
    let diag: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(diag["exit_code"], 2);

    let o = uplink(&["success-sweep", "--override", "geometry.bogus=1", "--out", s(&dir.path().join("o"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = uplink(&["delay-table", "--out", s(&blocker.join("sub"))]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn mismatched_kinds_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["success-sweep", "--theta-db", "0:10:5", "--out", s(&a)]);
    ok(&["delay-table", "--packets", "1e6", "--out", s(&b)]);
    assert_eq!(uplink(&["diff", s(&a), s(&b)]).status.code(), Some(2));
}

#[test]
fn quick_validation_of_closed_form_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v");
    ok(&["validate", "--quick", "--criteria", "1,2,6", "--out", s(&out)]);
    let mut rdr = csv::Reader::from_path(out.join("validate.csv")).unwrap();
    let n = rdr.records().count();
    assert!(n > 10);
}

#[test]
fn analysis_and_simulation_compare_on_shared_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["success-sweep", "--scheme", "urdc", "--theta-db", "0:40:20", "--out", s(&a)]);
    ok(&["simulate", "--scheme", "urdc", "--theta-db", "0:40:20", "--trials", "4000", "--out", s(&b)]);
    ok(&["diff", s(&a), s(&b), "--ci-multiple", "3"]);
}
