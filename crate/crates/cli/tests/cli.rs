use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_risuav"))
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL: &str = r#"{
  "ris": [{"n_elements": 5, "path_loss": "mean_normalized"}],
  "a2g": {"k0": {"db": 4.77}, "loss": {"fixed_db": 0}},
  "sweep": {"variable": "avg_snr_db", "start": 0, "stop": 20, "steps": 3}
}"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let out = run(&["sweep", "--config", path_str(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("curve,x,"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let go = |threads: &str, out: &Path| {
        let o = run(&[
            "sweep", "--config", path_str(&cfg), "--seed", "7", "--trials", "20000",
            "--threads", threads, "--out", path_str(out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let a = go("1", &dir.path().join("a.csv"));
    let b = go("1", &dir.path().join("b.csv"));
    let c = go("2", &dir.path().join("c.csv"));
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(String::from_utf8(a).unwrap().lines().nth(1).unwrap().contains(",20000,"));
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let out = run(&["sweep", "--config", path_str(&cfg), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["variable"], "avg_snr_db");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v["rows"][0]["op"].as_f64().unwrap() > 0.0);
}

#[test]
fn optimize_and_show_derived() {
    let fig7 = configs().join("fig7.json");
    let out = run(&["optimize", "--config", path_str(&fig7)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 12);

    let fig3 = configs().join("fig3.json");
    let out = run(&["show-derived", "--config", path_str(&fig3), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["ris0.path_loss"].as_f64().unwrap() > 1.0);
    assert!(v["a2g.p_los"].as_f64().is_some());
}

#[test]
fn mc_validate_reports_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let out = run(&["mc-validate", "--config", path_str(&cfg), "--trials", "50000", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    for prefix in ["max |op - mc| / se:", "max |asep - mc| / se:"] {
        let line = text.lines().find(|l| l.starts_with(prefix)).unwrap();
        let sigmas: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
        assert!(sigmas < 5.0, "{text}");
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write(dir.path(), "bad.json", "{ not json");
    let unknown = write(dir.path(), "unknown.json", &SMALL.replacen('{', "{\"bogus\": 1,", 1));
    let negative = write(dir.path(), "neg.json", &SMALL.replace("\"n_elements\": 5", "\"n_elements\": -5"));
    for p in [&bad_json, &unknown, &negative] {
        let out = run(&["sweep", "--config", path_str(p)]);
        assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let out = run(&["sweep", "--config", path_str(&negative)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ris[0].n_elements"));
    // A non-power sweep cannot be optimized.
    let small = write(dir.path(), "small.json", SMALL);
    assert_eq!(run(&["optimize", "--config", path_str(&small)]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["sweep", "--config", path_str(&missing)]).status.code(), Some(3));
    let cfg = write(dir.path(), "small.json", SMALL);
    let out_path = dir.path().join("no/such/dir/out.csv");
    let out = run(&["sweep", "--config", path_str(&cfg), "--out", path_str(&out_path)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn numeric_failure_exits_4() {
    // With almost no power the whole budget goes to one hop.
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("fig7.json")).unwrap();
    let text = text.replace("\"start\": 10", "\"start\": -20");
    let cfg = write(dir.path(), "low.json", &text);
    let out = run(&["optimize", "--config", path_str(&cfg)]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at total_power"));
}
