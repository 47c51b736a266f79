use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fkpp(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fkpp"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn table(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|s| s.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn stationary_table_and_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = fkpp(dir.path(), &["stationary"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("k2 = 5.0000000000000000e-1"), "{text}");
    let (header, rows) = table(&dir.path().join("stationary.csv"));
    assert_eq!(header, ["x", "g", "E"]);
    assert_eq!(rows.len(), 401);
    let max_e = rows.iter().map(|r| r[2]).fold(0.0, f64::max);
    assert!((max_e - 1.3396).abs() < 1e-4, "{max_e}");
    let m = manifest(dir.path());
    let width = m["summary"]["support_width"].as_f64().unwrap();
    assert!((width - 2.0 * std::f64::consts::PI / m["summary"]["k1"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn stationary_full_line_and_invalid_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let o = fkpp(dir.path(), &["stationary", "--set", "model.m=2", "--set", "model.p=3", "--set", "model.q=2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("support width = infinite"));
    assert_eq!(manifest(dir.path())["summary"]["support"], "infinite");

    let o = fkpp(dir.path(), &["stationary", "--set", "model.q=2"]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn exact_tabulation_and_event_time() {
    let dir = tempfile::tempdir().unwrap();
    let sets = ["--set", "exact.m=3", "--set", "exact.constant=-0.1", "--set", "exact.times=[0,0.2]"];
    let o = fkpp(dir.path(), &[&["exact"], &sets[..]].concat());
    assert_eq!(code(&o), 0);
    let t_star = manifest(dir.path())["event_time"].as_f64().unwrap();
    assert!((t_star - 5f64.ln() / 2.0).abs() < 1e-12);
    let (header, rows) = table(&dir.path().join("exact.csv"));
    assert_eq!(header, ["t", "x", "u"]);
    assert_eq!(rows.len(), 802);

    let o = fkpp(dir.path(), &["exact", "--set", "exact.constant=-0.9", "--set", "exact.times=[1]"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn simulate_classifies_multiples_of_the_profile() {
    let dir = tempfile::tempdir().unwrap();
    let above = dir.path().join("above");
    let o = fkpp(&above, &["simulate", "--set", "ic.multiple=2", "--set", "grid.n=401"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&above);
    assert_eq!(m["outcome"]["kind"], "blow_up");
    assert_eq!(m["summary"]["agrees_with_prediction"], true);

    let below = dir.path().join("below");
    let o = fkpp(&below, &["simulate", "--set", "ic.multiple=0.5", "--set", "grid.n=401"]);
    assert_eq!(code(&o), 0);
    let m = manifest(&below);
    assert_eq!(m["outcome"]["kind"], "extinction");
    assert!(m["event_time"].as_f64().unwrap() > 0.0);

    let zero = dir.path().join("zero");
    let o = fkpp(&zero, &["simulate", "--set", "ic.kind=zero", "--set", "run.t_max=1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(manifest(&zero)["outcome"]["kind"], "undecided");
}

#[test]
fn simulate_outputs_exist_and_parse() {
    let dir = tempfile::tempdir().unwrap();
    let sets = ["simulate", "--set", "ic.multiple=0.5", "--set", "grid.n=201", "--set", "run.snapshot_times=[0.5,1.0]"];
    assert_eq!(code(&fkpp(dir.path(), &sets)), 0);
    let m = manifest(dir.path());
    let files: Vec<&str> = m["files"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    assert_eq!(files, ["snapshot_000.csv", "snapshot_001.csv", "final.csv", "history.csv"]);
    for f in files {
        let (header, rows) = table(&dir.path().join(f));
        assert!(!header.is_empty() && !rows.is_empty(), "{f}");
    }
    let snaps = m["summary"]["snapshots"].as_array().unwrap();
    assert_eq!(snaps[0]["t"].as_f64().unwrap(), 0.5);
    let (_, snap) = table(&dir.path().join("snapshot_000.csv"));
    assert_eq!(snap.len(), 201);
    assert!(!m["norm_history"].as_array().unwrap().is_empty());
    let again: Value = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(again, m);
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = ["simulate", "--set", "ic.multiple=1.5", "--set", "grid.n=201", "--set", "run.snapshot_times=[0.2]"];
    assert_eq!(code(&fkpp(&a, &args)), 0);
    assert_eq!(code(&fkpp(&b, &args)), 0);
    for f in ["snapshot_000.csv", "final.csv", "history.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn simulate_from_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let ic = dir.path().join("ic.csv");
    std::fs::write(&ic, "x,u\n-1,0\n0,0.3\n1,0\n").unwrap();
    let cfg = dir.path().join("run.json");
    let doc = serde_json::json!({
        "model": { "m": 2.0, "p": 2.0, "q": 0.9 },
        "grid": { "half_length": 5.0, "n": 201 },
        "ic": { "kind": "file", "path": ic },
        "run": { "t_max": 20.0 }
    });
    std::fs::write(&cfg, doc.to_string()).unwrap();
    let out = dir.path().join("out");
    let o = fkpp(&out, &["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    assert_eq!(m["outcome"]["kind"], "extinction");
    assert_eq!(m["config"]["grid"]["n"], 201);
}

#[test]
fn configuration_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&fkpp(dir.path(), &["simulate", "--set", "grid.n=2"])), 3);
    assert_eq!(code(&fkpp(dir.path(), &["simulate", "--set", "run.cfl_safety=1.5"])), 3);
    assert_eq!(code(&fkpp(dir.path(), &["simulate", "--set", "grid.bogus=1"])), 3);
    assert_eq!(code(&fkpp(dir.path(), &["simulate", "--set", "ic.multiple=-1"])), 3);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&fkpp(dir.path(), &["simulate", "--config", missing.to_str().unwrap()])), 3);
}

#[test]
fn verify_selfsimilar_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let o = fkpp(dir.path(), &["verify"]);
    assert_eq!(code(&o), 0);
    let m = manifest(dir.path());
    assert_eq!(m["summary"]["certified"], true);
    assert!(m["summary"]["subsolution"]["amplitude"].as_f64().unwrap() >= 4.0);

    let o = fkpp(dir.path(), &["verify", "--set", "model.p=1", "--set", "model.q=0.5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_scaled_requires_ordered_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = fkpp(dir.path(), &["verify", "--construction", "scaled", "--set", "ic.multiple=2", "--set", "grid.n=401"]);
    assert_eq!(code(&o), 0);
    assert_eq!(manifest(dir.path())["summary"]["comparison"]["variant"], "g_blow_up");

    let o = fkpp(dir.path(), &["verify", "--construction", "scaled", "--set", "grid.n=401"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("neither strictly above nor strictly below"));
    assert_eq!(manifest(dir.path())["summary"]["certified"], false);
}

#[test]
fn verify_porous_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let model = ["--set", "model.m=2", "--set", "model.p=3", "--set", "model.q=2", "--set", "ic.kind=bump"];
    let ok = [&["verify", "--construction", "porous", "--set", "ic.height=0.8", "--set", "run.t_max=1"], &model[..]].concat();
    let o = fkpp(dir.path(), &ok);
    assert_eq!(code(&o), 0);
    let m = manifest(dir.path());
    assert_eq!(m["summary"]["max_excess"].as_f64().unwrap(), 0.0);
    assert_eq!(m["summary"]["decays_monotonically"], true);

    let bad = [&["verify", "--construction", "porous", "--set", "ic.height=1.5"], &model[..]].concat();
    assert_eq!(code(&fkpp(dir.path(), &bad)), 4);
}

#[test]
fn sweep_summary_rows() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--set", "sweep.multipliers=[0,0.5,1,2]"];
    let o = fkpp(dir.path(), &[&args[..], &["--workers", "3"]].concat());
    assert_eq!(code(&o), 0);
    let mut r = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let outcomes: Vec<String> = r.records().map(|rec| rec.unwrap()[4].to_string()).collect();
    assert_eq!(outcomes, ["undecided", "extinction", "undecided", "blow_up"]);

    let serial = dir.path().join("serial");
    assert_eq!(code(&fkpp(&serial, &[&args[..], &["--workers", "1"]].concat())), 0);
    assert_eq!(std::fs::read(serial.join("summary.csv")).unwrap(), std::fs::read(dir.path().join("summary.csv")).unwrap());
}

#[test]
fn sweep_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    assert_eq!(code(&fkpp(&empty, &["sweep", "--set", "sweep.multipliers=[]"])), 0);
    let text = std::fs::read_to_string(empty.join("summary.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);

    let mixed = dir.path().join("mixed");
    let args = ["sweep", "--set", "sweep.params=[[2,2,0.9],[2,1,1]]", "--set", "sweep.multipliers=[0.5]", "--set", "run.t_max=0.1"];
    assert_eq!(code(&fkpp(&mixed, &args)), 0);
    let mut r = csv::Reader::from_path(mixed.join("summary.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0][9].is_empty());
    assert_eq!(&rows[1][4], "error");
    assert!(!rows[1][9].is_empty());
}
