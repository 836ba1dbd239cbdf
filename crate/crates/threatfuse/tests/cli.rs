use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use threatfuse::output::{read_experiment, read_sweep};
use threatfuse_core::sim::SweepKind;

fn threatfuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threatfuse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const REGIONS: &str = r#"{
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "properties": {"region_type": "road"},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[100,0],[100,10],[0,10],[0,0]]]}},
    {"type": "Feature", "properties": {"region_type": "roadside marker"},
     "geometry": {"type": "Polygon", "coordinates": [[[40,-2],[44,-2],[44,4],[40,4],[40,-2]]]}},
    {"type": "Feature", "properties": {"region_type": "meadow"},
     "geometry": {"type": "Polygon", "coordinates": [[[0,20],[50,20],[50,60],[0,60],[0,20]]]}}
  ]
}"#;

#[test]
fn classify_with_region_label() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.csv", "sensor,confidence,predicted_type\nS1,0.9,\n");
    let text = stdout(&threatfuse(&["classify", "--scenario", "basic", "--detections", z.to_str().unwrap(), "--region", "R1"]));
    assert_eq!(text, "region R1\nA 0.783439\nB 0.200637\nC 0.0159236\nmap A\nbaseline A\n");

    let empty = write(dir.path(), "empty.csv", "");
    let text = stdout(&threatfuse(&["classify", "--detections", empty.to_str().unwrap(), "--region", "R3"]));
    assert!(text.contains("\nC 0.600000\n"), "{text}");
    assert!(text.ends_with("map C\nbaseline C\n"), "{text}");
}

#[test]
fn classify_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let regions = write(dir.path(), "roi.geojson", REGIONS);
    let z = write(dir.path(), "z.csv", "sensor,confidence,predicted_type\nS2,0.8,\nS4,0.7,C\n");
    let text = stdout(&threatfuse(&[
        "classify",
        "--scenario",
        "cbrne",
        "--detections",
        z.to_str().unwrap(),
        "--position",
        "42,1",
        "--regions",
        regions.to_str().unwrap(),
    ]));
    assert!(text.starts_with("region roadside marker\n"), "{text}");
    assert!(text.contains("map C\n"), "{text}");
}

#[test]
fn label_lookups() {
    let dir = tempfile::tempdir().unwrap();
    let regions = write(dir.path(), "roi.geojson", REGIONS);
    let r = regions.to_str().unwrap();
    assert_eq!(stdout(&threatfuse(&["label", "--regions", r, "42", "1"])), "roadside marker\n");
    assert_eq!(stdout(&threatfuse(&["label", "--regions", r, "10", "5"])), "road\n");
    assert_eq!(stdout(&threatfuse(&["label", "--regions", r, "10", "30"])), "grassland\n");
    assert_eq!(
        stdout(&threatfuse(&["label", "--regions", r, "--default", "grass", "-500", "-500"])),
        "grassland\n"
    );
    let missing = threatfuse(&["label", "--regions", r, "-500", "-500"]);
    assert_eq!(code(&missing), 3);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("-500"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.csv", "sensor,confidence,predicted_type\nS4,0.9,\n");
    let zp = z.to_str().unwrap();
    assert_eq!(code(&threatfuse(&[])), 1);
    assert_eq!(code(&threatfuse(&["experiment", "--runs", "ten"])), 1);
    assert_eq!(code(&threatfuse(&["classify", "--detections", zp, "--region", "R1"])), 2);
    assert_eq!(code(&threatfuse(&["classify", "--detections", "/no/such.csv", "--region", "R1"])), 2);
    assert_eq!(code(&threatfuse(&["sweep", "prior", "--grid", "1.5", "--runs", "10"])), 2);
    let out = dir.path().join("missing-dir").join("x.csv");
    assert_eq!(code(&threatfuse(&["experiment", "--runs", "10", "--out", out.to_str().unwrap()])), 3);

    let degenerate = write(
        dir.path(),
        "certain.toml",
        r#"
name = "certain"
[types]
labels = ["A", "C"]
[regions]
labels = ["G"]
[[sensor]]
id = "S"
level = "direct"
detection_prior = { A = 1.0, C = 1.0 }
[prior.G]
A = 1.0
C = 0.0
"#,
    );
    let z = write(dir.path(), "c.csv", "sensor,confidence,predicted_type\nS,1.0,C\n");
    let out = threatfuse(&[
        "classify",
        "--scenario",
        degenerate.to_str().unwrap(),
        "--detections",
        z.to_str().unwrap(),
        "--region",
        "G",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn experiment_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    stdout(&threatfuse(&["experiment", "--runs", "300", "--seed", "7", "--out", out.to_str().unwrap()]));
    let rows = read_experiment(std::fs::File::open(&out).unwrap()).unwrap();
    let keys: Vec<(&str, &str)> = rows.iter().map(|r| (r.method.as_str(), r.scenario.as_str())).collect();
    assert_eq!(
        keys,
        [("Proposed", "basic"), ("Baseline", "basic"), ("Proposed", "cbrne"), ("Baseline", "cbrne")]
    );
    assert!(rows[..2].iter().all(|r| r.class_f1("D").is_none()));
    assert!(rows[2..].iter().all(|r| r.class_f1("D").is_some()));
    let header = std::fs::read_to_string(&out).unwrap();
    assert!(header.starts_with("method,scenario,accuracy,f1,A,B,C,D\n"));
}

#[test]
fn sweep_csv_round_trip() {
    let text = stdout(&threatfuse(&["sweep", "sensors", "--runs", "200"]));
    let table = read_sweep(text.as_bytes()).unwrap();
    assert_eq!(table.kind, SweepKind::Sensors);
    assert_eq!(table.rows.len(), 8);
    assert_eq!(table.rows.iter().map(|r| r.x).collect::<Vec<_>>(), (0..8).map(f64::from).collect::<Vec<_>>());

    let text = stdout(&threatfuse(&["sweep", "clutter", "--runs", "100", "--grid", "0.001,0.1,10"]));
    let table = read_sweep(text.as_bytes()).unwrap();
    assert_eq!(table.kind, SweepKind::Clutter);
    assert_eq!(table.rows.len(), 3);

    let text = stdout(&threatfuse(&["sweep", "prior", "--runs", "100", "--emission", "bernoulli-pd"]));
    assert!(text.starts_with("mu,baseline_all,proposed_contextual,proposed_sensor,proposed_all\n"));
    assert_eq!(read_sweep(text.as_bytes()).unwrap().rows.len(), 9);
}

#[test]
fn scenario_files_drive_experiments() {
    let dir = tempfile::tempdir().unwrap();
    let dumped = stdout(&threatfuse(&["scenario", "basic"]));
    let path = write(dir.path(), "mine.toml", &dumped.replace("name = \"basic\"", "name = \"mine\""));
    let text = stdout(&threatfuse(&["experiment", "--scenario", path.to_str().unwrap(), "--runs", "100", "--classifier", "proposed"]));
    let rows = read_experiment(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].scenario, "mine");
}
