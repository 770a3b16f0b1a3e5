use std::path::Path;
use std::process::{Command, Output};

use bf_transport_fem::config::{RunConfig, STEPS_CSV_HEADER};
use bf_transport_fem::post::CSV_HEADER;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bf-transport-fem")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CONVERGENCE: &str = r#"{
    "scenario": "convergence",
    "manufactured": true,
    "mesh": {"builtin": "unit_square", "n": [2, 4]},
    "output": {"vtk": "none"}
}"#;

/// Channel run with no inflow, no membrane drive and zero initial data.
const QUIET_CHANNEL: &str = r#"{
    "scenario": "simulate",
    "model": {"nu": 0.8, "kappa": 1e-3, "forch": 3, "power": 3, "a0": 0, "a1": 1.8e4, "phi_in": 0, "dt": 0.01, "t_final": 0.03},
    "mesh": {"builtin": "rectangle", "nx": 8, "ny": 2, "extent": [2, 0.5]},
    "inflow": {"peak": 0},
    "output": {"vtk": "every_step"}
}"#;

#[test]
fn convergence_writes_a_deterministic_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", CONVERGENCE);
    let mut csvs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let o = run(&["convergence", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        csvs.push(std::fs::read(out.join("convergence.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    let text = String::from_utf8(csvs[0].clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.5,"));
    assert!(lines[2].starts_with("0.25,"));
}

#[test]
fn convergence_prints_the_table_unless_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &CONVERGENCE.replace("[2, 4]", "[2]"));
    let out = dir.path().join("o");
    let o = run(&["convergence", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("e(sigma)"));
}

#[test]
fn homogeneous_channel_stays_exactly_at_rest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", QUIET_CHANNEL);
    let out = dir.path().join("o");
    let o = run(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let steps = std::fs::read_to_string(out.join("steps.csv")).unwrap();
    let mut lines = steps.lines();
    assert_eq!(lines.next(), Some(STEPS_CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r[4], "true");
        for v in &r[5..] {
            assert_eq!(v.parse::<f64>().unwrap(), 0.0);
        }
    }
    for k in 1..=3 {
        let vtk = std::fs::read_to_string(out.join(format!("step_{k:05}.vtk"))).unwrap();
        let data = vtk.split("CELL_DATA").nth(1).unwrap();
        assert!(data
            .lines()
            .filter_map(|l| l.parse::<f64>().ok())
            .all(|v| v == 0.0));
        assert!(out.join(format!("step_{k:05}_multiplier.vtk")).exists());
    }
}

#[test]
fn unconverged_steps_exit_with_solver_code() {
    let dir = tempfile::tempdir().unwrap();
    let text = CONVERGENCE.replace("\"scenario\": \"convergence\"", "\"scenario\": \"simulate\"").replace(
        "\"mesh\": {\"builtin\": \"unit_square\", \"n\": [2, 4]}",
        "\"mesh\": {\"builtin\": \"unit_square\", \"n\": 4}, \"solver\": {\"picard_max_iter\": 1, \"on_nonconvergence\": \"warn\"}",
    );
    let cfg = write(dir.path(), "s.json", &text);
    let out = dir.path().join("o");
    let o = run(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));

    let abort = text.replace(", \"on_nonconvergence\": \"warn\"", "");
    let cfg = write(dir.path(), "a.json", &abort);
    let o = run(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}

#[test]
fn configuration_problems_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let o = run(&["convergence", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let bad = write(dir.path(), "bad.json", r#"{"mesh": {"builtin": "unit_square", "n": 4}, "extra": 1}"#);
    assert_eq!(run(&["simulate", "--config", &bad]).status.code(), Some(2));

    let conv = write(dir.path(), "c.json", CONVERGENCE);
    assert_eq!(run(&["simulate", "--config", &conv]).status.code(), Some(2));
}

#[test]
fn mesh_problems_exit_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    // odd number of wall edges along a side: no pairing into macro edges
    let mesh = write(
        dir.path(),
        "m.bfmesh",
        "bfmesh 1\nvertices 4\n0 0\n1 0\n1 1\n0 1\ntriangles 2\n0 1 2\n0 2 3\nboundary 4\n0 1 wall\n1 2 outlet\n2 3 outlet\n0 3 inlet\n",
    );
    let cfg = write(
        dir.path(),
        "s.json",
        &format!(r#"{{"scenario": "simulate", "mesh": {{"file": "{}"}}, "output": {{"csv": false, "vtk": "none"}}}}"#, mesh),
    );
    let o = run(&["simulate", "--config", &cfg, "--quiet"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["simulate"]).status.code(), Some(2));
}

#[test]
fn example_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let c = RunConfig::load(&path).unwrap();
            assert_eq!(RunConfig::parse(&c.to_json()).unwrap(), c);
            seen += 1;
        }
    }
    assert!(seen >= 2);
}
