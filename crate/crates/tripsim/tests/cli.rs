use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tripsim(args: &[&str]) -> Output {
    tripsim_env(args, None)
}

fn tripsim_env(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tripsim"));
    cmd.args(args).env_remove("TRIPSIM_SEED");
    if let Some(s) = seed {
        cmd.env("TRIPSIM_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn ok_stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(&tripsim(args))).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn paradox_reports_the_contradiction() {
    let doc = json(&["paradox"]);
    assert_eq!(doc["schema"], "tripsim/1");
    assert_eq!(doc["contradiction"], true);
    for key in ["XYY", "YXY", "YYX"] {
        assert!((doc["expectations"][key].as_f64().unwrap() + 1.0).abs() < 1e-12);
    }
    assert!((doc["expectations"]["XXX"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(doc["lhv_product"].as_f64().unwrap(), -1.0);
}

#[test]
fn fidelity_surface_csv_has_the_full_grid() {
    let text = ok_stdout(&tripsim(&["fidelity-surface"]));
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ["theta", "phi", "avg_fidelity", "closed_form"]);
    assert_eq!(rows.len(), 1 + 21 * 21);
    // θ = 0 carries no entanglement: the classical 2/3 everywhere on that row.
    for row in &rows[1..22] {
        assert_eq!(row[0].parse::<f64>().unwrap(), 0.0);
        assert!((row[2].parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }
    let last = rows.last().unwrap();
    let value: f64 = last[2].parse().unwrap();
    let closed: f64 = last[3].parse().unwrap();
    assert!((value - closed).abs() < 1e-9);
}

#[test]
fn w_channel_with_unnormalized_amplitudes() {
    let doc = json(&[
        "teleport",
        "--protocol",
        "w-channel",
        "--a",
        "0.577",
        "--b",
        "0.577",
        "--c",
        "0.577",
    ]);
    assert!((doc["success_probability"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    assert!((doc["success_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((doc["total_probability"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(doc["branches"].as_array().unwrap().len(), 8);
}

#[test]
fn teleport_rejects_parameters_of_other_protocols() {
    let out = tripsim(&["teleport", "--protocol", "ghz-epr", "--a", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tripsim(&["teleport", "--protocol", "ghz-meas", "--theta", "2.0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn maximal_protocols_teleport_perfectly() {
    for p in ["ghz-epr", "ghz-meas", "epr-via-ghz", "ghz-via-3epr"] {
        let doc = json(&[
            "teleport",
            "--protocol",
            p,
            "--population",
            "0.3",
            "--phase",
            "1.1",
        ]);
        assert!(
            (doc["avg_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9,
            "{p}"
        );
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = [
        "noise-sweep",
        "--protocol",
        "ghz-epr",
        "--channel",
        "phaseflip",
        "--samples",
        "32",
        "--seed",
        "7",
    ];
    let a = tripsim(&args);
    let b = tripsim(&args);
    assert_eq!(ok_stdout(&a), ok_stdout(&b));
    let t1 = tripsim(&["twirl", "--samples", "200", "--seed", "3"]);
    let t2 = tripsim(&["twirl", "--samples", "200", "--seed", "3"]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn environment_seed_overrides_flag() {
    let base = ["twirl", "--samples", "200", "--seed", "3"];
    let flagged = json(&base);
    let env: Value = serde_json::from_str(&ok_stdout(&tripsim_env(&base, Some("11")))).unwrap();
    let direct = json(&["twirl", "--samples", "200", "--seed", "11"]);
    assert_eq!(env["seed"], 11);
    assert_eq!(env, direct);
    assert_ne!(env["final_trace_distance"], flagged["final_trace_distance"]);
    assert_eq!(tripsim_env(&base, Some("nope")).status.code(), Some(2));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn config_files_reject_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{"command": "paradox", "params": {"theta": 0.7853981633974483}}"#,
    );
    assert_eq!(json(&["run", "--config", &good])["contradiction"], true);

    let bad_param = write(
        dir.path(),
        "p.json",
        r#"{"command": "paradox", "params": {"angle": 1.0}}"#,
    );
    let out = tripsim(&["run", "--config", &bad_param]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("angle"));

    let bad_top = write(
        dir.path(),
        "t.json",
        r#"{"command": "paradox", "colour": "red"}"#,
    );
    assert_eq!(
        tripsim(&["run", "--config", &bad_top]).status.code(),
        Some(2)
    );
}

#[test]
fn config_output_goes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("sweep.csv");
    let cfg = format!(
        r#"{{"command": "noise-sweep", "seed": 1,
            "params": {{"protocol": "ghz-meas", "channel": "bitflip", "target": [3], "grid": "0:1:0.5", "samples": 16}},
            "output": {{"path": {:?}, "format": "csv"}}}}"#,
        target.to_str().unwrap()
    );
    let path = write(dir.path(), "cfg.json", &cfg);
    assert!(ok_stdout(&tripsim(&["run", "--config", &path])).is_empty());
    let rows = csv_rows(&std::fs::read_to_string(&target).unwrap());
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], ["p", "avg_fidelity"]);
}

#[test]
fn classify_reads_state_files() {
    let dir = tempfile::tempdir().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ghz = write(
        dir.path(),
        "ghz.json",
        &format!("[{h}, 0, 0, 0, 0, 0, 0, {h}]"),
    );
    let doc = json(&["classify", "--state", &ghz]);
    assert_eq!(doc["class"], "GenuineGHZ");
    assert!((doc["diagnostics"]["three_tangle"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let s = 1.0 / 3f64.sqrt();
    let w = write(
        dir.path(),
        "w.json",
        &format!(r#"{{"amplitudes": [0, {s}, [0, {s}], 0, {s}, 0, 0, 0]}}"#),
    );
    assert_eq!(json(&["classify", "--state", &w])["class"], "GenuineW");

    let bisep = write(
        dir.path(),
        "b.json",
        &format!("[{h}, {h}, 0, 0, 0, 0, 0, 0]"),
    );
    assert_eq!(
        json(&["classify", "--state", &bisep])["class"],
        "FullySeparable"
    );

    let bell_c = write(
        dir.path(),
        "bc.json",
        &format!("[{h}, 0, 0, {h}, 0, 0, 0, 0]"),
    );
    let doc = json(&["classify", "--state", &bell_c]);
    assert_eq!(doc["partition"], "A|BC");

    let unnormalized = write(dir.path(), "u.json", "[1, 1, 0, 0, 0, 0, 0, 0]");
    assert_eq!(
        tripsim(&["classify", "--state", &unnormalized])
            .status
            .code(),
        Some(2)
    );
    let short = write(dir.path(), "s.json", "[1, 0]");
    assert_eq!(
        tripsim(&["classify", "--state", &short]).status.code(),
        Some(2)
    );
}

#[test]
fn noise_sweep_csv_follows_the_depolarizing_line() {
    let text = ok_stdout(&tripsim(&[
        "noise-sweep",
        "--protocol",
        "ghz-meas",
        "--channel",
        "depolarizing",
        "--target",
        "3",
        "--quadrature",
    ]));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 22);
    // Depolarizing the receiver qubit of a perfect channel: F = 1 - p/2.
    for row in &rows[1..] {
        let p: f64 = row[0].parse().unwrap();
        let f: f64 = row[1].parse().unwrap();
        assert!((f - (1.0 - p / 2.0)).abs() < 1e-9, "p={p} f={f}");
    }
}

#[test]
fn noise_sweep_rejects_bad_targets_and_strengths() {
    assert_eq!(
        tripsim(&["noise-sweep", "--protocol", "ghz-meas", "--target", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tripsim(&["noise-sweep", "--grid", "0:2:0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tripsim(&["noise-sweep", "--channel", "fog"]).status.code(),
        Some(2)
    );
}

#[test]
fn tables_match_simulation() {
    let doc = json(&[
        "tables",
        "--population",
        "0.2",
        "--phase",
        "0.4",
        "--theta",
        "0.6",
    ]);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
    assert!(doc["max_deviation"].as_f64().unwrap() < 1e-12);
    let original = json(&[
        "tables",
        "--version",
        "original",
        "--population",
        "0.2",
        "--phase",
        "0.4",
    ]);
    assert!(original["max_deviation"].as_f64().unwrap() > 1e-3);
}

#[test]
fn json_output_for_csv_commands_on_request() {
    let doc = json(&["fidelity-surface", "--grid", "3", "--out", "json"]);
    assert_eq!(doc["values"].as_array().unwrap().len(), 3);
    assert_eq!(tripsim(&["paradox", "--out", "xml"]).status.code(), Some(2));
}
