use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qboson_cli::fit::ScalingSeries;

fn specs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn qboson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qboson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn spec(name: &str) -> String {
    specs().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table1_prefix() {
    let o = qboson(&["table1", "--q-max", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("q,x_strings,p_strings,formula,match\n"));
    assert!(text.contains("\n5,80,80,80,true\n"));
    assert!(text.contains("\n9,2304,2304,2304,true\n"));
}

#[test]
fn count_quartic_raw_terms() {
    let o = qboson(&[
        "count",
        &spec("quartic.toml"),
        "--q-min",
        "3",
        "--q-max",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("3,3,81,"), "{row}");
}

#[test]
fn count_shift_series() {
    let o = qboson(&[
        "count",
        &spec("shift_open.toml"),
        "--q-min",
        "1",
        "--q-max",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for (q, line) in (1..=8).zip(text.lines().skip(1)) {
        let kinetic: usize = line.split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(kinetic, (1 << q) - 1);
    }
}

#[test]
fn count_then_fit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("series.csv");
    let fit = dir.path().join("fit.json");
    let o = qboson(&[
        "count",
        &spec("double_well_fock.toml"),
        "--q-min",
        "2",
        "--q-max",
        "8",
        "--out",
        series.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = ScalingSeries::from_csv(std::fs::File::open(&series).unwrap()).unwrap();
    assert_eq!(s.rows().len(), 7);
    assert!(s.rows().windows(2).all(|w| w[1].n_pauli > w[0].n_pauli));

    let o = qboson(&[
        "fit",
        series.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        fit.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&fit).unwrap()).unwrap();
    assert!(json[0]["a"].as_f64().unwrap() > 0.3);
    assert_eq!(json[0]["rows"], 7);
}

#[test]
fn outputs_are_deterministic() {
    let args = [
        "count",
        &spec("two_bosons.toml"),
        "--q-min",
        "1",
        "--q-max",
        "3",
    ];
    let a = stdout(&qboson(&args));
    let b = stdout(&qboson(&args));
    assert_eq!(a, b);
    let args = [
        "trotter",
        &spec("anharmonic.toml"),
        "--steps",
        "4",
        "--verify",
    ];
    assert_eq!(stdout(&qboson(&args)), stdout(&qboson(&args)));
}

#[test]
fn trotter_writes_circuit_and_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("c.txt");
    let o = qboson(&[
        "trotter",
        &spec("anharmonic.toml"),
        "--steps",
        "8",
        "--verify",
        "--circuit",
        circuit.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ratio = json[0]["ratio_2n"].as_f64().unwrap();
    assert!((0.4..=0.6).contains(&ratio), "{ratio}");
    let text = std::fs::read_to_string(&circuit).unwrap();
    let parsed = qboson::circuit::Circuit::from_text(&text).unwrap();
    assert_eq!(parsed.len(), json[0]["total"].as_u64().unwrap() as usize);
}

#[test]
fn harmonic_trotter_layers() {
    let o = qboson(&[
        "trotter",
        &spec("harmonic.toml"),
        "--steps",
        "16",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &json[0];
    assert_eq!(row["steps"], 16);
    assert_eq!(row["qft_total"], row["inverse_qft_total"]);
    let layers: u64 = [
        "potential_total",
        "qft_total",
        "kinetic_total",
        "inverse_qft_total",
    ]
    .iter()
    .map(|k| row[*k].as_u64().unwrap())
    .sum();
    assert_eq!(layers, row["total"].as_u64().unwrap());
    assert!(row["error_n"].is_null());
}

#[test]
fn blockenc_toy() {
    let o = qboson(&[
        "blockenc",
        &spec("toy_xz.toml"),
        "--verify",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json[0]["lambda"], 2.0);
    assert!(json[0]["block_error"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn verification_failure_exit_code() {
    let o = qboson(&[
        "blockenc",
        &spec("anharmonic.toml"),
        "--verify",
        "--tol",
        "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(4));
    // the report is still written
    assert!(stdout(&o).starts_with("lambda,"));
}

#[test]
fn input_error_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "bosons = 1\nqubits_per_boson = \"three\"\n").unwrap();
    let o = qboson(&["count", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");

    let o = qboson(&["trotter", &spec("toy_xz.toml")]);
    assert_eq!(o.status.code(), Some(2));
    let o = qboson(&["trotter", &spec("double_well_fock.toml")]);
    assert_eq!(o.status.code(), Some(2));
    let o = qboson(&["count", "/nonexistent/spec.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cap_exit_code() {
    let o = qboson(&[
        "count",
        &spec("double_well_fock.toml"),
        "--q-min",
        "15",
        "--q-max",
        "15",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = qboson(&["trotter", &spec("two_bosons.toml"), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.toml");
    let text = std::fs::read_to_string(specs().join("two_bosons.toml"))
        .unwrap()
        .replace("qubits_per_boson = 2", "qubits_per_boson = 7");
    std::fs::write(&big, text).unwrap();
    let o = qboson(&["trotter", big.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(3));
}
