use qxsim::{list_experiments, run_experiment, CliError, ExperimentConfig, Format, ParamKind, Value};
use std::process::Command;

fn qxsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qxsim"))
}

fn run_bytes(args: &[&str], threads: &str) -> Vec<u8> {
    let out = qxsim().args(args).env("QXSIM_THREADS", threads).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn registry_lists_every_experiment_with_defaults() {
    let exps = list_experiments();
    assert_eq!(exps.len(), 11);
    let names: Vec<_> = exps.iter().map(|e| e.name).collect();
    for n in [
        "fsp-capacity",
        "fsp-search",
        "bbbv",
        "born-gadget",
        "born-bounds",
        "clone-search",
        "clone-signal",
        "haar-overlap",
        "nlamp",
        "channel-grid",
        "ambiguity",
    ] {
        assert!(names.contains(&n), "{n}");
    }
    assert_eq!(exps.iter().find(|e| e.name == "fsp-capacity").unwrap().anchor, "Thm A.1");
    for e in exps {
        assert!(!e.anchor.is_empty());
        for p in e.params {
            assert!(!p.default.is_empty(), "{}.{}", e.name, p.name);
            if let ParamKind::Choice(opts) = p.kind {
                assert!(opts.contains(&p.default));
            }
        }
    }
}

#[test]
fn haar_overlap_seed_seven() {
    let t =
        run_experiment(&ExperimentConfig::new("haar-overlap").param("n", 4).param("samples", 10_000).seed(7)).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.values("exact")[0].as_f64().unwrap(), 1.0 / 17.0);
    assert!(t.values("z")[0].as_f64().unwrap().abs() <= 3.0);
}

#[test]
fn unknown_experiment_and_bad_params() {
    assert!(matches!(run_experiment(&ExperimentConfig::new("foo")), Err(CliError::UnknownExperiment(n)) if n == "foo"));
    let err = run_experiment(&ExperimentConfig::new("haar-overlap").param("samples", "many")).unwrap_err();
    assert!(matches!(&err, CliError::BadParam { key, .. } if key == "samples"));
    let err = run_experiment(&ExperimentConfig::new("haar-overlap").param("colour", 1)).unwrap_err();
    assert!(matches!(&err, CliError::BadParam { key, .. } if key == "colour"));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| qxsim().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["ambiguity"]), 0);
    assert_eq!(code(&["--list"]), 0);
    assert_eq!(code(&["foo"]), 2);
    assert_eq!(code(&["haar-overlap", "--param", "n=99"]), 2);
    assert_eq!(code(&["haar-overlap", "--param", "n"]), 2);
    assert_eq!(code(&["haar-overlap", "--format", "xml"]), 2);
    assert_eq!(code(&["ambiguity", "--out", "/nonexistent-dir/x.csv"]), 3);
    let bad_threads = qxsim().arg("ambiguity").env("QXSIM_THREADS", "zero").output().unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let args = ["clone-signal", "--param", "trials=2000", "--seed", "11"];
    let one = run_bytes(&args, "1");
    assert_eq!(one, run_bytes(&args, "1"));
    assert_eq!(one, run_bytes(&args, "4"));
    let other_seed = run_bytes(&["clone-signal", "--param", "trials=2000", "--seed", "12"], "1");
    assert_ne!(one, other_seed);
}

#[test]
fn out_path_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let stdout = run_bytes(&["nlamp", "--format", "json"], "2");
    let status = qxsim().args(["nlamp", "--format", "json", "--out"]).arg(&path).status().unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

fn same(field: &str, json: &serde_json::Value, value: &Value) -> bool {
    match (value, json) {
        (Value::Bool(b), serde_json::Value::Bool(j)) => field == b.to_string() && b == j,
        (Value::Int(i), serde_json::Value::Number(j)) => {
            field.parse::<i64>().ok() == Some(*i) && j.as_i64() == Some(*i)
        }
        (Value::Float(x), serde_json::Value::Number(j)) => {
            field.parse::<f64>().ok() == Some(*x) && j.as_f64() == Some(*x)
        }
        (Value::Float(x), serde_json::Value::String(s)) => !x.is_finite() && s == field,
        (Value::Text(t), serde_json::Value::String(s)) => t == s && t == field,
        _ => false,
    }
}

#[test]
fn csv_and_json_carry_identical_values() {
    for exp in list_experiments() {
        let table = run_experiment(&ExperimentConfig::new(exp.name)).unwrap();
        let mut csv_bytes = Vec::new();
        qxsim::write_table(&table, Format::Csv, &mut csv_bytes).unwrap();
        let mut json_bytes = Vec::new();
        qxsim::write_table(&table, Format::Json, &mut json_bytes).unwrap();

        let mut reader = csv::Reader::from_reader(csv_bytes.as_slice());
        let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
        assert_eq!(header, table.columns);
        let json: serde_json::Value = serde_json::from_slice(&json_bytes).unwrap();
        let rows = json["rows"].as_array().unwrap();
        let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(records.len(), table.rows.len());
        assert_eq!(rows.len(), table.rows.len());
        for ((record, jrow), row) in records.iter().zip(rows).zip(&table.rows) {
            for (c, col) in table.columns.iter().enumerate() {
                assert!(same(&record[c], &jrow[col], &row[c]), "{}: {col} {} vs {}", exp.name, &record[c], jrow[col]);
            }
        }
        let meta = &json["meta"];
        assert_eq!(meta["seed"], 0);
        assert_eq!(meta["version"], qxsim::VERSION);
        assert!(meta["wall_ms"].is_null());
        assert_eq!(meta["config"]["experiment"], exp.name);
        for p in exp.params {
            assert!(meta["config"]["params"].get(p.name).is_some(), "{}.{}", exp.name, p.name);
        }
    }
}

#[test]
fn csv_floats_keep_full_precision() {
    let table = run_experiment(&ExperimentConfig::new("fsp-capacity")).unwrap();
    let mut bytes = Vec::new();
    qxsim::write_table(&table, Format::Csv, &mut bytes).unwrap();
    let text = String::from_utf8(bytes).unwrap();
    let second = text.lines().nth(1).unwrap();
    let kappa = second.split(',').next().unwrap();
    let mantissa = kappa.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{kappa}");
}
