use std::io::Write;

use consilience_cli::{run, Outcome};
use tempfile::NamedTempFile;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("consilience").chain(args.iter().copied()))
}

fn document(json: &str) -> NamedTempFile {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(json.as_bytes()).unwrap();
    file
}

fn combine(json: &str, extra: &[&str]) -> Outcome {
    let file = document(json);
    let path = file.path().to_str().unwrap().to_string();
    let mut args = vec!["combine", path.as_str()];
    args.extend_from_slice(extra);
    cli(&args)
}

const THUNDERSTORM: &str = r#"{"hypothesis": "thunderstorm", "prior": 0.6, "evidence": [
    {"id": "temperature", "p": 0.4, "kind": "weight", "tags": ["temperature"]},
    {"id": "humidity", "p": 0.5, "kind": "weight", "tags": ["humidity"]}
]}"#;

#[test]
fn eval_prints_values() {
    assert_eq!(cli(&["eval", "0.4 (+) 0.7"]).stdout, "0.82\n");
    assert_eq!(cli(&["eval", "0.5 (-) 0.1"]).stdout, "0.444444\n");
    assert_eq!(
        cli(&["eval", "--precision", "3", "0.5 (-) 0.1"]).stdout,
        "0.444\n"
    );
    assert_eq!(
        cli(&["eval", "0.6 (+) 0.4 (+) 0.5", "--mode", "rational"]).stdout,
        "0.88\n"
    );
    assert_eq!(cli(&["eval", "bayes(0.5, 0.6, 0.8)"]).stdout, "0.428571\n");
}

#[test]
fn eval_errors_map_to_exit_codes() {
    let out = cli(&["eval", "0.1 (-) 0.5"]);
    assert_eq!(out.code, 3);
    assert!(
        out.stderr.contains("SubtrahendExceedsMinuend"),
        "{}",
        out.stderr
    );

    let out = cli(&["eval", "0.4 + 0.7"]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.ends_with("  0.4 + 0.7\n      ^\n"),
        "{}",
        out.stderr
    );

    let out = cli(&["eval", "0.4 (+) 1.5"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.ends_with("          ^^^\n"), "{}", out.stderr);

    assert_eq!(cli(&["eval", "  "]).code, 2);
    assert_eq!(cli(&["eval", "broad(0.5, 0.8, 0.8, 0.8, 0.8)"]).code, 3);
}

#[test]
fn eval_formats_agree() {
    let table = cli(&["eval", "0.5 (-) 0.1"]).stdout;
    let csv = cli(&["eval", "0.5 (-) 0.1", "--format", "csv"]).stdout;
    let json: serde_json::Value =
        serde_json::from_str(&cli(&["eval", "0.5 (-) 0.1", "--format", "json"]).stdout).unwrap();
    assert_eq!(csv, "expression,mode,value\n0.5 (-) 0.1,float,0.444444\n");
    assert_eq!(json["value"].to_string(), table.trim());
    let exact = cli(&[
        "eval",
        "0.5 (-) 0.1",
        "--format",
        "csv",
        "--mode",
        "rational",
    ])
    .stdout;
    assert_eq!(
        exact,
        "expression,mode,value,exact\n0.5 (-) 0.1,rational,0.444444,4/9\n"
    );
}

#[test]
fn combine_prints_value_and_trail() {
    let out = combine(THUNDERSTORM, &[]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("value: 0.88\n"), "{}", out.stdout);
    for source in ["thunderstorm", "temperature", "humidity"] {
        assert!(out.stdout.contains(source));
    }
    let json: serde_json::Value =
        serde_json::from_str(&combine(THUNDERSTORM, &["--format", "json"]).stdout).unwrap();
    assert_eq!(json["value"].to_string(), "0.88");
    assert_eq!(json["trail"].as_array().unwrap().len(), 4);
    assert_eq!(json["trail"][3]["operator"], "cmpe_add");
    let csv = combine(THUNDERSTORM, &["--format", "csv", "--mode", "log"]).stdout;
    assert_eq!(
        csv.lines().last().unwrap(),
        "4,cmpe_add,thunderstorm,0.6;0.4;0.5,0.88"
    );
}

#[test]
fn combine_rejects_invalid_documents() {
    let overlap = r#"{"hypothesis": "h", "evidence": [
        {"id": "a", "p": 0.4, "kind": "weight", "tags": ["visual"]},
        {"id": "b", "p": 0.5, "kind": "weight", "tags": ["visual", "tactile"]}
    ]}"#;
    let out = combine(overlap, &[]);
    assert_eq!(out.code, 4);
    assert!(
        out.stderr.contains("visual") && !out.stderr.contains("tactile"),
        "{}",
        out.stderr
    );

    let extensional = r#"{"hypothesis": "h", "prior": 0.4, "evidence": [
        {"id": "base", "p": 0.9, "kind": "extensional", "tags": []}
    ]}"#;
    let out = combine(extensional, &[]);
    assert_eq!(out.code, 4);
    assert!(
        out.stderr.contains("ExtensionalEvidenceRejected"),
        "{}",
        out.stderr
    );

    let duplicate = r#"{"hypothesis": "h", "evidence": [
        {"id": "a", "p": 0.4, "kind": "weight", "tags": ["x"]},
        {"id": "a", "p": 0.5, "kind": "weight", "tags": ["y"]}
    ]}"#;
    assert_eq!(combine(duplicate, &[]).code, 4);
    assert_eq!(combine("{not json", &[]).code, 2);
    assert_eq!(combine(r#"{"hypothesis": "h", "evidence": [{"id": "a", "p": 1.5, "kind": "weight", "tags": ["x"]}]}"#, &[]).code, 2);

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    assert_eq!(cli(&["combine", missing.to_str().unwrap()]).code, 5);
}

#[test]
fn table1_formats_agree() {
    let csv = cli(&["table1", "--format", "csv"]).stdout;
    let json: serde_json::Value =
        serde_json::from_str(&cli(&["table1", "--format", "json"]).stdout).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let keys = ["laplace_n", "laplace_pooled", "cmpe_groups", "dpe_margin"];
    for (row, obj) in rows.iter().zip(json["rows"].as_array().unwrap()) {
        assert_eq!(row[0], obj["n"].to_string());
        for (i, key) in keys.iter().enumerate() {
            assert_eq!(row[i + 1], obj[*key].to_string());
        }
    }
    let last: Vec<&str> = rows[4].iter().skip(1).take(4).collect();
    assert_eq!(last, ["0.999002", "0.9995", "0.999999", "0.998006"]);
    let table = cli(&["table1"]).stdout;
    assert!(table.contains("Notes:"));
    assert!(table.contains("0.999904"));
}

#[test]
fn table1_counts_are_validated() {
    assert_eq!(cli(&["table1", "--counts", "0"]).code, 2);
    assert_eq!(cli(&["table1", "--counts", "x"]).code, 2);
    let out = cli(&["table1", "--counts", "7", "--format", "csv"]);
    assert_eq!(out.stdout.lines().count(), 2);
    assert!(out.stdout.ends_with(",\n"), "{}", out.stdout);
}

#[test]
fn curve_series() {
    let out = cli(&["curve", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let points = json["points"].as_array().unwrap();
    assert_eq!(points.len(), 11);
    assert_eq!(points[0]["y"].to_string(), "0.4");
    assert_eq!(points[6]["x"].to_string(), "0.6");
    assert_eq!(points[6]["y"].to_string(), "0.76");
    let ones = cli(&["curve", "--delta", "1", "--format", "csv"]).stdout;
    assert!(ones.lines().skip(1).all(|l| l.ends_with(",1")), "{ones}");
    assert_eq!(cli(&["curve", "--delta", "1.5"]).code, 2);
    assert_eq!(cli(&["curve", "--step", "0"]).code, 2);
    assert_eq!(cli(&["curve", "--step", "1"]).code, 2);
}

#[test]
fn examples_report_passes_and_errata() {
    for mode in ["float", "log", "rational"] {
        let out = cli(&["examples", "--mode", mode]);
        assert_eq!(out.code, 0, "{mode}: {}", out.stdout);
        assert!(out.stdout.contains("\nERRATA\n"));
        assert!(
            out.stdout.ends_with("24 passed, 0 failed, 2 errata\n"),
            "{}",
            out.stdout
        );
    }
    let json: serde_json::Value =
        serde_json::from_str(&cli(&["examples", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["failed"], 0);
    assert_eq!(json["errata"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_is_deterministic() {
    let a = cli(&["verify", "--seed", "7", "--cases", "50", "--format", "json"]);
    let b = cli(&["verify", "--seed", "7", "--cases", "50", "--format", "json"]);
    assert_eq!(a, b);
    assert_eq!(a.code, 0);
    let json: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(json["passed"], 50);
    assert!(json["first_counterexample"].is_null());
    assert_eq!(cli(&["verify", "--cases", "0"]).code, 2);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cli(&[]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["eval", "0.5", "--mode", "decimal"]).code, 2);
    let help = cli(&["--help"]);
    assert_eq!(help.code, 0);
    for command in ["eval", "combine", "table1", "curve", "examples", "verify"] {
        assert!(help.stdout.contains(command));
    }
}
