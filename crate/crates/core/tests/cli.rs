mod common;

use std::process::{Command, Output};

use common::fixture;

fn mlbase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlbase")).args(args).output().unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn stats_table_row() {
    let o = mlbase(&["stats", "--dataset", &path("dense.arff")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "dataset,N,M,q,CR,DS,Dist,Min,1Q,Med,3Q,Max\ndense,6,4,3,1.167,0.389,6,2,2,2,2.500,3\n");
}

#[test]
fn stats_with_explicit_labels_and_name() {
    let o = mlbase(&[
        "stats",
        "--dataset",
        &path("missing.arff"),
        "--labels",
        &path("ab.xml"),
        "--name",
        "renamed",
        "--format",
        "csv",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("renamed,3,2,2,"));
}

#[test]
fn stats_of_several_datasets_as_json() {
    let o = mlbase(&["stats", "--dataset", &path("dense.arff"), "--dataset", &path("sparse.arff"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["num_labels"], 4);
    assert_eq!(v[0]["label_frequencies"], serde_json::json!([3, 2, 2]));
}

#[test]
fn meka_detection() {
    let auto = mlbase(&["stats", "--dataset", &path("meka.arff")]);
    let forced = mlbase(&["stats", "--dataset", &path("meka.arff"), "--meka"]);
    assert!(auto.status.success());
    assert_eq!(auto.stdout, forced.stdout);
}

#[test]
fn baseline_model_formats() {
    let o = mlbase(&["baseline", "--dataset", &path("dense.arff")]);
    assert_eq!(stdout(&o), "dataset: dense\nsigma: 1\nranked: amphibian bird cat\nprediction: amphibian\n");
    let o = mlbase(&["baseline", "--dataset", &path("dense.arff"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["prediction"], serde_json::json!(["amphibian"]));
    let o = mlbase(&["baseline", "--dataset", &path("dense.arff"), "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("dense,1,amphibian,true"));
}

#[test]
fn eval_outputs_all_measures() {
    let o = mlbase(&["eval", "--dataset", &path("dense.arff"), "--protocol", "full", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 9);
    assert!(out.contains("dense,HL,0.3888888888888889,lower\n"), "{out}");
    let table = stdout(&mlbase(&["eval", "--dataset", &path("dense.arff")]));
    assert!(
        table.contains("| dense | 0.3333 | 0.3889 | 0.3889 | 0.5000 | 0.3333 | 0.1667 | 0.2222 | 0.4615 |"),
        "{table}"
    );
}

#[test]
fn eval_cross_validation_is_seeded() {
    let run = |seed: &str| {
        mlbase(&["eval", "--dataset", &path("sparse.arff"), "--protocol", "cv:5", "--seed", seed, "--format", "json"])
            .stdout
    };
    assert_eq!(run("3"), run("3"));
    let v: serde_json::Value = serde_json::from_slice(&run("3")).unwrap();
    assert_eq!(v[0]["protocol"], "cv:5");
    assert_eq!(v[0]["seed"], 3);
}

#[test]
fn compare_empty_results_file() {
    for file in ["none.csv", "empty_results.csv"] {
        let o = mlbase(&["compare", "--results", &path(file)]);
        assert!(o.status.success(), "{file}");
        assert!(stdout(&o).contains("0 of 0 results no better than the baseline (—)"));
        let o = mlbase(&["compare", "--results", &path(file), "--format", "csv"]);
        assert!(stdout(&o).ends_with("*,*,0,0,\n"));
    }
}

#[test]
fn compare_fixture_summary() {
    let o = mlbase(&["compare", "--results", &path("published.csv"), "--baselines", &path("baselines.csv")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("| yeast | 2 | 0 | 2 | — | — | — | — | 1 | 5 | 8 | 62.5 |"), "{out}");
    assert!(out.contains("9 of 20 results no better than the baseline (45.0%)"));
}

#[test]
fn compare_with_baselines_from_a_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.csv");
    std::fs::write(&results, "paper_id,dataset,measure,value,protocol,stddev\np,dense,HL,0.5,,\np,dense,HL,0.1,,\n")
        .unwrap();
    let o = mlbase(&[
        "compare",
        "--results",
        results.to_str().unwrap(),
        "--dataset",
        &path("dense.arff"),
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"]["underperforming"], 1);
    assert_eq!(v["total"]["total"], 2);
}

#[test]
fn compare_without_baseline_is_a_data_error() {
    let o = mlbase(&["compare", "--results", &path("published.csv")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no baseline for"));
}

#[test]
fn report_writes_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/report");
    let o = mlbase(&[
        "report",
        "--results",
        &path("published.csv"),
        "--baselines",
        &path("baselines.csv"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["report.md", "report.json", "baselines.csv", "summary.csv", "distribution.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let md = std::fs::read_to_string(out.join("report.md")).unwrap();
    assert_eq!(md, stdout(&o));
    assert!(md.contains("## Distribution of published values"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["comparison"]["total"]["total"], 20);
}

#[test]
fn malformed_input_is_a_data_error() {
    for file in ["malformed_label.arff", "malformed_arity.arff", "malformed_header.arff", "malformed_sparse.arff"] {
        let o = mlbase(&["stats", "--dataset", &path(file), "--labels", &path("ab.xml")]);
        assert_eq!(o.status.code(), Some(2), "{file}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("line "), "{file}");
        assert!(o.stdout.is_empty());
    }
    let bad = mlbase(&["compare", "--results", &path("baselines.csv")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    for args in [
        &["stats"][..],
        &["eval", "--dataset", "x.arff", "--protocol", "cv:1"],
        &["stats", "--dataset", "a.arff", "--format", "yaml"],
        &["compare"],
        &["bogus"],
        &["stats", "--dataset", "a", "--dataset", "b", "--name", "n"],
        &[],
    ] {
        let o = mlbase(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    let help = mlbase(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("compare"));
}
