use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn iec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iec"))
        .args(args)
        .output()
        .expect("spawn iec")
}

fn ok(args: &[&str]) -> String {
    let out = iec(args);
    assert!(
        out.status.success(),
        "iec {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn synth(dir: &TempDir, name: &str, n: usize, seed: u64) -> std::path::PathBuf {
    let path = dir.path().join(name);
    ok(&[
        "synth", "--n", &n.to_string(), "--informative", "3", "--noise", "2",
        "--minority", "0.2", "--seed", &seed.to_string(), "--out", p(&path),
    ]);
    path
}

// hidden_neuron_count, restated: max(1, round(sqrt(n / (d_m ln n))))
fn expected_k(n: usize, d_m: usize) -> usize {
    let n = n as f64;
    ((n / (d_m as f64 * n.ln())).sqrt().round() as usize).max(1)
}

#[test]
fn synth_counts_and_determinism() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        ok(&["synth", "--n", "1000", "--minority", "0.2", "--seed", "7", "--out", p(path)]);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(*header.last().unwrap(), "class");
    let labels: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(labels.len(), 1000);
    assert_eq!(labels.iter().filter(|&&l| l == "1").count(), 200);
    assert!(labels.iter().all(|&l| l == "0" || l == "1"));
}

#[test]
fn synth_rejects_majority_minority() {
    let out = iec(&["synth", "--n", "100", "--minority", "0.6", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_flag_is_usage_error() {
    let out = iec(&["synth", "--n", "many"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn train_reports_k_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "train.csv", 300, 3);
    let m1 = dir.path().join("m1.json");
    let m2 = dir.path().join("m2.json");
    let summary: Value = serde_json::from_str(&ok(&[
        "train", "--data", p(&data), "--model", p(&m1), "--seed", "5", "--format", "json",
    ]))
    .unwrap();
    ok(&["train", "--data", p(&data), "--model", p(&m2), "--seed", "5"]);

    let n = summary["n_train"].as_u64().unwrap() as usize;
    let d_m = summary["d_m"].as_u64().unwrap() as usize;
    assert_eq!(n, 300);
    assert_eq!(summary["hidden_count"].as_u64().unwrap() as usize, expected_k(n, d_m));

    let model: Value = serde_json::from_str(&std::fs::read_to_string(&m1).unwrap()).unwrap();
    assert_eq!(
        model["net"]["hidden_count"].as_u64().unwrap() as usize,
        expected_k(n, d_m)
    );
    assert_eq!(
        std::fs::read(&m1).unwrap(),
        std::fs::read(&m2).unwrap(),
        "same seed must give the same model file"
    );
}

#[test]
fn missing_label_column_fails() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.csv", 100, 1);
    let model = dir.path().join("m.json");
    let out = iec(&["train", "--data", p(&data), "--label-col", "target", "--model", p(&model)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("target"));
    assert!(!model.exists());
}

#[test]
fn evaluate_perfect_fit_on_training_file() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.csv", 300, 11);
    let model = dir.path().join("m.json");
    ok(&["train", "--data", p(&data), "--model", p(&model)]);
    let eval: Value = serde_json::from_str(&ok(&[
        "evaluate", "--data", p(&data), "--model", p(&model), "--format", "json",
    ]))
    .unwrap();
    for (name, value) in eval["report"].as_object().unwrap() {
        assert_eq!(value.as_f64().unwrap(), 1.0, "{name}");
    }
    assert!(eval["undefined"].as_array().unwrap().is_empty());
}

#[test]
fn constant_baseline_on_80_20() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.csv", 500, 2);
    let eval: Value = serde_json::from_str(&ok(&[
        "evaluate", "--data", p(&data), "--baseline", "constant0", "--format", "json",
    ]))
    .unwrap();
    let r = &eval["report"];
    assert_eq!(r["accuracy"].as_f64().unwrap(), 0.8);
    assert_eq!(r["g_mean"].as_f64().unwrap(), 0.0);
    assert_eq!(r["sensitivity"].as_f64().unwrap(), 0.0);
    assert_eq!(r["specificity"].as_f64().unwrap(), 1.0);
    let undefined: Vec<&str> = eval["undefined"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(undefined.contains(&"precision"));
}

#[test]
fn evaluate_table_matches_json() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.csv", 500, 4);
    let base = ["evaluate", "--data", p(&data), "--baseline", "constant0"];
    let table = ok(&base);
    let json: Value =
        serde_json::from_str(&ok(&[&base[..], &["--format", "json"]].concat())).unwrap();

    let cm = &json["confusion"];
    let first = table.lines().next().unwrap();
    let counts: Vec<u64> = first
        .split_whitespace()
        .skip(1)
        .step_by(2)
        .map(|t| t.parse().unwrap())
        .collect();
    let expected: Vec<u64> = ["tp", "fp", "tn", "fn"].iter().map(|k| cm[k].as_u64().unwrap()).collect();
    assert_eq!(counts, expected);

    let report = json["report"].as_object().unwrap();
    let mut seen = 0;
    for line in table.lines().skip(1) {
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            continue;
        };
        let Some(j) = report.get(name) else { continue };
        assert_eq!(value, format!("{:.4}", j.as_f64().unwrap()), "{name}");
        seen += 1;
    }
    assert_eq!(seen, report.len());
}

#[test]
fn benchmark_table_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.csv", 300, 8);
    let args = [
        "benchmark", "--data", p(&data), "--repetitions", "1", "--seed", "3", "--epochs", "300",
    ];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let lines: Vec<&str> = first.lines().filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(lines.len(), 4, "{first}");
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    assert_eq!(header, ["Classifier", "AUC", "F-measure", "G-mean", "Accuracy"]);
    let names: Vec<&str> = lines[1..].iter().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["ANN", "HDDT", "IEC"]);
}

#[test]
fn dump_folds_reaggregate_to_summary() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.csv", 300, 9);
    let dump = dir.path().join("folds.json");
    let summary: Value = serde_json::from_str(&ok(&[
        "benchmark", "--data", p(&data), "--repetitions", "3", "--seed", "1", "--epochs", "200",
        "--format", "json", "--dump-folds", p(&dump),
    ]))
    .unwrap();
    let folds: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    let folds = folds.as_array().unwrap();
    assert_eq!(folds.len(), 9);

    let summary = summary.as_array().unwrap();
    assert_eq!(summary.len(), 3);
    for entry in summary {
        let classifier = &entry["classifier"];
        let mine: Vec<&Value> = folds.iter().filter(|f| &f["classifier"] == classifier).collect();
        assert_eq!(mine.len(), 3);
        for (metric, printed) in entry["mean"].as_object().unwrap() {
            let sum: f64 = mine.iter().map(|f| f["report"][metric].as_f64().unwrap()).sum();
            assert_eq!(
                sum / mine.len() as f64,
                printed.as_f64().unwrap(),
                "{classifier} {metric}"
            );
        }
    }
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# synthetic run\nn = 120\nminority=0.25\nseed=4\n").unwrap();
    let from_cfg = dir.path().join("a.csv");
    let overridden = dir.path().join("b.csv");
    ok(&["--config", p(&cfg), "synth", "--out", p(&from_cfg)]);
    ok(&["synth", "--config", p(&cfg), "--n", "200", "--out", p(&overridden)]);

    let count = |path: &Path| {
        let text = std::fs::read_to_string(path).unwrap();
        let rows: Vec<String> = text.lines().skip(1).map(str::to_owned).collect();
        let pos = rows.iter().filter(|l| l.ends_with(",1")).count();
        (rows.len(), pos)
    };
    assert_eq!(count(&from_cfg), (120, 30));
    assert_eq!(count(&overridden), (200, 50));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"minority": 0.9}"#).unwrap();
    assert_eq!(iec(&["--config", p(&bad), "synth"]).status.code(), Some(2));
}
