use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superqubit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const TSIRELSON: &str = r#"{
  "pA": 0.0, "pB": 0.0, "r": [0.0, 0.0], "s": [0.0, 0.0],
  "alice": [{"theta": 0.0, "phi": 0.0}, {"theta": 0.7853981633974483, "phi": 0.0}],
  "bob": [{"theta": 0.39269908169872414, "phi": 0.0}, {"theta": -0.39269908169872414, "phi": 0.0}]
}"#;

#[test]
fn verify_passes_and_fault_is_caught() {
    let ok = run(&["verify", "--samples", "20"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("checks passed"));
    let bad = run(&["verify", "--samples", "20", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn state_prints_probabilities() {
    let o = run(&["state", "--p", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let probs: Vec<f64> = text
        .lines()
        .filter_map(|l| l.strip_prefix("p(").and_then(|r| r.split("= ").nth(1)))
        .map(|v| v.trim().parse().unwrap())
        .collect();
    let want = [0.91, 0.0, 0.09];
    assert_eq!(probs.len(), 3, "{text}");
    for (p, w) in probs.iter().zip(want) {
        assert!((p - w).abs() < 1e-14, "{text}");
    }
}

#[test]
fn unphysical_state_warns() {
    let o = run(&["state", "--p", "0.8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not physical"));
}

#[test]
fn state_json_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    let o = run(&["state", "--p", "-0.2", "--theta", "0.4", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["physical"], true);
    assert_eq!(v["probabilities"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["chsh-eval", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["chsh-eval", missing.to_str().unwrap()]).status.code(), Some(2));
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"seed": 1, "unknown": 3}"#).unwrap();
    assert_eq!(run(&["chsh-optimize", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["chsh-optimize", "--restarts", "0"]).status.code(), Some(2));
    assert_eq!(run(&["state", "--p", "nan"]).status.code(), Some(2));
    assert_eq!(run(&["state"]).status.code(), Some(2));
}

#[test]
fn chsh_eval_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let strat = dir.path().join("s.json");
    fs::write(&strat, TSIRELSON).unwrap();
    let csv = dir.path().join("t.csv");
    let json = dir.path().join("t.json");
    let o = run(&[
        "chsh-eval",
        strat.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["i", "j", "outcome", "probability"]);
    assert_eq!(rdr.records().count(), 36);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    let p = v["result"]["p_win"].as_f64().unwrap();
    assert!((p - (std::f64::consts::PI / 8.0).cos().powi(2)).abs() < 1e-12);

    // The same strategy wrapped in an object is accepted too.
    let wrapped = dir.path().join("w.json");
    fs::write(&wrapped, format!(r#"{{"strategy": {TSIRELSON}}}"#)).unwrap();
    assert_eq!(run(&["chsh-eval", wrapped.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn optimizer_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<String> = ["a", "b"]
        .iter()
        .map(|name| {
            let path = dir.path().join(format!("{name}.json"));
            let o = run(&[
                "chsh-optimize",
                "--seed",
                "9",
                "--restarts",
                "2",
                "--max-iters",
                "100",
                "--json",
                path.to_str().unwrap(),
            ]);
            assert_eq!(o.status.code(), Some(0));
            fs::read_to_string(path).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let v: serde_json::Value = serde_json::from_str(&outs[0]).unwrap();
    assert_eq!(v["seed"], 9);
    assert!(v["result"]["violation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn baseline_reports_reference_values() {
    let o = run(&["baseline", "--restarts", "1", "--max-iters", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("0.75"), "{text}");
    assert!(text.contains("0.85355"), "{text}");
}
