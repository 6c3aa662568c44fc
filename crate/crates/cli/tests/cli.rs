// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hls_dse::{dominates, Fixture, ParetoFrontier};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hls-dse"))
}

fn s1_knobs(dir: &Path) -> PathBuf {
    let path = dir.join("s1.csv");
    fs::write(&path, Fixture::S1.knob_csv()).unwrap();
    path
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn small_run(dir: &Path, knobs: &Path, name: &str, seed: &str) -> PathBuf {
    let out = dir.join(name);
    let o = run(bin()
        .args([
            "run",
            "--evaluator",
            "synthetic:S1",
            "--seed",
            seed,
            "--max-points",
            "40",
        ])
        .arg("--knobs")
        .arg(knobs)
        .arg("--out")
        .arg(&out));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

#[test]
fn run_writes_report_files() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let out = tmp.path().join("r1");
    let o = run(bin()
        .args(["run", "--evaluator", "synthetic:S1", "--seed", "1"])
        .arg("--knobs")
        .arg(&knobs)
        .arg("--out")
        .arg(&out));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["pareto.csv", "history.jsonl", "summary.json"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["evaluations"], 170);
    let front =
        ParetoFrontier::from_csv(&fs::read_to_string(out.join("pareto.csv")).unwrap()).unwrap();
    assert_eq!(
        front.len() as u64,
        summary["frontier_size"].as_u64().unwrap()
    );
}

#[test]
fn same_seed_same_history() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let a = small_run(tmp.path(), &knobs, "a", "7");
    let b = small_run(tmp.path(), &knobs, "b", "7");
    for f in ["pareto.csv", "history.jsonl", "summary.json"] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn missing_knobs_names_the_flag() {
    let o = run(bin().args(["run", "--evaluator", "synthetic:S1"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--knobs"));
}

#[test]
fn resume_conflicts_with_fresh_run_flags() {
    let o = run(bin().args(["run", "--resume", "cp.json", "--seed", "3"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--resume"));
    let o = run(bin().args(["run", "--resume", "cp.json", "--knobs", "k.csv"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_inputs_exit_2_naming_the_flag() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let cases: [(&[&str], &str); 6] = [
        (&["--evaluator", "synthetic:S9"], "--evaluator"),
        (&["--evaluator", "subprocess:true"], "--evaluator"),
        (&["--evaluator", "synthetic:S1", "--init", "0"], "--init"),
        (
            &[
                "--evaluator",
                "synthetic:S1",
                "--init",
                "30",
                "--max-points",
                "20",
            ],
            "--init",
        ),
        (
            &["--evaluator", "synthetic:S1", "--time-budget-s=-1"],
            "--time-budget-s",
        ),
        (
            &["--evaluator", "synthetic:S1", "--capacities", "1,2,3"],
            "--capacities",
        ),
    ];
    for (args, flag) in cases {
        let o = run(bin().arg("run").arg("--knobs").arg(&knobs).args(args));
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }

    let bad_knobs = tmp.path().join("bad.csv");
    fs::write(
        &bad_knobs,
        "id,kind,group,configs,factors\nl1,loop,,none|pipeline,\nl1,loop,,none,\n",
    )
    .unwrap();
    let o = run(bin()
        .args(["run", "--evaluator", "synthetic:S1"])
        .arg("--knobs")
        .arg(&bad_knobs));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--knobs"));

    let config = tmp.path().join("config.json");
    fs::write(&config, r#"{"n_mutants": 5, "no_such_field": 1}"#).unwrap();
    let o = run(bin()
        .args(["run", "--evaluator", "synthetic:S1"])
        .arg("--knobs")
        .arg(&knobs)
        .arg("--config")
        .arg(&config));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--config"));
}

#[test]
fn config_file_overrides_defaults() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let config = tmp.path().join("config.json");
    fs::write(
        &config,
        r#"{"n_init": 5, "max_points": 12, "engines": ["random"]}"#,
    )
    .unwrap();
    let out = tmp.path().join("out");
    let o = run(bin()
        .args(["run", "--evaluator", "synthetic:S1"])
        .arg("--knobs")
        .arg(&knobs)
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["evaluations"], 12);
    assert_eq!(summary["arms"].as_array().unwrap().len(), 1);
}

#[test]
fn harness_fault_aborts_with_checkpoint() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let out = tmp.path().join("out");
    // Point files cannot be created, so the very first call faults.
    let o = run(bin()
        .args(["run", "--evaluator", "subprocess:cat {point_file}"])
        .arg("--knobs")
        .arg(&knobs)
        .arg("--out")
        .arg(&out)
        .env("TMPDIR", tmp.path().join("missing")));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(out.join("checkpoint.json").is_file());
}

#[test]
fn resume_extends_a_finished_run() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let first = small_run(tmp.path(), &knobs, "first", "2");
    let out = tmp.path().join("more");
    let o = run(bin()
        .args(["run", "--max-points", "45", "--resume"])
        .arg(first.join("checkpoint.json"))
        .arg("--out")
        .arg(&out));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["evaluations"], 45);
    let old = fs::read_to_string(first.join("history.jsonl")).unwrap();
    let new = fs::read_to_string(out.join("history.jsonl")).unwrap();
    assert!(new.starts_with(&old));

    let o = run(bin()
        .args(["run", "--resume"])
        .arg(tmp.path().join("nope.json")));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--resume"));
}

#[test]
fn oracle_enumerates_s1() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let out = tmp.path().join("oracle");
    let o = run(bin()
        .args(["oracle", "--evaluator", "synthetic:S1"])
        .arg("--knobs")
        .arg(&knobs)
        .arg("--out")
        .arg(&out));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let all = fs::read_to_string(out.join("oracle_all.csv")).unwrap();
    assert_eq!(all.lines().count(), 1 + 896);
    let front =
        ParetoFrontier::from_csv(&fs::read_to_string(out.join("oracle_pareto.csv")).unwrap())
            .unwrap();
    let e = front.entries();
    assert!(!e.is_empty());
    for a in e {
        assert!(e.iter().all(|b| !dominates(&b.objectives, &a.objectives)));
    }
    // Rows written equal the frontier rebuilt from them.
    let rows = fs::read_to_string(out.join("oracle_pareto.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(rows, 1 + e.len());
}

#[test]
fn oracle_rejects_oversized_and_subprocess() {
    let tmp = TempDir::new().unwrap();
    let big = tmp.path().join("big.csv");
    let mut text = String::from("id,kind,group,configs,factors\n");
    for i in 0..6 {
        text.push_str(&format!("l{i},loop,,none|pipeline|unroll,2|4|8|16|32|64\n"));
    }
    fs::write(&big, text).unwrap();
    let o = run(bin()
        .args(["oracle", "--evaluator", "synthetic:S1"])
        .arg("--knobs")
        .arg(&big));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("262144"), "{}", stderr(&o));

    let knobs = s1_knobs(tmp.path());
    let o = run(bin()
        .args(["oracle", "--evaluator", "subprocess:cat {point_file}"])
        .arg("--knobs")
        .arg(&knobs));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--evaluator"));
}

fn report(runs: &[&Path], oracle: Option<&Path>, extra: &[&str], out: &Path) -> Output {
    let mut cmd = bin();
    cmd.arg("report");
    for r in runs {
        cmd.arg("--run").arg(r);
    }
    if let Some(o) = oracle {
        cmd.arg("--oracle").arg(o);
    }
    run(cmd.args(extra).arg("--out").arg(out))
}

fn table_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip_while(|l| !l.starts_with("run "))
        .skip(1)
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

#[test]
fn report_single_run_and_self_oracle() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let r = small_run(tmp.path(), &knobs, "r", "4");
    let o = report(&[&r], None, &[], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = table_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].last().unwrap(), "-");

    let o = report(&[&r], Some(&r.join("pareto.csv")), &[], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let rows = table_rows(&stdout(&o));
    assert_eq!(rows[0].last().unwrap(), "1.0000");
    let csv = fs::read_to_string(tmp.path().join("comparison.csv")).unwrap();
    assert!(csv.starts_with("source,latency_us,weighted_resource,point_id\n"));
    assert!(csv.lines().any(|l| l.starts_with("oracle,")));
}

#[test]
fn report_ratio_order_follows_hypervolume() {
    let tmp = TempDir::new().unwrap();
    let knobs = s1_knobs(tmp.path());
    let a = small_run(tmp.path(), &knobs, "a", "5");
    let b = small_run(tmp.path(), &knobs, "b", "6");
    let oracle_dir = tmp.path().join("oracle");
    let o = run(bin()
        .args(["oracle", "--evaluator", "synthetic:S1"])
        .arg("--knobs")
        .arg(&knobs)
        .arg("--out")
        .arg(&oracle_dir));
    assert_eq!(o.status.code(), Some(0));
    let o = report(
        &[&a, &b],
        Some(&oracle_dir.join("oracle_pareto.csv")),
        &["--ref", "135.168,1.2114342105263158"],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("reference: latency 135.168000 us"));
    let rows = table_rows(&text);
    assert_eq!(rows.len(), 2);
    let num = |r: &Vec<String>, back: usize| r[r.len() - back].parse::<f64>().unwrap();
    let (hv_a, hv_b) = (num(&rows[0], 2), num(&rows[1], 2));
    let (ra, rb) = (num(&rows[0], 1), num(&rows[1], 1));
    assert_eq!(hv_a.partial_cmp(&hv_b), ra.partial_cmp(&rb));
    assert!(ra <= 1.0 + 1e-9 && rb <= 1.0 + 1e-9);
}

#[test]
fn report_bad_inputs_exit_2() {
    let tmp = TempDir::new().unwrap();
    let o = report(&[&tmp.path().join("none")], None, &[], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--run"));
    let o = run(bin().args(["report", "--run", ".", "--ref", "1,x"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--ref"));
    let o = run(bin().arg("report"));
    assert_eq!(o.status.code(), Some(2));
}
