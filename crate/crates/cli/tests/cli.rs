use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_antisquare"));
    cmd.args(args).env_remove("ANTISQUARE_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("bad record {l}: {e}")))
        .collect()
}

fn anchored<'a>(recs: &'a [Value], anchor: &str) -> &'a Value {
    recs.iter().find(|r| r["anchor"] == anchor).unwrap_or_else(|| panic!("no record for {anchor}"))
}

#[test]
fn analyze_reports_failure_with_witness() {
    let out = run(&["analyze", "0011", "--max-order", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = &records(&out)[0];
    assert_eq!(r["pass"], false);
    assert_eq!(r["witness"], "0011");
}

#[test]
fn analyze_without_constraints() {
    let out = run(&["analyze", "010101"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["critical_exponent"], "3/1");
    assert_eq!(r["antisquares"], serde_json::json!(["01", "10", "010101"]));
}

#[test]
fn analyze_published_word_passes() {
    let out = run(&["analyze", "00101100101101001011001101001011001011", "--beta", "7/3", "--max-count", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["pass"], true);
    assert_eq!(r["anchor"], "Table 6 row 6");
}

#[test]
fn analyze_reads_word_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("words.txt");
    std::fs::write(&file, "010\n\n0110\n").unwrap();
    let out = run(&["analyze", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[1]["word"], "0110");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["analyze", "01x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["fib-report", "--prefix-len", "50"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--budget", "10"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--beta", "3", "--n-max", "5", "--automaton"]).status.code(), Some(2));
}

#[test]
fn summary_goes_to_stderr_and_quiet_silences_it() {
    let loud = run(&["analyze", "0110"]);
    assert!(String::from_utf8_lossy(&loud.stderr).contains("antisquares"));
    let quiet = run(&["--quiet", "analyze", "0110"]);
    assert!(quiet.stderr.is_empty());
    assert_eq!(loud.stdout, quiet.stdout);
}

#[test]
fn generate_fixed_point_and_image() {
    let out = run(&["generate", "phi", "--length", "10"]);
    assert_eq!(records(&out)[0]["word"], "0010010100");
    let out = run(&["generate", "g", "--apply", "01"]);
    assert_eq!(records(&out)[0]["word"], "0111");
    assert_eq!(run(&["generate", "nope"]).status.code(), Some(2));
}

#[test]
fn table_3_rows() {
    let out = run(&["reproduce-tables", "--table", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    for (row, len) in [(1, 29), (2, 32), (3, 30)] {
        let r = anchored(&recs, &format!("Table 3 row {row}"));
        assert_eq!(r["max_length"], len);
        assert_eq!(r["exhausted"], true);
    }
}

#[test]
fn table_2_rows() {
    let out = run(&["reproduce-tables", "--table", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    for (row, name, t, m) in [(1, "xi3", 8, 6), (2, "xi5", 10, 16), (3, "xi6", 14, 26)] {
        let r = anchored(&recs, &format!("Table 2 row {row}"));
        assert_eq!((r["morphism"].as_str(), r["t"].as_u64(), r["m"].as_u64()), (Some(name), Some(t), Some(m)));
        assert_eq!(r["pass"], true);
    }
}

#[test]
fn table_6_skip_slow() {
    let out = run(&["reproduce-tables", "--table", "6", "--skip-slow"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(anchored(&recs, "Table 6 row 3")["status"], "skipped");
    for (row, len) in [(1, 17), (2, 52), (4, 92), (5, 156), (6, 38)] {
        assert_eq!(anchored(&recs, &format!("Table 6 row {row}"))["max_length"], len);
    }
}

#[test]
fn tables_are_independent_of_jobs() {
    let strip = |out: &Output| -> Vec<Value> {
        records(out)
            .into_iter()
            .map(|mut r| {
                r.as_object_mut().unwrap().remove("wall_ms");
                r
            })
            .collect()
    };
    let one = run(&["reproduce-tables", "--table", "5", "--table", "6", "--skip-slow", "--jobs", "1"]);
    let four = run(&["reproduce-tables", "--table", "5", "--table", "6", "--skip-slow", "--jobs", "4"]);
    assert_eq!(strip(&one), strip(&four));
}

fn budget_then_resume(dir: &Path) {
    let ckpt = dir.join("table-6-row-3.ckpt");
    let out = run_env(
        &["reproduce-tables", "--table", "6", "--checkpoint-dir", dir.to_str().unwrap()],
        &[("ANTISQUARE_BUDGET", "100000")],
    );
    assert_eq!(out.status.code(), Some(3));
    let recs = records(&out);
    let r = anchored(&recs, "Table 6 row 3");
    assert_eq!(r["status"], "budget");
    assert_eq!(r["checkpoint"], ckpt.display().to_string());
    let text = std::fs::read_to_string(&ckpt).unwrap();
    assert!(text.starts_with(antisquare::search::CHECKPOINT_MAGIC));

    let out = run(&["reproduce-tables", "--table", "6", "--checkpoint-dir", dir.to_str().unwrap(), "--resume"]);
    assert_eq!(out.status.code(), Some(0));
    let r = anchored(&records(&out), "Table 6 row 3").clone();
    assert_eq!((r["max_length"].as_u64(), r["exhausted"].as_bool()), (Some(407), Some(true)));
}

#[test]
fn slow_row_budget_exhaustion_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    budget_then_resume(dir.path());
}

#[test]
fn search_checkpoint_resume_matches_direct_run() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("s.ckpt");
    let c = ckpt.to_str().unwrap();
    let flags = ["--beta", "5/2", "--max-count", "14"];
    let direct = records(&run(&[&["search"][..], &flags].concat()))[0].clone();
    let first = run(&[&["search"][..], &flags, &["--budget", "5000", "--round", "1000", "--checkpoint", c]].concat());
    assert_eq!(first.status.code(), Some(3));
    let resumed = run(&[&["search"][..], &flags, &["--checkpoint", c, "--resume"]].concat());
    assert_eq!(resumed.status.code(), Some(0));
    let resumed = &records(&resumed)[0];
    assert_eq!(resumed["witness"], direct["witness"]);
    assert_eq!(resumed["nodes"], direct["nodes"]);
}

#[test]
fn resume_rejects_other_constraints() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("s.ckpt");
    let c = c.to_str().unwrap();
    run(&["search", "--beta", "5/2", "--max-count", "14", "--budget", "100", "--round", "50", "--checkpoint", c]);
    let out = run(&["search", "--beta", "7/3", "--max-count", "16", "--checkpoint", c, "--resume"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn modified_registry_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("morphisms.txt");
    let text = antisquare::morphism::Registry::builtin_text().replacen("0 -> 001\n", "0 -> 0011\n", 1);
    std::fs::write(&file, text).unwrap();
    let out = run(&["reproduce-tables", "--table", "1", "--registry", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_single_morphism() {
    let out = run(&["verify-morphism", "zeta3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!((r["anchor"].as_str(), r["m"].as_u64()), (Some("Table 5 row 1"), Some(4)));
}

#[test]
fn minimal_antisquare_sizes() {
    let out = run(&["minimal-antisquares", "--max-order", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let sizes: Vec<u64> = records(&out).iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [2, 4, 2, 0, 10, 12, 14, 16, 18, 20, 22, 24]);
}

#[test]
fn fib_report_small_prefix() {
    let out = run(&["fib-report", "--prefix-len", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs[0]["antisquares"], serde_json::json!(["01", "10"]));
    let summary = recs.last().unwrap();
    assert_eq!(summary["below_two_plus_alpha"], true);
    assert_eq!(summary["gap_decreasing"], true);
}

#[test]
fn count_by_search_and_automaton() {
    let out = run(&["count", "--max-order", "2", "--n-max", "6"]);
    let counts: Vec<u64> = records(&out).iter().filter_map(|r| r["count"].as_u64()).collect();
    assert_eq!(counts, [1, 2, 4, 8, 12, 20, 30]);
    let out = run(&["count", "--forbid", "000,111", "--automaton", "--n-max", "4"]);
    let counts: Vec<u64> = records(&out).iter().filter_map(|r| r["count"].as_u64()).collect();
    assert_eq!(counts, [1, 2, 4, 6, 10]);
}

#[test]
fn count_budget_exit_3() {
    let out = run(&["count", "--max-order", "2", "--n-max", "40", "--budget", "50"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(records(&out).last().unwrap()["complete"], false);
}
