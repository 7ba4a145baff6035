//! End-to-end tests of the command-line binary: exit codes, report
//! shape, piping between subcommands, and rerun determinism.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_skillcast")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Lines of a machine report: the header object, then one row per line.
fn report_lines(text: &str) -> (Value, Vec<Value>) {
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(lines.next().expect("empty report")).unwrap();
    assert!(header.get("command").is_some(), "first line is not a header: {header}");
    let rows = lines.map(|l| serde_json::from_str(l).unwrap()).collect();
    (header, rows)
}

fn synth_corpus(dir: &Path, authors: u32, forecasts: u32, questions: u32, seed: u32) -> String {
    let path = dir.join("corpus.jsonl");
    let out = run(&[
        "synth",
        "--authors",
        &authors.to_string(),
        "--forecasts",
        &forecasts.to_string(),
        "--questions",
        &questions.to_string(),
        "--seed",
        &seed.to_string(),
        "--records",
        path.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    path.to_str().unwrap().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    assert_code(&run(&["--help"]), 0);
    assert_code(&run(&["score", "--help"]), 0);
    assert_code(&run(&["--version"]), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_code(&run(&["--bogus"]), 1);
    assert_code(&run(&["score"]), 1); // missing corpus argument
    assert_code(&run(&["compare", "x.jsonl"]), 1); // missing --k
    assert_code(&run(&["nonsense"]), 1);

    // Mode selection is a config error, not a data error.
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_corpus(dir.path(), 8, 6, 8, 1);
    assert_code(&run(&["evaluate", &corpus, "--k", "2"]), 1);
}

#[test]
fn data_errors_exit_two() {
    assert_code(&run(&["score", "/no/such/file.jsonl"]), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "not a scored row\n").unwrap();
    assert_code(&run(&["rank", bad.to_str().unwrap()]), 2);

    let empty = dir.path().join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    assert_code(&run(&["rank", empty.to_str().unwrap()]), 2);
}

#[test]
fn ingest_rejects_bad_lines_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_corpus(dir.path(), 3, 4, 5, 2);
    let mut text = std::fs::read_to_string(&corpus).unwrap();
    text.push_str("this line is not json\n");
    let mixed = dir.path().join("mixed.jsonl");
    std::fs::write(&mixed, text).unwrap();

    let out = run(&["ingest", mixed.to_str().unwrap(), "--out", "-"]);
    assert_code(&out, 0);
    let (header, rows) = report_lines(&stdout(&out));
    assert_eq!(header["command"], "ingest");
    assert_eq!(rows[0]["accepted"], 12);
    assert_eq!(rows[0]["rejected"], 1);
    assert_eq!(rows[1]["line"], 13);
}

#[test]
fn report_header_shape() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_corpus(dir.path(), 6, 5, 6, 3);
    let out = run(&["score", &corpus, "--seed", "42", "--out", "-"]);
    assert_code(&out, 0);
    let (header, rows) = report_lines(&stdout(&out));

    assert_eq!(header["command"], "score");
    assert_eq!(header["seed"], 42);
    assert!(header["config"].is_object());
    let sha = header["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(sha.len(), 64);
    assert!(sha.chars().all(|c| c.is_ascii_hexdigit()));
    assert_eq!(rows.len(), 30, "6 authors x 5 forecasts, all resolved");
    for r in &rows {
        assert!(r["z"].is_number() && r["brier"].is_number(), "{r}");
    }
}

#[test]
fn score_then_rank_via_files() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_corpus(dir.path(), 12, 8, 10, 4);
    let scored = dir.path().join("scored.jsonl");
    assert_code(&run(&["score", &corpus, "--out", scored.to_str().unwrap()]), 0);

    let out = run(&["rank", scored.to_str().unwrap(), "--k", "3", "--out", "-"]);
    assert_code(&out, 0);
    let (_, rows) = report_lines(&stdout(&out));
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[0]["rank"], 1);
    assert_eq!(rows.iter().filter(|r| r["group"] == "top").count(), 3);
    assert_eq!(rows.iter().filter(|r| r["group"] == "bottom").count(), 3);
}

#[test]
fn stdin_piping_chain() {
    // synth to stdout, score from stdin to stdout, rank from stdin.
    let cmd = format!(
        "{bin} synth --authors 10 --forecasts 6 --questions 8 --seed 9 | \
         {bin} score - --out - | {bin} rank - --out -",
        bin = bin()
    );
    let out = Command::new("sh").args(["-c", &cmd]).output().unwrap();
    assert_code(&out, 0);
    let (header, rows) = report_lines(&stdout(&out));
    assert_eq!(header["command"], "rank");
    assert_eq!(rows.len(), 10);
}

#[test]
fn extract_and_eval_eps_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let note = "We raise our FY 17 EPS estimate to $3.23 from $2.96 and set FY 18 's at $3.43 .";
    let record = serde_json::json!({
        "record_id": "n1",
        "author_id": "analyst1",
        "target_id": "ACME",
        "timestamp": "2017-03-01T00:00:00Z",
        "estimate": 0.0,
        "justification": note,
        "outcome": null,
        "domain_tag": "eps"
    });
    let corpus = dir.path().join("notes.jsonl");
    std::fs::write(&corpus, format!("{record}\n")).unwrap();

    let pred = dir.path().join("pred.jsonl");
    let out = run(&["extract-eps", corpus.to_str().unwrap(), "--out", pred.to_str().unwrap()]);
    assert_code(&out, 0);
    let (_, rows) = report_lines(&std::fs::read_to_string(&pred).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["time_label"], "FY 17");
    assert_eq!(rows[0]["value"], 3.23);

    let gold = dir.path().join("gold.tsv");
    std::fs::write(&gold, "n1\tFY 17\t3.23\nn1\tFY 18\t3.43\n").unwrap();
    let out = run(&[
        "eval-eps",
        "--predictions",
        pred.to_str().unwrap(),
        "--gold",
        gold.to_str().unwrap(),
        "--out",
        "-",
    ]);
    assert_code(&out, 0);
    let (_, rows) = report_lines(&stdout(&out));
    assert_eq!(rows[0]["precision"], 1.0);
    assert_eq!(rows[0]["recall"], 1.0);
    assert_eq!(rows[0]["correct"], 2);
}

#[test]
fn only_one_stream_may_claim_stdout() {
    let out = run(&[
        "synth",
        "--authors",
        "2",
        "--forecasts",
        "3",
        "--questions",
        "4",
        "--records",
        "-",
        "--out",
        "-",
    ]);
    assert_code(&out, 1);
}

#[test]
fn human_summary_moves_to_stderr_when_stdout_is_claimed() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_corpus(dir.path(), 5, 5, 6, 7);

    // --out - : rows own stdout, the table goes to stderr.
    let out = run(&["score", &corpus, "--out", "-"]);
    assert_code(&out, 0);
    assert!(stdout(&out).starts_with('{'));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scored"));

    // No stream on stdout: the table is the stdout payload.
    let out = run(&["score", &corpus]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("scored"));
}

#[test]
fn filter_drops_and_keeps_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_corpus(dir.path(), 8, 6, 8, 5);
    let kept = dir.path().join("kept.jsonl");
    let out = run(&[
        "filter",
        &corpus,
        "--min-tokens",
        "10",
        "--min-forecasts",
        "2",
        "--records",
        kept.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    let n_kept = std::fs::read_to_string(&kept).unwrap().lines().count();
    assert!(n_kept > 0 && n_kept <= 48);

    // Filtering its own output changes nothing.
    let twice = dir.path().join("twice.jsonl");
    let out = run(&[
        "filter",
        kept.to_str().unwrap(),
        "--min-tokens",
        "10",
        "--min-forecasts",
        "2",
        "--records",
        twice.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert_eq!(
        std::fs::read_to_string(&kept).unwrap(),
        std::fs::read_to_string(&twice).unwrap()
    );
}

#[test]
fn train_then_evaluate_saved_model() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_corpus(dir.path(), 16, 10, 10, 6);
    let model = dir.path().join("model.json");
    let out = run(&[
        "train",
        &corpus,
        "--k",
        "5",
        "--epochs",
        "200",
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert!(model.exists());

    let out = run(&[
        "evaluate",
        &corpus,
        "--k",
        "5",
        "--model",
        model.to_str().unwrap(),
        "--out",
        "-",
    ]);
    assert_code(&out, 0);
    let (_, rows) = report_lines(&stdout(&out));
    let acc = rows[0]["accuracy"].as_f64().unwrap();
    assert!(acc >= 0.9, "in-sample accuracy {acc}");
}

#[test]
fn seed_changes_output_rerun_does_not() {
    let dir = tempfile::tempdir().unwrap();
    let args = |seed: &str, path: &str| {
        vec![
            "synth".to_string(),
            "--authors".into(),
            "4".into(),
            "--forecasts".into(),
            "5".into(),
            "--questions".into(),
            "6".into(),
            "--seed".into(),
            seed.into(),
            "--records".into(),
            path.into(),
        ]
    };
    let p1 = dir.path().join("a.jsonl");
    let p2 = dir.path().join("b.jsonl");
    let p3 = dir.path().join("c.jsonl");
    for (seed, p) in [("1", &p1), ("1", &p2), ("2", &p3)] {
        let a: Vec<String> = args(seed, p.to_str().unwrap());
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_code(&run(&a), 0);
    }
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_ne!(std::fs::read(&p1).unwrap(), std::fs::read(&p3).unwrap());
}
