mod common;

use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use common::*;

fn pea(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(pea_exe())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

const BW_PROMPT: &str = "I am playing with a set of blocks.\n\n[STATEMENT]\nAs initial conditions I have that, the blue block is clear, the hand is empty, the blue block is on top of the red block and the red block is on the table.\nMy goal is to have that the red block is on top of the blue block.\n\nMy plan is as follows:\n\n[PLAN]\nunstack the blue block from on top of the red block\nput down the blue block\npick up the red block\nstack the red block on top of the blue block\n[PLAN END]\n\n[STATEMENT]\nAs initial conditions I have that, the red block is clear, the blue block is clear, the yellow block is clear, the hand is empty, the blue block is on top of the orange block, the red block is on the table, the orange block is on the table and the yellow block is on the table.\nMy goal is to have that the orange block is on top of the blue block.\n\nMy plan is as follows:\n\n[PLAN]\n";

#[test]
fn solve_reads_stdin() {
    assert_eq!(stdout(&pea(&["solve", "--task", "g24"], "1 1 1 1\n")).trim(), "cannot");
    let plan = stdout(&pea(&["solve", "--task", "bw", "--pretty"], BW_PROMPT));
    assert_eq!(plan.lines().count(), 5);
    assert!(plan.ends_with("The total time to execute the plan is 4 minutes.\n"), "{plan}");
}

#[test]
fn bench_sat_directory() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f1.cnf"), "p cnf 2 1\n1 2 0\n").unwrap();
    fs::write(dir.path().join("f2.cnf"), "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    fs::write(dir.path().join("f10.cnf"), "p cnf 3 2\n1 0\n-3 0\n").unwrap();
    let data = dir.path().to_str().unwrap();
    let csv = stdout(&pea(&["bench", "--task", "sat", "--data", data, "--report", "csv"], ""));
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("task,mode,instances,accuracy"));
    assert!(lines.next().unwrap().starts_with("sat,native,3,2+1,3,0,0,0,"));

    let md = stdout(&pea(&["bench", "--task", "sat", "--data", data, "--exclude", "f2.cnf", "--instances"], ""));
    assert!(md.contains("| sat | native | 2 | 2+0 |"), "{md}");
    let f1 = md.find("| f1.cnf").unwrap();
    let f10 = md.find("| f10.cnf").unwrap();
    assert!(f1 < f10);
}

#[test]
fn bench_with_candidate_file() {
    let dir = tempfile::tempdir().unwrap();
    let cand = dir.path().join("solver.py");
    fs::write(&cand, PY_SAT).unwrap();
    let data = dir.path().join("one.cnf");
    fs::write(&data, "p cnf 3 3\n1 -2 0\n2 3 0\n-1 -3 0\n").unwrap();
    let json = dir.path().join("report.json");
    let out = stdout(&pea(
        &[
            "bench",
            "--task",
            "sat",
            "--data",
            data.to_str().unwrap(),
            "--mode",
            "candidate",
            cand.to_str().unwrap(),
            "--report",
            "csv",
            "--synthesis-seconds",
            "4",
            "--json",
            json.to_str().unwrap(),
        ],
        "",
    ));
    assert!(out.lines().nth(1).unwrap().starts_with("sat,candidate,1,1+0,1,"), "{out}");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["synthesis_seconds"], 4.0);
}

#[test]
fn bench_errors() {
    let o = pea(&["bench", "--task", "sat", "--data", "/no/such/path"], "");
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));
    let dir = tempfile::tempdir().unwrap();
    let o = pea(&["bench", "--task", "sat", "--data", dir.path().to_str().unwrap()], "");
    assert!(String::from_utf8_lossy(&o.stderr).contains("no instances"));
}

#[test]
fn synth_with_stub() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("stub.json");
    let responses = serde_json::json!(["no code here", {"error": "timeout"}, fenced("python", PY_SAT)]);
    fs::write(&script, responses.to_string()).unwrap();
    let out = dir.path().join("cand.py");
    let transcript = dir.path().join("t.json");
    let provider = format!("stub:{}", script.display());
    let o = pea(
        &[
            "synth",
            "--task",
            "sat",
            "--provider",
            &provider,
            "--out",
            out.to_str().unwrap(),
            "--transcript",
            transcript.to_str().unwrap(),
        ],
        "",
    );
    stdout(&o);
    assert_eq!(fs::read_to_string(&out).unwrap().trim(), PY_SAT.trim());
    let t: serde_json::Value = serde_json::from_str(&fs::read_to_string(transcript).unwrap()).unwrap();
    assert_eq!(t["code_queries"], 3);
    assert_eq!(t["attempts"].as_array().unwrap().len(), 3);

    fs::write(&script, "[\"nothing\"]").unwrap();
    let o = pea(&["synth", "--task", "sat", "--provider", &provider, "--m", "2"], "");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn prompt_and_enum() {
    let p = stdout(&pea(&["prompt", "--task", "bw", "--with-strategy", "never undo the last move"], ""));
    assert!(p.contains("find_plan") && p.contains("never undo the last move"));

    let dir = tempfile::tempdir().unwrap();
    let expected = dir.path().join("perm.txt");
    stdout(&pea(&["enum", "perm", "--m", "4", "--seed", "3", "--out", expected.to_str().unwrap()], ""));
    let text = fs::read_to_string(&expected).unwrap();
    assert_eq!(text.lines().count(), 24);
    let half = dir.path().join("half.txt");
    fs::write(&half, text.lines().take(12).collect::<Vec<_>>().join("\n")).unwrap();
    let score = stdout(&pea(
        &["enum", "score", "--expected", expected.to_str().unwrap(), "--response", half.to_str().unwrap()],
        "",
    ));
    let v: serde_json::Value = serde_json::from_str(&score).unwrap();
    assert_eq!(v["fraction"], 0.5);
    let full = stdout(&pea(
        &["enum", "product", "--m", "3", "--n", "2", "--seed", "3", "--score", expected.to_str().unwrap()],
        "",
    ));
    let v: serde_json::Value = serde_json::from_str(&full).unwrap();
    assert_eq!(v["expected_count"], 9);
}
