mod common;

use std::time::{Duration, Instant};

use common::*;
use pea::candidate::{run_candidate, CandidateProgram, RunOutcome};
use pea::synthesis::{integrity_check, Fixture};
use pea::task::{parse_instance, TaskKind};
use pea_core::blocksworld::parse_bw_plan;

const BW_EXAMPLE: &str = "As initial conditions I have that, the red block is clear, the blue block is clear, the yellow block is clear, the hand is empty, the blue block is on top of the orange block, the red block is on the table, the orange block is on the table and the yellow block is on the table.\nMy goal is to have that the orange block is on top of the blue block.";

fn candidate(lang: &str, code: &str) -> CandidateProgram {
    CandidateProgram::from_source(&fenced(lang, code), None).unwrap()
}

fn answer(r: RunOutcome) -> String {
    match r {
        RunOutcome::Answer { text } => text,
        other => panic!("expected an answer, got {other:?}"),
    }
}

#[test]
fn echo_candidate_returns_its_input() {
    let c = candidate("python", "import sys\nsys.stdout.write(sys.stdin.read())\n");
    let r = run_candidate(&c, "1 2 3 4", Duration::from_secs(10));
    assert_eq!(answer(r.outcome), "1 2 3 4");
}

#[test]
fn sleeping_candidate_is_killed() {
    let c = candidate("python", "import time\ntime.sleep(1000)\n");
    let start = Instant::now();
    let r = run_candidate(&c, "", Duration::from_secs(1));
    assert_eq!(r.outcome, RunOutcome::Timeout);
    assert!(start.elapsed() < Duration::from_secs(3), "{:?}", start.elapsed());
    assert!(r.wall_seconds >= 1.0);
}

#[test]
fn reference_bw_candidate_finds_four_step_plan() {
    let c = CandidateProgram::from_source(&reference_script(TaskKind::Bw), None).unwrap();
    let r = run_candidate(&c, BW_EXAMPLE, Duration::from_secs(30));
    let plan = parse_bw_plan(&answer(r.outcome)).unwrap();
    assert_eq!(plan.len(), 4);
}

#[test]
fn crash_does_not_disturb_next_run() {
    let bad = candidate("python", "raise SystemExit(7)\n");
    assert!(matches!(
        run_candidate(&bad, "", Duration::from_secs(10)).outcome,
        RunOutcome::Crash { code: Some(7), .. }
    ));
    let hang = candidate("sh", "sleep 1000\n");
    assert_eq!(run_candidate(&hang, "", Duration::from_millis(200)).outcome, RunOutcome::Timeout);
    let good = candidate("sh", "cat\n");
    assert_eq!(answer(run_candidate(&good, "ok", Duration::from_secs(10)).outcome), "ok");
}

#[test]
fn candidate_that_ignores_stdin_still_finishes() {
    // more input than a pipe buffer holds, never read
    let c = candidate("sh", "echo done\n");
    let big = "x".repeat(1 << 20);
    assert_eq!(answer(run_candidate(&c, &big, Duration::from_secs(10)).outcome), "done");
}

#[test]
fn python_sat_candidate_passes_integrity() {
    let c = CandidateProgram::from_source(&fenced("python", PY_SAT), None).unwrap();
    let report = integrity_check(&c, &Fixture::builtin(TaskKind::Sat).unwrap(), Duration::from_secs(30));
    assert!(report.overall, "{report:#?}");
    let u = parse_instance(TaskKind::Sat, "u", "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n").unwrap();
    assert_eq!(answer(run_candidate(&c, &u.text, Duration::from_secs(30)).outcome), "UNSAT");
}

#[test]
fn reference_candidates_pass_integrity() {
    for task in [TaskKind::Sat, TaskKind::G24, TaskKind::Bw, TaskKind::Logi] {
        let c = CandidateProgram::from_source(&reference_script(task), None).unwrap();
        let report = integrity_check(&c, &Fixture::builtin(task).unwrap(), Duration::from_secs(30));
        assert!(report.overall, "{task}: {report:#?}");
    }
}

#[test]
fn structural_failures_skip_execution() {
    let src = reference_script(TaskKind::Sat).replace("# PEA-ENTRY aggregation", "# aggregation");
    let c = CandidateProgram::from_source(&src, None).unwrap();
    let report = integrity_check(&c, &Fixture::builtin(TaskKind::Sat).unwrap(), Duration::from_secs(30));
    assert!(!report.overall);
    assert!(report.semantic.is_none());
    let present = &report.structural[0];
    assert!(!present.passed && present.detail.contains("can_evaluate"), "{present:?}");

    let src = reference_script(TaskKind::G24).replace("(n1, n2, n3, n4) -> expressions", "(numbers) -> expressions");
    let c = CandidateProgram::from_source(&src, None).unwrap();
    let report = integrity_check(&c, &Fixture::builtin(TaskKind::G24).unwrap(), Duration::from_secs(30));
    assert!(!report.structural[1].passed);

    let src = reference_script(TaskKind::Logi).replace("parse_statement() {\n  cat\n}", "parse_statement() { :; }");
    let c = CandidateProgram::from_source(&src, None).unwrap();
    let report = integrity_check(&c, &Fixture::builtin(TaskKind::Logi).unwrap(), Duration::from_secs(30));
    assert!(!report.structural[2].passed && !report.structural[3].passed, "{report:#?}");
}

#[test]
fn semantic_failures_carry_reasons() {
    let fixture = Fixture::builtin(TaskKind::G24).unwrap();
    let wrong = CandidateProgram::from_source(&constant(TaskKind::G24, "[4+7+8+8]"), None).unwrap();
    let report = integrity_check(&wrong, &fixture, Duration::from_secs(30));
    let sem = report.semantic.unwrap();
    assert!(!sem.passed);
    assert!(sem.reason.unwrap().contains("evaluates to 27"));

    let hang = CandidateProgram::from_source(&sleeper(TaskKind::G24), None).unwrap();
    let report = integrity_check(&hang, &fixture, Duration::from_millis(500));
    assert!(report.semantic.unwrap().reason.unwrap().contains("timed out"));

    // any correct expression is accepted, not just the expected one
    let other = CandidateProgram::from_source(&constant(TaskKind::G24, "[(7 - 8/8) * 4]"), None).unwrap();
    assert!(integrity_check(&other, &fixture, Duration::from_secs(30)).overall);
}
