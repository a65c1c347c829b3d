mod common;

use std::time::Duration;

use common::*;
use pea::provider::ScriptedProvider;
use pea::synthesis::{synthesize, Fixture, Phase, QueryKind, Synthesis, SynthesisConfig};
use pea::task::TaskKind;

fn config(m: usize, op: bool) -> SynthesisConfig {
    SynthesisConfig::new(m, op, Duration::from_secs(30)).unwrap()
}

fn run(responses: Vec<Result<String, String>>, cfg: &SynthesisConfig) -> (Synthesis, ScriptedProvider) {
    let mut provider = ScriptedProvider::new(responses);
    let fixture = Fixture::builtin(TaskKind::Sat).unwrap();
    let s = synthesize(TaskKind::Sat, &mut provider, cfg, &fixture).unwrap();
    (s, provider)
}

fn good() -> Result<String, String> {
    Ok(fenced("python", PY_SAT))
}

fn wrong() -> Result<String, String> {
    Ok(fenced("sh", &constant(TaskKind::Sat, "UNSAT")))
}

fn no_code() -> Result<String, String> {
    Ok("I cannot help with that.".into())
}

#[test]
fn passing_on_third_attempt() {
    let (s, p) = run(vec![wrong(), no_code(), good(), good()], &config(10, false));
    let program = s.outcome.program().expect("a candidate");
    assert_eq!(program.source_text().trim(), PY_SAT.trim());
    assert_eq!(s.transcript.attempts.len(), 3);
    assert_eq!(s.transcript.code_queries, 3);
    assert_eq!(s.transcript.accepted, Some((Phase::Plain, 3)));
    assert_eq!(p.remaining(), 1);
}

#[test]
fn all_failing_gives_empty_after_m() {
    let (s, p) = run((0..20).map(|_| wrong()).collect(), &config(10, false));
    assert!(s.outcome.program().is_none());
    assert_eq!(s.transcript.attempts.len(), 10);
    assert_eq!(s.transcript.code_queries, 10);
    assert_eq!(s.transcript.strategy_queries, 0);
    assert_eq!(p.prompts().len(), 10);
}

#[test]
fn transport_errors_use_the_same_budget() {
    let mut responses: Vec<_> = (0..4).map(|_| Err("connection reset".to_string())).collect();
    responses.push(good());
    let (s, _) = run(responses, &config(5, false));
    assert_eq!(s.transcript.accepted, Some((Phase::Plain, 5)));
    let errors = s.transcript.attempts.iter().filter(|a| a.error.is_some()).count();
    assert_eq!(errors, 4);
    // a script running dry is also a failed attempt
    let (s, _) = run(vec![], &config(3, false));
    assert!(s.outcome.program().is_none());
    assert_eq!(s.transcript.attempts.len(), 3);
}

#[test]
fn optimized_loop_falls_through_to_plain() {
    let mut responses = Vec::new();
    for _ in 0..10 {
        responses.push(Ok("Skip assignments that falsify a unit clause.".to_string()));
        responses.push(wrong());
    }
    responses.push(good());
    let (s, p) = run(responses, &config(10, true));
    assert!(s.outcome.program().is_some());
    assert_eq!(s.transcript.accepted, Some((Phase::Plain, 1)));
    assert_eq!(s.transcript.strategy_queries, 10);
    assert_eq!(s.transcript.code_queries, 11);
    assert!(s.transcript.code_queries <= 2 * 10);
    // augmented prompts carry the strategy, the plain one does not
    let prompts = p.prompts();
    assert!(prompts[1].contains("unit clause"));
    assert!(!prompts[20].contains("unit clause"));
    let kinds: Vec<QueryKind> = s.transcript.calls.iter().take(2).map(|c| c.kind).collect();
    assert_eq!(kinds, [QueryKind::Strategy, QueryKind::Code]);
}

#[test]
fn optimized_loop_can_succeed() {
    let (s, _) = run(vec![Ok("none".into()), good()], &config(10, true));
    assert_eq!(s.transcript.accepted, Some((Phase::Optimized, 1)));
}

#[test]
fn both_loops_exhausted() {
    let (s, _) = run((0..40).map(|_| wrong()).collect(), &config(10, true));
    assert!(s.outcome.program().is_none());
    assert_eq!(s.transcript.attempts.len(), 20);
    assert_eq!(s.transcript.code_queries, 20);
    assert_eq!(s.transcript.strategy_queries, 10);
    assert_eq!(s.transcript.total_queries(), 30);
}

#[test]
fn replay_reproduces_candidate() {
    let (first, _) = run(vec![no_code(), wrong(), good()], &config(10, false));
    let json = serde_json::to_string(&first.transcript).unwrap();
    let transcript: pea::synthesis::Transcript = serde_json::from_str(&json).unwrap();
    let mut replay = transcript.replay();
    let fixture = Fixture::builtin(TaskKind::Sat).unwrap();
    let second = synthesize(TaskKind::Sat, &mut replay, &transcript.config, &fixture).unwrap();
    assert_eq!(
        first.outcome.program().unwrap().source_text(),
        second.outcome.program().unwrap().source_text()
    );
    assert_eq!(first.transcript.calls, second.transcript.calls);
}

#[test]
fn hanging_candidate_fails_without_stalling_loop() {
    let cfg = SynthesisConfig::new(2, false, Duration::from_millis(500)).unwrap();
    let (s, _) = run(vec![Ok(fenced("sh", &sleeper(TaskKind::Sat))), good()], &cfg);
    assert_eq!(s.transcript.accepted, Some((Phase::Plain, 2)));
    let first = s.transcript.attempts[0].report.as_ref().unwrap();
    assert!(first.semantic.as_ref().unwrap().reason.as_ref().unwrap().contains("timed out"));
}
