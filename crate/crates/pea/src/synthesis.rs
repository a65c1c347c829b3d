//! The synthesis loop: query a provider for a program, check it, retry,
//! and give up with an empty program.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::candidate::{run_candidate, CandidateProgram, EntryPoint, Role, RunOutcome, ENTRY_MARKER};
use crate::judge::judge;
use crate::native::solve_native;
use crate::provider::{Provider, ScriptedProvider};
use crate::task::{parse_instance, Instance, TaskKind};
use crate::templates::{required_entries, strategy_prompt, task_template, TemplateError};

/// A held-out instance with its expected answer.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub instance: Instance,
    pub expected: String,
}

pub const SAT_FIXTURE: &str = "c held-out 3-SAT fixture\np cnf 5 6\n1 -2 3 0\n-1 2 4 0\n2 -3 -5 0\n-4 5 1 0\n3 4 -1 0\n-2 -4 5 0\n";
pub const G24_FIXTURE: &str = "4 7 8 8";
pub const BW_FIXTURE: &str = "As initial conditions I have that, the red block is clear, the hand is empty, the red block is on top of the blue block, the blue block is on top of the yellow block and the yellow block is on the table.\nMy goal is to have that the yellow block is on top of the red block.";
pub const LOGI_FIXTURE: &str = "As initial conditions I have that, location_0_0 is an airport, location_1_0 is an airport, airplane_0 is at location_0_0, package_0 is at location_0_1, truck_0 is at location_0_0, truck_1 is at location_1_0, location_0_0 is in the city city_0, location_0_1 is in the city city_0, location_1_0 is in the city city_1 and location_1_1 is in the city city_1.\nMy goal is to have that package_0 is at location_1_1.";

impl Fixture {
    /// Fixture whose expected answer comes from the reference solver.
    pub fn from_instance(instance: Instance) -> Result<Self, String> {
        let expected = solve_native(&instance)?;
        Ok(Fixture { instance, expected })
    }

    pub fn builtin(task: TaskKind) -> Result<Self, String> {
        let text = match task {
            TaskKind::Sat => SAT_FIXTURE,
            TaskKind::G24 => G24_FIXTURE,
            TaskKind::Bw => BW_FIXTURE,
            TaskKind::Logi => LOGI_FIXTURE,
            TaskKind::Enum => return Err("the enumeration task has no fixture".into()),
        };
        Self::from_instance(parse_instance(task, "fixture", text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticCheck {
    pub input: String,
    pub expected: String,
    pub actual: Option<String>,
    pub passed: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrityReport {
    pub structural: Vec<StructuralCheck>,
    /// Absent when a structural check failed and the candidate was not run.
    pub semantic: Option<SemanticCheck>,
    pub overall: bool,
}

/// Canonical form used to compare a candidate's answer with the expected
/// one: surrounding space trimmed, inner runs of space collapsed, plans
/// split on newlines or semicolons and rejoined with `; `, bracketed lists
/// rewritten with `, ` separators, and single words lowercased.
pub fn normalize_answer(text: &str) -> String {
    let text = text.trim();
    let collapse = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
    if text.contains('\n') || text.contains(';') {
        return text
            .split(['\n', ';'])
            .map(|s| collapse(s).to_lowercase())
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join("; ");
    }
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let items: Vec<String> = inner
            .split(',')
            .map(|item| {
                let item: String = item.split_whitespace().collect();
                match item.to_ascii_lowercase().as_str() {
                    "true" => "true".to_string(),
                    "false" => "false".to_string(),
                    _ => item,
                }
            })
            .collect();
        return format!("[{}]", items.join(", "));
    }
    if text.chars().all(|c| c.is_ascii_alphabetic()) {
        return text.to_ascii_lowercase();
    }
    collapse(text)
}

fn is_marker(line: &str) -> bool {
    line.contains(ENTRY_MARKER)
}

/// Whether `line` (trimmed) starts a definition of `name`, and the text
/// following the signature.
fn definition_tail<'a>(line: &'a str, name: &str) -> Option<&'a str> {
    let mut rest = line.trim_start();
    for kw in ["async ", "pub ", "export "] {
        rest = rest.strip_prefix(kw).unwrap_or(rest);
    }
    let mut keyword = false;
    for kw in ["def ", "function ", "fn ", "func ", "sub "] {
        if let Some(r) = rest.strip_prefix(kw) {
            rest = r.trim_start();
            keyword = true;
            break;
        }
    }
    let after = rest.strip_prefix(name)?;
    let after_trim = after.trim_start();
    if after_trim.starts_with('(') {
        let close = after_trim.find(')')?;
        let tail = after_trim[close + 1..].trim_start();
        // a bare call `name(...)` is not a definition
        if keyword || tail.starts_with('{') {
            return Some(tail);
        }
        return None;
    }
    // `name = lambda ...` or `const name = (...) => ...`
    if let Some(t) = after_trim.strip_prefix('=') {
        if !t.starts_with('=') {
            return Some(t);
        }
    }
    None
}

fn is_filler(line: &str) -> bool {
    let t = line.trim().trim_end_matches(';').trim();
    t.is_empty()
        || t == "pass"
        || t == "..."
        || t == ":"
        || t.starts_with('#')
        || t.starts_with("//")
        || (t.len() >= 6 && ["\"\"\"", "'''"].iter().any(|q| t.starts_with(q) && t.ends_with(q)))
}

/// True when the source defines `name` with a body that does something.
pub fn has_nonempty_definition(source: &str, name: &str) -> bool {
    let lines: Vec<&str> = source.lines().collect();
    for (i, line) in lines.iter().enumerate() {
        if is_marker(line) {
            continue;
        }
        let Some(tail) = definition_tail(line, name) else { continue };
        let tail = tail.trim();
        if let Some(open) = tail.find('{') {
            // braced body, possibly spanning lines
            let mut depth = 0usize;
            let mut body = String::new();
            let rest = std::iter::once(&tail[open..]).chain(lines[i + 1..].iter().copied());
            'scan: for l in rest {
                for c in l.chars() {
                    match c {
                        '{' => {
                            depth += 1;
                            if depth == 1 {
                                continue;
                            }
                        }
                        '}' => {
                            depth -= 1;
                            if depth == 0 {
                                break 'scan;
                            }
                        }
                        _ => {}
                    }
                    body.push(c);
                }
                body.push('\n');
            }
            if body.lines().any(|l| !is_filler(l)) {
                return true;
            }
            continue;
        }
        // drop a return annotation, then the `:` or `=>` opening the body
        let inline = match tail.strip_prefix("->") {
            Some(t) => t.split_once(':').map_or("", |(_, b)| b),
            None => tail,
        };
        let inline = inline.trim_start().trim_start_matches([':', '=', '>']);
        if !is_filler(inline) {
            return true;
        }
        // indented block after the signature
        let indent = line.len() - line.trim_start().len();
        for l in &lines[i + 1..] {
            if l.trim().is_empty() {
                continue;
            }
            if l.len() - l.trim_start().len() <= indent {
                break;
            }
            if !is_filler(l) {
                return true;
            }
        }
    }
    false
}

fn structural_checks(candidate: &CandidateProgram, required: &[EntryPoint]) -> Vec<StructuralCheck> {
    let manifest = candidate.manifest();
    let declared = |e: &EntryPoint| manifest.entries.iter().find(|d| d.role == e.role && d.name == e.name);

    let missing: Vec<String> = required
        .iter()
        .filter(|e| declared(e).is_none())
        .map(|e| format!("{} {}", e.role, e.name))
        .collect();
    let mismatched: Vec<String> = required
        .iter()
        .filter_map(|e| declared(e).filter(|d| !d.matches(e)).map(|d| d.marker()))
        .collect();
    let empty: Vec<String> = required
        .iter()
        .filter(|e| !has_nonempty_definition(candidate.source_text(), &e.name))
        .map(|e| e.name.clone())
        .collect();
    let conversion = required.iter().find(|e| e.role == Role::Conversion);
    let conversion_ok = conversion.is_some_and(|c| declared(c).is_some() && !empty.contains(&c.name));

    let check = |name: &str, bad: &[String], what: &str| StructuralCheck {
        name: name.into(),
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "ok".into()
        } else {
            format!("{what}: {}", bad.join(", "))
        },
    };
    let mut out = vec![
        check("entry points present", &missing, "missing"),
        check("input/output descriptions match", &mismatched, "differs"),
        check("non-empty definitions", &empty, "no definition with a body"),
    ];
    out.push(StructuralCheck {
        name: "instance conversion present".into(),
        passed: conversion_ok,
        detail: match conversion {
            Some(c) if conversion_ok => c.name.clone(),
            Some(c) => format!("`{}` is not declared and defined", c.name),
            None => "task has no conversion entry".into(),
        },
    });
    if !manifest.malformed.is_empty() {
        out.push(check("manifest well-formed", &manifest.malformed, "unreadable marker"));
    }
    out
}

/// Structural checks on the manifest and source, then, if those pass, one
/// run on the fixture. A crash or timeout fails the semantic check.
pub fn integrity_check(candidate: &CandidateProgram, fixture: &Fixture, timeout: Duration) -> IntegrityReport {
    let task = fixture.instance.task();
    let required = required_entries(task).unwrap_or_default();
    let structural = structural_checks(candidate, &required);
    if structural.iter().any(|c| !c.passed) {
        return IntegrityReport {
            structural,
            semantic: None,
            overall: false,
        };
    }
    let run = run_candidate(candidate, &fixture.instance.text, timeout);
    let (actual, passed, reason) = match run.outcome {
        RunOutcome::Answer { text } => {
            if normalize_answer(&text) == normalize_answer(&fixture.expected) {
                (Some(text), true, None)
            } else {
                match judge(&fixture.instance, &text) {
                    Ok(_) => (Some(text), true, None),
                    Err(why) => (Some(text), false, Some(why)),
                }
            }
        }
        RunOutcome::Timeout => (None, false, Some(format!("timed out after {:.1} s", timeout.as_secs_f64()))),
        RunOutcome::Crash { code, signal, stderr } => {
            let status = match (code, signal) {
                (Some(c), _) => format!("exit status {c}"),
                (None, Some(s)) => format!("signal {s}"),
                _ => "did not start".into(),
            };
            let last = stderr.lines().rev().find(|l| !l.trim().is_empty()).unwrap_or_default();
            (None, false, Some(format!("crashed ({status}) {last}").trim().to_string()))
        }
    };
    IntegrityReport {
        structural,
        semantic: Some(SemanticCheck {
            input: fixture.instance.text.clone(),
            expected: fixture.expected.clone(),
            actual,
            passed,
            reason,
        }),
        overall: passed,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    pub m: usize,
    pub op: bool,
    #[serde(with = "seconds")]
    pub timeout: Duration,
}

mod seconds {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let v = f64::deserialize(d)?;
        Duration::try_from_secs_f64(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("the retry bound must be at least 1")]
    ZeroRetries,
    #[error("the timeout must be positive")]
    ZeroTimeout,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            m: 10,
            op: false,
            timeout: Duration::from_secs(30),
        }
    }
}

impl SynthesisConfig {
    pub fn new(m: usize, op: bool, timeout: Duration) -> Result<Self, ConfigError> {
        if m == 0 {
            return Err(ConfigError::ZeroRetries);
        }
        if timeout.is_zero() {
            return Err(ConfigError::ZeroTimeout);
        }
        Ok(SynthesisConfig { m, op, timeout })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Optimized,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryKind {
    Strategy,
    Code,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderCall {
    pub kind: QueryKind,
    pub phase: Phase,
    pub prompt: String,
    pub response: Option<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub phase: Phase,
    /// 1-based within its phase.
    pub number: usize,
    pub error: Option<String>,
    pub report: Option<IntegrityReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub task: TaskKind,
    pub config: SynthesisConfig,
    pub calls: Vec<ProviderCall>,
    pub attempts: Vec<Attempt>,
    pub code_queries: usize,
    pub strategy_queries: usize,
    /// Phase and attempt number of the returned candidate, if any.
    pub accepted: Option<(Phase, usize)>,
}

impl Transcript {
    /// A provider replaying the recorded responses in order.
    pub fn replay(&self) -> ScriptedProvider {
        ScriptedProvider::new(self.calls.iter().map(|c| match (&c.response, &c.error) {
            (Some(r), _) => Ok(r.clone()),
            (None, e) => Err(e.clone().unwrap_or_default()),
        }))
    }

    pub fn total_queries(&self) -> usize {
        self.code_queries + self.strategy_queries
    }
}

#[derive(Clone, Debug)]
pub enum SynthesisOutcome {
    Program(CandidateProgram),
    Empty,
}

impl SynthesisOutcome {
    pub fn program(&self) -> Option<&CandidateProgram> {
        match self {
            SynthesisOutcome::Program(p) => Some(p),
            SynthesisOutcome::Empty => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub outcome: SynthesisOutcome,
    pub transcript: Transcript,
    pub seconds: f64,
}

struct Session<'a> {
    provider: &'a mut dyn Provider,
    transcript: Transcript,
}

impl Session<'_> {
    fn ask(&mut self, kind: QueryKind, phase: Phase, prompt: String) -> Result<String, String> {
        let result = self.provider.complete(&prompt).map_err(|e| e.to_string());
        match kind {
            QueryKind::Code => self.transcript.code_queries += 1,
            QueryKind::Strategy => self.transcript.strategy_queries += 1,
        }
        self.transcript.calls.push(ProviderCall {
            kind,
            phase,
            prompt,
            response: result.as_ref().ok().cloned(),
            error: result.as_ref().err().cloned(),
        });
        result
    }

    fn record(&mut self, phase: Phase, number: usize, error: Option<String>, report: Option<IntegrityReport>) {
        self.transcript.attempts.push(Attempt {
            phase,
            number,
            error,
            report,
        });
    }
}

/// Runs the synthesis loop for `task`.
///
/// With `config.op`, each of up to `m` optimized attempts first asks for a
/// search-reduction strategy and then for code from the augmented
/// template. Then, whatever happened, up to `m` attempts use the plain
/// template. The first candidate passing [`integrity_check`] is returned;
/// otherwise the outcome is empty. A provider error or a response without
/// code counts as a failed attempt.
pub fn synthesize(
    task: TaskKind,
    provider: &mut dyn Provider,
    config: &SynthesisConfig,
    fixture: &Fixture,
) -> Result<Synthesis, TemplateError> {
    let start = Instant::now();
    let template = task_template(task)?;
    let strategy_question = strategy_prompt(task)?;
    let mut session = Session {
        provider,
        transcript: Transcript {
            task,
            config: config.clone(),
            calls: Vec::new(),
            attempts: Vec::new(),
            code_queries: 0,
            strategy_queries: 0,
            accepted: None,
        },
    };

    let phases: &[Phase] = if config.op {
        &[Phase::Optimized, Phase::Plain]
    } else {
        &[Phase::Plain]
    };
    for &phase in phases {
        for number in 1..=config.m {
            let prompt = match phase {
                Phase::Plain => template.render(),
                Phase::Optimized => match session.ask(QueryKind::Strategy, phase, strategy_question.clone()) {
                    Ok(strategy) => template.augmented(&strategy).render(),
                    Err(e) => {
                        session.record(phase, number, Some(e), None);
                        continue;
                    }
                },
            };
            let response = match session.ask(QueryKind::Code, phase, prompt) {
                Ok(r) => r,
                Err(e) => {
                    session.record(phase, number, Some(e), None);
                    continue;
                }
            };
            let candidate = match CandidateProgram::from_source(&response, None) {
                Ok(c) => c,
                Err(e) => {
                    session.record(phase, number, Some(e.to_string()), None);
                    continue;
                }
            };
            let report = integrity_check(&candidate, fixture, config.timeout);
            let passed = report.overall;
            session.record(phase, number, None, Some(report));
            if passed {
                session.transcript.accepted = Some((phase, number));
                return Ok(Synthesis {
                    outcome: SynthesisOutcome::Program(candidate),
                    transcript: session.transcript,
                    seconds: start.elapsed().as_secs_f64(),
                });
            }
        }
    }
    Ok(Synthesis {
        outcome: SynthesisOutcome::Empty,
        transcript: session.transcript,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(normalize_answer(" [True,false , TRUE] "), "[true, false, true]");
        assert_eq!(normalize_answer("Unsat\n"), "unsat");
        assert_eq!(normalize_answer("[ 6 + 2 * (4+5) ]"), "[6+2*(4+5)]");
        assert_eq!(
            normalize_answer("pick up the red block\nstack the red block on top of the blue block\n"),
            normalize_answer("Pick up the red block;  stack the red block on top of the blue block")
        );
    }

    #[test]
    fn definition_detection() {
        let py = "# PEA-ENTRY predicate f (x) -> y\ndef f(x):\n    \"\"\"doc\"\"\"\n    return x\n\ndef g(x):\n    pass\n\nh = lambda x: x\n";
        assert!(has_nonempty_definition(py, "f"));
        assert!(!has_nonempty_definition(py, "g"));
        assert!(has_nonempty_definition(py, "h"));
        assert!(!has_nonempty_definition(py, "missing"));
        let sh = "run() {\n  cat\n}\nnoop() { :; }\nrun\n";
        assert!(has_nonempty_definition(sh, "run"));
        assert!(!has_nonempty_definition(sh, "noop"));
        assert!(has_nonempty_definition("def one(x): return x + 1\n", "one"));
        assert!(!has_nonempty_definition("print(one(2))\n", "one"));
    }

    #[test]
    fn builtin_fixtures_solve() {
        for t in [TaskKind::Sat, TaskKind::G24, TaskKind::Bw, TaskKind::Logi] {
            let f = Fixture::builtin(t).unwrap();
            assert!(judge(&f.instance, &f.expected).is_ok(), "{t}");
        }
        assert_eq!(Fixture::builtin(TaskKind::Bw).unwrap().expected.split("; ").count(), 6);
    }

    #[test]
    fn config_bounds() {
        assert_eq!(SynthesisConfig::new(0, false, Duration::from_secs(1)), Err(ConfigError::ZeroRetries));
        assert_eq!(SynthesisConfig::new(1, false, Duration::ZERO), Err(ConfigError::ZeroTimeout));
        assert_eq!(SynthesisConfig::default().m, 10);
    }
}
