//! Shared handling of the templated English used by the planning datasets.

use alloc::string::String;
use alloc::vec::Vec;

pub const STATEMENT_MARKER: &str = "[STATEMENT]";
pub const PLAN_MARKER: &str = "[PLAN]";
pub const PLAN_END_MARKER: &str = "[PLAN END]";
pub const INITIAL_LEAD: &str = "As initial conditions I have that";
pub const GOAL_LEAD: &str = "My goal is to have that";
const PLAN_LEAD: &str = "My plan is as follows";

/// The task part of a dataset file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaskText<'a> {
    /// Initial conditions and goal of the question.
    pub statement: &'a str,
    /// Plan lines given after the question, when the file carries one.
    pub plan: Option<&'a str>,
}

/// Separates the question from a one-shot example.
///
/// Files carry a worked example first and the question second, each
/// introduced by `[STATEMENT]`; the second marker starts the question. With
/// a single marker that statement is the question, and with none the whole
/// text is.
pub fn extract_task(text: &str) -> TaskText<'_> {
    let starts: Vec<usize> = text.match_indices(STATEMENT_MARKER).map(|(i, _)| i).collect();
    let body = match starts.as_slice() {
        [] => text,
        [only] => &text[only + STATEMENT_MARKER.len()..],
        [_, second, ..] => &text[second + STATEMENT_MARKER.len()..],
    };
    let body = body.find(STATEMENT_MARKER).map_or(body, |next| &body[..next]);
    let statement_end = body.find(PLAN_LEAD).or_else(|| body.find(PLAN_MARKER)).unwrap_or(body.len());
    let statement = body[..statement_end].trim();
    let rest = &body[statement_end..];
    let plan = rest.find(PLAN_MARKER).and_then(|start| {
        let after = &rest[start + PLAN_MARKER.len()..];
        let end = after.find(PLAN_END_MARKER)?;
        let lines = after[..end].trim();
        (!lines.is_empty()).then_some(lines)
    });
    TaskText { statement, plan }
}

/// Splits `a, b, c and d` into its facts. Surrounding whitespace, a leading
/// comma and a trailing period are dropped.
pub fn split_facts(text: &str) -> Vec<String> {
    let text = text.trim().trim_start_matches(',').trim().trim_end_matches('.');
    let mut out = Vec::new();
    for part in text.split(',') {
        for fact in part.split(" and ") {
            let fact = fact.trim();
            if !fact.is_empty() {
                out.push(String::from(fact));
            }
        }
    }
    out
}

/// Joins facts as `a, b, c and d`.
pub fn join_facts(facts: &[String]) -> String {
    match facts {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => {
            let mut s = init.join(", ");
            s.push_str(" and ");
            s.push_str(last);
            s
        }
    }
}

/// The initial-condition and goal sections of a statement.
pub fn sections(statement: &str) -> Option<(&str, &str)> {
    let init_start = statement.find(INITIAL_LEAD)? + INITIAL_LEAD.len();
    let goal_at = statement.find(GOAL_LEAD)?;
    if goal_at < init_start {
        return None;
    }
    let initial = &statement[init_start..goal_at];
    let goal_text = &statement[goal_at + GOAL_LEAD.len()..];
    // the goal ends at the first sentence break
    let goal_end = goal_text
        .find(". ")
        .or_else(|| goal_text.find(".\n"))
        .or_else(|| goal_text.rfind('.'))
        .unwrap_or(goal_text.len());
    Some((initial, &goal_text[..goal_end]))
}

/// Plan lines, skipping markers, blank lines and cost remarks.
pub fn plan_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| {
        !l.is_empty()
            && *l != PLAN_MARKER
            && *l != PLAN_END_MARKER
            && !l.starts_with("The total time")
            && !l.starts_with("My plan is")
    })
}
