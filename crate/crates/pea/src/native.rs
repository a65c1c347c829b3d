//! The built-in reference solvers, producing answers in the candidate
//! wire format.

use pea_core::blocksworld;
use pea_core::game24::{self, Rational};
use pea_core::logistics::{self, Strategy};
use pea_core::plan::{Plan, SearchLimits, SearchOutcome};
use pea_core::sat;

use crate::task::{parse_instance, Instance, Payload, TaskKind};

/// Answer of the reference solver, as one line: a `[True, ...]` list or
/// `UNSAT`, a bracketed expression or `cannot`, or plan sentences joined by
/// `; ` (empty for an empty plan).
pub fn solve_native(instance: &Instance) -> Result<String, String> {
    match &instance.payload {
        Payload::Sat(f) => Ok(sat::solve_sat(f).to_string()),
        Payload::G24(nums) => game24::solve24(*nums, Rational::from_int(24))
            .map(|v| v.to_string())
            .map_err(|e| e.to_string()),
        Payload::Bw { initial, goal, .. } => {
            plan_line(blocksworld::solve_optimal(initial, goal, SearchLimits::default()))
        }
        Payload::Logi { world, initial, goal } => plan_line(
            logistics::solve(
                world,
                initial,
                goal,
                Strategy::HelpfulGreedyWithFallback,
                SearchLimits::default(),
            )
            .outcome,
        ),
    }
}

fn plan_line<A: ToString>(outcome: SearchOutcome<A>) -> Result<String, String> {
    match outcome {
        SearchOutcome::Found(plan) => Ok(join_plan(&plan)),
        SearchOutcome::NoPlan => Err("no plan exists".into()),
        SearchOutcome::LimitExceeded => Err("search limits exceeded".into()),
    }
}

pub fn join_plan<A: ToString>(plan: &Plan<A>) -> String {
    plan.actions().iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Parses `input` as an instance of `task` and solves it.
pub fn solve_text(task: TaskKind, input: &str) -> Result<String, String> {
    let instance = parse_instance(task, "stdin", input)?;
    solve_native(&instance)
}

/// Multi-line plan block for the planning tasks: one sentence per line,
/// and for Blocksworld the total time.
pub fn pretty_answer(instance: &Instance, answer: &str) -> String {
    match &instance.payload {
        Payload::Bw { .. } => match blocksworld::parse_bw_plan(answer) {
            Ok(plan) => blocksworld::render_bw_plan(&plan),
            Err(_) => answer.to_string(),
        },
        Payload::Logi { .. } => match logistics::parse_logi_plan(answer) {
            Ok(plan) => logistics::render_logi_plan(&plan),
            Err(_) => answer.to_string(),
        },
        _ => answer.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn answers_in_wire_format() {
        assert_eq!(solve_text(TaskKind::G24, "1 1 1 1").unwrap(), "cannot");
        assert_eq!(
            solve_text(TaskKind::Sat, "p cnf 2 2\n1 0\n-2 0\n").unwrap(),
            "[True, False]"
        );
        assert_eq!(solve_text(TaskKind::Sat, "p cnf 1 2\n1 0\n-1 0\n").unwrap(), "UNSAT");
    }
}
