//! Benchmark tasks and their instances.

use std::fmt;
use std::str::FromStr;

use pea_core::blocksworld::{self, BwGoal, BwState};
use pea_core::game24::{self, Rational};
use pea_core::logistics::{self, LogiGoal, LogiState, LogiWorld};
use pea_core::sat::{self, CnfFormula};
use pea_core::statement;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Sat,
    G24,
    Bw,
    Logi,
    Enum,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Sat => "sat",
            TaskKind::G24 => "g24",
            TaskKind::Bw => "bw",
            TaskKind::Logi => "logi",
            TaskKind::Enum => "enum",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sat" => Ok(TaskKind::Sat),
            "g24" | "24" => Ok(TaskKind::G24),
            "bw" | "blocksworld" => Ok(TaskKind::Bw),
            "logi" | "logistics" => Ok(TaskKind::Logi),
            "enum" => Ok(TaskKind::Enum),
            other => Err(format!("unknown task `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Sat(CnfFormula),
    G24([Rational; 4]),
    Bw {
        initial: BwState,
        goal: BwGoal,
        /// Length of the plan shipped with the instance, if any.
        reference_len: Option<usize>,
    },
    Logi {
        world: LogiWorld,
        initial: LogiState,
        goal: LogiGoal,
    },
}

/// One benchmark problem. `text` is what a candidate program receives on
/// its standard input.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub text: String,
    pub payload: Payload,
}

impl Instance {
    pub fn task(&self) -> TaskKind {
        match self.payload {
            Payload::Sat(_) => TaskKind::Sat,
            Payload::G24(_) => TaskKind::G24,
            Payload::Bw { .. } => TaskKind::Bw,
            Payload::Logi { .. } => TaskKind::Logi,
        }
    }
}

/// Parses one instance document in the task's input format.
///
/// SAT takes DIMACS, Game of 24 a line of four numbers, and the planning
/// tasks a statement, optionally wrapped in a full prompt with a worked
/// example; then the second `[STATEMENT]` block is the question.
pub fn parse_instance(task: TaskKind, id: impl Into<String>, text: &str) -> Result<Instance, String> {
    let id = id.into();
    let (text, payload) = match task {
        TaskKind::Sat => {
            let f = sat::parse_dimacs(text).map_err(|e| e.to_string())?;
            (text.to_string(), Payload::Sat(f))
        }
        TaskKind::G24 => {
            let nums = game24::parse_g24_instance(&text.replace(',', " ")).map_err(|e| e.to_string())?;
            let line = nums.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ");
            (line, Payload::G24(nums))
        }
        TaskKind::Bw => {
            let t = statement::extract_task(text);
            let (initial, goal) = blocksworld::parse_bw_statement(t.statement).map_err(|e| e.to_string())?;
            let reference_len = match t.plan {
                Some(p) => Some(blocksworld::parse_bw_plan(p).map_err(|e| format!("reference plan: {e}"))?.len()),
                None => None,
            };
            (
                t.statement.to_string(),
                Payload::Bw {
                    initial,
                    goal,
                    reference_len,
                },
            )
        }
        TaskKind::Logi => {
            let t = statement::extract_task(text);
            let (world, initial, goal) = logistics::parse_logi_statement(t.statement).map_err(|e| e.to_string())?;
            (t.statement.to_string(), Payload::Logi { world, initial, goal })
        }
        TaskKind::Enum => return Err("the enumeration task has no instance files".into()),
    };
    Ok(Instance { id, text, payload })
}
