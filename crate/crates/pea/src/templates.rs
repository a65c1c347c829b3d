//! Prompt templates for program synthesis, one per benchmark task.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::candidate::{EntryPoint, Role};
use crate::task::TaskKind;

/// Instructions for the three program parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeaSections {
    pub predicate: String,
    pub enumeration: String,
    pub aggregation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub problem_description: String,
    pub sections: PeaSections,
    /// Search-space reduction advice; only set on the augmented template.
    pub optimization_insert: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("the {0} section is empty")]
    MissingSection(&'static str),
    #[error("task `{0}` has no synthesis template")]
    NoTemplate(TaskKind),
}

pub fn build_template(problem_description: &str, sections: PeaSections) -> Result<PromptTemplate, TemplateError> {
    for (name, text) in [
        ("problem description", problem_description),
        ("predicate", &sections.predicate),
        ("enumeration", &sections.enumeration),
        ("aggregation", &sections.aggregation),
    ] {
        if text.trim().is_empty() {
            return Err(TemplateError::MissingSection(name));
        }
    }
    Ok(PromptTemplate {
        problem_description: problem_description.to_string(),
        sections,
        optimization_insert: None,
    })
}

impl PromptTemplate {
    /// The template with `strategy` placed before the aggregation part.
    pub fn augmented(&self, strategy: &str) -> PromptTemplate {
        PromptTemplate {
            optimization_insert: Some(strategy.trim().to_string()),
            ..self.clone()
        }
    }

    pub fn render(&self) -> String {
        let mut parts = vec![
            self.problem_description.trim(),
            self.sections.predicate.trim(),
            self.sections.enumeration.trim(),
        ];
        let insert;
        if let Some(s) = &self.optimization_insert {
            insert = format!(
                "Shrink the enumeration before searching. Apply this advice to the candidates you generate:\n{s}"
            );
            parts.push(&insert);
        }
        parts.push(self.sections.aggregation.trim());
        let mut out = parts.join("\n\n");
        out.push('\n');
        out
    }
}

/// The entry points a candidate for `task` has to declare.
pub fn required_entries(task: TaskKind) -> Result<Vec<EntryPoint>, TemplateError> {
    use Role::*;
    let e = EntryPoint::new;
    Ok(match task {
        TaskKind::Sat => vec![
            e(Conversion, "parse_dimacs", &["text"], "formula"),
            e(Predicate, "evaluate_formula", &["formula", "assignment"], "bool"),
            e(Enumeration, "enumerate_boolean", &["num_vars"], "assignments"),
            e(Aggregation, "can_evaluate", &["formula"], "assignment or none"),
        ],
        TaskKind::G24 => vec![
            e(Conversion, "parse_numbers", &["text"], "numbers"),
            e(Predicate, "evaluate_to_24", &["expression"], "bool"),
            e(Enumeration, "generate_expressions", &["n1", "n2", "n3", "n4"], "expressions"),
            e(Aggregation, "can_evaluate", &["n1", "n2", "n3", "n4"], "expression or none"),
        ],
        TaskKind::Bw | TaskKind::Logi => vec![
            e(Conversion, "parse_statement", &["text"], "initial state, goal"),
            e(Predicate, "check_goal", &["state", "goal"], "bool"),
            e(Enumeration, "generate_actions", &["state"], "actions"),
            e(Enumeration, "apply_action", &["state", "action"], "state"),
            e(Aggregation, "find_plan", &["initial state", "goal"], "plan"),
            e(Aggregation, "verify_plan", &["initial state", "goal", "plan"], "bool"),
        ],
        TaskKind::Enum => return Err(TemplateError::NoTemplate(task)),
    })
}

fn contract(task: TaskKind, answer: &str) -> String {
    let markers = required_entries(task)
        .expect("task has a template")
        .iter()
        .map(|e| format!("    # {}", e.marker()))
        .collect::<Vec<_>>()
        .join("\n");
    format!(
        "Write a single self-contained Python 3 program using only the standard library. \
It reads one instance from standard input and prints exactly one line to standard output: {answer} \
Print nothing else and exit with status 0.\n\n\
Put a comment line declaring each of the following functions directly above its definition, \
copied verbatim:\n{markers}\n\n\
Reply with the program inside one fenced code block."
    )
}

const SAT_DESCRIPTION: &str = "\
Task: Boolean satisfiability. The instance is a formula in conjunctive normal form written in \
DIMACS: comment lines start with `c`, the header `p cnf V C` gives the number of variables and \
clauses, and each clause is a list of nonzero integers closed by 0, where `k` is variable k and \
`-k` its negation. Convert the text into a list of clauses with a function `parse_dimacs`.";

const G24_DESCRIPTION: &str = "\
Task: the Game of 24. The instance is one line with four numbers separated by spaces. Combine \
all four numbers, each exactly once, with +, -, * and / and any parentheses, so that the value \
is exactly 24. Read the numbers with a function `parse_numbers`.";

const BW_DESCRIPTION: &str = "\
Task: Blocksworld planning. Blocks sit on the table or on one another and a single hand moves \
them. The instance is an English statement: the sentence beginning \"As initial conditions I have \
that\" lists facts of the forms \"the X block is clear\", \"the hand is empty\", \"the X block is on \
top of the Y block\" and \"the X block is on the table\", and the sentence beginning \"My goal is \
to have that\" lists the required \"on top of\" facts. Turn the statement into a state and a goal \
with a function `parse_statement`.\n\n\
Actions, each taking one minute:\n\
- \"pick up the X block\": X is clear, on the table, and the hand is empty.\n\
- \"unstack the X block from on top of the Y block\": X is clear, on Y, and the hand is empty.\n\
- \"put down the X block\": the hand holds X; X ends on the table.\n\
- \"stack the X block on top of the Y block\": the hand holds X and Y is clear.\n\
The plan has to use as few actions as possible.";

const LOGI_DESCRIPTION: &str = "\
Task: Logistics planning. Packages move between locations. Every location belongs to one city, \
some locations are airports, each city has one truck that drives only inside it, and airplanes \
fly between airports. The instance is an English statement: the sentence beginning \"As initial \
conditions I have that\" lists facts such as \"location_0_0 is an airport\", \"location_0_1 is in \
the city city_0\", \"truck_0 is at location_0_0\", \"airplane_0 is at location_1_0\" and \
\"package_0 is at location_0_1\"; the sentence beginning \"My goal is to have that\" lists where \
packages must end up. Turn the statement into a state and a goal with a function \
`parse_statement`.\n\n\
Actions:\n\
- \"load P into T at L\" and \"unload P from T at L\" for a truck or airplane T at location L.\n\
- \"drive T from L1 to L2 in C\" for a truck T between two locations of its city C.\n\
- \"fly A from L1 to L2\" for an airplane A between two airports.";

const PLAN_ANSWER: &str = "the plan's action sentences in order, separated by \"; \" \
(an empty line when the goal already holds).";

/// The plain synthesis template for `task`.
pub fn task_template(task: TaskKind) -> Result<PromptTemplate, TemplateError> {
    let (description, sections) = match task {
        TaskKind::Sat => (
            format!(
                "{SAT_DESCRIPTION}\n\n{}",
                contract(
                    task,
                    "a satisfying assignment as a list of Python booleans for variables 1 to V, \
such as `[True, False, True]`, or the word `UNSAT` when no assignment exists."
                )
            ),
            PeaSections {
                predicate: "Predicate: define `evaluate_formula(formula, assignment)`. It returns True exactly \
when every clause has at least one literal that the assignment makes true."
                    .into(),
                enumeration: "Enumeration: define `enumerate_boolean(num_vars)` as a generator that yields \
each of the 2^num_vars truth assignments in turn, never materializing them all at once."
                    .into(),
                aggregation: "Aggregation: define `can_evaluate(formula)`. It draws assignments from \
`enumerate_boolean`, tests each with `evaluate_formula`, and returns the first one that passes, \
or None after the last. The program's main block calls `parse_dimacs` on the input, then \
`can_evaluate`, and prints the answer line."
                    .into(),
            },
        ),
        TaskKind::G24 => (
            format!(
                "{G24_DESCRIPTION}\n\n{}",
                contract(
                    task,
                    "one expression that reaches 24 inside square brackets, such as `[(1+2+3)*4]`, \
or the word `cannot` when no expression reaches 24."
                )
            ),
            PeaSections {
                predicate: "Predicate: define `evaluate_to_24(expression)`. It returns True when the \
expression's value is 24. Division by zero means False, and the comparison must not suffer from \
floating-point rounding, so use exact fractions."
                    .into(),
                enumeration: "Enumeration: define `generate_expressions(n1, n2, n3, n4)` yielding every \
expression over the four numbers: each ordering of the numbers, each of the four operators in \
each of the three operator slots, and each way of parenthesizing."
                    .into(),
                aggregation: "Aggregation: define `can_evaluate(n1, n2, n3, n4)`. It passes the expressions \
from `generate_expressions` to `evaluate_to_24` and returns the first success, or None when none \
succeeds. The main block reads the numbers with `parse_numbers`, calls `can_evaluate` and prints \
the answer line."
                    .into(),
            },
        ),
        TaskKind::Bw | TaskKind::Logi => {
            let (desc, state_hint) = if task == TaskKind::Bw {
                (BW_DESCRIPTION, "what each block rests on, which blocks are clear, and what the hand holds")
            } else {
                (LOGI_DESCRIPTION, "where every package, truck and airplane is")
            };
            (
                format!("{desc}\n\n{}", contract(task, PLAN_ANSWER)),
                PeaSections {
                    predicate: format!(
                        "Predicate: a state records {state_hint}. Define `check_goal(state, goal)` \
returning True when the state meets every goal fact."
                    ),
                    enumeration: "Enumeration: define `generate_actions(state)` returning every action \
whose preconditions hold in the state, as the action sentences above, and \
`apply_action(state, action)` returning the successor state without changing its argument."
                        .into(),
                    aggregation: "Aggregation: define `find_plan(initial_state, goal)` that runs a \
breadth-first search over states using `generate_actions`, `apply_action` and `check_goal`, \
remembers visited states, and returns the shortest list of actions reaching the goal. Also define \
`verify_plan(initial_state, goal, plan)` that replays the plan, rejects an action whose \
preconditions fail, and returns whether the final state meets the goal. The main block parses the \
input, finds a plan, checks it with `verify_plan`, and prints the answer line."
                        .into(),
                },
            )
        }
        TaskKind::Enum => return Err(TemplateError::NoTemplate(task)),
    };
    build_template(&description, sections)
}

/// Question asking for a way to cut down the enumeration for `task`.
pub fn strategy_prompt(task: TaskKind) -> Result<String, TemplateError> {
    let template = task_template(task)?;
    Ok(format!(
        "{}\n\nDo not write code yet. A program for this task will generate candidates and test each \
one. Describe in a few short sentences how to generate fewer candidates without losing any \
answer, such as symmetries to exploit, duplicates to skip, or constraints to check early.\n",
        template.problem_description.split("\n\n").next().unwrap_or_default()
    ))
}

/// Marker lines for `task`, in declaration order.
pub fn manifest_block(task: TaskKind, comment: &str) -> Result<String, TemplateError> {
    Ok(required_entries(task)?
        .iter()
        .map(|e| format!("{comment} {}\n", e.marker()))
        .collect())
}
