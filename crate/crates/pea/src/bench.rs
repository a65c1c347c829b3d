//! Running a solver over a dataset and tallying the results.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::candidate::{run_candidate, CandidateProgram, RunOutcome};
use crate::judge::{judge, Claim};
use crate::native::solve_native;
use crate::task::{Instance, TaskKind};

/// What a solver produced for one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveAttempt {
    Answer(String),
    Timeout,
    Error(String),
}

pub trait InstanceSolver: Sync {
    fn solve(&self, instance: &Instance, timeout: Duration) -> SolveAttempt;

    fn label(&self) -> String;
}

/// The built-in reference solvers, each run on a helper thread so the
/// timeout can be enforced. A timed-out search is abandoned, not stopped;
/// its thread finishes in the background.
pub struct NativeSolver;

impl InstanceSolver for NativeSolver {
    fn solve(&self, instance: &Instance, timeout: Duration) -> SolveAttempt {
        let (tx, rx) = mpsc::channel();
        let owned = instance.clone();
        thread::spawn(move || {
            let _ = tx.send(solve_native(&owned));
        });
        match rx.recv_timeout(timeout) {
            Ok(Ok(answer)) => SolveAttempt::Answer(answer),
            Ok(Err(e)) => SolveAttempt::Error(e),
            Err(mpsc::RecvTimeoutError::Timeout) => SolveAttempt::Timeout,
            Err(mpsc::RecvTimeoutError::Disconnected) => SolveAttempt::Error("solver thread panicked".into()),
        }
    }

    fn label(&self) -> String {
        "native".into()
    }
}

/// A synthesized or hand-written program run once per instance.
pub struct CandidateSolver(pub CandidateProgram);

impl InstanceSolver for CandidateSolver {
    fn solve(&self, instance: &Instance, timeout: Duration) -> SolveAttempt {
        match run_candidate(&self.0, &instance.text, timeout).outcome {
            RunOutcome::Answer { text } => SolveAttempt::Answer(text),
            RunOutcome::Timeout => SolveAttempt::Timeout,
            RunOutcome::Crash { code, signal, stderr } => {
                let last = stderr.lines().rev().find(|l| !l.trim().is_empty()).unwrap_or_default();
                SolveAttempt::Error(format!("crash (code {code:?}, signal {signal:?}) {last}").trim().to_string())
            }
        }
    }

    fn label(&self) -> String {
        "candidate".into()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Correct,
    Incorrect,
    Timeout,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub id: String,
    pub outcome: Outcome,
    pub wall_seconds: f64,
    pub answer: Option<String>,
    pub claim: Option<Claim>,
    /// Why the answer was rejected, or the solver's error.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tallies {
    pub correct: usize,
    pub incorrect: usize,
    pub timeout: usize,
    pub error: usize,
    /// Correct SAT answers that gave an assignment.
    pub sat_correct: usize,
    /// Correct SAT answers that claimed unsatisfiability.
    pub unsat_correct: usize,
}

impl Tallies {
    pub fn from_results(results: &[InstanceResult]) -> Tallies {
        let mut t = Tallies::default();
        for r in results {
            match r.outcome {
                Outcome::Correct => t.correct += 1,
                Outcome::Incorrect => t.incorrect += 1,
                Outcome::Timeout => t.timeout += 1,
                Outcome::Error => t.error += 1,
            }
            match (r.outcome, r.claim) {
                (Outcome::Correct, Some(Claim::Satisfiable)) => t.sat_correct += 1,
                (Outcome::Correct, Some(Claim::Unsatisfiable)) => t.unsat_correct += 1,
                _ => {}
            }
        }
        t
    }

    pub fn total(&self) -> usize {
        self.correct + self.incorrect + self.timeout + self.error
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub task: TaskKind,
    pub mode: String,
    pub workers: usize,
    pub timeout_seconds: f64,
    pub results: Vec<InstanceResult>,
    pub tallies: Tallies,
    pub synthesis_seconds: f64,
}

impl BenchReport {
    pub fn instance_count(&self) -> usize {
        self.results.len()
    }

    pub fn mean_wall_seconds(&self) -> f64 {
        self.results.iter().map(|r| r.wall_seconds).sum::<f64>() / self.results.len() as f64
    }

    /// Mean solving time plus the one-off synthesis cost spread over all
    /// instances.
    pub fn amortized_seconds(&self) -> f64 {
        self.mean_wall_seconds() + self.synthesis_seconds / self.results.len() as f64
    }

    /// `m+n` for SAT (satisfiable and unsatisfiable instances solved),
    /// otherwise the number of correct answers.
    pub fn accuracy_cell(&self) -> String {
        match self.task {
            TaskKind::Sat => format!("{}+{}", self.tallies.sat_correct, self.tallies.unsat_correct),
            _ => self.tallies.correct.to_string(),
        }
    }

    /// Timing is only reported for runs with one worker.
    pub fn timing_comparable(&self) -> bool {
        self.workers == 1
    }

    pub fn with_synthesis_seconds(mut self, seconds: f64) -> Self {
        self.synthesis_seconds = seconds;
        self
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("instance `{id}` belongs to task {found}, not {expected}")]
    WrongTask { id: String, expected: TaskKind, found: TaskKind },
    #[error("at least one worker is needed")]
    NoWorkers,
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub timeout: Duration,
    pub workers: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            timeout: Duration::from_secs(30),
            workers: 1,
        }
    }
}

fn run_one(instance: &Instance, solver: &dyn InstanceSolver, timeout: Duration) -> InstanceResult {
    let start = Instant::now();
    let attempt = solver.solve(instance, timeout);
    let mut wall_seconds = start.elapsed().as_secs_f64();
    let (outcome, answer, claim, detail) = match attempt {
        SolveAttempt::Answer(a) => match judge(instance, &a) {
            Ok(claim) => (Outcome::Correct, Some(a), Some(claim), None),
            Err(why) => (Outcome::Incorrect, Some(a), None, Some(why)),
        },
        SolveAttempt::Timeout => {
            wall_seconds = wall_seconds.max(timeout.as_secs_f64());
            (Outcome::Timeout, None, None, None)
        }
        SolveAttempt::Error(e) => (Outcome::Error, None, None, Some(e)),
    };
    InstanceResult {
        id: instance.id.clone(),
        outcome,
        wall_seconds,
        answer,
        claim,
        detail,
    }
}

/// Solves every instance under the timeout and judges the answers.
/// Results keep dataset order whatever the worker count.
pub fn run_benchmark(
    task: TaskKind,
    dataset: &[Instance],
    solver: &dyn InstanceSolver,
    options: &BenchOptions,
) -> Result<BenchReport, BenchError> {
    if dataset.is_empty() {
        return Err(BenchError::EmptyDataset);
    }
    if options.workers == 0 {
        return Err(BenchError::NoWorkers);
    }
    if let Some(bad) = dataset.iter().find(|i| i.task() != task) {
        return Err(BenchError::WrongTask {
            id: bad.id.clone(),
            expected: task,
            found: bad.task(),
        });
    }

    let results: Vec<InstanceResult> = if options.workers == 1 {
        dataset.iter().map(|i| run_one(i, solver, options.timeout)).collect()
    } else {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<InstanceResult>>> = Mutex::new(vec![None; dataset.len()]);
        thread::scope(|s| {
            for _ in 0..options.workers.min(dataset.len()) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(instance) = dataset.get(i) else { break };
                    let r = run_one(instance, solver, options.timeout);
                    slots.lock().expect("no worker panics while holding the lock")[i] = Some(r);
                });
            }
        });
        slots
            .into_inner()
            .expect("workers finished")
            .into_iter()
            .map(|r| r.expect("every slot filled"))
            .collect()
    };

    Ok(BenchReport {
        task,
        mode: solver.label(),
        workers: options.workers,
        timeout_seconds: options.timeout.as_secs_f64(),
        tallies: Tallies::from_results(&results),
        results,
        synthesis_seconds: 0.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Csv,
    Md,
}

pub const SUMMARY_COLUMNS: [&str; 11] = [
    "task",
    "mode",
    "instances",
    "accuracy",
    "correct",
    "incorrect",
    "timeout",
    "error",
    "mean_seconds",
    "synthesis_seconds",
    "amortized_seconds",
];

fn seconds(v: f64) -> String {
    format!("{v:.2}")
}

fn summary_row(report: &BenchReport) -> Vec<String> {
    let t = &report.tallies;
    let timing = |v: f64| if report.timing_comparable() { seconds(v) } else { "-".into() };
    vec![
        report.task.to_string(),
        report.mode.clone(),
        report.instance_count().to_string(),
        report.accuracy_cell(),
        t.correct.to_string(),
        t.incorrect.to_string(),
        t.timeout.to_string(),
        t.error.to_string(),
        timing(report.mean_wall_seconds()),
        seconds(report.synthesis_seconds),
        timing(report.amortized_seconds()),
    ]
}

/// The summary table. Seconds have two decimals; with more than one worker
/// the timing cells read `-`.
pub fn emit_report(report: &BenchReport, format: ReportFormat) -> String {
    let row = summary_row(report);
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(SUMMARY_COLUMNS).expect("writing to memory");
            w.write_record(&row).expect("writing to memory");
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
        }
        ReportFormat::Md => {
            let mut out = String::new();
            let _ = writeln!(out, "| {} |", SUMMARY_COLUMNS.join(" | "));
            let _ = writeln!(out, "|{}", " --- |".repeat(SUMMARY_COLUMNS.len()));
            let _ = writeln!(out, "| {} |", row.join(" | "));
            out
        }
    }
}

/// One row per instance: id, outcome, seconds, answer, detail.
pub fn emit_instances(report: &BenchReport, format: ReportFormat) -> String {
    let rows = report.results.iter().map(|r| {
        let outcome = serde_json::to_value(r.outcome)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        [
            r.id.clone(),
            outcome,
            seconds(r.wall_seconds),
            r.answer.clone().unwrap_or_default(),
            r.detail.clone().unwrap_or_default(),
        ]
    });
    let header = ["id", "outcome", "seconds", "answer", "detail"];
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("writing to memory");
            for row in rows {
                w.write_record(&row).expect("writing to memory");
            }
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
        }
        ReportFormat::Md => {
            let mut out = format!("| {} |\n|{}\n", header.join(" | "), " --- |".repeat(header.len()));
            for row in rows {
                let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|").replace('\n', " ")).collect();
                let _ = writeln!(out, "| {} |", cells.join(" | "));
            }
            out
        }
    }
}
