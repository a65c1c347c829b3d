#![allow(dead_code)]

use std::path::PathBuf;

use pea::task::TaskKind;
use pea::templates::required_entries;

pub const PY_SAT: &str = include_str!("../fixtures/sat_candidate.py");

pub fn pea_exe() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_pea"))
}

pub fn fenced(lang: &str, code: &str) -> String {
    format!("Here is the program.\n\n```{lang}\n{code}```\n")
}

/// The built-in solver packaged as a shell candidate: every declared part
/// hands the instance to `pea solve`.
pub fn reference_script(task: TaskKind) -> String {
    let entries = required_entries(task).unwrap();
    let mut out = format!("#!/bin/sh\nPEA='{}'\n", pea_exe().display());
    for e in &entries {
        let body = if e.role == pea::candidate::Role::Conversion {
            "cat".to_string()
        } else {
            format!("\"$PEA\" solve --task {task}")
        };
        out.push_str(&format!("# {}\n{}() {{\n  {body}\n}}\n", e.marker(), e.name));
    }
    let convert = &entries[0].name;
    let aggregate = &entries.iter().find(|e| e.role == pea::candidate::Role::Aggregation).unwrap().name;
    out.push_str(&format!("{convert} | {aggregate}\n"));
    out
}

/// A candidate that never answers.
pub fn sleeper(task: TaskKind) -> String {
    reference_script(task).replace("\"$PEA\" solve", "sleep 1000; \"$PEA\" solve")
}

/// A candidate whose declared parts are all present but which prints `answer`.
pub fn constant(task: TaskKind, answer: &str) -> String {
    let s = reference_script(task);
    let (body, _) = s.rsplit_once('\n').unwrap();
    let (body, _) = body.rsplit_once('\n').unwrap();
    format!("{body}\necho '{answer}'\n")
}
