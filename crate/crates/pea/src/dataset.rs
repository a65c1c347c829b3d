//! Loading benchmark datasets from disk.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use thiserror::Error;

use crate::task::{parse_instance, Instance, Payload, TaskKind};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset path {0} does not exist")]
    Missing(PathBuf),
    #[error("dataset at {0} contains no instances")]
    Empty(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{} instance(s) failed to parse:\n{}", .0.len(), format_failures(.0))]
    Parse(Vec<(String, String)>),
    #[error("{0}")]
    Format(String),
}

fn format_failures(failures: &[(String, String)]) -> String {
    failures
        .iter()
        .map(|(id, e)| format!("  {id}: {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn read(path: &Path) -> Result<String, DatasetError> {
    fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Sorted regular files of a directory, skipping hidden files.
fn dir_files(dir: &Path) -> Result<Vec<PathBuf>, DatasetError> {
    let entries = fs::read_dir(dir).map_err(|source| DatasetError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| DatasetError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        let hidden = path.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.'));
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort_by(|a, b| natural_key(a).cmp(&natural_key(b)));
    Ok(files)
}

/// File name split into text and number runs, so `uf20-10` sorts after
/// `uf20-9`.
fn natural_key(path: &Path) -> Vec<(String, u128)> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    let mut key = Vec::new();
    let mut text = String::new();
    let mut chars = name.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_ascii_digit() {
            let mut digits = String::from(c);
            while let Some(d) = chars.next_if(char::is_ascii_digit) {
                digits.push(d);
            }
            key.push((std::mem::take(&mut text), digits.parse().unwrap_or(u128::MAX)));
        } else {
            text.push(c);
        }
    }
    key.push((text, 0));
    key
}

fn file_id(path: &Path) -> String {
    path.file_name()
        .and_then(|n| n.to_str())
        .map(String::from)
        .unwrap_or_else(|| path.display().to_string())
}

/// Loads every instance of `task` found at `path`.
///
/// * SAT: a DIMACS file, or a directory of them.
/// * G24: a text file with one instance of four numbers per line, or a CSV
///   file with a `Puzzles` column.
/// * BW / LOGI: a statement file, a directory of them, or a JSON file with
///   an `instances` array of objects carrying `query` (and optionally
///   `instance_id` and `ground_truth_plan`).
///
/// Instances whose id is in `exclude` are dropped; that is how a fixture
/// used for validation is kept out of the evaluation set.
pub fn load_dataset(task: TaskKind, path: &Path, exclude: &BTreeSet<String>) -> Result<Vec<Instance>, DatasetError> {
    if !path.exists() {
        return Err(DatasetError::Missing(path.to_path_buf()));
    }
    let mut documents: Vec<(String, String, Option<usize>)> = Vec::new();
    match task {
        TaskKind::Enum => {
            return Err(DatasetError::Format("the enumeration task has no dataset".into()));
        }
        TaskKind::G24 => {
            let text = read(path)?;
            documents = g24_lines(&text)?;
        }
        TaskKind::Sat | TaskKind::Bw | TaskKind::Logi => {
            if path.is_dir() {
                for file in dir_files(path)? {
                    documents.push((file_id(&file), read(&file)?, None));
                }
            } else if task != TaskKind::Sat && path.extension().is_some_and(|e| e == "json") {
                documents = json_instances(&read(path)?)?;
            } else {
                documents.push((file_id(path), read(path)?, None));
            }
        }
    }

    let mut instances = Vec::new();
    let mut failures = Vec::new();
    for (id, text, shipped_len) in documents {
        if exclude.contains(&id) {
            continue;
        }
        match parse_instance(task, id.clone(), &text) {
            Ok(mut instance) => {
                if let Payload::Bw { reference_len, .. } = &mut instance.payload {
                    *reference_len = reference_len.or(shipped_len);
                }
                instances.push(instance);
            }
            Err(e) => failures.push((id, e)),
        }
    }
    if !failures.is_empty() {
        return Err(DatasetError::Parse(failures));
    }
    if instances.is_empty() {
        return Err(DatasetError::Empty(path.to_path_buf()));
    }
    Ok(instances)
}

fn g24_lines(text: &str) -> Result<Vec<(String, String, Option<usize>)>, DatasetError> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or_default();
    if first.split(',').any(|h| h.trim().eq_ignore_ascii_case("puzzles")) {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| DatasetError::Format(e.to_string()))?.clone();
        let column = headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case("puzzles"))
            .expect("header checked above");
        let mut out = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| DatasetError::Format(e.to_string()))?;
            let cell = record.get(column).unwrap_or_default();
            out.push((format!("row {}", i + 1), cell.to_string(), None));
        }
        return Ok(out);
    }
    Ok(text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| (format!("line {}", i + 1), l.to_string(), None))
        .collect())
}

fn json_instances(text: &str) -> Result<Vec<(String, String, Option<usize>)>, DatasetError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DatasetError::Format(e.to_string()))?;
    let list = match &value {
        Value::Array(items) => items,
        Value::Object(map) => match map.get("instances") {
            Some(Value::Array(items)) => items,
            _ => return Err(DatasetError::Format("JSON dataset lacks an `instances` array".into())),
        },
        _ => return Err(DatasetError::Format("JSON dataset must be an array or object".into())),
    };
    let mut out = Vec::new();
    for (i, item) in list.iter().enumerate() {
        let query = item
            .get("query")
            .and_then(Value::as_str)
            .ok_or_else(|| DatasetError::Format(format!("instance {} has no `query` text", i + 1)))?;
        let id = match item.get("instance_id") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => format!("instance {}", i + 1),
        };
        // shipped plans are one action per line, in either sentence or
        // parenthesized form; only their length is used
        let shipped_len = item
            .get("ground_truth_plan")
            .and_then(Value::as_str)
            .map(|p| {
                p.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with(';') && !l.starts_with("[PLAN"))
                    .count()
            });
        out.push((id, query.to_string(), shipped_len));
    }
    Ok(out)
}
