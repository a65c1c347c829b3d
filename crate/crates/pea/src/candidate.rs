//! Candidate programs and their execution in child processes.
//!
//! A candidate reads one instance document on standard input and writes
//! its answer on standard output. A nonzero exit status is a crash. Entry
//! points are declared in the source with marker lines of the form
//!
//! ```text
//! PEA-ENTRY <role> <name> (<input>, ...) -> <output>
//! ```
//!
//! usually inside comments.

use std::fmt;
use std::io::{Read, Write};
use std::os::unix::process::CommandExt;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitStatus, Stdio};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ENTRY_MARKER: &str = "PEA-ENTRY";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Conversion,
    Predicate,
    Enumeration,
    Aggregation,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::Conversion, Role::Predicate, Role::Enumeration, Role::Aggregation];

    pub fn name(self) -> &'static str {
        match self {
            Role::Conversion => "conversion",
            Role::Predicate => "predicate",
            Role::Enumeration => "enumeration",
            Role::Aggregation => "aggregation",
        }
    }

    fn parse(s: &str) -> Option<Role> {
        Role::ALL.into_iter().find(|r| r.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One declared entry point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryPoint {
    pub role: Role,
    pub name: String,
    pub inputs: Vec<String>,
    pub output: String,
}

impl EntryPoint {
    pub fn new(role: Role, name: &str, inputs: &[&str], output: &str) -> Self {
        EntryPoint {
            role,
            name: name.into(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            output: output.into(),
        }
    }

    /// The marker line declaring this entry point.
    pub fn marker(&self) -> String {
        format!(
            "{ENTRY_MARKER} {} {} ({}) -> {}",
            self.role,
            self.name,
            self.inputs.join(", "),
            self.output
        )
    }

    /// Same name and the same input and output descriptions, ignoring case
    /// and spacing.
    pub fn matches(&self, other: &EntryPoint) -> bool {
        let norm = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
        self.role == other.role
            && self.name == other.name
            && self.inputs.len() == other.inputs.len()
            && self.inputs.iter().zip(&other.inputs).all(|(a, b)| norm(a) == norm(b))
            && norm(&self.output) == norm(&other.output)
    }
}

/// Entry points declared in a source text. A malformed marker line is
/// kept as an error string rather than dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<EntryPoint>,
    pub malformed: Vec<String>,
}

impl Manifest {
    pub fn parse(source: &str) -> Manifest {
        let mut manifest = Manifest::default();
        for line in source.lines() {
            let Some(at) = line.find(ENTRY_MARKER) else { continue };
            let decl = line[at + ENTRY_MARKER.len()..].trim();
            match parse_entry(decl) {
                Some(e) => manifest.entries.push(e),
                None => manifest.malformed.push(line.trim().to_string()),
            }
        }
        manifest
    }

    pub fn entry(&self, role: Role) -> Option<&EntryPoint> {
        self.entries.iter().find(|e| e.role == role)
    }
}

fn parse_entry(decl: &str) -> Option<EntryPoint> {
    let (head, output) = decl.split_once("->")?;
    let open = head.find('(')?;
    let close = head.rfind(')')?;
    let mut words = head[..open].split_whitespace();
    let role = Role::parse(words.next()?)?;
    let name = words.next()?.to_string();
    if words.next().is_some() || close < open {
        return None;
    }
    let inputs = head[open + 1..close]
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    let output = output.trim().trim_end_matches("*/").trim().to_string();
    (!output.is_empty()).then_some(EntryPoint {
        role,
        name,
        inputs,
        output,
    })
}

/// How a candidate is started.
#[derive(Clone, Debug)]
pub enum Executable {
    /// Source written to a private temporary file and run by an interpreter.
    Script {
        interpreter: Vec<String>,
        path: PathBuf,
        dir: Arc<tempfile::TempDir>,
    },
    /// An external command line.
    Command(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct CandidateProgram {
    source_text: String,
    manifest: Manifest,
    executable: Executable,
}

#[derive(Debug, Error)]
pub enum CandidateError {
    #[error("candidate source is empty")]
    EmptySource,
    #[error("cannot materialize candidate: {0}")]
    Io(#[from] std::io::Error),
    #[error("empty command line")]
    EmptyCommand,
}

/// The code inside the first fenced block of a chat response, with the
/// block's language tag. Text without fences is returned whole.
pub fn extract_code(response: &str) -> (Option<String>, String) {
    let mut lines = response.lines();
    while let Some(line) = lines.next() {
        let t = line.trim_start();
        if let Some(tag) = t.strip_prefix("```") {
            let tag = tag.trim();
            let mut body = Vec::new();
            for l in lines.by_ref() {
                if l.trim_start().starts_with("```") {
                    break;
                }
                body.push(l);
            }
            let lang = (!tag.is_empty()).then(|| tag.to_ascii_lowercase());
            return (lang, body.join("\n") + "\n");
        }
    }
    (None, response.to_string())
}

fn interpreter_for(lang: Option<&str>, code: &str, hint: Option<&Path>) -> Vec<String> {
    if let Some(shebang) = code.lines().next().and_then(|l| l.strip_prefix("#!")) {
        return shebang.split_whitespace().map(String::from).collect();
    }
    let ext = hint.and_then(|p| p.extension()).and_then(|e| e.to_str());
    let word = match lang.or(ext) {
        Some("sh") => "sh",
        Some("bash") => "bash",
        Some("perl" | "pl") => "perl",
        Some("ruby" | "rb") => "ruby",
        Some("node" | "js" | "javascript") => "node",
        // generated programs are Python unless stated otherwise
        _ => "python3",
    };
    vec![word.to_string()]
}

impl CandidateProgram {
    /// Builds a candidate from a chat response or a source file's text.
    /// The interpreter comes from a shebang line, the fence language, or
    /// the extension of `hint`, in that order; Python is the default.
    pub fn from_source(text: &str, hint: Option<&Path>) -> Result<Self, CandidateError> {
        let (lang, code) = extract_code(text);
        if code.trim().is_empty() {
            return Err(CandidateError::EmptySource);
        }
        let interpreter = interpreter_for(lang.as_deref(), &code, hint);
        let dir = tempfile::Builder::new().prefix("pea-candidate").tempdir()?;
        let name = match interpreter.last().map(String::as_str) {
            Some("python3") | Some("python") => "candidate.py",
            Some("sh") | Some("bash") => "candidate.sh",
            _ => "candidate",
        };
        let path = dir.path().join(name);
        std::fs::write(&path, &code)?;
        Ok(CandidateProgram {
            manifest: Manifest::parse(&code),
            source_text: code,
            executable: Executable::Script {
                interpreter,
                path,
                dir: Arc::new(dir),
            },
        })
    }

    /// Wraps an existing command; `source_text` is whatever describes it
    /// (its manifest markers are read from there).
    pub fn from_command(argv: Vec<String>, source_text: &str) -> Result<Self, CandidateError> {
        if argv.is_empty() {
            return Err(CandidateError::EmptyCommand);
        }
        Ok(CandidateProgram {
            manifest: Manifest::parse(source_text),
            source_text: source_text.to_string(),
            executable: Executable::Command(argv),
        })
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn executable(&self) -> &Executable {
        &self.executable
    }

    fn command(&self) -> Command {
        match &self.executable {
            Executable::Script { interpreter, path, .. } => {
                let mut c = Command::new(&interpreter[0]);
                c.args(&interpreter[1..]).arg(path);
                c
            }
            Executable::Command(argv) => {
                let mut c = Command::new(&argv[0]);
                c.args(&argv[1..]);
                c
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RunOutcome {
    /// Trimmed standard output of a clean exit.
    Answer { text: String },
    Timeout,
    Crash {
        code: Option<i32>,
        signal: Option<i32>,
        stderr: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub outcome: RunOutcome,
    pub wall_seconds: f64,
}

const POLL: Duration = Duration::from_millis(2);
const STDERR_KEEP: usize = 4096;

fn crash_from(status: ExitStatus, stderr: String) -> RunOutcome {
    use std::os::unix::process::ExitStatusExt;
    RunOutcome::Crash {
        code: status.code(),
        signal: status.signal(),
        stderr,
    }
}

fn spawn_reader<R: Read + Send + 'static>(mut pipe: R) -> thread::JoinHandle<Vec<u8>> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = pipe.read_to_end(&mut buf);
        buf
    })
}

/// Runs `candidate` on one instance. The child gets its own process group,
/// and the whole group is killed once `timeout` elapses.
pub fn run_candidate(candidate: &CandidateProgram, instance: &str, timeout: Duration) -> RunResult {
    let start = Instant::now();
    let mut cmd = candidate.command();
    cmd.stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0);
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => {
            return RunResult {
                outcome: RunOutcome::Crash {
                    code: None,
                    signal: None,
                    stderr: format!("failed to start: {e}"),
                },
                wall_seconds: start.elapsed().as_secs_f64(),
            }
        }
    };
    let pid = child.id() as libc::pid_t;

    let mut stdin = child.stdin.take().expect("stdin is piped");
    let input = instance.as_bytes().to_vec();
    // a candidate that never reads must not block us
    let writer = thread::spawn(move || {
        let _ = stdin.write_all(&input);
    });
    let stdout = spawn_reader(child.stdout.take().expect("stdout is piped"));
    let stderr = spawn_reader(child.stderr.take().expect("stderr is piped"));

    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if start.elapsed() >= timeout => break None,
            Ok(None) => thread::sleep(POLL),
            Err(_) => break None,
        }
    };
    // Reap the whole group either way, so helpers the candidate started
    // cannot hold the pipes open.
    // SAFETY: kill(2) on a negative pid signals the process group we
    // created for this child; it has no memory-safety preconditions.
    unsafe {
        libc::kill(-pid, libc::SIGKILL);
    }
    let status = match status {
        Some(s) => Some(s),
        None => {
            let _ = child.kill();
            let _ = child.wait();
            None
        }
    };
    let wall_seconds = start.elapsed().as_secs_f64();
    let _ = writer.join();
    let out = stdout.join().unwrap_or_default();
    let mut err = stderr.join().unwrap_or_default();
    err.truncate(STDERR_KEEP);
    let err = String::from_utf8_lossy(&err).into_owned();

    let outcome = match status {
        None => RunOutcome::Timeout,
        Some(s) if !s.success() => crash_from(s, err),
        Some(_) => match String::from_utf8(out) {
            Ok(text) => RunOutcome::Answer {
                text: text.trim().to_string(),
            },
            Err(_) => RunOutcome::Crash {
                code: Some(0),
                signal: None,
                stderr: "output is not UTF-8".into(),
            },
        },
    };
    RunResult { outcome, wall_seconds }
}
