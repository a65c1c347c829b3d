//! CNF satisfiability and tautology checking by assignment enumeration.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::pea::{self, PeaProblem};

/// A possibly negated variable. Variables are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: u32,
    negated: bool,
}

impl Literal {
    pub fn new(var: u32, negated: bool) -> Self {
        assert!(var >= 1, "variables are numbered from 1");
        Literal { var, negated }
    }

    pub fn pos(var: u32) -> Self {
        Self::new(var, false)
    }

    pub fn neg(var: u32) -> Self {
        Self::new(var, true)
    }

    /// From a signed DIMACS literal; `None` for zero.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 {
            return None;
        }
        let var = u32::try_from(lit.unsigned_abs()).ok()?;
        Some(Literal::new(var, lit < 0))
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    fn index(self) -> usize {
        self.var as usize - 1
    }

    fn holds(self, values: &[bool]) -> bool {
        values[self.index()] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-{}", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("literal {literal} in clause {clause} exceeds the variable count {num_vars}")]
    LiteralOutOfRange {
        clause: usize,
        literal: Literal,
        num_vars: u32,
    },
    #[error("assignment has {got} values but the formula has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<Literal>>) -> Result<Self, SatError> {
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(SatError::EmptyClause(i));
            }
            if let Some(&literal) = clause.iter().find(|l| l.var() > num_vars) {
                return Err(SatError::LiteralOutOfRange {
                    clause: i,
                    literal,
                    num_vars,
                });
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn to_dimacs(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Truth values indexed by variable number minus one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Renders as `[True, False, ...]`.
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(if *v { "True" } else { "False" })?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatVerdict {
    Sat(Assignment),
    Unsat,
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatVerdict::Sat(_))
    }
}

/// Renders the answer line: a bracketed True/False list or `UNSAT`.
impl fmt::Display for SatVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatVerdict::Sat(a) => write!(f, "{a}"),
            SatVerdict::Unsat => f.write_str("UNSAT"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TautologyVerdict {
    Valid,
    Invalid { counterexample: Assignment },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsErrorKind {
    #[error("clause data before the `p cnf` header")]
    MissingHeader,
    #[error("malformed header `{0}`")]
    MalformedHeader(String),
    #[error("second `p` header")]
    DuplicateHeader,
    #[error("invalid literal token `{0}`")]
    InvalidToken(String),
    #[error("literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange { literal: i64, num_vars: u32 },
    #[error("empty clause")]
    EmptyClause,
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct DimacsError {
    pub line: usize,
    pub kind: DimacsErrorKind,
}

/// Parses DIMACS CNF text.
///
/// Comment lines start with `c`. Clauses are zero-terminated and may span
/// lines; a final clause missing its terminator is accepted. A line starting
/// with `%` ends the clause data, as in the SATLIB distribution files.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        let err = |kind| DimacsError { line: line_no, kind };
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(DimacsErrorKind::DuplicateHeader));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", vars, count] => vars.parse::<u32>().ok().zip(count.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| err(DimacsErrorKind::MalformedHeader(line.into())))?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err(DimacsErrorKind::MissingHeader));
        };
        for token in line.split_whitespace() {
            let lit: i64 = token
                .parse()
                .map_err(|_| err(DimacsErrorKind::InvalidToken(token.into())))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(err(DimacsErrorKind::EmptyClause));
                }
                clauses.push(core::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() > u64::from(num_vars) {
                return Err(err(DimacsErrorKind::LiteralOutOfRange { literal: lit, num_vars }));
            }
            // in range, so the conversion cannot fail
            current.push(Literal::from_dimacs(lit).expect("non-zero literal"));
        }
    }

    let Some((num_vars, declared)) = header else {
        return Err(DimacsError {
            line: last_line,
            kind: DimacsErrorKind::MissingHeader,
        });
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared {
        return Err(DimacsError {
            line: last_line,
            kind: DimacsErrorKind::ClauseCountMismatch {
                declared,
                found: clauses.len(),
            },
        });
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Conjunction over clauses of the disjunction over their literals.
pub fn eval_formula(formula: &CnfFormula, assignment: &Assignment) -> Result<bool, SatError> {
    if assignment.len() != formula.num_vars as usize {
        return Err(SatError::LengthMismatch {
            expected: formula.num_vars as usize,
            got: assignment.len(),
        });
    }
    Ok(satisfies(formula, assignment.values()))
}

fn satisfies(formula: &CnfFormula, values: &[bool]) -> bool {
    formula
        .clauses
        .iter()
        .all(|clause| clause.iter().any(|lit| lit.holds(values)))
}

/// All `2^n` assignments in binary counting order: `false < true`, variable 1
/// the most significant position.
#[derive(Debug, Clone)]
pub struct Assignments {
    num_vars: u32,
    next: u128,
    end: u128,
}

pub fn enumerate_assignments(num_vars: u32) -> Assignments {
    assert!(num_vars < 128, "at most 127 variables can be enumerated");
    Assignments {
        num_vars,
        next: 0,
        end: 1u128 << num_vars,
    }
}

impl Iterator for Assignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.next >= self.end {
            return None;
        }
        let n = self.num_vars;
        let code = self.next;
        self.next += 1;
        Some(Assignment(
            (0..n).map(|i| (code >> (n - 1 - i)) & 1 == 1).collect(),
        ))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match usize::try_from(self.end - self.next) {
            Ok(n) => (n, Some(n)),
            Err(_) => (usize::MAX, None),
        }
    }
}

/// Satisfiability as a PEA problem: candidates are assignments, the
/// predicate is formula evaluation.
pub struct SatSearch<'f> {
    pub formula: &'f CnfFormula,
}

impl PeaProblem for SatSearch<'_> {
    type Candidate = Assignment;
    type Candidates<'a>
        = Assignments
    where
        Self: 'a;

    fn enumerate(&self) -> Assignments {
        enumerate_assignments(self.formula.num_vars)
    }

    fn predicate(&self, candidate: &Assignment) -> bool {
        satisfies(self.formula, candidate.values())
    }
}

/// Returns the first satisfying assignment in enumeration order.
pub fn solve_sat(formula: &CnfFormula) -> SatVerdict {
    match pea::first_witness(&SatSearch { formula }) {
        Some(a) => SatVerdict::Sat(a),
        None => SatVerdict::Unsat,
    }
}

/// Returns the first falsifying assignment in enumeration order, if any.
pub fn check_tautology(formula: &CnfFormula) -> TautologyVerdict {
    match pea::first_counterexample(&SatSearch { formula }) {
        Some(counterexample) => TautologyVerdict::Invalid { counterexample },
        None => TautologyVerdict::Valid,
    }
}

/// Independent decision procedure: unit propagation with chronological
/// branching. Unassigned variables in a witness are set to false.
pub fn dpll_oracle(formula: &CnfFormula) -> SatVerdict {
    let mut values: Vec<Option<bool>> = alloc::vec![None; formula.num_vars as usize];
    if dpll(&formula.clauses, &mut values) {
        SatVerdict::Sat(Assignment(values.into_iter().map(|v| v.unwrap_or(false)).collect()))
    } else {
        SatVerdict::Unsat
    }
}

enum ClauseState {
    Satisfied,
    Conflict,
    Unit(Literal),
    Open(Literal),
}

fn clause_state(clause: &[Literal], values: &[Option<bool>]) -> ClauseState {
    let mut free = None;
    let mut free_count = 0;
    for &lit in clause {
        match values[lit.index()] {
            Some(v) if v != lit.negated => return ClauseState::Satisfied,
            Some(_) => {}
            None => {
                free_count += 1;
                free.get_or_insert(lit);
            }
        }
    }
    match (free, free_count) {
        (None, _) => ClauseState::Conflict,
        (Some(l), 1) => ClauseState::Unit(l),
        (Some(l), _) => ClauseState::Open(l),
    }
}

fn dpll(clauses: &[Vec<Literal>], values: &mut Vec<Option<bool>>) -> bool {
    let mut trail: Vec<usize> = Vec::new();
    let undo = |values: &mut Vec<Option<bool>>, trail: &[usize]| {
        for &i in trail {
            values[i] = None;
        }
    };

    // propagate to fixpoint
    let branch = loop {
        let mut changed = false;
        let mut branch = None;
        for clause in clauses {
            match clause_state(clause, values) {
                ClauseState::Satisfied => {}
                ClauseState::Conflict => {
                    undo(values, &trail);
                    return false;
                }
                ClauseState::Unit(lit) => {
                    values[lit.index()] = Some(!lit.negated);
                    trail.push(lit.index());
                    changed = true;
                }
                ClauseState::Open(lit) => {
                    branch.get_or_insert(lit);
                }
            }
        }
        if !changed {
            break branch;
        }
    };

    let Some(lit) = branch else {
        return true;
    };
    for value in [true, false] {
        values[lit.index()] = Some(value);
        if dpll(clauses, values) {
            return true;
        }
    }
    values[lit.index()] = None;
    undo(values, &trail);
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognized SAT answer `{0}`")]
pub struct SatAnswerError(pub String);

/// Reads an answer line as produced by [`SatVerdict`]'s `Display`.
/// Case-insensitive; `1`/`0` are accepted for truth values.
pub fn parse_sat_answer(text: &str) -> Result<SatVerdict, SatAnswerError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("unsat") {
        return Ok(SatVerdict::Unsat);
    }
    let bad = || SatAnswerError(t.into());
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(bad)?;
    if inner.trim().is_empty() {
        return Ok(SatVerdict::Sat(Assignment(Vec::new())));
    }
    inner
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            if tok.eq_ignore_ascii_case("true") || tok == "1" {
                Ok(true)
            } else if tok.eq_ignore_ascii_case("false") || tok == "0" {
                Ok(false)
            } else {
                Err(bad())
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(|v| SatVerdict::Sat(Assignment(v)))
}
