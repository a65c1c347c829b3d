//! Ground-truth enumerations and coverage scoring of enumerations written
//! out by someone else.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("tokens must be non-empty")]
    EmptyToken,
    #[error("token `{0}` contains whitespace")]
    Whitespace(String),
    #[error("item `{0}` appears more than once")]
    Duplicate(String),
    #[error("the power must be at least 1")]
    ZeroPower,
}

impl Token {
    pub fn new(text: impl Into<String>) -> Result<Self, EnumError> {
        let text = text.into();
        if text.is_empty() {
            return Err(EnumError::EmptyToken);
        }
        if text.contains(char::is_whitespace) {
            return Err(EnumError::Whitespace(text));
        }
        Ok(Token(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn check_distinct(items: &[Token]) -> Result<(), EnumError> {
    let mut seen = BTreeSet::new();
    for t in items {
        if !seen.insert(t) {
            return Err(EnumError::Duplicate(t.0.clone()));
        }
    }
    Ok(())
}

/// All orderings in lexicographic order, starting from the sorted items.
pub struct Permutations {
    current: Vec<Token>,
    done: bool,
}

impl Iterator for Permutations {
    type Item = Vec<Token>;

    fn next(&mut self) -> Option<Vec<Token>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // next lexicographic permutation
        let v = &mut self.current;
        match (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) {
            None => self.done = true,
            Some(i) => {
                let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
                v.swap(i - 1, j);
                v[i..].reverse();
            }
        }
        Some(out)
    }
}

pub fn permutations(items: &[Token]) -> Result<Permutations, EnumError> {
    check_distinct(items)?;
    let mut current = items.to_vec();
    current.sort();
    Ok(Permutations { current, done: false })
}

/// `pool^n` in odometer order: the last position turns fastest, each
/// position running through the pool in the given order.
pub struct CartesianPower {
    pool: Vec<Token>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for CartesianPower {
    type Item = Vec<Token>;

    fn next(&mut self) -> Option<Vec<Token>> {
        if self.done {
            return None;
        }
        let out = self.digits.iter().map(|&d| self.pool[d].clone()).collect();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.pool.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

pub fn cartesian_power(pool: &[Token], n: usize) -> Result<CartesianPower, EnumError> {
    check_distinct(pool)?;
    if n == 0 {
        return Err(EnumError::ZeroPower);
    }
    Ok(CartesianPower {
        done: pool.is_empty(),
        pool: pool.to_vec(),
        digits: alloc::vec![0; n],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub expected_count: usize,
    pub matched_count: usize,
    /// `matched_count / expected_count`; 1.0 for an empty expectation.
    pub fraction: f64,
    /// Non-blank response lines that contributed no expected tuple.
    pub unmatched_lines: usize,
}

fn strip_enumerator(line: &str) -> &str {
    let line = line.trim_start();
    for bullet in ["- ", "* ", "• "] {
        if let Some(rest) = line.strip_prefix(bullet) {
            return rest;
        }
    }
    let digits = line.bytes().take_while(u8::is_ascii_digit).count();
    if digits > 0 {
        let rest = &line[digits..];
        if let Some(rest) = rest.strip_prefix(". ").or_else(|| rest.strip_prefix(") ")) {
            return rest;
        }
        if let Some(rest) = rest.strip_prefix(":") {
            return rest;
        }
    }
    line
}

fn tokens(group: &str) -> Vec<&str> {
    group
        .split(|c: char| c == ',' || c.is_whitespace())
        .map(|t| t.trim_matches(|c| matches!(c, '\'' | '"' | '`')))
        .filter(|t| !t.is_empty())
        .collect()
}

/// Innermost bracketed groups of a line, or the whole line when it has
/// no brackets.
fn candidate_groups(line: &str) -> Vec<&str> {
    let mut groups = Vec::new();
    let mut open: Option<usize> = None;
    let mut any_bracket = false;
    for (i, c) in line.char_indices() {
        match c {
            '[' | '(' | '{' => {
                any_bracket = true;
                open = Some(i + 1);
            }
            ']' | ')' | '}' => {
                any_bracket = true;
                if let Some(start) = open.take() {
                    groups.push(&line[start..i]);
                }
            }
            _ => {}
        }
    }
    if !any_bracket {
        groups.push(line);
    }
    groups
}

/// Fraction of `expected` that appears in `response`.
///
/// Each line contributes its innermost bracketed groups, or the whole line
/// with any list numbering stripped. A group matches an expected tuple
/// when its tokens, split on commas and whitespace with quotes removed,
/// equal the tuple exactly and in order. Repeated matches count once.
pub fn score_coverage<I>(expected: I, response: &str) -> CoverageReport
where
    I: IntoIterator<Item = Vec<Token>>,
{
    let expected: BTreeSet<Vec<String>> = expected
        .into_iter()
        .map(|t| t.into_iter().map(|tok| tok.0).collect())
        .collect();
    let mut matched: BTreeSet<&Vec<String>> = BTreeSet::new();
    let mut unmatched_lines = 0;
    for line in response.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let mut hit = false;
        for group in candidate_groups(strip_enumerator(line)) {
            let key: Vec<String> = tokens(group).into_iter().map(String::from).collect();
            if let Some(e) = expected.get(&key) {
                matched.insert(e);
                hit = true;
            }
        }
        if !hit {
            unmatched_lines += 1;
        }
    }
    let expected_count = expected.len();
    let matched_count = matched.len();
    CoverageReport {
        expected_count,
        matched_count,
        fraction: if expected_count == 0 {
            1.0
        } else {
            matched_count as f64 / expected_count as f64
        },
        unmatched_lines,
    }
}

/// One tuple per line, tokens separated by `, `.
pub fn render_enumeration<I>(tuples: I) -> String
where
    I: IntoIterator<Item = Vec<Token>>,
{
    let mut out = String::new();
    for t in tuples {
        for (i, tok) in t.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&tok.0);
        }
        out.push('\n');
    }
    out
}

/// `count` distinct lowercase tokens of `len` letters.
pub fn random_tokens<R: Rng + ?Sized>(rng: &mut R, count: usize, len: usize) -> Vec<Token> {
    assert!(len > 0, "tokens need at least one letter");
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s: String = (0..len).map(|_| char::from(b'a' + rng.gen_range(0..26u8))).collect();
        if seen.insert(s.clone()) {
            out.push(Token(s));
        }
    }
    out
}
