//! Fully bounded quantified predicates over finite domains.
//!
//! A formula is a quantifier prefix `Q1 x1 ∈ D1 … Qn xn ∈ Dn` followed by a
//! decidable predicate over one value per variable. Validity is decided by
//! unraveling the prefix from the outside in: an existential level is the
//! disjunction of its children, a universal level the conjunction. Levels
//! stop at the first deciding child unless exhaustive evaluation is asked for.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::convert::Infallible;
use core::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }

    /// The child outcome that settles a level: `true` for ∃, `false` for ∀.
    fn deciding_value(self) -> bool {
        matches!(self, Quantifier::Exists)
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Exists => f.write_str("∃"),
            Quantifier::Forall => f.write_str("∀"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("domain `{0}` is empty")]
    EmptyDomain(String),
    #[error("domain `{0}` contains a duplicate value")]
    DuplicateValue(String),
    #[error("variable `{0}` is bound more than once")]
    DuplicateVariable(String),
}

/// A named, non-empty finite set of values. Iteration follows insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain<V> {
    name: String,
    values: Vec<V>,
}

impl<V: Ord> Domain<V> {
    pub fn new(name: impl Into<String>, values: Vec<V>) -> Result<Self, FormulaError> {
        let name = name.into();
        if values.is_empty() {
            return Err(FormulaError::EmptyDomain(name));
        }
        let mut seen = BTreeSet::new();
        if !values.iter().all(|v| seen.insert(v)) {
            return Err(FormulaError::DuplicateValue(name));
        }
        Ok(Domain { name, values })
    }
}

impl<V> Domain<V> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Domain<bool> {
    /// `{false, true}` in that order.
    pub fn boolean(name: impl Into<String>) -> Self {
        Domain {
            name: name.into(),
            values: alloc::vec![false, true],
        }
    }
}

/// One entry of the quantifier prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binder<V> {
    pub quantifier: Quantifier,
    pub variable: String,
    pub domain: Domain<V>,
}

impl<V> Binder<V> {
    pub fn new(quantifier: Quantifier, variable: impl Into<String>, domain: Domain<V>) -> Self {
        Binder {
            quantifier,
            variable: variable.into(),
            domain,
        }
    }

    pub fn exists(variable: impl Into<String>, domain: Domain<V>) -> Self {
        Self::new(Quantifier::Exists, variable, domain)
    }

    pub fn forall(variable: impl Into<String>, domain: Domain<V>) -> Self {
        Self::new(Quantifier::Forall, variable, domain)
    }
}

/// A decidable test over one value per prefix variable, in prefix order.
pub trait Predicate<V> {
    type Error;

    fn test(&self, tuple: &[V]) -> Result<bool, Self::Error>;
}

impl<V, E, F> Predicate<V> for F
where
    F: Fn(&[V]) -> Result<bool, E>,
{
    type Error = E;

    fn test(&self, tuple: &[V]) -> Result<bool, E> {
        self(tuple)
    }
}

/// Adapter for predicates that cannot fail.
#[derive(Debug, Clone, Copy)]
pub struct Total<F>(pub F);

impl<V, F> Predicate<V> for Total<F>
where
    F: Fn(&[V]) -> bool,
{
    type Error = Infallible;

    fn test(&self, tuple: &[V]) -> Result<bool, Infallible> {
        Ok((self.0)(tuple))
    }
}

/// Logical negation of a predicate.
#[derive(Debug, Clone, Copy)]
pub struct Not<P>(pub P);

impl<V, P: Predicate<V>> Predicate<V> for Not<P> {
    type Error = P::Error;

    fn test(&self, tuple: &[V]) -> Result<bool, P::Error> {
        self.0.test(tuple).map(|b| !b)
    }
}

#[derive(Debug, Clone)]
pub struct QuantifiedFormula<V, P> {
    prefix: Vec<Binder<V>>,
    predicate: P,
}

impl<V, P> QuantifiedFormula<V, P>
where
    P: Predicate<V>,
{
    pub fn new(prefix: Vec<Binder<V>>, predicate: P) -> Result<Self, FormulaError> {
        let mut names = BTreeSet::new();
        for binder in &prefix {
            if !names.insert(binder.variable.as_str()) {
                return Err(FormulaError::DuplicateVariable(binder.variable.clone()));
            }
        }
        Ok(QuantifiedFormula { prefix, predicate })
    }

    pub fn prefix(&self) -> &[Binder<V>] {
        &self.prefix
    }

    pub fn predicate(&self) -> &P {
        &self.predicate
    }

    /// Evaluates the bare predicate on a full tuple.
    pub fn test(&self, tuple: &[V]) -> Result<bool, P::Error> {
        self.predicate.test(tuple)
    }

    /// Number of concrete tuples, `None` on overflow.
    pub fn search_space(&self) -> Option<u64> {
        self.prefix
            .iter()
            .try_fold(1u64, |acc, b| acc.checked_mul(b.domain.len() as u64))
    }

    /// The De Morgan dual: every quantifier flipped and the predicate negated.
    /// Its verdict is always the negation of this formula's verdict.
    pub fn dual(self) -> QuantifiedFormula<V, Not<P>> {
        let prefix = self
            .prefix
            .into_iter()
            .map(|mut b| {
                b.quantifier = b.quantifier.dual();
                b
            })
            .collect();
        QuantifiedFormula {
            prefix,
            predicate: Not(self.predicate),
        }
    }
}

/// Outcome of a decision.
///
/// Tuples are positional, aligned with the formula prefix. A witness is
/// reported when the leading quantifier is ∃ and the formula holds; a
/// counterexample when it is ∀ and the formula fails. In both cases the
/// tuple is completed through the inner levels so that the bare predicate
/// can be re-run on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<V> {
    Valid { witness: Option<Vec<V>> },
    Invalid { counterexample: Option<Vec<V>> },
}

impl<V> Verdict<V> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn witness(&self) -> Option<&[V]> {
        match self {
            Verdict::Valid { witness } => witness.as_deref(),
            Verdict::Invalid { .. } => None,
        }
    }

    pub fn counterexample(&self) -> Option<&[V]> {
        match self {
            Verdict::Invalid { counterexample } => counterexample.as_deref(),
            Verdict::Valid { .. } => None,
        }
    }

    /// Pairs a reported tuple with the prefix variable names.
    pub fn bindings<'a>(&'a self, prefix: &'a [Binder<V>]) -> Option<Vec<(&'a str, &'a V)>> {
        let tuple = self.witness().or_else(|| self.counterexample())?;
        Some(
            prefix
                .iter()
                .map(|b| b.variable.as_str())
                .zip(tuple.iter())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BudgetedVerdict<V> {
    Decided(Verdict<V>),
    Exhausted,
}

/// The predicate failed on a concrete tuple.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("predicate failed on tuple {tuple:?}: {cause}")]
pub struct EvalError<V: fmt::Debug, E: fmt::Display> {
    pub tuple: Vec<V>,
    pub cause: E,
}

enum Abort<V: fmt::Debug, E: fmt::Display> {
    Budget,
    Predicate(EvalError<V, E>),
}

struct Unraveler<'f, V, P> {
    formula: &'f QuantifiedFormula<V, P>,
    tuple: Vec<V>,
    evaluated: u64,
    budget: Option<u64>,
    short_circuit: bool,
}

impl<'f, V, P> Unraveler<'f, V, P>
where
    V: Clone + fmt::Debug,
    P: Predicate<V>,
    P::Error: fmt::Display,
{
    fn new(formula: &'f QuantifiedFormula<V, P>, budget: Option<u64>, short_circuit: bool) -> Self {
        Unraveler {
            formula,
            tuple: Vec::with_capacity(formula.prefix.len()),
            evaluated: 0,
            budget,
            short_circuit,
        }
    }

    /// Returns the level's truth value and a full tuple supporting it.
    fn descend(&mut self, depth: usize) -> Result<(bool, Vec<V>), Abort<V, P::Error>> {
        let formula = self.formula;
        let Some(binder) = formula.prefix.get(depth) else {
            if self.budget.is_some_and(|b| self.evaluated >= b) {
                return Err(Abort::Budget);
            }
            self.evaluated += 1;
            return match formula.predicate.test(&self.tuple) {
                Ok(b) => Ok((b, self.tuple.clone())),
                Err(cause) => Err(Abort::Predicate(EvalError {
                    tuple: self.tuple.clone(),
                    cause,
                })),
            };
        };

        let deciding = binder.quantifier.deciding_value();
        let mut decided: Option<Vec<V>> = None;
        let mut fallback: Option<Vec<V>> = None;
        for value in binder.domain.values() {
            self.tuple.push(value.clone());
            let child = self.descend(depth + 1);
            self.tuple.pop();
            let (outcome, path) = child?;
            if outcome == deciding {
                if decided.is_none() {
                    decided = Some(path);
                    if self.short_circuit {
                        break;
                    }
                }
            } else if fallback.is_none() {
                fallback = Some(path);
            }
        }
        match decided {
            Some(path) => Ok((deciding, path)),
            // domains are non-empty, so some child was visited
            None => Ok((!deciding, fallback.unwrap_or_default())),
        }
    }

    fn run(&mut self) -> Result<Verdict<V>, Abort<V, P::Error>> {
        let (holds, path) = self.descend(0)?;
        let lead = self.formula.prefix.first().map(|b| b.quantifier);
        Ok(match (holds, lead) {
            (true, Some(Quantifier::Exists)) => Verdict::Valid {
                witness: Some(path),
            },
            (true, _) => Verdict::Valid { witness: None },
            (false, Some(Quantifier::Forall)) => Verdict::Invalid {
                counterexample: Some(path),
            },
            (false, _) => Verdict::Invalid {
                counterexample: None,
            },
        })
    }
}

fn predicate_error<V: fmt::Debug, E: fmt::Display>(abort: Abort<V, E>) -> EvalError<V, E> {
    match abort {
        Abort::Predicate(e) => e,
        Abort::Budget => unreachable!("no budget was set"),
    }
}

/// Decides the formula with short-circuiting at every level.
///
/// Witnesses and counterexamples are the first deciding tuples in domain
/// order, so the result is deterministic.
pub fn evaluate<V, P>(formula: &QuantifiedFormula<V, P>) -> Result<Verdict<V>, EvalError<V, P::Error>>
where
    V: Clone + fmt::Debug,
    P: Predicate<V>,
    P::Error: fmt::Display,
{
    Unraveler::new(formula, None, true).run().map_err(predicate_error)
}

/// Decides the formula by evaluating every tuple of the search space.
/// Returns the same verdict as [`evaluate`] and the number of predicate calls.
pub fn evaluate_exhaustive<V, P>(
    formula: &QuantifiedFormula<V, P>,
) -> Result<(Verdict<V>, u64), EvalError<V, P::Error>>
where
    V: Clone + fmt::Debug,
    P: Predicate<V>,
    P::Error: fmt::Display,
{
    let mut run = Unraveler::new(formula, None, false);
    let verdict = run.run().map_err(predicate_error)?;
    Ok((verdict, run.evaluated))
}

/// Like [`evaluate`] but gives up once `max_tuples` predicate calls did not
/// settle the formula.
pub fn evaluate_with_budget<V, P>(
    formula: &QuantifiedFormula<V, P>,
    max_tuples: u64,
) -> Result<BudgetedVerdict<V>, EvalError<V, P::Error>>
where
    V: Clone + fmt::Debug,
    P: Predicate<V>,
    P::Error: fmt::Display,
{
    match Unraveler::new(formula, Some(max_tuples), true).run() {
        Ok(v) => Ok(BudgetedVerdict::Decided(v)),
        Err(Abort::Budget) => Ok(BudgetedVerdict::Exhausted),
        Err(Abort::Predicate(e)) => Err(e),
    }
}
