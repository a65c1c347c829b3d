//! The predicate / enumeration / aggregation split shared by the task solvers.

/// A task phrased as a candidate stream plus a test on each candidate.
pub trait PeaProblem {
    type Candidate;
    type Candidates<'a>: Iterator<Item = Self::Candidate>
    where
        Self: 'a;

    /// Every legitimate candidate, in a fixed order.
    fn enumerate(&self) -> Self::Candidates<'_>;

    /// Whether a concrete candidate solves the task.
    fn predicate(&self, candidate: &Self::Candidate) -> bool;
}

/// Existential aggregation: the first candidate passing the predicate.
pub fn first_witness<P: PeaProblem>(problem: &P) -> Option<P::Candidate> {
    problem.enumerate().find(|c| problem.predicate(c))
}

/// Universal aggregation: the first candidate failing the predicate, or
/// `None` when every candidate passes.
pub fn first_counterexample<P: PeaProblem>(problem: &P) -> Option<P::Candidate> {
    problem.enumerate().find(|c| !problem.predicate(c))
}
