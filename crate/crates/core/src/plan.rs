//! State-space search shared by the planning domains.
//!
//! All actions cost one unit, so breadth-first order is cost order and the
//! first goal state reached gives a minimum-cost plan.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// A deterministic, finitely branching transition system.
pub trait SearchProblem {
    type State: Clone;
    type Action: Clone + PartialEq;
    /// Canonical identity of a state; equal keys mean equal states.
    type Key: Ord + Clone + fmt::Debug;
    type Error: fmt::Display;

    fn initial_state(&self) -> Self::State;

    fn is_goal(&self, state: &Self::State) -> bool;

    /// Applicable actions with their successor states, in a fixed order.
    fn successors(&self, state: &Self::State) -> Result<Vec<(Self::Action, Self::State)>, Self::Error>;

    fn state_key(&self, state: &Self::State) -> Self::Key;

    /// Why `action` cannot be taken in `state`, for plan diagnostics.
    fn explain_rejection(&self, _state: &Self::State, _action: &Self::Action) -> String {
        "action is not applicable in the current state".into()
    }
}

/// A sequence of unit-cost actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan<A> {
    actions: Vec<A>,
}

impl<A> Plan<A> {
    pub fn new(actions: Vec<A>) -> Self {
        Plan { actions }
    }

    pub fn empty() -> Self {
        Plan { actions: Vec::new() }
    }

    pub fn actions(&self) -> &[A] {
        &self.actions
    }

    pub fn into_actions(self) -> Vec<A> {
        self.actions
    }

    pub fn cost(&self) -> usize {
        self.actions.len()
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search limits must be at least 1")]
pub struct InvalidLimits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    max_expanded_states: usize,
    max_depth: usize,
}

impl SearchLimits {
    pub fn new(max_expanded_states: usize, max_depth: usize) -> Result<Self, InvalidLimits> {
        if max_expanded_states == 0 || max_depth == 0 {
            return Err(InvalidLimits);
        }
        Ok(SearchLimits {
            max_expanded_states,
            max_depth,
        })
    }

    pub fn max_expanded_states(&self) -> usize {
        self.max_expanded_states
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_expanded_states: 5_000_000,
            max_depth: 1_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<A> {
    Found(Plan<A>),
    NoPlan,
    LimitExceeded,
}

impl<A> SearchOutcome<A> {
    pub fn plan(&self) -> Option<&Plan<A>> {
        match self {
            SearchOutcome::Found(p) => Some(p),
            _ => None,
        }
    }

    pub fn into_plan(self) -> Option<Plan<A>> {
        match self {
            SearchOutcome::Found(p) => Some(p),
            _ => None,
        }
    }
}

/// Successor generation failed at the state with key `key`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("successor generation failed at state {key:?}: {cause}")]
pub struct SearchError<K: fmt::Debug, E: fmt::Display> {
    pub key: K,
    pub cause: E,
}

type SearchResult<P> = Result<
    SearchOutcome<<P as SearchProblem>::Action>,
    SearchError<<P as SearchProblem>::Key, <P as SearchProblem>::Error>,
>;

struct Node<S, A> {
    state: S,
    parent: Option<(usize, A)>,
    depth: usize,
}

fn extract_plan<S, A: Clone>(nodes: &[Node<S, A>], mut at: usize) -> Plan<A> {
    let mut actions = Vec::with_capacity(nodes[at].depth);
    while let Some((parent, action)) = &nodes[at].parent {
        actions.push(action.clone());
        at = *parent;
    }
    actions.reverse();
    Plan::new(actions)
}

fn bfs<P: SearchProblem>(problem: &P, limits: SearchLimits, dedup: bool) -> SearchResult<P> {
    let initial = problem.initial_state();
    if problem.is_goal(&initial) {
        return Ok(SearchOutcome::Found(Plan::empty()));
    }
    let mut visited = BTreeSet::new();
    if dedup {
        visited.insert(problem.state_key(&initial));
    }
    let mut nodes = alloc::vec![Node {
        state: initial,
        parent: None,
        depth: 0,
    }];
    let mut frontier = VecDeque::from([0usize]);
    let mut expanded = 0usize;
    let mut truncated = false;

    while let Some(at) = frontier.pop_front() {
        if nodes[at].depth >= limits.max_depth {
            truncated = true;
            continue;
        }
        if expanded >= limits.max_expanded_states {
            return Ok(SearchOutcome::LimitExceeded);
        }
        expanded += 1;
        let successors = problem.successors(&nodes[at].state).map_err(|cause| SearchError {
            key: problem.state_key(&nodes[at].state),
            cause,
        })?;
        let depth = nodes[at].depth + 1;
        for (action, state) in successors {
            if dedup && !visited.insert(problem.state_key(&state)) {
                continue;
            }
            let goal = problem.is_goal(&state);
            nodes.push(Node {
                state,
                parent: Some((at, action)),
                depth,
            });
            let id = nodes.len() - 1;
            if goal {
                return Ok(SearchOutcome::Found(extract_plan(&nodes, id)));
            }
            frontier.push_back(id);
        }
    }
    Ok(if truncated {
        SearchOutcome::LimitExceeded
    } else {
        SearchOutcome::NoPlan
    })
}

/// Breadth-first search with duplicate detection on [`SearchProblem::state_key`].
///
/// Ties between equally short plans go to the earliest successor in the
/// problem's order. `LimitExceeded` is returned when the expansion budget
/// runs out, or when the reachable space was cut at `max_depth`.
pub fn bfs_plan<P: SearchProblem>(problem: &P, limits: SearchLimits) -> SearchResult<P> {
    bfs(problem, limits, true)
}

/// Breadth-first tree search without a visited set. Only useful as a check
/// on [`bfs_plan`]; it revisits states freely.
pub fn bfs_plan_tree<P: SearchProblem>(problem: &P, limits: SearchLimits) -> SearchResult<P> {
    bfs(problem, limits, false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanCheck {
    Valid,
    /// `step` is 1-based; a plan that runs but misses the goal is rejected
    /// at its last step (0 for the empty plan).
    Invalid { step: usize, reason: String },
}

impl PlanCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, PlanCheck::Valid)
    }
}

/// Replays `plan` from the initial state.
pub fn verify_plan<P: SearchProblem>(problem: &P, plan: &Plan<P::Action>) -> PlanCheck {
    let mut state = problem.initial_state();
    for (i, action) in plan.actions().iter().enumerate() {
        let successors = match problem.successors(&state) {
            Ok(s) => s,
            Err(e) => {
                return PlanCheck::Invalid {
                    step: i + 1,
                    reason: e.to_string(),
                }
            }
        };
        match successors.into_iter().find(|(a, _)| a == action) {
            Some((_, next)) => state = next,
            None => {
                return PlanCheck::Invalid {
                    step: i + 1,
                    reason: problem.explain_rejection(&state, action),
                }
            }
        }
    }
    if problem.is_goal(&state) {
        PlanCheck::Valid
    } else {
        PlanCheck::Invalid {
            step: plan.len(),
            reason: "goal conditions are not satisfied at the end of the plan".into(),
        }
    }
}

/// Iterative-deepening depth-first search: a minimum-length plan of at
/// most `max_depth` actions, found without a breadth-first frontier.
///
/// Within one deepening round a state that already failed with at least
/// the same remaining depth is skipped.
pub fn iddfs_oracle<P: SearchProblem>(
    problem: &P,
    max_depth: usize,
) -> Result<Option<Plan<P::Action>>, SearchError<P::Key, P::Error>> {
    let initial = problem.initial_state();
    for limit in 0..=max_depth {
        let mut failed = BTreeMap::new();
        let mut path = Vec::new();
        if depth_limited(problem, &initial, limit, &mut path, &mut failed)? {
            return Ok(Some(Plan::new(path)));
        }
    }
    Ok(None)
}

fn depth_limited<P: SearchProblem>(
    problem: &P,
    state: &P::State,
    remaining: usize,
    path: &mut Vec<P::Action>,
    failed: &mut BTreeMap<P::Key, usize>,
) -> Result<bool, SearchError<P::Key, P::Error>> {
    if problem.is_goal(state) {
        return Ok(true);
    }
    if remaining == 0 {
        return Ok(false);
    }
    let key = problem.state_key(state);
    if failed.get(&key).is_some_and(|&r| r >= remaining) {
        return Ok(false);
    }
    let successors = problem.successors(state).map_err(|cause| SearchError {
        key: key.clone(),
        cause,
    })?;
    for (action, next) in successors {
        path.push(action);
        if depth_limited(problem, &next, remaining - 1, path, failed)? {
            return Ok(true);
        }
        path.pop();
    }
    failed.insert(key, remaining);
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::convert::Infallible;

    /// Counter on 0..=max that can step +1 or +2; goal is a fixed value.
    struct Line {
        max: u32,
        goal: u32,
    }

    impl SearchProblem for Line {
        type State = u32;
        type Action = u32;
        type Key = u32;
        type Error = Infallible;

        fn initial_state(&self) -> u32 {
            0
        }
        fn is_goal(&self, s: &u32) -> bool {
            *s == self.goal
        }
        fn successors(&self, s: &u32) -> Result<Vec<(u32, u32)>, Infallible> {
            Ok([1, 2]
                .into_iter()
                .filter(|d| s + d <= self.max)
                .map(|d| (d, s + d))
                .collect())
        }
        fn state_key(&self, s: &u32) -> u32 {
            *s
        }
    }

    struct Failing;

    impl SearchProblem for Failing {
        type State = u8;
        type Action = u8;
        type Key = u8;
        type Error = &'static str;

        fn initial_state(&self) -> u8 {
            0
        }
        fn is_goal(&self, _: &u8) -> bool {
            false
        }
        fn successors(&self, s: &u8) -> Result<Vec<(u8, u8)>, &'static str> {
            if *s == 1 {
                Err("broken")
            } else {
                Ok(vec![(1, 1)])
            }
        }
        fn state_key(&self, s: &u8) -> u8 {
            *s
        }
    }

    #[test]
    fn goal_at_start() {
        let p = Line { max: 5, goal: 0 };
        assert_eq!(
            bfs_plan(&p, SearchLimits::default()).unwrap(),
            SearchOutcome::Found(Plan::empty())
        );
        assert_eq!(iddfs_oracle(&p, 3).unwrap(), Some(Plan::empty()));
        assert_eq!(verify_plan(&p, &Plan::empty()), PlanCheck::Valid);
    }

    #[test]
    fn unreachable_goal() {
        let p = Line { max: 1, goal: 7 };
        assert_eq!(bfs_plan(&p, SearchLimits::default()).unwrap(), SearchOutcome::NoPlan);
        assert_eq!(iddfs_oracle(&p, 4).unwrap(), None);
    }

    #[test]
    fn shortest_and_tie_break() {
        let p = Line { max: 10, goal: 5 };
        let plan = bfs_plan(&p, SearchLimits::default()).unwrap().into_plan().unwrap();
        assert_eq!(plan.actions(), &[1, 2, 2]);
        assert_eq!(plan.cost(), 3);
        assert_eq!(iddfs_oracle(&p, 10).unwrap().unwrap().len(), 3);
        let tree = bfs_plan_tree(&p, SearchLimits::default()).unwrap().into_plan().unwrap();
        assert_eq!(tree.len(), 3);
    }

    #[test]
    fn limits() {
        let p = Line { max: 100, goal: 50 };
        let tight = SearchLimits::new(3, 100).unwrap();
        assert_eq!(bfs_plan(&p, tight).unwrap(), SearchOutcome::LimitExceeded);
        let shallow = SearchLimits::new(1000, 2).unwrap();
        assert_eq!(bfs_plan(&p, shallow).unwrap(), SearchOutcome::LimitExceeded);
        assert_eq!(SearchLimits::new(0, 1), Err(InvalidLimits));
    }

    #[test]
    fn verification() {
        let p = Line { max: 10, goal: 3 };
        assert_eq!(verify_plan(&p, &Plan::new(vec![1, 2])), PlanCheck::Valid);
        assert!(matches!(
            verify_plan(&p, &Plan::new(vec![1, 1])),
            PlanCheck::Invalid { step: 2, .. }
        ));
        assert!(matches!(
            verify_plan(&p, &Plan::new(vec![1, 3])),
            PlanCheck::Invalid { step: 2, .. }
        ));
        let q = Line { max: 2, goal: 1 };
        assert!(matches!(
            verify_plan(&q, &Plan::new(vec![2, 1])),
            PlanCheck::Invalid { step: 2, .. }
        ));
    }

    #[test]
    fn successor_fault_names_state() {
        let err = bfs_plan(&Failing, SearchLimits::default()).unwrap_err();
        assert_eq!(err.key, 1);
        assert_eq!(err.cause, "broken");
    }
}
