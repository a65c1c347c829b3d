//! Cost-optimal Blocksworld with one-minute actions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::convert::Infallible;
use core::fmt;

use thiserror::Error;

use crate::plan::{self, Plan, SearchLimits, SearchOutcome, SearchProblem};
use crate::statement;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    OnTable,
    On(String),
    Held,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BwStateError {
    #[error("more than one block is held")]
    SeveralHeld,
    #[error("block `{0}` rests on itself")]
    OnItself(String),
    #[error("block `{block}` rests on unknown block `{support}`")]
    UnknownSupport { block: String, support: String },
    #[error("block `{block}` rests on held block `{support}`")]
    OnHeldBlock { block: String, support: String },
    #[error("blocks `{0}` and `{1}` rest on the same block")]
    SharedSupport(String, String),
    #[error("blocks form a cycle through `{0}`")]
    Cycle(String),
}

/// Where every block is. Ordered and hashable by content, so the state is
/// its own canonical key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BwState {
    positions: BTreeMap<String, Position>,
}

impl BwState {
    pub fn new(positions: BTreeMap<String, Position>) -> Result<Self, BwStateError> {
        let mut held = 0;
        let mut supported: BTreeMap<&str, &str> = BTreeMap::new();
        for (block, pos) in &positions {
            match pos {
                Position::Held => held += 1,
                Position::OnTable => {}
                Position::On(support) => {
                    if support == block {
                        return Err(BwStateError::OnItself(block.clone()));
                    }
                    match positions.get(support) {
                        None => {
                            return Err(BwStateError::UnknownSupport {
                                block: block.clone(),
                                support: support.clone(),
                            })
                        }
                        Some(Position::Held) => {
                            return Err(BwStateError::OnHeldBlock {
                                block: block.clone(),
                                support: support.clone(),
                            })
                        }
                        Some(_) => {}
                    }
                    if let Some(other) = supported.insert(support, block) {
                        return Err(BwStateError::SharedSupport(other.into(), block.clone()));
                    }
                }
            }
        }
        if held > 1 {
            return Err(BwStateError::SeveralHeld);
        }
        // every chain must bottom out on the table
        for start in positions.keys() {
            let mut at = start;
            let mut steps = 0;
            while let Some(Position::On(below)) = positions.get(at) {
                at = below;
                steps += 1;
                if steps > positions.len() {
                    return Err(BwStateError::Cycle(start.clone()));
                }
            }
        }
        Ok(BwState { positions })
    }

    /// Every block on the table, hand empty.
    pub fn all_on_table<I, S>(blocks: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        BwState {
            positions: blocks.into_iter().map(|b| (b.into(), Position::OnTable)).collect(),
        }
    }

    pub fn positions(&self) -> &BTreeMap<String, Position> {
        &self.positions
    }

    pub fn position(&self, block: &str) -> Option<&Position> {
        self.positions.get(block)
    }

    pub fn blocks(&self) -> impl Iterator<Item = &str> {
        self.positions.keys().map(String::as_str)
    }

    pub fn held(&self) -> Option<&str> {
        self.positions
            .iter()
            .find(|(_, p)| **p == Position::Held)
            .map(|(b, _)| b.as_str())
    }

    pub fn hand_empty(&self) -> bool {
        self.held().is_none()
    }

    /// Nothing on top and not held.
    pub fn is_clear(&self, block: &str) -> bool {
        match self.positions.get(block) {
            None | Some(Position::Held) => false,
            Some(_) => !self
                .positions
                .values()
                .any(|p| matches!(p, Position::On(b) if b == block)),
        }
    }

    pub fn clear_blocks(&self) -> BTreeSet<&str> {
        let covered: BTreeSet<&str> = self
            .positions
            .values()
            .filter_map(|p| match p {
                Position::On(b) => Some(b.as_str()),
                _ => None,
            })
            .collect();
        self.positions
            .iter()
            .filter(|(b, p)| **p != Position::Held && !covered.contains(b.as_str()))
            .map(|(b, _)| b.as_str())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BwAction {
    PickUp(String),
    PutDown(String),
    Unstack { block: String, from: String },
    Stack { block: String, onto: String },
}

impl BwAction {
    pub fn pick_up(block: impl Into<String>) -> Self {
        BwAction::PickUp(block.into())
    }

    pub fn put_down(block: impl Into<String>) -> Self {
        BwAction::PutDown(block.into())
    }

    pub fn unstack(block: impl Into<String>, from: impl Into<String>) -> Self {
        BwAction::Unstack {
            block: block.into(),
            from: from.into(),
        }
    }

    pub fn stack(block: impl Into<String>, onto: impl Into<String>) -> Self {
        BwAction::Stack {
            block: block.into(),
            onto: onto.into(),
        }
    }
}

/// The dataset's plan sentences.
impl fmt::Display for BwAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BwAction::PickUp(b) => write!(f, "pick up the {b} block"),
            BwAction::PutDown(b) => write!(f, "put down the {b} block"),
            BwAction::Unstack { block, from } => {
                write!(f, "unstack the {block} block from on top of the {from} block")
            }
            BwAction::Stack { block, onto } => {
                write!(f, "stack the {block} block on top of the {onto} block")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Illegal {
    #[error("unknown block `{0}`")]
    UnknownBlock(String),
    #[error("a block cannot be stacked on or unstacked from itself")]
    SameBlock,
    #[error("hand is not empty")]
    HandNotEmpty,
    #[error("block is not on the table")]
    NotOnTable,
    #[error("block is not clear")]
    NotClear,
    #[error("block is not on top of the other block")]
    NotOnTopOf,
    #[error("not holding the block")]
    NotHolding,
    #[error("target block is not clear")]
    TargetNotClear,
}

/// Applies `action`, enforcing every restriction of the domain.
pub fn apply(state: &BwState, action: &BwAction) -> Result<BwState, Illegal> {
    let known = |b: &str| {
        state
            .positions
            .contains_key(b)
            .then_some(())
            .ok_or_else(|| Illegal::UnknownBlock(b.into()))
    };
    let mut next = state.clone();
    match action {
        BwAction::PickUp(b) => {
            known(b)?;
            if !state.hand_empty() {
                return Err(Illegal::HandNotEmpty);
            }
            if state.positions[b] != Position::OnTable {
                return Err(Illegal::NotOnTable);
            }
            if !state.is_clear(b) {
                return Err(Illegal::NotClear);
            }
            next.positions.insert(b.clone(), Position::Held);
        }
        BwAction::Unstack { block, from } => {
            known(block)?;
            known(from)?;
            if block == from {
                return Err(Illegal::SameBlock);
            }
            if !state.hand_empty() {
                return Err(Illegal::HandNotEmpty);
            }
            if !matches!(&state.positions[block], Position::On(s) if s == from) {
                return Err(Illegal::NotOnTopOf);
            }
            if !state.is_clear(block) {
                return Err(Illegal::NotClear);
            }
            next.positions.insert(block.clone(), Position::Held);
        }
        BwAction::PutDown(b) => {
            known(b)?;
            if state.positions[b] != Position::Held {
                return Err(Illegal::NotHolding);
            }
            next.positions.insert(b.clone(), Position::OnTable);
        }
        BwAction::Stack { block, onto } => {
            known(block)?;
            known(onto)?;
            if block == onto {
                return Err(Illegal::SameBlock);
            }
            if state.positions[block] != Position::Held {
                return Err(Illegal::NotHolding);
            }
            if !state.is_clear(onto) {
                return Err(Illegal::TargetNotClear);
            }
            next.positions.insert(block.clone(), Position::On(onto.clone()));
        }
    }
    Ok(next)
}

/// Every legal action, sorted by its sentence.
pub fn applicable_actions(state: &BwState) -> Vec<BwAction> {
    let clear = state.clear_blocks();
    let mut actions = Vec::new();
    match state.held() {
        None => {
            for &b in &clear {
                match &state.positions[b] {
                    Position::OnTable => actions.push(BwAction::pick_up(b)),
                    Position::On(from) => actions.push(BwAction::unstack(b, from.clone())),
                    Position::Held => {}
                }
            }
        }
        Some(h) => {
            actions.push(BwAction::put_down(h));
            for &onto in clear.iter().filter(|&&b| b != h) {
                actions.push(BwAction::stack(h, onto));
            }
        }
    }
    actions.sort_by_cached_key(|a| a.to_string());
    actions
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Support {
    Table,
    Block(String),
}

/// Partial goal: only the listed blocks are constrained.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BwGoal {
    conditions: BTreeMap<String, Support>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("block `{0}` is required on two different supports")]
pub struct GoalConflict(pub String);

impl BwGoal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn require(&mut self, block: impl Into<String>, support: Support) -> Result<(), GoalConflict> {
        let block = block.into();
        match self.conditions.get(&block) {
            Some(existing) if *existing != support => Err(GoalConflict(block)),
            _ => {
                self.conditions.insert(block, support);
                Ok(())
            }
        }
    }

    pub fn with_on(mut self, block: &str, below: &str) -> Result<Self, GoalConflict> {
        self.require(block, Support::Block(below.into()))?;
        Ok(self)
    }

    pub fn conditions(&self) -> &BTreeMap<String, Support> {
        &self.conditions
    }

    pub fn is_satisfied(&self, state: &BwState) -> bool {
        self.conditions.iter().all(|(b, s)| {
            matches!(
                (state.positions.get(b), s),
                (Some(Position::OnTable), Support::Table)
            ) || matches!((state.positions.get(b), s), (Some(Position::On(x)), Support::Block(y)) if x == y)
        })
    }
}

/// Search problem over one instance.
pub struct BwProblem<'a> {
    pub initial: &'a BwState,
    pub goal: &'a BwGoal,
}

impl SearchProblem for BwProblem<'_> {
    type State = BwState;
    type Action = BwAction;
    type Key = BwState;
    type Error = Infallible;

    fn initial_state(&self) -> BwState {
        self.initial.clone()
    }

    fn is_goal(&self, state: &BwState) -> bool {
        self.goal.is_satisfied(state)
    }

    fn successors(&self, state: &BwState) -> Result<Vec<(BwAction, BwState)>, Infallible> {
        Ok(applicable_actions(state)
            .into_iter()
            .map(|a| {
                let next = apply(state, &a).expect("applicable action applies");
                (a, next)
            })
            .collect())
    }

    fn state_key(&self, state: &BwState) -> BwState {
        state.clone()
    }

    fn explain_rejection(&self, state: &BwState, action: &BwAction) -> String {
        match apply(state, action) {
            Err(e) => e.to_string(),
            Ok(_) => "action is not applicable".into(),
        }
    }
}

/// Minimum-time plan by breadth-first search.
pub fn solve_optimal(initial: &BwState, goal: &BwGoal, limits: SearchLimits) -> SearchOutcome<BwAction> {
    match plan::bfs_plan(&BwProblem { initial, goal }, limits) {
        Ok(outcome) => outcome,
        Err(e) => match e.cause {},
    }
}

pub fn verify(initial: &BwState, goal: &BwGoal, plan: &Plan<BwAction>) -> plan::PlanCheck {
    plan::verify_plan(&BwProblem { initial, goal }, plan)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BwParseError {
    #[error("statement lacks the initial-condition or goal section")]
    MissingSections,
    #[error("unrecognized sentence `{0}`")]
    UnknownTemplate(String),
    #[error("block `{0}` is placed on two supports")]
    ConflictingPosition(String),
    #[error("block `{0}` has no stated position")]
    MissingPosition(String),
    #[error("block `{0}` is said to be clear but has a block on it")]
    ClearContradiction(String),
    #[error("the hand is said to be empty while holding `{0}`")]
    HandContradiction(String),
    #[error("goal mentions unknown block `{0}`")]
    UnknownGoalBlock(String),
    #[error(transparent)]
    Goal(#[from] GoalConflict),
    #[error(transparent)]
    State(#[from] BwStateError),
}

enum Fact {
    Clear(String),
    HandEmpty,
    Holding(String),
    On(String, String),
    OnTable(String),
}

fn block_name(text: &str) -> Option<String> {
    let name = text.trim().strip_prefix("the ")?.strip_suffix(" block")?.trim();
    (!name.is_empty() && !name.contains(char::is_whitespace)).then(|| name.into())
}

fn parse_fact(sentence: &str) -> Result<Fact, BwParseError> {
    let unknown = || BwParseError::UnknownTemplate(sentence.into());
    let s = sentence.trim();
    if s == "the hand is empty" {
        return Ok(Fact::HandEmpty);
    }
    if let Some(rest) = s
        .strip_prefix("the hand is currently holding ")
        .or_else(|| s.strip_prefix("the hand is holding "))
    {
        return block_name(rest).map(Fact::Holding).ok_or_else(unknown);
    }
    if let Some(subject) = s.strip_suffix(" is clear") {
        return block_name(subject).map(Fact::Clear).ok_or_else(unknown);
    }
    if let Some(subject) = s.strip_suffix(" is on the table") {
        return block_name(subject).map(Fact::OnTable).ok_or_else(unknown);
    }
    if let Some((subject, object)) = s.split_once(" is on top of ") {
        return block_name(subject)
            .zip(block_name(object))
            .map(|(a, b)| Fact::On(a, b))
            .ok_or_else(unknown);
    }
    Err(unknown())
}

/// Reads an initial state and goal from the dataset's templated sentences.
pub fn parse_bw_statement(text: &str) -> Result<(BwState, BwGoal), BwParseError> {
    let (initial_text, goal_text) = statement::sections(text).ok_or(BwParseError::MissingSections)?;

    let mut positions: BTreeMap<String, Position> = BTreeMap::new();
    let mut claimed_clear: Vec<String> = Vec::new();
    let mut hand_empty_claimed = false;
    let mut mentioned: BTreeSet<String> = BTreeSet::new();
    let place = |block: String, pos: Position, positions: &mut BTreeMap<String, Position>| {
        match positions.get(&block) {
            Some(existing) if *existing != pos => Err(BwParseError::ConflictingPosition(block)),
            _ => {
                positions.insert(block, pos);
                Ok(())
            }
        }
    };
    for sentence in statement::split_facts(initial_text) {
        match parse_fact(&sentence)? {
            Fact::HandEmpty => hand_empty_claimed = true,
            Fact::Clear(b) => {
                mentioned.insert(b.clone());
                claimed_clear.push(b);
            }
            Fact::Holding(b) => {
                mentioned.insert(b.clone());
                place(b, Position::Held, &mut positions)?;
            }
            Fact::OnTable(b) => {
                mentioned.insert(b.clone());
                place(b, Position::OnTable, &mut positions)?;
            }
            Fact::On(a, b) => {
                mentioned.insert(a.clone());
                mentioned.insert(b.clone());
                place(a, Position::On(b), &mut positions)?;
            }
        }
    }
    if let Some(missing) = mentioned.iter().find(|b| !positions.contains_key(*b)) {
        return Err(BwParseError::MissingPosition(missing.clone()));
    }
    let state = BwState::new(positions)?;
    if hand_empty_claimed {
        if let Some(h) = state.held() {
            return Err(BwParseError::HandContradiction(h.into()));
        }
    }
    for b in claimed_clear {
        if !state.is_clear(&b) {
            return Err(BwParseError::ClearContradiction(b));
        }
    }

    let mut goal = BwGoal::new();
    for sentence in statement::split_facts(goal_text) {
        let (block, support) = match parse_fact(&sentence)? {
            Fact::On(a, b) => (a, Support::Block(b)),
            Fact::OnTable(a) => (a, Support::Table),
            _ => return Err(BwParseError::UnknownTemplate(sentence)),
        };
        for b in core::iter::once(&block).chain(match &support {
            Support::Block(b) => Some(b),
            Support::Table => None,
        }) {
            if state.position(b).is_none() {
                return Err(BwParseError::UnknownGoalBlock(b.clone()));
            }
        }
        goal.require(block, support)?;
    }
    Ok((state, goal))
}

/// Renders a state and goal in the dataset's sentence forms. The output
/// parses back to the same state and goal.
pub fn render_bw_statement(state: &BwState, goal: &BwGoal) -> String {
    let mut facts: Vec<String> = state
        .clear_blocks()
        .iter()
        .map(|b| format!("the {b} block is clear"))
        .collect();
    match state.held() {
        None => facts.push("the hand is empty".into()),
        Some(h) => facts.push(format!("the hand is currently holding the {h} block")),
    }
    for (b, p) in &state.positions {
        if let Position::On(below) = p {
            facts.push(format!("the {b} block is on top of the {below} block"));
        }
    }
    for (b, p) in &state.positions {
        if *p == Position::OnTable {
            facts.push(format!("the {b} block is on the table"));
        }
    }
    let goals: Vec<String> = goal
        .conditions
        .iter()
        .map(|(b, s)| match s {
            Support::Block(below) => format!("the {b} block is on top of the {below} block"),
            Support::Table => format!("the {b} block is on the table"),
        })
        .collect();
    format!(
        "{}, {}.\n{} {}.",
        statement::INITIAL_LEAD,
        statement::join_facts(&facts),
        statement::GOAL_LEAD,
        statement::join_facts(&goals)
    )
}

/// Parses one plan sentence, as rendered by [`BwAction`]'s `Display`.
pub fn parse_bw_action(sentence: &str) -> Result<BwAction, BwParseError> {
    let s = sentence.trim().trim_end_matches('.').trim().to_lowercase();
    let unknown = || BwParseError::UnknownTemplate(sentence.trim().into());
    let block = |t: &str| block_name(t).ok_or_else(unknown);
    if let Some(rest) = s.strip_prefix("pick up ") {
        return Ok(BwAction::PickUp(block(rest)?));
    }
    if let Some(rest) = s.strip_prefix("put down ") {
        return Ok(BwAction::PutDown(block(rest)?));
    }
    if let Some(rest) = s.strip_prefix("unstack ") {
        let (a, b) = rest.split_once(" from on top of ").ok_or_else(unknown)?;
        return Ok(BwAction::unstack(block(a)?, block(b)?));
    }
    if let Some(rest) = s.strip_prefix("stack ") {
        let (a, b) = rest.split_once(" on top of ").ok_or_else(unknown)?;
        return Ok(BwAction::stack(block(a)?, block(b)?));
    }
    Err(unknown())
}

/// Parses a plan block: one sentence per line, or `;`-separated. Plan
/// markers and the closing time line are skipped.
pub fn parse_bw_plan(text: &str) -> Result<Plan<BwAction>, BwParseError> {
    statement::plan_lines(text)
        .flat_map(|l| l.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_bw_action)
        .collect::<Result<Vec<_>, _>>()
        .map(Plan::new)
}

/// Plan sentences, one per line, then the total time.
pub fn render_bw_plan(plan: &Plan<BwAction>) -> String {
    let mut out = String::new();
    for a in plan.actions() {
        out.push_str(&a.to_string());
        out.push('\n');
    }
    let unit = if plan.cost() == 1 { "minute" } else { "minutes" };
    out.push_str(&format!("The total time to execute the plan is {} {unit}.", plan.cost()));
    out
}
