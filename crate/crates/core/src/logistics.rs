//! Logistics: packages moved by one truck per city and by airplanes
//! flying between airports.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::convert::Infallible;
use core::fmt;

use thiserror::Error;

use crate::plan::{self, Plan, PlanCheck, SearchLimits, SearchOutcome, SearchProblem};
use crate::statement;

/// An object identifier such as `package_10`. Ordered naturally, so
/// `package_2` sorts before `package_10`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Name(String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The numeric suffix after the last `_`, if any.
    fn index(&self) -> Option<&str> {
        let (_, idx) = self.0.rsplit_once('_')?;
        (!idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit())).then_some(idx)
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let la = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let lb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (na, nb) = (&a[..la], &b[..lb]);
                let trim = |n: &[u8]| {
                    let z = n.iter().take_while(|&&c| c == b'0').count();
                    n.len() - z
                };
                let (sa, sb) = (&na[na.len() - trim(na)..], &nb[nb.len() - trim(nb)..]);
                let ord = sa.len().cmp(&sb.len()).then_with(|| sa.cmp(sb)).then(la.cmp(&lb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[la..];
                b = &b[lb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorldError {
    #[error("location `{0}` is in two cities")]
    LocationInTwoCities(Name),
    #[error("city `{0}` has no airport")]
    NoAirport(Name),
    #[error("airport `{0}` is not a known location")]
    UnknownAirport(Name),
    #[error("city `{0}` has no truck")]
    NoTruck(Name),
    #[error("city `{0}` has more than one truck")]
    SeveralTrucks(Name),
    #[error("truck `{0}` has no matching city")]
    TruckWithoutCity(Name),
}

/// The static part of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogiWorld {
    locations: BTreeMap<Name, Name>,
    airports: BTreeSet<Name>,
    trucks: BTreeMap<Name, Name>,
    airplanes: BTreeSet<Name>,
}

impl LogiWorld {
    /// `locations` maps each location to its city, `trucks` each truck to
    /// its home city.
    pub fn new(
        locations: BTreeMap<Name, Name>,
        airports: BTreeSet<Name>,
        trucks: BTreeMap<Name, Name>,
        airplanes: BTreeSet<Name>,
    ) -> Result<Self, WorldError> {
        if let Some(a) = airports.iter().find(|a| !locations.contains_key(*a)) {
            return Err(WorldError::UnknownAirport(a.clone()));
        }
        let cities: BTreeSet<&Name> = locations.values().collect();
        for city in &cities {
            if !airports.iter().any(|a| locations[a] == **city) {
                return Err(WorldError::NoAirport((*city).clone()));
            }
            match trucks.values().filter(|c| c == city).count() {
                0 => return Err(WorldError::NoTruck((*city).clone())),
                1 => {}
                _ => return Err(WorldError::SeveralTrucks((*city).clone())),
            }
        }
        if let Some((t, _)) = trucks.iter().find(|(_, c)| !cities.contains(c)) {
            return Err(WorldError::TruckWithoutCity(t.clone()));
        }
        Ok(LogiWorld {
            locations,
            airports,
            trucks,
            airplanes,
        })
    }

    pub fn cities(&self) -> BTreeSet<&Name> {
        self.locations.values().collect()
    }

    pub fn locations(&self) -> &BTreeMap<Name, Name> {
        &self.locations
    }

    pub fn city_of(&self, location: &Name) -> Option<&Name> {
        self.locations.get(location)
    }

    pub fn is_airport(&self, location: &Name) -> bool {
        self.airports.contains(location)
    }

    pub fn airports(&self) -> &BTreeSet<Name> {
        &self.airports
    }

    /// The airport a city's traffic goes through: its first airport.
    pub fn airport_of(&self, city: &Name) -> Option<&Name> {
        self.airports.iter().find(|a| self.locations[*a] == *city)
    }

    pub fn trucks(&self) -> &BTreeMap<Name, Name> {
        &self.trucks
    }

    pub fn truck_of(&self, city: &Name) -> Option<&Name> {
        self.trucks.iter().find(|(_, c)| *c == city).map(|(t, _)| t)
    }

    pub fn airplanes(&self) -> &BTreeSet<Name> {
        &self.airplanes
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cargo {
    At(Name),
    InTruck(Name),
    InPlane(Name),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogiStateError {
    #[error("unknown location `{0}`")]
    UnknownLocation(Name),
    #[error("unknown vehicle `{0}`")]
    UnknownVehicle(Name),
    #[error("truck `{truck}` is at `{location}`, outside its city")]
    TruckOutsideCity { truck: Name, location: Name },
    #[error("airplane `{plane}` is at `{location}`, which is not an airport")]
    PlaneNotAtAirport { plane: Name, location: Name },
    #[error("vehicle `{0}` has no position")]
    Unplaced(Name),
}

/// Where every package and vehicle is. Ordered by content, so the state is
/// its own key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogiState {
    packages: BTreeMap<Name, Cargo>,
    trucks: BTreeMap<Name, Name>,
    planes: BTreeMap<Name, Name>,
}

impl LogiState {
    pub fn new(
        world: &LogiWorld,
        packages: BTreeMap<Name, Cargo>,
        trucks: BTreeMap<Name, Name>,
        planes: BTreeMap<Name, Name>,
    ) -> Result<Self, LogiStateError> {
        for (truck, loc) in &trucks {
            let home = world
                .trucks
                .get(truck)
                .ok_or_else(|| LogiStateError::UnknownVehicle(truck.clone()))?;
            let city = world
                .city_of(loc)
                .ok_or_else(|| LogiStateError::UnknownLocation(loc.clone()))?;
            if city != home {
                return Err(LogiStateError::TruckOutsideCity {
                    truck: truck.clone(),
                    location: loc.clone(),
                });
            }
        }
        for (plane, loc) in &planes {
            if !world.airplanes.contains(plane) {
                return Err(LogiStateError::UnknownVehicle(plane.clone()));
            }
            if !world.is_airport(loc) {
                return Err(LogiStateError::PlaneNotAtAirport {
                    plane: plane.clone(),
                    location: loc.clone(),
                });
            }
        }
        if let Some(t) = world.trucks.keys().find(|t| !trucks.contains_key(*t)) {
            return Err(LogiStateError::Unplaced(t.clone()));
        }
        if let Some(p) = world.airplanes.iter().find(|p| !planes.contains_key(*p)) {
            return Err(LogiStateError::Unplaced(p.clone()));
        }
        for cargo in packages.values() {
            match cargo {
                Cargo::At(l) if world.city_of(l).is_none() => {
                    return Err(LogiStateError::UnknownLocation(l.clone()))
                }
                Cargo::InTruck(v) if !trucks.contains_key(v) => {
                    return Err(LogiStateError::UnknownVehicle(v.clone()))
                }
                Cargo::InPlane(v) if !planes.contains_key(v) => {
                    return Err(LogiStateError::UnknownVehicle(v.clone()))
                }
                _ => {}
            }
        }
        Ok(LogiState {
            packages,
            trucks,
            planes,
        })
    }

    pub fn packages(&self) -> &BTreeMap<Name, Cargo> {
        &self.packages
    }

    pub fn truck_positions(&self) -> &BTreeMap<Name, Name> {
        &self.trucks
    }

    pub fn plane_positions(&self) -> &BTreeMap<Name, Name> {
        &self.planes
    }

    /// The location a package is at, or the location of the vehicle
    /// carrying it.
    pub fn whereabouts(&self, package: &Name) -> Option<&Name> {
        match self.packages.get(package)? {
            Cargo::At(l) => Some(l),
            Cargo::InTruck(t) => self.trucks.get(t),
            Cargo::InPlane(p) => self.planes.get(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogiAction {
    LoadTruck { package: Name, truck: Name, at: Name },
    UnloadTruck { package: Name, truck: Name, at: Name },
    LoadPlane { package: Name, plane: Name, at: Name },
    UnloadPlane { package: Name, plane: Name, at: Name },
    Drive { truck: Name, from: Name, to: Name, city: Name },
    Fly { plane: Name, from: Name, to: Name },
}

impl fmt::Display for LogiAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogiAction::LoadTruck { package, truck, at } => {
                write!(f, "load {package} into {truck} at {at}")
            }
            LogiAction::LoadPlane { package, plane, at } => {
                write!(f, "load {package} into {plane} at {at}")
            }
            LogiAction::UnloadTruck { package, truck, at } => {
                write!(f, "unload {package} from {truck} at {at}")
            }
            LogiAction::UnloadPlane { package, plane, at } => {
                write!(f, "unload {package} from {plane} at {at}")
            }
            LogiAction::Drive {
                truck,
                from,
                to,
                city,
            } => write!(f, "drive {truck} from {from} to {to} in {city}"),
            LogiAction::Fly { plane, from, to } => write!(f, "fly {plane} from {from} to {to}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Illegal {
    #[error("unknown object `{0}`")]
    Unknown(Name),
    #[error("package and vehicle are not in the same location")]
    NotCoLocated,
    #[error("package is not in the vehicle")]
    NotInVehicle,
    #[error("vehicle is not at the from-location")]
    NotAtFrom,
    #[error("from-location and to-location are not in the same city")]
    DifferentCities,
    #[error("from-location and to-location must both be airports")]
    NotAirports,
    #[error("from-location and to-location are the same")]
    SameLocation,
}

/// Applies `action`, enforcing every restriction of the domain.
pub fn apply(world: &LogiWorld, state: &LogiState, action: &LogiAction) -> Result<LogiState, Illegal> {
    let unknown = |n: &Name| Illegal::Unknown(n.clone());
    let mut next = state.clone();
    match action {
        LogiAction::LoadTruck { package, truck, at } | LogiAction::LoadPlane { package, plane: truck, at } => {
            let in_truck = matches!(action, LogiAction::LoadTruck { .. });
            let vehicles = if in_truck { &state.trucks } else { &state.planes };
            let vehicle_at = vehicles.get(truck).ok_or_else(|| unknown(truck))?;
            let cargo = state.packages.get(package).ok_or_else(|| unknown(package))?;
            if *cargo != Cargo::At(at.clone()) || vehicle_at != at {
                return Err(Illegal::NotCoLocated);
            }
            let inside = if in_truck {
                Cargo::InTruck(truck.clone())
            } else {
                Cargo::InPlane(truck.clone())
            };
            next.packages.insert(package.clone(), inside);
        }
        LogiAction::UnloadTruck { package, truck, at } | LogiAction::UnloadPlane { package, plane: truck, at } => {
            let in_truck = matches!(action, LogiAction::UnloadTruck { .. });
            let vehicles = if in_truck { &state.trucks } else { &state.planes };
            let vehicle_at = vehicles.get(truck).ok_or_else(|| unknown(truck))?;
            let cargo = state.packages.get(package).ok_or_else(|| unknown(package))?;
            let expected = if in_truck {
                Cargo::InTruck(truck.clone())
            } else {
                Cargo::InPlane(truck.clone())
            };
            if *cargo != expected {
                return Err(Illegal::NotInVehicle);
            }
            if vehicle_at != at {
                return Err(Illegal::NotAtFrom);
            }
            next.packages.insert(package.clone(), Cargo::At(at.clone()));
        }
        LogiAction::Drive {
            truck,
            from,
            to,
            city,
        } => {
            let now = state.trucks.get(truck).ok_or_else(|| unknown(truck))?;
            let from_city = world.city_of(from).ok_or_else(|| unknown(from))?;
            let to_city = world.city_of(to).ok_or_else(|| unknown(to))?;
            if now != from {
                return Err(Illegal::NotAtFrom);
            }
            if from_city != to_city || from_city != city {
                return Err(Illegal::DifferentCities);
            }
            if from == to {
                return Err(Illegal::SameLocation);
            }
            next.trucks.insert(truck.clone(), to.clone());
        }
        LogiAction::Fly { plane, from, to } => {
            let now = state.planes.get(plane).ok_or_else(|| unknown(plane))?;
            if !world.is_airport(from) || !world.is_airport(to) {
                return Err(Illegal::NotAirports);
            }
            if now != from {
                return Err(Illegal::NotAtFrom);
            }
            if from == to {
                return Err(Illegal::SameLocation);
            }
            next.planes.insert(plane.clone(), to.clone());
        }
    }
    Ok(next)
}

/// Every legal action, sorted by its sentence.
pub fn applicable_actions(world: &LogiWorld, state: &LogiState) -> Vec<LogiAction> {
    let mut actions = Vec::new();
    for (package, cargo) in &state.packages {
        match cargo {
            Cargo::At(loc) => {
                for (truck, at) in &state.trucks {
                    if at == loc {
                        actions.push(LogiAction::LoadTruck {
                            package: package.clone(),
                            truck: truck.clone(),
                            at: loc.clone(),
                        });
                    }
                }
                for (plane, at) in &state.planes {
                    if at == loc {
                        actions.push(LogiAction::LoadPlane {
                            package: package.clone(),
                            plane: plane.clone(),
                            at: loc.clone(),
                        });
                    }
                }
            }
            Cargo::InTruck(truck) => actions.push(LogiAction::UnloadTruck {
                package: package.clone(),
                truck: truck.clone(),
                at: state.trucks[truck].clone(),
            }),
            Cargo::InPlane(plane) => actions.push(LogiAction::UnloadPlane {
                package: package.clone(),
                plane: plane.clone(),
                at: state.planes[plane].clone(),
            }),
        }
    }
    for (truck, from) in &state.trucks {
        let city = &world.locations[from];
        for (to, c) in &world.locations {
            if c == city && to != from {
                actions.push(LogiAction::Drive {
                    truck: truck.clone(),
                    from: from.clone(),
                    to: to.clone(),
                    city: city.clone(),
                });
            }
        }
    }
    for (plane, from) in &state.planes {
        for to in world.airports.iter().filter(|a| *a != from) {
            actions.push(LogiAction::Fly {
                plane: plane.clone(),
                from: from.clone(),
                to: to.clone(),
            });
        }
    }
    actions.sort_by_cached_key(|a| a.to_string());
    actions
}

/// Target location per package.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogiGoal {
    targets: BTreeMap<Name, Name>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("package `{0}` has two goal locations")]
pub struct GoalConflict(pub Name);

impl LogiGoal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn require(&mut self, package: Name, location: Name) -> Result<(), GoalConflict> {
        match self.targets.get(&package) {
            Some(existing) if *existing != location => Err(GoalConflict(package)),
            _ => {
                self.targets.insert(package, location);
                Ok(())
            }
        }
    }

    pub fn targets(&self) -> &BTreeMap<Name, Name> {
        &self.targets
    }

    pub fn is_satisfied(&self, state: &LogiState) -> bool {
        self.targets
            .iter()
            .all(|(p, l)| state.packages.get(p) == Some(&Cargo::At(l.clone())))
    }

    /// Goal packages not yet unloaded at their target, in identifier order.
    pub fn unfinished<'a>(&'a self, state: &'a LogiState) -> impl Iterator<Item = (&'a Name, &'a Name)> {
        self.targets
            .iter()
            .filter(move |(p, l)| state.packages.get(*p) != Some(&Cargo::At((*l).clone())))
    }
}

/// Search problem over one instance.
pub struct LogiProblem<'a> {
    pub world: &'a LogiWorld,
    pub initial: &'a LogiState,
    pub goal: &'a LogiGoal,
}

impl SearchProblem for LogiProblem<'_> {
    type State = LogiState;
    type Action = LogiAction;
    type Key = LogiState;
    type Error = Infallible;

    fn initial_state(&self) -> LogiState {
        self.initial.clone()
    }

    fn is_goal(&self, state: &LogiState) -> bool {
        self.goal.is_satisfied(state)
    }

    fn successors(&self, state: &LogiState) -> Result<Vec<(LogiAction, LogiState)>, Infallible> {
        Ok(applicable_actions(self.world, state)
            .into_iter()
            .map(|a| {
                let next = apply(self.world, state, &a).expect("applicable action applies");
                (a, next)
            })
            .collect())
    }

    fn state_key(&self, state: &LogiState) -> LogiState {
        state.clone()
    }

    fn explain_rejection(&self, state: &LogiState, action: &LogiAction) -> String {
        match apply(self.world, state, action) {
            Err(e) => e.to_string(),
            Ok(_) => "action is not applicable".into(),
        }
    }
}

/// One action that moves the first unfinished package (in identifier
/// order) toward its goal, or `None` when no rule applies.
///
/// Outside its goal city a package travels truck → airport → airplane →
/// goal-city airport. Inside its goal city the city truck carries it to the
/// goal location. A vehicle that is needed but elsewhere is brought over
/// first; for airplanes the first one in identifier order is summoned.
pub fn helpful_action(world: &LogiWorld, state: &LogiState, goal: &LogiGoal) -> Option<LogiAction> {
    let (package, target) = goal.unfinished(state).next()?;
    let goal_city = world.city_of(target)?;
    let here = state.whereabouts(package)?;
    let here_city = world.city_of(here)?;
    let cargo = state.packages.get(package)?;

    let drive = |truck: &Name, to: &Name| {
        let from = &state.trucks[truck];
        (from != to).then(|| LogiAction::Drive {
            truck: truck.clone(),
            from: from.clone(),
            to: to.clone(),
            city: world.locations[from].clone(),
        })
    };

    if here_city != goal_city {
        match cargo {
            Cargo::At(loc) => {
                let airport = world.is_airport(loc);
                let truck_here = state.trucks.iter().find(|(_, at)| *at == loc).map(|(t, _)| t);
                let plane_here = state.planes.iter().find(|(_, at)| *at == loc).map(|(p, _)| p);
                match (airport, truck_here, plane_here) {
                    (false, Some(truck), _) => Some(LogiAction::LoadTruck {
                        package: package.clone(),
                        truck: truck.clone(),
                        at: loc.clone(),
                    }),
                    (true, _, Some(plane)) => Some(LogiAction::LoadPlane {
                        package: package.clone(),
                        plane: plane.clone(),
                        at: loc.clone(),
                    }),
                    (false, None, _) => drive(world.truck_of(here_city)?, loc),
                    (true, _, None) => {
                        let (plane, from) = state.planes.iter().next()?;
                        Some(LogiAction::Fly {
                            plane: plane.clone(),
                            from: from.clone(),
                            to: loc.clone(),
                        })
                    }
                }
            }
            Cargo::InTruck(truck) => {
                let airport = world.airport_of(here_city)?;
                if world.is_airport(here) {
                    Some(LogiAction::UnloadTruck {
                        package: package.clone(),
                        truck: truck.clone(),
                        at: here.clone(),
                    })
                } else {
                    drive(truck, airport)
                }
            }
            Cargo::InPlane(plane) => Some(LogiAction::Fly {
                plane: plane.clone(),
                from: here.clone(),
                to: world.airport_of(goal_city)?.clone(),
            }),
        }
    } else {
        match cargo {
            Cargo::At(loc) => {
                let truck = world.truck_of(goal_city)?;
                if state.trucks[truck] == *loc {
                    Some(LogiAction::LoadTruck {
                        package: package.clone(),
                        truck: truck.clone(),
                        at: loc.clone(),
                    })
                } else {
                    drive(truck, loc)
                }
            }
            Cargo::InTruck(truck) => {
                if here == target {
                    Some(LogiAction::UnloadTruck {
                        package: package.clone(),
                        truck: truck.clone(),
                        at: here.clone(),
                    })
                } else {
                    drive(truck, target)
                }
            }
            Cargo::InPlane(plane) => Some(LogiAction::UnloadPlane {
                package: package.clone(),
                plane: plane.clone(),
                at: here.clone(),
            }),
        }
    }
}

/// Steps the greedy procedure needs before no package is left unfinished
/// in front of the current one, as the pair (unfinished packages, helpful
/// steps to finish the first of them). Every greedy step lowers this pair
/// lexicographically. `None` when the procedure would stall or loop on the
/// first package.
pub fn progress_measure(world: &LogiWorld, state: &LogiState, goal: &LogiGoal) -> Option<(usize, usize)> {
    let unfinished = goal.unfinished(state).count();
    let Some((first, _)) = goal.unfinished(state).next() else {
        return Some((0, 0));
    };
    let mut seen = BTreeSet::new();
    let mut state = state.clone();
    let mut steps = 0;
    while goal.unfinished(&state).next().map(|(p, _)| p) == Some(first) {
        if !seen.insert(state.clone()) {
            return None;
        }
        let action = helpful_action(world, &state, goal)?;
        state = apply(world, &state, &action).ok()?;
        steps += 1;
    }
    Some((unfinished, steps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    NaiveBfs,
    HelpfulGreedyWithFallback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogiSolution {
    pub outcome: SearchOutcome<LogiAction>,
    /// The greedy rollout stalled, looped or hit the depth limit, and
    /// breadth-first search produced the outcome instead.
    pub fell_back: bool,
}

/// Follows [`helpful_action`] until the goal holds. `None` when the
/// rollout gets stuck, revisits a state, produces an illegal action or runs
/// past `max_steps`.
pub fn greedy_rollout(
    world: &LogiWorld,
    initial: &LogiState,
    goal: &LogiGoal,
    max_steps: usize,
) -> Option<Plan<LogiAction>> {
    let mut state = initial.clone();
    let mut seen = BTreeSet::new();
    let mut actions = Vec::new();
    while !goal.is_satisfied(&state) {
        if actions.len() >= max_steps || !seen.insert(state.clone()) {
            return None;
        }
        let action = helpful_action(world, &state, goal)?;
        state = apply(world, &state, &action).ok()?;
        actions.push(action);
    }
    Some(Plan::new(actions))
}

pub fn solve(
    world: &LogiWorld,
    initial: &LogiState,
    goal: &LogiGoal,
    strategy: Strategy,
    limits: SearchLimits,
) -> LogiSolution {
    if strategy == Strategy::HelpfulGreedyWithFallback {
        if let Some(plan) = greedy_rollout(world, initial, goal, limits.max_depth()) {
            return LogiSolution {
                outcome: SearchOutcome::Found(plan),
                fell_back: false,
            };
        }
    }
    let problem = LogiProblem { world, initial, goal };
    let outcome = match plan::bfs_plan(&problem, limits) {
        Ok(o) => o,
        Err(e) => match e.cause {},
    };
    LogiSolution {
        outcome,
        fell_back: strategy == Strategy::HelpfulGreedyWithFallback,
    }
}

pub fn verify(world: &LogiWorld, initial: &LogiState, goal: &LogiGoal, plan: &Plan<LogiAction>) -> PlanCheck {
    plan::verify_plan(&LogiProblem { world, initial, goal }, plan)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogiParseError {
    #[error("statement lacks the initial-condition or goal section")]
    MissingSections,
    #[error("unrecognized sentence `{0}`")]
    UnknownTemplate(String),
    #[error("`{0}` is given two different positions")]
    ConflictingPosition(Name),
    #[error("location `{0}` is not assigned to a city")]
    LocationWithoutCity(Name),
    #[error("truck `{truck}` is placed outside city `{city}`")]
    TruckOutsideCity { truck: Name, city: Name },
    #[error("airplane `{plane}` is at `{location}`, which is not an airport")]
    PlaneNotAtAirport { plane: Name, location: Name },
    #[error("goal names unknown package `{0}`")]
    UnknownGoalPackage(Name),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    State(#[from] LogiStateError),
    #[error(transparent)]
    Goal(#[from] GoalConflict),
}

fn ident(token: &str, prefix: &str) -> Option<Name> {
    let rest = token.strip_prefix(prefix)?;
    let ok = !rest.is_empty()
        && rest.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
        && !token.contains(char::is_whitespace);
    ok.then(|| Name::new(token))
}

enum LogiFact {
    Airport(Name),
    InCity(Name, Name),
    At(Name, Name),
    Inside(Name, Name),
}

fn parse_logi_fact(sentence: &str) -> Result<LogiFact, LogiParseError> {
    let unknown = || LogiParseError::UnknownTemplate(sentence.into());
    let s = sentence.trim();
    if let Some(loc) = s.strip_suffix(" is an airport") {
        return ident(loc, "location_").map(LogiFact::Airport).ok_or_else(unknown);
    }
    if let Some((loc, city)) = s.split_once(" is in the city ") {
        return ident(loc, "location_")
            .zip(ident(city, "city_"))
            .map(|(l, c)| LogiFact::InCity(l, c))
            .ok_or_else(unknown);
    }
    if let Some((obj, loc)) = s.split_once(" is at ") {
        let obj = ident(obj, "package_")
            .or_else(|| ident(obj, "truck_"))
            .or_else(|| ident(obj, "airplane_"))
            .ok_or_else(unknown)?;
        return ident(loc, "location_")
            .map(|l| LogiFact::At(obj, l))
            .ok_or_else(unknown);
    }
    if let Some((pkg, vehicle)) = s.split_once(" is in ") {
        return ident(pkg, "package_")
            .zip(ident(vehicle, "truck_").or_else(|| ident(vehicle, "airplane_")))
            .map(|(p, v)| LogiFact::Inside(p, v))
            .ok_or_else(unknown);
    }
    Err(unknown())
}

/// Reads world, initial state and goal from the dataset's templated
/// sentences. Truck `truck_K` belongs to `city_K`.
pub fn parse_logi_statement(text: &str) -> Result<(LogiWorld, LogiState, LogiGoal), LogiParseError> {
    let (initial_text, goal_text) = statement::sections(text).ok_or(LogiParseError::MissingSections)?;

    let mut airports = BTreeSet::new();
    let mut locations: BTreeMap<Name, Name> = BTreeMap::new();
    let mut at: BTreeMap<Name, Name> = BTreeMap::new();
    let mut inside: BTreeMap<Name, Name> = BTreeMap::new();
    for sentence in statement::split_facts(initial_text) {
        match parse_logi_fact(&sentence)? {
            LogiFact::Airport(l) => {
                airports.insert(l);
            }
            LogiFact::InCity(l, c) => {
                if locations.get(&l).is_some_and(|old| *old != c) {
                    return Err(WorldError::LocationInTwoCities(l).into());
                }
                locations.insert(l, c);
            }
            LogiFact::At(obj, l) => {
                if inside.contains_key(&obj) || at.get(&obj).is_some_and(|old| *old != l) {
                    return Err(LogiParseError::ConflictingPosition(obj));
                }
                at.insert(obj, l);
            }
            LogiFact::Inside(p, v) => {
                if at.contains_key(&p) || inside.get(&p).is_some_and(|old| *old != v) {
                    return Err(LogiParseError::ConflictingPosition(p));
                }
                inside.insert(p, v);
            }
        }
    }

    let mut trucks = BTreeMap::new();
    let mut truck_at = BTreeMap::new();
    let mut planes = BTreeSet::new();
    let mut plane_at = BTreeMap::new();
    let mut packages = BTreeMap::new();
    for (obj, loc) in at {
        let city = locations
            .get(&loc)
            .ok_or_else(|| LogiParseError::LocationWithoutCity(loc.clone()))?;
        if obj.as_str().starts_with("truck_") {
            let home = Name::new(format!("city_{}", obj.index().unwrap_or("")));
            if *city != home {
                return Err(LogiParseError::TruckOutsideCity { truck: obj, city: home });
            }
            trucks.insert(obj.clone(), home);
            truck_at.insert(obj, loc);
        } else if obj.as_str().starts_with("airplane_") {
            if !airports.contains(&loc) {
                return Err(LogiParseError::PlaneNotAtAirport {
                    plane: obj,
                    location: loc,
                });
            }
            planes.insert(obj.clone());
            plane_at.insert(obj, loc);
        } else {
            packages.insert(obj, Cargo::At(loc));
        }
    }
    for (p, v) in inside {
        let cargo = if v.as_str().starts_with("truck_") {
            Cargo::InTruck(v)
        } else {
            Cargo::InPlane(v)
        };
        packages.insert(p, cargo);
    }
    if let Some(a) = airports.iter().find(|a| !locations.contains_key(*a)) {
        return Err(LogiParseError::LocationWithoutCity(a.clone()));
    }

    let world = LogiWorld::new(locations, airports, trucks, planes)?;
    let state = LogiState::new(&world, packages, truck_at, plane_at)?;

    let mut goal = LogiGoal::new();
    for sentence in statement::split_facts(goal_text) {
        match parse_logi_fact(&sentence)? {
            LogiFact::At(p, l) if p.as_str().starts_with("package_") => {
                if !state.packages.contains_key(&p) {
                    return Err(LogiParseError::UnknownGoalPackage(p));
                }
                if world.city_of(&l).is_none() {
                    return Err(LogiParseError::LocationWithoutCity(l));
                }
                goal.require(p, l)?;
            }
            _ => return Err(LogiParseError::UnknownTemplate(sentence)),
        }
    }
    Ok((world, state, goal))
}

/// Renders an instance in the dataset's sentence order: airports, vehicle
/// and package positions, then city membership.
pub fn render_logi_statement(world: &LogiWorld, state: &LogiState, goal: &LogiGoal) -> String {
    let mut facts: Vec<String> = world.airports.iter().map(|a| format!("{a} is an airport")).collect();
    for (p, l) in &state.planes {
        facts.push(format!("{p} is at {l}"));
    }
    for (p, cargo) in &state.packages {
        facts.push(match cargo {
            Cargo::At(l) => format!("{p} is at {l}"),
            Cargo::InTruck(v) | Cargo::InPlane(v) => format!("{p} is in {v}"),
        });
    }
    for (t, l) in &state.trucks {
        facts.push(format!("{t} is at {l}"));
    }
    for (l, c) in &world.locations {
        facts.push(format!("{l} is in the city {c}"));
    }
    let goals: Vec<String> = goal.targets.iter().map(|(p, l)| format!("{p} is at {l}")).collect();
    format!(
        "{}, {}.\n{} {}.",
        statement::INITIAL_LEAD,
        statement::join_facts(&facts),
        statement::GOAL_LEAD,
        statement::join_facts(&goals)
    )
}

/// Parses one plan sentence as rendered by [`LogiAction`]'s `Display`.
/// Vehicles named `truck_*` are trucks, anything else an airplane.
pub fn parse_logi_action(sentence: &str) -> Result<LogiAction, LogiParseError> {
    let s = sentence.trim().trim_end_matches('.').trim();
    let unknown = || LogiParseError::UnknownTemplate(s.into());
    let words: Vec<&str> = s.split_whitespace().collect();
    let n = |w: &str| Name::new(w);
    match words.as_slice() {
        ["load", p, "into", v, "at", l] => Ok(if v.starts_with("truck_") {
            LogiAction::LoadTruck {
                package: n(p),
                truck: n(v),
                at: n(l),
            }
        } else {
            LogiAction::LoadPlane {
                package: n(p),
                plane: n(v),
                at: n(l),
            }
        }),
        ["unload", p, "from", v, "at", l] => Ok(if v.starts_with("truck_") {
            LogiAction::UnloadTruck {
                package: n(p),
                truck: n(v),
                at: n(l),
            }
        } else {
            LogiAction::UnloadPlane {
                package: n(p),
                plane: n(v),
                at: n(l),
            }
        }),
        ["drive", t, "from", a, "to", b, "in", c] => Ok(LogiAction::Drive {
            truck: n(t),
            from: n(a),
            to: n(b),
            city: n(c),
        }),
        ["fly", p, "from", a, "to", b] => Ok(LogiAction::Fly {
            plane: n(p),
            from: n(a),
            to: n(b),
        }),
        _ => Err(unknown()),
    }
}

pub fn parse_logi_plan(text: &str) -> Result<Plan<LogiAction>, LogiParseError> {
    statement::plan_lines(text)
        .flat_map(|l| l.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_logi_action)
        .collect::<Result<Vec<_>, _>>()
        .map(Plan::new)
}

/// One action sentence per line.
pub fn render_logi_plan(plan: &Plan<LogiAction>) -> String {
    let mut out = String::new();
    for (i, a) in plan.actions().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&a.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) const EXAMPLE_ONE: &str = "As initial conditions I have that, location_0_0 is an airport, location_1_0 is an airport, airplane_0 is at location_1_0, package_0 is at location_1_0, truck_0 is at location_0_0, truck_1 is at location_1_0, location_0_0 is in the city city_0, location_0_1 is in the city city_0, location_1_0 is in the city city_1 and location_1_1 is in the city city_1.\nMy goal is to have that package_0 is at location_1_1.";
    pub(crate) const EXAMPLE_TWO: &str = "As initial conditions I have that, location_0_0 is an airport, location_1_0 is an airport, airplane_0 is at location_0_0, package_0 is at location_0_1, truck_0 is at location_0_0, truck_1 is at location_1_1, location_0_0 is in the city city_0, location_0_1 is in the city city_0, location_1_0 is in the city city_1 and location_1_1 is in the city city_1.\nMy goal is to have that package_0 is at location_1_0.";

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    #[test]
    fn natural_order() {
        let mut v = vec![n("package_10"), n("package_2"), n("package_1"), n("package_01")];
        v.sort();
        assert_eq!(v, vec![n("package_1"), n("package_01"), n("package_2"), n("package_10")]);
    }

    #[test]
    fn parse_example_one() {
        let (w, s, g) = parse_logi_statement(EXAMPLE_ONE).unwrap();
        assert_eq!(w.cities().len(), 2);
        assert_eq!(w.locations().len(), 4);
        assert_eq!(w.airports().iter().cloned().collect::<Vec<_>>(), vec![n("location_0_0"), n("location_1_0")]);
        assert_eq!(s.plane_positions()[&n("airplane_0")], n("location_1_0"));
        assert_eq!(s.truck_positions()[&n("truck_0")], n("location_0_0"));
        assert_eq!(s.truck_positions()[&n("truck_1")], n("location_1_0"));
        assert_eq!(s.packages()[&n("package_0")], Cargo::At(n("location_1_0")));
        assert_eq!(g.targets()[&n("package_0")], n("location_1_1"));
    }

    #[test]
    fn example_one_plans() {
        let (w, s, g) = parse_logi_statement(EXAMPLE_ONE).unwrap();
        let load = LogiAction::LoadTruck {
            package: n("package_0"),
            truck: n("truck_1"),
            at: n("location_1_0"),
        };
        assert!(applicable_actions(&w, &s).contains(&load));
        assert_eq!(helpful_action(&w, &s, &g), Some(load));
        let expected = "load package_0 into truck_1 at location_1_0\ndrive truck_1 from location_1_0 to location_1_1 in city_1\nunload package_0 from truck_1 at location_1_1";
        for strategy in [Strategy::NaiveBfs, Strategy::HelpfulGreedyWithFallback] {
            let sol = solve(&w, &s, &g, strategy, SearchLimits::default());
            assert!(!sol.fell_back);
            let plan = sol.outcome.into_plan().unwrap();
            assert_eq!(render_logi_plan(&plan), expected);
            assert_eq!(parse_logi_plan(expected).unwrap(), plan);
        }
    }

    #[test]
    fn example_two_plans() {
        let (w, s, g) = parse_logi_statement(EXAMPLE_TWO).unwrap();
        let bfs = solve(&w, &s, &g, Strategy::NaiveBfs, SearchLimits::default())
            .outcome
            .into_plan()
            .unwrap();
        assert_eq!(bfs.len(), 7);
        assert!(verify(&w, &s, &g, &bfs).is_valid());

        let greedy = solve(&w, &s, &g, Strategy::HelpfulGreedyWithFallback, SearchLimits::default());
        assert!(!greedy.fell_back);
        let plan = greedy.outcome.into_plan().unwrap();
        assert!(verify(&w, &s, &g, &plan).is_valid());
        assert_eq!(
            render_logi_plan(&plan),
            "drive truck_0 from location_0_0 to location_0_1 in city_0\n\
             load package_0 into truck_0 at location_0_1\n\
             drive truck_0 from location_0_1 to location_0_0 in city_0\n\
             unload package_0 from truck_0 at location_0_0\n\
             load package_0 into airplane_0 at location_0_0\n\
             fly airplane_0 from location_0_0 to location_1_0\n\
             unload package_0 from airplane_0 at location_1_0"
        );
    }

    #[test]
    fn illegal_actions() {
        let (w, s, _) = parse_logi_statement(EXAMPLE_ONE).unwrap();
        let fly = LogiAction::Fly {
            plane: n("airplane_0"),
            from: n("location_1_1"),
            to: n("location_0_1"),
        };
        assert_eq!(apply(&w, &s, &fly), Err(Illegal::NotAirports));
        let unload = LogiAction::UnloadTruck {
            package: n("package_0"),
            truck: n("truck_1"),
            at: n("location_1_0"),
        };
        assert_eq!(apply(&w, &s, &unload), Err(Illegal::NotInVehicle));
        let drive = LogiAction::Drive {
            truck: n("truck_1"),
            from: n("location_1_0"),
            to: n("location_0_0"),
            city: n("city_1"),
        };
        assert_eq!(apply(&w, &s, &drive), Err(Illegal::DifferentCities));
    }

    #[test]
    fn drive_carries_contents() {
        let (w, s, _) = parse_logi_statement(EXAMPLE_ONE).unwrap();
        let s = apply(
            &w,
            &s,
            &LogiAction::LoadTruck {
                package: n("package_0"),
                truck: n("truck_1"),
                at: n("location_1_0"),
            },
        )
        .unwrap();
        let s = apply(
            &w,
            &s,
            &LogiAction::Drive {
                truck: n("truck_1"),
                from: n("location_1_0"),
                to: n("location_1_1"),
                city: n("city_1"),
            },
        )
        .unwrap();
        assert_eq!(s.packages()[&n("package_0")], Cargo::InTruck(n("truck_1")));
        assert_eq!(s.whereabouts(&n("package_0")), Some(&n("location_1_1")));
    }

    #[test]
    fn unload_plane_in_goal_city() {
        let (w, s, g) = parse_logi_statement(EXAMPLE_ONE).unwrap();
        let s = apply(
            &w,
            &s,
            &LogiAction::LoadPlane {
                package: n("package_0"),
                plane: n("airplane_0"),
                at: n("location_1_0"),
            },
        )
        .unwrap();
        assert_eq!(
            helpful_action(&w, &s, &g),
            Some(LogiAction::UnloadPlane {
                package: n("package_0"),
                plane: n("airplane_0"),
                at: n("location_1_0"),
            })
        );
    }

    #[test]
    fn plane_reaches_every_other_airport() {
        let (w, s, _) = parse_logi_statement(EXAMPLE_TWO).unwrap();
        let flights: Vec<_> = applicable_actions(&w, &s)
            .into_iter()
            .filter(|a| matches!(a, LogiAction::Fly { .. }))
            .collect();
        assert_eq!(flights.len(), 1);
    }

    #[test]
    fn goal_already_met() {
        let text = EXAMPLE_ONE.replace("package_0 is at location_1_1", "package_0 is at location_1_0");
        let (w, s, g) = parse_logi_statement(&text).unwrap();
        for strategy in [Strategy::NaiveBfs, Strategy::HelpfulGreedyWithFallback] {
            assert_eq!(
                solve(&w, &s, &g, strategy, SearchLimits::default()).outcome,
                SearchOutcome::Found(Plan::empty())
            );
        }
        assert_eq!(helpful_action(&w, &s, &g), None);
    }

    #[test]
    fn parse_errors() {
        let bad_plane = EXAMPLE_ONE.replace("airplane_0 is at location_1_0", "airplane_0 is at location_0_1");
        assert!(matches!(
            parse_logi_statement(&bad_plane),
            Err(LogiParseError::PlaneNotAtAirport { .. })
        ));
        let bad_truck = EXAMPLE_ONE.replace("truck_0 is at location_0_0", "truck_0 is at location_1_1");
        assert!(matches!(
            parse_logi_statement(&bad_truck),
            Err(LogiParseError::TruckOutsideCity { .. })
        ));
        let twice = EXAMPLE_ONE.replace(
            "package_0 is at location_1_0,",
            "package_0 is at location_1_0, package_0 is at location_0_0,",
        );
        assert_eq!(
            parse_logi_statement(&twice),
            Err(LogiParseError::ConflictingPosition(n("package_0")))
        );
        let unknown = EXAMPLE_ONE.replace("location_0_0 is an airport", "location_0_0 is a harbour");
        assert!(matches!(
            parse_logi_statement(&unknown),
            Err(LogiParseError::UnknownTemplate(_))
        ));
    }

    #[test]
    fn statement_round_trip() {
        for text in [EXAMPLE_ONE, EXAMPLE_TWO] {
            let parsed = parse_logi_statement(text).unwrap();
            let again = parse_logi_statement(&render_logi_statement(&parsed.0, &parsed.1, &parsed.2)).unwrap();
            assert_eq!(parsed, again);
        }
        assert_eq!(render_logi_statement(
            &parse_logi_statement(EXAMPLE_ONE).unwrap().0,
            &parse_logi_statement(EXAMPLE_ONE).unwrap().1,
            &parse_logi_statement(EXAMPLE_ONE).unwrap().2,
        ), EXAMPLE_ONE);
    }
}
