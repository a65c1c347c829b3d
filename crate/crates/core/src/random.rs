//! Random instance generators for tests and benchmarks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::blocksworld::{BwGoal, BwState, Position, Support};
use crate::logistics::{Cargo, LogiGoal, LogiState, LogiWorld, Name};
use crate::sat::{CnfFormula, Literal};

/// Clauses of 1..=`max_width` distinct variables with random signs.
pub fn random_cnf<R: Rng + ?Sized>(rng: &mut R, num_vars: u32, num_clauses: usize, max_width: usize) -> CnfFormula {
    assert!(num_vars > 0 && max_width > 0);
    let vars: Vec<u32> = (1..=num_vars).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            let width = rng.gen_range(1..=max_width.min(num_vars as usize));
            vars.choose_multiple(rng, width)
                .map(|&v| Literal::new(v, rng.gen_bool(0.5)))
                .collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("generated clauses are in range")
}

/// Every clause has exactly `width` distinct variables.
pub fn random_kcnf<R: Rng + ?Sized>(rng: &mut R, num_vars: u32, num_clauses: usize, width: usize) -> CnfFormula {
    assert!(width > 0 && width <= num_vars as usize);
    let vars: Vec<u32> = (1..=num_vars).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            vars.choose_multiple(rng, width)
                .map(|&v| Literal::new(v, rng.gen_bool(0.5)))
                .collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("generated clauses are in range")
}

const COLORS: [&str; 8] = ["red", "blue", "orange", "yellow", "white", "magenta", "black", "cyan"];

pub fn block_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match COLORS.get(i) {
            Some(c) => String::from(*c),
            None => format!("b{i}"),
        })
        .collect()
}

/// Random towers, hand empty.
fn random_towers<R: Rng + ?Sized>(rng: &mut R, blocks: &[String]) -> BTreeMap<String, Position> {
    let mut order = blocks.to_vec();
    order.shuffle(rng);
    let mut positions = BTreeMap::new();
    let mut below: Option<String> = None;
    for b in order {
        let pos = match &below {
            Some(x) if rng.gen_bool(0.5) => Position::On(x.clone()),
            _ => Position::OnTable,
        };
        positions.insert(b.clone(), pos);
        below = Some(b);
    }
    positions
}

/// An initial state and a partial goal taken from another random
/// configuration of `n` blocks.
pub fn random_blocksworld<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (BwState, BwGoal) {
    let blocks = block_names(n);
    let mut initial = random_towers(rng, &blocks);
    if rng.gen_bool(0.2) {
        // hold one clear block
        let state = BwState::new(initial.clone()).expect("towers are valid");
        let clear: Vec<&str> = state.clear_blocks().into_iter().collect();
        if let Some(b) = clear.choose(rng) {
            initial.insert(String::from(*b), Position::Held);
        }
    }
    let target = random_towers(rng, &blocks);
    let mut goal = BwGoal::new();
    for (b, p) in target {
        let support = match p {
            Position::On(x) => Support::Block(x),
            _ => Support::Table,
        };
        if matches!(support, Support::Block(_)) || rng.gen_bool(0.25) {
            goal.require(b, support).expect("one support per block");
        }
    }
    (BwState::new(initial).expect("generated state is valid"), goal)
}

/// Shape of a random logistics instance.
#[derive(Clone, Copy, Debug)]
pub struct LogiShape {
    pub cities: usize,
    pub locations_per_city: usize,
    pub packages: usize,
    pub airplanes: usize,
}

/// Dataset-style names: `location_C_I` in `city_C`, airport `location_C_0`,
/// `truck_C` in `city_C`.
pub fn random_logistics<R: Rng + ?Sized>(rng: &mut R, shape: LogiShape) -> (LogiWorld, LogiState, LogiGoal) {
    assert!(shape.cities > 0 && shape.locations_per_city > 0);
    let mut locations = BTreeMap::new();
    let mut airports = BTreeSet::new();
    let mut trucks = BTreeMap::new();
    let mut truck_at = BTreeMap::new();
    let mut all_locations = Vec::new();
    for c in 0..shape.cities {
        let city = Name::new(format!("city_{c}"));
        for i in 0..shape.locations_per_city {
            let loc = Name::new(format!("location_{c}_{i}"));
            locations.insert(loc.clone(), city.clone());
            all_locations.push(loc);
        }
        airports.insert(Name::new(format!("location_{c}_0")));
        let truck = Name::new(format!("truck_{c}"));
        trucks.insert(truck.clone(), city);
        let spot = rng.gen_range(0..shape.locations_per_city);
        truck_at.insert(truck, Name::new(format!("location_{c}_{spot}")));
    }
    let airport_list: Vec<Name> = airports.iter().cloned().collect();
    let planes: BTreeSet<Name> = (0..shape.airplanes).map(|k| Name::new(format!("airplane_{k}"))).collect();
    let plane_at = planes
        .iter()
        .map(|p| (p.clone(), airport_list.choose(rng).unwrap().clone()))
        .collect();
    let mut packages = BTreeMap::new();
    let mut goal = LogiGoal::new();
    for k in 0..shape.packages {
        let p = Name::new(format!("package_{k}"));
        packages.insert(p.clone(), Cargo::At(all_locations.choose(rng).unwrap().clone()));
        goal.require(p, all_locations.choose(rng).unwrap().clone())
            .expect("one target per package");
    }
    let world = LogiWorld::new(locations, airports, trucks, planes).expect("generated world is valid");
    let state = LogiState::new(&world, packages, truck_at, plane_at).expect("generated state is valid");
    (world, state, goal)
}
