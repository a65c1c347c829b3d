//! Exact enumerative solvers built around quantified predicates over finite
//! domains.
//!
//! Every task here follows the same decomposition: a predicate that tests a
//! concrete candidate, an enumeration of all candidates, and an aggregation
//! driven by the quantifier (first witness for ∃, first counterexample for
//! ∀, breadth-first order for cost-optimal plans).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod blocksworld;
pub mod enumlab;
pub mod game24;
pub mod logistics;
pub mod pea;
pub mod plan;
pub mod quant;
pub mod random;
pub mod sat;
pub mod statement;
