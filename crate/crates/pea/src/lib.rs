//! Std companion to `pea-core`: datasets, candidate programs, synthesis,
//! benchmarking and reports.

pub use pea_core;

pub mod candidate;
pub mod dataset;
pub mod judge;
pub mod native;
pub mod task;
pub mod provider;
pub mod synthesis;
pub mod templates;
pub mod bench;
