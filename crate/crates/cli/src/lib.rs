//! Shared pieces of the `majorant` command: a structure-agnostic sampler
//! and the benchmark harness.

pub mod bench;
pub mod sampler;

pub use bench::{loglog_slope, measure, BenchRow};
pub use sampler::AnySampler;
