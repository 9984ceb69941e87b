//! Uniform random generation by rejection from binomial majorants.
//!
//! Three families are supported:
//!
//! * Fibonacci words: words over `{a, b}` with `#a + 2 #b = n`,
//! * Schröder paths of size `2n` (up, down and double-length flat steps),
//! * Motzkin left factors of length `n` and fixed final height.
//!
//! Every sampler follows the same two-stage scheme. First the number `m` of
//! a distinguished letter is drawn with probability `F(m) / Σ F`, by
//! proposing `m` from a (slightly modified) binomial law and accepting it
//! through a chain of ratio tests `random(trials) < threshold`. Then a word
//! with the chosen letter counts is shuffled uniformly and, for paths,
//! turned into a valid object with the cycle lemma.
//!
//! All integers touched on the sampling path are machine words; exact
//! big-integer verification lives in the separate `majorant-oracle` crate.

pub mod fibonacci;
mod intmath;
pub mod motzkin;
pub mod proposers;
pub mod rejection;
pub mod rng;
pub mod schroder;
pub mod words;

pub use fibonacci::{sample_fibonacci, FibonacciInstance, FibonacciOracle, FibonacciSampler, FibonacciWord};
pub use motzkin::{sample_motzkin, AlphaSource, MotzkinInstance, MotzkinSampler, Regime};
pub use proposers::{ExtendedBinomialParams, Which};
pub use rejection::{
    accept_m, choose_m, exact_fallback_sample, GeneratorStats, Generated, Proposer, RatioOracle, RatioTest, Side,
    StepTest, Trials,
};
pub use rng::UniformSource;
pub use schroder::{sample_schroder, SchroderInstance, SchroderOracle, SchroderSampler};
pub use words::{LatticeWord, Step, StepCounts};

/// Errors raised by the samplers.
///
/// Rejections inside the sampling loop are not errors; these variants are
/// for broken preconditions and aborted sessions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("no proposal accepted within {0} outer loops")]
    LoopLimit(u64),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
