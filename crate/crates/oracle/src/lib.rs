//! Slow, exact reference machinery for the majorant samplers.
//!
//! Big-integer counts and enumerations give the ground truth for
//! uniformity tests; exact rational arithmetic re-derives every acceptance
//! probability of the rejection chains. Nothing here is used on the
//! sampling path.

pub mod chisq;
pub mod counts;
pub mod dispersion;
pub mod enumerate;
pub mod exact;
pub mod verify;

pub use chisq::{chi_square, ChiSquareReport};
pub use counts::{count_fibonacci, count_motzkin, count_schroder, CountTable};
pub use enumerate::{enumerate_fibonacci, enumerate_motzkin, enumerate_schroder};
pub use exact::ExactRational;
pub use majorant_core::exact_fallback_sample;
pub use verify::{verify_fibonacci, verify_motzkin, verify_schroder, verify_sweep, CheckReport, Structure};

/// Largest size accepted by the count tables.
pub const COUNT_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{what}: size {n} above the bound {bound}")]
    BoundExceeded { what: &'static str, n: u64, bound: u64 },
    #[error("{0}")]
    Invalid(String),
}
