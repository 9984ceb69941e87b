//! Spread of the proposal laws around their mode.

use num_traits::ToPrimitive;

use crate::exact::{extended_form, CorrectedMajorant};

/// Summary of a proposal law `B` with mode `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    /// `Σ |m - M| B(m) / Σ B(m)`.
    pub mean_abs_deviation: f64,
    /// `Σ B(m) / B(M)`.
    pub mass_over_mode: f64,
    /// `Σ underline B(m) / Σ B(m)`: mean number of attempts the proposer
    /// makes per returned value.
    pub attempts: f64,
}

fn summarize(weights: &[f64], raw_at_mode: f64, mode: usize) -> Dispersion {
    let mass: f64 = weights.iter().sum();
    let spread: f64 = weights.iter().enumerate().map(|(m, w)| m.abs_diff(mode) as f64 * w).sum();
    Dispersion {
        mean_abs_deviation: spread / mass,
        mass_over_mode: mass / weights[mode],
        attempts: (mass - weights[mode] + raw_at_mode) / mass,
    }
}

/// Dispersion of `extended_bin(M, k, α)`; `k = 1, α = 0` is `bin(M)`.
pub fn extended_dispersion(mode: u64, k: u64, alpha: u64) -> Dispersion {
    let top = ((k + 1) * mode + alpha) as usize;
    let b = CorrectedMajorant::new(extended_form(mode, k, alpha), mode);
    let mode = mode as usize;
    let ratio = |i: usize| b.ratio(i as i64).to_f64().expect("finite ratio");
    // Weights relative to B(M) = 1.
    let mut weights = vec![0.0; top + 1];
    weights[mode] = 1.0;
    for m in mode + 1..=top {
        weights[m] = weights[m - 1] * ratio(m - 1);
    }
    for m in (0..mode).rev() {
        weights[m] = weights[m + 1] / ratio(m);
    }
    let raw_at_mode = b.correction().recip().to_f64().expect("finite correction");
    summarize(&weights, raw_at_mode, mode)
}

/// Dispersion of `basic(k)` around `M = 0`.
pub fn basic_dispersion(k: u64) -> Dispersion {
    summarize(&vec![1.0; k as usize + 1], 1.0, 0)
}
