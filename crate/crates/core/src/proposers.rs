//! Initial generators for the first value of `m`.
//!
//! * [`basic`]: uniform on `[0, k]`.
//! * [`bin`]: `C(2M, m)` fair-coin counts, with the weight at `M` lowered
//!   to that of `M + 1`.
//! * [`extended_bin`]: `k^(N-m) C(N, m)` with `N = (k+1)M + α`, i.e. the
//!   number of zeros among `N` draws of `random(k+1)`, with the weight at
//!   `M` lowered to the larger of its two neighbours.

use crate::rejection::{GeneratorStats, Proposer};
use crate::rng::UniformSource;
use crate::{contract, Result};

/// Uniform integer on `[0, k]`.
pub fn basic(k: u64, src: &mut UniformSource) -> u64 {
    src.random(k + 1)
}

/// Draws `m` on `[0, 2M]` with weights `C(2M, m)`, except at `m = M` where
/// the weight is `C(2M, M) · M / (M + 1) = C(2M, M + 1)`.
pub fn bin(mode: u64, src: &mut UniformSource, stats: &mut GeneratorStats) -> Result<u64> {
    if mode == 0 {
        return contract("bin(M) requires M >= 1");
    }
    Ok(bin_unchecked(mode, src, stats))
}

fn bin_unchecked(mode: u64, src: &mut UniformSource, stats: &mut GeneratorStats) -> u64 {
    loop {
        let m = src.count_zeros(2 * mode, 2);
        if m == mode && src.random(mode + 1) == 0 {
            stats.proposer_retries += 1;
            continue;
        }
        return m;
    }
}

/// Which neighbour's weight the extended generator copies at the mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    /// `B(M) = B(M + 1)`.
    AtPlus1,
    /// `B(M) = B(M - 1)`.
    AtMinus1,
}

impl Which {
    /// `AtPlus1` iff `(kM+α+1)(kM+α) >= k²M(M+1)`, i.e. iff the unmodified
    /// weight at `M + 1` is at least the one at `M - 1`.
    pub fn select(mode: u64, k: u64, alpha: u64) -> Which {
        let km = u128::from(k) * u128::from(mode);
        let a = u128::from(alpha);
        let lhs = (km + a + 1) * (km + a);
        let rhs = u128::from(k) * km * u128::from(mode + 1);
        if lhs >= rhs {
            Which::AtPlus1
        } else {
            Which::AtMinus1
        }
    }
}

/// Parameters of the extended binomial generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtendedBinomialParams {
    mode: u64,
    k: u64,
    alpha: u64,
    which: Which,
}

impl ExtendedBinomialParams {
    /// Requires `M >= 1`, `k >= 1` and `0 <= α <= k - 1`; `which` is derived.
    pub fn new(mode: u64, k: u64, alpha: u64) -> Result<Self> {
        if mode == 0 || k == 0 || alpha >= k {
            return contract(format!("extended_bin needs M >= 1, k >= 1, 0 <= alpha < k (M={mode}, k={k}, alpha={alpha})"));
        }
        let trials = (k + 1).checked_mul(mode).and_then(|t| t.checked_add(alpha));
        if trials.is_none_or(|t| t > crate::rng::MAX_REQUEST) {
            return Err(crate::Error::Overflow("sizing the extended binomial generator"));
        }
        Ok(ExtendedBinomialParams { mode, k, alpha, which: Which::select(mode, k, alpha) })
    }

    pub fn mode(&self) -> u64 {
        self.mode
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn which(&self) -> Which {
        self.which
    }

    /// Number of `random(k+1)` draws per attempt, `(k+1)M + α`; also the
    /// largest value the generator can return.
    pub fn trials(&self) -> u64 {
        (self.k + 1) * self.mode + self.alpha
    }

    /// The retry test applied when the count lands on `M`, as
    /// `(trials, threshold)`: the draw is kept iff `random(trials) < threshold`.
    pub fn mode_correction(&self) -> (u64, u64) {
        let km = self.k * self.mode;
        match self.which {
            Which::AtPlus1 => (self.k * (self.mode + 1), km + self.alpha),
            Which::AtMinus1 => (km + self.alpha + 1, km),
        }
    }
}

/// Draws `m` on `[0, (k+1)M + α]` with weights `B_M^{k,α}(m)`.
pub fn extended_bin(params: &ExtendedBinomialParams, src: &mut UniformSource, stats: &mut GeneratorStats) -> u64 {
    let (trials, threshold) = params.mode_correction();
    loop {
        let m = src.count_zeros(params.trials(), params.k + 1);
        if m == params.mode && !src.ratio_test(trials, threshold) {
            stats.proposer_retries += 1;
            continue;
        }
        return m;
    }
}

/// [`basic`] as a proposer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasicProposer(pub u64);

impl Proposer for BasicProposer {
    fn support_max(&self) -> u64 {
        self.0
    }

    fn propose(&self, src: &mut UniformSource, _: &mut GeneratorStats) -> u64 {
        basic(self.0, src)
    }
}

/// [`bin`] as a proposer; the mode is checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomialProposer(u64);

impl BinomialProposer {
    pub fn new(mode: u64) -> Result<Self> {
        if mode == 0 {
            return contract("bin(M) requires M >= 1");
        }
        Ok(BinomialProposer(mode))
    }
}

impl Proposer for BinomialProposer {
    fn support_max(&self) -> u64 {
        2 * self.0
    }

    fn propose(&self, src: &mut UniformSource, stats: &mut GeneratorStats) -> u64 {
        bin_unchecked(self.0, src, stats)
    }
}

impl Proposer for ExtendedBinomialParams {
    fn support_max(&self) -> u64 {
        self.trials()
    }

    fn propose(&self, src: &mut UniformSource, stats: &mut GeneratorStats) -> u64 {
        extended_bin(self, src, stats)
    }
}
