//! The generic rejection loop.
//!
//! A proposer draws `m` with probability `B(m) / Σ B`. The proposal is then
//! accepted with probability `F(m) / B̄(m)`, where `B̄ = B · F(M) / B(M)`
//! agrees with `F` at the mode `M`. That probability telescopes into a
//! product of per-index factors, `RB̄(i) / RF(i)` for `m <= i < M` and
//! `RF(i) / RB̄(i)` for `M <= i < m`, each of which is a ratio of small
//! integers. The engine never evaluates `F` or `B` themselves.

use crate::rng::UniformSource;
use crate::{contract, Error, Result};

/// How the outcomes of one ratio test are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trials {
    /// One draw `random(k)`.
    Single(u64),
    /// `a * b` outcomes drawn as `random(a)` then `random(b)` and read as
    /// the mixed-radix index `u * b + v`. Keeps every request below
    /// `max(a, b)` when the product itself would be large.
    Split(u64, u64),
}

impl Trials {
    pub fn total(self) -> u128 {
        match self {
            Trials::Single(k) => u128::from(k),
            Trials::Split(a, b) => u128::from(a) * u128::from(b),
        }
    }

    fn largest(self) -> u64 {
        match self {
            Trials::Single(k) => k,
            Trials::Split(a, b) => a.max(b),
        }
    }
}

/// Succeeds with probability `min(1, threshold / trials)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioTest {
    pub trials: Trials,
    pub threshold: u64,
}

impl RatioTest {
    pub const fn new(trials: u64, threshold: u64) -> Self {
        RatioTest { trials: Trials::Single(trials), threshold }
    }

    pub const fn split(a: u64, b: u64, threshold: u64) -> Self {
        RatioTest { trials: Trials::Split(a, b), threshold }
    }

    /// Largest integer this test puts on the sampling path.
    pub fn max_operand(&self) -> u64 {
        self.trials.largest().max(self.threshold)
    }

    /// `threshold <= trials`, i.e. the nominal ratio is a probability.
    pub fn is_proper(&self) -> bool {
        u128::from(self.threshold) <= self.trials.total()
    }

    pub fn run(&self, src: &mut UniformSource) -> bool {
        match self.trials {
            Trials::Single(k) => src.ratio_test(k, self.threshold),
            Trials::Split(a, b) => {
                let u = src.random(a);
                let v = src.random(b);
                let (q, r) = (self.threshold / b, self.threshold % b);
                u < q || (u == q && v < r)
            }
        }
    }
}

/// One link of an acceptance chain: one or two ratio tests that must all
/// succeed. Its acceptance probability is the product of theirs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepTest {
    first: RatioTest,
    second: Option<RatioTest>,
}

impl StepTest {
    pub const fn single(test: RatioTest) -> Self {
        StepTest { first: test, second: None }
    }

    pub const fn pair(first: RatioTest, second: RatioTest) -> Self {
        StepTest { first, second: Some(second) }
    }

    pub fn tests(&self) -> impl Iterator<Item = &RatioTest> {
        std::iter::once(&self.first).chain(self.second.as_ref())
    }

    pub fn max_operand(&self) -> u64 {
        self.tests().map(RatioTest::max_operand).max().unwrap_or(0)
    }

    /// Probability as an unreduced fraction `(numerator, denominator)`,
    /// ignoring the clamp at 1. `None` on `u128` overflow.
    pub fn probability(&self) -> Option<(u128, u128)> {
        self.tests().try_fold((1u128, 1u128), |(num, den), t| {
            Some((num.checked_mul(u128::from(t.threshold))?, den.checked_mul(t.trials.total())?))
        })
    }

    /// Runs the tests in order, stopping at the first failure.
    pub fn run(&self, src: &mut UniformSource, stats: &mut GeneratorStats) -> bool {
        for t in self.tests() {
            stats.ratio_tests += 1;
            stats.max_test_operand = stats.max_test_operand.max(t.max_operand());
            if !t.run(src) {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Index `i < M`; the step accepts with probability `RB̄(i) / RF(i)`.
    Below,
    /// Index `i >= M`; the step accepts with probability `RF(i) / RB̄(i)`.
    Above,
}

/// Per-structure description of the acceptance chain.
pub trait RatioOracle {
    /// First maximiser `M` of the target counts `F`.
    fn mode(&self) -> u64;
    /// Largest value the proposer can return.
    fn proposal_max(&self) -> u64;
    /// Largest `m` with `F(m) > 0`.
    fn domain_max(&self) -> u64;
    /// Size of the object; requests above it count as large operations.
    fn watermark(&self) -> u64;
    /// Chain link for index `i`: `i < M` on [`Side::Below`], and
    /// `M <= i < domain_max` on [`Side::Above`].
    fn step_test(&self, i: u64, side: Side) -> StepTest;
}

/// A proposal distribution over `[0, support_max]`.
pub trait Proposer {
    fn support_max(&self) -> u64;
    fn propose(&self, src: &mut UniformSource, stats: &mut GeneratorStats) -> u64;
}

/// Counters for one sampling session.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GeneratorStats {
    /// Proposals drawn by the main loop.
    pub outer_loops: u64,
    pub proposals_rejected: u64,
    /// Internal restarts of the proposer (its correction at the mode).
    pub proposer_retries: u64,
    /// Chain links entered.
    pub accept_steps_executed: u64,
    /// Individual `random(trials) < threshold` tests run.
    pub ratio_tests: u64,
    /// Largest trial count or threshold of any executed test.
    pub max_test_operand: u64,
    pub random_calls: u64,
    pub max_random_arg: u64,
    /// Requests exceeding the watermark.
    pub large_ops: u64,
}

impl GeneratorStats {
    /// Largest integer seen on the sampling path, requests and thresholds alike.
    pub fn max_value(&self) -> u64 {
        self.max_random_arg.max(self.max_test_operand)
    }

    /// Accumulates another session into this one.
    pub fn merge(&mut self, other: &GeneratorStats) {
        self.outer_loops += other.outer_loops;
        self.proposals_rejected += other.proposals_rejected;
        self.proposer_retries += other.proposer_retries;
        self.accept_steps_executed += other.accept_steps_executed;
        self.ratio_tests += other.ratio_tests;
        self.max_test_operand = self.max_test_operand.max(other.max_test_operand);
        self.random_calls += other.random_calls;
        self.max_random_arg = self.max_random_arg.max(other.max_random_arg);
        self.large_ops += other.large_ops;
    }
}

/// Per-session view of the source counters.
///
/// Installs the session watermark and a fresh request peak; `finish`
/// writes the session's counts into the stats and restores both.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Meter {
    calls: u64,
    large_ops: u64,
    watermark: u64,
    peak: u64,
}

impl Meter {
    pub(crate) fn start(src: &mut UniformSource, watermark: u64) -> Self {
        let meter = Meter {
            calls: src.calls(),
            large_ops: src.large_op_count(),
            watermark: src.watermark(),
            peak: src.replace_peak(0),
        };
        src.set_watermark(watermark);
        meter
    }

    pub(crate) fn finish(self, src: &mut UniformSource, stats: &mut GeneratorStats) {
        stats.random_calls = src.calls() - self.calls;
        stats.large_ops = src.large_op_count() - self.large_ops;
        stats.max_random_arg = src.max_request();
        src.replace_peak(self.peak.max(stats.max_random_arg));
        src.set_watermark(self.watermark);
    }
}

/// A generated object with the chosen `m` and its session counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated<T> {
    pub object: T,
    pub m: u64,
    pub stats: GeneratorStats,
}

/// Accepts `m` with probability `F(m) / B̄(m)`.
pub fn accept_m<O: RatioOracle + ?Sized>(
    oracle: &O,
    m: u64,
    src: &mut UniformSource,
    stats: &mut GeneratorStats,
) -> Result<bool> {
    if m > oracle.proposal_max() {
        return contract(format!("proposal {m} outside [0, {}]", oracle.proposal_max()));
    }
    if m > oracle.domain_max() {
        return Ok(false);
    }
    let mode = oracle.mode();
    let (range, side) = if m < mode { (m..mode, Side::Below) } else { (mode..m, Side::Above) };
    for i in range {
        stats.accept_steps_executed += 1;
        if !oracle.step_test(i, side).run(src, stats) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draws `m` with probability `F(m) / Σ F`.
///
/// Loops until a proposal is accepted, or fails with [`Error::LoopLimit`]
/// once `max_loops` proposals have been rejected.
pub fn choose_m<O, P>(
    oracle: &O,
    proposer: &P,
    src: &mut UniformSource,
    max_loops: Option<u64>,
) -> Result<(u64, GeneratorStats)>
where
    O: RatioOracle + ?Sized,
    P: Proposer + ?Sized,
{
    if proposer.support_max() != oracle.proposal_max() {
        return contract("proposer support does not match the oracle");
    }
    let mut stats = GeneratorStats::default();
    loop {
        if max_loops.is_some_and(|cap| stats.outer_loops >= cap) {
            return Err(Error::LoopLimit(stats.outer_loops));
        }
        stats.outer_loops += 1;
        let m = proposer.propose(src, &mut stats);
        if accept_m(oracle, m, src, &mut stats)? {
            return Ok((m, stats));
        }
        stats.proposals_rejected += 1;
    }
}

/// Draws an index with probability `weights[i] / Σ weights` using one
/// `random(Σ)` call and a linear scan.
///
/// Used only at tiny sizes, where the proposers cannot serve (mode 0).
pub fn exact_fallback_sample(weights: &[u64], src: &mut UniformSource) -> Result<u64> {
    let total = weights.iter().try_fold(0u64, |acc, &w| acc.checked_add(w));
    let total = match total {
        None => return Err(Error::Overflow("summing fallback weights")),
        Some(0) => return contract("fallback table has no positive weight"),
        Some(t) => t,
    };
    let mut r = src.try_random(total)?;
    for (i, &w) in weights.iter().enumerate() {
        if r < w {
            return Ok(i as u64);
        }
        r -= w;
    }
    unreachable!("draw below total weight")
}

/// Checks that every link of the chain is a genuine probability on its
/// side: each ratio test has `threshold <= trials`, and links below the
/// mode accept with probability strictly below 1.
///
/// Returns the first offending `(i, side)`.
pub fn check_side_validity<O: RatioOracle + ?Sized>(oracle: &O) -> std::result::Result<(), (u64, Side)> {
    let mode = oracle.mode();
    let top = oracle.proposal_max().min(oracle.domain_max());
    let below = (0..mode).map(|i| (i, Side::Below));
    let above = (mode..top).map(|i| (i, Side::Above));
    for (i, side) in below.chain(above) {
        if !step_is_valid(&oracle.step_test(i, side), side) {
            return Err((i, side));
        }
    }
    Ok(())
}

pub(crate) fn step_is_valid(step: &StepTest, side: Side) -> bool {
    if !step.tests().all(RatioTest::is_proper) {
        return false;
    }
    match (side, step.probability()) {
        (_, None) => false,
        (Side::Below, Some((num, den))) => num < den,
        (Side::Above, Some((num, den))) => num <= den,
    }
}
