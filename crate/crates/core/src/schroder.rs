//! Schröder paths of size `2n`: up steps `(1, 1)`, down steps `(1, -1)` and
//! flat steps `(2, 0)`, never going below the axis.
//!
//! A path with `m` up steps has `m` down steps and `n - m` flat steps, and
//! there are `F_n(m) = (n + m)! / (m! (m + 1)! (n - m)!)` of them. Given
//! `m`, the sampler shuffles `m + 1` ups, `m` downs and `n - m` flats. The
//! resulting word has sum 1, so exactly one of its rotations has all
//! prefixes positive; removing that rotation's leading up step gives the
//! path.

use crate::intmath::{least_such_that, small_binomial};
use crate::proposers::BinomialProposer;
use crate::rejection::{self, Generated, GeneratorStats, Meter, RatioOracle, RatioTest, Side, StepTest};
use crate::rng::UniformSource;
use crate::words::{cycle_to_factor, shuffle_multiset, LatticeWord, StepCounts};
use crate::{contract, Result};

/// Largest supported `n`.
pub const MAX_N: u64 = 1 << 30;

/// `(n - x)(n + 1 + x) - (x + 1)(x + 2)`, the sign of `RF_n(x) - 1`.
pub fn ratio_sign(n: i64, x: i64) -> i64 {
    (n - x) * (n + 1 + x) - (x + 1) * (x + 2)
}

/// `⌈-1 + √(2n² + 2n) / 2⌉ = ⌈√(n(n+1)/2)⌉ - 1`; this is `-1` at `n = 0`.
pub fn mode_closed_form(n: u64) -> i64 {
    let t = n * (n + 1) / 2;
    let mut r = t.isqrt();
    if r * r < t {
        r += 1;
    }
    r as i64 - 1
}

/// Smallest `m >= 0` with `F_n(m + 1) <= F_n(m)`.
pub fn mode(n: u64) -> u64 {
    let ni = n as i64;
    let guess = mode_closed_form(n).max(0);
    least_such_that(guess, |c| c >= 0 && ratio_sign(ni, c) <= 0) as u64
}

/// `(n - m)(n + 1 + m) - (2M - m)(m + 2)`: positive iff `RB̄(m) < RF_n(m)`.
pub fn majorant_gap(n: i64, mode: i64, m: i64) -> i64 {
    (n - m) * (n + 1 + m) - (2 * mode - m) * (m + 2)
}

/// `F_n(m)` for tiny `n`.
fn small_count(n: u64, m: u64) -> u64 {
    small_binomial(n + m, 2 * m) * small_binomial(2 * m, m) / (m + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchroderInstance {
    n: u64,
    mode: u64,
}

impl SchroderInstance {
    pub fn new(n: u64) -> Result<Self> {
        if n > MAX_N {
            return contract(format!("Schröder size {n} above the supported maximum {MAX_N}"));
        }
        Ok(SchroderInstance { n, mode: mode(n) })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mode(&self) -> u64 {
        self.mode
    }

    pub fn domain_max(&self) -> u64 {
        self.n
    }
}

/// Acceptance chain for `n >= 2`, where `M >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchroderOracle {
    instance: SchroderInstance,
}

impl SchroderOracle {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return contract(format!("the Schröder chain needs n >= 2, got {n}"));
        }
        Ok(SchroderOracle { instance: SchroderInstance::new(n)? })
    }

    pub fn instance(&self) -> &SchroderInstance {
        &self.instance
    }
}

impl RatioOracle for SchroderOracle {
    fn mode(&self) -> u64 {
        self.instance.mode
    }

    fn proposal_max(&self) -> u64 {
        2 * self.instance.mode
    }

    fn domain_max(&self) -> u64 {
        self.instance.n
    }

    /// The path spans `2n` columns, and the shuffle alone asks for numbers
    /// up to `n + m + 1`.
    fn watermark(&self) -> u64 {
        2 * self.instance.n
    }

    fn step_test(&self, i: u64, side: Side) -> StepTest {
        let (n, mode) = (self.instance.n, self.instance.mode);
        let target = (n + i + 1) * (n - i);
        let test = match side {
            // (n + i + 1)(n - i) reaches n² for i(i + 1) <= n; those few
            // links draw the two factors separately.
            Side::Below if target >= n * n => {
                RatioTest::split(n + i + 1, n - i, (i + 2) * (2 * mode - i - u64::from(i + 1 == mode)))
            }
            Side::Below => RatioTest::new(target, (i + 2) * (2 * mode - i - u64::from(i + 1 == mode))),
            Side::Above => RatioTest::new((i + 2) * (2 * mode - i + u64::from(i == mode)), target),
        };
        StepTest::single(test)
    }
}

/// Uniform sampler of Schröder paths of size `2n`.
#[derive(Debug, Clone, Copy)]
pub struct SchroderSampler {
    instance: SchroderInstance,
    chain: Option<(SchroderOracle, BinomialProposer)>,
    max_loops: Option<u64>,
}

impl SchroderSampler {
    pub fn new(n: u64) -> Result<Self> {
        let instance = SchroderInstance::new(n)?;
        let chain = if n >= 2 {
            Some((SchroderOracle { instance }, BinomialProposer::new(instance.mode)?))
        } else {
            None
        };
        Ok(SchroderSampler { instance, chain, max_loops: None })
    }

    /// Aborts a draw after this many rejected proposals.
    pub fn with_max_loops(mut self, max_loops: Option<u64>) -> Self {
        self.max_loops = max_loops;
        self
    }

    pub fn instance(&self) -> &SchroderInstance {
        &self.instance
    }

    pub fn oracle(&self) -> Option<&SchroderOracle> {
        self.chain.as_ref().map(|(o, _)| o)
    }

    /// Draws the number of up steps with probability `F_n(m) / S_n`.
    pub fn choose_m(&self, src: &mut UniformSource) -> Result<(u64, GeneratorStats)> {
        match &self.chain {
            Some((oracle, proposer)) => rejection::choose_m(oracle, proposer, src, self.max_loops),
            None => {
                let n = self.instance.n;
                let weights: Vec<u64> = (0..=n).map(|m| small_count(n, m)).collect();
                let m = rejection::exact_fallback_sample(&weights, src)?;
                Ok((m, GeneratorStats { outer_loops: 1, ..Default::default() }))
            }
        }
    }

    /// The path as a word over up, down and flat steps (a flat step standing
    /// for the double-width horizontal step).
    pub fn sample(&self, src: &mut UniformSource) -> Result<Generated<LatticeWord>> {
        let n = self.instance.n;
        let meter = Meter::start(src, 2 * n);
        let result = self.choose_m(src).and_then(|(m, stats)| {
            let word = shuffle_multiset(StepCounts::new(m + 1, m, n - m), src);
            Ok((cycle_to_factor(&word, src)?, m, stats))
        });
        match result {
            Ok((path, m, mut stats)) => {
                meter.finish(src, &mut stats);
                Ok(Generated { object: path, m, stats })
            }
            Err(e) => {
                meter.finish(src, &mut GeneratorStats::default());
                Err(e)
            }
        }
    }
}

/// One uniform Schröder path of size `2n`.
pub fn sample_schroder(n: u64, src: &mut UniformSource) -> Result<LatticeWord> {
    Ok(SchroderSampler::new(n)?.sample(src)?.object)
}
