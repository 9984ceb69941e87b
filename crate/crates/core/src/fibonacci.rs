//! Fibonacci words: words over `{a, b}` with `#a + 2 #b = n`.
//!
//! There are `F_n(m) = C(n - m, m)` such words with `m` letters `b`, and
//! `Σ_m F_n(m)` is the `n`-th Fibonacci number (`F_0 = F_1 = 1`). The
//! number of `b`s is drawn with the `bin(M)` proposer; the word is then a
//! uniform shuffle of `n - 2m` letters `a` and `m` letters `b`.

use std::fmt;

use crate::intmath::{ceil_sub_sqrt_div, least_such_that, small_binomial};
use crate::proposers::BinomialProposer;
use crate::rejection::{self, Generated, GeneratorStats, Meter, RatioOracle, RatioTest, Side, StepTest};
use crate::rng::UniformSource;
use crate::words::shuffle_indices;
use crate::{contract, Result};

/// Largest supported `n`; keeps every test operand below `2^62`.
pub const MAX_N: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FibonacciWord(Vec<Letter>);

impl FibonacciWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// `#a + 2 #b`.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|l| if *l == Letter::A { 1 } else { 2 }).sum()
    }

    pub fn count_b(&self) -> u64 {
        self.0.iter().filter(|l| **l == Letter::B).count() as u64
    }

    pub fn parse(text: &str) -> Option<Self> {
        text.chars()
            .map(|c| match c {
                'a' => Some(Letter::A),
                'b' => Some(Letter::B),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(FibonacciWord)
    }
}

impl fmt::Display for FibonacciWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(if *l == Letter::A { "a" } else { "b" })?;
        }
        Ok(())
    }
}

/// `(n - 2x)(n - 1 - 2x) - (x + 1)(n - x)`, the sign of `RF_n(x) - 1`.
pub fn ratio_sign(n: i64, x: i64) -> i64 {
    (n - 2 * x) * (n - 1 - 2 * x) - (x + 1) * (n - x)
}

/// `⌈(5n - 3 - √(5n² + 10n + 9)) / 10⌉`.
pub fn mode_closed_form(n: u64) -> i64 {
    let n = i128::from(n);
    ceil_sub_sqrt_div(5 * n - 3, 5 * n * n + 10 * n + 9, 10)
}

/// Smallest `m >= 0` with `F_n(m + 1) <= F_n(m)`.
pub fn mode(n: u64) -> u64 {
    let ni = n as i64;
    let guess = mode_closed_form(n).max(0);
    least_such_that(guess, |c| c >= 0 && ratio_sign(ni, c) <= 0) as u64
}

/// `(n - 2m)(n - 2m - 1) - (2M - m)(n - m)`: positive iff the majorant
/// ratio `RB̄(m)` is below `RF_n(m)`.
pub fn majorant_gap(n: i64, mode: i64, m: i64) -> i64 {
    (n - 2 * m) * (n - 2 * m - 1) - (2 * mode - m) * (n - m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibonacciInstance {
    n: u64,
    mode: u64,
}

impl FibonacciInstance {
    pub fn new(n: u64) -> Result<Self> {
        if n > MAX_N {
            return contract(format!("Fibonacci size {n} above the supported maximum {MAX_N}"));
        }
        Ok(FibonacciInstance { n, mode: mode(n) })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mode(&self) -> u64 {
        self.mode
    }

    pub fn domain_max(&self) -> u64 {
        self.n / 2
    }
}

/// Acceptance chain for `n >= 3`, where `M >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibonacciOracle {
    instance: FibonacciInstance,
}

impl FibonacciOracle {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 {
            return contract(format!("the Fibonacci chain needs n >= 3, got {n}"));
        }
        Ok(FibonacciOracle { instance: FibonacciInstance::new(n)? })
    }

    pub fn instance(&self) -> &FibonacciInstance {
        &self.instance
    }
}

impl RatioOracle for FibonacciOracle {
    fn mode(&self) -> u64 {
        self.instance.mode
    }

    fn proposal_max(&self) -> u64 {
        2 * self.instance.mode
    }

    fn domain_max(&self) -> u64 {
        self.instance.domain_max()
    }

    fn watermark(&self) -> u64 {
        self.instance.n
    }

    fn step_test(&self, i: u64, side: Side) -> StepTest {
        let (n, mode) = (self.instance.n, self.instance.mode);
        let pairs = (n - 2 * i) * (n - 2 * i - 1);
        let test = match side {
            Side::Below => RatioTest::new(pairs, (n - i) * (2 * mode - i - u64::from(i + 1 == mode))),
            Side::Above => RatioTest::new((n - i) * (2 * mode - i + u64::from(i == mode)), pairs),
        };
        StepTest::single(test)
    }
}

/// Uniform sampler of Fibonacci words of weight `n`.
#[derive(Debug, Clone, Copy)]
pub struct FibonacciSampler {
    instance: FibonacciInstance,
    chain: Option<(FibonacciOracle, BinomialProposer)>,
    max_loops: Option<u64>,
}

impl FibonacciSampler {
    pub fn new(n: u64) -> Result<Self> {
        let instance = FibonacciInstance::new(n)?;
        let chain = if n >= 3 {
            Some((FibonacciOracle { instance }, BinomialProposer::new(instance.mode)?))
        } else {
            None
        };
        Ok(FibonacciSampler { instance, chain, max_loops: None })
    }

    /// Aborts a draw after this many rejected proposals.
    pub fn with_max_loops(mut self, max_loops: Option<u64>) -> Self {
        self.max_loops = max_loops;
        self
    }

    pub fn instance(&self) -> &FibonacciInstance {
        &self.instance
    }

    pub fn oracle(&self) -> Option<&FibonacciOracle> {
        self.chain.as_ref().map(|(o, _)| o)
    }

    /// Draws the number of `b`s with probability `F_n(m) / Σ F_n`.
    pub fn choose_m(&self, src: &mut UniformSource) -> Result<(u64, GeneratorStats)> {
        match &self.chain {
            Some((oracle, proposer)) => rejection::choose_m(oracle, proposer, src, self.max_loops),
            None => {
                let n = self.instance.n;
                let weights: Vec<u64> = (0..=n / 2).map(|m| small_binomial(n - m, m)).collect();
                let m = rejection::exact_fallback_sample(&weights, src)?;
                Ok((m, GeneratorStats { outer_loops: 1, ..Default::default() }))
            }
        }
    }

    pub fn sample(&self, src: &mut UniformSource) -> Result<Generated<FibonacciWord>> {
        let meter = Meter::start(src, self.instance.n);
        let drawn = self.choose_m(src);
        let result = drawn.map(|(m, mut stats)| {
            let order = shuffle_indices(&[self.instance.n - 2 * m, m], src);
            let word = FibonacciWord(order.into_iter().map(|j| if j == 0 { Letter::A } else { Letter::B }).collect());
            meter.finish(src, &mut stats);
            Generated { object: word, m, stats }
        });
        if result.is_err() {
            meter.finish(src, &mut GeneratorStats::default());
        }
        result
    }
}

/// One uniform Fibonacci word of weight `n`.
pub fn sample_fibonacci(n: u64, src: &mut UniformSource) -> Result<FibonacciWord> {
    Ok(FibonacciSampler::new(n)?.sample(src)?.object)
}
