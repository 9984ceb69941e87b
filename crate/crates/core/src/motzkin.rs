//! Motzkin left factors: words of `n` steps in `{up, down, flat}` whose
//! prefix heights are nonnegative and whose final height is `h'`.
//!
//! Internally `h = h' + 1`. A factor with `m` down steps has `m + h - 1`
//! ups and `n + 1 - h - 2m` flats, and there are
//! `F(m) = h / (n + 1) · (n + 1)! / (m! (m + h)! (n + 1 - h - 2m)!)` of them.
//! Given `m`, the sampler shuffles `m + h` ups, `m` downs and the flats,
//! picks one of the `h` rotations with all prefixes positive, and drops its
//! leading up step.
//!
//! Two regimes. When the mode `M` is at least 2 the proposal is
//! `extended_bin` with parameters `(k, α)` sized so that its mean brackets
//! the mode. Otherwise (final height close to `n`) the proposal is uniform
//! on the whole domain and the chain reduces to the bare ratios of `F`.

use crate::intmath::{ceil_sub_sqrt_div, floor_sub_sqrt_div, least_such_that};
use crate::proposers::{BasicProposer, ExtendedBinomialParams, Which};
use crate::rejection::{
    self, check_side_validity, step_is_valid, Generated, GeneratorStats, Meter, RatioOracle, RatioTest, Side,
    StepTest,
};
use crate::rng::{UniformSource, MAX_REQUEST};
use crate::words::{cycle_to_factor, shuffle_multiset, LatticeWord, StepCounts};
use crate::{contract, Error, Result};

/// Largest supported `n`.
pub const MAX_N: u64 = 1 << 24;

/// How the offset `α` of the extended generator was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaSource {
    /// `min(k - 1, ⌊k - k(M - ~m)⌋)` passed the boundary checks.
    Analytic,
    /// The closed form failed; the value is the first passing one in `[0, k)`.
    Scanned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `M >= 2`: proposals from `extended_bin`.
    Extended { params: ExtendedBinomialParams, alpha_source: AlphaSource },
    /// `M <= 1`: proposals uniform on `[0, k]`, `k = ⌊(n + 1 - h) / 2⌋`.
    Basic { k: u64 },
}

/// `(n - h - 2x)(n + 1 - h - 2x) - (x + 1)(x + 1 + h)`, the sign of
/// `RF(x) - 1`.
pub fn ratio_sign(n: i64, h: i64, x: i64) -> i64 {
    (n - h - 2 * x) * (n + 1 - h - 2 * x) - (x + 1) * (x + 1 + h)
}

/// `(4n + 4 - 3h, 4n² + 20n + 28 - 3h²)`: the real root of the ratio
/// equation is `~m = (P - √D) / 6`.
fn root_parts(n: u64, h: u64) -> (i128, i128) {
    let (n, h) = (i128::from(n), i128::from(h));
    (4 * n + 4 - 3 * h, 4 * n * n + 20 * n + 28 - 3 * h * h)
}

/// `⌈~m⌉`.
pub fn mode_closed_form(n: u64, h: u64) -> i64 {
    let (p, d) = root_parts(n, h);
    ceil_sub_sqrt_div(p, d, 6)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotzkinInstance {
    n: u64,
    h: u64,
    mode: u64,
    regime: Regime,
}

impl MotzkinInstance {
    /// Factors of length `n` ending at height `h_prime`.
    pub fn new(n: u64, h_prime: u64) -> Result<Self> {
        if n > MAX_N {
            return contract(format!("Motzkin size {n} above the supported maximum {MAX_N}"));
        }
        if h_prime > n {
            return contract(format!("final height {h_prime} outside [0, {n}]"));
        }
        let h = h_prime + 1;
        let domain_max = (n - h_prime) / 2;
        let guess = mode_closed_form(n, h).clamp(0, domain_max as i64);
        let mode = least_such_that(guess, |c| c >= 0 && ratio_sign(n as i64, h as i64, c) <= 0) as u64;
        let mut inst = MotzkinInstance { n, h, mode, regime: Regime::Basic { k: domain_max } };
        if mode >= 2 {
            inst.regime = inst.extended_regime()?;
        }
        if let Err((i, side)) = check_side_validity(&inst) {
            return Err(Error::Invariant(format!(
                "Motzkin chain n={n} h'={h_prime} has an invalid {side:?} step at i={i}"
            )));
        }
        Ok(inst)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Final height `h'` of the factors.
    pub fn h_prime(&self) -> u64 {
        self.h - 1
    }

    /// `h = h' + 1`, the sum of the shuffled word.
    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn mode(&self) -> u64 {
        self.mode
    }

    pub fn domain_max(&self) -> u64 {
        (self.n + 1 - self.h) / 2
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn params(&self) -> Option<&ExtendedBinomialParams> {
        match &self.regime {
            Regime::Extended { params, .. } => Some(params),
            Regime::Basic { .. } => None,
        }
    }

    /// Smallest `k >= 1` with `(k + 1) ~m >= (n + 1 - h) / 2`.
    fn select_k(&self) -> u64 {
        let (p, d) = root_parts(self.n, self.h);
        let width = 3 * i128::from(self.n + 1 - self.h);
        let holds = |k: i64| {
            if k < 1 {
                return false;
            }
            let k1 = i128::from(k) + 1;
            let lhs = k1 * p - width;
            lhs >= 0 && lhs * lhs >= k1 * k1 * d
        };
        let approx = (p as f64 - (d as f64).sqrt()) / 6.0;
        let guess = ((self.n + 1 - self.h) as f64 / (2.0 * approx)).ceil() as i64 - 1;
        least_such_that(guess.max(1), holds) as u64
    }

    /// `min(k - 1, ⌊k - k(M - ~m)⌋)`, clamped at 0.
    fn analytic_alpha(&self, k: u64) -> u64 {
        let (p, d) = root_parts(self.n, self.h);
        let k = i128::from(k);
        let q = 6 * k * (1 - i128::from(self.mode)) + k * p;
        let floor = floor_sub_sqrt_div(q, k * k * d, 6);
        floor.clamp(0, k as i64 - 1) as u64
    }

    fn with_params(&self, k: u64, alpha: u64, alpha_source: AlphaSource) -> Result<Self> {
        let params = ExtendedBinomialParams::new(self.mode, k, alpha)?;
        Ok(MotzkinInstance { regime: Regime::Extended { params, alpha_source }, ..*self })
    }

    /// The steps next to the mode, which are the only ones depending on `α`
    /// in a way that can break validity.
    fn boundary_valid(&self) -> bool {
        let top = self.proposal_max().min(self.domain_max());
        let m = self.mode;
        let below = [m - 2, m - 1].map(|i| (i, Side::Below));
        let above = [m, m + 1].map(|i| (i, Side::Above));
        below
            .into_iter()
            .chain(above.into_iter().filter(|&(i, _)| i < top))
            .all(|(i, side)| step_is_valid(&self.step_test(i, side), side))
    }

    fn extended_regime(&self) -> Result<Regime> {
        let k = self.select_k();
        let d = self.n + 1 - self.h;
        // Every operand is below one of these two products.
        let widest = u128::from(k) * u128::from(d) * u128::from(d);
        let tallest = u128::from(self.domain_max() + self.h + 2) * u128::from((k + 1) * self.mode + k + 1);
        if widest.max(tallest) > u128::from(MAX_REQUEST) {
            return Err(Error::Overflow("sizing the Motzkin acceptance chain"));
        }
        let analytic = self.with_params(k, self.analytic_alpha(k), AlphaSource::Analytic)?;
        if analytic.boundary_valid() {
            return Ok(analytic.regime);
        }
        for alpha in 0..k {
            let candidate = self.with_params(k, alpha, AlphaSource::Scanned)?;
            if candidate.boundary_valid() {
                return Ok(candidate.regime);
            }
        }
        Err(Error::Invariant(format!("no offset in [0, {k}) brackets the mode for n={} h={}", self.n, self.h)))
    }

    /// `(n + 1 - h - 2i)(n - h - 2i)`.
    fn flats(&self, i: u64) -> u64 {
        let d = self.n + 1 - self.h;
        (d - 2 * i) * (d - 1 - 2 * i)
    }
}

impl RatioOracle for MotzkinInstance {
    fn mode(&self) -> u64 {
        self.mode
    }

    fn proposal_max(&self) -> u64 {
        match &self.regime {
            Regime::Extended { params, .. } => params.trials(),
            Regime::Basic { k } => *k,
        }
    }

    fn domain_max(&self) -> u64 {
        MotzkinInstance::domain_max(self)
    }

    fn watermark(&self) -> u64 {
        self.n
    }

    fn step_test(&self, i: u64, side: Side) -> StepTest {
        let (h, m) = (self.h, self.mode);
        let params = match &self.regime {
            Regime::Basic { .. } => {
                let t = match side {
                    Side::Below => RatioTest::new(self.flats(i), (i + 1) * (i + 1 + h)),
                    Side::Above => RatioTest::split(i + 1, i + 1 + h, self.flats(i)),
                };
                return StepTest::single(t);
            }
            Regime::Extended { params, .. } => params,
        };
        let (k, alpha, n_trials) = (params.k(), params.alpha(), params.trials());
        let km = k * m;
        match (side, params.which()) {
            (Side::Below, _) if i + 1 < m => StepTest::single(RatioTest::new(k * self.flats(i), (i + 1 + h) * (n_trials - i))),
            (Side::Below, Which::AtPlus1) => StepTest::pair(
                RatioTest::new(k * (m + 1), km + alpha + 1),
                RatioTest::new(k * self.flats(i), (m + h) * (km + alpha)),
            ),
            (Side::Below, Which::AtMinus1) => StepTest::single(RatioTest::new(self.flats(i), m * (m + h))),
            (Side::Above, _) if i > m => StepTest::single(RatioTest::new((i + 1 + h) * (n_trials - i), k * self.flats(i))),
            (Side::Above, Which::AtMinus1) => StepTest::pair(
                RatioTest::new(km + alpha, km),
                RatioTest::new((m + h + 1) * (km + alpha + 1), k * self.flats(m)),
            ),
            (Side::Above, Which::AtPlus1) => StepTest::single(RatioTest::new((m + 1) * (m + 1 + h), self.flats(m))),
        }
    }
}

/// Uniform sampler of Motzkin left factors.
#[derive(Debug, Clone, Copy)]
pub struct MotzkinSampler {
    instance: MotzkinInstance,
    max_loops: Option<u64>,
}

impl MotzkinSampler {
    pub fn new(n: u64, h_prime: u64) -> Result<Self> {
        Ok(MotzkinSampler { instance: MotzkinInstance::new(n, h_prime)?, max_loops: None })
    }

    /// Aborts a draw after this many rejected proposals.
    pub fn with_max_loops(mut self, max_loops: Option<u64>) -> Self {
        self.max_loops = max_loops;
        self
    }

    pub fn instance(&self) -> &MotzkinInstance {
        &self.instance
    }

    /// Draws the number of down steps with probability `F(m) / Σ F`.
    pub fn choose_m(&self, src: &mut UniformSource) -> Result<(u64, GeneratorStats)> {
        match &self.instance.regime {
            Regime::Extended { params, .. } => rejection::choose_m(&self.instance, params, src, self.max_loops),
            Regime::Basic { k } => rejection::choose_m(&self.instance, &BasicProposer(*k), src, self.max_loops),
        }
    }

    pub fn sample(&self, src: &mut UniformSource) -> Result<Generated<LatticeWord>> {
        let inst = &self.instance;
        let meter = Meter::start(src, inst.n);
        let result = self.choose_m(src).and_then(|(m, stats)| {
            let counts = StepCounts::new(m + inst.h, m, inst.n + 1 - inst.h - 2 * m);
            let word = shuffle_multiset(counts, src);
            Ok((cycle_to_factor(&word, src)?, m, stats))
        });
        match result {
            Ok((word, m, mut stats)) => {
                meter.finish(src, &mut stats);
                Ok(Generated { object: word, m, stats })
            }
            Err(e) => {
                meter.finish(src, &mut GeneratorStats::default());
                Err(e)
            }
        }
    }
}

/// One uniform Motzkin left factor of length `n` and final height `h_prime`.
pub fn sample_motzkin(n: u64, h_prime: u64, src: &mut UniformSource) -> Result<LatticeWord> {
    Ok(MotzkinSampler::new(n, h_prime)?.sample(src)?.object)
}
