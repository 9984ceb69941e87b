//! Seeded source of unbiased bounded integers.
//!
//! The generator is ChaCha8 (from `rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64`. Both are specified algorithms, so a given
//! seed yields the same stream on every platform and build.
//!
//! Bounded draws use Lemire's multiply-and-reject method on the native
//! 64-bit word, which is exactly uniform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{contract, Result};

/// Largest `k` accepted by [`UniformSource::random`].
pub const MAX_REQUEST: u64 = 1 << 62;

/// Instrumented source of `random(k)`, an integer uniform on `[0, k)`.
///
/// Besides drawing numbers it records the largest `k` ever requested, the
/// number of requests, and how many requests exceeded the watermark set by
/// the sampler (the size `n` of the object being generated).
#[derive(Debug, Clone)]
pub struct UniformSource {
    seed: u64,
    rng: ChaCha8Rng,
    max_request: u64,
    large_ops: u64,
    watermark: u64,
    calls: u64,
}

impl UniformSource {
    pub fn new(seed: u64) -> Self {
        UniformSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_request: 0,
            large_ops: 0,
            watermark: u64::MAX,
            calls: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sets the threshold above which a request counts as a large operation.
    pub fn set_watermark(&mut self, n: u64) {
        self.watermark = n;
    }

    pub fn watermark(&self) -> u64 {
        self.watermark
    }

    /// Largest argument ever passed to `random`.
    pub fn max_request(&self) -> u64 {
        self.max_request
    }

    /// Number of requests whose argument exceeded the watermark.
    pub fn large_op_count(&self) -> u64 {
        self.large_ops
    }

    /// Starts a fresh peak for [`max_request`](UniformSource::max_request)
    /// and returns the previous one.
    pub(crate) fn replace_peak(&mut self, peak: u64) -> u64 {
        std::mem::replace(&mut self.max_request, peak)
    }

    /// Number of `random(k)` requests served so far.
    pub fn calls(&self) -> u64 {
        self.calls
    }

    /// Returns an integer uniform on `[0, k)`.
    ///
    /// # Panics
    ///
    /// Panics when `k == 0` or `k > MAX_REQUEST`; use [`try_random`] to get
    /// the violation as an error instead.
    ///
    /// [`try_random`]: UniformSource::try_random
    #[inline]
    pub fn random(&mut self, k: u64) -> u64 {
        assert!((1..=MAX_REQUEST).contains(&k), "random({k}) outside [1, 2^62]");
        self.record(k, 1);
        self.bounded(k)
    }

    pub fn try_random(&mut self, k: u64) -> Result<u64> {
        if k == 0 || k > MAX_REQUEST {
            return contract(format!("random({k}) requires 1 <= k <= 2^62"));
        }
        Ok(self.random(k))
    }

    /// TRUE with probability `min(1, q / p)`, as `random(p) < q`.
    ///
    /// Always consumes exactly one draw so that streams do not depend on
    /// the value of `q`.
    #[inline]
    pub fn ratio_test(&mut self, p: u64, q: u64) -> bool {
        self.random(p) < q
    }

    /// Number of zeros among `draws` independent `random(radix)` calls.
    ///
    /// Each call is recorded individually in the counters. A radix of 2 is
    /// served from the bits of whole words, 64 draws at a time.
    pub fn count_zeros(&mut self, draws: u64, radix: u64) -> u64 {
        if draws == 0 {
            return 0;
        }
        if radix == 2 {
            self.record(2, draws);
            let mut zeros = 0u64;
            let mut left = draws;
            while left >= 64 {
                zeros += u64::from(self.rng.next_u64().count_zeros());
                left -= 64;
            }
            if left > 0 {
                let mask = (1u64 << left) - 1;
                zeros += left - u64::from((self.rng.next_u64() & mask).count_ones());
            }
            zeros
        } else {
            (0..draws).filter(|_| self.random(radix) == 0).count() as u64
        }
    }

    #[inline]
    fn record(&mut self, k: u64, times: u64) {
        self.calls += times;
        if k > self.max_request {
            self.max_request = k;
        }
        if k > self.watermark {
            self.large_ops += times;
        }
    }

    #[inline]
    fn bounded(&mut self, k: u64) -> u64 {
        let mut wide = u128::from(self.rng.next_u64()) * u128::from(k);
        let mut low = wide as u64;
        if low < k {
            let floor = k.wrapping_neg() % k;
            while low < floor {
                wide = u128::from(self.rng.next_u64()) * u128::from(k);
                low = wide as u64;
            }
        }
        (wide >> 64) as u64
    }
}
