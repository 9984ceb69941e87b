//! One sampler type over the three structures, producing text objects.

use majorant_core::{FibonacciSampler, Generated, MotzkinSampler, Result, SchroderSampler, UniformSource};
use majorant_oracle::Structure;

#[derive(Debug, Clone, Copy)]
pub enum AnySampler {
    Fib(FibonacciSampler),
    Schroder(SchroderSampler),
    Motzkin(MotzkinSampler),
}

impl AnySampler {
    /// `height` is the final height of Motzkin left factors and is ignored
    /// by the other structures.
    pub fn new(structure: Structure, n: u64, height: u64) -> Result<Self> {
        Ok(match structure {
            Structure::Fib => AnySampler::Fib(FibonacciSampler::new(n)?),
            Structure::Schroder => AnySampler::Schroder(SchroderSampler::new(n)?),
            Structure::Motzkin => AnySampler::Motzkin(MotzkinSampler::new(n, height)?),
        })
    }

    pub fn with_max_loops(self, max_loops: Option<u64>) -> Self {
        match self {
            AnySampler::Fib(s) => AnySampler::Fib(s.with_max_loops(max_loops)),
            AnySampler::Schroder(s) => AnySampler::Schroder(s.with_max_loops(max_loops)),
            AnySampler::Motzkin(s) => AnySampler::Motzkin(s.with_max_loops(max_loops)),
        }
    }

    pub fn structure(&self) -> Structure {
        match self {
            AnySampler::Fib(_) => Structure::Fib,
            AnySampler::Schroder(_) => Structure::Schroder,
            AnySampler::Motzkin(_) => Structure::Motzkin,
        }
    }

    /// Text forms: `a`/`b` words, `U`/`D`/`H` Schröder paths and
    /// `U`/`D`/`F` Motzkin factors.
    pub fn sample(&self, src: &mut UniformSource) -> Result<Generated<String>> {
        match self {
            AnySampler::Fib(s) => s.sample(src).map(|g| Generated { object: g.object.to_string(), m: g.m, stats: g.stats }),
            AnySampler::Schroder(s) => {
                s.sample(src).map(|g| Generated { object: g.object.render('H'), m: g.m, stats: g.stats })
            }
            AnySampler::Motzkin(s) => {
                s.sample(src).map(|g| Generated { object: g.object.render('F'), m: g.m, stats: g.stats })
            }
        }
    }
}
