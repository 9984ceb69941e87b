//! Instrumented timing runs.

use std::time::Instant;

use majorant_core::{GeneratorStats, Result, UniformSource};
use majorant_oracle::Structure;
use serde::Serialize;

use crate::sampler::AnySampler;

/// Averages over `samples` generated objects of one size.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub structure: Structure,
    pub n: u64,
    pub height: Option<u64>,
    pub samples: u64,
    pub mean_random_calls: f64,
    pub mean_outer_loops: f64,
    /// Accepted proposals over all proposals.
    pub acceptance_rate: f64,
    pub mean_accept_steps: f64,
    /// Mean number of requests above the size watermark.
    pub mean_large_ops: f64,
    pub max_random_arg: u64,
    pub max_test_operand: u64,
    pub mean_ns: f64,
}

/// Draws `samples` objects from a fresh source seeded with `seed`.
pub fn measure(sampler: &AnySampler, n: u64, height: Option<u64>, samples: u64, seed: u64) -> Result<BenchRow> {
    let mut src = UniformSource::new(seed);
    let mut total = GeneratorStats::default();
    let start = Instant::now();
    for _ in 0..samples {
        let g = sampler.sample(&mut src)?;
        total.merge(&g.stats);
    }
    let elapsed = start.elapsed().as_nanos() as f64;
    let per = |x: u64| x as f64 / samples as f64;
    Ok(BenchRow {
        structure: sampler.structure(),
        n,
        height,
        samples,
        mean_random_calls: per(total.random_calls),
        mean_outer_loops: per(total.outer_loops),
        acceptance_rate: samples as f64 / total.outer_loops as f64,
        mean_accept_steps: per(total.accept_steps_executed),
        mean_large_ops: per(total.large_ops),
        max_random_arg: total.max_random_arg,
        max_test_operand: total.max_test_operand,
        mean_ns: elapsed / samples as f64,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let len = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes_of_power_laws() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(1.5))).collect();
        assert!((loglog_slope(&pts) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn measured_rows_are_consistent() {
        let sampler = AnySampler::new(Structure::Schroder, 500, 0).unwrap();
        let row = measure(&sampler, 500, None, 200, 1).unwrap();
        assert_eq!(row.samples, 200);
        assert!(row.mean_outer_loops >= 1.0);
        assert!(row.acceptance_rate > 0.0 && row.acceptance_rate <= 1.0);
        assert!(row.mean_random_calls > 500.0);
        assert!(row.max_random_arg < 500 * 500);
    }
}
