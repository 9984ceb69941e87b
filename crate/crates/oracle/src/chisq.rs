//! Pearson goodness of fit at significance `10^-3`.

use serde::Serialize;

use crate::OracleError;

/// Standard normal quantile at 0.999.
const Z_999: f64 = 3.090_232_306_167_813;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: u64,
    pub threshold: f64,
    pub pass: bool,
}

/// Upper 0.999 quantile of chi-square with `dof` degrees of freedom, by the
/// Wilson–Hilferty cube approximation.
pub fn quantile_999(dof: u64) -> f64 {
    if dof == 0 {
        return 0.0;
    }
    let d = dof as f64;
    let c = 2.0 / (9.0 * d);
    d * (1.0 - c + Z_999 * c.sqrt()).powi(3)
}

/// Scores `observed` counts against `expected` weights (any positive
/// scale).
///
/// Cells with zero expected weight are left out of the statistic; a single
/// observation in such a cell fails the test outright.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Result<ChiSquareReport, OracleError> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(OracleError::Invalid("observed and expected tables differ in length".into()));
    }
    if expected.iter().any(|&w| !w.is_finite() || w < 0.0) {
        return Err(OracleError::Invalid("expected weights must be finite and nonnegative".into()));
    }
    let total: u64 = observed.iter().sum();
    if total < 10 * observed.len() as u64 {
        return Err(OracleError::Invalid(format!(
            "{total} observations for {} categories; need at least 10 per category",
            observed.len()
        )));
    }
    let mass: f64 = expected.iter().sum();
    if mass <= 0.0 {
        return Err(OracleError::Invalid("expected weights sum to zero".into()));
    }
    let mut statistic = 0.0;
    let mut cells = 0u64;
    let mut impossible = false;
    for (&o, &w) in observed.iter().zip(expected) {
        if w == 0.0 {
            impossible |= o > 0;
            continue;
        }
        let e = total as f64 * w / mass;
        statistic += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    let dof = cells.saturating_sub(1);
    let threshold = quantile_999(dof);
    Ok(ChiSquareReport { statistic, dof, threshold, pass: !impossible && statistic <= threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_are_close_to_tables() {
        // Reference 0.999 quantiles.
        for (dof, q) in [(1, 10.828), (5, 20.515), (10, 29.588), (88, 134.642)] {
            let approx = quantile_999(dof);
            assert!((approx - q).abs() / q < 0.035, "dof={dof}: {approx}");
        }
    }

    #[test]
    fn proportional_observations_pass() {
        let r = chi_square(&[100, 200, 300], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
        assert_eq!(r.dof, 2);
    }

    #[test]
    fn gross_deviation_fails() {
        assert!(!chi_square(&[600_000, 400_000], &[1.0, 1.0]).unwrap().pass);
    }

    #[test]
    fn zero_weight_cells() {
        let r = chi_square(&[50, 0, 50], &[1.0, 0.0, 1.0]).unwrap();
        assert!(r.pass);
        assert_eq!(r.dof, 1);
        assert!(!chi_square(&[50, 1, 50], &[1.0, 0.0, 1.0]).unwrap().pass);
    }

    #[test]
    fn preconditions() {
        assert!(chi_square(&[5, 5], &[1.0, 1.0]).is_err());
        assert!(chi_square(&[50], &[1.0, 1.0]).is_err());
        assert!(chi_square(&[50, 50], &[0.0, 0.0]).is_err());
    }
}
