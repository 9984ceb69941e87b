//! Exact consecutive-term ratios from factorial expressions.
//!
//! Every count used by the samplers is, up to a factor independent of `m`,
//! a product of factorials of affine functions of `m`, times a geometric
//! factor. The ratio `X(m + 1) / X(m)` then cancels down to a few short
//! range products, which keeps the rationals small while never relying on
//! the hand-simplified formulas used on the sampling path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type ExactRational = BigRational;

pub fn int(v: impl Into<BigInt>) -> ExactRational {
    ExactRational::from_integer(v.into())
}

/// `a! / b!` for `a, b >= 0`.
pub fn factorial_ratio(a: i64, b: i64) -> ExactRational {
    assert!(a >= 0 && b >= 0, "factorial of a negative number");
    let range = |lo: i64, hi: i64| (lo + 1..=hi).fold(BigInt::one(), |acc, v| acc * v);
    if a >= b {
        int(range(b, a))
    } else {
        int(range(a, b)).recip()
    }
}

/// `X(m) ∝ g^m · Π_j (s_j m + c_j)!^{e_j}`.
#[derive(Debug, Clone)]
pub struct FactorialForm {
    /// `(s, c, e)` for the factor `(s m + c)!^e`.
    terms: Vec<(i64, i64, i32)>,
    geometric: ExactRational,
}

impl FactorialForm {
    pub fn new(terms: Vec<(i64, i64, i32)>) -> Self {
        FactorialForm { terms, geometric: ExactRational::one() }
    }

    pub fn with_geometric(mut self, g: ExactRational) -> Self {
        self.geometric = g;
        self
    }

    /// `X(m + 1) / X(m)`; every factorial argument must be nonnegative at
    /// both `m` and `m + 1`.
    pub fn ratio(&self, m: i64) -> ExactRational {
        let mut r = self.geometric.clone();
        for &(s, c, e) in &self.terms {
            let f = factorial_ratio(s * (m + 1) + c, s * m + c);
            let f = if e >= 0 { f } else { f.recip() };
            for _ in 0..e.unsigned_abs() {
                r *= &f;
            }
        }
        r
    }

    /// `X(m)` up to the `m`-independent factor (slow; for cross-checks).
    pub fn value(&self, m: i64) -> ExactRational {
        let mut v = num_traits::pow(self.geometric.clone(), m as usize);
        for &(s, c, e) in &self.terms {
            let f = factorial_ratio(s * m + c, 0);
            let f = if e >= 0 { f } else { f.recip() };
            for _ in 0..e.unsigned_abs() {
                v *= &f;
            }
        }
        v
    }
}

/// `F_n(m) = C(n - m, m)`.
pub fn fibonacci_form(n: u64) -> FactorialForm {
    let n = n as i64;
    FactorialForm::new(vec![(-1, n, 1), (1, 0, -1), (-2, n, -1)])
}

/// `F_n(m) = (n + m)! / (m! (m + 1)! (n - m)!)`.
pub fn schroder_form(n: u64) -> FactorialForm {
    let n = n as i64;
    FactorialForm::new(vec![(1, n, 1), (1, 0, -1), (1, 1, -1), (-1, n, -1)])
}

/// `F(m) ∝ 1 / (m! (m + h)! (n + 1 - h - 2m)!)` with `h = h' + 1`.
pub fn motzkin_form(n: u64, h: u64) -> FactorialForm {
    let (n, h) = (n as i64, h as i64);
    FactorialForm::new(vec![(1, 0, -1), (1, h, -1), (-2, n + 1 - h, -1)])
}

/// Unmodified extended weights `k^{N - m} C(N, m)`, `N = (k + 1)M + α`.
pub fn extended_form(mode: u64, k: u64, alpha: u64) -> FactorialForm {
    let trials = ((k + 1) * mode + alpha) as i64;
    FactorialForm::new(vec![(-1, trials, -1), (1, 0, -1)]).with_geometric(int(k).recip())
}

/// Ratios of a majorant after its weight at the mode has been replaced by
/// the larger of its two neighbours.
#[derive(Debug, Clone)]
pub struct CorrectedMajorant {
    form: Option<FactorialForm>,
    mode: i64,
    /// `B(M) / underline B(M)`.
    correction: ExactRational,
}

impl CorrectedMajorant {
    pub fn new(form: FactorialForm, mode: u64) -> Self {
        let mode = mode as i64;
        let up = form.ratio(mode);
        let down = form.ratio(mode - 1).recip();
        let correction = if up > down { up } else { down };
        CorrectedMajorant { form: Some(form), mode, correction }
    }

    /// The flat majorant of the uniform proposer.
    pub fn flat() -> Self {
        CorrectedMajorant { form: None, mode: 0, correction: ExactRational::one() }
    }

    /// `B(M) / underline B(M)`, the factor applied at the mode.
    pub fn correction(&self) -> &ExactRational {
        &self.correction
    }

    /// `B(i + 1) / B(i)`; equal to `B̄(i + 1) / B̄(i)` as the normalisation
    /// cancels.
    pub fn ratio(&self, i: i64) -> ExactRational {
        let Some(form) = &self.form else {
            return ExactRational::one();
        };
        let raw = form.ratio(i);
        if i + 1 == self.mode {
            raw * &self.correction
        } else if i == self.mode {
            raw / &self.correction
        } else {
            raw
        }
    }
}

/// `num / den` as an exact rational.
pub fn fraction(num: u128, den: u128) -> ExactRational {
    assert!(!den.is_zero());
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_ratios() {
        assert_eq!(factorial_ratio(5, 3), int(20));
        assert_eq!(factorial_ratio(3, 5), fraction(1, 20));
        assert_eq!(factorial_ratio(0, 0), int(1));
    }

    #[test]
    fn ratio_times_value_is_next_value() {
        let forms = [fibonacci_form(17), schroder_form(9), motzkin_form(12, 3), extended_form(4, 3, 2)];
        let limits = [8, 8, 4, 13];
        for (f, &top) in forms.iter().zip(&limits) {
            for m in 0..top {
                assert_eq!(f.ratio(m) * f.value(m), f.value(m + 1), "m={m}");
            }
        }
    }

    #[test]
    fn fibonacci_ratio_matches_binomials() {
        // C(10-m, m) = 1, 9, 28, 35, 15, 1.
        let f = fibonacci_form(10);
        let c = [1u128, 9, 28, 35, 15, 1];
        for m in 0..5 {
            assert_eq!(f.ratio(m as i64), fraction(c[m + 1], c[m]));
        }
    }

    #[test]
    fn corrected_binomial_matches_bin_weights() {
        // bin(2): (1, 4, 4, 4, 1).
        let b = CorrectedMajorant::new(extended_form(2, 1, 0), 2);
        let w = [1u128, 4, 4, 4, 1];
        for i in 0..4 {
            assert_eq!(b.ratio(i as i64), fraction(w[i + 1], w[i]));
        }
        // k = 2, α = 0, M = 2: (64, 192, 192, 160, 60, 12, 1).
        let b = CorrectedMajorant::new(extended_form(2, 2, 0), 2);
        let w = [64u128, 192, 192, 160, 60, 12, 1];
        for i in 0..6 {
            assert_eq!(b.ratio(i as i64), fraction(w[i + 1], w[i]));
        }
    }
}
