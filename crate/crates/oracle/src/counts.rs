//! Exact counts, per number of distinguished letters, with independent
//! recurrence cross-checks.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::{OracleError, COUNT_BOUND};

/// Counts split by `m`, together with their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub per_m: Vec<BigUint>,
    pub total: BigUint,
}

impl CountTable {
    fn from_per_m(per_m: Vec<BigUint>) -> Self {
        let total = per_m.iter().sum();
        CountTable { per_m, total }
    }

    /// Per-`m` weights as floats, normalised to sum 1.
    pub fn probabilities(&self) -> Vec<f64> {
        let total = big_to_f64(&self.total);
        self.per_m.iter().map(|c| big_to_f64(c) / total).collect()
    }
}

pub fn big_to_f64(v: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY)
}

fn check(what: &'static str, n: u64) -> Result<(), OracleError> {
    if n > COUNT_BOUND {
        return Err(OracleError::BoundExceeded { what, n, bound: COUNT_BOUND });
    }
    Ok(())
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// `C(n - m, m)` for `m = 0..=n/2`.
pub fn count_fibonacci(n: u64) -> Result<CountTable, OracleError> {
    check("count_fibonacci", n)?;
    Ok(CountTable::from_per_m((0..=n / 2).map(|m| binomial(big(n - m), big(m))).collect()))
}

/// `C(n + m, 2m) · Cat(m)` for `m = 0..=n`.
pub fn count_schroder(n: u64) -> Result<CountTable, OracleError> {
    check("count_schroder", n)?;
    let per_m = (0..=n)
        .map(|m| binomial(big(n + m), big(2 * m)) * binomial(big(2 * m), big(m)) / big(m + 1))
        .collect();
    Ok(CountTable::from_per_m(per_m))
}

/// `h / (n + 1) · (n + 1)! / (m! (m + h)! (n + 1 - h - 2m)!)` with
/// `h = h' + 1`, for `m = 0..=(n - h')/2`.
pub fn count_motzkin(n: u64, h_prime: u64) -> Result<CountTable, OracleError> {
    check("count_motzkin", n)?;
    if h_prime > n {
        return Err(OracleError::Invalid(format!("final height {h_prime} above length {n}")));
    }
    let h = h_prime + 1;
    let per_m = (0..=(n - h_prime) / 2)
        .map(|m| {
            let flats = n + 1 - h - 2 * m;
            // (n+1)! / (m! (m+h)! flats!) = C(n+1, m) C(n+1-m, m+h)
            let multinomial = binomial(big(n + 1), big(m)) * binomial(big(n + 1 - m), big(flats));
            multinomial * big(h) / big(n + 1)
        })
        .collect();
    Ok(CountTable::from_per_m(per_m))
}

/// `F_0 = F_1 = 1`, `F_n = F_{n-1} + F_{n-2}`.
pub fn fibonacci_by_recurrence(n: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `S_0 = 1`, `S_1 = 2`, `S_n = 3 S_{n-1} + Σ_{k=1}^{n-2} S_k S_{n-k-1}`.
pub fn schroder_by_recurrence(n: u64) -> BigUint {
    let mut s: Vec<BigUint> = vec![big(1), big(2)];
    for j in 2..=n as usize {
        let mut next = big(3) * &s[j - 1];
        for k in 1..=j - 2 {
            next += &s[k] * &s[j - k - 1];
        }
        s.push(next);
    }
    s[n as usize].clone()
}

/// Left factors of length `n` ending at `h'`, by dynamic programming over
/// prefix heights.
pub fn motzkin_by_walks(n: u64, h_prime: u64) -> BigUint {
    let width = n as usize + 2;
    let mut ways = vec![BigUint::zero(); width];
    ways[0] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); width];
        for (y, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            next[y] += w;
            next[y + 1] += w;
            if y > 0 {
                next[y - 1] += w;
            }
        }
        ways = next;
    }
    ways.get(h_prime as usize).cloned().unwrap_or_default()
}
