//! Exact integer helpers for the precomputation of modes and parameters.

/// Smallest integer `c` with `holds(c)`, for a predicate that is false
/// below some threshold and true from it on. `guess` only sets where the
/// search starts.
pub(crate) fn least_such_that(guess: i64, holds: impl Fn(i64) -> bool) -> i64 {
    let mut c = guess;
    while holds(c - 1) {
        c -= 1;
    }
    while !holds(c) {
        c += 1;
    }
    c
}

/// `⌈(p - √d) / q⌉` for `q > 0`, `d >= 0`, computed exactly.
pub(crate) fn ceil_sub_sqrt_div(p: i128, d: i128, q: i128) -> i64 {
    let guess = ((p as f64 - (d as f64).sqrt()) / q as f64).ceil() as i64;
    // c >= (p - √d)/q  <=>  p - q c <= √d
    least_such_that(guess, |c| {
        let lhs = p - q * i128::from(c);
        lhs <= 0 || lhs * lhs <= d
    })
}

/// `⌊(p - √d) / q⌋` for `q > 0`, `d >= 0`, computed exactly.
pub(crate) fn floor_sub_sqrt_div(p: i128, d: i128, q: i128) -> i64 {
    // ⌊x⌋ = -⌈-x⌉, and c >= -x <=> p + q c >= √d.
    let guess = (-(p as f64 - (d as f64).sqrt()) / q as f64).ceil() as i64;
    let neg = least_such_that(guess, |c| {
        let lhs = p + q * i128::from(c);
        lhs >= 0 && lhs * lhs >= d
    });
    -neg
}

/// Binomial coefficient for the tiny tables of the small-size fallbacks.
pub(crate) fn small_binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}
