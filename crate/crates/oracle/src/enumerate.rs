//! Exhaustive enumeration of small objects, in their text forms.

use crate::OracleError;

pub const FIBONACCI_BOUND: u64 = 14;
pub const SCHRODER_BOUND: u64 = 8;
pub const MOTZKIN_BOUND: u64 = 12;

fn check(what: &'static str, n: u64, bound: u64) -> Result<(), OracleError> {
    if n > bound {
        return Err(OracleError::BoundExceeded { what, n, bound });
    }
    Ok(())
}

/// Words over `{a, b}` with `#a + 2 #b = n`, in lexicographic order.
pub fn enumerate_fibonacci(n: u64) -> Result<Vec<String>, OracleError> {
    check("enumerate_fibonacci", n, FIBONACCI_BOUND)?;
    fn go(left: u64, prefix: &mut String, out: &mut Vec<String>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for (c, w) in [('a', 1), ('b', 2)] {
            if w <= left {
                prefix.push(c);
                go(left - w, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut String::new(), &mut out);
    Ok(out)
}

/// Step sequences `(letter, width, rise)` from height 0 that never go
/// below 0, span `length` columns and end at `end`.
fn walks(steps: &[(char, u64, i64)], length: u64, end: i64) -> Vec<String> {
    fn go(
        steps: &[(char, u64, i64)],
        left: u64,
        height: i64,
        end: i64,
        prefix: &mut String,
        out: &mut Vec<String>,
    ) {
        if left == 0 {
            if height == end {
                out.push(prefix.clone());
            }
            return;
        }
        for &(c, width, rise) in steps {
            if width <= left && height + rise >= 0 {
                prefix.push(c);
                go(steps, left - width, height + rise, end, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(steps, length, 0, end, &mut String::new(), &mut out);
    out
}

/// Schröder paths of size `2n` over `U`, `D` and the double-width `H`.
pub fn enumerate_schroder(n: u64) -> Result<Vec<String>, OracleError> {
    check("enumerate_schroder", n, SCHRODER_BOUND)?;
    Ok(walks(&[('U', 1, 1), ('D', 1, -1), ('H', 2, 0)], 2 * n, 0))
}

/// Motzkin left factors of length `n` ending at `h'`, over `U`, `D`, `F`.
pub fn enumerate_motzkin(n: u64, h_prime: u64) -> Result<Vec<String>, OracleError> {
    check("enumerate_motzkin", n, MOTZKIN_BOUND)?;
    Ok(walks(&[('U', 1, 1), ('D', 1, -1), ('F', 1, 0)], n, h_prime as i64))
}
