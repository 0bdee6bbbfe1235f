//! Monomial counting.
//!
//! Under the standard convention the number of monomials of degree exactly
//! `d` in `n` variables is C(d+n-1, d), and the number of degree at most
//! `d` is C(d+n, n). Note that C(d+n, d) — a form one sometimes sees quoted
//! for the exact-degree count — equals C(d+n, n) and therefore counts the
//! degree-at-most-d monomials; both counts are exposed here explicitly so
//! callers never have to guess.

use num_bigint::BigUint;
use num_integer::binomial;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CountMode {
    /// Monomials of total degree exactly d: C(d+n-1, d).
    ExactDegree,
    /// Monomials of total degree at most d: C(d+n, n).
    UpToDegree,
}

/// Counts monomials in `n` variables. `n` must be at least 1.
pub fn count_monomials(n: u64, d: u64, mode: CountMode) -> BigUint {
    assert!(n >= 1, "need at least one variable");
    match mode {
        CountMode::ExactDegree => binomial(BigUint::from(d + n - 1), BigUint::from(d)),
        CountMode::UpToDegree => binomial(BigUint::from(d + n), BigUint::from(n)),
    }
}
