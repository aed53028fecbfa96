//! Closed forms for the 1-b game.
//!
//! Here `c = 1`, every settlement past the first is `(b-1)...(b-1) b`, and
//! the left parts run through `R(b)`: the strings over digits `1..=b` in
//! increasing order of value, which is bijective base-`b` counting.

use crate::engine::simulate;
use crate::fracbase::{Digit, DigitWord};
use crate::params::GameParams;

/// `ξ_k` of the 1-b game: `k-1` copies of `b-1` followed by `b`.
/// `ξ_0` is empty.
pub fn one_b_settlement(k: u64, b: u64) -> DigitWord {
    if k == 0 {
        return DigitWord::zero();
    }
    let mut digits = vec![b - 1; (k - 1) as usize];
    digits.push(b);
    DigitWord::from_right_digits(&digits)
}

/// Largest `e` with `b^e` dividing `x`; `x` must be positive.
pub fn nu_b(x: u64, b: u64) -> u64 {
    assert!(x > 0 && b > 1, "valuation needs x > 0 and b > 1");
    let (mut x, mut e) = (x, 0);
    while x % b == 0 {
        x /= b;
        e += 1;
    }
    e
}

/// The published count of digits `b-1` in `φ(n)^R`: `Σ_{i=1}^{n-b-2} ν_b(i)`.
///
/// This agrees with simulation only for small `n` (up to 11 when `b = 2`,
/// up to 31 when `b = 3`); [`one_b_right_count`] is the exact count.
pub fn one_b_right_length(n: u64, b: u64) -> u64 {
    (1..=n.saturating_sub(b + 2)).map(|i| nu_b(i, b)).sum()
}

/// Digit sum of `R(b)_i`.
pub fn bijective_digit_sum(i: u64, b: u64) -> u64 {
    r_sequence(b, i).iter().map(|(_, d)| d).sum()
}

/// Exact number of digits `b-1` in `φ(n)^R`.
///
/// For `n >= b+2` the right part is `ξ_k` with `k = f0`, so it holds
/// `f0 - 1` such digits. The left part is `R(b)_(n-1)` and is worth `n - 1`
/// in base `b`, so the side values at 1 give `(b-1) f0 = n - 1 - σ(n-1)`
/// with `σ` the digit sum of `R(b)_(n-1)`. Below `b+2` the count is 0.
pub fn one_b_right_count(n: u64, b: u64) -> u64 {
    assert!(b >= 2, "needs b >= 2");
    if n < b + 2 {
        return 0;
    }
    (n - b - bijective_digit_sum(n - 1, b)) / (b - 1)
}

/// `R(b)_i` for `i >= 1`.
pub fn r_sequence(b: u64, i: u64) -> DigitWord {
    assert!(b >= 2 && i >= 1, "R(b)_i needs b >= 2 and i >= 1");
    let mut digits: Vec<Digit> = Vec::new();
    let mut rest = i;
    while rest > 0 {
        let d = (rest - 1) % b + 1;
        digits.push(d);
        rest = (rest - d) / b;
    }
    DigitWord::from_dense(0, digits)
}

/// The `o` with `φ(n)^L = R(b)_(n-o)` for `n > b+1`, found by matching the
/// simulated left part at `n = b+2`.
pub fn r_index_offset(b: u64) -> i64 {
    let params = GameParams::new(1, b).expect("b >= 1");
    let n = b + 2;
    let left = simulate(n, params).0.to_word().left_part();
    let i = (1..=n * n)
        .find(|&i| r_sequence(b, i) == left)
        .expect("left part of the 1-b game is an R(b) entry");
    n as i64 - i as i64
}

/// `φ(n)^L` of the 1-b game for `n > b+1`, given the offset from
/// [`r_index_offset`].
pub fn one_b_left(n: u64, b: u64, offset: i64) -> DigitWord {
    r_sequence(b, (n as i64 - offset) as u64)
}

/// Left part of the 1-2 game read from binary: drop the leading 1 of `n` and
/// add one to every remaining bit. Needs `n >= 4`.
pub fn binary_trick_left(n: u64) -> Option<DigitWord> {
    if n < 4 {
        return None;
    }
    let bits = 63 - n.leading_zeros() as i64;
    Some(DigitWord::from_positions(
        (0..bits).map(|p| (p, ((n >> p) & 1) + 1)),
    ))
}
