//! Numeration in the fractional base b/a.
//!
//! In base b/a a digit `d` at position `p` is worth `d * (b/a)^p`. Integers
//! have a unique finite representation with digits in `0..b`, obtained by
//! repeatedly replacing `b` units at one position with `a` units one position
//! to the left (an "explosion"). Evaluation is always exact.

mod rational;
mod word;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::params::GameParams;

pub use rational::{ExactRational, RationalParseError};
pub use word::{Digit, DigitWord, Notation, RadixMark, WordParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FracbaseError {
    #[error("base {b}/{a} needs gcd(a,b)=1 and a<b")]
    InvalidBase { a: u64, b: u64 },
    #[error("explosion needs an integer word (no digits right of the point)")]
    FractionalWord,
}

fn check_base(params: GameParams) -> Result<(u64, u64), FracbaseError> {
    if params.is_structured() {
        Ok((params.a(), params.b()))
    } else {
        Err(FracbaseError::InvalidBase {
            a: params.a(),
            b: params.b(),
        })
    }
}

/// The base b/a representation of `n`.
pub fn to_base(n: u64, params: GameParams) -> Result<DigitWord, FracbaseError> {
    let (a, b) = check_base(params)?;
    let mut digits = Vec::new();
    let mut rest = n as u128;
    while rest > 0 {
        let d = rest % b as u128;
        digits.push(d as Digit);
        rest = (rest - d) / b as u128 * a as u128;
    }
    Ok(DigitWord::from_dense(0, digits))
}

/// Exact value of `sum d_p (b/a)^p` over every position of the word.
pub fn eval_base(w: &DigitWord, params: GameParams) -> ExactRational {
    eval_at(w, &BigInt::from(params.b()), &BigInt::from(params.a()))
}

/// Exact value of `sum d_p (num/den)^p`.
///
/// Integer Horner pass from the top position down accumulates
/// `sum d_p num^(p-lo) den^(hi-p)`; one division and a shift by
/// `(num/den)^lo` finish the job.
pub(crate) fn eval_at(w: &DigitWord, num: &BigInt, den: &BigInt) -> ExactRational {
    let (Some(lo), Some(hi)) = (w.low(), w.high()) else {
        return ExactRational::zero();
    };
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for (_, d) in w.iter().rev() {
        acc = acc * num + BigInt::from(d) * &den_pow;
        den_pow *= den;
    }
    let scaled = ExactRational::new(acc, pow(den, (hi - lo) as u64));
    let shift = if lo >= 0 {
        ExactRational::new(pow(num, lo as u64), pow(den, lo as u64))
    } else {
        ExactRational::new(pow(den, (-lo) as u64), pow(num, (-lo) as u64))
    };
    scaled * shift
}

fn pow(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow::Pow::pow(base, exp)
}

/// One explosion at position `p`: `b` units leave `p`, `a` units arrive at `p+1`.
pub fn explode_at(w: &DigitWord, p: i64, params: GameParams) -> Option<DigitWord> {
    (w.digit(p) >= params.b()).then(|| {
        DigitWord::from_positions(
            w.iter()
                .map(|(q, d)| if q == p { (q, d - params.b()) } else { (q, d) })
                .chain(std::iter::once((p + 1, params.a()))),
        )
    })
}

/// Explodes until every digit is below `b`. The value is unchanged.
pub fn explode_normalize(w: &DigitWord, params: GameParams) -> Result<DigitWord, FracbaseError> {
    let (a, b) = check_base(params)?;
    let Some(lo) = w.low() else {
        return Ok(DigitWord::zero());
    };
    if lo < 0 {
        return Err(FracbaseError::FractionalWord);
    }
    let mut digits: Vec<Digit> = (0..=w.high().unwrap_or(0)).map(|p| w.digit(p)).collect();
    let mut p = 0;
    while p < digits.len() {
        if digits[p] >= b {
            let times = digits[p] / b;
            digits[p] -= times * b;
            if p + 1 == digits.len() {
                digits.push(0);
            }
            digits[p + 1] += times * a;
        }
        p += 1;
    }
    Ok(DigitWord::from_dense(0, digits))
}
