use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number kept in lowest terms with a positive denominator.
///
/// Prints as `p/q`, or `p` when the denominator is one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// # Panics
    /// If `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn to_i128(&self) -> Option<i128> {
        self.to_integer().and_then(|n| n.to_i128())
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn pow(&self, exp: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}, expected p or p/q")]
pub struct RationalParseError(pub String);

impl FromStr for ExactRational {
    type Err = RationalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalParseError(s.to_string());
        let (num, den) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(ExactRational::new(num, den))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl ExactRational {
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_lowest_terms() {
        assert_eq!(ExactRational::new(6, 4).to_string(), "3/2");
        assert_eq!(ExactRational::new(-6, -3).to_string(), "2");
        assert_eq!(ExactRational::new(3, -9).to_string(), "-1/3");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(
            "7".parse::<ExactRational>().unwrap(),
            ExactRational::from_integer(7)
        );
        assert_eq!(
            "10/4".parse::<ExactRational>().unwrap(),
            ExactRational::new(5, 2)
        );
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x".parse::<ExactRational>().is_err());
    }

    #[test]
    fn powers() {
        let t = ExactRational::new(3, 2);
        assert_eq!(t.pow(2), ExactRational::new(9, 4));
        assert_eq!(t.pow(-2), ExactRational::new(4, 9));
        assert_eq!(t.pow(0), ExactRational::one());
    }
}
