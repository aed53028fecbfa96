use std::fmt;

use num_integer::Integer;
use thiserror::Error;

/// Why a parameter pair was refused.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("firing rates must be positive, got a={a}, b={b}")]
    ZeroRate { a: u64, b: u64 },
    #[error("a={a}, b={b}: this operation needs gcd(a,b)=1 and a<b")]
    NotStructured { a: u64, b: u64 },
}

/// The a-b game: `a` chips go left and `b` chips go right on every firing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameParams {
    a: u64,
    b: u64,
}

impl GameParams {
    pub fn new(a: u64, b: u64) -> Result<Self, ParamsError> {
        if a == 0 || b == 0 {
            return Err(ParamsError::ZeroRate { a, b });
        }
        Ok(GameParams { a, b })
    }

    /// Parameters accepted by the settlement theory and the fast predictor.
    pub fn structured(a: u64, b: u64) -> Result<Self, ParamsError> {
        let params = Self::new(a, b)?;
        params.require_structured()?;
        Ok(params)
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// A vertex fires once it holds this many chips.
    pub fn threshold(&self) -> u64 {
        self.a + self.b
    }

    pub fn gcd(&self) -> u64 {
        self.a.gcd(&self.b)
    }

    pub fn is_coprime(&self) -> bool {
        self.gcd() == 1
    }

    pub fn is_structured(&self) -> bool {
        self.is_coprime() && self.a < self.b
    }

    pub fn require_structured(&self) -> Result<(), ParamsError> {
        if self.is_structured() {
            Ok(())
        } else {
            Err(ParamsError::NotStructured {
                a: self.a,
                b: self.b,
            })
        }
    }

    /// `ceil(a / (b - a))`, defined only for a < b.
    pub fn c(&self) -> Option<u64> {
        (self.a < self.b).then(|| self.a.div_ceil(self.b - self.a))
    }

    /// The game with the roles of left and right exchanged.
    pub fn mirrored(&self) -> Self {
        GameParams {
            a: self.b,
            b: self.a,
        }
    }

    /// Divides both rates by their gcd.
    pub fn reduced(&self) -> Self {
        let d = self.gcd();
        GameParams {
            a: self.a / d,
            b: self.b / d,
        }
    }
}

impl fmt::Display for GameParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// All coprime pairs with 1 <= a < b <= max_b, ordered by (a, b).
pub fn coprime_pairs(max_b: u64) -> Vec<GameParams> {
    let mut out = Vec::new();
    for b in 2..=max_b {
        for a in 1..b {
            if a.gcd(&b) == 1 {
                out.push(GameParams { a, b });
            }
        }
    }
    out.sort_by_key(|p| (p.a, p.b));
    out
}
