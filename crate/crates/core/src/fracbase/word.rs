use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub type Digit = u64;

/// A finite digit word with a radix point.
///
/// Position `p` holds the coefficient of `(b/a)^p`. Positions `>= 0` form the
/// left part (printed before the point, most significant first) and positions
/// `< 0` the right part. When a word describes a game state, position `p`
/// corresponds to vertex `-p`.
///
/// Digits are stored densely from the lowest to the highest nonzero position.
/// The zero word has no digits at all.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct DigitWord {
    low: i64,
    digits: Vec<Digit>,
}

/// How digits are separated in text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Notation {
    /// Concatenated digits when every digit is at most 9, list form otherwise.
    #[default]
    Auto,
    /// Comma-separated digits, `.` standing alone as the radix token.
    List,
}

/// When the radix point is printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadixMark {
    /// Always, with `0` standing in for an empty left part (`0.`, `5.`, `20.3`).
    Always,
    /// Only when fractional digits exist (`2100`, `0`).
    IfFractional,
    /// Always, with the left part omitted when empty (`.413`, `.`).
    RightPart,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse digit word {text:?}: {reason}")]
pub struct WordParseError {
    pub text: String,
    pub reason: &'static str,
}

impl DigitWord {
    pub fn zero() -> Self {
        DigitWord::default()
    }

    /// Builds a word from `(position, digit)` pairs; repeated positions add up.
    pub fn from_positions<I: IntoIterator<Item = (i64, Digit)>>(entries: I) -> Self {
        let mut map: BTreeMap<i64, Digit> = BTreeMap::new();
        for (p, d) in entries {
            if d != 0 {
                *map.entry(p).or_insert(0) += d;
            }
        }
        let (Some((&lo, _)), Some((&hi, _))) = (map.first_key_value(), map.last_key_value()) else {
            return DigitWord::zero();
        };
        let mut digits = vec![0; (hi - lo + 1) as usize];
        for (p, d) in map {
            digits[(p - lo) as usize] = d;
        }
        DigitWord { low: lo, digits }
    }

    /// `digits[i]` sits at position `low + i`; zeros at either end are trimmed.
    pub fn from_dense(low: i64, mut digits: Vec<Digit>) -> Self {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        let lead = digits.iter().take_while(|&&d| d == 0).count();
        if lead == digits.len() {
            return DigitWord::zero();
        }
        digits.drain(..lead);
        DigitWord {
            low: low + lead as i64,
            digits,
        }
    }

    /// An integer word from its digits written most significant first.
    pub fn from_left_digits(msd_first: &[Digit]) -> Self {
        let mut digits = msd_first.to_vec();
        digits.reverse();
        DigitWord::from_dense(0, digits)
    }

    /// A pure right part `.s1 s2 ... sl` from `[s1, s2, ..., sl]`.
    pub fn from_right_digits(right: &[Digit]) -> Self {
        let mut digits = right.to_vec();
        digits.reverse();
        DigitWord::from_dense(-(right.len() as i64), digits)
    }

    pub fn from_parts(left_msd_first: &[Digit], right: &[Digit]) -> Self {
        DigitWord::from_left_digits(left_msd_first).combine(&DigitWord::from_right_digits(right))
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit(&self, p: i64) -> Digit {
        if self.digits.is_empty() || p < self.low {
            return 0;
        }
        self.digits
            .get((p - self.low) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Lowest nonzero position.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest nonzero position.
    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.digits.len() as i64 - 1)
    }

    /// Positions and digits from the lowest to the highest nonzero position.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, Digit)> + '_ {
        self.digits
            .iter()
            .enumerate()
            .map(move |(i, &d)| (self.low + i as i64, d))
    }

    pub fn max_digit(&self) -> Digit {
        self.digits.iter().copied().max().unwrap_or(0)
    }

    pub fn digit_sum(&self) -> u128 {
        self.digits.iter().map(|&d| d as u128).sum()
    }

    /// Positions `>= 0`.
    pub fn left_part(&self) -> DigitWord {
        DigitWord::from_positions(self.iter().filter(|&(p, _)| p >= 0))
    }

    /// Positions `< 0`.
    pub fn right_part(&self) -> DigitWord {
        DigitWord::from_positions(self.iter().filter(|&(p, _)| p < 0))
    }

    /// Left digits, most significant first, down to and including position 0.
    /// Empty when the word has nothing at nonnegative positions.
    pub fn left_digits(&self) -> Vec<Digit> {
        match self.high() {
            Some(h) if h >= 0 => (0..=h).rev().map(|p| self.digit(p)).collect(),
            _ => Vec::new(),
        }
    }

    /// Right digits `[s1, s2, ..., sl]` with `s_i` at position `-i`.
    pub fn right_digits(&self) -> Vec<Digit> {
        match self.low() {
            Some(l) if l < 0 => (l..0).rev().map(|p| self.digit(p)).collect(),
            _ => Vec::new(),
        }
    }

    /// Digit-wise sum of two words.
    pub fn combine(&self, other: &DigitWord) -> DigitWord {
        DigitWord::from_positions(self.iter().chain(other.iter()))
    }

    /// Mirror image through the origin: position `p` moves to `-p`.
    pub fn reflect(&self) -> DigitWord {
        DigitWord::from_positions(self.iter().map(|(p, d)| (-p, d)))
    }

    pub fn map_digits(&self, f: impl Fn(Digit) -> Digit) -> DigitWord {
        DigitWord::from_positions(self.iter().map(|(p, d)| (p, f(d))))
    }

    pub fn with_added(&self, p: i64, d: Digit) -> DigitWord {
        DigitWord::from_positions(self.iter().chain(std::iter::once((p, d))))
    }

    pub fn render(&self, notation: Notation, radix: RadixMark) -> String {
        let mut left = self.left_digits();
        let right = self.right_digits();
        let point = match radix {
            RadixMark::Always => {
                if left.is_empty() {
                    left.push(0);
                }
                true
            }
            RadixMark::IfFractional => {
                if left.is_empty() {
                    left.push(0);
                }
                !right.is_empty()
            }
            RadixMark::RightPart => true,
        };
        let compact = notation == Notation::Auto && self.max_digit() <= 9;
        let join = |ds: &[Digit]| -> String {
            let sep = if compact { "" } else { "," };
            ds.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        };
        let mut out = join(&left);
        if point {
            out.push('.');
            out.push_str(&join(&right));
        }
        if !compact && !out.contains(',') && self.max_digit() > 9 {
            // A lone multi-character digit would read back as compact text.
            if left.is_empty() {
                out.insert(1, ',');
            } else {
                out.insert(out.find('.').unwrap_or(out.len()), ',');
            }
        }
        out
    }

    /// Full-state text such as `442.2243` or `0.`.
    pub fn to_state_string(&self) -> String {
        self.render(Notation::Auto, RadixMark::Always)
    }

    /// Numeral text such as `2100`.
    pub fn to_numeral_string(&self) -> String {
        self.render(Notation::Auto, RadixMark::IfFractional)
    }

    /// Right-part text such as `.413` or `.`.
    pub fn to_right_string(&self) -> String {
        self.render(Notation::Auto, RadixMark::RightPart)
    }

    /// Parses compact (`442.2243`) or list (`4,4,2.2,2,4,3`) text.
    /// Text containing a comma is read as list form.
    pub fn parse(text: &str) -> Result<DigitWord, WordParseError> {
        let err = |reason| WordParseError {
            text: text.to_string(),
            reason,
        };
        let s = text.trim();
        if s.is_empty() {
            return Err(err("empty text"));
        }
        let tokens: Vec<String> = if s.contains(',') {
            s.replace('.', ",.,")
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut seen_point = false;
        for tok in tokens {
            if tok == "." {
                if seen_point {
                    return Err(err("more than one radix point"));
                }
                seen_point = true;
                continue;
            }
            if !tok.bytes().all(|c| c.is_ascii_digit()) {
                return Err(err("digits must be decimal integers"));
            }
            let d: Digit = tok.parse().map_err(|_| err("digit out of range"))?;
            if seen_point {
                right.push(d);
            } else {
                left.push(d);
            }
        }
        Ok(DigitWord::from_parts(&left, &right))
    }
}

impl FromStr for DigitWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DigitWord::parse(s)
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_state_string())
    }
}

impl fmt::Debug for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DigitWord({})",
            self.render(Notation::List, RadixMark::Always)
        )
    }
}
