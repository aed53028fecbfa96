//! The right part of final states.
//!
//! Every time the origin fires it drops `b` chips on the origout, after which
//! the right side settles again. The settled right parts reachable this way
//! form one sequence `ξ_0, ξ_1, ...` where `ξ_k` is the right part after the
//! origin has fired `k` times. A settlement is dormant when its origout holds
//! fewer than `a` chips: the next origin firing then gets nothing back.
//!
//! With `c = ceil(a/(b-a))` and `r = c(b-a)` the sequence is periodic in
//! shape from the anchor index `c(c+3)/2` on:
//!
//! ```text
//! ξ_k = . r^(p+1) δ_q      where k = anchor + p*c + q, 0 <= q < c
//! ```
//!
//! `δ_0` lists `i*b - (i-1)*a` for `i = c` down to `1`, and `δ_m` inserts
//! `m*(b-a)` between the entries for `i = m+1` and `i = m`. For the 3-4 game
//! these are 654, 6514 and 6254.
//!
//! The first `c` entries of the form `T_(i+1) - 1` (triangular numbers minus
//! one) are exactly the dormant settlements.

use thiserror::Error;

use crate::engine::{ChipState, Game};
use crate::fracbase::{Digit, DigitWord};
use crate::params::{GameParams, ParamsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SettlementError {
    #[error(transparent)]
    InvalidParams(#[from] ParamsError),
    #[error("{params}: enumeration finds {found:?} dormant settlements (count, highest index), formula gives {formula:?}")]
    CensusMismatch {
        params: GameParams,
        found: (u64, u64),
        formula: (u64, u64),
    },
    #[error("{params}: no balanced chip count below {limit}")]
    ScanExhausted { params: GameParams, limit: u64 },
}

pub fn c_value(params: GameParams) -> Result<u64, SettlementError> {
    params.require_structured()?;
    Ok(params.a().div_ceil(params.b() - params.a()))
}

pub fn triangular(i: u64) -> u64 {
    i * (i + 1) / 2
}

pub fn tetrahedral(i: u64) -> u64 {
    i * (i + 1) * (i + 2) / 6
}

/// First index covered by the closed form: `T_(c+1) - 1 = c(c+3)/2`.
pub fn anchor_index(c: u64) -> u64 {
    triangular(c + 1) - 1
}

/// Index of the last dormant settlement: `T_c - 1`.
pub fn highest_dormant_index(c: u64) -> u64 {
    triangular(c) - 1
}

/// One step of the right-part dynamics: the origin fires once and the right
/// side settles.
///
/// With `j` the first position whose digit is below `a`, only `s_(j-1)` and
/// `s_j` change. A result that still holds a firable vertex is settled by
/// simulation, though that never happens for settled input.
pub fn settlement_next(w: &DigitWord, params: GameParams) -> DigitWord {
    let (a, b) = (params.a(), params.b());
    let mut s = w.right_digits();
    let j = s.iter().position(|&d| d < a).unwrap_or(s.len());
    if j == s.len() {
        s.push(0);
    }
    if j == 0 {
        s[0] += b;
    } else {
        s[j - 1] -= a;
        s[j] += b;
    }
    let next = DigitWord::from_right_digits(&s);
    if next.max_digit() < params.threshold() {
        next
    } else {
        settle_by_simulation(&next, params)
    }
}

fn settle_by_simulation(right: &DigitWord, params: GameParams) -> DigitWord {
    let mut game = Game::new(&ChipState::from_word(params, right));
    game.settle_right();
    game.word().right_part()
}

/// A settlement is dormant when its origout digit is below `a`.
pub fn is_dormant(w: &DigitWord, params: GameParams) -> bool {
    w.digit(-1) < params.a()
}

/// `δ_0 ... δ_(c-1)`.
pub fn delta_strings(params: GameParams) -> Result<Vec<DigitWord>, SettlementError> {
    let c = c_value(params)?;
    let (a, b) = (params.a(), params.b());
    let base: Vec<Digit> = (1..=c).rev().map(|i| i * b - (i - 1) * a).collect();
    Ok((0..c)
        .map(|m| {
            let mut digits = base.clone();
            if m > 0 {
                // base[c-1-m] holds the entry for i = m+1.
                digits.insert((c - m) as usize, m * (b - a));
            }
            DigitWord::from_right_digits(&digits)
        })
        .collect())
}

/// A right part together with its place in the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settlement {
    pub index: u64,
    pub word: DigitWord,
    pub dormant: bool,
}

/// The settlement sequence of one game, cached up to the anchor.
#[derive(Debug, Clone)]
pub struct SettlementSeq {
    params: GameParams,
    c: u64,
    anchor: u64,
    deltas: Vec<Vec<Digit>>,
    cache: Vec<DigitWord>,
}

impl SettlementSeq {
    pub fn new(params: GameParams) -> Result<Self, SettlementError> {
        let c = c_value(params)?;
        let deltas = delta_strings(params)?
            .iter()
            .map(|d| d.right_digits())
            .collect();
        Ok(SettlementSeq {
            params,
            c,
            anchor: anchor_index(c),
            deltas,
            cache: vec![DigitWord::zero()],
        })
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn anchor(&self) -> u64 {
        self.anchor
    }

    /// The digit repeated in front of every δ-string: `c(b-a)`.
    pub fn repeated_digit(&self) -> Digit {
        self.c * (self.params.b() - self.params.a())
    }

    /// `ξ_k` by iterating the transition from `ξ_0`; cached.
    pub fn iterated(&mut self, k: u64) -> &DigitWord {
        while self.cache.len() as u64 <= k {
            let next = settlement_next(
                self.cache.last().expect("cache starts with ξ_0"),
                self.params,
            );
            self.cache.push(next);
        }
        &self.cache[k as usize]
    }

    /// `ξ_k` from the periodic description; `None` below the anchor.
    pub fn closed_form(&self, k: u64) -> Option<DigitWord> {
        let off = k.checked_sub(self.anchor)?;
        let (p, q) = (off / self.c, off % self.c);
        let mut digits = vec![self.repeated_digit(); (p + 1) as usize];
        digits.extend_from_slice(&self.deltas[q as usize]);
        Some(DigitWord::from_right_digits(&digits))
    }

    /// `ξ_k`: iterated below the anchor, closed form from the anchor on.
    pub fn get(&mut self, k: u64) -> DigitWord {
        match self.closed_form(k) {
            Some(w) => w,
            None => self.iterated(k).clone(),
        }
    }

    pub fn settlement(&mut self, k: u64) -> Settlement {
        let word = self.get(k);
        let dormant = is_dormant(&word, self.params);
        Settlement {
            index: k,
            word,
            dormant,
        }
    }

    /// The `k` with `ξ_k = w`, if any.
    pub fn index_of(&mut self, w: &DigitWord) -> Option<u64> {
        let digits = w.right_digits();
        if w.low().is_some_and(|l| l >= 0) {
            return None;
        }
        let r = self.repeated_digit();
        let lead = digits.iter().take_while(|&&d| d == r).count() as u64;
        if lead > 0 {
            let tail = &digits[lead as usize..];
            if let Some(q) = self.deltas.iter().position(|d| d.as_slice() == tail) {
                let k = self.anchor + (lead - 1) * self.c + q as u64;
                return (self.closed_form(k).as_ref() == Some(w)).then_some(k);
            }
        }
        self.iterated(self.anchor);
        self.cache[..self.anchor as usize]
            .iter()
            .position(|x| x == w)
            .map(|k| k as u64)
    }
}

/// `ξ_k` for one game.
pub fn settlement(k: u64, params: GameParams) -> Result<DigitWord, SettlementError> {
    Ok(SettlementSeq::new(params)?.get(k))
}

/// Dormant settlements found by enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub count: u64,
    pub highest_index: u64,
}

/// Counts dormant settlements among `ξ_0 ..= ξ_anchor` and checks the count
/// against `c` and the highest index against `T_c - 1`. Later settlements
/// start with `c(b-a) >= a` and are never dormant.
pub fn dormant_census(params: GameParams) -> Result<Census, SettlementError> {
    let mut seq = SettlementSeq::new(params)?;
    let census = enumerate_dormant(&mut seq);
    let formula = (seq.c(), highest_dormant_index(seq.c()));
    if (census.count, census.highest_index) != formula {
        return Err(SettlementError::CensusMismatch {
            params,
            found: (census.count, census.highest_index),
            formula,
        });
    }
    Ok(census)
}

/// Raw enumeration behind [`dormant_census`].
pub fn enumerate_dormant(seq: &mut SettlementSeq) -> Census {
    let params = seq.params();
    let dormant: Vec<u64> = (0..=seq.anchor())
        .filter(|&k| is_dormant(seq.iterated(k), params))
        .collect();
    Census {
        count: dormant.len() as u64,
        highest_index: dormant.last().copied().unwrap_or(0),
    }
}

/// Smallest `n` whose final right part lies past the last dormant
/// settlement, found by simulating `n = 0, 1, 2, ...`.
pub fn balanced_b(params: GameParams, scan_limit: u64) -> Result<u64, SettlementError> {
    let mut seq = SettlementSeq::new(params)?;
    let last_dormant = highest_dormant_index(seq.c());
    let mut game = Game::from_pile(0, params);
    for n in 0..scan_limit {
        if n > 0 {
            game.grow();
        }
        let right = right_part_of(&game);
        if seq.index_of(&right).is_some_and(|k| k > last_dormant) {
            return Ok(n);
        }
    }
    Err(SettlementError::ScanExhausted {
        params,
        limit: scan_limit,
    })
}

/// Right part (vertices `>= 1`) of a game in progress.
pub fn right_part_of(game: &Game) -> DigitWord {
    let (_, hi) = game.tape().window();
    DigitWord::from_positions((1..=hi).map(|v| (-v, game.chips(v))))
}

/// `m*b - (m-1)*a < a+b <= (m+1)*b - (m-1)*a` for `1 <= m <= c`, and
/// `c(b-a) < a+b`: every δ digit is settled.
pub fn delta_digit_bounds(params: GameParams) -> Result<bool, SettlementError> {
    let c = c_value(params)?;
    let (a, b) = (params.a() as i128, params.b() as i128);
    let t = a + b;
    let rows = (1..=c as i128).all(|m| m * b - (m - 1) * a < t && t <= (m + 1) * b - (m - 1) * a);
    Ok(rows && c as i128 * (b - a) < t)
}

/// Origout digit of every settlement from the anchor on: `c(b-a)`.
pub fn eventual_origout(params: GameParams) -> Result<u64, SettlementError> {
    Ok(c_value(params)? * (params.b() - params.a()))
}

/// Value in base b/a of every right part once `n >= B`: `a*c`.
pub fn eventual_right_value(params: GameParams) -> Result<u64, SettlementError> {
    Ok(params.a() * c_value(params)?)
}

/// Families with a simple closed form for `c`, the eventual origout digit and
/// the eventual right value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `a <= b/2`
    Wide,
    /// `b = a + 1`
    Adjacent,
    /// `a = 2k - 1`, `b = a + 2`
    OddGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyRow {
    pub family: Family,
    pub c: u64,
    pub origout: u64,
    pub right_value: u64,
}

/// The closed-form row for the families above, or `None` otherwise.
/// A pair can belong to two families (1-2, 1-3); the first match wins.
pub fn family_row(params: GameParams) -> Option<FamilyRow> {
    if !params.is_structured() {
        return None;
    }
    let (a, b) = (params.a(), params.b());
    if 2 * a <= b {
        Some(FamilyRow {
            family: Family::Wide,
            c: 1,
            origout: b - a,
            right_value: a,
        })
    } else if b == a + 1 {
        Some(FamilyRow {
            family: Family::Adjacent,
            c: a,
            origout: a,
            right_value: a * a,
        })
    } else if b == a + 2 && a % 2 == 1 {
        let k = a.div_ceil(2);
        Some(FamilyRow {
            family: Family::OddGap,
            c: k,
            origout: 2 * k,
            right_value: (2 * k - 1) * k,
        })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::settle_right;
    use crate::params::coprime_pairs;

    fn p(a: u64, b: u64) -> GameParams {
        GameParams::new(a, b).unwrap()
    }

    fn rights(ws: &[DigitWord]) -> Vec<String> {
        ws.iter().map(|w| w.to_right_string()).collect()
    }

    #[test]
    fn c_values_and_rejections() {
        assert_eq!(c_value(p(2, 3)), Ok(2));
        assert_eq!(c_value(p(3, 4)), Ok(3));
        assert_eq!(c_value(p(1, 2)), Ok(1));
        assert!(c_value(p(2, 4)).is_err());
        assert!(c_value(p(4, 3)).is_err());
    }

    #[test]
    fn first_settlements_of_two_three() {
        let mut seq = SettlementSeq::new(p(2, 3)).unwrap();
        let words: Vec<DigitWord> = (0..=8).map(|k| seq.iterated(k).clone()).collect();
        assert_eq!(
            rights(&words),
            [".", ".3", ".13", ".43", ".413", ".243", ".2413", ".2243", ".22413"]
        );
        assert_eq!(seq.anchor(), 5);
        assert_eq!(seq.get(5).to_right_string(), ".243");
        assert_eq!(seq.get(8).to_right_string(), ".22413");
    }

    #[test]
    fn transition_examples() {
        let next = |s: &str| settlement_next(&s.parse().unwrap(), p(2, 3)).to_right_string();
        assert_eq!(next(".43"), ".413");
        assert_eq!(next("."), ".3");
        assert_eq!(next(".413"), ".243");
    }

    #[test]
    fn dormancy() {
        assert!(is_dormant(&".13".parse().unwrap(), p(2, 3)));
        assert!(!is_dormant(&".43".parse().unwrap(), p(2, 3)));
        assert!(is_dormant(&DigitWord::zero(), p(2, 3)));
    }

    #[test]
    fn deltas_for_three_four() {
        let ds = delta_strings(p(3, 4)).unwrap();
        assert_eq!(
            ds.iter().map(|d| d.to_right_string()).collect::<Vec<_>>(),
            [".654", ".6514", ".6254"]
        );
        assert_eq!(rights(&delta_strings(p(2, 3)).unwrap()), [".43", ".413"]);
        assert_eq!(rights(&delta_strings(p(1, 4)).unwrap()), [".4"]);
    }

    #[test]
    fn closed_form_matches_iteration() {
        for params in coprime_pairs(9) {
            let mut seq = SettlementSeq::new(params).unwrap();
            let (anchor, c) = (seq.anchor(), seq.c());
            for k in anchor..=anchor + 6 * c {
                let iterated = seq.iterated(k).clone();
                assert_eq!(seq.closed_form(k).unwrap(), iterated, "{params} k={k}");
            }
        }
    }

    #[test]
    fn transitions_agree_with_the_engine() {
        for params in coprime_pairs(7) {
            let mut seq = SettlementSeq::new(params).unwrap();
            for k in 0..60 {
                let w = seq.iterated(k).clone();
                let bumped = ChipState::from_word(params, &w.with_added(-1, params.b()));
                let settled = settle_right(&bumped).to_word().right_part();
                assert_eq!(seq.iterated(k + 1), &settled, "{params} k={k}");
            }
        }
    }

    #[test]
    fn index_lookup() {
        for params in coprime_pairs(7) {
            let mut seq = SettlementSeq::new(params).unwrap();
            for k in 0..80 {
                let w = seq.get(k);
                assert_eq!(seq.index_of(&w), Some(k), "{params} k={k}");
            }
        }
        let mut seq = SettlementSeq::new(p(2, 3)).unwrap();
        assert_eq!(seq.index_of(&".33".parse().unwrap()), None);
        assert_eq!(seq.index_of(&"1.3".parse().unwrap()), None);
    }

    #[test]
    fn census() {
        assert_eq!(
            dormant_census(p(2, 3)),
            Ok(Census {
                count: 2,
                highest_index: 2
            })
        );
        assert_eq!(
            dormant_census(p(1, 2)),
            Ok(Census {
                count: 1,
                highest_index: 0
            })
        );
        assert_eq!(
            dormant_census(p(3, 4)),
            Ok(Census {
                count: 3,
                highest_index: 5
            })
        );
        assert_eq!(
            dormant_census(p(4, 5)),
            Ok(Census {
                count: 4,
                highest_index: 9
            })
        );
        for params in coprime_pairs(7) {
            assert!(dormant_census(params).is_ok(), "{params}");
        }
    }

    #[test]
    fn balanced_numbers() {
        assert_eq!(balanced_b(p(2, 3), 1000), Ok(13));
        for b in 2..=7 {
            assert_eq!(balanced_b(p(1, b), 1000), Ok(b + 1));
        }
        assert!(matches!(
            balanced_b(p(2, 3), 10),
            Err(SettlementError::ScanExhausted { .. })
        ));
    }

    #[test]
    fn inequalities() {
        for params in coprime_pairs(12) {
            assert_eq!(delta_digit_bounds(params), Ok(true), "{params}");
        }
        assert!(delta_digit_bounds(p(5, 7)).unwrap());
    }

    #[test]
    fn family_rows_follow_c() {
        for params in coprime_pairs(15) {
            if let Some(row) = family_row(params) {
                assert_eq!(row.c, c_value(params).unwrap(), "{params}");
                assert_eq!(row.origout, eventual_origout(params).unwrap(), "{params}");
                assert_eq!(
                    row.right_value,
                    eventual_right_value(params).unwrap(),
                    "{params}"
                );
            }
        }
        assert_eq!(family_row(p(5, 7)).map(|r| r.c), Some(3));
        assert_eq!(family_row(p(3, 7)).map(|r| r.family), Some(Family::Wide));
        assert_eq!(family_row(p(4, 7)), None);
    }
}
