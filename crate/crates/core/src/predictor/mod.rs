//! Final states without simulating every firing.
//!
//! Degenerate games are reduced first: equal rates have a closed form, a
//! common factor `d` is divided out and lifted back, and `a > b` is the mirror
//! image of `b > a`. For coprime `a < b` a [`PredictorProfile`] stores the
//! simulated final states up to a certified threshold `H`. Past `H` the left
//! part follows the elevated game (a digit reaching `a + b` loses `b` and
//! hands `a` to its left neighbour) and the right part is the settlement
//! whose index grows by the number of explosions of each step.

pub mod one_b;

use std::collections::HashMap;

use thiserror::Error;

use crate::engine::Game;
use crate::fracbase::{Digit, DigitWord};
use crate::params::{GameParams, ParamsError};
use crate::settlements::{balanced_b, SettlementError, SettlementSeq};

pub use one_b::{
    bijective_digit_sum, binary_trick_left, nu_b, one_b_left, one_b_right_count,
    one_b_right_length, one_b_settlement, r_index_offset, r_sequence,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredictorError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Settlement(#[from] SettlementError),
    #[error("left part is not regular: digit {digit} at position {position}")]
    NotRegular { position: i64, digit: Digit },
    #[error("{params}: elevated rule never held for {window} steps below n = {limit} (last break at n = {last_break})")]
    WindowFailure {
        params: GameParams,
        window: u64,
        limit: u64,
        last_break: u64,
    },
}

/// Scan limit for the balanced number and for certifying `H`.
pub const SCAN_LIMIT: u64 = 100_000;
pub const DEFAULT_WINDOW: u64 = 50;

/// Everything the fast path needs for one coprime pair with `a < b`.
#[derive(Debug, Clone)]
pub struct PredictorProfile {
    params: GameParams,
    c: u64,
    balanced: u64,
    h: u64,
    verified_window: u64,
    /// Settlement index of the right part of `φ(H)`.
    anchor_index: u64,
    /// `φ(0) ..= φ(H)` from simulation.
    table: Vec<DigitWord>,
    seq: SettlementSeq,
}

impl PredictorProfile {
    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn balanced(&self) -> u64 {
        self.balanced
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn verified_window(&self) -> u64 {
        self.verified_window
    }

    pub fn anchor_state(&self) -> &DigitWord {
        &self.table[self.h as usize]
    }

    pub fn anchor_index(&self) -> u64 {
        self.anchor_index
    }

    /// Simulated `φ(n)` for `n <= H`.
    pub fn table(&self) -> &[DigitWord] {
        &self.table
    }

    pub fn settlements(&self) -> &SettlementSeq {
        &self.seq
    }

    /// `φ(n)` from the table or the fast path.
    pub fn final_state(&self, n: u64) -> DigitWord {
        if n <= self.h {
            return self.table[n as usize].clone();
        }
        let mut run = self.fast_run();
        run.advance(n - self.h);
        run.word()
    }

    /// `φ(n)` for every `n` in `n0 ..= n1`, stepping once per value.
    pub fn final_states(&self, n0: u64, n1: u64) -> Vec<DigitWord> {
        let mut out = Vec::with_capacity(n1.saturating_sub(n0) as usize + 1);
        let mut n = n0;
        while n <= n1 && n <= self.h {
            out.push(self.table[n as usize].clone());
            n += 1;
        }
        if n <= n1 {
            let mut run = self.fast_run();
            run.advance(n - self.h);
            out.push(run.word());
            while n < n1 {
                run.advance(1);
                n += 1;
                out.push(run.word());
            }
        }
        out
    }

    /// Fast path state positioned at `n = H`.
    pub fn fast_run(&self) -> FastRun {
        FastRun {
            params: self.params,
            n: self.h,
            left: dense_left(self.anchor_state()),
            k: self.anchor_index,
            seq: self.seq.clone(),
        }
    }
}

/// Left part as digits indexed by position, units first.
fn dense_left(w: &DigitWord) -> Vec<Digit> {
    let mut digits = w.left_digits();
    digits.reverse();
    digits
}

/// A final state past `H`, stepped one chip at a time.
#[derive(Debug, Clone)]
pub struct FastRun {
    params: GameParams,
    n: u64,
    left: Vec<Digit>,
    k: u64,
    seq: SettlementSeq,
}

impl FastRun {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn settlement_index(&self) -> u64 {
        self.k
    }

    /// Adds `steps` chips. Returns the total number of explosions.
    pub fn advance(&mut self, steps: u64) -> u64 {
        let mut total = 0;
        for _ in 0..steps {
            let e = elevate_in_place(&mut self.left, self.params);
            self.k += e;
            total += e;
        }
        self.n += steps;
        total
    }

    pub fn left(&self) -> DigitWord {
        DigitWord::from_dense(0, self.left.clone())
    }

    pub fn right(&mut self) -> DigitWord {
        self.seq.get(self.k)
    }

    pub fn word(&mut self) -> DigitWord {
        self.left().combine(&self.right())
    }
}

/// One chip at position 0 of the elevated game, in place. Returns the
/// number of explosions; each position explodes at most once.
fn elevate_in_place(left: &mut Vec<Digit>, params: GameParams) -> u64 {
    let (a, b) = (params.a(), params.b());
    let t = a + b;
    if left.is_empty() {
        left.push(0);
    }
    left[0] += 1;
    let mut p = 0;
    while left[p] >= t {
        left[p] -= b;
        assert!(left[p] < t, "position {p} would explode twice");
        if p + 1 == left.len() {
            left.push(0);
        }
        left[p + 1] += a;
        p += 1;
    }
    p as u64
}

fn check_regular(left: &DigitWord, params: GameParams) -> Result<(), PredictorError> {
    let digits = dense_left(left);
    if digits.is_empty() {
        return Err(PredictorError::NotRegular {
            position: 0,
            digit: 0,
        });
    }
    match digits.iter().position(|&d| d < params.a()) {
        Some(p) => Err(PredictorError::NotRegular {
            position: p as i64,
            digit: digits[p],
        }),
        None => Ok(()),
    }
}

/// Adds one chip at the origin of a regular left part in the elevated game.
/// Returns the new left part and the number of explosions.
pub fn elevated_increment(
    left: &DigitWord,
    params: GameParams,
) -> Result<(DigitWord, u64), PredictorError> {
    check_regular(left, params)?;
    let mut digits = dense_left(left);
    let e = elevate_in_place(&mut digits, params);
    Ok((DigitWord::from_dense(0, digits), e))
}

/// Explosions caused by one more chip, read off the digits: none unless the
/// units digit is `a+b-1`, otherwise one plus the run of digits `>= b`
/// directly left of it.
pub fn explosions_by_scan(left: &DigitWord, params: GameParams) -> u64 {
    let digits = dense_left(left);
    if digits.first() != Some(&(params.threshold() - 1)) {
        return 0;
    }
    1 + digits[1..].iter().take_while(|&&d| d >= params.b()).count() as u64
}

/// Length of the longest suffix of the left part made of digits `>= b`.
/// This is the literal reading of a published rule for the index advance;
/// it overcounts whenever the units digit is at least `b` but below `a+b-1`.
pub fn suffix_count_literal(left: &DigitWord, params: GameParams) -> u64 {
    dense_left(left)
        .iter()
        .take_while(|&&d| d >= params.b())
        .count() as u64
}

/// Settlement index of `φ(n+1)` given the left part and index of `φ(n)`,
/// for `n > H`.
pub fn right_advance(
    prev_left: &DigitWord,
    k: u64,
    params: GameParams,
) -> Result<u64, PredictorError> {
    let (_, e) = elevated_increment(prev_left, params)?;
    assert_eq!(
        e,
        explosions_by_scan(prev_left, params),
        "explosion count disagrees with digit scan"
    );
    Ok(k + e)
}

/// Certifies `H` and stores the table below it.
///
/// `H` is the smallest `n >= B` such that `φ(n)` and the next `check_window`
/// final states have regular left parts and each step from one to the next
/// is reproduced by the fast path. A break inside the window moves the
/// candidate past the break and starts over.
pub fn compute_profile(
    params: GameParams,
    check_window: u64,
) -> Result<PredictorProfile, PredictorError> {
    params.require_structured()?;
    let balanced = balanced_b(params, SCAN_LIMIT)?;
    let mut seq = SettlementSeq::new(params)?;
    let mut game = Game::from_pile(0, params);
    let mut table = vec![DigitWord::zero()];
    let mut extend = |table: &mut Vec<DigitWord>, upto: u64| {
        while table.len() as u64 <= upto {
            game.grow();
            table.push(game.word());
        }
    };
    let mut candidate = balanced;
    let mut last_break = balanced;
    loop {
        if candidate > SCAN_LIMIT {
            return Err(PredictorError::WindowFailure {
                params,
                window: check_window,
                limit: SCAN_LIMIT,
                last_break,
            });
        }
        let broken = (candidate..candidate + check_window.max(1)).find(|&m| {
            extend(&mut table, m + 1);
            !fast_step_holds(&table[m as usize], &table[m as usize + 1], params, &mut seq)
        });
        match broken {
            Some(m) => {
                last_break = m;
                candidate = m + 1;
            }
            None => break,
        }
    }
    let h = candidate;
    table.truncate(h as usize + 1);
    let anchor_index = seq
        .index_of(&table[h as usize].right_part())
        .expect("right part of a final state is a settlement");
    Ok(PredictorProfile {
        params,
        c: seq.c(),
        balanced,
        h,
        verified_window: check_window.max(1),
        anchor_index,
        table,
        seq,
    })
}

fn fast_step_holds(
    now: &DigitWord,
    next: &DigitWord,
    params: GameParams,
    seq: &mut SettlementSeq,
) -> bool {
    let left = now.left_part();
    let Ok((next_left, e)) = elevated_increment(&left, params) else {
        return false;
    };
    if e != explosions_by_scan(&left, params) {
        return false;
    }
    let Some(k) = seq.index_of(&now.right_part()) else {
        return false;
    };
    next_left.combine(&seq.get(k + e)) == *next
}

/// `φ(n)` for the `a-a` game: `n mod 2a` on the origin and `⌊n/2a⌋`
/// vertices holding `a` on each side.
pub fn aa_final(n: u64, a: u64) -> DigitWord {
    assert!(a > 0, "rates must be positive");
    let k = (n / (2 * a)) as i64;
    DigitWord::from_positions(
        (1..=k)
            .flat_map(|p| [(p, a), (-p, a)])
            .chain(std::iter::once((0, n % (2 * a)))),
    )
}

/// Turns `φ(p)` of the `a/d - b/d` game into `φ(p*d + q)` of the `a-b` game.
pub fn lift_noncoprime(w: &DigitWord, d: u64, q: u64) -> DigitWord {
    assert!(q < d, "remainder {q} must be below {d}");
    w.map_digits(|x| x * d).with_added(0, q)
}

/// Profiles per parameter pair, computed on first use.
#[derive(Debug, Clone)]
pub struct Predictor {
    window: u64,
    profiles: HashMap<GameParams, PredictorProfile>,
}

impl Default for Predictor {
    fn default() -> Self {
        Predictor::new(DEFAULT_WINDOW)
    }
}

impl Predictor {
    pub fn new(window: u64) -> Self {
        Predictor {
            window,
            profiles: HashMap::new(),
        }
    }

    pub fn profile(&mut self, params: GameParams) -> Result<&PredictorProfile, PredictorError> {
        if !self.profiles.contains_key(&params) {
            let profile = compute_profile(params, self.window)?;
            self.profiles.insert(params, profile);
        }
        Ok(&self.profiles[&params])
    }

    pub fn final_state(&mut self, n: u64, params: GameParams) -> Result<DigitWord, PredictorError> {
        Ok(self.final_states(params, n, n)?.pop().expect("one state"))
    }

    /// `φ(n)` for `n0 ..= n1`.
    pub fn final_states(
        &mut self,
        params: GameParams,
        n0: u64,
        n1: u64,
    ) -> Result<Vec<DigitWord>, PredictorError> {
        if n0 > n1 {
            return Ok(Vec::new());
        }
        let (a, b) = (params.a(), params.b());
        if a == b {
            return Ok((n0..=n1).map(|n| aa_final(n, a)).collect());
        }
        let d = params.gcd();
        if d > 1 {
            let reduced = self.final_states(params.reduced(), n0 / d, n1 / d)?;
            return Ok((n0..=n1)
                .map(|n| lift_noncoprime(&reduced[(n / d - n0 / d) as usize], d, n % d))
                .collect());
        }
        if a > b {
            let mirrored = self.final_states(params.mirrored(), n0, n1)?;
            return Ok(mirrored.iter().map(DigitWord::reflect).collect());
        }
        Ok(self.profile(params)?.final_states(n0, n1))
    }
}

/// `φ(n)` for any positive rates.
pub fn final_state(n: u64, params: GameParams) -> Result<DigitWord, PredictorError> {
    Predictor::default().final_state(n, params)
}
