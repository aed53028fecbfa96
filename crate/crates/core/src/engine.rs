//! Chip states, firing and stabilization: the ground truth for every other
//! module.
//!
//! A [`ChipState`] is a sparse value type. Runs happen on a [`Game`], which
//! keeps the chips on a dense [`Tape`] and tracks the window of vertices that
//! may still be able to fire, so that adding one chip to a stable state only
//! costs the firings it causes.

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fracbase::DigitWord;
use crate::params::GameParams;

pub type Count = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("vertex {vertex} holds {chips} chips, needs {threshold} to fire")]
    FireBelowThreshold {
        vertex: i64,
        chips: Count,
        threshold: Count,
    },
}

/// A configuration of chips on the integer line.
///
/// Invariants: every stored count is positive and the counts add up to `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChipState {
    params: GameParams,
    chips: BTreeMap<i64, Count>,
    n: Count,
}

impl ChipState {
    pub fn empty(params: GameParams) -> Self {
        ChipState {
            params,
            chips: BTreeMap::new(),
            n: 0,
        }
    }

    pub fn from_counts<I: IntoIterator<Item = (i64, Count)>>(
        params: GameParams,
        counts: I,
    ) -> Self {
        let mut state = ChipState::empty(params);
        for (v, k) in counts {
            state.add(v, k);
        }
        state
    }

    /// Reads a state string: position `p` of the word is vertex `-p`.
    pub fn from_word(params: GameParams, word: &DigitWord) -> Self {
        ChipState::from_counts(params, word.iter().map(|(p, d)| (-p, d)))
    }

    pub fn to_word(&self) -> DigitWord {
        DigitWord::from_positions(self.chips.iter().map(|(&v, &k)| (-v, k)))
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn n(&self) -> Count {
        self.n
    }

    pub fn get(&self, v: i64) -> Count {
        self.chips.get(&v).copied().unwrap_or(0)
    }

    /// Occupied vertices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Count)> + '_ {
        self.chips.iter().map(|(&v, &k)| (v, k))
    }

    /// Smallest and largest occupied vertex.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((
            *self.chips.first_key_value()?.0,
            *self.chips.last_key_value()?.0,
        ))
    }

    pub fn is_stable(&self) -> bool {
        self.chips.values().all(|&k| k < self.params.threshold())
    }

    pub fn add(&mut self, v: i64, k: Count) {
        if k == 0 {
            return;
        }
        let slot = self.chips.entry(v).or_insert(0);
        *slot = slot.checked_add(k).expect("chip count overflow");
        self.n = self.n.checked_add(k).expect("chip count overflow");
    }

    /// Fires vertex `v` in place.
    pub fn fire(&mut self, v: i64) -> Result<(), EngineError> {
        let threshold = self.params.threshold();
        let chips = self.get(v);
        if chips < threshold {
            return Err(EngineError::FireBelowThreshold {
                vertex: v,
                chips,
                threshold,
            });
        }
        if chips == threshold {
            self.chips.remove(&v);
        } else {
            self.chips.insert(v, chips - threshold);
        }
        self.n -= threshold;
        self.add(v - 1, self.params.a());
        self.add(v + 1, self.params.b());
        Ok(())
    }
}

impl fmt::Debug for ChipState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChipState[{}]({})", self.params, self.to_word())
    }
}

impl fmt::Display for ChipState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

/// `n` chips on the origin.
pub fn new_state(n: Count, params: GameParams) -> ChipState {
    ChipState::from_counts(params, [(0, n)])
}

/// Returns `state` with vertex `v` fired once.
pub fn fire(state: &ChipState, v: i64) -> Result<ChipState, EngineError> {
    let mut next = state.clone();
    next.fire(v)?;
    Ok(next)
}

/// Per-vertex firing counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiringLog {
    fires: BTreeMap<i64, u64>,
    total: u64,
}

impl FiringLog {
    pub fn record(&mut self, v: i64) {
        *self.fires.entry(v).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn get(&self, v: i64) -> u64 {
        self.fires.get(&v).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.fires.iter().map(|(&v, &k)| (v, k))
    }

    /// Adds another log's counters to this one.
    pub fn merge(&mut self, other: &FiringLog) {
        for (v, k) in other.iter() {
            *self.fires.entry(v).or_insert(0) += k;
        }
        self.total += other.total;
    }
}

/// Which firable vertex fires next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FiringStrategy {
    /// Smallest firable index.
    #[default]
    Leftmost,
    /// Largest firable index.
    Rightmost,
    /// Uniform choice among firable vertices, drawn from a ChaCha8 stream
    /// seeded with `ChaCha8Rng::seed_from_u64(seed)`.
    Random(u64),
    /// Every vertex firable at the start of a round fires exactly once.
    ParallelRounds,
}

impl fmt::Display for FiringStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiringStrategy::Leftmost => write!(f, "leftmost"),
            FiringStrategy::Rightmost => write!(f, "rightmost"),
            FiringStrategy::Random(seed) => write!(f, "random({seed})"),
            FiringStrategy::ParallelRounds => write!(f, "parallel-rounds"),
        }
    }
}

/// Sees every intermediate state of a run, right after each firing.
pub trait FireObserver {
    fn after_fire(&mut self, vertex: i64, tape: &Tape);
}

impl<F: FnMut(i64, &Tape)> FireObserver for F {
    fn after_fire(&mut self, vertex: i64, tape: &Tape) {
        self(vertex, tape)
    }
}

/// Dense storage for chips and firing counts over a window of vertices.
/// Vertices outside the window hold nothing.
#[derive(Debug, Clone)]
pub struct Tape {
    base: i64,
    cells: Vec<Count>,
    fires: Vec<u64>,
}

impl Tape {
    fn new(lo: i64, hi: i64) -> Self {
        let len = (hi - lo + 1).max(1) as usize;
        Tape {
            base: lo,
            cells: vec![0; len],
            fires: vec![0; len],
        }
    }

    #[inline]
    pub fn get(&self, v: i64) -> Count {
        let i = v - self.base;
        if i < 0 {
            return 0;
        }
        self.cells.get(i as usize).copied().unwrap_or(0)
    }

    pub fn fires_at(&self, v: i64) -> u64 {
        let i = v - self.base;
        if i < 0 {
            return 0;
        }
        self.fires.get(i as usize).copied().unwrap_or(0)
    }

    /// First and last vertex of the allocated window.
    pub fn window(&self) -> (i64, i64) {
        (self.base, self.base + self.cells.len() as i64 - 1)
    }

    pub fn occupied(&self) -> impl Iterator<Item = (i64, Count)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(move |(i, &k)| (self.base + i as i64, k))
    }

    /// Grows the window so that `v - 1 ..= v + 1` is addressable.
    fn reserve_around(&mut self, v: i64) {
        let (lo, hi) = self.window();
        if v - 1 < lo {
            let extra = (lo - (v - 1)) as usize + self.cells.len().max(16);
            let mut cells = vec![0; extra];
            cells.extend_from_slice(&self.cells);
            let mut fires = vec![0; extra];
            fires.extend_from_slice(&self.fires);
            self.cells = cells;
            self.fires = fires;
            self.base -= extra as i64;
        }
        if v + 1 > hi {
            let extra = (v + 1 - hi) as usize + self.cells.len().max(16);
            self.cells.resize(self.cells.len() + extra, 0);
            self.fires.resize(self.fires.len() + extra, 0);
        }
    }

    fn add(&mut self, v: i64, k: Count) {
        self.reserve_around(v);
        let i = (v - self.base) as usize;
        self.cells[i] = self.cells[i].checked_add(k).expect("chip count overflow");
    }
}

/// A game in progress.
#[derive(Debug, Clone)]
pub struct Game {
    params: GameParams,
    tape: Tape,
    n: Count,
    /// Window that may contain firable vertices; `None` when stable.
    dirty: Option<(i64, i64)>,
    total_fires: u64,
    /// Set while every chip ever added went to the origin. Such runs stay
    /// inside `[-n, n]`, which is asserted on each firing.
    origin_only: bool,
}

impl Game {
    pub fn new(state: &ChipState) -> Self {
        let (lo, hi) = state.support().unwrap_or((0, 0));
        let mut game = Game {
            params: state.params(),
            tape: Tape::new(lo - 1, hi + 1),
            n: 0,
            dirty: None,
            total_fires: 0,
            origin_only: true,
        };
        for (v, k) in state.iter() {
            game.add_chips(v, k);
        }
        game
    }

    /// `n` chips on the origin, not yet fired.
    pub fn from_pile(n: Count, params: GameParams) -> Self {
        Game::new(&new_state(n, params))
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn n(&self) -> Count {
        self.n
    }

    pub fn tape(&self) -> &Tape {
        &self.tape
    }

    pub fn chips(&self, v: i64) -> Count {
        self.tape.get(v)
    }

    pub fn total_fires(&self) -> u64 {
        self.total_fires
    }

    pub fn is_stable(&self) -> bool {
        match self.dirty {
            None => true,
            Some((lo, hi)) => (lo..=hi).all(|v| self.tape.get(v) < self.params.threshold()),
        }
    }

    pub fn add_chips(&mut self, v: i64, k: Count) {
        if k == 0 {
            return;
        }
        if v != 0 {
            self.origin_only = false;
        }
        self.tape.add(v, k);
        self.n = self.n.checked_add(k).expect("chip count overflow");
        self.widen_dirty(v, v);
    }

    fn widen_dirty(&mut self, lo: i64, hi: i64) {
        self.dirty = Some(match self.dirty {
            None => (lo, hi),
            Some((l, h)) => (l.min(lo), h.max(hi)),
        });
    }

    #[inline]
    fn fire_unchecked(&mut self, v: i64) {
        if self.origin_only {
            let bound = self.n as i64;
            assert!(
                -bound < v && v < bound,
                "firing at {v} leaves the window [-{bound}, {bound}]"
            );
        }
        self.tape.reserve_around(v);
        let (a, b) = (self.params.a(), self.params.b());
        let tape = &mut self.tape;
        let i = (v - tape.base) as usize;
        tape.cells[i] -= a + b;
        tape.fires[i] += 1;
        tape.cells[i - 1] = tape.cells[i - 1]
            .checked_add(a)
            .expect("chip count overflow");
        tape.cells[i + 1] = tape.cells[i + 1]
            .checked_add(b)
            .expect("chip count overflow");
        self.total_fires += 1;
    }

    /// Fires `v` once, failing if it holds fewer than `a + b` chips.
    pub fn fire(&mut self, v: i64) -> Result<(), EngineError> {
        let threshold = self.params.threshold();
        let chips = self.tape.get(v);
        if chips < threshold {
            return Err(EngineError::FireBelowThreshold {
                vertex: v,
                chips,
                threshold,
            });
        }
        self.fire_unchecked(v);
        self.widen_dirty(v - 1, v + 1);
        Ok(())
    }

    /// Fires until no vertex holds `a + b` chips. Returns the number of firings.
    pub fn stabilize(&mut self, strategy: FiringStrategy) -> u64 {
        self.stabilize_observed(strategy, &mut |_: i64, _: &Tape| {})
    }

    pub fn stabilize_observed<O: FireObserver + ?Sized>(
        &mut self,
        strategy: FiringStrategy,
        observer: &mut O,
    ) -> u64 {
        let Some((lo, hi)) = self.dirty.take() else {
            return 0;
        };
        let before = self.total_fires;
        self.run(strategy, lo, hi, i64::MIN, observer);
        self.total_fires - before
    }

    /// Fires only vertices `>= 1` until all of them are below `a + b`.
    /// Chips may pile up on the origin; those are left alone.
    pub fn settle_right(&mut self) -> u64 {
        let Some((lo, hi)) = self.dirty.take() else {
            return 0;
        };
        let before = self.total_fires;
        if hi >= 1 {
            self.run(
                FiringStrategy::Leftmost,
                lo.max(1),
                hi,
                1,
                &mut |_: i64, _: &Tape| {},
            );
        }
        if lo <= 0 || self.total_fires > before {
            let touched = if self.total_fires > before {
                0
            } else {
                hi.min(0)
            };
            self.widen_dirty(lo.min(0), touched.max(lo.min(0)));
        }
        self.total_fires - before
    }

    /// Adds one chip to the origin and stabilizes with the leftmost rule.
    pub fn grow(&mut self) -> u64 {
        self.add_chips(0, 1);
        self.stabilize(FiringStrategy::Leftmost)
    }

    fn run<O: FireObserver + ?Sized>(
        &mut self,
        strategy: FiringStrategy,
        lo: i64,
        hi: i64,
        floor: i64,
        observer: &mut O,
    ) {
        let thr = self.params.threshold();
        match strategy {
            FiringStrategy::Leftmost => {
                // Everything left of `cur` is stable; nothing right of `hi` can fire.
                let (mut cur, mut hi) = (lo.max(floor), hi);
                while cur <= hi {
                    if self.tape.get(cur) >= thr {
                        self.fire_unchecked(cur);
                        observer.after_fire(cur, &self.tape);
                        hi = hi.max(cur + 1);
                        if cur > floor && self.tape.get(cur - 1) >= thr {
                            cur -= 1;
                        }
                    } else {
                        cur += 1;
                    }
                }
            }
            FiringStrategy::Rightmost => {
                let (mut cur, mut lo) = (hi, lo.max(floor));
                while cur >= lo {
                    if self.tape.get(cur) >= thr {
                        self.fire_unchecked(cur);
                        observer.after_fire(cur, &self.tape);
                        lo = lo.min(cur - 1).max(floor);
                        if self.tape.get(cur + 1) >= thr {
                            cur += 1;
                        }
                    } else {
                        cur -= 1;
                    }
                }
            }
            FiringStrategy::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut firable: IndexSet<i64> = (lo.max(floor)..=hi)
                    .filter(|&v| self.tape.get(v) >= thr)
                    .collect();
                while !firable.is_empty() {
                    let pick = rng.random_range(0..firable.len());
                    let v = *firable.get_index(pick).expect("index in range");
                    self.fire_unchecked(v);
                    observer.after_fire(v, &self.tape);
                    for u in [v - 1, v, v + 1] {
                        if u < floor {
                            continue;
                        }
                        if self.tape.get(u) >= thr {
                            firable.insert(u);
                        } else {
                            firable.swap_remove(&u);
                        }
                    }
                }
            }
            FiringStrategy::ParallelRounds => {
                let mut round: Vec<i64> = (lo.max(floor)..=hi)
                    .filter(|&v| self.tape.get(v) >= thr)
                    .collect();
                while !round.is_empty() {
                    // A listed vertex only gains chips until its own turn, so it can still fire.
                    for &v in &round {
                        self.fire_unchecked(v);
                        observer.after_fire(v, &self.tape);
                    }
                    let mut next: Vec<i64> = round
                        .iter()
                        .flat_map(|&v| [v - 1, v, v + 1])
                        .filter(|&u| u >= floor && self.tape.get(u) >= thr)
                        .collect();
                    next.sort_unstable();
                    next.dedup();
                    round = next;
                }
            }
        }
    }

    pub fn state(&self) -> ChipState {
        ChipState::from_counts(self.params, self.tape.occupied())
    }

    pub fn word(&self) -> DigitWord {
        DigitWord::from_positions(self.tape.occupied().map(|(v, k)| (-v, k)))
    }

    pub fn log(&self) -> FiringLog {
        let mut log = FiringLog::default();
        let (lo, _) = self.tape.window();
        for (i, &k) in self.tape.fires.iter().enumerate() {
            if k > 0 {
                log.fires.insert(lo + i as i64, k);
                log.total += k;
            }
        }
        log
    }
}

/// Stabilizes a copy of `state`; the log counts only the firings of this run.
pub fn stabilize(state: &ChipState, strategy: FiringStrategy) -> (ChipState, FiringLog) {
    let mut game = Game::new(state);
    game.stabilize(strategy);
    (game.state(), game.log())
}

/// Adds a chip to the origin of a stable state and stabilizes again.
pub fn increment_origin(state: &ChipState) -> ChipState {
    debug_assert!(state.is_stable(), "increment_origin expects a stable state");
    let mut game = Game::new(state);
    game.grow();
    game.state()
}

/// Settles the right part: fires vertices `>= 1` only, as often as possible.
pub fn settle_right(state: &ChipState) -> ChipState {
    let mut game = Game::new(state);
    game.settle_right();
    game.state()
}

/// The final state reached from `n` chips at the origin, with its firing log.
pub fn simulate(n: Count, params: GameParams) -> (ChipState, FiringLog) {
    stabilize(&new_state(n, params), FiringStrategy::Leftmost)
}
