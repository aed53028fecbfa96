//! Conserved quantities of a run and what they say about firing counts.
//!
//! For a state `σ` with `s_m` chips on vertex `m` the state polynomial is
//! `S_σ(t) = Σ s_m t^(-m)`. Firing keeps both `S_σ(1)` and `S_σ(b/a)` equal to
//! `n`. Splitting at the radix gives the left and right side values, which
//! are linear in the firing counts `f0` (origin) and `f1` (origout):
//!
//! ```text
//! left(1)    = n - b*f0 + a*f1      right(1)   = b*f0 - a*f1
//! left(b/a)  = n - a*(f0 - f1)      right(b/a) = a*(f0 - f1)
//! ```
//!
//! The weighted sum `M = Σ m*s_m` grows by `b - a` per firing, so a final
//! state alone tells how many firings produced it.

use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::engine::{ChipState, FireObserver, FiringLog, Tape};
use crate::fracbase::{eval_at, DigitWord, ExactRational};
use crate::params::GameParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("t = 0 with chips right of the origin")]
    DivisionByZero,
    #[error("{equation} fails: expected {expected}, got {actual}")]
    InconsistentLog {
        equation: &'static str,
        expected: String,
        actual: String,
    },
    #[error("weighted sum {m} is not divisible by {divisor}")]
    NotDivisible { m: i128, divisor: i128 },
    #[error("firing count is undetermined when a = b")]
    EqualRates,
}

/// Exact value of `S_σ(t)`.
pub fn state_poly_eval(
    state: &ChipState,
    t: &ExactRational,
) -> Result<ExactRational, AnalysisError> {
    word_poly_eval(&state.to_word(), t)
}

/// `S(t)` for a state given as a word (position `p` is vertex `-p`).
pub fn word_poly_eval(word: &DigitWord, t: &ExactRational) -> Result<ExactRational, AnalysisError> {
    if t.is_zero() {
        if word.low().is_some_and(|l| l < 0) {
            return Err(AnalysisError::DivisionByZero);
        }
        return Ok(ExactRational::from_integer(word.digit(0)));
    }
    Ok(eval_at(word, t.numer(), t.denom()))
}

/// Left part (vertices `<= 0`) and right part (vertices `>= 1`) as words.
pub fn split(state: &ChipState) -> (DigitWord, DigitWord) {
    let word = state.to_word();
    (word.left_part(), word.right_part())
}

pub fn ratio_boa(params: GameParams) -> ExactRational {
    ExactRational::new(params.b(), params.a())
}

/// The four side values of a final state next to its firing counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub s_at_1: i128,
    pub s_at_boa: ExactRational,
    pub left_at_1: i128,
    pub right_at_1: i128,
    pub left_at_boa: ExactRational,
    pub right_at_boa: ExactRational,
    pub m_weighted: i128,
    pub f0: u64,
    pub f1: u64,
}

/// Evaluates both sides at 1 and at b/a and checks them against the counts
/// in `log`, which must come from a run that started with every chip on the
/// origin.
pub fn side_values(state: &ChipState, log: &FiringLog) -> Result<InvariantReport, AnalysisError> {
    let params = state.params();
    let (left, right) = split(state);
    let boa = ratio_boa(params);
    let at_1 = |w: &DigitWord| w.digit_sum() as i128;
    let report = InvariantReport {
        s_at_1: state.n() as i128,
        s_at_boa: state_poly_eval(state, &boa)?,
        left_at_1: at_1(&left),
        right_at_1: at_1(&right),
        left_at_boa: word_poly_eval(&left, &boa)?,
        right_at_boa: word_poly_eval(&right, &boa)?,
        m_weighted: weighted_sum(state),
        f0: log.get(0),
        f1: log.get(1),
    };
    let n = state.n() as i128;
    let (a, b) = (params.a() as i128, params.b() as i128);
    let (f0, f1) = (report.f0 as i128, report.f1 as i128);
    let checks: [(&'static str, ExactRational, ExactRational); 5] = [
        (
            "S(b/a) = n",
            ExactRational::from_integer(n),
            report.s_at_boa.clone(),
        ),
        (
            "left(1) = n - b*f0 + a*f1",
            ExactRational::from_integer(n - b * f0 + a * f1),
            report.left_at_1.into_rat(),
        ),
        (
            "right(1) = b*f0 - a*f1",
            ExactRational::from_integer(b * f0 - a * f1),
            report.right_at_1.into_rat(),
        ),
        (
            "left(b/a) = n - a*(f0 - f1)",
            ExactRational::from_integer(n - a * (f0 - f1)),
            report.left_at_boa.clone(),
        ),
        (
            "right(b/a) = a*(f0 - f1)",
            ExactRational::from_integer(a * (f0 - f1)),
            report.right_at_boa.clone(),
        ),
    ];
    for (equation, expected, actual) in checks {
        if expected != actual {
            return Err(AnalysisError::InconsistentLog {
                equation,
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    Ok(report)
}

trait IntoRat {
    fn into_rat(self) -> ExactRational;
}

impl IntoRat for i128 {
    fn into_rat(self) -> ExactRational {
        ExactRational::from_integer(BigInt::from(self))
    }
}

/// Solves the side-value equations for `(f0, f1)` from the right part alone.
/// Returns `None` when `a = b` or the values are not consistent with any run.
pub fn recover_firings(right: &DigitWord, params: GameParams) -> Option<(u64, u64)> {
    let (a, b) = (params.a() as i128, params.b() as i128);
    if a == b {
        return None;
    }
    let r1 = right.digit_sum() as i128;
    let rboa = eval_at(right, &BigInt::from(b), &BigInt::from(a)).to_i128()?;
    let diff = r1 - rboa;
    if diff % (b - a) != 0 || rboa % a != 0 {
        return None;
    }
    let f0 = diff / (b - a);
    let f1 = f0 - rboa / a;
    (f0 >= 0 && f1 >= 0).then_some((f0 as u64, f1 as u64))
}

/// `M = Σ m * s_m` over the support.
pub fn weighted_sum(state: &ChipState) -> i128 {
    state.iter().map(|(v, k)| v as i128 * k as i128).sum()
}

/// Number of firings that lead from `n` chips at the origin to `state`: `M / (b - a)`.
pub fn firings_from_m(state: &ChipState) -> Result<u64, AnalysisError> {
    let params = state.params();
    if params.a() == params.b() {
        return Err(AnalysisError::EqualRates);
    }
    let m = weighted_sum(state);
    let divisor = params.b() as i128 - params.a() as i128;
    if m % divisor != 0 || m / divisor < 0 {
        return Err(AnalysisError::NotDivisible { m, divisor });
    }
    Ok((m / divisor) as u64)
}

/// One failed check seen by a [`ConservationWatch`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub step: u64,
    pub vertex: i64,
    pub what: String,
}

/// Observer that checks conservation on every intermediate state of a run.
///
/// Each firing is checked locally and exactly: the watch reads the actual
/// changes at `v-1, v, v+1` from the tape and verifies that they leave
/// `S(1)` and `S(b/a)` unchanged and move `M` by `b - a`. Every `stride`-th
/// state (and the first one) is also evaluated from scratch as an exact
/// rational, which catches changes anywhere else on the tape.
#[derive(Debug, Clone)]
pub struct ConservationWatch {
    params: GameParams,
    n: u64,
    stride: u64,
    boa: ExactRational,
    shadow: HashMap<i64, u64>,
    steps: u64,
    full_checks: u64,
    violations: Vec<Violation>,
}

impl ConservationWatch {
    pub const DEFAULT_STRIDE: u64 = 16;

    /// `stride = 1` evaluates every state in full.
    pub fn new(start: &ChipState, stride: u64) -> Self {
        ConservationWatch {
            params: start.params(),
            n: start.n(),
            stride: stride.max(1),
            boa: ratio_boa(start.params()),
            shadow: start.iter().collect(),
            steps: 0,
            full_checks: 0,
            violations: Vec::new(),
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn full_checks(&self) -> u64 {
        self.full_checks
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Evaluates a whole tape at 1 and at b/a.
    pub fn check_full(&mut self, vertex: i64, tape: &Tape) {
        self.full_checks += 1;
        let word = DigitWord::from_positions(tape.occupied().map(|(v, k)| (-v, k)));
        let n = ExactRational::from_integer(self.n);
        let at_1 = ExactRational::from_integer(word.digit_sum());
        if at_1 != n {
            self.flag(vertex, format!("S(1) = {at_1}, expected {n}"));
        }
        let at_boa = eval_at(&word, self.boa.numer(), self.boa.denom());
        if at_boa != n {
            self.flag(vertex, format!("S(b/a) = {at_boa}, expected {n}"));
        }
    }

    fn flag(&mut self, vertex: i64, what: String) {
        self.violations.push(Violation {
            step: self.steps,
            vertex,
            what,
        });
    }
}

impl FireObserver for ConservationWatch {
    fn after_fire(&mut self, v: i64, tape: &Tape) {
        self.steps += 1;
        let (a, b) = (self.params.a() as i128, self.params.b() as i128);
        let mut delta = [0i128; 3];
        for (i, u) in [v - 1, v, v + 1].into_iter().enumerate() {
            let now = tape.get(u);
            let before = self.shadow.get(&u).copied().unwrap_or(0);
            delta[i] = now as i128 - before as i128;
            if now == 0 {
                self.shadow.remove(&u);
            } else {
                self.shadow.insert(u, now);
            }
        }
        let [left, mid, right] = delta;
        if left + mid + right != 0 {
            self.flag(v, format!("S(1) moved by {}", left + mid + right));
        }
        // The change of S(b/a) is (a/b)^v / (ab) times this integer.
        let boa_change = left * b * b + mid * a * b + right * a * a;
        if boa_change != 0 {
            self.flag(
                v,
                format!("S(b/a) moved by (a/b)^{v} * {boa_change}/{}", a * b),
            );
        }
        let m_change = right - left + v as i128 * (left + mid + right);
        if m_change != b - a {
            self.flag(v, format!("M moved by {m_change}, expected {}", b - a));
        }
        if self.steps == 1 || self.steps.is_multiple_of(self.stride) {
            self.check_full(v, tape);
        }
    }
}
