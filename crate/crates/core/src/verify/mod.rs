//! Property suites behind `chipfire verify`.
//!
//! A suite runs many small cases and tallies named checks. Failures keep the
//! smallest counterexample `(a, b, n, expected, actual)`. Cases for different
//! parameter pairs may run on a rayon pool; results are merged in a fixed
//! order so the printed report never depends on scheduling.

pub mod errata;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{
    firings_from_m, recover_firings, side_values, split, weighted_sum, ConservationWatch,
};
use crate::engine::{simulate, ChipState, FiringLog, FiringStrategy, Game};
use crate::fracbase::{eval_base, DigitWord, ExactRational};
use crate::params::{coprime_pairs, GameParams};
use crate::predictor::{
    aa_final, binary_trick_left, compute_profile, elevated_increment, explosions_by_scan,
    one_b_right_count, one_b_right_length, one_b_settlement, r_index_offset, r_sequence,
    right_advance, suffix_count_literal, Predictor, DEFAULT_WINDOW,
};
use crate::settlements::{
    anchor_index, balanced_b, c_value, delta_digit_bounds, delta_strings, dormant_census,
    enumerate_dormant, family_row, highest_dormant_index, right_part_of, settlement_next,
    tetrahedral, Family, SettlementSeq,
};

pub use errata::{Erratum, ErratumId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Confluence,
    Invariants,
    Settlements,
    Predictor,
    OneB,
    Golden,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Confluence,
        Suite::Invariants,
        Suite::Settlements,
        Suite::Predictor,
        Suite::OneB,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Confluence => "confluence",
            Suite::Invariants => "invariants",
            Suite::Settlements => "settlements",
            Suite::Predictor => "predictor",
            Suite::OneB => "one-b",
            Suite::Golden => "golden",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "unknown suite {0:?}; expected confluence, invariants, settlements, predictor, one-b or all"
)]
pub struct UnknownSuite(pub String);

/// Suites named on the command line; `all` expands to every suite.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>, UnknownSuite> {
    match name {
        "all" => Ok(Suite::ALL.to_vec()),
        _ => Suite::ALL
            .iter()
            .find(|s| s.name() == name)
            .map(|&s| vec![s])
            .ok_or_else(|| UnknownSuite(name.to_string())),
    }
}

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_suites(s)?.as_slice() {
            [one] => Ok(*one),
            _ => Err(UnknownSuite(s.to_string())),
        }
    }
}

/// A failing case. `n` is `None` for checks that do not depend on `n`; `var`
/// names the quantity stored in `n` when it is not a chip count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Counterexample {
    pub a: u64,
    pub b: u64,
    pub n: Option<u64>,
    pub var: &'static str,
    pub expected: String,
    pub actual: String,
}

impl Counterexample {
    pub fn new(
        params: GameParams,
        n: Option<u64>,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        Counterexample {
            a: params.a(),
            b: params.b(),
            n,
            var: "n",
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub fn at(
        params: GameParams,
        n: u64,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        Counterexample::new(params, Some(n), expected, actual)
    }

    pub fn named(mut self, var: &'static str) -> Self {
        self.var = var;
        self
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={} b={}", self.a, self.b)?;
        if let Some(n) = self.n {
            write!(f, " {}={}", self.var, n)?;
        }
        write!(f, " expected={} actual={}", self.expected, self.actual)
    }
}

/// Tally of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub cases: u64,
    pub failures: Vec<Counterexample>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Smallest failing case.
    pub fn first_failure(&self) -> Option<&Counterexample> {
        self.failures.iter().min()
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_failure() {
            None => write!(f, "PASS {}/{} cases={}", self.suite, self.name, self.cases),
            Some(first) => write!(
                f,
                "FAIL {}/{} cases={} failures={} first: {}",
                self.suite,
                self.name,
                self.cases,
                self.failures.len(),
                first
            ),
        }
    }
}

/// Everything a verification run found.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    checks: BTreeMap<(Suite, &'static str), CheckResult>,
    errata: BTreeMap<ErratumId, Erratum>,
}

impl Report {
    pub fn record(
        &mut self,
        suite: Suite,
        name: &'static str,
        outcome: Result<(), Counterexample>,
    ) {
        let entry = self
            .checks
            .entry((suite, name))
            .or_insert_with(|| CheckResult {
                suite,
                name,
                cases: 0,
                failures: Vec::new(),
            });
        entry.cases += 1;
        if let Err(cx) = outcome {
            entry.failures.push(cx);
        }
    }

    /// Records a check from a boolean, building the counterexample lazily.
    pub fn expect(
        &mut self,
        suite: Suite,
        name: &'static str,
        ok: bool,
        cx: impl FnOnce() -> Counterexample,
    ) {
        self.record(suite, name, if ok { Ok(()) } else { Err(cx()) });
    }

    /// Keeps the smallest counterexample per erratum.
    pub fn erratum(&mut self, id: ErratumId, example: Counterexample) {
        match self.errata.get(&id) {
            Some(old) if old.example <= example => {}
            _ => {
                self.errata.insert(id, Erratum::new(id, example));
            }
        }
    }

    pub fn merge(&mut self, other: Report) {
        for (key, check) in other.checks {
            match self.checks.get_mut(&key) {
                Some(mine) => {
                    mine.cases += check.cases;
                    mine.failures.extend(check.failures);
                }
                None => {
                    self.checks.insert(key, check);
                }
            }
        }
        for (id, e) in other.errata {
            self.erratum(id, e.example);
        }
    }

    pub fn checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.values()
    }

    pub fn check(&self, suite: Suite, name: &str) -> Option<&CheckResult> {
        self.checks
            .values()
            .find(|c| c.suite == suite && c.name == name)
    }

    pub fn errata(&self) -> impl Iterator<Item = &Erratum> {
        self.errata.values()
    }

    pub fn erratum_for(&self, id: ErratumId) -> Option<&Erratum> {
        self.errata.get(&id)
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(CheckResult::passed)
    }

    /// One line per check, then one per erratum, then a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for check in self.checks.values() {
            out.push_str(&check.to_string());
            out.push('\n');
        }
        for e in self.errata.values() {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        let failed = self.checks.values().filter(|c| !c.passed()).count();
        out.push_str(&format!(
            "{} checks, {} failed, {} errata reported\n",
            self.checks.len(),
            failed,
            self.errata.len()
        ));
        out
    }
}

/// Full recompute stride used by the suites. Every firing is still checked
/// exactly by the local delta rule.
pub const VERIFY_STRIDE: u64 = 64;

/// Knobs shared by all suites. `None` picks the suite's default.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_n: Option<u64>,
    pub grid: Option<Vec<GameParams>>,
    pub seed: u64,
    pub parallel: bool,
    /// Full exact evaluation of every `stride`-th intermediate state.
    pub stride: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: None,
            grid: None,
            seed: 1,
            parallel: true,
            stride: VERIFY_STRIDE,
        }
    }
}

/// The six pairs used for the predictor and side-value checks.
pub fn showcase_pairs() -> Vec<GameParams> {
    [(1, 2), (2, 3), (3, 4), (2, 5), (3, 5), (4, 5)]
        .into_iter()
        .map(|(a, b)| GameParams::new(a, b).expect("positive"))
        .collect()
}

impl VerifyConfig {
    fn pairs(&self, default: impl FnOnce() -> Vec<GameParams>) -> Vec<GameParams> {
        let mut pairs = self.grid.clone().unwrap_or_else(default);
        pairs.sort();
        pairs.dedup();
        pairs
    }

    fn structured_pairs(&self, default: impl FnOnce() -> Vec<GameParams>) -> Vec<GameParams> {
        self.pairs(default)
            .into_iter()
            .filter(GameParams::is_structured)
            .collect()
    }

    /// The strategies every confluence case runs: the three fixed orders and
    /// three random streams.
    pub fn strategies(&self) -> Vec<FiringStrategy> {
        vec![
            FiringStrategy::Leftmost,
            FiringStrategy::Rightmost,
            FiringStrategy::ParallelRounds,
            FiringStrategy::Random(self.seed),
            FiringStrategy::Random(self.seed.wrapping_add(1)),
            FiringStrategy::Random(self.seed.wrapping_add(2)),
        ]
    }

    fn map_pairs<F>(&self, pairs: Vec<GameParams>, job: F) -> Report
    where
        F: Fn(GameParams) -> Report + Sync + Send,
    {
        let reports: Vec<Report> = if self.parallel {
            pairs.into_par_iter().map(&job).collect()
        } else {
            pairs.into_iter().map(&job).collect()
        };
        let mut out = Report::default();
        for r in reports {
            out.merge(r);
        }
        out
    }
}

pub fn run_suites(suites: &[Suite], config: &VerifyConfig) -> Report {
    let mut report = Report::default();
    for &suite in suites {
        report.merge(run_suite(suite, config));
    }
    report
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Report {
    match suite {
        Suite::Confluence => strategy_runs(config, false),
        Suite::Invariants => strategy_runs(config, true),
        Suite::Settlements => settlements_suite(config),
        Suite::Predictor => predictor_suite(config),
        Suite::OneB => one_b_suite(config),
        Suite::Golden => Report::default(),
    }
}

/// Runs every strategy for each pair and `n <= max_n` (default 300, pairs
/// with `b <= 6`). Confluence checks are always recorded; with `watch` every
/// intermediate state is checked for conservation and the final states for
/// the side-value and firing-count identities.
pub fn strategy_runs(config: &VerifyConfig, watch: bool) -> Report {
    let max_n = config.max_n.unwrap_or(300);
    let pairs = config.pairs(|| coprime_pairs(6));
    let strategies = config.strategies();
    config.map_pairs(pairs, |params| {
        let mut r = Report::default();
        let mut prev: Option<(u64, u64)> = None;
        for n in 0..=max_n {
            let start = crate::engine::new_state(n, params);
            let mut runs: Vec<(FiringStrategy, ChipState, FiringLog)> = Vec::new();
            for &strategy in &strategies {
                let mut game = Game::new(&start);
                if watch {
                    let mut w = ConservationWatch::new(&start, config.stride);
                    game.stabilize_observed(strategy, &mut w);
                    w.check_full(0, game.tape());
                    let first = w.violations().first().cloned();
                    r.expect(
                        Suite::Invariants,
                        "conservation-every-state",
                        first.is_none(),
                        || {
                            let v = first.expect("violation");
                            Counterexample::at(
                                params,
                                n,
                                format!("{strategy}: S(1)=S(b/a)=n"),
                                format!("step {}: {}", v.step, v.what),
                            )
                        },
                    );
                } else {
                    game.stabilize(strategy);
                }
                runs.push((strategy, game.state(), game.log()));
            }
            let (_, ref_state, ref_log) = runs[0].clone();
            for (strategy, state, log) in &runs[1..] {
                r.expect(
                    Suite::Confluence,
                    "same-final-state",
                    *state == ref_state,
                    || {
                        Counterexample::at(
                            params,
                            n,
                            format!("leftmost {}", ref_state),
                            format!("{strategy} {state}"),
                        )
                    },
                );
                r.expect(
                    Suite::Confluence,
                    "same-firing-counts",
                    *log == ref_log,
                    || {
                        Counterexample::at(
                            params,
                            n,
                            format!("total {}", ref_log.total()),
                            format!("{strategy} total {}", log.total()),
                        )
                    },
                );
            }
            r.expect(
                Suite::Confluence,
                "final-state-stable",
                ref_state.is_stable(),
                || Counterexample::at(params, n, "every count < a+b", ref_state.to_string()),
            );
            let bounded = ref_state
                .support()
                .is_none_or(|(lo, hi)| -(n as i64) <= lo && hi <= n as i64);
            r.expect(Suite::Confluence, "support-within-n", bounded, || {
                Counterexample::at(
                    params,
                    n,
                    format!("support in [-{n}, {n}]"),
                    format!("{:?}", ref_state.support()),
                )
            });
            if !watch {
                continue;
            }
            for (strategy, state, log) in &runs {
                invariant_checks(&mut r, params, n, *strategy, state, log);
            }
            let (f0, f1) = (ref_log.get(0), ref_log.get(1));
            if let Some((p0, p1)) = prev {
                r.expect(
                    Suite::Invariants,
                    "firings-monotone-in-n",
                    f0 >= p0 && f1 >= p1,
                    || {
                        Counterexample::at(
                            params,
                            n,
                            format!("f0>={p0} f1>={p1}"),
                            format!("f0={f0} f1={f1}"),
                        )
                    },
                );
                let (d, pd) = (f0 as i64 - f1 as i64, p0 as i64 - p1 as i64);
                r.expect(
                    Suite::Invariants,
                    "firing-difference-monotone",
                    d >= pd,
                    || Counterexample::at(params, n, format!("f0-f1>={pd}"), d),
                );
            }
            prev = Some((f0, f1));
        }
        r
    })
}

fn invariant_checks(
    r: &mut Report,
    params: GameParams,
    n: u64,
    strategy: FiringStrategy,
    state: &ChipState,
    log: &FiringLog,
) {
    let sides = side_values(state, log);
    r.expect(
        Suite::Invariants,
        "side-values-match-log",
        sides.is_ok(),
        || {
            Counterexample::at(
                params,
                n,
                format!("{strategy}: identities hold"),
                sides.clone().unwrap_err(),
            )
        },
    );
    if params.a() == params.b() {
        return;
    }
    let (_, right) = split(state);
    let recovered = recover_firings(&right, params);
    let logged = (log.get(0), log.get(1));
    r.expect(
        Suite::Invariants,
        "f0-f1-from-right-part",
        recovered == Some(logged),
        || {
            Counterexample::at(
                params,
                n,
                format!("{strategy}: {logged:?}"),
                format!("{recovered:?}"),
            )
        },
    );
    let by_m = firings_from_m(state);
    r.expect(
        Suite::Invariants,
        "total-firings-from-weighted-sum",
        by_m == Ok(log.total()),
        || {
            Counterexample::at(
                params,
                n,
                format!("{strategy}: {}", log.total()),
                format!("{by_m:?}"),
            )
        },
    );
    let m = weighted_sum(state);
    let wrong_sign = m / (params.a() as i128 - params.b() as i128);
    if log.total() > 0 && wrong_sign != log.total() as i128 {
        r.erratum(
            ErratumId::WeightedSumSign,
            Counterexample::at(
                params,
                n,
                format!(
                    "M/(a-b) = {m}/{} = {wrong_sign}",
                    params.a() as i128 - params.b() as i128
                ),
                format!("{} firings", log.total()),
            ),
        );
    }
}

fn settlements_suite(config: &VerifyConfig) -> Report {
    let max_n = config.max_n.unwrap_or(300);
    let pairs = config.structured_pairs(|| coprime_pairs(7));
    const S: Suite = Suite::Settlements;
    config.map_pairs(pairs, |params| {
        let mut r = Report::default();
        let c = c_value(params).expect("structured");
        let (a, b) = (params.a(), params.b());
        let mut seq = SettlementSeq::new(params).expect("structured");

        for k in 0..60 {
            let w = seq.iterated(k).clone();
            let bumped = ChipState::from_word(params, &w.with_added(-1, b));
            let engine = crate::engine::settle_right(&bumped).to_word().right_part();
            let rule = settlement_next(&w, params);
            r.expect(S, "transition-rule-matches-engine", rule == engine, || {
                Counterexample::at(params, k, engine.to_right_string(), rule.to_right_string())
                    .named("k")
            });
            r.expect(
                S,
                "settled-digits-below-threshold",
                w.max_digit() < a + b,
                || Counterexample::at(params, k, "digits < a+b", w.to_right_string()).named("k"),
            );
        }

        let anchor = anchor_index(c);
        for k in anchor..=anchor + 4 * c {
            let closed = seq.closed_form(k).expect("past anchor");
            let iterated = seq.iterated(k).clone();
            r.expect(
                S,
                "closed-form-matches-iteration",
                closed == iterated,
                || {
                    Counterexample::at(
                        params,
                        k,
                        iterated.to_right_string(),
                        closed.to_right_string(),
                    )
                    .named("k")
                },
            );
        }

        let census = dormant_census(params);
        r.expect(S, "dormant-census", census.is_ok(), || {
            Counterexample::new(
                params,
                None,
                format!("count {c}, highest {}", highest_dormant_index(c)),
                census.clone().unwrap_err(),
            )
        });
        let bounds = delta_digit_bounds(params) == Ok(true);
        r.expect(S, "delta-digit-bounds", bounds, || {
            Counterexample::new(params, None, "inequalities hold", "violated")
        });
        let deltas = delta_strings(params).expect("structured");
        let settled = deltas.iter().all(|d| d.max_digit() < a + b);
        r.expect(S, "delta-digits-below-threshold", settled, || {
            Counterexample::new(params, None, "digits < a+b", format!("{deltas:?}"))
        });

        // Published tetrahedral indices, compared with the enumeration.
        let te_anchor = tetrahedral(c) + 1;
        let published = DigitWord::from_right_digits(
            &std::iter::once(c * (b - a))
                .chain(deltas[0].right_digits())
                .collect::<Vec<_>>(),
        );
        let actual = seq.iterated(te_anchor).clone();
        if published != actual {
            r.erratum(
                ErratumId::TetrahedralAnchor,
                Counterexample::at(
                    params,
                    te_anchor,
                    published.to_right_string(),
                    actual.to_right_string(),
                )
                .named("k"),
            );
        }
        let found = enumerate_dormant(&mut seq);
        let te_dormant = if c >= 1 { tetrahedral(c - 1) + 1 } else { 1 };
        if found.highest_index != te_dormant {
            r.erratum(
                ErratumId::TetrahedralDormant,
                Counterexample::new(
                    params,
                    None,
                    format!("highest dormant index {te_dormant}"),
                    format!("{}", found.highest_index),
                ),
            );
        }

        let row = family_row(params);
        if let Some(row) = row {
            r.expect(S, "family-row-origout", row.origout == c * (b - a), || {
                Counterexample::new(
                    params,
                    None,
                    format!("{:?} row origout {}", row.family, row.origout),
                    c * (b - a),
                )
            });
            let published_c = 2 * row.c;
            if row.family == Family::OddGap && published_c != c {
                r.erratum(
                    ErratumId::OddGapC,
                    Counterexample::new(params, None, format!("c = {published_c}"), c),
                );
            }
        }

        // Simulated right parts: membership, monotone index, eventual origout.
        let mut game = Game::from_pile(0, params);
        let mut last_k = 0;
        let mut past_anchor = 0;
        let mut n = 0;
        while n <= max_n || (past_anchor < 100 && n <= max_n + 100_000) {
            if n > 0 {
                game.grow();
            }
            let right = right_part_of(&game);
            let k = seq.index_of(&right);
            if n <= max_n {
                r.expect(S, "right-part-is-settlement", k.is_some(), || {
                    Counterexample::at(params, n, "some ξ_k", right.to_right_string())
                });
                r.expect(
                    S,
                    "settlement-index-monotone",
                    k.is_some_and(|k| k >= last_k),
                    || {
                        Counterexample::at(
                            params,
                            n,
                            format!("index >= {last_k}"),
                            format!("{k:?}"),
                        )
                    },
                );
            }
            if let Some(k) = k {
                last_k = k;
                if k >= anchor && past_anchor < 100 {
                    past_anchor += 1;
                    let origout = right.digit(-1);
                    r.expect(S, "eventual-origout", origout == c * (b - a), || {
                        Counterexample::at(params, n, c * (b - a), origout)
                    });
                }
            }
            n += 1;
        }
        let bal = balanced_b(params, 100_000);
        r.expect(S, "balanced-number-found", bal.is_ok(), || {
            Counterexample::new(params, None, "B below 100000", format!("{bal:?}"))
        });
        r
    })
}

fn predictor_suite(config: &VerifyConfig) -> Report {
    let max_n = config.max_n.unwrap_or(2000);
    let pairs = config.pairs(showcase_pairs);
    const P: Suite = Suite::Predictor;
    let (structured, other): (Vec<_>, Vec<_>) =
        pairs.into_iter().partition(GameParams::is_structured);
    let mut report = config.map_pairs(structured, |params| predictor_pair(params, max_n));
    for params in other {
        // Reductions are compared with simulation directly.
        let mut predictor = Predictor::default();
        let upto = max_n.min(300);
        match predictor.final_states(params, 0, upto) {
            Ok(fast) => {
                let mut game = Game::from_pile(0, params);
                for (n, w) in fast.iter().enumerate() {
                    if n > 0 {
                        game.grow();
                    }
                    let sim = game.word();
                    report.expect(P, "predictor-matches-oracle", *w == sim, || {
                        Counterexample::at(
                            params,
                            n as u64,
                            sim.to_state_string(),
                            w.to_state_string(),
                        )
                    });
                }
            }
            Err(e) => report.record(
                P,
                "predictor-matches-oracle",
                Err(Counterexample::new(params, None, "a profile", e)),
            ),
        }
    }
    report.merge(reductions(max_n.min(200)));
    report
}

fn reductions(max_n: u64) -> Report {
    const P: Suite = Suite::Predictor;
    let mut r = Report::default();
    for a in 1..=5 {
        let params = GameParams::new(a, a).expect("positive");
        let mut game = Game::from_pile(0, params);
        for n in 0..=max_n {
            if n > 0 {
                game.grow();
            }
            let (closed, sim) = (aa_final(n, a), game.word());
            r.expect(P, "aa-closed-form", closed == sim, || {
                Counterexample::at(params, n, sim.to_state_string(), closed.to_state_string())
            });
        }
    }
    let mut predictor = Predictor::default();
    for (a, b) in [(2, 4), (4, 6), (3, 6), (6, 9), (6, 4), (10, 15)] {
        let params = GameParams::new(a, b).expect("positive");
        let fast = predictor.final_states(params, 0, max_n).expect("reducible");
        let mut game = Game::from_pile(0, params);
        for (n, w) in fast.iter().enumerate() {
            if n > 0 {
                game.grow();
            }
            let sim = game.word();
            r.expect(P, "noncoprime-lift", *w == sim, || {
                Counterexample::at(params, n as u64, sim.to_state_string(), w.to_state_string())
            });
        }
    }
    r
}

fn predictor_pair(params: GameParams, max_n: u64) -> Report {
    const P: Suite = Suite::Predictor;
    let mut r = Report::default();
    let (a, b) = (params.a(), params.b());
    let profile = match compute_profile(params, DEFAULT_WINDOW) {
        Ok(p) => p,
        Err(e) => {
            r.record(
                P,
                "profile",
                Err(Counterexample::new(params, None, "a certified H", e)),
            );
            return r;
        }
    };
    r.record(P, "profile", Ok(()));
    let c = profile.c();
    let (bal, h) = (profile.balanced(), profile.h());
    let ac = a * c;
    let top = max_n.max(bal + 200).max(h + 1);
    let fast = profile.final_states(0, top);
    let mut seq = SettlementSeq::new(params).expect("structured");
    let boa_value = |w: &DigitWord| eval_base(w, params);
    let mut game = Game::from_pile(0, params);
    let mut prev_diff: Option<i64> = None;
    let mut prev: Option<(DigitWord, u64)> = None;
    let is_two_three = (a, b) == (2, 3);
    for n in 0..=top {
        if n > 0 {
            game.grow();
        }
        let sim = game.word();
        if n <= max_n {
            let ok = fast[n as usize] == sim;
            r.expect(P, "predictor-matches-oracle", ok, || {
                Counterexample::at(
                    params,
                    n,
                    sim.to_state_string(),
                    fast[n as usize].to_state_string(),
                )
            });
        }
        let (left, right) = (sim.left_part(), sim.right_part());
        let (f0, f1) = (game.tape().fires_at(0), game.tape().fires_at(1));
        let diff = f0 as i64 - f1 as i64;
        if let Some(p) = prev_diff {
            r.expect(P, "firing-difference-monotone", diff >= p, || {
                Counterexample::at(params, n, format!(">= {p}"), diff)
            });
        }
        prev_diff = Some(diff);
        if n >= bal {
            r.expect(P, "firing-difference-is-c", diff == c as i64, || {
                Counterexample::at(params, n, c, diff)
            });
        }
        if (bal..=bal + 200).contains(&n) {
            let (rv, lv) = (boa_value(&right), boa_value(&left));
            r.expect(
                P,
                "right-value-is-ac",
                rv == ExactRational::from_integer(ac),
                || Counterexample::at(params, n, ac, &rv),
            );
            r.expect(
                P,
                "left-value-is-n-minus-ac",
                lv == ExactRational::from_integer(n - ac),
                || Counterexample::at(params, n, n - ac, &lv),
            );
        }
        if is_two_three {
            let rv = boa_value(&right);
            if n > 4 && rv != ExactRational::from_integer(2) {
                r.erratum(
                    ErratumId::RightValueTwo,
                    Counterexample::at(
                        params,
                        n,
                        format!("{} = 2", right.to_right_string()),
                        format!("{} = {rv}", right.to_right_string()),
                    ),
                );
            }
        }
        let k = seq.index_of(&right);
        if let (Some((prev_left, prev_k)), Some(k)) = (&prev, k) {
            let m = n - 1;
            if m >= h {
                let elevated = elevated_increment(prev_left, params);
                let ok = elevated.as_ref().is_ok_and(|(w, _)| *w == left);
                r.expect(P, "left-follows-elevated-game", ok, || {
                    Counterexample::at(params, n, left.to_numeral_string(), format!("{elevated:?}"))
                });
                let adv = right_advance(prev_left, *prev_k, params);
                r.expect(P, "right-index-advance", adv == Ok(k), || {
                    Counterexample::at(params, n, k, format!("{adv:?}")).named("n")
                });
                let literal = suffix_count_literal(prev_left, params);
                let actual = explosions_by_scan(prev_left, params);
                if literal != actual {
                    r.erratum(
                        ErratumId::SuffixAdvance,
                        Counterexample::at(
                            params,
                            m,
                            format!(
                                "left {} advances by {literal}",
                                prev_left.to_numeral_string()
                            ),
                            format!("advance {actual}"),
                        ),
                    );
                }
            }
        }
        if n >= h {
            let regular = left.left_digits().iter().all(|&d| d >= a);
            r.expect(P, "left-regular-past-h", regular, || {
                Counterexample::at(
                    params,
                    n,
                    format!("digits >= {a}"),
                    left.to_numeral_string(),
                )
            });
        }
        prev = k.map(|k| (left, k));
    }
    if is_two_three {
        triplet_erratum(&mut r, params, &fast);
    }
    mirror_check(params, max_n.min(150), &mut r);
    if let Some(row) = family_row(params) {
        r.expect(P, "family-row-right-value", row.right_value == ac, || {
            Counterexample::new(
                params,
                None,
                format!("{:?} row value {}", row.family, row.right_value),
                ac,
            )
        });
    }
    r
}

fn triplet_erratum(r: &mut Report, params: GameParams, fast: &[DigitWord]) {
    for k in 2.. {
        let idx = (3 * k + 2) as usize;
        if idx >= fast.len() {
            break;
        }
        let rights: Vec<String> = (0..3)
            .map(|i| fast[3 * k as usize + i].right_part().to_right_string())
            .collect();
        if rights[0] != rights[1] || rights[1] != rights[2] {
            r.erratum(
                ErratumId::TripletGrouping,
                Counterexample::at(params, 3 * k, "three equal right parts", rights.join(" ")),
            );
            if 3 * k >= 15 {
                r.record(
                    Suite::Predictor,
                    "triplets-from-15",
                    Err(Counterexample::at(
                        params,
                        3 * k,
                        "three equal right parts",
                        rights.join(" "),
                    )),
                );
            }
        } else if 3 * k >= 15 {
            r.record(Suite::Predictor, "triplets-from-15", Ok(()));
        }
    }
}

fn mirror_check(params: GameParams, upto: u64, r: &mut Report) {
    let mirrored = params.mirrored();
    let mut predictor = Predictor::default();
    let Ok(fast) = predictor.final_states(mirrored, 0, upto) else {
        r.record(
            Suite::Predictor,
            "mirror",
            Err(Counterexample::new(mirrored, None, "a prediction", "error")),
        );
        return;
    };
    let mut game = Game::from_pile(0, mirrored);
    for (n, w) in fast.iter().enumerate() {
        if n > 0 {
            game.grow();
        }
        let sim = game.word();
        r.expect(Suite::Predictor, "mirror", *w == sim, || {
            Counterexample::at(
                mirrored,
                n as u64,
                sim.to_state_string(),
                w.to_state_string(),
            )
        });
    }
}

fn one_b_suite(config: &VerifyConfig) -> Report {
    let max_n = config.max_n.unwrap_or(1000);
    let pairs: Vec<GameParams> = config
        .pairs(|| {
            [2, 3, 5]
                .iter()
                .map(|&b| GameParams::new(1, b).expect("positive"))
                .collect()
        })
        .into_iter()
        .filter(|p| p.a() == 1 && p.b() >= 2)
        .collect();
    const O: Suite = Suite::OneB;
    config.map_pairs(pairs, |params| {
        let mut r = Report::default();
        let b = params.b();
        let mut seq = SettlementSeq::new(params).expect("structured");
        for k in 0..=30 {
            let (law, it) = (one_b_settlement(k, b), seq.iterated(k).clone());
            r.expect(O, "settlement-law", law == it, || {
                Counterexample::at(params, k, it.to_right_string(), law.to_right_string())
                    .named("k")
            });
        }
        r.expect(O, "c-is-one", c_value(params) == Ok(1), || {
            Counterexample::new(params, None, 1, format!("{:?}", c_value(params)))
        });
        let bal = balanced_b(params, 10_000);
        r.expect(O, "balanced-is-b-plus-one", bal == Ok(b + 1), || {
            Counterexample::new(params, None, b + 1, format!("{bal:?}"))
        });
        let offset = r_index_offset(b);
        if offset != 2 {
            let n = b + 2;
            r.erratum(
                ErratumId::ROffset,
                Counterexample::at(
                    params,
                    n,
                    format!(
                        "R(b)_{} = {}",
                        n - 2,
                        r_sequence(b, n - 2).to_numeral_string()
                    ),
                    r_sequence(b, n - 1).to_numeral_string(),
                ),
            );
        }
        let mut game = Game::from_pile(0, params);
        for n in 0..=max_n {
            if n > 0 {
                game.grow();
            }
            let word = game.word();
            let (left, right) = (word.left_part(), word.right_part());
            let count = right.right_digits().iter().filter(|&&d| d == b - 1).count() as u64;
            if n > b {
                r.expect(
                    O,
                    "right-count-exact",
                    one_b_right_count(n, b) == count,
                    || Counterexample::at(params, n, count, one_b_right_count(n, b)),
                );
                let published = one_b_right_length(n, b);
                if published != count {
                    r.erratum(
                        ErratumId::ValuationSum,
                        Counterexample::at(params, n, published, count),
                    );
                }
                let rv = eval_base(&right, params);
                r.expect(O, "right-value-one", rv == ExactRational::one(), || {
                    Counterexample::at(params, n, 1, &rv)
                });
                let lv = eval_base(&left, params);
                r.expect(
                    O,
                    "left-value-n-minus-one",
                    lv == ExactRational::from_integer(n - 1),
                    || Counterexample::at(params, n, n - 1, &lv),
                );
            }
            if n >= b + 2 {
                let law = r_sequence(b, (n as i64 - offset) as u64);
                r.expect(O, "left-is-r-sequence", law == left, || {
                    Counterexample::at(params, n, left.to_numeral_string(), law.to_numeral_string())
                });
            }
            if b == 2 && n >= 4 {
                let trick = binary_trick_left(n).expect("n >= 4");
                r.expect(O, "binary-trick", trick == left, || {
                    Counterexample::at(
                        params,
                        n,
                        left.to_numeral_string(),
                        trick.to_numeral_string(),
                    )
                });
            }
        }
        r
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("golden line {line}: {reason}")]
pub struct GoldenParseError {
    pub line: usize,
    pub reason: String,
}

/// One expected final state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenEntry {
    pub params: GameParams,
    pub n: u64,
    pub state: DigitWord,
}

/// Reads `a b n state` lines; blank lines and `#` comments are skipped.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenEntry>, GoldenParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| GoldenParseError {
            line: i + 1,
            reason,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b, n, state] = fields.as_slice() else {
            return Err(err(format!("expected 4 fields, got {}", fields.len())));
        };
        let num = |s: &str| s.parse::<u64>().map_err(|e| err(format!("{s:?}: {e}")));
        let params = GameParams::new(num(a)?, num(b)?).map_err(|e| err(e.to_string()))?;
        let state = DigitWord::parse(state).map_err(|e| err(e.to_string()))?;
        out.push(GoldenEntry {
            params,
            n: num(n)?,
            state,
        });
    }
    Ok(out)
}

/// Compares the predictor and the oracle with every golden entry.
pub fn check_golden(entries: &[GoldenEntry]) -> Report {
    let mut r = Report::default();
    let mut predictor = Predictor::default();
    for e in entries {
        let predicted = predictor.final_state(e.n, e.params);
        let ok = predicted.as_ref().is_ok_and(|w| *w == e.state);
        r.expect(Suite::Golden, "predictor-matches-golden", ok, || {
            Counterexample::at(
                e.params,
                e.n,
                e.state.to_state_string(),
                match &predicted {
                    Ok(w) => w.to_state_string(),
                    Err(err) => err.to_string(),
                },
            )
        });
        let sim = simulate(e.n, e.params).0.to_word();
        r.expect(
            Suite::Golden,
            "oracle-matches-golden",
            sim == e.state,
            || {
                Counterexample::at(
                    e.params,
                    e.n,
                    e.state.to_state_string(),
                    sim.to_state_string(),
                )
            },
        );
    }
    r
}
