//! Worked examples across modules, checked against a naive stabilizer
//! written here from the firing rule alone.

use std::collections::BTreeMap;

use chipfire::analysis::{firings_from_m, side_values, split, state_poly_eval, weighted_sum};
use chipfire::engine::{fire, increment_origin, new_state, settle_right, simulate};
use chipfire::fracbase::{eval_base, explode_normalize, to_base};
use chipfire::predictor::{
    aa_final, compute_profile, elevated_increment, lift_noncoprime, one_b_right_length,
    right_advance, Predictor, DEFAULT_WINDOW,
};
use chipfire::settlements::{
    balanced_b, c_value, delta_digit_bounds, dormant_census, is_dormant, settlement,
    settlement_next, SettlementSeq,
};
use chipfire::{ChipState, DigitWord, ExactRational, GameParams};

fn p(a: u64, b: u64) -> GameParams {
    GameParams::new(a, b).unwrap()
}

fn w(text: &str) -> DigitWord {
    DigitWord::parse(text).unwrap()
}

/// Fires the leftmost firable vertex until none is left; returns the
/// final counts and per-vertex firing counts.
fn naive(n: u64, a: u64, b: u64) -> (BTreeMap<i64, u64>, BTreeMap<i64, u64>) {
    let mut chips = BTreeMap::from([(0i64, n)]);
    let mut fires = BTreeMap::new();
    while let Some((&v, _)) = chips.iter().find(|(_, &c)| c >= a + b) {
        *chips.get_mut(&v).unwrap() -= a + b;
        *chips.entry(v - 1).or_insert(0) += a;
        *chips.entry(v + 1).or_insert(0) += b;
        *fires.entry(v).or_insert(0) += 1;
    }
    chips.retain(|_, c| *c > 0);
    (chips, fires)
}

fn counts(state: &ChipState) -> BTreeMap<i64, u64> {
    state.iter().collect()
}

#[test]
fn engine_matches_naive_stabilizer() {
    for (a, b) in [(1, 2), (2, 3), (1, 1), (3, 2), (2, 4), (3, 5), (5, 7)] {
        for n in 0..120 {
            let (state, log) = simulate(n, p(a, b));
            let (chips, fires) = naive(n, a, b);
            assert_eq!(counts(&state), chips, "{a}-{b} n={n}");
            let logged: BTreeMap<i64, u64> = log.iter().filter(|(_, f)| *f > 0).collect();
            assert_eq!(logged, fires, "{a}-{b} n={n}");
        }
    }
}

#[test]
fn single_firings() {
    let s = fire(&new_state(7, p(1, 2)), 0).unwrap();
    assert_eq!(counts(&s), BTreeMap::from([(-1, 1), (0, 4), (1, 2)]));
    let s = fire(&new_state(5, p(2, 3)), 0).unwrap();
    assert_eq!(counts(&s), BTreeMap::from([(-1, 2), (1, 3)]));
    assert!(fire(&new_state(2, p(1, 2)), 0).is_err());
    assert!(new_state(0, p(2, 3)).support().is_none());
}

#[test]
fn stabilize_and_increment() {
    assert_eq!(simulate(7, p(1, 2)).0.to_word().to_state_string(), "22.12");
    assert_eq!(simulate(4, p(1, 2)).0.to_word().to_state_string(), "11.2");
    assert_eq!(simulate(2, p(2, 3)).0.to_word().to_state_string(), "2.");
    let step = |text: &str, a, b| {
        increment_origin(&ChipState::from_word(p(a, b), &w(text)))
            .to_word()
            .to_state_string()
    };
    assert_eq!(step("22.12", 1, 2), "111.1112");
    assert_eq!(step("234.413", 2, 3), "422.2413");
    assert_eq!(step("1.", 2, 3), "2.");
}

#[test]
fn settle_right_examples() {
    let right = |text: &str| {
        let s = ChipState::from_word(p(2, 3), &w(text).with_added(-1, 3));
        let settled = settle_right(&s);
        (
            settled.to_word().right_part().to_right_string(),
            settled.get(0),
        )
    };
    assert_eq!(right(".413"), (".243".into(), 2));
    assert_eq!(right(".3"), (".13".into(), 2));
    assert_eq!(right("."), (".3".into(), 0));
}

#[test]
fn fracbase_examples() {
    let q = p(2, 3);
    assert_eq!(to_base(5, q).unwrap().to_numeral_string(), "22");
    assert_eq!(to_base(9, q).unwrap().to_numeral_string(), "2100");
    assert_eq!(to_base(0, q).unwrap().to_numeral_string(), "0");
    assert_eq!(eval_base(&w("22"), q), ExactRational::from_integer(5));
    assert_eq!(eval_base(&w("7"), q), ExactRational::from_integer(7));
    // 4*(2/3) + 3*(4/9) = 4
    assert_eq!(eval_base(&w(".43"), q), ExactRational::from_integer(4));
    assert_eq!(
        explode_normalize(&w("5"), q).unwrap().to_numeral_string(),
        "22"
    );
    assert_eq!(
        explode_normalize(&w("213"), q).unwrap().to_numeral_string(),
        "2100"
    );
    assert_eq!(
        explode_normalize(&w("1"), p(3, 7))
            .unwrap()
            .to_numeral_string(),
        "1"
    );
    assert_eq!(
        w("442.2243"),
        DigitWord::from_parts(&[4, 4, 2], &[2, 2, 4, 3])
    );
    assert_eq!(w("4,4,2.2,2,4,3"), w("442.2243"));
    assert!(w("0.").is_zero());
}

#[test]
fn analysis_examples() {
    let (s7, log7) = simulate(7, p(1, 2));
    for t in [ExactRational::one(), ExactRational::from_integer(2)] {
        assert_eq!(
            state_poly_eval(&s7, &t).unwrap(),
            ExactRational::from_integer(7)
        );
    }
    let (l, r) = split(&s7);
    assert_eq!(
        (l.to_numeral_string(), r.to_right_string()),
        ("22".into(), ".12".into())
    );
    let rep = side_values(&s7, &log7).unwrap();
    assert_eq!((rep.f0, rep.f1), (2, 1));
    assert_eq!(rep.right_at_1, 3);
    assert_eq!(rep.right_at_boa, ExactRational::from_integer(1));
    assert_eq!(weighted_sum(&s7), 3);
    assert_eq!(firings_from_m(&s7), Ok(3));
    assert_eq!(log7.total(), 3);

    let (s17, log17) = simulate(17, p(2, 3));
    assert_eq!(s17.to_word().to_state_string(), "234.413");
    let rep = side_values(&s17, &log17).unwrap();
    assert_eq!((rep.f0, rep.f1), (4, 2));
    assert_eq!(rep.right_at_1, 8);
    assert_eq!(rep.right_at_boa, ExactRational::from_integer(4));
    assert_eq!(firings_from_m(&s17), Ok(log17.total()));

    let start = new_state(9, p(2, 3));
    assert_eq!(weighted_sum(&start), 0);
    assert_eq!(
        state_poly_eval(&start, &ExactRational::new(5, 7)).unwrap(),
        ExactRational::from_integer(9)
    );
}

#[test]
fn settlement_examples() {
    assert_eq!(c_value(p(2, 3)), Ok(2));
    assert_eq!(c_value(p(3, 4)), Ok(3));
    assert_eq!(c_value(p(1, 2)), Ok(1));
    assert!(c_value(p(2, 4)).is_err());
    let q = p(2, 3);
    assert_eq!(settlement_next(&w(".43"), q).to_right_string(), ".413");
    assert_eq!(settlement_next(&w("."), q).to_right_string(), ".3");
    assert_eq!(settlement_next(&w(".413"), q).to_right_string(), ".243");
    assert!(is_dormant(&w(".13"), q));
    assert!(!is_dormant(&w(".43"), q));
    assert!(is_dormant(&DigitWord::zero(), q));
    let seq = SettlementSeq::new(q).unwrap();
    assert_eq!(seq.closed_form(5).unwrap().to_right_string(), ".243");
    assert_eq!(seq.closed_form(8).unwrap().to_right_string(), ".22413");
    assert_eq!(settlement(8, q).unwrap().to_right_string(), ".22413");

    let census = dormant_census(q).unwrap();
    assert_eq!((census.count, census.highest_index), (2, 2));
    assert_eq!(dormant_census(p(1, 2)).unwrap().highest_index, 0);
    assert_eq!(dormant_census(p(3, 4)).unwrap().highest_index, 5);
    assert_eq!(balanced_b(q, 1000), Ok(13));
    assert_eq!(balanced_b(p(1, 2), 1000), Ok(3));
    for b in 2..8 {
        let params = p(1, b);
        let first = (0..100)
            .find(|&n| {
                simulate(n, params).0.to_word().right_part() == DigitWord::from_right_digits(&[b])
            })
            .unwrap();
        assert_eq!(first, b + 1);
        assert_eq!(balanced_b(params, 1000), Ok(first));
    }
    for params in [p(2, 3), p(3, 4), p(5, 7)] {
        assert_eq!(delta_digit_bounds(params), Ok(true));
    }
}

#[test]
fn predictor_examples() {
    let mut predictor = Predictor::default();
    let mut f = |n, a, b| predictor.final_state(n, p(a, b)).unwrap().to_state_string();
    assert_eq!(f(21, 2, 3), "442.2243");
    assert_eq!(f(27, 2, 3), "4222.2222243");
    assert_eq!(f(7, 1, 2), "22.12");
    assert_eq!(f(5, 3, 3), "5.");
    assert_eq!(f(42, 4, 6), "884.4486");
    assert_eq!(f(7, 2, 1), "212.2");

    assert_eq!(aa_final(5, 1).to_state_string(), "111.11");
    assert_eq!(aa_final(26, 5).to_state_string(), "556.55");
    assert_eq!(aa_final(0, 4).to_state_string(), "0.");
    assert_eq!(
        lift_noncoprime(&w("442.2243"), 2, 0).to_state_string(),
        "884.4486"
    );
    assert_eq!(
        lift_noncoprime(&w("111.11"), 5, 0).to_state_string(),
        "555.55"
    );
    assert_eq!(lift_noncoprime(&w("21.3"), 1, 0), w("21.3"));

    let q = p(2, 3);
    let el = |text: &str| {
        let (word, e) = elevated_increment(&w(text), q).unwrap();
        (word.to_numeral_string(), e)
    };
    assert_eq!(el("234"), ("422".into(), 2));
    assert_eq!(el("233"), ("234".into(), 0));
    assert_eq!(el("444"), ("2332".into(), 3));
    assert_eq!(right_advance(&w("234"), 4, q), Ok(6));
    assert_eq!(right_advance(&w("233"), 4, q), Ok(4));
    assert_eq!(right_advance(&w("444"), 7, q), Ok(10));
    let mut seq = SettlementSeq::new(q).unwrap();
    assert_eq!(seq.get(10).to_right_string(), ".222413");

    let profile = compute_profile(q, DEFAULT_WINDOW).unwrap();
    assert_eq!((profile.balanced(), profile.h()), (13, 15));
    let one_two = compute_profile(p(1, 2), DEFAULT_WINDOW).unwrap();
    assert!(one_two.h() >= one_two.balanced() && one_two.h() <= 10);
    assert_eq!(compute_profile(p(1, 5), DEFAULT_WINDOW).unwrap().c(), 1);

    assert_eq!(one_b_right_length(7, 2), 1);
    assert_eq!(one_b_right_length(4, 2), 0);
}

#[test]
fn mirror_is_reflection() {
    let mut predictor = Predictor::default();
    for (a, b) in [(1, 2), (2, 3), (3, 5), (2, 7)] {
        for n in 0..200 {
            let forward = predictor.final_state(n, p(a, b)).unwrap();
            let back = simulate(n, p(b, a)).0.to_word();
            assert_eq!(forward.reflect(), back, "{a}-{b} n={n}");
        }
    }
}
