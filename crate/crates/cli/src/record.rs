use chipfire::analysis::{firings_from_m, recover_firings};
use chipfire::engine::FiringLog;
use chipfire::fracbase::{eval_base, Notation, RadixMark};
use chipfire::settlements::SettlementSeq;
use chipfire::{ChipState, DigitWord, GameParams};
use serde::Serialize;

/// Text layout of digit words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Compact,
    List,
    Json,
}

impl Format {
    pub fn notation(self) -> Notation {
        match self {
            Format::List => Notation::List,
            _ => Notation::Auto,
        }
    }
}

/// One final state as printed by `final --json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub state: String,
    pub left: String,
    pub right: String,
    pub settlement_index: Option<u64>,
    pub left_value_boa: String,
    pub right_value_boa: String,
    pub f0: Option<u64>,
    pub f1: Option<u64>,
    pub total_firings: Option<u64>,
}

/// Renders a state so that `left ++ right == state`.
pub fn state_parts(word: &DigitWord, notation: Notation) -> (String, String, String) {
    let state = word.render(notation, RadixMark::Always);
    let notation = if state.contains(',') {
        Notation::List
    } else {
        Notation::Auto
    };
    let right = format!(".{}", join_digits(&word.right_digits(), notation));
    let left = state
        .strip_suffix(&right)
        .expect("state text ends with its right part")
        .to_string();
    (state, left, right)
}

fn join_digits(ds: &[u64], notation: Notation) -> String {
    let sep = if notation == Notation::List { "," } else { "" };
    ds.iter().map(u64::to_string).collect::<Vec<_>>().join(sep)
}

/// Builds the record. Without a log the firing counts come from the side
/// values and the weighted sum; they are `None` when those do not determine
/// them (equal rates).
pub fn record(
    params: GameParams,
    n: u64,
    word: &DigitWord,
    log: Option<&FiringLog>,
    seq: Option<&mut SettlementSeq>,
) -> OutputRecord {
    let (state, left, right) = state_parts(word, Notation::Auto);
    let (lw, rw) = (word.left_part(), word.right_part());
    let (f0, f1, total) = match log {
        Some(log) => (Some(log.get(0)), Some(log.get(1)), Some(log.total())),
        None => {
            let (f0, f1) = recover_firings(&rw, params).unzip();
            let total = firings_from_m(&ChipState::from_word(params, word)).ok();
            (f0, f1, total)
        }
    };
    OutputRecord {
        a: params.a(),
        b: params.b(),
        n,
        state,
        left,
        right,
        settlement_index: seq.and_then(|s| s.index_of(&rw)),
        left_value_boa: eval_base(&lw, params).to_string(),
        right_value_boa: eval_base(&rw, params).to_string(),
        f0,
        f1,
        total_firings: total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(text: &str, notation: Notation) -> (String, String, String) {
        state_parts(&DigitWord::parse(text).unwrap(), notation)
    }

    #[test]
    fn halves_concatenate() {
        for text in ["442.2243", "0.", "20.3", "5.", "12,3.10,2", "11,.", "3,.11"] {
            for notation in [Notation::Auto, Notation::List] {
                let (state, left, right) = parts(text, notation);
                assert_eq!(format!("{left}{right}"), state, "{text}");
                assert_eq!(
                    DigitWord::parse(&state).unwrap(),
                    DigitWord::parse(text).unwrap()
                );
            }
        }
        assert_eq!(parts("442.2243", Notation::List).0, "4,4,2.2,2,4,3");
        assert_eq!(
            parts("0.", Notation::Auto),
            ("0.".into(), "0".into(), ".".into())
        );
        assert_eq!(
            parts("3,.11", Notation::Auto),
            ("3,.11".into(), "3,".into(), ".11".into())
        );
    }

    #[test]
    fn record_from_side_values() {
        let params = GameParams::new(1, 2).unwrap();
        let word = DigitWord::parse("22.12").unwrap();
        let mut seq = SettlementSeq::new(params).unwrap();
        let r = record(params, 7, &word, None, Some(&mut seq));
        assert_eq!((r.f0, r.f1, r.total_firings), (Some(2), Some(1), Some(3)));
        assert_eq!(r.settlement_index, Some(2));
        assert_eq!(
            (r.left_value_boa.as_str(), r.right_value_boa.as_str()),
            ("6", "1")
        );
    }
}
