//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Exits nonzero on any failure not listed in `KNOWN_RED`. A known red line
//! is printed as FAIL with its counterexample and stays red.

use std::time::{Duration, Instant};

use chipfire::engine::simulate;
use chipfire::fracbase::{eval_base, to_base};
use chipfire::predictor::{
    aa_final, binary_trick_left, lift_noncoprime, nu_b, one_b_settlement, Predictor,
};
use chipfire::settlements::{balanced_b, delta_strings, SettlementSeq};
use chipfire::verify::{self, ErratumId, Suite, VerifyConfig};
use chipfire::{ExactRational, Game, GameParams};

const GOLDEN: &str = include_str!("data/golden.txt");

/// Sub-checks expected to fail, with the reason.
const KNOWN_RED: &[(&str, &str)] = &[(
    "10b",
    "the published valuation sum miscounts the digits b-1 from n = 12 (b = 2) and n = 32 (b = 3) on",
)];

struct Outcome {
    id: &'static str,
    title: String,
    failure: Option<String>,
    elapsed: Duration,
}

struct Sheet {
    rows: Vec<Outcome>,
}

impl Sheet {
    fn run(
        &mut self,
        id: &'static str,
        title: &str,
        check: impl FnOnce() -> Result<String, String>,
    ) {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (title, failure) = match result {
            Ok(detail) => (format!("{title}: {detail}"), None),
            Err(why) => (title.to_string(), Some(why)),
        };
        let row = Outcome {
            id,
            title,
            failure,
            elapsed,
        };
        match &row.failure {
            None => println!(
                "PASS [{id}] {} ({:.2}s)",
                row.title,
                row.elapsed.as_secs_f64()
            ),
            Some(why) => {
                let known = KNOWN_RED.iter().find(|(k, _)| *k == id);
                let tag = known
                    .map(|(_, r)| format!(" [known red: {r}]"))
                    .unwrap_or_default();
                println!(
                    "FAIL [{id}] {}: {why}{tag} ({:.2}s)",
                    row.title,
                    row.elapsed.as_secs_f64()
                );
            }
        }
        self.rows.push(row);
    }
}

fn pair(a: u64, b: u64) -> GameParams {
    GameParams::new(a, b).unwrap()
}

fn six_pairs() -> Vec<GameParams> {
    [(1, 2), (2, 3), (3, 4), (2, 5), (3, 5), (4, 5)]
        .map(|(a, b)| pair(a, b))
        .to_vec()
}

fn ceil_c(a: u64, b: u64) -> u64 {
    a.div_ceil(b - a)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_entries(a: u64, b: u64) -> Vec<(u64, String)> {
    GOLDEN
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .filter_map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0] == a.to_string() && f[1] == b.to_string())
                .then(|| (f[2].parse().unwrap(), f[3].to_string()))
        })
        .collect()
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let golden: Vec<(u64, String)> = golden_entries(2, 3)
        .into_iter()
        .filter(|(n, _)| *n <= 27)
        .collect();
    ensure(golden.len() == 28, || {
        format!("golden file holds {} states", golden.len())
    })?;
    let mut predictor = Predictor::default();
    let got = predictor
        .final_states(pair(2, 3), 0, 27)
        .map_err(|e| e.to_string())?;
    for (n, text) in &golden {
        let s = got[*n as usize].to_state_string();
        ensure(s == *text, || format!("n={n} expected {text} got {s}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!(
        "28 states n=0..27 ending {}",
        got[27].to_state_string()
    ))
}

fn criterion_2() -> Result<String, String> {
    let mut predictor = Predictor::default();
    for (n, text) in [(7, "22.12"), (8, "111.1112")] {
        let fast = predictor
            .final_state(n, pair(1, 2))
            .map_err(|e| e.to_string())?
            .to_state_string();
        let sim = simulate(n, pair(1, 2)).0.to_word().to_state_string();
        ensure(fast == text && sim == text, || {
            format!("n={n} expected {text} got {fast} / oracle {sim}")
        })?;
    }
    Ok("phi(7)=22.12 phi(8)=111.1112".into())
}

fn criterion_3() -> Result<String, String> {
    let expected = [
        ".", ".3", ".13", ".43", ".413", ".243", ".2413", ".2243", ".22413",
    ];
    let mut seq = SettlementSeq::new(pair(2, 3)).map_err(|e| e.to_string())?;
    for (k, text) in expected.iter().enumerate() {
        let s = seq.iterated(k as u64).to_right_string();
        ensure(s == *text, || format!("2-3 xi_{k} expected {text} got {s}"))?;
    }
    let seq34 = SettlementSeq::new(pair(3, 4)).map_err(|e| e.to_string())?;
    ensure(seq34.c() == 3, || format!("3-4 c = {}", seq34.c()))?;
    let deltas: Vec<String> = delta_strings(pair(3, 4))
        .map_err(|e| e.to_string())?
        .iter()
        .map(|d| d.to_right_string().trim_start_matches('.').to_string())
        .collect();
    ensure(deltas == ["654", "6514", "6254"], || {
        format!("3-4 deltas {deltas:?}")
    })?;
    Ok("2-3 xi_0..xi_8 and 3-4 c=3 deltas 654 6514 6254".into())
}

/// Runs (4), (5) and the per-strategy part of (11) in one sweep.
fn strategy_sweep() -> (verify::Report, Duration) {
    let config = VerifyConfig {
        max_n: Some(300),
        grid: Some(chipfire::params::coprime_pairs(6)),
        ..VerifyConfig::default()
    };
    let start = Instant::now();
    let report = verify::strategy_runs(&config, true);
    (report, start.elapsed())
}

fn checks_pass(report: &verify::Report, suite: Suite, names: &[&str]) -> Result<u64, String> {
    let mut cases = 0;
    for name in names {
        let check = report
            .check(suite, name)
            .ok_or_else(|| format!("{suite}/{name} never ran"))?;
        if let Some(cx) = check.first_failure() {
            return Err(format!("{suite}/{name}: {cx}"));
        }
        cases += check.cases;
    }
    Ok(cases)
}

fn criterion_4(report: &verify::Report, took: Duration) -> Result<String, String> {
    let cases = checks_pass(
        report,
        Suite::Confluence,
        &[
            "same-final-state",
            "same-firing-counts",
            "final-state-stable",
        ],
    )?;
    let pairs = chipfire::params::coprime_pairs(6).len();
    ensure(pairs == 11, || format!("{pairs} coprime pairs with b <= 6"))?;
    ensure(took < Duration::from_secs(60), || {
        format!("sweep took {took:?}")
    })?;
    Ok(format!(
        "{pairs} pairs x n<=300 x 6 strategies, {cases} comparisons, sweep {:.1}s",
        took.as_secs_f64()
    ))
}

fn criterion_5(report: &verify::Report) -> Result<String, String> {
    let runs = checks_pass(report, Suite::Invariants, &["conservation-every-state"])?;
    Ok(format!("{runs} runs, zero violations"))
}

fn criterion_6() -> Result<String, String> {
    let mut checked = 0;
    for params in six_pairs() {
        let (a, b) = (params.a(), params.b());
        let ac = a * ceil_c(a, b);
        let big_b = balanced_b(params, 100_000).map_err(|e| e.to_string())?;
        let mut game = Game::from_pile(0, params);
        for n in 0..=big_b + 200 {
            if n > 0 {
                game.grow();
            }
            if n < big_b {
                continue;
            }
            let w = game.word();
            let (rv, lv) = (
                eval_base(&w.right_part(), params),
                eval_base(&w.left_part(), params),
            );
            ensure(rv == ExactRational::from_integer(ac), || {
                format!("{params} n={n} right value {rv}, want {ac}")
            })?;
            ensure(lv == ExactRational::from_integer(n - ac), || {
                format!("{params} n={n} left value {lv}, want {}", n - ac)
            })?;
            checked += 1;
        }
        let origout = game.word().digit(-1);
        // Table rows: (origout, eventual value) by family.
        let row = if 2 * a <= b {
            Some((b - a, a))
        } else if b == a + 1 {
            Some((a, a * a))
        } else if b == a + 2 && a % 2 == 1 {
            let k = a.div_ceil(2);
            Some((2 * k, (2 * k - 1) * k))
        } else {
            None
        };
        if let Some((table_origout, table_value)) = row {
            ensure(origout == table_origout, || {
                format!("{params} origout {origout}, table {table_origout}")
            })?;
            ensure(ac == table_value, || {
                format!("{params} value {ac}, table {table_value}")
            })?;
        }
    }
    Ok(format!(
        "{checked} states with B <= n <= B+200 on six pairs, table rows hold"
    ))
}

fn criterion_7() -> Result<String, String> {
    let mut predictor = Predictor::default();
    for params in six_pairs() {
        let fast = predictor
            .final_states(params, 0, 2000)
            .map_err(|e| e.to_string())?;
        let mut game = Game::from_pile(0, params);
        for (n, w) in fast.iter().enumerate() {
            if n > 0 {
                game.grow();
            }
            let sim = game.word();
            ensure(*w == sim, || {
                format!(
                    "{params} n={n} predictor {} oracle {}",
                    w.to_state_string(),
                    sim.to_state_string()
                )
            })?;
        }
    }
    let n = 100_000;
    let start = Instant::now();
    let oracle = simulate(n, pair(2, 3)).0.to_word();
    let oracle_t = start.elapsed();
    let start = Instant::now();
    let fast = Predictor::default()
        .final_state(n, pair(2, 3))
        .map_err(|e| e.to_string())?;
    let fast_t = start.elapsed();
    ensure(fast == oracle, || {
        format!("n={n} predictor and oracle differ")
    })?;
    ensure(fast_t < oracle_t, || {
        format!("predictor {fast_t:?} not faster than oracle {oracle_t:?}")
    })?;
    Ok(format!(
        "six pairs n<=2000 identical; 2-3 n=1e5 oracle {:.3}s predictor {:.4}s",
        oracle_t.as_secs_f64(),
        fast_t.as_secs_f64()
    ))
}

fn criterion_8() -> Result<String, String> {
    let phi21 = simulate(21, pair(2, 3)).0.to_word();
    let lifted = lift_noncoprime(&phi21, 2, 0).to_state_string();
    ensure(lifted == "884.4486", || format!("lift gives {lifted}"))?;
    let sim42 = simulate(42, pair(4, 6)).0.to_word().to_state_string();
    ensure(sim42 == "884.4486", || format!("4-6 oracle gives {sim42}"))?;
    let aa = aa_final(26, 5).to_state_string();
    ensure(aa == "556.55", || format!("aa_final(26, 5) = {aa}"))?;
    for a in 1..=5 {
        let mut game = Game::from_pile(0, pair(a, a));
        for n in 0..=200 {
            if n > 0 {
                game.grow();
            }
            let sim = game.word();
            ensure(aa_final(n, a) == sim, || {
                format!("a={a} n={n} closed {} oracle {}", aa_final(n, a), sim)
            })?;
        }
    }
    Ok("884.4486, 556.55, a-a closed form for a<=5 n<=200".into())
}

fn criterion_9() -> Result<String, String> {
    let first: Vec<String> = (0..10)
        .map(|n| to_base(n, pair(2, 3)).unwrap().to_numeral_string())
        .collect();
    let want = ["0", "1", "2", "20", "21", "22", "210", "211", "212", "2100"];
    ensure(first == want, || format!("base 3/2: {first:?}"))?;
    let pairs = chipfire::params::coprime_pairs(7);
    for &params in &pairs {
        for n in 0..=10_000u64 {
            let w = to_base(n, params).map_err(|e| e.to_string())?;
            let v = eval_base(&w, params);
            ensure(v == ExactRational::from_integer(n), || {
                format!("{params} n={n} -> {w} -> {v}")
            })?;
        }
    }
    Ok(format!(
        "A024629 prefix; round trip n<=1e4 on {} pairs",
        pairs.len()
    ))
}

fn one_b_right_digits(b: u64, game: &Game) -> u64 {
    game.word()
        .right_part()
        .right_digits()
        .iter()
        .filter(|&&d| d == b - 1)
        .count() as u64
}

fn criterion_10a() -> Result<String, String> {
    for b in [2, 3, 5] {
        let mut seq = SettlementSeq::new(pair(1, b)).map_err(|e| e.to_string())?;
        for k in 1..=30 {
            let (law, it) = (one_b_settlement(k, b), seq.iterated(k).clone());
            ensure(law == it, || {
                format!(
                    "b={b} k={k} law {} iterated {}",
                    law.to_right_string(),
                    it.to_right_string()
                )
            })?;
        }
    }
    Ok("xi_k law for b in {2,3,5}, k<=30".into())
}

fn criterion_10b() -> Result<String, String> {
    let mut first_bad = Vec::new();
    for b in [2, 3] {
        let mut game = Game::from_pile(0, pair(1, b));
        for n in 1..=500 {
            game.grow();
            if n <= b {
                continue;
            }
            let count = one_b_right_digits(b, &game);
            let sum: u64 = (1..=n.saturating_sub(b + 2)).map(|i| nu_b(i, b)).sum();
            if count != sum {
                first_bad.push(format!("b={b} n={n} sum {sum} actual {count}"));
                break;
            }
        }
    }
    if first_bad.is_empty() {
        Ok("digit count equals the valuation sum for b in {2,3}, b<n<=500".into())
    } else {
        Err(first_bad.join("; "))
    }
}

fn criterion_10c() -> Result<String, String> {
    let mut game = Game::from_pile(0, pair(1, 2));
    for n in 1..=1000u64 {
        game.grow();
        if n < 4 {
            continue;
        }
        let left = game.word().left_part();
        let trick = binary_trick_left(n).ok_or("no trick value")?;
        // Independent route: binary digits of n past the leading one, each plus 1.
        let bits = format!("{n:b}");
        let plus_one: String = bits[1..]
            .chars()
            .map(|c| if c == '0' { '1' } else { '2' })
            .collect();
        ensure(
            trick == left && left.to_numeral_string() == plus_one,
            || {
                format!(
                    "n={n} trick {} oracle {} bits {plus_one}",
                    trick.to_numeral_string(),
                    left.to_numeral_string()
                )
            },
        )?;
    }
    Ok("1-2 left part from binary for 4<=n<=1000".into())
}

fn criterion_11(report: &verify::Report) -> Result<String, String> {
    let runs = checks_pass(
        report,
        Suite::Invariants,
        &["total-firings-from-weighted-sum"],
    )?;
    // Independent recount from the final state for the leftmost runs.
    let mut count = 0;
    for params in chipfire::params::coprime_pairs(6) {
        let (a, b) = (params.a() as i128, params.b() as i128);
        for n in 0..=300 {
            let (state, log) = simulate(n, params);
            let m: i128 = state.iter().map(|(v, s)| v as i128 * s as i128).sum();
            ensure(
                m % (b - a) == 0 && m / (b - a) == log.total() as i128,
                || format!("{params} n={n} M={m} total {}", log.total()),
            )?;
            count += 1;
        }
    }
    Ok(format!("{runs} strategy runs plus {count} direct recounts"))
}

fn criterion_12() -> Result<String, String> {
    let config = VerifyConfig {
        max_n: Some(60),
        grid: Some(vec![pair(2, 3)]),
        ..VerifyConfig::default()
    };
    let report = verify::run_suite(Suite::Predictor, &config);
    ensure(report.passed(), || {
        format!("predictor suite failed:\n{}", report.render())
    })?;
    let mut lines = Vec::new();
    for id in [ErratumId::RightValueTwo, ErratumId::SuffixAdvance] {
        let e = report
            .erratum_for(id)
            .ok_or_else(|| format!("{id} not reported"))?;
        lines.push(format!("{id} at {}", e.example));
    }
    let two = report.erratum_for(ErratumId::RightValueTwo).unwrap();
    ensure(two.example.n == Some(13), || {
        "right-value-two counterexample is not n=13".into()
    })?;
    Ok(lines.join("; "))
}

fn main() {
    let mut sheet = Sheet { rows: Vec::new() };
    sheet.run("1", "golden 2-3 table", criterion_1);
    sheet.run("2", "golden 1-2 pair", criterion_2);
    sheet.run("3", "settlement sequence and deltas", criterion_3);
    let (report, took) = strategy_sweep();
    sheet.run("4", "confluence", || criterion_4(&report, took));
    sheet.run("5", "invariant conservation", || criterion_5(&report));
    sheet.run("6", "stabilized side values", criterion_6);
    sheet.run("7", "predictor equals oracle", criterion_7);
    sheet.run("8", "non-coprime lift and a-a", criterion_8);
    sheet.run("9", "fractional base", criterion_9);
    sheet.run("10a", "1-b settlements", criterion_10a);
    sheet.run("10b", "1-b digit count vs valuation sum", criterion_10b);
    sheet.run("10c", "1-2 binary trick", criterion_10c);
    sheet.run("11", "firings from weighted sum", || criterion_11(&report));
    sheet.run("12", "errata reported", criterion_12);

    let failed: Vec<&Outcome> = sheet.rows.iter().filter(|r| r.failure.is_some()).collect();
    let unexpected: Vec<&str> = failed
        .iter()
        .filter(|r| !KNOWN_RED.iter().any(|(k, _)| *k == r.id))
        .map(|r| r.id)
        .collect();
    println!(
        "{} criteria checked, {} failed ({} known red, {} unexpected)",
        sheet.rows.len(),
        failed.len(),
        failed.len() - unexpected.len(),
        unexpected.len()
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
