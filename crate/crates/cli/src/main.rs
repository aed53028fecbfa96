//! `chipfire`: final states, settlements, base b/a numerals and verification
//! suites for the a-b chip-firing game.

mod record;

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use chipfire::engine::{simulate, FiringLog, FiringStrategy};
use chipfire::fracbase::{eval_base, to_base, RadixMark};
use chipfire::predictor::{Predictor, DEFAULT_WINDOW};
use chipfire::settlements::{
    anchor_index, delta_strings, dormant_census, family_row, highest_dormant_index, SettlementSeq,
};
use chipfire::verify::{self, Suite, VerifyConfig};
use chipfire::{DigitWord, Game, GameParams};

use record::{record, state_parts, Format};

#[derive(Parser, Debug)]
#[command(
    name = "chipfire",
    version,
    about = "Exact laboratory for the a-b chip-firing game on the line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Pair {
    /// Chips sent left per firing.
    #[arg(short = 'a', default_value_t = 2)]
    a: u64,
    /// Chips sent right per firing.
    #[arg(short = 'b', default_value_t = 3)]
    b: u64,
}

impl Pair {
    fn params(self) -> Result<GameParams, Failure> {
        GameParams::new(self.a, self.b).map_err(usage)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Final state of n chips placed at the origin.
    Final {
        /// Number of chips (ignored with --range).
        #[arg(required_unless_present = "range")]
        n: Option<u64>,
        #[command(flatten)]
        pair: Pair,
        /// Simulate instead of using the fast predictor.
        #[arg(long)]
        oracle: bool,
        /// Print every n in N0..=N1.
        #[arg(long, num_args = 2, value_names = ["N0", "N1"])]
        range: Option<Vec<u64>>,
        #[arg(long, env = "CHIPFIRE_FORMAT", value_enum)]
        format: Option<Format>,
        /// Same as --format json.
        #[arg(long)]
        json: bool,
    },
    /// Settlements ξ_0 ..= ξ_k.
    Settlements {
        #[command(flatten)]
        pair: Pair,
        #[arg(short = 'k', default_value_t = 20)]
        k: u64,
        #[arg(long, env = "CHIPFIRE_FORMAT", value_enum)]
        format: Option<Format>,
    },
    /// Base b/a numeral of n, or the value of a numeral.
    Base {
        #[arg(required_unless_present = "eval")]
        n: Option<u64>,
        #[command(flatten)]
        pair: Pair,
        /// Evaluate a digit word such as 2100 or 21.3.
        #[arg(long, value_name = "WORD")]
        eval: Option<String>,
    },
    /// c, B, H, δ-strings and the eventual values of a coprime pair a < b.
    Profile {
        #[command(flatten)]
        pair: Pair,
        /// Steps the elevated rule must hold to certify H.
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: u64,
    },
    /// Run verification suites; exit 1 when a check fails.
    Verify {
        /// confluence, invariants, settlements, predictor, one-b or all.
        /// Defaults to all, or to none when --golden is given.
        suite: Option<String>,
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated pairs such as 2-3,1-2.
        #[arg(long, value_name = "GRID")]
        params_grid: Option<String>,
        /// Restrict to one pair.
        #[arg(short = 'a', requires = "b")]
        a: Option<u64>,
        #[arg(short = 'b', requires = "a")]
        b: Option<u64>,
        /// File of "a b n state" lines checked against predictor and oracle.
        #[arg(long, value_name = "FILE")]
        golden: Option<PathBuf>,
        /// Run cases on one thread.
        #[arg(long)]
        sequential: bool,
        /// Evaluate every STRIDE-th intermediate state in full.
        #[arg(long, default_value_t = verify::VERIFY_STRIDE)]
        stride: u64,
    },
    /// Time the oracle against the predictor.
    Bench {
        #[command(flatten)]
        pair: Pair,
        /// Comma-separated chip counts.
        #[arg(long, default_value = "1000,10000,100000")]
        n: String,
    },
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(e: impl Display) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("chipfire: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Final {
            n,
            pair,
            oracle,
            range,
            format,
            json,
        } => {
            let format = if json {
                Format::Json
            } else {
                format.unwrap_or(Format::Compact)
            };
            let (n0, n1) = match range.as_deref() {
                Some([n0, n1]) if n0 <= n1 => (*n0, *n1),
                Some(_) => return Err(usage("--range needs N0 <= N1")),
                None => {
                    let n = n.expect("clap requires n");
                    (n, n)
                }
            };
            cmd_final(pair.params()?, n0, n1, oracle, format)
        }
        Command::Settlements { pair, k, format } => {
            let params = pair.params()?;
            let mut seq = SettlementSeq::new(params).map_err(usage)?;
            let notation = format.unwrap_or(Format::Compact).notation();
            for i in 0..=k {
                println!("{}", seq.iterated(i).render(notation, RadixMark::RightPart));
            }
            Ok(0)
        }
        Command::Base { n, pair, eval } => {
            let params = pair.params()?;
            match eval {
                Some(text) => {
                    let word = DigitWord::parse(&text).map_err(usage)?;
                    println!("{}", eval_base(&word, params));
                }
                None => {
                    let word = to_base(n.expect("clap requires n"), params).map_err(usage)?;
                    println!("{}", word.to_numeral_string());
                }
            }
            Ok(0)
        }
        Command::Profile { pair, window } => cmd_profile(pair.params()?, window),
        Command::Verify {
            suite,
            max_n,
            seed,
            params_grid,
            a,
            b,
            golden,
            sequential,
            stride,
        } => {
            let mut grid = match params_grid {
                Some(text) => Some(parse_grid(&text)?),
                None => None,
            };
            if let (Some(a), Some(b)) = (a, b) {
                grid = Some(vec![GameParams::new(a, b).map_err(usage)?]);
            }
            let suites = match (suite, &golden) {
                (Some(name), _) => verify::parse_suites(&name).map_err(usage)?,
                (None, Some(_)) => Vec::new(),
                (None, None) => Suite::ALL.to_vec(),
            };
            let config = VerifyConfig {
                max_n,
                grid,
                seed,
                parallel: !sequential,
                stride,
            };
            let mut report = verify::run_suites(&suites, &config);
            if let Some(path) = golden {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                let entries = verify::parse_golden(&text).map_err(usage)?;
                report.merge(verify::check_golden(&entries));
            }
            print!("{}", report.render());
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Bench { pair, n } => {
            let params = pair.params()?;
            let grid = n
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|e| usage(format!("{s:?}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            cmd_bench(params, &grid)
        }
    }
}

fn parse_grid(text: &str) -> Result<Vec<GameParams>, Failure> {
    text.split(',')
        .map(|item| {
            let (a, b) = item
                .trim()
                .split_once('-')
                .ok_or_else(|| usage(format!("pair {item:?} should look like 2-3")))?;
            let num = |s: &str| s.parse::<u64>().map_err(|e| usage(format!("{s:?}: {e}")));
            GameParams::new(num(a)?, num(b)?).map_err(usage)
        })
        .collect()
}

fn cmd_final(
    params: GameParams,
    n0: u64,
    n1: u64,
    oracle: bool,
    format: Format,
) -> Result<u8, Failure> {
    let mut seq = SettlementSeq::new(params).ok();
    let mut emit = |n: u64, word: &DigitWord, log: Option<&FiringLog>| match format {
        Format::Json => {
            let r = record(params, n, word, log, seq.as_mut());
            println!("{}", serde_json::to_string(&r).expect("record serializes"));
        }
        _ => println!("{}", state_parts(word, format.notation()).0),
    };
    if oracle {
        let mut game = Game::from_pile(n0, params);
        game.stabilize(FiringStrategy::Leftmost);
        for n in n0..=n1 {
            if n > n0 {
                game.grow();
            }
            emit(n, &game.word(), Some(&game.log()));
        }
    } else {
        let mut predictor = Predictor::default();
        let words = predictor.final_states(params, n0, n1).map_err(usage)?;
        for (n, word) in (n0..).zip(&words) {
            emit(n, word, None);
        }
    }
    Ok(0)
}

fn cmd_profile(params: GameParams, window: u64) -> Result<u8, Failure> {
    params.require_structured().map_err(usage)?;
    let mut predictor = Predictor::new(window);
    let profile = predictor.profile(params).map_err(usage)?;
    let c = profile.c();
    let (a, b) = (params.a(), params.b());
    println!("params={params}");
    println!("c={c}");
    println!("B={}", profile.balanced());
    println!("H={}", profile.h());
    println!("window={}", profile.verified_window());
    println!("closed_form_from={}", anchor_index(c));
    println!("settlement_index_at_H={}", profile.anchor_index());
    for (m, d) in delta_strings(params).map_err(usage)?.iter().enumerate() {
        println!("delta{m}={}", d.to_right_string().trim_start_matches('.'));
    }
    let census = dormant_census(params).map_err(usage)?;
    println!("dormant_count={}", census.count);
    println!("highest_dormant_index={}", highest_dormant_index(c));
    println!("eventual_origout={}", c * (b - a));
    println!("eventual_right_value={}", a * c);
    if let Some(row) = family_row(params) {
        println!(
            "family={:?} c={} origout={} value={}",
            row.family, row.c, row.origout, row.right_value
        );
    }
    Ok(0)
}

fn cmd_bench(params: GameParams, grid: &[u64]) -> Result<u8, Failure> {
    println!("{:>10} {:>14} {:>14}", "n", "oracle_s", "predictor_s");
    let mut code = 0;
    for &n in grid {
        let start = Instant::now();
        let oracle = simulate(n, params).0.to_word();
        let oracle_s = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let fast = Predictor::default().final_state(n, params).map_err(usage)?;
        let fast_s = start.elapsed().as_secs_f64();
        println!("{n:>10} {oracle_s:>14.6} {fast_s:>14.6}");
        if fast != oracle {
            eprintln!("chipfire: predictor and oracle disagree at n={n}");
            code = 1;
        }
    }
    Ok(code)
}
