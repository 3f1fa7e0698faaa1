//! `wcgame`: build boards, solve games, check strategies and certificates.
//!
//! Exit codes: 0 ok, 1 claim refuted, 2 unknown (budget ran out), 3 usage
//! or input error.

mod bench;
mod output;
mod play;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use wcgame::construct::{build_gnq, build_gnq_seeded, build_gq};
use wcgame::enumerate::{boundary_q, enumerate_decomposable, verify_remark, Verdict};
use wcgame::game::Game;
use wcgame::solver::{replay_certificate, solve, verify_client_strategy, Certificate, SolveConfig, Verification};
use wcgame::strategy::{lemma2_strategy, ClientStrategy, LowestEdge};
use wcgame::{Instance, PruningLevel, Side, Transcript};

use output::{write_json_with_log, Outcome};

#[derive(Parser)]
#[command(
    name = "wcgame",
    version,
    about = "Connectivity Waiter-Client games on unions of spanning trees"
)]
struct Cli {
    /// Transposition table entries.
    #[arg(long, global = true, env = "WCGAME_TABLE_CAPACITY")]
    table_capacity: Option<usize>,
    /// Log level for diagnostics on stderr (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    log: log::LevelFilter,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// The base board on 3(q+1) vertices.
    Gq,
    /// Padded and extended boards on n vertices.
    Gnq,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    /// The anchor-triangle Client strategy for the constructed boards.
    Lemma2,
    /// Always keep the lowest offered edge.
    Lowest,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlayAs {
    Waiter,
    Client,
}

#[derive(Clone, Copy, ValueEnum)]
enum Opponent {
    /// Certified play from a full solve when the opponent's side wins.
    Optimal,
    /// The anchor-triangle Client strategy.
    Lemma2,
    /// Greedy play.
    Heuristic,
}

#[derive(Subcommand)]
enum Command {
    /// Build a board and write it as JSON.
    Construct {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value = "gnq")]
        family: Family,
        /// Pick padding neighbours at random with this seed instead of the
        /// fixed rule.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Validate a board file.
    Check { instance: PathBuf },
    /// Compute the game value.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "dead-collapse")]
        pruning: PruningLevel,
        /// Seconds; 0 means unlimited.
        #[arg(long, default_value_t = 0.0)]
        budget: f64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write the winner's certificate here (`.gz` compresses).
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Write the report here; timings go to a `.log` file beside it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 1 unless this side wins.
        #[arg(long)]
        expect: Option<Side>,
    },
    /// Check a Client strategy against every Waiter offer.
    VerifyStrategy {
        instance: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyName,
        #[arg(long, default_value_t = 0.0)]
        budget: f64,
        /// Write a counterexample transcript here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List boundary boards on n vertices up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Defaults to the boundary value for n.
        #[arg(long)]
        q: Option<usize>,
        /// Write each board to DIR/board-<i>.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Solve every boundary board on n vertices.
    VerifyRemark {
        #[arg(long)]
        n: usize,
        /// Seconds per board; 0 means unlimited.
        #[arg(long, default_value_t = 0.0)]
        budget: f64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write Waiter certificates to DIR/cert-<i>.jsonl.
        #[arg(long)]
        cert_dir: Option<PathBuf>,
    },
    /// Replay a transcript, or check a certificate, against a board.
    Replay { instance: PathBuf, file: PathBuf },
    /// Play interactively on stdin/stdout.
    Play {
        instance: PathBuf,
        #[arg(long = "as", value_enum)]
        side: PlayAs,
        #[arg(long, value_enum, default_value = "optimal")]
        opponent: Opponent,
        /// Seconds for the optimal opponent's solve; 0 means unlimited.
        #[arg(long, default_value_t = 0.0)]
        budget: f64,
    },
    /// Node-throughput report on fixed boards.
    Bench {
        /// Skip the larger boards.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    env_logger::Builder::new().filter_level(cli.log).init();
    match run(cli) {
        Ok(o) => ExitCode::from(o as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Outcome::Usage as u8)
        }
    }
}

fn budget(secs: f64) -> Result<Duration> {
    if !(secs >= 0.0 && secs.is_finite()) {
        bail!("budget must be a non-negative number of seconds, got {secs}");
    }
    Ok(Duration::from_secs_f64(secs))
}

fn config(cli_capacity: Option<usize>) -> SolveConfig {
    let mut cfg = SolveConfig::default();
    if let Some(c) = cli_capacity {
        cfg.table_capacity = c;
    }
    cfg
}

fn read_instance(path: &Path) -> Result<Instance> {
    Instance::read(path).with_context(|| format!("reading board {}", path.display()))
}

fn run(cli: Cli) -> Result<Outcome> {
    let base = config(cli.table_capacity);
    match cli.command {
        Command::Construct {
            n,
            q,
            family,
            seed,
            out,
            dot,
        } => {
            let inst = match family {
                Family::Gq => {
                    let inst = build_gq(q)?;
                    if let Some(n) = n.filter(|&n| n != inst.n()) {
                        bail!("the base board for q = {q} has {} vertices, not {n}", inst.n());
                    }
                    inst
                }
                Family::Gnq => {
                    let n = n.context("--n is required for --family gnq")?;
                    match seed {
                        Some(seed) => build_gnq_seeded(n, q, seed)?,
                        None => build_gnq(n, q)?,
                    }
                }
            };
            match out {
                Some(p) => inst.write(&p)?,
                None => println!("{}", inst.to_json()),
            }
            if let Some(p) = dot {
                std::fs::write(p, inst.to_dot())?;
            }
            Ok(Outcome::Ok)
        }
        Command::Check { instance } => {
            let inst = read_instance(&instance)?;
            match inst.verify() {
                Ok(()) => {
                    let anchors = inst
                        .anchors
                        .map_or("none".to_string(), |a| format!("{},{},{}", a[0], a[1], a[2]));
                    println!(
                        "ok: {} vertices, {} edges, {} spanning trees, anchors {anchors}",
                        inst.n(),
                        inst.graph.edge_count(),
                        inst.trees()
                    );
                    Ok(Outcome::Ok)
                }
                Err(vs) => {
                    for v in vs {
                        println!("violation: {v}");
                    }
                    Ok(Outcome::Refuted)
                }
            }
        }
        Command::Solve {
            instance,
            pruning,
            budget: secs,
            workers,
            cert,
            out,
            expect,
        } => {
            let game = Game::new(read_instance(&instance)?)?;
            let cfg = SolveConfig {
                pruning,
                budget: budget(secs)?,
                workers,
                retain_certificate: cert.is_some(),
                ..base
            };
            let res = solve(&game, &game.initial_state(), &cfg)?;
            let report = res.report();
            output::print_and_write(&report, out.as_deref(), workers == 1)?;
            if let (Some(p), Some(c)) = (cert.as_deref(), res.certificate.as_ref()) {
                c.write(p)?;
                eprintln!("certificate: {} records written to {}", c.len(), p.display());
            } else if cert.is_some() && res.winner.is_some() {
                eprintln!("certificate: budget ran out while extracting; none written");
            }
            Ok(match (res.winner, expect) {
                (None, _) => Outcome::Unknown,
                (Some(w), Some(e)) if w != e => Outcome::Refuted,
                _ => Outcome::Ok,
            })
        }
        Command::VerifyStrategy {
            instance,
            strategy,
            budget: secs,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let game = Game::new(inst.clone())?;
            let strat: Box<dyn ClientStrategy> = match strategy {
                StrategyName::Lemma2 => Box::new(lemma2_strategy(&inst)?),
                StrategyName::Lowest => Box::new(LowestEdge),
            };
            let cfg = SolveConfig {
                budget: budget(secs)?,
                ..base
            };
            match verify_client_strategy(&game, strat.as_ref(), &cfg)? {
                Verification::Verified { positions } => {
                    println!("verified: Client wins against every Waiter line ({positions} positions)");
                    Ok(Outcome::Ok)
                }
                Verification::Unknown { positions } => {
                    println!("unknown: budget ran out after {positions} positions");
                    Ok(Outcome::Unknown)
                }
                Verification::Refuted(cx) => {
                    println!("refuted: {}", serde_json::to_string(&cx.failure)?);
                    if let Some(o) = &cx.offer {
                        println!("at offer {o}");
                    }
                    print!("{}", cx.transcript);
                    if let Some(p) = out {
                        std::fs::write(&p, cx.transcript.to_string())?;
                    }
                    Ok(Outcome::Refuted)
                }
            }
        }
        Command::Enumerate { n, q, out_dir } => {
            let q = match q {
                Some(q) => q,
                None => boundary_q(n)?,
            };
            let boards = enumerate_decomposable(n, q)?;
            if let Some(d) = &out_dir {
                std::fs::create_dir_all(d)?;
            }
            for (i, b) in boards.iter().enumerate() {
                let missing: Vec<String> = b
                    .instance
                    .graph
                    .complement()
                    .edges()
                    .iter()
                    .map(|&(x, y)| format!("{x}-{y}"))
                    .collect();
                println!("{i} {} missing {}", b.code.to_hex(), missing.join(" "));
                if let Some(d) = &out_dir {
                    b.instance.write(d.join(format!("board-{i}.json")))?;
                }
            }
            println!("{} boards with n = {n}, q = {q}", boards.len());
            Ok(Outcome::Ok)
        }
        Command::VerifyRemark {
            n,
            budget: secs,
            workers,
            out,
            cert_dir,
        } => {
            let cfg = SolveConfig {
                budget: budget(secs)?,
                workers,
                ..base
            };
            let report = verify_remark(n, &cfg)?;
            if let Some(d) = &cert_dir {
                std::fs::create_dir_all(d)?;
                for (i, c) in report.certificates.iter().enumerate() {
                    if let Some(c) = c {
                        c.write(d.join(format!("cert-{i}.jsonl")))?;
                    }
                }
            }
            write_json_with_log(&report, out.as_deref())?;
            println!("{}", report.conclusion);
            Ok(if report.count(Verdict::Client) > 0 {
                Outcome::Refuted
            } else if report.count(Verdict::Unknown) > 0 {
                Outcome::Unknown
            } else {
                Outcome::Ok
            })
        }
        Command::Replay { instance, file } => {
            let game = Game::new(read_instance(&instance)?)?;
            let text = std::fs::read_to_string(&file).ok();
            // transcripts are text lines starting with "offer:"
            let is_transcript = text.as_deref().is_some_and(|t| {
                t.lines()
                    .map(str::trim)
                    .find(|l| !l.is_empty() && !l.starts_with('#'))
                    .is_none_or(|l| l.starts_with("offer:"))
            });
            if is_transcript {
                replay_transcript(&game, text.as_deref().unwrap_or_default())
            } else {
                let cert = Certificate::read(&file).with_context(|| format!("reading {}", file.display()))?;
                match replay_certificate(&game, &cert) {
                    Ok(r) => {
                        println!(
                            "certificate valid: {} wins ({} positions, {} branches, {} leaves)",
                            cert.side, r.positions, r.branches, r.leaves
                        );
                        Ok(Outcome::Ok)
                    }
                    Err(e) => {
                        println!("certificate invalid: {e}");
                        Ok(Outcome::Refuted)
                    }
                }
            }
        }
        Command::Play {
            instance,
            side,
            opponent,
            budget: secs,
        } => {
            let inst = read_instance(&instance)?;
            let cfg = SolveConfig {
                budget: budget(secs)?,
                ..base
            };
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            play::run(inst, side, opponent, &cfg, stdin.lock(), stdout.lock())?;
            Ok(Outcome::Ok)
        }
        Command::Bench { quick } => {
            bench::run(&base, quick)?;
            Ok(Outcome::Ok)
        }
    }
}

fn replay_transcript(game: &Game, text: &str) -> Result<Outcome> {
    let t: Transcript = text.parse()?;
    let states = match t.replay(game) {
        Ok(s) => s,
        Err(e) => {
            println!("illegal: {e}");
            return Ok(Outcome::Refuted);
        }
    };
    for (i, (r, s)) in t.rounds.iter().zip(&states[1..]).enumerate() {
        println!(
            "round {} offer {} chose {} components {} free {}",
            i + 1,
            r.offer,
            r.chosen,
            s.class_count(),
            s.free.len()
        );
    }
    let last = states.last().expect("opening state");
    match game.terminal_winner(last) {
        Some(w) => println!("finished: {w} wins"),
        None => println!("unfinished: {} rounds left", last.free.len() / (game.q() + 1)),
    }
    Ok(Outcome::Ok)
}
