//! Exact game values by AND/OR search with a shared transposition table,
//! strategy certificates, and exhaustive checking of Client strategies.
//!
//! The default engine searches quotient boards (see
//! [`crate::game::Quotient`]). Pruning level `none` runs a separate engine
//! over concrete positions and every subset offer, evaluated from Client's
//! side; the two agreeing is the main cross-check of the reductions.

mod certificate;
mod concrete;
mod replay;
mod search;
mod table;
mod verify;

pub use certificate::{CertMove, Certificate, Record, Reply, CERTIFICATE_FORMAT};
pub use replay::{replay_certificate, ReplayReport};
pub use table::Table;
pub use verify::{verify_client_strategy, Counterexample, Failure, Verification};

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, GameState, PruningLevel, Side};
use crate::graph::automorphisms;
use certificate::Extractor;
use concrete::{all_offers, ConcreteEngine};
use search::{permute_offer, Engine, Limits, Step};

/// Environment variable overriding the default table capacity.
pub const TABLE_CAPACITY_ENV: &str = "WCGAME_TABLE_CAPACITY";
pub const DEFAULT_TABLE_CAPACITY: usize = 1 << 22;

/// Upper bound on automorphisms used to dedupe opening offers.
const ROOT_SYMMETRY_LIMIT: usize = 50_000;

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub pruning: PruningLevel,
    /// Entries kept in the transposition table.
    pub table_capacity: usize,
    /// Wall-clock budget; zero means unlimited.
    pub budget: Duration,
    /// Threads sharing the opening offers.
    pub workers: usize,
    pub retain_certificate: bool,
    /// Stop at positions with a small cut or an adjacent pair. Turned off
    /// only to test those cuts.
    pub use_cuts: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        let table_capacity = std::env::var(TABLE_CAPACITY_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&c| c > 0)
            .unwrap_or(DEFAULT_TABLE_CAPACITY);
        Self {
            pruning: PruningLevel::default(),
            table_capacity,
            budget: Duration::ZERO,
            workers: 1,
            retain_certificate: false,
            use_cuts: true,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.table_capacity == 0 {
            return Err(Error::Precondition("table capacity must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Precondition("worker count must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn deadline(&self, start: Instant) -> Option<Instant> {
        (!self.budget.is_zero()).then(|| start + self.budget)
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// `None` when the budget ran out.
    pub winner: Option<Side>,
    pub nodes: u64,
    pub table_hits: u64,
    pub elapsed: Duration,
    pub pruning: PruningLevel,
    pub certificate: Option<Certificate>,
}

impl SolveResult {
    pub fn is_unknown(&self) -> bool {
        self.winner.is_none()
    }

    pub fn report(&self) -> SolveReport {
        SolveReport {
            winner: self.winner,
            nodes: self.nodes,
            table_hits: self.table_hits,
            elapsed_ms: self.elapsed.as_millis() as u64,
            pruning: self.pruning,
            unknown: self.is_unknown(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub winner: Option<Side>,
    // the CLI moves the next three to a sidecar log
    #[serde(default)]
    pub nodes: u64,
    #[serde(default)]
    pub table_hits: u64,
    #[serde(default)]
    pub elapsed_ms: u64,
    pub pruning: PruningLevel,
    pub unknown: bool,
}

/// The winning side's certificate from a solve run with retention on.
pub fn extract_certificate(res: &SolveResult, side: Side) -> Result<&Certificate> {
    match res.winner {
        None => return Err(Error::Certificate("the game value is unknown".into())),
        Some(w) if w != side => {
            return Err(Error::Certificate(format!("{side} does not win this game, {w} does")));
        }
        _ => {}
    }
    res.certificate
        .as_ref()
        .ok_or_else(|| Error::Certificate("certificate was not retained".into()))
}

fn is_opening(game: &Game, s: &GameState) -> bool {
    *s == game.initial_state()
}

/// Solves the game from `s`, Waiter to offer.
pub fn solve(game: &Game, s: &GameState, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    if cfg.retain_certificate && !is_opening(game, s) {
        return Err(Error::Precondition(
            "certificates start from the opening position".into(),
        ));
    }
    let deadline = cfg.deadline(start);
    let (value, nodes, hits) = match cfg.pruning {
        PruningLevel::None => {
            let (client, n, h) = solve_concrete(game, s, cfg, deadline)?;
            (client.map(|c| !c), n, h)
        }
        _ => solve_abstract(game, s, cfg, deadline)?,
    };
    let winner = value.map(|w| if w { Side::Waiter } else { Side::Client });
    let mut certificate = None;
    if let (true, Some(side)) = (cfg.retain_certificate, winner) {
        certificate = build_certificate(game, s, side, cfg, deadline)?;
    }
    debug!("solve: winner {winner:?}, {nodes} nodes, {hits} hits");
    Ok(SolveResult {
        winner,
        nodes,
        table_hits: hits,
        elapsed: start.elapsed(),
        pruning: cfg.pruning,
        certificate,
    })
}

enum RootOutcome {
    /// Some item returned the stopping value.
    Stopped,
    /// Every item returned the other value.
    Exhausted,
    Interrupted,
}

/// Hands items `0..len` to `workers` threads until one returns `stop_on`.
fn drive<E>(
    len: usize,
    workers: usize,
    abort: &AtomicBool,
    make: impl Fn() -> E + Sync,
    eval: impl Fn(&mut E, usize) -> Step<bool> + Sync,
    stats: impl Fn(&E) -> (u64, u64) + Sync,
    stop_on: bool,
) -> (RootOutcome, u64, u64) {
    let next = AtomicUsize::new(0);
    let stopped = AtomicBool::new(false);
    let interrupted = AtomicBool::new(false);
    let totals: Vec<(u64, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers.min(len.max(1)))
            .map(|_| {
                scope.spawn(|| {
                    let mut e = make();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= len || abort.load(Ordering::Relaxed) {
                            break;
                        }
                        match eval(&mut e, i) {
                            Ok(v) if v == stop_on => {
                                stopped.store(true, Ordering::Relaxed);
                                abort.store(true, Ordering::Relaxed);
                                break;
                            }
                            Ok(_) => {}
                            Err(_) => {
                                interrupted.store(true, Ordering::Relaxed);
                                break;
                            }
                        }
                    }
                    stats(&e)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver worker panicked"))
            .collect()
    });
    let nodes = totals.iter().map(|t| t.0).sum::<u64>() + 1;
    let hits = totals.iter().map(|t| t.1).sum();
    let outcome = if stopped.load(Ordering::Relaxed) {
        RootOutcome::Stopped
    } else if interrupted.load(Ordering::Relaxed) {
        RootOutcome::Interrupted
    } else {
        RootOutcome::Exhausted
    };
    (outcome, nodes, hits)
}

fn solve_abstract(
    game: &Game,
    s: &GameState,
    cfg: &SolveConfig,
    deadline: Option<Instant>,
) -> Result<(Option<bool>, u64, u64)> {
    let root = game.quotient(s)?;
    let table = Table::new(cfg.table_capacity);
    let abort = AtomicBool::new(false);
    let make = || Engine {
        q: game.q(),
        level: cfg.pruning,
        use_cuts: cfg.use_cuts,
        table: &table,
        limits: Limits {
            deadline,
            abort: &abort,
        },
        nodes: 0,
        hits: 0,
    };
    let mut e = make();
    if let Some(v) = e.quick(&root) {
        return Ok((Some(v), 0, e.hits));
    }
    let mut offers = e.ordered_offers(&root);
    if is_opening(game, s) {
        let perms = automorphisms(&game.instance().graph, ROOT_SYMMETRY_LIMIT)?;
        if perms.len() > 1 {
            offers.retain(|o| perms.iter().all(|p| permute_offer(o, p) >= *o));
        }
        debug!(
            "opening: {} offers after symmetry, {} automorphisms",
            offers.len(),
            perms.len()
        );
    }
    let (outcome, nodes, hits) = drive(
        offers.len(),
        cfg.workers,
        &abort,
        make,
        |e, i| e.offer_wins(&root, &offers[i]),
        |e| (e.nodes, e.hits),
        true,
    );
    Ok(match outcome {
        RootOutcome::Stopped => (Some(true), nodes, hits),
        RootOutcome::Exhausted => (Some(false), nodes, hits),
        RootOutcome::Interrupted => (None, nodes, hits),
    })
}

/// Client's value: `Some(true)` when Client wins.
fn solve_concrete(
    game: &Game,
    s: &GameState,
    cfg: &SolveConfig,
    deadline: Option<Instant>,
) -> Result<(Option<bool>, u64, u64)> {
    let table = Table::new(cfg.table_capacity);
    let abort = AtomicBool::new(false);
    let make = || ConcreteEngine {
        game,
        use_cuts: cfg.use_cuts,
        table: &table,
        limits: Limits {
            deadline,
            abort: &abort,
        },
        nodes: 0,
        hits: 0,
    };
    if s.class_count() == 1 {
        return Ok((Some(false), 0, 0));
    }
    if s.free.is_empty() || (cfg.use_cuts && game.client_cut(s).is_some()) {
        return Ok((Some(true), 0, 0));
    }
    let offers = all_offers(game, s);
    let (outcome, nodes, hits) = drive(
        offers.len(),
        cfg.workers,
        &abort,
        make,
        |e, i| e.has_reply(s, offers[i]),
        |e| (e.nodes, e.hits),
        false,
    );
    Ok(match outcome {
        RootOutcome::Stopped => (Some(false), nodes, hits),
        RootOutcome::Exhausted => (Some(true), nodes, hits),
        RootOutcome::Interrupted => (None, nodes, hits),
    })
}

fn build_certificate(
    game: &Game,
    s: &GameState,
    side: Side,
    cfg: &SolveConfig,
    deadline: Option<Instant>,
) -> Result<Option<Certificate>> {
    let table = Table::new(cfg.table_capacity);
    let abort = AtomicBool::new(false);
    let level = match cfg.pruning {
        PruningLevel::None => PruningLevel::DeadCollapse,
        l => l,
    };
    let mut engine = Engine {
        q: game.q(),
        level,
        use_cuts: true,
        table: &table,
        limits: Limits {
            deadline,
            abort: &abort,
        },
        nodes: 0,
        hits: 0,
    };
    let root = game.quotient(s)?;
    let mut x = Extractor::new(&mut engine);
    let step = match side {
        Side::Waiter => x.waiter(&root),
        Side::Client => x.client(&root),
    };
    match step {
        Err(_) => Ok(None),
        Ok(Err(e)) => Err(e),
        Ok(Ok(())) => Ok(Some(Certificate::new(game.instance(), side, x.records))),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::{Decomposition, Graph, Instance};

    pub(crate) fn k4() -> Game {
        let inst = Instance {
            graph: Graph::complete(4),
            decomposition: Decomposition::new(vec![vec![0, 3, 5], vec![1, 2, 4]]),
            q: 1,
            anchors: None,
        };
        Game::new(inst).unwrap()
    }

    #[test]
    fn k4_is_waiter_at_every_level() {
        let g = k4();
        for pruning in [PruningLevel::None, PruningLevel::DeadCollapse, PruningLevel::Obs1] {
            for use_cuts in [true, false] {
                let cfg = SolveConfig {
                    pruning,
                    use_cuts,
                    ..SolveConfig::default()
                };
                let r = solve(&g, &g.initial_state(), &cfg).unwrap();
                assert_eq!(r.winner, Some(Side::Waiter), "{pruning} cuts={use_cuts}");
                assert!(!r.is_unknown());
            }
        }
    }

    #[test]
    fn bad_config_rejected() {
        let g = k4();
        for cfg in [
            SolveConfig {
                table_capacity: 0,
                ..SolveConfig::default()
            },
            SolveConfig {
                workers: 0,
                ..SolveConfig::default()
            },
        ] {
            assert!(matches!(
                solve(&g, &g.initial_state(), &cfg),
                Err(Error::Precondition(_))
            ));
        }
    }

    #[test]
    fn certificate_needs_opening_and_retention() {
        let g = k4();
        let s = g.initial_state();
        let r = solve(&g, &s, &SolveConfig::default()).unwrap();
        assert!(matches!(
            extract_certificate(&r, Side::Waiter),
            Err(Error::Certificate(_))
        ));
        assert!(matches!(
            extract_certificate(&r, Side::Client),
            Err(Error::Certificate(_))
        ));

        let cfg = SolveConfig {
            retain_certificate: true,
            ..SolveConfig::default()
        };
        let r = solve(&g, &s, &cfg).unwrap();
        let cert = extract_certificate(&r, Side::Waiter).unwrap();
        assert_eq!(cert.side, Side::Waiter);
        assert!(!cert.is_empty());

        let o = crate::game::Offer::new([0, 1]).unwrap();
        let later = g.apply_round(&s, &o, 0).unwrap();
        assert!(matches!(solve(&g, &later, &cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn report_marks_unknown() {
        let r = SolveResult {
            winner: None,
            nodes: 3,
            table_hits: 0,
            elapsed: Duration::from_millis(5),
            pruning: PruningLevel::Obs1,
            certificate: None,
        };
        let rep = r.report();
        assert!(rep.unknown);
        assert_eq!(rep.elapsed_ms, 5);
        assert!(matches!(
            extract_certificate(&r, Side::Waiter),
            Err(Error::Certificate(_))
        ));
    }

    #[test]
    fn one_worker_and_many_agree() {
        let g = k4();
        let s = g.initial_state();
        for pruning in [PruningLevel::None, PruningLevel::Obs1] {
            let one = solve(
                &g,
                &s,
                &SolveConfig {
                    pruning,
                    ..SolveConfig::default()
                },
            )
            .unwrap();
            let many = solve(
                &g,
                &s,
                &SolveConfig {
                    pruning,
                    workers: 4,
                    ..SolveConfig::default()
                },
            )
            .unwrap();
            assert_eq!(one.winner, many.winner);
        }
    }
}
