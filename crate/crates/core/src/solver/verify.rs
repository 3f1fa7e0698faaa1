//! Exhaustive check of a fixed Client strategy against every Waiter offer.

use std::sync::atomic::AtomicBool;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::concrete::all_offers;
use super::search::{Interrupted, Limits, Step};
use super::{SolveConfig, Table};
use crate::error::Result;
use crate::game::{subsets, EdgeSet, Game, GameState, Offer, Parts, Transcript};
use crate::graph::EdgeIdx;
use crate::strategy::ClientStrategy;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Failure {
    /// Client's graph became connected.
    Connected,
    /// The strategy answered with an edge outside the offer.
    NotInOffer { edge: EdgeIdx },
    /// The strategy reported an error.
    Refused { message: String },
    /// The strategy declared that it takes dead edges but kept a live one
    /// from an offer that held a dead edge.
    KeptLiveEdge { edge: EdgeIdx },
}

/// A line of play that the strategy loses, or after which it breaks its
/// contract on `offer`. The transcript always replays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub transcript: Transcript,
    pub offer: Option<Offer>,
    pub failure: Failure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Verified { positions: u64 },
    Refuted(Counterexample),
    Unknown { positions: u64 },
}

/// Plays every Waiter offer, in lexicographic order, against `strat` and
/// returns the first losing line found depth first.
///
/// Positions where a Client cut holds (see [`Game::winning_cut`]) are
/// accepted without expansion when the strategy declares that it plays
/// those cuts out. When it declares that it takes dead edges, positions
/// differing only in which free edges are dead are checked once, and of the
/// offers holding `k` dead edges only those with the `k` lowest are played;
/// the reply to each such offer is checked to be dead.
pub fn verify_client_strategy(game: &Game, strat: &dyn ClientStrategy, cfg: &SolveConfig) -> Result<Verification> {
    cfg.validate()?;
    let start = Instant::now();
    let abort = AtomicBool::new(false);
    let table = Table::new(cfg.table_capacity);
    let mut v = Verifier {
        game,
        strat,
        trust_cuts: strat.plays_cut_discipline(),
        dead_blind: strat.takes_dead_edges(),
        table: &table,
        limits: Limits {
            deadline: cfg.deadline(start),
            abort: &abort,
        },
        positions: 0,
        path: Transcript::new(),
    };
    let s = game.initial_state();
    Ok(match v.check(&s) {
        Err(Interrupted) => Verification::Unknown { positions: v.positions },
        Ok(None) => Verification::Verified { positions: v.positions },
        Ok(Some((offer, failure))) => Verification::Refuted(Counterexample {
            transcript: v.path,
            offer,
            failure,
        }),
    })
}

struct Verifier<'a> {
    game: &'a Game,
    strat: &'a dyn ClientStrategy,
    trust_cuts: bool,
    dead_blind: bool,
    table: &'a Table<(u128, u8, Parts)>,
    limits: Limits<'a>,
    positions: u64,
    /// On failure, the losing line.
    path: Transcript,
}

impl Verifier<'_> {
    fn check(&mut self, s: &GameState) -> Step<Option<(Option<Offer>, Failure)>> {
        if s.class_count() == 1 {
            return Ok(Some((None, Failure::Connected)));
        }
        if s.free.is_empty() || (self.trust_cuts && self.game.winning_cut(s).is_some()) {
            return Ok(None);
        }
        let dead = EdgeSet::from_edges(s.free.iter().filter(|&e| self.game.is_dead(s, e)));
        let key = if self.dead_blind {
            (s.free.0 & !dead.0, dead.len() as u8, s.parts.clone())
        } else {
            (s.free.0, 0, s.parts.clone())
        };
        if self.table.get(&key).is_some() {
            return Ok(None);
        }
        self.positions += 1;
        if self.positions.is_multiple_of(64) && self.limits.expired() {
            return Err(Interrupted);
        }
        let offers = if self.dead_blind {
            self.dead_blind_offers(s, dead)
        } else {
            all_offers(self.game, s)
        };
        let mut respond = self.strat.at(self.game, s);
        for set in offers {
            let offer = Offer::new(set.iter()).expect("subsets are distinct");
            let chosen = match respond(&offer) {
                Ok(d) => d.chosen,
                Err(e) => return Ok(Some((Some(offer), Failure::Refused { message: e.to_string() }))),
            };
            if !set.contains(chosen) {
                return Ok(Some((Some(offer), Failure::NotInOffer { edge: chosen })));
            }
            if self.dead_blind && !set.intersect(dead).is_empty() && !dead.contains(chosen) {
                return Ok(Some((Some(offer), Failure::KeptLiveEdge { edge: chosen })));
            }
            self.path.push(offer, chosen);
            let child = self.game.apply_unchecked(s, set, chosen);
            if let Some(f) = self.check(&child)? {
                return Ok(Some(f));
            }
            self.path.rounds.pop();
        }
        let depth = s.free.len() / (self.game.q() + 1);
        self.table.put(key, true, depth);
        Ok(None)
    }

    /// Live subsets padded with the lowest dead edges.
    fn dead_blind_offers(&self, s: &GameState, dead: EdgeSet) -> Vec<EdgeSet> {
        let k = self.game.q() + 1;
        let live: Vec<EdgeIdx> = s.free.iter().filter(|&e| !dead.contains(e)).collect();
        let dead: Vec<EdgeIdx> = dead.iter().collect();
        let mut out = Vec::new();
        for d in 0..=k.min(dead.len()) {
            if k - d > live.len() {
                continue;
            }
            let pad = EdgeSet::from_edges(dead[..d].iter().copied());
            subsets(&live, k - d, 0, &mut Vec::new(), &mut |c| {
                out.push(EdgeSet(pad.0 | EdgeSet::from_edges(c.iter().copied()).0));
            });
        }
        out
    }
}
