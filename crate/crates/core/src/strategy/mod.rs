//! Players: the anchor-triangle Client strategy, certificate-backed optimal
//! play for either side, and simple reference players.

mod certified;
pub mod discipline;
mod lemma2;

pub use certified::{optimal_strategy, CertifiedClient, CertifiedWaiter, OptimalStrategy};
pub use lemma2::{lemma2_strategy, Lemma2Strategy};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, GameState, Offer};
use crate::graph::EdgeIdx;

/// What a Client responder was doing when it chose.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "component", rename_all = "kebab-case")]
pub enum Mode {
    /// Taking an edge away from the protected region.
    Outside,
    /// Keeping the listed vertices cut off.
    Committed(Vec<usize>),
    /// No rule applied; greedy refusal.
    Fallback,
    /// Move read from a certificate.
    Certified,
    /// Responder without modes.
    Plain,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Outside => write!(f, "outside"),
            Mode::Committed(c) => {
                let vs: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "committed({})", vs.join(","))
            }
            Mode::Fallback => write!(f, "fallback"),
            Mode::Certified => write!(f, "certified"),
            Mode::Plain => write!(f, "plain"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub chosen: EdgeIdx,
    pub mode: Mode,
}

/// A deterministic Client responder.
/// Answers offers at one fixed position.
pub type Responder<'a> = Box<dyn FnMut(&Offer) -> Result<Decision> + 'a>;

pub trait ClientStrategy: Send + Sync {
    fn respond(&self, game: &Game, s: &GameState, offer: &Offer) -> Result<Decision>;

    /// True if the responder plays out any small cut or adjacent pair that
    /// holds, so a verifier may stop at such positions.
    fn plays_cut_discipline(&self) -> bool {
        false
    }

    /// True if every offer holding a dead edge is answered with a dead edge,
    /// and other answers never depend on which free edges are dead.
    fn takes_dead_edges(&self) -> bool {
        false
    }

    /// The responder at one position. Verifiers ask many offers at the same
    /// position, so implementations may precompute here.
    fn at<'a>(&'a self, game: &'a Game, s: &'a GameState) -> Responder<'a> {
        Box::new(move |o| self.respond(game, s, o))
    }
}

/// A deterministic Waiter player.
pub trait WaiterStrategy: Send + Sync {
    fn offer(&self, game: &Game, s: &GameState) -> Result<Offer>;
}

/// One trace line: `round 3 offer 1,4,7 chose 4 mode outside`.
pub fn trace_line(round: usize, offer: &Offer, d: &Decision) -> String {
    format!("round {round} offer {offer} chose {} mode {}", d.chosen, d.mode)
}

/// Always takes the lowest offered edge.
#[derive(Clone, Copy, Debug, Default)]
pub struct LowestEdge;

impl ClientStrategy for LowestEdge {
    fn respond(&self, _: &Game, _: &GameState, offer: &Offer) -> Result<Decision> {
        Ok(Decision {
            chosen: offer.edges()[0],
            mode: Mode::Plain,
        })
    }
}

/// Greedy Client: a dead edge if offered, then a reply after which a cut
/// holds, then the reply leaving the weakest component weakest.
#[derive(Clone, Copy, Debug, Default)]
pub struct HeuristicClient;

impl ClientStrategy for HeuristicClient {
    fn respond(&self, game: &Game, s: &GameState, offer: &Offer) -> Result<Decision> {
        if let Some(&e) = offer.edges().iter().find(|&&e| game.is_dead(s, e)) {
            return Ok(Decision {
                chosen: e,
                mode: Mode::Plain,
            });
        }
        let score = |e: EdgeIdx| {
            let child = game.apply_unchecked(s, offer.as_set(), e);
            let cut = child.class_count() > 1 && game.winning_cut(&child).is_some();
            let weakest = game.class_outs(&child).into_iter().min().unwrap_or(0);
            (!cut, weakest, e)
        };
        let chosen = offer
            .edges()
            .iter()
            .copied()
            .min_by_key(|&e| score(e))
            .expect("offers are non-empty");
        Ok(Decision {
            chosen,
            mode: Mode::Plain,
        })
    }

    fn takes_dead_edges(&self) -> bool {
        true
    }
}

/// Greedy Waiter: as many merging edges as possible, lowest indices first,
/// padded with the lowest dead edges.
pub fn heuristic_waiter(game: &Game, s: &GameState) -> Result<Offer> {
    let k = game.q() + 1;
    if s.free.len() < k {
        return Err(Error::Precondition(format!(
            "{} free edges, an offer needs q+1 = {k}",
            s.free.len()
        )));
    }
    let (merging, dead): (Vec<EdgeIdx>, Vec<EdgeIdx>) = s.free.iter().partition(|&e| !game.is_dead(s, e));
    Offer::new(merging.into_iter().chain(dead).take(k))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HeuristicWaiter;

impl WaiterStrategy for HeuristicWaiter {
    fn offer(&self, game: &Game, s: &GameState) -> Result<Offer> {
        heuristic_waiter(game, s)
    }
}
