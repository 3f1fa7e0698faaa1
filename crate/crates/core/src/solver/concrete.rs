//! Unreduced search over concrete positions, evaluated from Client's side.
//! Every `(q+1)`-subset of free edges is a separate offer.

use super::search::{Interrupted, Limits, Step};
use super::table::Table;
use crate::game::{subsets, EdgeSet, Game, GameState, Parts};
use crate::graph::EdgeIdx;

pub(crate) type ConcreteKey = (u128, Parts);

pub(crate) struct ConcreteEngine<'a> {
    pub game: &'a Game,
    pub use_cuts: bool,
    pub table: &'a Table<ConcreteKey>,
    pub limits: Limits<'a>,
    pub nodes: u64,
    pub hits: u64,
}

impl ConcreteEngine<'_> {
    /// True iff Client wins from `s` with Waiter to offer.
    pub fn client_wins(&mut self, s: &GameState) -> Step<bool> {
        if s.class_count() == 1 {
            return Ok(false);
        }
        if s.free.is_empty() {
            return Ok(true);
        }
        if self.use_cuts && self.game.client_cut(s).is_some() {
            return Ok(true);
        }
        let key = (s.free.0, s.parts.clone());
        if let Some(v) = self.table.get(&key) {
            self.hits += 1;
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(64) && self.limits.expired() {
            return Err(Interrupted);
        }
        let mut win = true;
        for offer in all_offers(self.game, s) {
            if !self.has_reply(s, offer)? {
                win = false;
                break;
            }
        }
        let depth = s.free.len() / (self.game.q() + 1);
        self.table.put(key, win, depth);
        Ok(win)
    }

    /// True iff some edge of `offer` keeps Client winning.
    pub fn has_reply(&mut self, s: &GameState, offer: EdgeSet) -> Step<bool> {
        for e in offer {
            let child = self.game.apply_unchecked(s, offer, e);
            if self.client_wins(&child)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// All `(q+1)`-subsets of the free edges, lexicographic.
pub(crate) fn all_offers(game: &Game, s: &GameState) -> Vec<EdgeSet> {
    let free: Vec<EdgeIdx> = s.free.iter().collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(game.q() + 1);
    subsets(&free, game.q() + 1, 0, &mut cur, &mut |c| {
        out.push(EdgeSet::from_edges(c.iter().copied()))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::tests::k4;
    use std::sync::atomic::AtomicBool;

    #[test]
    fn offers_are_all_subsets() {
        let g = k4();
        let s = g.initial_state();
        let offers = all_offers(&g, &s);
        assert_eq!(offers.len(), 15);
        assert!(offers.iter().all(|o| o.len() == 2 && o.is_subset(s.free)));
    }

    #[test]
    fn client_loses_k4_with_and_without_cuts() {
        let g = k4();
        for use_cuts in [true, false] {
            let table = Table::new(1 << 10);
            let abort = AtomicBool::new(false);
            let mut e = ConcreteEngine {
                game: &g,
                use_cuts,
                table: &table,
                limits: Limits {
                    deadline: None,
                    abort: &abort,
                },
                nodes: 0,
                hits: 0,
            };
            assert_eq!(e.client_wins(&g.initial_state()), Ok(false));
            assert!(e.nodes > 0);
        }
    }
}
