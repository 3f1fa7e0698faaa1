//! Client strategy for boards with an anchor triangle whose vertices have
//! degree `q + 2`: keep some part of the triangle cut off from the rest.
//!
//! Rules, first match wins:
//! 0. a dead edge is offered: take the lowest;
//! 1. a small cut or adjacent pair holds: play it out;
//! 2. some reply creates one: take it (small cuts first);
//! 3. some offered edge avoids all anchors: take the lowest;
//! 4. the offer is a star at one anchor class: with one triangle edge in it
//!    take that edge, with two take a non-triangle edge; an offer spread over
//!    several anchor classes: take its lowest non-triangle anchor edge;
//! 5. otherwise refuse edges at anchor classes greedily.

use super::discipline::cut_reply;
use super::{ClientStrategy, Decision, Mode, Responder};
use crate::error::{Error, Result};
use crate::game::{Game, GameState, Offer, QuotientCut};
use crate::graph::{EdgeIdx, Instance};

#[derive(Clone, Debug)]
pub struct Lemma2Strategy {
    anchors: [usize; 3],
}

/// Fails on boards without anchors.
pub fn lemma2_strategy(inst: &Instance) -> Result<Lemma2Strategy> {
    let anchors = inst
        .anchors
        .ok_or_else(|| Error::Precondition("the anchor strategy needs an instance with anchors".into()))?;
    Ok(Lemma2Strategy { anchors })
}

fn members(s: &GameState, c: u8) -> Vec<usize> {
    (0..s.parts.len()).filter(|&v| s.parts[v] == c).collect()
}

impl Lemma2Strategy {
    pub fn anchors(&self) -> [usize; 3] {
        self.anchors
    }

    fn is_anchor(&self, v: usize) -> bool {
        self.anchors.contains(&v)
    }

    fn is_triangle(&self, game: &Game, e: EdgeIdx) -> bool {
        let (a, b) = game.ends(e);
        self.is_anchor(a) && self.is_anchor(b)
    }

    /// Classes holding an anchor.
    fn anchor_classes(&self, s: &GameState) -> Vec<u8> {
        let mut cs: Vec<u8> = self.anchors.iter().map(|&a| s.parts[a]).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    fn leaves(game: &Game, s: &GameState, e: EdgeIdx, c: u8) -> bool {
        let (a, b) = game.ends(e);
        let (x, y) = (s.parts[a], s.parts[b]);
        x != y && (x == c || y == c)
    }

    /// A reply after which a cut holds (small cuts first) or the game ends
    /// with Client disconnected.
    fn creates_cut(&self, game: &Game, s: &GameState, offer: &Offer) -> Option<Decision> {
        let mut best: Option<(u8, EdgeIdx, GameState, Option<QuotientCut>)> = None;
        for &e in offer.edges() {
            let child = game.apply_unchecked(s, offer.as_set(), e);
            if child.class_count() < 2 {
                continue;
            }
            let cut = game.winning_cut(&child);
            let rank = match cut {
                Some(QuotientCut::SmallCut(_)) => 0,
                Some(_) => 1,
                None if child.free.is_empty() => 2,
                None => continue,
            };
            if best.as_ref().is_none_or(|b| rank < b.0) {
                best = Some((rank, e, child, cut));
            }
        }
        let (_, e, child, cut) = best?;
        let c = match cut {
            // the reply is only for naming the protected vertices
            Some(cut) => cut_reply(game, &child, offer, &cut).1,
            None => members(&child, child.parts[game.ends(e).0]),
        };
        Some(Decision {
            chosen: e,
            mode: Mode::Committed(c),
        })
    }

    fn case_analysis(&self, game: &Game, s: &GameState, offer: &Offer) -> Option<Decision> {
        let edges = offer.edges();
        let classes = self.anchor_classes(s);
        let merged = |e: EdgeIdx| {
            let child = game.apply_unchecked(s, offer.as_set(), e);
            members(&child, child.parts[game.ends(e).0])
        };
        for &x in &classes {
            if !edges.iter().all(|&e| Self::leaves(game, s, e, x)) {
                continue;
            }
            let tri: Vec<EdgeIdx> = edges.iter().copied().filter(|&e| self.is_triangle(game, e)).collect();
            match tri.len() {
                1 => {
                    return Some(Decision {
                        chosen: tri[0],
                        mode: Mode::Committed(merged(tri[0])),
                    })
                }
                2 => {
                    let e = *edges.iter().find(|&&e| !self.is_triangle(game, e))?;
                    let mut rest: Vec<usize> = classes
                        .iter()
                        .filter(|&&c| c != x)
                        .flat_map(|&c| members(s, c))
                        .collect();
                    rest.sort_unstable();
                    return Some(Decision {
                        chosen: e,
                        mode: Mode::Committed(rest),
                    });
                }
                _ => return None,
            }
        }
        let spread = classes
            .iter()
            .filter(|&&c| edges.iter().any(|&e| Self::leaves(game, s, e, c)))
            .count();
        if spread < 2 {
            return None;
        }
        let e = *edges
            .iter()
            .find(|&&e| !self.is_triangle(game, e) && classes.iter().any(|&c| Self::leaves(game, s, e, c)))?;
        Some(Decision {
            chosen: e,
            mode: Mode::Committed(merged(e)),
        })
    }

    fn fallback(&self, game: &Game, s: &GameState, offer: &Offer) -> Decision {
        let classes = self.anchor_classes(s);
        let score = |e: EdgeIdx| {
            let at_anchor = classes.iter().any(|&c| Self::leaves(game, s, e, c));
            let child = game.apply_unchecked(s, offer.as_set(), e);
            let outs = game.class_outs(&child);
            let weakest = self
                .anchors
                .iter()
                .map(|&a| outs[child.parts[a] as usize])
                .min()
                .unwrap_or(0);
            (at_anchor, weakest, e)
        };
        let chosen = offer.edges().iter().copied().min_by_key(|&e| score(e)).unwrap();
        Decision {
            chosen,
            mode: Mode::Fallback,
        }
    }
}

impl Lemma2Strategy {
    fn decide(&self, game: &Game, s: &GameState, cut: Option<&QuotientCut>, offer: &Offer) -> Decision {
        if let Some(&e) = offer.edges().iter().find(|&&e| game.is_dead(s, e)) {
            Decision {
                chosen: e,
                mode: Mode::Outside,
            }
        } else if let Some(cut) = cut {
            let (chosen, c) = cut_reply(game, s, offer, cut);
            Decision {
                chosen,
                mode: Mode::Committed(c),
            }
        } else if let Some(d) = self.creates_cut(game, s, offer) {
            d
        } else if let Some(&e) = offer.edges().iter().find(|&&e| {
            let (a, b) = game.ends(e);
            !self.is_anchor(a) && !self.is_anchor(b)
        }) {
            Decision {
                chosen: e,
                mode: Mode::Outside,
            }
        } else if let Some(d) = self.case_analysis(game, s, offer) {
            d
        } else {
            self.fallback(game, s, offer)
        }
    }
}

impl ClientStrategy for Lemma2Strategy {
    fn respond(&self, game: &Game, s: &GameState, offer: &Offer) -> Result<Decision> {
        let d = self.decide(game, s, game.winning_cut(s).as_ref(), offer);
        log::trace!("{}", super::trace_line(game.round_number(s) + 1, offer, &d));
        Ok(d)
    }

    fn plays_cut_discipline(&self) -> bool {
        true
    }

    fn takes_dead_edges(&self) -> bool {
        true
    }

    fn at<'a>(&'a self, game: &'a Game, s: &'a GameState) -> Responder<'a> {
        let cut = game.winning_cut(s);
        Box::new(move |o| Ok(self.decide(game, s, cut.as_ref(), o)))
    }
}
