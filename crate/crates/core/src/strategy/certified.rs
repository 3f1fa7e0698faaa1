//! Players that read their moves from a solver certificate.

use rustc_hash::FxHashMap;

use super::discipline::cut_reply;
use super::{ClientStrategy, Decision, Mode, WaiterStrategy};
use crate::error::{Error, Result};
use crate::game::{ClassMask, Game, GameState, Offer, QuotientCut, Side};
use crate::solver::{CertMove, Certificate};

fn load(cert: &Certificate, game: &Game) -> Result<FxHashMap<String, CertMove>> {
    cert.check_instance(game.instance())?;
    Ok(cert.records.iter().map(|r| (r.key.clone(), r.mv.clone())).collect())
}

fn position_key(game: &Game, s: &GameState) -> Result<String> {
    Ok(hex::encode(game.quotient(s)?.key().as_slice()))
}

fn to_mask(classes: &[u8]) -> ClassMask {
    classes.iter().fold(0, |m, &c| m | 1 << c)
}

fn missing(key: &str) -> Error {
    Error::Certificate(format!("certificate has no record for position {key}"))
}

pub struct CertifiedClient {
    moves: FxHashMap<String, CertMove>,
}

impl CertifiedClient {
    pub fn new(cert: &Certificate, game: &Game) -> Result<Self> {
        if cert.side != Side::Client {
            return Err(Error::Certificate("not a Client certificate".into()));
        }
        Ok(Self {
            moves: load(cert, game)?,
        })
    }

    fn by_cut(game: &Game, s: &GameState, offer: &Offer, cut: QuotientCut) -> Decision {
        Decision {
            chosen: cut_reply(game, s, offer, &cut).0,
            mode: Mode::Certified,
        }
    }
}

impl ClientStrategy for CertifiedClient {
    fn respond(&self, game: &Game, s: &GameState, offer: &Offer) -> Result<Decision> {
        game.check_offer(s, offer)?;
        let key = position_key(game, s)?;
        match self.moves.get(&key) {
            Some(CertMove::Replies { replies }) => {
                let ao = game.abstract_offer(s, offer);
                let r = replies
                    .iter()
                    .find(|r| r.offer == ao)
                    .ok_or_else(|| Error::Certificate(format!("no reply to offer {offer} at {key}")))?;
                let chosen = game
                    .concrete_choice(s, offer, r.choice)
                    .ok_or_else(|| Error::Certificate(format!("reply {:?} does not fit offer {offer}", r.choice)))?;
                Ok(Decision {
                    chosen,
                    mode: Mode::Certified,
                })
            }
            Some(CertMove::SmallCut { classes }) => {
                Ok(Self::by_cut(game, s, offer, QuotientCut::SmallCut(to_mask(classes))))
            }
            Some(CertMove::AdjacentPair { first, second }) => Ok(Self::by_cut(
                game,
                s,
                offer,
                QuotientCut::AdjacentPair(to_mask(first), to_mask(second)),
            )),
            Some(CertMove::FewRounds) => Ok(Self::by_cut(game, s, offer, QuotientCut::FewRounds)),
            Some(CertMove::Offer { .. }) => Err(Error::Certificate(format!("record {key} is a Waiter move"))),
            // past a cut marker the cut persists and is recomputed
            None => match game.quotient(s)?.client_cut(game.q()) {
                Some(cut) => Ok(Self::by_cut(game, s, offer, cut)),
                None => Err(missing(&key)),
            },
        }
    }

    fn plays_cut_discipline(&self) -> bool {
        true
    }
}

pub struct CertifiedWaiter {
    moves: FxHashMap<String, CertMove>,
}

impl CertifiedWaiter {
    pub fn new(cert: &Certificate, game: &Game) -> Result<Self> {
        if cert.side != Side::Waiter {
            return Err(Error::Certificate("not a Waiter certificate".into()));
        }
        Ok(Self {
            moves: load(cert, game)?,
        })
    }
}

impl WaiterStrategy for CertifiedWaiter {
    fn offer(&self, game: &Game, s: &GameState) -> Result<Offer> {
        let key = position_key(game, s)?;
        match self.moves.get(&key) {
            Some(CertMove::Offer { offer }) => game.concrete_offer(s, offer),
            Some(_) => Err(Error::Certificate(format!("record {key} is a Client move"))),
            None if s.class_count() == 1 && s.free.len() > game.q() => Offer::new(s.free.iter().take(game.q() + 1)),
            None => Err(missing(&key)),
        }
    }
}

pub enum OptimalStrategy {
    Client(CertifiedClient),
    Waiter(CertifiedWaiter),
}

/// Wraps a certificate as a player for the side it certifies.
pub fn optimal_strategy(cert: &Certificate, game: &Game) -> Result<OptimalStrategy> {
    Ok(match cert.side {
        Side::Client => OptimalStrategy::Client(CertifiedClient::new(cert, game)?),
        Side::Waiter => OptimalStrategy::Waiter(CertifiedWaiter::new(cert, game)?),
    })
}
