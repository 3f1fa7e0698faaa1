use std::fmt;
use std::str::FromStr;

use super::{Game, GameState, Offer};
use crate::error::{Error, Result};
use crate::graph::EdgeIdx;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub offer: Offer,
    pub chosen: EdgeIdx,
}

/// A game record. Text form: one `offer: i,j,k chose: j` line per round.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub rounds: Vec<Round>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, offer: Offer, chosen: EdgeIdx) {
        self.rounds.push(Round { offer, chosen });
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Every intermediate state, starting with the opening position. Fails
    /// on the first illegal round, naming it.
    pub fn replay(&self, game: &Game) -> Result<Vec<GameState>> {
        let mut states = vec![game.initial_state()];
        for (i, r) in self.rounds.iter().enumerate() {
            let next = game
                .apply_round(states.last().unwrap(), &r.offer, r.chosen)
                .map_err(|e| Error::IllegalMove(format!("round {}: {e}", i + 1)))?;
            states.push(next);
        }
        Ok(states)
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rounds {
            writeln!(f, "offer: {} chose: {}", r.offer, r.chosen)?;
        }
        Ok(())
    }
}

impl FromStr for Transcript {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut t = Transcript::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || {
                Error::Parse(format!(
                    "line {}: expected \"offer: i,j,.. chose: j\", got {line:?}",
                    lineno + 1
                ))
            };
            let rest = line.strip_prefix("offer:").ok_or_else(bad)?;
            let (offer, chosen) = rest.split_once("chose:").ok_or_else(bad)?;
            let edges = offer
                .split(',')
                .map(|x| x.trim().parse::<EdgeIdx>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            let chosen = chosen.trim().parse::<EdgeIdx>().map_err(|_| bad())?;
            t.push(Offer::new(edges)?, chosen);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_gq;

    #[test]
    fn parse_and_print() {
        let text = "offer: 3,1,2 chose: 2\n# note\n\noffer: 4,5,6 chose: 6\n";
        let t: Transcript = text.parse().unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.to_string(), "offer: 1,2,3 chose: 2\noffer: 4,5,6 chose: 6\n");
        assert!("offer 1,2 chose 1".parse::<Transcript>().is_err());
        assert!("offer: 1,x chose: 1".parse::<Transcript>().is_err());
    }

    #[test]
    fn replay_reports_bad_round() {
        let g = Game::new(build_gq(2).unwrap()).unwrap();
        let t: Transcript = "offer: 0,1,2 chose: 1\noffer: 1,3,4 chose: 3\n".parse().unwrap();
        let err = t.replay(&g).unwrap_err().to_string();
        assert!(err.contains("round 2"), "{err}");
    }
}
