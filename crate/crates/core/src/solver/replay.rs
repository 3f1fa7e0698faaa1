//! Certificate checker. It plays the certified side's recorded moves
//! against every opposing move on concrete positions and shares no code
//! with the search: keys, class multiplicities, offer enumeration and the
//! follow-up play for cut markers are all computed here from the rules.

use std::collections::BTreeMap;

use rustc_hash::{FxHashMap, FxHashSet};

use super::certificate::{CertMove, Certificate};
use crate::error::{Error, Result};
use crate::game::{AbstractOffer, Choice, EdgeSet, Game, GameState, Side};
use crate::graph::EdgeIdx;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplayReport {
    /// Distinct positions checked.
    pub positions: usize,
    /// Opposing moves tried.
    pub branches: usize,
    /// Positions settled by a marker or by the game ending.
    pub leaves: usize,
}

/// Checks that `cert` wins for its side on `game` against all opposing play.
pub fn replay_certificate(game: &Game, cert: &Certificate) -> Result<ReplayReport> {
    cert.check_instance(game.instance())?;
    let index = cert.index();
    let mut r = Replayer {
        game,
        q: game.q(),
        index,
        done: FxHashSet::default(),
        report: ReplayReport::default(),
    };
    let s = game.initial_state();
    match cert.side {
        Side::Waiter => r.waiter(&s)?,
        Side::Client => r.client(&s)?,
    }
    Ok(r.report)
}

struct Replayer<'a> {
    game: &'a Game,
    q: usize,
    index: FxHashMap<&'a str, &'a CertMove>,
    done: FxHashSet<Vec<u8>>,
    report: ReplayReport,
}

/// Class-level view of a concrete position.
struct View {
    p: usize,
    /// `(a, b) -> free edges between classes a < b`, ascending
    pairs: BTreeMap<(u8, u8), Vec<EdgeIdx>>,
    dead: Vec<EdgeIdx>,
}

impl View {
    fn of(game: &Game, s: &GameState) -> View {
        let p = s.parts.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut pairs: BTreeMap<(u8, u8), Vec<EdgeIdx>> = BTreeMap::new();
        let mut dead = Vec::new();
        for e in s.free.iter() {
            let (a, b) = game.ends(e);
            let (x, y) = (s.parts[a], s.parts[b]);
            if x == y {
                dead.push(e);
            } else {
                pairs.entry((x.min(y), x.max(y))).or_default().push(e);
            }
        }
        View { p, pairs, dead }
    }

    fn key(&self) -> Vec<u8> {
        let mut k = vec![self.p as u8];
        k.extend_from_slice(&(self.dead.len() as u16).to_le_bytes());
        for a in 0..self.p {
            for b in a + 1..self.p {
                k.push(self.pairs.get(&(a as u8, b as u8)).map_or(0, |v| v.len() as u8));
            }
        }
        k
    }

    fn free(&self) -> usize {
        self.dead.len() + self.pairs.values().map(Vec::len).sum::<usize>()
    }

    /// Every multiset of `k` free edges up to parallel and dead edges.
    fn offers(&self, k: usize) -> Vec<AbstractOffer> {
        let groups: Vec<((u8, u8), usize)> = self.pairs.iter().map(|(&ab, v)| (ab, v.len())).collect();
        let mut out = Vec::new();
        let mut counts = vec![0usize; groups.len()];
        fn go(
            i: usize,
            left: usize,
            groups: &[((u8, u8), usize)],
            dead: usize,
            counts: &mut Vec<usize>,
            out: &mut Vec<AbstractOffer>,
        ) {
            if i == groups.len() {
                if left <= dead {
                    out.push(AbstractOffer {
                        pairs: groups
                            .iter()
                            .zip(counts.iter())
                            .filter(|(_, &c)| c > 0)
                            .map(|(&((a, b), _), &c)| (a, b, c as u8))
                            .collect(),
                        dead: left as u8,
                    });
                }
                return;
            }
            for c in 0..=groups[i].1.min(left) {
                counts[i] = c;
                go(i + 1, left - c, groups, dead, counts, out);
            }
            counts[i] = 0;
        }
        go(0, k, &groups, self.dead.len(), &mut counts, &mut out);
        out
    }

    /// Lowest-indexed edges realizing `o`.
    fn realize(&self, o: &AbstractOffer) -> Option<EdgeSet> {
        let mut set = EdgeSet::EMPTY;
        for &(a, b, c) in &o.pairs {
            let v = self.pairs.get(&(a, b))?;
            if v.len() < c as usize || c == 0 {
                return None;
            }
            v[..c as usize].iter().for_each(|&e| set.insert(e));
        }
        if self.dead.len() < o.dead as usize {
            return None;
        }
        self.dead[..o.dead as usize].iter().for_each(|&e| set.insert(e));
        Some(set)
    }
}

impl Replayer<'_> {
    fn lookup(&self, key: &[u8]) -> Result<&CertMove> {
        let hex = hex::encode(key);
        self.index
            .get(hex.as_str())
            .copied()
            .ok_or_else(|| Error::Certificate(format!("no record for position {hex}")))
    }

    fn class_of(s: &GameState, game: &Game, e: EdgeIdx) -> (u8, u8) {
        let (a, b) = game.ends(e);
        (s.parts[a], s.parts[b])
    }

    fn waiter(&mut self, s: &GameState) -> Result<()> {
        if s.parts.iter().all(|&c| c == 0) {
            self.report.leaves += 1;
            return Ok(());
        }
        if s.free.is_empty() {
            return Err(Error::Certificate(
                "a line of play ends with Client disconnected".into(),
            ));
        }
        let view = View::of(self.game, s);
        let key = view.key();
        if self.done.contains(&key) {
            return Ok(());
        }
        let CertMove::Offer { offer } = self.lookup(&key)? else {
            return Err(Error::Certificate(format!(
                "record {} is not an offer",
                hex::encode(&key)
            )));
        };
        if offer.size() != self.q + 1 {
            return Err(Error::Certificate(format!("offer {offer:?} does not have q+1 edges")));
        }
        let set = view
            .realize(offer)
            .ok_or_else(|| Error::Certificate(format!("offer {offer:?} is not available at {}", hex::encode(&key))))?;
        self.report.positions += 1;
        for e in set.iter() {
            self.report.branches += 1;
            let child = self.game.apply_round(s, &crate::game::Offer::new(set.iter())?, e)?;
            self.waiter(&child)?;
        }
        self.done.insert(key);
        Ok(())
    }

    fn client(&mut self, s: &GameState) -> Result<()> {
        if s.parts.iter().all(|&c| c == 0) {
            return Err(Error::Certificate("a line of play connects Client's graph".into()));
        }
        if s.free.is_empty() {
            self.report.leaves += 1;
            return Ok(());
        }
        let view = View::of(self.game, s);
        let key = view.key();
        if self.done.contains(&key) {
            return Ok(());
        }
        self.report.positions += 1;
        match self.lookup(&key)?.clone() {
            CertMove::Offer { .. } => {
                return Err(Error::Certificate(format!(
                    "record {} is a Waiter move",
                    hex::encode(&key)
                )));
            }
            CertMove::SmallCut { classes } => {
                let set = self.members(s, &view, &classes)?;
                if self.leaving(s, &set) > self.q || set.iter().all(|&x| x) {
                    return Err(Error::Certificate(format!(
                        "small cut claim fails at {}",
                        hex::encode(&key)
                    )));
                }
                self.report.leaves += 1;
            }
            CertMove::FewRounds => {
                if view.p - 1 <= view.free() / (self.q + 1) {
                    return Err(Error::Certificate(format!(
                        "round count claim fails at {}",
                        hex::encode(&key)
                    )));
                }
                self.report.leaves += 1;
            }
            CertMove::AdjacentPair { first, second } => {
                let a = self.members(s, &view, &first)?;
                let b = self.members(s, &view, &second)?;
                self.check_pair(s, &view, &a, &b)?;
                self.report.leaves += 1;
            }
            CertMove::Replies { replies } => {
                let table: FxHashMap<&AbstractOffer, Choice> = replies.iter().map(|r| (&r.offer, r.choice)).collect();
                for o in view.offers(self.q + 1) {
                    let &choice = table
                        .get(&o)
                        .ok_or_else(|| Error::Certificate(format!("no reply to {o:?} at {}", hex::encode(&key))))?;
                    let set = view.realize(&o).expect("enumerated offers fit");
                    let e = set
                        .iter()
                        .find(|&e| {
                            let (x, y) = Self::class_of(s, self.game, e);
                            match choice {
                                Choice::Discard => x == y,
                                Choice::Merge(a, b) => (x.min(y), x.max(y)) == (a, b),
                            }
                        })
                        .ok_or_else(|| Error::Certificate(format!("reply {choice:?} is not in offer {o:?}")))?;
                    self.report.branches += 1;
                    let child = self.game.apply_round(s, &crate::game::Offer::new(set.iter())?, e)?;
                    self.client(&child)?;
                }
            }
        }
        self.done.insert(key);
        Ok(())
    }

    /// Vertices in the listed classes.
    fn members(&self, s: &GameState, view: &View, classes: &[u8]) -> Result<Vec<bool>> {
        if classes.is_empty() || classes.iter().any(|&c| c as usize >= view.p) {
            return Err(Error::Certificate(format!("bad class list {classes:?}")));
        }
        Ok(s.parts.iter().map(|c| classes.contains(c)).collect())
    }

    /// Free edges with exactly one end in `set`.
    fn leaving(&self, s: &GameState, set: &[bool]) -> usize {
        s.free
            .iter()
            .filter(|&e| {
                let (a, b) = self.game.ends(e);
                set[a] != set[b]
            })
            .count()
    }

    /// Pair condition: disjoint vertex sets, each a union of classes, with
    /// `q + 1` leaving edges each, a free edge between them, and a vertex
    /// outside both.
    fn pair_holds(&self, s: &GameState, a: &[bool], b: &[bool]) -> bool {
        let q = self.q;
        let disjoint = a.iter().zip(b).all(|(x, y)| !(x & y));
        let outside = a.iter().zip(b).any(|(x, y)| !x && !y);
        let whole =
            |set: &[bool]| (0..set.len()).all(|v| (0..set.len()).all(|w| s.parts[v] != s.parts[w] || set[v] == set[w]));
        let linked = s.free.iter().any(|e| {
            let (x, y) = self.game.ends(e);
            (a[x] && b[y]) || (a[y] && b[x])
        });
        disjoint
            && outside
            && whole(a)
            && whole(b)
            && linked
            && self.leaving(s, a) == q + 1
            && self.leaving(s, b) == q + 1
    }

    /// Client's reply to any offer at a pair must leave one of `a`, `b`,
    /// or their union, with at most `q` leaving edges, or keep the pair
    /// condition. Checked here for every offer, which makes the marker an
    /// induction step.
    fn check_pair(&self, s: &GameState, view: &View, a: &[bool], b: &[bool]) -> Result<()> {
        let q = self.q;
        let fail = || Error::Certificate(format!("adjacent pair claim fails at {}", hex::encode(view.key())));
        if !self.pair_holds(s, a, b) {
            return Err(fail());
        }
        let union: Vec<bool> = a.iter().zip(b).map(|(x, y)| x | y).collect();
        for o in view.offers(q + 1) {
            let set = view.realize(&o).expect("enumerated offers fit");
            let e = self.pair_reply(set, a, b);
            let child = self.game.apply_round(s, &crate::game::Offer::new(set.iter())?, e)?;
            let cut_off = |x: &[bool]| {
                let split =
                    (0..x.len()).any(|v| (0..x.len()).any(|w| child.parts[v] == child.parts[w] && x[v] != x[w]));
                !split && self.leaving(&child, x) <= q
            };
            if !(cut_off(a) || cut_off(b) || cut_off(&union) || self.pair_holds(&child, a, b)) {
                return Err(fail());
            }
        }
        Ok(())
    }

    /// Client's play at a pair `a`, `b`.
    fn pair_reply(&self, set: EdgeSet, a: &[bool], b: &[bool]) -> EdgeIdx {
        let q = self.q;
        let leaves = |e: EdgeIdx, x: &[bool]| {
            let (u, v) = self.game.ends(e);
            x[u] != x[v]
        };
        let links = |e: EdgeIdx| leaves(e, a) && leaves(e, b);
        let at_a = set.iter().filter(|&e| leaves(e, a)).count();
        let at_b = set.iter().filter(|&e| leaves(e, b)).count();
        if at_a == q + 1 || at_b == q + 1 {
            if let Some(e) = set.iter().find(|&e| links(e)) {
                return e;
            }
        }
        if let Some(e) = set.iter().find(|&e| !leaves(e, a) && !leaves(e, b)) {
            return e;
        }
        set.iter()
            .find(|&e| !links(e))
            .unwrap_or_else(|| set.iter().next().unwrap())
    }
}
