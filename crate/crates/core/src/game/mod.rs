//! Rules of the connectivity Waiter-Client game.
//!
//! Each round Waiter offers `q + 1` free edges, Client keeps one, and the
//! rest are discarded. Waiter wins iff Client's edges end up connecting all
//! vertices. A [`GameState`] stores the free set and the component partition
//! of Client's edges; which edges Client actually holds never matters.

mod edgeset;
pub mod quotient;
mod transcript;

pub use edgeset::{EdgeSet, EdgeSetIter, MAX_EDGES};
pub use quotient::{mask_classes, AbstractOffer, Choice, ClassMask, Quotient, QuotientCut, QuotientKey, MAX_CLASSES};
pub use transcript::{Round, Transcript};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{EdgeIdx, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Waiter,
    Client,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Waiter => Side::Client,
            Side::Client => Side::Waiter,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Waiter => "waiter",
            Side::Client => "client",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "waiter" => Ok(Side::Waiter),
            "client" => Ok(Side::Client),
            _ => Err(Error::Parse(format!("unknown side {s:?} (waiter|client)"))),
        }
    }
}

/// How aggressively Waiter offers are collapsed before search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruningLevel {
    /// Every `(q+1)`-subset of the free edges.
    None,
    /// Offers equal up to interchangeable edges (dead edges, and live edges
    /// joining the same two components) appear once.
    #[default]
    DeadCollapse,
    /// Additionally drops offers that let Client isolate a component by
    /// refusing its edges.
    Obs1,
}

impl fmt::Display for PruningLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PruningLevel::None => "none",
            PruningLevel::DeadCollapse => "dead-collapse",
            PruningLevel::Obs1 => "obs1",
        })
    }
}

impl FromStr for PruningLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(PruningLevel::None),
            "dead-collapse" => Ok(PruningLevel::DeadCollapse),
            "obs1" => Ok(PruningLevel::Obs1),
            _ => Err(Error::Parse(format!(
                "unknown pruning level {s:?} (none|dead-collapse|obs1)"
            ))),
        }
    }
}

/// `q + 1` distinct free edges, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Offer(SmallVec<[EdgeIdx; 8]>);

impl Offer {
    pub fn new(edges: impl IntoIterator<Item = EdgeIdx>) -> Result<Self> {
        let mut v: SmallVec<[EdgeIdx; 8]> = edges.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::IllegalMove(format!("offer {v:?} repeats an edge")));
        }
        Ok(Offer(v))
    }

    pub fn edges(&self) -> &[EdgeIdx] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: EdgeIdx) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn as_set(&self) -> EdgeSet {
        EdgeSet::from_edges(self.0.iter().copied())
    }
}

impl fmt::Display for Offer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

pub type Parts = SmallVec<[u8; 24]>;

/// Position at a round boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    pub free: EdgeSet,
    /// Class label per vertex; labels are ranks of classes ordered by their
    /// smallest member.
    pub parts: Parts,
    pub chosen_count: usize,
}

impl GameState {
    pub fn class_count(&self) -> usize {
        self.parts.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Classes as vertex lists, in label order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (v, &c) in self.parts.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }
}

/// Client's proof of an already-won position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClientWinCertificate {
    /// A component with at most `q` outgoing free edges: Client refuses all
    /// of them.
    SmallCut {
        component: Vec<usize>,
        outgoing: Vec<EdgeIdx>,
    },
    /// Two components with exactly `q + 1` outgoing free edges each, a free
    /// edge between them, and at least one other component.
    AdjacentPair {
        first: Vec<usize>,
        second: Vec<usize>,
        link: EdgeIdx,
    },
}

/// A board: instance plus precomputed edge endpoints.
#[derive(Clone, Debug)]
pub struct Game {
    inst: Arc<Instance>,
    ends: Vec<(u8, u8)>,
}

impl Game {
    /// Validates the instance and sizes (at most [`MAX_EDGES`] edges and 255
    /// vertices).
    pub fn new(inst: Instance) -> Result<Self> {
        Self::from_arc(Arc::new(inst))
    }

    pub fn from_arc(inst: Arc<Instance>) -> Result<Self> {
        if let Err(v) = inst.verify() {
            let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            return Err(Error::InvalidInstance(msg.join("; ")));
        }
        if inst.graph.edge_count() > MAX_EDGES {
            return Err(Error::TooLarge(format!(
                "board has {} edges, the game engine supports at most {MAX_EDGES}",
                inst.graph.edge_count()
            )));
        }
        if inst.n() > 255 {
            return Err(Error::TooLarge(format!(
                "board has {} vertices, at most 255 supported",
                inst.n()
            )));
        }
        let ends = inst.graph.edges().iter().map(|&(a, b)| (a as u8, b as u8)).collect();
        Ok(Self { inst, ends })
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn instance_arc(&self) -> &Arc<Instance> {
        &self.inst
    }

    pub fn n(&self) -> usize {
        self.inst.n()
    }

    pub fn q(&self) -> usize {
        self.inst.q
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    #[inline]
    pub fn ends(&self, e: EdgeIdx) -> (usize, usize) {
        let (a, b) = self.ends[e];
        (a as usize, b as usize)
    }

    pub fn rounds(&self) -> usize {
        self.n() - 1
    }

    pub fn initial_state(&self) -> GameState {
        GameState {
            free: EdgeSet::full(self.edge_count()),
            parts: (0..self.n()).map(|v| v as u8).collect(),
            chosen_count: 0,
        }
    }

    pub fn round_number(&self, s: &GameState) -> usize {
        (self.edge_count() - s.free.len()) / (self.q() + 1)
    }

    #[inline]
    pub fn is_dead(&self, s: &GameState, e: EdgeIdx) -> bool {
        let (a, b) = self.ends[e];
        s.parts[a as usize] == s.parts[b as usize]
    }

    pub fn check_offer(&self, s: &GameState, o: &Offer) -> Result<()> {
        if o.len() != self.q() + 1 {
            return Err(Error::IllegalMove(format!(
                "offer has {} edges, expected q+1 = {}",
                o.len(),
                self.q() + 1
            )));
        }
        if let Some(&e) = o.edges().iter().find(|&&e| !s.free.contains(e)) {
            return Err(Error::IllegalMove(if e >= self.edge_count() {
                format!("edge {e} does not exist")
            } else {
                format!("edge {e} is not free")
            }));
        }
        Ok(())
    }

    /// Plays one round; `s` is left untouched.
    pub fn apply_round(&self, s: &GameState, o: &Offer, chosen: EdgeIdx) -> Result<GameState> {
        self.check_offer(s, o)?;
        if !o.contains(chosen) {
            return Err(Error::IllegalMove(format!("chosen edge {chosen} is not in offer {o}")));
        }
        Ok(self.apply_unchecked(s, o.as_set(), chosen))
    }

    pub(crate) fn apply_unchecked(&self, s: &GameState, offer: EdgeSet, chosen: EdgeIdx) -> GameState {
        let mut parts = s.parts.clone();
        let (a, b) = self.ends[chosen];
        let (ca, cb) = (parts[a as usize], parts[b as usize]);
        if ca != cb {
            let (keep, drop) = (ca.min(cb), ca.max(cb));
            for x in parts.iter_mut() {
                if *x == drop {
                    *x = keep;
                } else if *x > drop {
                    *x -= 1;
                }
            }
        }
        GameState {
            free: s.free.difference(offer),
            parts,
            chosen_count: s.chosen_count + 1,
        }
    }

    /// `None` while free edges remain; otherwise Waiter iff Client's graph is
    /// connected.
    pub fn terminal_winner(&self, s: &GameState) -> Option<Side> {
        if !s.free.is_empty() {
            return None;
        }
        Some(if s.class_count() == 1 {
            Side::Waiter
        } else {
            Side::Client
        })
    }

    /// Outgoing free edge count per class.
    pub fn class_outs(&self, s: &GameState) -> Vec<usize> {
        let mut out = vec![0; s.class_count()];
        for e in s.free {
            let (a, b) = self.ends[e];
            let (ca, cb) = (s.parts[a as usize], s.parts[b as usize]);
            if ca != cb {
                out[ca as usize] += 1;
                out[cb as usize] += 1;
            }
        }
        out
    }

    /// A small-cut or adjacent-pair certificate when one holds at `s`.
    pub fn client_cut(&self, s: &GameState) -> Option<ClientWinCertificate> {
        let p = s.class_count();
        if p < 2 {
            return None;
        }
        let q = self.q();
        let outs = self.class_outs(s);
        let classes = s.classes();
        if let Some(c) = outs.iter().position(|&o| o <= q) {
            let outgoing = s
                .free
                .iter()
                .filter(|&e| {
                    let (a, b) = self.ends[e];
                    (s.parts[a as usize] as usize == c) != (s.parts[b as usize] as usize == c)
                })
                .collect();
            return Some(ClientWinCertificate::SmallCut {
                component: classes[c].clone(),
                outgoing,
            });
        }
        if p < 3 {
            return None;
        }
        for e in s.free {
            let (a, b) = self.ends[e];
            let (ca, cb) = (s.parts[a as usize] as usize, s.parts[b as usize] as usize);
            if ca != cb && outs[ca] == q + 1 && outs[cb] == q + 1 {
                let (x, y) = (ca.min(cb), ca.max(cb));
                return Some(ClientWinCertificate::AdjacentPair {
                    first: classes[x].clone(),
                    second: classes[y].clone(),
                    link: e,
                });
            }
        }
        None
    }

    /// A cut over sets of components that wins for Client, if any. Boards
    /// with more than [`MAX_CLASSES`] components report none.
    pub fn winning_cut(&self, s: &GameState) -> Option<QuotientCut> {
        self.quotient(s).ok()?.client_cut(self.q())
    }

    /// Membership flags for the vertices in the classes of `mask`.
    pub fn mask_members(&self, s: &GameState, mask: ClassMask) -> Vec<bool> {
        s.parts
            .iter()
            .map(|&c| (c as usize) < 16 && mask >> c & 1 == 1)
            .collect()
    }

    /// The quotient board of `s`.
    pub fn quotient(&self, s: &GameState) -> Result<Quotient> {
        let p = s.class_count();
        if p > MAX_CLASSES {
            return Err(Error::TooLarge(format!(
                "{p} components, the quotient supports at most {MAX_CLASSES}"
            )));
        }
        let mut dead = 0;
        let mut m = [[0u8; MAX_CLASSES]; MAX_CLASSES];
        for e in s.free {
            let (a, b) = self.ends[e];
            let (ca, cb) = (s.parts[a as usize] as usize, s.parts[b as usize] as usize);
            if ca == cb {
                dead += 1;
            } else {
                m[ca][cb] += 1;
                m[cb][ca] += 1;
            }
        }
        Ok(Quotient::from_matrix(p, m, dead))
    }

    /// The abstract form of a concrete offer.
    pub fn abstract_offer(&self, s: &GameState, o: &Offer) -> AbstractOffer {
        let mut pairs: SmallVec<[(u8, u8, u8); 8]> = SmallVec::new();
        let mut dead = 0u8;
        for &e in o.edges() {
            let (a, b) = self.ends[e];
            let (ca, cb) = (s.parts[a as usize], s.parts[b as usize]);
            if ca == cb {
                dead += 1;
                continue;
            }
            let key = (ca.min(cb), ca.max(cb));
            match pairs.iter_mut().find(|p| (p.0, p.1) == key) {
                Some(p) => p.2 += 1,
                None => pairs.push((key.0, key.1, 1)),
            }
        }
        pairs.sort_unstable();
        AbstractOffer { pairs, dead }
    }

    /// The abstract reply of choosing edge `e`.
    pub fn abstract_choice(&self, s: &GameState, e: EdgeIdx) -> Choice {
        let (a, b) = self.ends[e];
        let (ca, cb) = (s.parts[a as usize], s.parts[b as usize]);
        if ca == cb {
            Choice::Discard
        } else {
            Choice::Merge(ca.min(cb), ca.max(cb))
        }
    }

    /// Lowest-indexed concrete offer with the given abstract form.
    pub fn concrete_offer(&self, s: &GameState, o: &AbstractOffer) -> Result<Offer> {
        let mut picked: SmallVec<[EdgeIdx; 8]> = SmallVec::new();
        let mut need: SmallVec<[(u8, u8, u8); 8]> = o.pairs.clone();
        let mut dead = o.dead;
        for e in s.free {
            match self.abstract_choice(s, e) {
                Choice::Discard if dead > 0 => {
                    dead -= 1;
                    picked.push(e);
                }
                Choice::Merge(a, b) => {
                    if let Some(p) = need.iter_mut().find(|p| (p.0, p.1) == (a, b) && p.2 > 0) {
                        p.2 -= 1;
                        picked.push(e);
                    }
                }
                _ => {}
            }
        }
        if dead > 0 || need.iter().any(|p| p.2 > 0) {
            return Err(Error::IllegalMove(format!(
                "abstract offer {o:?} does not fit the free edges"
            )));
        }
        Offer::new(picked)
    }

    /// Lowest-indexed edge of `o` realizing `choice`.
    pub fn concrete_choice(&self, s: &GameState, o: &Offer, choice: Choice) -> Option<EdgeIdx> {
        o.edges()
            .iter()
            .copied()
            .find(|&e| self.abstract_choice(s, e) == choice)
    }

    /// Representative Waiter offers, lexicographic by edge index.
    pub fn offer_classes(&self, s: &GameState, level: PruningLevel) -> Result<Vec<Offer>> {
        let k = self.q() + 1;
        if s.free.len() < k {
            return Err(Error::Precondition(format!(
                "{} free edges, an offer needs q+1 = {k}",
                s.free.len()
            )));
        }
        let mut out = match level {
            PruningLevel::None => {
                let free: Vec<EdgeIdx> = s.free.iter().collect();
                let mut out = Vec::new();
                let mut cur = Vec::with_capacity(k);
                subsets(&free, k, 0, &mut cur, &mut |c| {
                    out.push(Offer::new(c.iter().copied()).unwrap())
                });
                out
            }
            _ => {
                let quotient = self.quotient(s)?;
                quotient
                    .offers(self.q(), level)
                    .iter()
                    .map(|o| self.concrete_offer(s, o))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        out.sort();
        Ok(out)
    }
}

pub(crate) fn subsets<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, f: &mut dyn FnMut(&[T])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    let need = k - cur.len();
    for i in start..items.len() {
        if items.len() - i < need {
            break;
        }
        cur.push(items[i]);
        subsets(items, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Validates `inst` and returns the board with its opening position.
pub fn new_game(inst: Instance) -> Result<(Game, GameState)> {
    let g = Game::new(inst)?;
    let s = g.initial_state();
    Ok((g, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_gq;
    use crate::graph::{Decomposition, Graph};

    fn g2() -> Game {
        Game::new(build_gq(2).unwrap()).unwrap()
    }

    fn k4() -> Game {
        let g = Graph::complete(4);
        // edges: 01 02 03 12 13 23; paths 0-1-2-3 style split
        let inst = Instance {
            graph: g,
            decomposition: Decomposition::new(vec![vec![0, 3, 5], vec![1, 2, 4]]),
            q: 1,
            anchors: None,
        };
        Game::new(inst).unwrap()
    }

    #[test]
    fn new_game_on_g2() {
        let (g, s) = new_game(build_gq(2).unwrap()).unwrap();
        assert_eq!(s.free.len(), 24);
        assert_eq!(s.class_count(), 9);
        assert_eq!(s.chosen_count, 0);
        assert_eq!(g.rounds(), 8);
    }

    #[test]
    fn invalid_instance_rejected() {
        let mut inst = build_gq(2).unwrap();
        inst.decomposition.trees[0].pop();
        assert!(matches!(new_game(inst), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn apply_round_merges_and_shrinks() {
        let g = g2();
        let s = g.initial_state();
        // three edges between non-anchor vertices
        let outer: Vec<EdgeIdx> = (0..24)
            .filter(|&e| {
                let (a, b) = g.ends(e);
                ![0, 3, 6].contains(&a) && ![0, 3, 6].contains(&b)
            })
            .take(3)
            .collect();
        let o = Offer::new(outer.clone()).unwrap();
        let t = g.apply_round(&s, &o, outer[1]).unwrap();
        assert_eq!(t.free.len(), 21);
        let (a, b) = g.ends(outer[1]);
        assert_eq!(t.parts[a], t.parts[b]);
        assert_eq!(t.class_count(), 8);
        assert_eq!(s, g.initial_state());
        assert!(g.apply_round(&t, &o, outer[0]).is_err());
        assert!(g.apply_round(&s, &o, 23).is_err());
    }

    #[test]
    fn dead_choice_keeps_parts() {
        let g = k4();
        let s0 = g.initial_state();
        let s1 = g.apply_round(&s0, &Offer::new([0, 5]).unwrap(), 0).unwrap();
        let s2b = g.apply_round(&s1, &Offer::new([3, 4]).unwrap(), 3).unwrap();
        let s3 = g.apply_round(&s2b, &Offer::new([1, 2]).unwrap(), 1).unwrap();
        assert_eq!(s3.parts, s2b.parts);
        assert_eq!(s3.chosen_count, 3);
    }

    #[test]
    fn terminal_rule() {
        let g = k4();
        let s0 = g.initial_state();
        assert_eq!(g.terminal_winner(&s0), None);
        let s1 = g.apply_round(&s0, &Offer::new([0, 1]).unwrap(), 0).unwrap();
        let s2 = g.apply_round(&s1, &Offer::new([3, 4]).unwrap(), 3).unwrap();
        let s3 = g.apply_round(&s2, &Offer::new([2, 5]).unwrap(), 5).unwrap();
        assert_eq!(g.terminal_winner(&s3), Some(Side::Waiter));
        let s3b = g.apply_round(&s2, &Offer::new([2, 5]).unwrap(), 2).unwrap();
        // 0-1, 1-2, 0-3: connected as well
        assert_eq!(g.terminal_winner(&s3b), Some(Side::Waiter));
        let t1 = g.apply_round(&s0, &Offer::new([2, 4]).unwrap(), 4).unwrap();
        let t2 = g.apply_round(&t1, &Offer::new([1, 5]).unwrap(), 5).unwrap();
        // {1,2,3} and {0}; Client answers 01/12 with the dead 12
        let t3 = g.apply_round(&t2, &Offer::new([0, 3]).unwrap(), 3).unwrap();
        assert_eq!(g.terminal_winner(&t3), Some(Side::Client));
    }

    #[test]
    fn no_cut_at_start_of_g2() {
        let g = g2();
        assert_eq!(g.client_cut(&g.initial_state()), None);
    }

    #[test]
    fn small_cut_when_vertex_loses_edges() {
        let g = g2();
        let s = g.initial_state();
        // offer two edges at anchor 0 plus one elsewhere, Client takes the other one
        let at0: Vec<EdgeIdx> = (0..24).filter(|&e| g.ends(e).0 == 0).collect();
        let far = (0..24).find(|&e| g.ends(e).0 != 0 && g.ends(e).1 != 0).unwrap();
        let o = Offer::new([at0[0], at0[1], far]).unwrap();
        let t = g.apply_round(&s, &o, far).unwrap();
        match g.client_cut(&t) {
            Some(ClientWinCertificate::SmallCut { component, outgoing }) => {
                assert_eq!(component, vec![0]);
                assert_eq!(outgoing.len(), 2);
            }
            other => panic!("expected small cut, got {other:?}"),
        }
    }

    #[test]
    fn adjacent_pair_certificate() {
        let g = g2();
        let s = g.initial_state();
        // u0 offers u0v0, u0w0 and u0u1; Client takes u0u1 -> v0, w0 drop to degree 3
        let e = |a, b| g.instance().graph.find_edge(a, b).unwrap();
        let o = Offer::new([e(0, 3), e(0, 6), e(0, 1)]).unwrap();
        let t = g.apply_round(&s, &o, e(0, 1)).unwrap();
        match g.client_cut(&t) {
            Some(ClientWinCertificate::AdjacentPair { first, second, link }) => {
                assert_eq!((first, second), (vec![3], vec![6]));
                assert_eq!(link, e(3, 6));
            }
            other => panic!("expected adjacent pair, got {other:?}"),
        }
    }

    #[test]
    fn forced_offer_when_exactly_q_plus_one_free() {
        let g = k4();
        let s0 = g.initial_state();
        let s1 = g.apply_round(&s0, &Offer::new([0, 1]).unwrap(), 0).unwrap();
        let s2 = g.apply_round(&s1, &Offer::new([2, 3]).unwrap(), 2).unwrap();
        for level in [PruningLevel::None, PruningLevel::DeadCollapse] {
            let offers = g.offer_classes(&s2, level).unwrap();
            assert_eq!(offers, vec![Offer::new([4, 5]).unwrap()]);
        }
        // vertex 2 keeps a single free edge, so obs1 rejects the forced offer
        assert!(g.offer_classes(&s2, PruningLevel::Obs1).unwrap().is_empty());
        let s3 = g.apply_round(&s2, &Offer::new([4, 5]).unwrap(), 4).unwrap();
        assert!(g.offer_classes(&s3, PruningLevel::None).is_err());
    }

    #[test]
    fn obs1_drops_two_edges_at_an_anchor() {
        let g = g2();
        let s = g.initial_state();
        let all = g.offer_classes(&s, PruningLevel::DeadCollapse).unwrap();
        assert_eq!(all.len(), 2024);
        let kept = g.offer_classes(&s, PruningLevel::Obs1).unwrap();
        assert!(kept.len() < all.len());
        for o in &kept {
            for anchor in [0, 3, 6] {
                let t = o.edges().iter().filter(|&&e| {
                    let (a, b) = g.ends(e);
                    a == anchor || b == anchor
                });
                let t = t.count();
                assert!(
                    t == 0 || t == 1 || t == 3,
                    "offer {o} uses {t} edges at anchor {anchor}"
                );
            }
        }
        // two edges at u0 plus one elsewhere is gone
        let e = |a, b| g.instance().graph.find_edge(a, b).unwrap();
        let bad = Offer::new([e(0, 1), e(0, 2), e(4, 5)]).unwrap();
        assert!(all.contains(&bad) && !kept.contains(&bad));
    }

    #[test]
    fn concrete_and_abstract_offers_agree() {
        let g = g2();
        let s = g.initial_state();
        let e = |a, b| g.instance().graph.find_edge(a, b).unwrap();
        let o = Offer::new([e(1, 2), e(4, 5), e(7, 8)]).unwrap();
        let t = g.apply_round(&s, &o, e(1, 2)).unwrap();
        let q = g.quotient(&t).unwrap();
        assert_eq!(q.classes(), 8);
        assert_eq!(q.dead(), 0);
        for ao in q.offers(2, PruningLevel::DeadCollapse).iter().take(50) {
            let c = g.concrete_offer(&t, ao).unwrap();
            assert_eq!(&g.abstract_offer(&t, &c), ao);
        }
    }
}
