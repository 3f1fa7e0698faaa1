//! The quotient board: Client's components as super-vertices, free edges
//! between them as multiplicities, and a count of dead free edges.
//!
//! Free edges joining the same two components stay parallel under every
//! future merge, and dead edges stay dead, so the game value of a position
//! only depends on this quotient. Classes are kept ordered by smallest
//! member vertex; merging `a < b` keeps position `a` and closes the gap.
//!
//! Sets of classes are bit masks over class positions.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::PruningLevel;

pub const MAX_CLASSES: usize = 16;

/// Set of class positions.
pub type ClassMask = u16;

/// Entries kept per thread by [`Quotient::client_cut`] before it forgets.
const CUT_CACHE_LIMIT: usize = 1 << 20;

/// Boards with more classes only look for cuts around single classes.
const SUBSET_MAX_CLASSES: usize = 12;

/// `(a, b, count)` with `a < b`: `count` offered edges between classes.
pub type PairCount = (u8, u8, u8);

/// A Waiter offer up to interchangeable edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct AbstractOffer {
    pub pairs: SmallVec<[PairCount; 8]>,
    pub dead: u8,
}

impl AbstractOffer {
    pub fn size(&self) -> usize {
        self.dead as usize + self.pairs.iter().map(|p| p.2 as usize).sum::<usize>()
    }

    /// Distinct Client replies: one merge per offered class pair, plus a
    /// discard when a dead edge is offered.
    pub fn choices(&self) -> SmallVec<[Choice; 8]> {
        let mut out: SmallVec<[Choice; 8]> = self.pairs.iter().map(|&(a, b, _)| Choice::Merge(a, b)).collect();
        if self.dead > 0 {
            out.push(Choice::Discard);
        }
        out
    }

    /// Offered edges with an endpoint in class `c`.
    pub fn touching(&self, c: u8) -> usize {
        self.pairs
            .iter()
            .filter(|&&(a, b, _)| a == c || b == c)
            .map(|p| p.2 as usize)
            .sum()
    }
}

/// Client's reply to an abstract offer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Choice {
    Merge(u8, u8),
    Discard,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quotient {
    p: usize,
    dead: u16,
    m: [[u8; MAX_CLASSES]; MAX_CLASSES],
}

impl std::fmt::Debug for Quotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Quotient(p={}, dead={}, pairs=[", self.p, self.dead)?;
        for (a, b, c) in self.live_pairs() {
            write!(f, " {a}-{b}x{c}")?;
        }
        write!(f, " ])")
    }
}

/// Why Client is already winning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientCut {
    /// Proper set of classes with at most `q` free edges leaving it.
    SmallCut(ClassMask),
    /// Two disjoint sets with exactly `q + 1` leaving edges each, joined by
    /// a free edge, together not covering every class.
    AdjacentPair(ClassMask, ClassMask),
    /// More merges needed than rounds left.
    FewRounds,
}

pub fn mask_classes(mask: ClassMask) -> impl Iterator<Item = u8> {
    (0..MAX_CLASSES as u8).filter(move |&c| mask >> c & 1 == 1)
}

impl Quotient {
    /// `pairs` lists `(a, b)` class pairs of live free edges (with
    /// repetition); `dead` counts free edges inside a class.
    pub(crate) fn from_matrix(p: usize, m: [[u8; MAX_CLASSES]; MAX_CLASSES], dead: usize) -> Self {
        Self {
            p,
            dead: dead as u16,
            m,
        }
    }

    pub fn new(p: usize, pairs: impl IntoIterator<Item = (usize, usize)>, dead: usize) -> Self {
        assert!(p <= MAX_CLASSES, "at most {MAX_CLASSES} classes");
        let mut m = [[0u8; MAX_CLASSES]; MAX_CLASSES];
        for (a, b) in pairs {
            debug_assert!(a != b && a < p && b < p);
            m[a][b] += 1;
            m[b][a] += 1;
        }
        Self {
            p,
            dead: dead as u16,
            m,
        }
    }

    #[inline]
    pub fn classes(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn dead(&self) -> usize {
        self.dead as usize
    }

    #[inline]
    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.m[a][b] as usize
    }

    pub fn live(&self) -> usize {
        self.live_pairs().map(|p| p.2 as usize).sum()
    }

    pub fn free(&self) -> usize {
        self.live() + self.dead()
    }

    pub fn out(&self, a: usize) -> usize {
        self.m[a][..self.p].iter().map(|&x| x as usize).sum()
    }

    pub fn outs(&self) -> SmallVec<[usize; MAX_CLASSES]> {
        (0..self.p).map(|a| self.out(a)).collect()
    }

    pub fn live_pairs(&self) -> impl Iterator<Item = PairCount> + '_ {
        (0..self.p).flat_map(move |a| {
            (a + 1..self.p).filter_map(move |b| {
                let c = self.m[a][b];
                (c > 0).then_some((a as u8, b as u8, c))
            })
        })
    }

    /// Key bytes: `p`, dead count (little endian), then the upper triangle
    /// in `(a, b)` lexicographic order.
    pub fn key(&self) -> QuotientKey {
        let mut k = QuotientKey::new();
        k.push(self.p as u8);
        k.extend_from_slice(&self.dead.to_le_bytes());
        for a in 0..self.p {
            for b in a + 1..self.p {
                k.push(self.m[a][b]);
            }
        }
        k
    }

    /// Edges leaving each set of classes, indexed by mask; `None` above
    /// the subset limit.
    pub fn cut_table(&self) -> Option<Vec<u16>> {
        self.with_cut_table(|t| t.map(<[u16]>::to_vec))
    }

    fn with_cut_table<R>(&self, f: impl FnOnce(Option<&[u16]>) -> R) -> R {
        thread_local! {
            static SCRATCH: std::cell::RefCell<Vec<u16>> = const { std::cell::RefCell::new(Vec::new()) };
        }
        if self.p > SUBSET_MAX_CLASSES {
            return f(None);
        }
        SCRATCH.with(|buf| {
            let mut cut = buf.borrow_mut();
            let full = 1usize << self.p;
            cut.clear();
            cut.resize(full, 0);
            let outs = self.outs();
            for set in 1..full {
                let x = set.trailing_zeros() as usize;
                let rest = set & (set - 1);
                let row = &self.m[x];
                let mut inner = 0usize;
                let mut r = rest;
                while r != 0 {
                    inner += row[r.trailing_zeros() as usize] as usize;
                    r &= r - 1;
                }
                cut[set] = (cut[rest] as usize + outs[x] - 2 * inner) as u16;
            }
            f(Some(&cut))
        })
    }

    /// Edges leaving the union of the classes in `mask`.
    pub fn set_cut(&self, mask: ClassMask) -> usize {
        let mut c = 0;
        for a in mask_classes(mask) {
            for b in 0..self.p {
                if mask >> b & 1 == 0 {
                    c += self.m[a as usize][b] as usize;
                }
            }
        }
        c
    }

    /// Proper sets with at most `limit` leaving edges, with their cut.
    fn light_sets(&self, limit: usize) -> SmallVec<[(ClassMask, u16); 32]> {
        self.with_cut_table(|t| match t {
            Some(cut) => (1..cut.len() - 1)
                .filter(|&m| cut[m] as usize <= limit)
                .map(|m| (m as ClassMask, cut[m]))
                .collect(),
            None => (0..self.p)
                .map(|c| (1 << c, self.out(c) as u16))
                .filter(|&(_, o)| o as usize <= limit)
                .collect(),
        })
    }

    /// Client's immediate win certificates, checked in the order small cut,
    /// adjacent pair, round count.
    pub fn client_cut(&self, q: usize) -> Option<QuotientCut> {
        thread_local! {
            static SEEN: std::cell::RefCell<FxHashMap<(u8, QuotientKey), Option<QuotientCut>>> =
                std::cell::RefCell::new(FxHashMap::default());
        }
        if self.p < 2 {
            return None;
        }
        let key = (q as u8, self.key());
        if let Some(hit) = SEEN.with(|m| m.borrow().get(&key).cloned()) {
            return hit;
        }
        let found = self.find_cut(q);
        SEEN.with(|m| {
            let mut m = m.borrow_mut();
            if m.len() >= CUT_CACHE_LIMIT {
                m.clear();
            }
            m.insert(key, found);
        });
        found
    }

    fn find_cut(&self, q: usize) -> Option<QuotientCut> {
        let full: ClassMask = ((1u32 << self.p) - 1) as ClassMask;
        let found = self.with_cut_table(|t| {
            let cut = |m: ClassMask| t.map_or_else(|| self.set_cut(m), |t| t[m as usize] as usize);
            let candidates: SmallVec<[ClassMask; 32]> = match t {
                Some(t) => (1..full).filter(|&m| t[m as usize] as usize <= q + 1).collect(),
                None => (0..self.p).map(|c| 1 << c).filter(|&m| cut(m) <= q + 1).collect(),
            };
            if let Some(&m) = candidates.iter().find(|&&m| cut(m) <= q) {
                return Some(QuotientCut::SmallCut(m));
            }
            // with two classes Waiter offers every edge between them
            if self.p >= 3 {
                for (i, &a) in candidates.iter().enumerate() {
                    for &b in &candidates[i + 1..] {
                        if a & b == 0 && a | b != full && cut(a | b) < 2 * (q + 1) {
                            return Some(QuotientCut::AdjacentPair(a, b));
                        }
                    }
                }
            }
            None
        });
        if found.is_some() {
            return found;
        }
        let rounds = self.free() / (q + 1);
        if self.p - 1 > rounds {
            return Some(QuotientCut::FewRounds);
        }
        None
    }

    /// Removes the offered edges, then applies `choice`.
    pub fn child(&self, offer: &AbstractOffer, choice: Choice) -> Quotient {
        let mut s = self.clone();
        for &(a, b, c) in &offer.pairs {
            s.m[a as usize][b as usize] -= c;
            s.m[b as usize][a as usize] -= c;
        }
        s.dead -= offer.dead as u16;
        if let Choice::Merge(a, b) = choice {
            s.merge(a as usize, b as usize);
        }
        s
    }

    fn merge(&mut self, a: usize, b: usize) {
        debug_assert!(a < b && b < self.p);
        self.dead += self.m[a][b] as u16;
        self.m[a][b] = 0;
        self.m[b][a] = 0;
        for x in 0..self.p {
            if x != a && x != b {
                let v = self.m[a][x] + self.m[b][x];
                self.m[a][x] = v;
                self.m[x][a] = v;
            }
        }
        // close the gap left by b
        for x in 0..self.p {
            for y in b..self.p - 1 {
                self.m[x][y] = self.m[x][y + 1];
            }
            self.m[x][self.p - 1] = 0;
        }
        for y in b..self.p - 1 {
            self.m[y] = self.m[y + 1];
        }
        self.m[self.p - 1] = [0; MAX_CLASSES];
        self.p -= 1;
    }

    /// Abstract offers of exactly `k = q + 1` edges, lexicographic by pair
    /// counts, filtered by `level`.
    pub fn offers(&self, q: usize, level: PruningLevel) -> Vec<AbstractOffer> {
        let k = q + 1;
        let pairs: SmallVec<[PairCount; 64]> = self.live_pairs().collect();
        let mut out = Vec::new();
        let mut cur: SmallVec<[PairCount; 8]> = SmallVec::new();
        let max_dead = self.dead().min(k);
        let light = if level == PruningLevel::Obs1 {
            self.light_sets(2 * q)
        } else {
            SmallVec::new()
        };
        let mut emit = |cur: &SmallVec<[PairCount; 8]>, dead: usize| {
            let offer = AbstractOffer {
                pairs: cur.clone(),
                dead: dead as u8,
            };
            if level == PruningLevel::Obs1 && self.obs1_drops(&offer, q, &light) {
                return;
            }
            out.push(offer);
        };
        fn rec(
            pairs: &[PairCount],
            i: usize,
            need: usize,
            max_dead: usize,
            cur: &mut SmallVec<[PairCount; 8]>,
            emit: &mut dyn FnMut(&SmallVec<[PairCount; 8]>, usize),
        ) {
            if need <= max_dead {
                emit(cur, need);
            }
            if need == 0 {
                return;
            }
            for j in i..pairs.len() {
                let (a, b, m) = pairs[j];
                for c in 1..=(m as usize).min(need) {
                    cur.push((a, b, c as u8));
                    rec(pairs, j + 1, need - c, max_dead, cur, emit);
                    cur.pop();
                }
            }
        }
        rec(&pairs, 0, k, max_dead, &mut cur, &mut emit);
        out
    }

    /// Offers Client can answer by refusing every offered edge leaving some
    /// set `S`, which leaves `S` with at most `q` outgoing edges. `light`
    /// lists candidate sets with their cut.
    pub fn obs1_drops(&self, offer: &AbstractOffer, q: usize, light: &[(ClassMask, u16)]) -> bool {
        if self.p < 2 {
            return false;
        }
        light.iter().any(|&(set, cut)| {
            let k: usize = offer
                .pairs
                .iter()
                .filter(|&&(a, b, _)| (set >> a & 1) != (set >> b & 1))
                .map(|p| p.2 as usize)
                .sum();
            k >= 1 && k <= q && cut as usize - k <= q
        })
    }
}

pub type QuotientKey = SmallVec<[u8; 48]>;
