//! AND/OR search over quotient boards.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use smallvec::SmallVec;

use super::table::Table;
use crate::game::{AbstractOffer, Choice, PruningLevel, Quotient, QuotientKey};

/// Search stopped early: deadline passed or another worker finished.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Interrupted;

pub(crate) type Step<T> = std::result::Result<T, Interrupted>;

pub(crate) struct Limits<'a> {
    pub deadline: Option<Instant>,
    pub abort: &'a AtomicBool,
}

impl Limits<'_> {
    pub fn expired(&self) -> bool {
        self.abort.load(Ordering::Relaxed) || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

pub(crate) struct Engine<'a> {
    pub q: usize,
    pub level: PruningLevel,
    pub use_cuts: bool,
    pub table: &'a Table<QuotientKey>,
    pub limits: Limits<'a>,
    pub nodes: u64,
    pub hits: u64,
}

impl<'a> Engine<'a> {
    fn rounds_left(&self, s: &Quotient) -> usize {
        s.free() / (self.q + 1)
    }

    /// Value without expansion, when one is known.
    pub fn quick(&mut self, s: &Quotient) -> Option<bool> {
        if s.classes() == 1 {
            return Some(true);
        }
        if s.free() == 0 || (self.use_cuts && s.client_cut(self.q).is_some()) {
            return Some(false);
        }
        let v = self.table.get(&s.key());
        if v.is_some() {
            self.hits += 1;
        }
        v
    }

    /// True iff Waiter wins from `s` with Waiter to offer.
    pub fn waiter_wins(&mut self, s: &Quotient) -> Step<bool> {
        if let Some(v) = self.quick(s) {
            return Ok(v);
        }
        self.nodes += 1;
        if self.limits.expired() {
            return Err(Interrupted);
        }
        let offers = self.ordered_offers(s);
        let mut win = false;
        for o in &offers {
            if self.offer_wins(s, o)? {
                win = true;
                break;
            }
        }
        self.table.put(s.key(), win, self.rounds_left(s));
        Ok(win)
    }

    /// Offers in search order: offers concentrated on a least-connected
    /// class first, then fewer dead edges; lexicographic otherwise.
    pub fn ordered_offers(&self, s: &Quotient) -> Vec<AbstractOffer> {
        let mut offers = s.offers(self.q, self.level);
        let outs = s.outs();
        let weak = (0..s.classes()).min_by_key(|&c| outs[c]).unwrap_or(0) as u8;
        offers.sort_by_key(|o| (std::cmp::Reverse(o.touching(weak)), o.dead));
        offers
    }

    /// True iff every Client reply to `o` leaves a Waiter win.
    pub fn offer_wins(&mut self, s: &Quotient, o: &AbstractOffer) -> Step<bool> {
        let choices = o.choices();
        let mut open: SmallVec<[(usize, Quotient); 8]> = SmallVec::new();
        for c in choices {
            let child = s.child(o, c);
            match self.quick(&child) {
                Some(false) => return Ok(false),
                Some(true) => {}
                None => {
                    let weakest = child.outs().iter().copied().min().unwrap_or(0);
                    open.push((weakest, child));
                }
            }
        }
        open.sort_by_key(|p| p.0);
        for (_, child) in &open {
            if !self.waiter_wins(child)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A reply to `o` that keeps Client winning, preferring replies whose
    /// outcome is already settled. `None` if every reply loses.
    pub fn client_reply(&mut self, s: &Quotient, o: &AbstractOffer) -> Step<Option<Choice>> {
        let choices = o.choices();
        for &c in &choices {
            if self.quick(&s.child(o, c)) == Some(false) {
                return Ok(Some(c));
            }
        }
        for &c in &choices {
            if !self.waiter_wins(&s.child(o, c))? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}

/// Applies a vertex permutation to an offer on the opening board, where
/// classes are single vertices.
pub(crate) fn permute_offer(o: &AbstractOffer, perm: &[usize]) -> AbstractOffer {
    let mut pairs: SmallVec<[(u8, u8, u8); 8]> = o
        .pairs
        .iter()
        .map(|&(a, b, c)| {
            let (x, y) = (perm[a as usize] as u8, perm[b as usize] as u8);
            (x.min(y), x.max(y), c)
        })
        .collect();
    pairs.sort_unstable();
    AbstractOffer { pairs, dead: o.dead }
}
