//! Client's follow-up play once a cut holds. Each reply keeps some cut in
//! force, so Client's graph stays disconnected to the end.

use crate::game::{Game, GameState, Offer, QuotientCut};
use crate::graph::EdgeIdx;

fn leaves(game: &Game, e: EdgeIdx, set: &[bool]) -> bool {
    let (a, b) = game.ends(e);
    set[a] != set[b]
}

/// Lowest offered edge not leaving `set` (vertex membership flags). With
/// at most `q` leaving edges such an edge always exists.
pub fn refuse_set(game: &Game, offer: &Offer, set: &[bool]) -> EdgeIdx {
    let edges = offer.edges();
    edges
        .iter()
        .copied()
        .find(|&e| !leaves(game, e, set))
        .unwrap_or(edges[0])
}

/// Reply at two disjoint vertex sets `a`, `b` with `q + 1` leaving edges
/// each and an edge between them. If the offer holds every edge leaving
/// one of them, take an `a`-`b` edge; otherwise take an edge that leaves
/// at most one of the two, so the other drops to at most `q`.
pub fn hold_pair(game: &Game, offer: &Offer, a: &[bool], b: &[bool]) -> EdgeIdx {
    let q = game.q();
    let edges = offer.edges();
    let link = |e: EdgeIdx| leaves(game, e, a) && leaves(game, e, b);
    let at_a = edges.iter().filter(|&&e| leaves(game, e, a)).count();
    let at_b = edges.iter().filter(|&&e| leaves(game, e, b)).count();
    if at_a == q + 1 || at_b == q + 1 {
        if let Some(&e) = edges.iter().find(|&&e| link(e)) {
            return e;
        }
    }
    if let Some(&e) = edges.iter().find(|&&e| !leaves(game, e, a) && !leaves(game, e, b)) {
        return e;
    }
    edges.iter().copied().find(|&e| !link(e)).unwrap_or(edges[0])
}

/// The reply `cut` prescribes at `s`, and the vertices it keeps apart.
pub fn cut_reply(game: &Game, s: &GameState, offer: &Offer, cut: &QuotientCut) -> (EdgeIdx, Vec<usize>) {
    let listed = |set: &[bool]| (0..set.len()).filter(|&v| set[v]).collect::<Vec<_>>();
    match *cut {
        QuotientCut::SmallCut(m) => {
            let set = game.mask_members(s, m);
            (refuse_set(game, offer, &set), listed(&set))
        }
        QuotientCut::AdjacentPair(x, y) => {
            let (a, b) = (game.mask_members(s, x), game.mask_members(s, y));
            let both: Vec<bool> = a.iter().zip(&b).map(|(p, q)| *p || *q).collect();
            (hold_pair(game, offer, &a, &b), listed(&both))
        }
        QuotientCut::FewRounds => (offer.edges()[0], Vec::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_gq;

    fn e(g: &Game, a: usize, b: usize) -> EdgeIdx {
        g.instance().graph.find_edge(a, b).unwrap()
    }

    #[test]
    fn refusal_avoids_leaving_edges() {
        let g = Game::new(build_gq(2).unwrap()).unwrap();
        let mut set = vec![false; g.n()];
        set[0] = true;
        set[3] = true;
        // 0-3 stays inside, 0-6 and 0-1 leave
        let o = Offer::new([e(&g, 0, 6), e(&g, 0, 1), e(&g, 0, 3)]).unwrap();
        assert_eq!(refuse_set(&g, &o, &set), e(&g, 0, 3));
    }

    #[test]
    fn pair_reply_links_only_under_full_pressure() {
        let g = Game::new(build_gq(2).unwrap()).unwrap();
        let s = g.initial_state();
        let touches = |x: EdgeIdx, v: usize| g.ends(x).0 == v || g.ends(x).1 == v;
        let mut a = vec![false; g.n()];
        a[0] = true;
        let mut b = vec![false; g.n()];
        b[3] = true;
        let link = e(&g, 0, 3);
        let at0: Vec<EdgeIdx> = s.free.iter().filter(|&x| touches(x, 0) && x != link).collect();
        let o = Offer::new([link, at0[0], at0[1]]).unwrap();
        assert_eq!(hold_pair(&g, &o, &a, &b), link);
        let away: Vec<EdgeIdx> = s.free.iter().filter(|&x| !touches(x, 0) && !touches(x, 3)).collect();
        let o = Offer::new([link, away[0], at0[0]]).unwrap();
        assert_eq!(hold_pair(&g, &o, &a, &b), away[0]);
    }
}
