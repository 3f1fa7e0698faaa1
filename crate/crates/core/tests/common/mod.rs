//! Independent oracles shared by the integration tests. Nothing here calls
//! the search, packing or canonical-form code under test.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use wcgame::game::Game;
use wcgame::{GameState, Graph, Offer};

/// Every set partition of `0..n` as a block label per vertex (restricted
/// growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(cur: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            grow(cur, max.max(b), n, out);
            cur.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    grow(&mut vec![0], 0, n, &mut out);
    out
}

/// `k` edge-disjoint spanning trees exist iff every partition into `p`
/// blocks has at least `k (p - 1)` crossing edges.
pub fn packs_by_partitions(g: &Graph, k: usize, partitions: &[Vec<usize>]) -> bool {
    partitions.iter().all(|labels| {
        let p = labels.iter().max().map_or(0, |m| m + 1);
        let cross = g.edges().iter().filter(|&&(a, b)| labels[a] != labels[b]).count();
        cross >= k * p.saturating_sub(1)
    })
}

/// Does `edges` connect all `n` vertices with exactly `n - 1` edges?
pub fn is_spanning_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut label: Vec<usize> = (0..n).collect();
    for &(a, b) in edges {
        let (la, lb) = (label[a], label[b]);
        if la == lb {
            return false;
        }
        for l in label.iter_mut() {
            if *l == lb {
                *l = la;
            }
        }
    }
    true
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Lexicographically least sorted edge list over all relabelings.
pub fn brute_canonical(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut e: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        if !next_permutation(&mut perm) {
            return best.unwrap();
        }
    }
}

pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    let edges: Vec<_> = edges.filter(|_| rng.gen_bool(density)).collect();
    Graph::new(n, edges).unwrap()
}

/// A random legal offer at a non-terminal position.
pub fn random_offer(rng: &mut impl Rng, game: &Game, s: &GameState) -> Offer {
    let free: Vec<usize> = s.free.iter().collect();
    let picked: Vec<usize> = free.choose_multiple(rng, game.q() + 1).copied().collect();
    Offer::new(picked).unwrap()
}

/// Plays `rounds` random rounds, stopping early at a decided position.
pub fn random_position(rng: &mut impl Rng, game: &Game, rounds: usize) -> GameState {
    let mut s = game.initial_state();
    for _ in 0..rounds {
        if game.terminal_winner(&s).is_some() {
            break;
        }
        let o = random_offer(rng, game, &s);
        let chosen = *o.edges().choose(rng).unwrap();
        s = game.apply_round(&s, &o, chosen).unwrap();
    }
    s
}

/// Like [`random_position`], with Waiter offering greedily.
pub fn greedy_waiter_position(rng: &mut impl Rng, game: &Game, rounds: usize) -> GameState {
    let mut s = game.initial_state();
    for _ in 0..rounds {
        if game.terminal_winner(&s).is_some() {
            break;
        }
        let o = wcgame::strategy::heuristic_waiter(game, &s).unwrap();
        let chosen = *o.edges().choose(rng).unwrap();
        s = game.apply_round(&s, &o, chosen).unwrap();
    }
    s
}
