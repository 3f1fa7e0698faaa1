mod common;

use std::sync::OnceLock;
use std::time::Duration;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use wcgame::construct::{build_gnq, build_gq};
use wcgame::enumerate::enumerate_decomposable;
use wcgame::game::Game;
use wcgame::graph::automorphisms;
use wcgame::solver::{solve, verify_client_strategy, Failure, Verification};
use wcgame::strategy::{lemma2_strategy, ClientStrategy, LowestEdge};
use wcgame::{GameState, Instance, Offer, PruningLevel, Side, SolveConfig, Transcript};

fn base_board() -> &'static Game {
    static G: OnceLock<Game> = OnceLock::new();
    G.get_or_init(|| Game::new(build_gq(2).unwrap()).unwrap())
}

fn winner(game: &Game, s: &GameState, cfg: &SolveConfig) -> Side {
    solve(game, s, cfg).unwrap().winner.expect("no budget set")
}

fn small_boards() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 4..=6 {
        out.extend(enumerate_decomposable(n, 1).unwrap().into_iter().map(|e| e.instance));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rounds_shrink_free_edges_and_coarsen_parts(seed in any::<u64>()) {
        let game = base_board();
        let mut rng = StdRng::seed_from_u64(seed);
        let mut s = game.initial_state();
        let mut t = Transcript::new();
        for round in 0..game.n() - 1 {
            prop_assert!(game.terminal_winner(&s).is_none(), "decided after {round} rounds");
            let o = common::random_offer(&mut rng, game, &s);
            let chosen = *o.edges().choose(&mut rng).unwrap();
            let next = game.apply_round(&s, &o, chosen).unwrap();
            prop_assert_eq!(next.free.len() + game.q() + 1, s.free.len());
            // every class of `next` is a union of classes of `s`
            for a in 0..game.n() {
                for b in 0..game.n() {
                    if s.parts[a] == s.parts[b] {
                        prop_assert_eq!(next.parts[a], next.parts[b]);
                    }
                }
            }
            t.push(o, chosen);
            s = next;
        }
        prop_assert!(game.terminal_winner(&s).is_some());
        prop_assert!(s.free.is_empty());

        let first = t.replay(game).unwrap();
        let text: Transcript = t.to_string().parse().unwrap();
        prop_assert_eq!(&text, &t);
        prop_assert_eq!(text.replay(game).unwrap(), first);
    }

    #[test]
    fn anchor_strategy_takes_offered_dead_edges(seed in any::<u64>()) {
        let game = base_board();
        let strat = lemma2_strategy(game.instance()).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_position(&mut rng, game, 4);
        let dead: Vec<usize> = s.free.iter().filter(|&e| game.is_dead(&s, e)).collect();
        prop_assume!(!dead.is_empty() && game.terminal_winner(&s).is_none());
        let pick = *dead.choose(&mut rng).unwrap();
        let mut rest: Vec<usize> = s.free.iter().filter(|&e| e != pick).collect();
        rest.shuffle(&mut rng);
        let mut edges = vec![pick];
        edges.extend(rest.into_iter().take(game.q()));
        let offer = Offer::new(edges).unwrap();
        let d = strat.respond(game, &s, &offer).unwrap();
        prop_assert!(offer.contains(d.chosen));
        prop_assert!(game.is_dead(&s, d.chosen), "kept live e{} from {}", d.chosen, offer);
    }
}

/// Positions where a cut fires must be Client wins without the cut rules.
#[test]
fn cuts_are_sound_up_to_six_vertices() {
    let mut fired = 0;
    let plain = SolveConfig {
        pruning: PruningLevel::None,
        use_cuts: false,
        ..SolveConfig::default()
    };
    let mut rng = StdRng::seed_from_u64(6);
    for inst in small_boards() {
        let game = Game::new(inst).unwrap();
        for _ in 0..150 {
            let rounds = rand::Rng::gen_range(&mut rng, 0..game.n() - 1);
            let s = common::random_position(&mut rng, &game, rounds);
            if game.terminal_winner(&s).is_some() {
                continue;
            }
            let cut = game.client_cut(&s).is_some();
            assert_eq!(cut, game.winning_cut(&s).is_some());
            if cut {
                fired += 1;
                assert_eq!(winner(&game, &s, &plain), Side::Client, "{s:?}");
            }
        }
    }
    assert!(fired > 20, "only {fired} positions had a cut");
}

/// Waiter wins at `s` iff some offer leaves Waiter winning after every
/// choice, computed one ply down with separate searches.
#[test]
fn one_ply_expansion_agrees_with_the_solver() {
    let game = base_board();
    let cfg = SolveConfig::default();
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 6 {
        let s = common::random_position(&mut rng, game, 5);
        if game.terminal_winner(&s).is_some() {
            continue;
        }
        let offers = game.offer_classes(&s, PruningLevel::DeadCollapse).unwrap();
        let waiter_can_force = offers.iter().any(|o| {
            o.edges().iter().all(|&e| {
                let child = game.apply_round(&s, o, e).unwrap();
                match game.terminal_winner(&child) {
                    Some(w) => w == Side::Waiter,
                    None => winner(game, &child, &cfg) == Side::Waiter,
                }
            })
        });
        let direct = winner(game, &s, &cfg);
        assert_eq!(direct == Side::Waiter, waiter_can_force, "{s:?}");
        checked += 1;
    }
}

#[test]
fn verdict_ignores_workers_and_table_size() {
    let game = base_board();
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..5 {
        let s = common::random_position(&mut rng, game, 3);
        let mut seen = Vec::new();
        for (workers, table_capacity) in [(1, 1 << 20), (2, 1 << 20), (8, 1 << 20), (1, 64), (2, 1000)] {
            let cfg = SolveConfig {
                workers,
                table_capacity,
                ..SolveConfig::default()
            };
            seen.push(winner(game, &s, &cfg));
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
    }
}

#[test]
fn certificates_are_deterministic() {
    let inst = enumerate_decomposable(7, 2).unwrap().remove(3).instance;
    let game = Game::new(inst).unwrap();
    let cfg = SolveConfig {
        retain_certificate: true,
        ..SolveConfig::default()
    };
    let a = solve(&game, &game.initial_state(), &cfg).unwrap().certificate.unwrap();
    let b = solve(&game, &game.initial_state(), &cfg).unwrap().certificate.unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn lowest_edge_loses_the_base_board() {
    let game = base_board();
    match verify_client_strategy(game, &LowestEdge, &SolveConfig::default()).unwrap() {
        Verification::Refuted(cx) => {
            assert_eq!(cx.failure, Failure::Connected);
            let states = cx.transcript.replay(game).unwrap();
            assert_eq!(game.terminal_winner(states.last().unwrap()), Some(Side::Waiter));
        }
        other => panic!("expected a counterexample, got {other:?}"),
    }
}

/// Larger boards with a budget: the anchor strategy may run out of time but
/// must never be refuted.
#[test]
fn anchor_strategy_is_never_refuted_on_larger_boards() {
    for (n, q) in [(10, 2), (11, 2), (11, 3)] {
        let inst = build_gnq(n, q).unwrap();
        let game = Game::new(inst.clone()).unwrap();
        let strat = lemma2_strategy(&inst).unwrap();
        let cfg = SolveConfig {
            budget: Duration::from_secs(10),
            ..SolveConfig::default()
        };
        match verify_client_strategy(&game, &strat, &cfg).unwrap() {
            Verification::Refuted(cx) => panic!("n = {n}, q = {q}: {:?}\n{}", cx.failure, cx.transcript),
            Verification::Verified { .. } | Verification::Unknown { .. } => {}
        }
    }
}

/// Relabeling the base board by an automorphism that moves the anchors
/// leaves the anchor strategy winning.
#[test]
fn anchor_strategy_survives_anchor_symmetry() {
    let inst = build_gq(2).unwrap();
    let anchors = inst.anchors.unwrap();
    let perm = automorphisms(&inst.graph, 10_000)
        .unwrap()
        .into_iter()
        .find(|p| {
            let mut moved: Vec<usize> = anchors.iter().map(|&a| p[a]).collect();
            moved.sort_unstable();
            let mut sorted = anchors.to_vec();
            sorted.sort_unstable();
            moved == sorted && anchors.iter().any(|&a| p[a] != a)
        })
        .expect("an automorphism permuting the anchors");
    let relabeled = Instance {
        graph: inst.graph.permuted(&perm).unwrap(),
        decomposition: inst.decomposition.clone(),
        q: inst.q,
        anchors: Some(anchors.map(|a| perm[a])),
    };
    assert!(relabeled.verify().is_ok());
    let game = Game::new(relabeled.clone()).unwrap();
    let strat = lemma2_strategy(&relabeled).unwrap();
    let v = verify_client_strategy(&game, &strat, &SolveConfig::default()).unwrap();
    assert!(matches!(v, Verification::Verified { .. }), "{v:?}");
}
