use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use wcgame::construct::build_gq;
use wcgame::enumerate::enumerate_decomposable;
use wcgame::game::Game;
use wcgame::graph::canonical_form;
use wcgame::{Decomposition, GameState, Graph, Instance, Offer, PruningLevel, SolveConfig};

fn k4() -> Game {
    Game::new(Instance {
        graph: Graph::complete(4),
        decomposition: Decomposition::new(vec![vec![0, 3, 5], vec![1, 2, 4]]),
        q: 1,
        anchors: None,
    })
    .unwrap()
}

fn obs1() -> SolveConfig {
    SolveConfig {
        pruning: PruningLevel::Obs1,
        ..SolveConfig::default()
    }
}

/// A few random rounds into `game`, for cut-table and key costs.
fn midgame(game: &Game, rounds: usize, seed: u64) -> GameState {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut s = game.initial_state();
    for _ in 0..rounds {
        let free: Vec<usize> = s.free.iter().collect();
        let o = Offer::new(free.choose_multiple(&mut rng, game.q() + 1).copied()).unwrap();
        let chosen = *o.edges().choose(&mut rng).unwrap();
        s = game.apply_round(&s, &o, chosen).unwrap();
    }
    s
}

fn solves(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    let k4 = k4();
    g.bench_function("k4", |b| {
        b.iter(|| wcgame::solver::solve(&k4, &k4.initial_state(), &obs1()).unwrap())
    });
    let n7 = Game::new(enumerate_decomposable(7, 2).unwrap().remove(0).instance).unwrap();
    g.bench_function("n7 board", |b| {
        b.iter(|| wcgame::solver::solve(&n7, &n7.initial_state(), &obs1()).unwrap())
    });
    let base = Game::new(build_gq(2).unwrap()).unwrap();
    g.bench_function("base board q=2", |b| {
        b.iter(|| wcgame::solver::solve(&base, &base.initial_state(), &obs1()).unwrap())
    });
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let base = Game::new(build_gq(2).unwrap()).unwrap();
    let s = midgame(&base, 2, 1);
    let quotient = base.quotient(&s).unwrap();
    c.bench_function("cut table", |b| b.iter(|| black_box(&quotient).cut_table()));
    c.bench_function("quotient key", |b| {
        b.iter(|| base.quotient(black_box(&s)).unwrap().key())
    });
    let g = build_gq(3).unwrap().graph;
    c.bench_function("canonical form 12 vertices", |b| {
        b.iter(|| canonical_form(black_box(&g)).unwrap())
    });
}

criterion_group!(benches, solves, kernels);
criterion_main!(benches);
