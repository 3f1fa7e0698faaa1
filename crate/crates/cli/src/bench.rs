//! Node throughput on fixed boards. Criterion benches live in the bench crate;
//! this is the quick look from the command line.

use anyhow::Result;

use wcgame::construct::build_gq;
use wcgame::enumerate::{boundary_q, enumerate_decomposable};
use wcgame::game::Game;
use wcgame::graph::Graph;
use wcgame::solver::{solve, SolveConfig};
use wcgame::{Decomposition, Instance};

fn k4() -> Result<Instance> {
    let graph = Graph::complete(4);
    Ok(Instance {
        graph,
        decomposition: Decomposition::new(vec![vec![0, 3, 5], vec![1, 2, 4]]),
        q: 1,
        anchors: None,
    })
}

pub fn run(base: &SolveConfig, quick: bool) -> Result<()> {
    let mut boards = vec![("K4".to_string(), k4()?)];
    for (i, b) in enumerate_decomposable(7, boundary_q(7)?)?.into_iter().enumerate() {
        boards.push((format!("n=7 #{i}"), b.instance));
    }
    if !quick {
        boards.push(("base q=2".to_string(), build_gq(2)?));
    }
    println!("{:<12} {:>10} {:>10} {:>12}  winner", "board", "nodes", "ms", "nodes/s");
    for (name, inst) in boards {
        let game = Game::new(inst)?;
        let res = solve(&game, &game.initial_state(), base)?;
        let ms = res.elapsed.as_secs_f64() * 1e3;
        let rate = res.nodes as f64 / res.elapsed.as_secs_f64().max(1e-9);
        let winner = res.winner.map_or("unknown".to_string(), |w| w.to_string());
        println!("{name:<12} {:>10} {ms:>10.1} {rate:>12.0}  {winner}", res.nodes);
    }
    Ok(())
}
