//! Terminal play. Edges are addressed by index; `show` prints the board.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use anyhow::{bail, Context, Result};

use wcgame::game::{Game, GameState, Offer};
use wcgame::solver::{solve, SolveConfig};
use wcgame::strategy::{
    lemma2_strategy, optimal_strategy, ClientStrategy, HeuristicClient, HeuristicWaiter, OptimalStrategy,
    WaiterStrategy,
};
use wcgame::{Instance, Side};

use crate::{Opponent, PlayAs};

const HELP: &str = "commands: show, help, quit; otherwise edge indices separated by commas or spaces";

/// Components and free edges of `s`.
pub fn render(game: &Game, s: &GameState) -> String {
    let mut out = String::new();
    let outs = game.class_outs(s);
    for (c, vs) in s.classes().iter().enumerate() {
        let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "component {c}: {{{}}} free out {}", vs.join(","), outs[c]);
    }
    for e in s.free {
        let (a, b) = game.ends(e);
        let kind = if game.is_dead(s, e) {
            "dead".to_string()
        } else {
            format!("joins {} and {}", s.parts[a], s.parts[b])
        };
        let _ = writeln!(out, "  e{e}: {a}-{b} {kind}");
    }
    let _ = writeln!(out, "round {} of {}", game.round_number(s) + 1, game.rounds());
    out
}

fn parse_edges(line: &str) -> Result<Vec<usize>> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim_start_matches('e')
                .parse::<usize>()
                .with_context(|| format!("not an edge index: {t:?}"))
        })
        .collect()
}

enum Input {
    Edges(Vec<usize>),
    Quit,
}

/// Reads until the player gives edges or quits; `None` at end of input.
fn prompt(
    game: &Game,
    s: &GameState,
    label: &str,
    input: &mut impl BufRead,
    out: &mut impl Write,
) -> Result<Option<Input>> {
    loop {
        write!(out, "{label}> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(None);
        }
        match line.trim() {
            "" => continue,
            "show" => write!(out, "{}", render(game, s))?,
            "help" => writeln!(out, "{HELP}")?,
            "quit" | "exit" => return Ok(Some(Input::Quit)),
            t => match parse_edges(t) {
                Ok(v) => return Ok(Some(Input::Edges(v))),
                Err(e) => writeln!(out, "{e:#}")?,
            },
        }
    }
}

fn opponent_client(
    inst: &Instance,
    game: &Game,
    who: Opponent,
    cfg: &SolveConfig,
) -> Result<(Box<dyn ClientStrategy>, String)> {
    Ok(match who {
        Opponent::Lemma2 => (Box::new(lemma2_strategy(inst)?), "anchor strategy".into()),
        Opponent::Heuristic => (Box::new(HeuristicClient), "greedy Client".into()),
        Opponent::Optimal => match certified(game, cfg, Side::Client)? {
            Some(OptimalStrategy::Client(c)) => (Box::new(c), "optimal Client (this board is a Client win)".into()),
            _ => (
                Box::new(HeuristicClient),
                "greedy Client (Waiter wins this board)".into(),
            ),
        },
    })
}

fn opponent_waiter(game: &Game, who: Opponent, cfg: &SolveConfig) -> Result<(Box<dyn WaiterStrategy>, String)> {
    Ok(match who {
        Opponent::Lemma2 => bail!("the anchor strategy plays Client; choose --opponent optimal or heuristic"),
        Opponent::Heuristic => (Box::new(HeuristicWaiter), "greedy Waiter".into()),
        Opponent::Optimal => match certified(game, cfg, Side::Waiter)? {
            Some(OptimalStrategy::Waiter(w)) => (Box::new(w), "optimal Waiter (this board is a Waiter win)".into()),
            _ => (
                Box::new(HeuristicWaiter),
                "greedy Waiter (Client wins this board)".into(),
            ),
        },
    })
}

/// The certified player for `side` when `side` wins.
fn certified(game: &Game, cfg: &SolveConfig, side: Side) -> Result<Option<OptimalStrategy>> {
    let cfg = SolveConfig {
        retain_certificate: true,
        ..cfg.clone()
    };
    let res = solve(game, &game.initial_state(), &cfg)?;
    match (res.winner, res.certificate) {
        (None, _) => bail!("budget ran out while solving for the optimal opponent"),
        (Some(w), Some(c)) if w == side => Ok(Some(optimal_strategy(&c, game)?)),
        (Some(w), None) if w == side => bail!("budget ran out while extracting the optimal opponent"),
        _ => Ok(None),
    }
}

pub fn run(
    inst: Instance,
    side: PlayAs,
    who: Opponent,
    cfg: &SolveConfig,
    mut input: impl BufRead,
    mut out: impl Write,
) -> Result<()> {
    let game = Game::new(inst.clone())?;
    let mut s = game.initial_state();
    writeln!(
        out,
        "{} vertices, {} edges, q = {}: offers have {} edges. {HELP}",
        game.n(),
        game.edge_count(),
        game.q(),
        game.q() + 1
    )?;
    match side {
        PlayAs::Waiter => {
            let (client, name) = opponent_client(&inst, &game, who, cfg)?;
            writeln!(out, "you are Waiter against the {name}")?;
            while game.terminal_winner(&s).is_none() {
                let edges = match prompt(&game, &s, "offer", &mut input, &mut out)? {
                    Some(Input::Edges(v)) => v,
                    _ => return Ok(()),
                };
                let offer = match Offer::new(edges).and_then(|o| game.check_offer(&s, &o).map(|_| o)) {
                    Ok(o) => o,
                    Err(e) => {
                        writeln!(out, "{e}")?;
                        continue;
                    }
                };
                let d = client.respond(&game, &s, &offer)?;
                writeln!(out, "Client takes e{} ({})", d.chosen, d.mode)?;
                s = game.apply_round(&s, &offer, d.chosen)?;
            }
        }
        PlayAs::Client => {
            let (waiter, name) = opponent_waiter(&game, who, cfg)?;
            writeln!(out, "you are Client against the {name}")?;
            while game.terminal_winner(&s).is_none() {
                let offer = waiter.offer(&game, &s)?;
                writeln!(out, "Waiter offers {offer}")?;
                loop {
                    let edges = match prompt(&game, &s, "choose", &mut input, &mut out)? {
                        Some(Input::Edges(v)) => v,
                        _ => return Ok(()),
                    };
                    match edges.as_slice() {
                        [e] if offer.contains(*e) => {
                            s = game.apply_round(&s, &offer, *e)?;
                            break;
                        }
                        _ => writeln!(out, "choose one edge of {offer}")?,
                    }
                }
            }
        }
    }
    let w = game.terminal_winner(&s).expect("loop ends at a terminal position");
    writeln!(out, "game over: {w} wins")?;
    Ok(())
}
