//! All boards of a given size up to isomorphism, and the batch solve over
//! them.
//!
//! Boards with `(q+1)(n-1)` edges are dense near the tree-packing limit, so
//! their complements are tiny. Complements are grown one edge at a time,
//! deduplicated by canonical code at every size, and each complement class
//! is kept if its complement packs `q + 1` spanning trees.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, Side};
use crate::graph::{canonical_form, tree_packing, CanonicalCode, Graph, Instance, PackingOutcome};
use crate::solver::{solve, Certificate, SolveConfig};

/// Largest vertex count accepted by [`enumerate_decomposable`].
pub const ENUMERATE_MAX_N: usize = 9;

#[derive(Clone, Debug)]
pub struct Enumerated {
    pub code: CanonicalCode,
    pub instance: Instance,
}

/// One graph per isomorphism class with exactly `k` edges on `n`
/// vertices, ordered by canonical code.
pub fn graphs_with_edges(n: usize, k: usize) -> Result<Vec<Graph>> {
    let total = n * (n - 1) / 2;
    if k > total {
        return Err(Error::Infeasible(format!("{k} edges do not fit on {n} vertices")));
    }
    let mut level: BTreeMap<CanonicalCode, Graph> = BTreeMap::new();
    let empty = Graph::new(n, [])?;
    level.insert(canonical_form(&empty)?, empty);
    for _ in 0..k {
        let mut next = BTreeMap::new();
        for g in level.values() {
            for a in 0..n {
                for b in a + 1..n {
                    if g.find_edge(a, b).is_some() {
                        continue;
                    }
                    let mut edges = g.edges().to_vec();
                    edges.push((a, b));
                    edges.sort_unstable();
                    let h = Graph::new(n, edges)?;
                    next.entry(canonical_form(&h)?).or_insert(h);
                }
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}

/// Every `n`-vertex union of `q + 1` edge-disjoint spanning trees, once per
/// isomorphism class, with a packing. Anchors are left unset.
pub fn enumerate_decomposable(n: usize, q: usize) -> Result<Vec<Enumerated>> {
    if n < 2 {
        return Err(Error::Precondition(format!("need at least 2 vertices, got {n}")));
    }
    if n > ENUMERATE_MAX_N {
        return Err(Error::TooLarge(format!(
            "enumeration is capped at n = {ENUMERATE_MAX_N}, got {n}"
        )));
    }
    let total = n * (n - 1) / 2;
    let m = (q + 1) * (n - 1);
    if m > total {
        return Err(Error::Infeasible(format!(
            "(q+1)(n-1) = {m} edges exceed the {total} edges of K_{n}"
        )));
    }
    let mut out = Vec::new();
    for comp in graphs_with_edges(n, total - m)? {
        let g = comp.complement();
        if let PackingOutcome::Packing(decomposition) = tree_packing(&g, q + 1) {
            let code = canonical_form(&g)?;
            let instance = Instance {
                graph: g,
                decomposition,
                q,
                anchors: None,
            };
            out.push(Enumerated { code, instance });
        }
    }
    out.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(out)
}

/// `q` at the boundary of the anchored construction: `q + 1 = (n-1)/2` for
/// odd `n`, `q + 1 = n/2 - 1` for even `n`.
pub fn boundary_q(n: usize) -> Result<usize> {
    let k = if n % 2 == 1 {
        (n - 1) / 2
    } else {
        (n / 2).saturating_sub(1)
    };
    if k < 2 {
        return Err(Error::Precondition(format!("no boundary case with q >= 1 at n = {n}")));
    }
    Ok(k - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Waiter,
    Client,
    Unknown,
}

impl From<Option<Side>> for Verdict {
    fn from(w: Option<Side>) -> Self {
        match w {
            Some(Side::Waiter) => Verdict::Waiter,
            Some(Side::Client) => Verdict::Client,
            None => Verdict::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkEntry {
    pub canonical_code: String,
    pub winner: Verdict,
    pub nodes: u64,
    #[serde(default)]
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RemarkReport {
    pub n: usize,
    pub q: usize,
    pub instances: Vec<RemarkEntry>,
    pub conclusion: String,
    /// Per instance, the Waiter certificate when one was produced.
    #[serde(skip)]
    pub certificates: Vec<Option<Certificate>>,
    #[serde(skip)]
    pub boards: Vec<Instance>,
}

impl RemarkReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.instances.iter().filter(|e| e.winner == v).count()
    }
}

fn conclusion(entries: &[RemarkEntry]) -> String {
    let total = entries.len();
    let count = |v| entries.iter().filter(|e| e.winner == v).count();
    let (w, c, u) = (count(Verdict::Waiter), count(Verdict::Client), count(Verdict::Unknown));
    if w == total {
        format!("Waiter wins on all {total} instances")
    } else if c > 0 {
        format!("Client wins on {c} of {total} instances ({w} Waiter, {u} unknown)")
    } else {
        format!("Waiter wins on {w} of {total} instances, {u} unknown")
    }
}

/// Solves every boundary board on `n` vertices. `cfg.budget` applies to
/// each board; `cfg.workers` boards are solved at a time.
pub fn verify_remark(n: usize, cfg: &SolveConfig) -> Result<RemarkReport> {
    let q = boundary_q(n)?;
    let boards = enumerate_decomposable(n, q)?;
    let per_board = SolveConfig {
        workers: 1,
        retain_certificate: true,
        ..cfg.clone()
    };
    let slots: Vec<Slot> = boards.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..cfg.workers.clamp(1, boards.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(b) = boards.get(i) else { break };
                let r = solve_board(b, &per_board);
                *slots[i].lock() = Some(r);
            });
        }
    });
    let mut instances = Vec::new();
    let mut certificates = Vec::new();
    for slot in slots {
        let (entry, cert) = slot.into_inner().expect("every board is solved")?;
        instances.push(entry);
        certificates.push(cert);
    }
    Ok(RemarkReport {
        n,
        q,
        conclusion: conclusion(&instances),
        instances,
        certificates,
        boards: boards.into_iter().map(|b| b.instance).collect(),
    })
}

type Slot = Mutex<Option<Result<(RemarkEntry, Option<Certificate>)>>>;

fn solve_board(b: &Enumerated, cfg: &SolveConfig) -> Result<(RemarkEntry, Option<Certificate>)> {
    let start = Instant::now();
    let game = Game::new(b.instance.clone())?;
    let res = solve(&game, &game.initial_state(), cfg)?;
    let cert = match res.winner {
        Some(Side::Waiter) => res.certificate.clone(),
        _ => None,
    };
    Ok((
        RemarkEntry {
            canonical_code: b.code.to_hex(),
            winner: res.winner.into(),
            nodes: res.nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
        cert,
    ))
}
