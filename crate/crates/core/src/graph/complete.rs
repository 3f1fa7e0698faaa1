use super::{Decomposition, EdgeIdx};
use crate::error::{Error, Result};

/// The zigzag Hamiltonian path `i, i+1, i-1, i+2, i-2, ...` on `Z_m`, `m` even.
fn zigzag(i: usize, m: usize) -> Vec<usize> {
    let mut seq = Vec::with_capacity(m);
    seq.push(i);
    for t in 1..=m / 2 {
        seq.push((i + t) % m);
        if seq.len() < m {
            seq.push((i + m - t) % m);
        }
    }
    seq
}

/// `k` edge-disjoint spanning trees (Hamiltonian paths) of `K_m`, as vertex
/// pairs.
///
/// Even `m`: the `m/2` zigzag paths partition the edges of `K_m`. Odd `m`:
/// each zigzag path on `0..m-1` is closed into a Hamiltonian cycle through
/// vertex `m-1`; dropping the closing edge leaves a spanning path.
pub fn complete_tree_pairs(m: usize, k: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    if m < 2 {
        return Err(Error::Precondition(format!(
            "K_{m} has no spanning trees to pack (m < 2)"
        )));
    }
    if k > m / 2 {
        return Err(Error::Infeasible(format!(
            "K_{m} has at most {} edge-disjoint spanning trees, {k} requested",
            m / 2
        )));
    }
    let even = m - m % 2;
    let hub = m - 1;
    let trees = (0..k)
        .map(|i| {
            let path = zigzag(i, even);
            let mut edges: Vec<(usize, usize)> = path.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect();
            if m % 2 == 1 {
                edges.push((path[0], hub));
            }
            edges
        })
        .collect();
    Ok(trees)
}

/// Decomposition of `K_m` (edges in lexicographic order, see
/// [`Graph::complete`](crate::graph::Graph::complete)) into `k` edge-disjoint spanning trees. Edges of
/// `K_m` not needed by the trees stay uncovered.
pub fn decompose_complete(m: usize, k: usize) -> Result<Decomposition> {
    let trees = complete_tree_pairs(m, k)?;
    let index = |a: usize, b: usize| -> EdgeIdx {
        // position of (a, b), a < b, in lexicographic order of K_m
        a * m - a * (a + 1) / 2 + (b - a - 1)
    };
    let trees = trees
        .into_iter()
        .map(|t| {
            let mut ids: Vec<EdgeIdx> = t.into_iter().map(|(a, b)| index(a, b)).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    Ok(Decomposition::new(trees))
}
