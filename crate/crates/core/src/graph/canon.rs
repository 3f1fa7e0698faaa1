//! Canonical forms and automorphisms for small graphs.
//!
//! Color refinement followed by individualization of the first non-trivial
//! cell; the canonical code is the smallest adjacency string over all
//! leaves. Transposing twin vertices is an automorphism that preserves the
//! coloring, so only one twin per cell is individualized.

use std::fmt;

use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count accepted by [`canonical_form`].
pub const CANON_MAX_N: usize = 12;

/// Canonical adjacency code: vertex count followed by the upper triangle of
/// the relabeled adjacency matrix, column by column, packed into bytes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub Vec<u8>);

impl CanonicalCode {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

struct Canon<'a> {
    n: usize,
    adj: &'a [u32],
    best: Option<Vec<u8>>,
}

fn adjacency(g: &Graph) -> Vec<u32> {
    let mut adj = vec![0u32; g.n()];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    adj
}

/// Equitable refinement. Colors are dense ranks; new ranks are assigned by
/// sorting (old color, neighbor color multiset), so the result only depends
/// on the isomorphism class of the colored graph.
fn refine(adj: &[u32], colors: &mut [u32]) {
    let n = adj.len();
    let mut count = distinct(colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        for v in 0..n {
            colors[v] = sorted.binary_search(&sigs[v]).unwrap() as u32;
        }
        if sorted.len() == count {
            return;
        }
        count = sorted.len();
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Smallest color class with more than one vertex, as its color.
fn target_cell(colors: &[u32]) -> Option<u32> {
    let mut sizes = vec![0usize; colors.len()];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    sizes.iter().position(|&s| s > 1).map(|c| c as u32)
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    colors
        .iter()
        .enumerate()
        .map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 })
        .collect()
}

fn twins(adj: &[u32], a: usize, b: usize) -> bool {
    let ma = !(1u32 << b);
    let mb = !(1u32 << a);
    adj[a] & ma == adj[b] & mb
}

impl Canon<'_> {
    fn code(&self, colors: &[u32]) -> Vec<u8> {
        // colors is discrete: colors[v] is v's new label
        let mut inv = vec![0usize; self.n];
        for (v, &c) in colors.iter().enumerate() {
            inv[c as usize] = v;
        }
        let bits = self.n * self.n.saturating_sub(1) / 2;
        let mut out = vec![0u8; 1 + bits.div_ceil(8)];
        out[0] = self.n as u8;
        let mut k = 0;
        for j in 1..self.n {
            for i in 0..j {
                if self.adj[inv[i]] >> inv[j] & 1 == 1 {
                    out[1 + k / 8] |= 0x80 >> (k % 8);
                }
                k += 1;
            }
        }
        out
    }

    fn search(&mut self, mut colors: Vec<u32>) {
        refine(self.adj, &mut colors);
        let Some(cell) = target_cell(&colors) else {
            let code = self.code(&colors);
            if self.best.as_ref().is_none_or(|b| code < *b) {
                self.best = Some(code);
            }
            return;
        };
        let members: Vec<usize> = (0..self.n).filter(|&v| colors[v] == cell).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &members {
            if tried.iter().any(|&u| twins(self.adj, u, v)) {
                continue;
            }
            tried.push(v);
            self.search(individualize(&colors, v));
        }
    }
}

/// Canonical code: equal for two graphs iff they are isomorphic.
pub fn canonical_form(g: &Graph) -> Result<CanonicalCode> {
    if g.n() > CANON_MAX_N {
        return Err(Error::TooLarge(format!(
            "canonical form supports at most {CANON_MAX_N} vertices, got {}",
            g.n()
        )));
    }
    let adj = adjacency(g);
    let mut c = Canon {
        n: g.n(),
        adj: &adj,
        best: None,
    };
    c.search(vec![0; g.n()]);
    Ok(CanonicalCode(c.best.unwrap_or_else(|| vec![0])))
}

/// Automorphisms of `g` as vertex maps `perm[v]`, identity first, stopping
/// after `limit` elements.
pub fn automorphisms(g: &Graph, limit: usize) -> Result<Vec<Vec<usize>>> {
    if g.n() > 32 {
        return Err(Error::TooLarge(format!(
            "automorphism search supports at most 32 vertices, got {}",
            g.n()
        )));
    }
    let n = g.n();
    let adj = adjacency(g);
    let mut colors = vec![0; n];
    refine(&adj, &mut colors);
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(&adj, &colors, 0, &mut image, &mut used, &mut out, limit);
    Ok(out)
}

fn extend(
    adj: &[u32],
    colors: &[u32],
    v: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    let n = adj.len();
    if out.len() >= limit {
        return;
    }
    if v == n {
        out.push(image.clone());
        return;
    }
    for w in 0..n {
        if used[w] || colors[w] != colors[v] {
            continue;
        }
        let consistent = (0..v).all(|u| (adj[u] >> v & 1) == (adj[image[u]] >> w & 1));
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        extend(adj, colors, v + 1, image, used, out, limit);
        used[w] = false;
        image[v] = usize::MAX;
    }
}
