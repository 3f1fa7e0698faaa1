//! Edge-disjoint spanning tree packing by matroid partition over `k` copies
//! of the graphic matroid.
//!
//! Edges are inserted one at a time through shortest exchange paths. When
//! the final forests are short of `k (n - 1)` edges, the edges reachable
//! from the unplaced ones span a vertex partition with fewer than
//! `k (p - 1)` crossing edges, which is returned as the obstruction.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Decomposition, DisjointSets, EdgeIdx, Graph};

/// A vertex partition whose crossing-edge count rules out a `k`-packing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWitness {
    pub parts: Vec<Vec<usize>>,
    pub cross_count: usize,
}

impl PartitionWitness {
    /// Recounts the crossing edges and checks `cross < k (p - 1)`.
    pub fn verify(&self, graph: &Graph, k: usize) -> bool {
        let n = graph.n();
        let mut class = vec![usize::MAX; n];
        for (i, part) in self.parts.iter().enumerate() {
            if part.is_empty() {
                return false;
            }
            for &v in part {
                if v >= n || class[v] != usize::MAX {
                    return false;
                }
                class[v] = i;
            }
        }
        if class.contains(&usize::MAX) || self.parts.len() < 2 {
            return false;
        }
        let cross = graph.edges().iter().filter(|&&(a, b)| class[a] != class[b]).count();
        cross == self.cross_count && cross < k * (self.parts.len() - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PackingOutcome {
    Packing(Decomposition),
    Obstruction(PartitionWitness),
}

impl PackingOutcome {
    pub fn is_packing(&self) -> bool {
        matches!(self, PackingOutcome::Packing(_))
    }
}

/// Rooted view of one forest, for tree-path queries.
struct ForestIndex {
    root: Vec<usize>,
    depth: Vec<usize>,
    up: Vec<Option<(usize, EdgeIdx)>>,
}

impl ForestIndex {
    fn build(n: usize, graph: &Graph, members: impl Iterator<Item = EdgeIdx>) -> Self {
        let mut adj: Vec<Vec<(usize, EdgeIdx)>> = vec![Vec::new(); n];
        for e in members {
            let (a, b) = graph.edges()[e];
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        let mut root = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        let mut up = vec![None; n];
        let mut stack = Vec::new();
        for r in 0..n {
            if root[r] != usize::MAX {
                continue;
            }
            root[r] = r;
            stack.push(r);
            while let Some(v) = stack.pop() {
                for &(w, e) in &adj[v] {
                    if root[w] == usize::MAX {
                        root[w] = r;
                        depth[w] = depth[v] + 1;
                        up[w] = Some((v, e));
                        stack.push(w);
                    }
                }
            }
        }
        Self { root, depth, up }
    }

    /// Edges on the forest path between `a` and `b`, or `None` when they lie
    /// in different trees.
    fn path(&self, mut a: usize, mut b: usize) -> Option<Vec<EdgeIdx>> {
        if self.root[a] != self.root[b] {
            return None;
        }
        let mut out = Vec::new();
        while self.depth[a] > self.depth[b] {
            let (p, e) = self.up[a].unwrap();
            out.push(e);
            a = p;
        }
        while self.depth[b] > self.depth[a] {
            let (p, e) = self.up[b].unwrap();
            out.push(e);
            b = p;
        }
        while a != b {
            let (pa, ea) = self.up[a].unwrap();
            let (pb, eb) = self.up[b].unwrap();
            out.push(ea);
            out.push(eb);
            a = pa;
            b = pb;
        }
        Some(out)
    }
}

struct Partitioner<'g> {
    graph: &'g Graph,
    k: usize,
    forest_of: Vec<Option<usize>>,
}

enum Search {
    Augmented,
    Stuck(Vec<bool>),
}

impl<'g> Partitioner<'g> {
    fn indices(&self) -> Vec<ForestIndex> {
        let n = self.graph.n();
        (0..self.k)
            .map(|i| {
                let members = (0..self.forest_of.len()).filter(move |&e| self.forest_of[e] == Some(i));
                ForestIndex::build(n, self.graph, members)
            })
            .collect()
    }

    /// Breadth-first search for a shortest exchange path starting at any of
    /// `sources`; applies it when found.
    fn search(&mut self, sources: &[EdgeIdx]) -> Search {
        let m = self.graph.edge_count();
        let forests = self.indices();
        let mut labeled = vec![false; m];
        let mut label: Vec<Option<(EdgeIdx, usize)>> = vec![None; m];
        let mut queue = VecDeque::new();
        for &s in sources {
            labeled[s] = true;
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            let (a, b) = self.graph.edges()[x];
            for (i, forest) in forests.iter().enumerate() {
                if self.forest_of[x] == Some(i) {
                    continue;
                }
                match forest.path(a, b) {
                    None => {
                        self.augment(x, i, &label);
                        return Search::Augmented;
                    }
                    Some(cycle) => {
                        for y in cycle {
                            if !labeled[y] {
                                labeled[y] = true;
                                label[y] = Some((x, i));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        Search::Stuck(labeled)
    }

    fn augment(&mut self, last: EdgeIdx, into: usize, label: &[Option<(EdgeIdx, usize)>]) {
        let (mut cur, mut target) = (last, into);
        loop {
            self.forest_of[cur] = Some(target);
            match label[cur] {
                Some((prev, forest)) => {
                    cur = prev;
                    target = forest;
                }
                None => break,
            }
        }
    }
}

/// Either `k` edge-disjoint spanning trees of `graph`, or a partition
/// witnessing that none exist.
pub fn tree_packing(graph: &Graph, k: usize) -> PackingOutcome {
    let n = graph.n();
    let m = graph.edge_count();
    let mut p = Partitioner {
        graph,
        k,
        forest_of: vec![None; m],
    };
    if k > 0 {
        for e in 0..m {
            // stuck edges stay spanned by the union, so they never need a retry
            let _ = p.search(&[e]);
        }
    }
    let placed = p.forest_of.iter().filter(|f| f.is_some()).count();
    if n == 0 || placed == k * (n - 1) {
        let mut trees = vec![Vec::new(); k];
        for (e, f) in p.forest_of.iter().enumerate() {
            if let Some(i) = f {
                trees[*i].push(e);
            }
        }
        return PackingOutcome::Packing(Decomposition::new(trees));
    }
    let reach = loop {
        let unplaced: Vec<EdgeIdx> = (0..m).filter(|&e| p.forest_of[e].is_none()).collect();
        if unplaced.is_empty() || k == 0 {
            break vec![false; m];
        }
        match p.search(&unplaced) {
            Search::Augmented => continue,
            Search::Stuck(labeled) => break labeled,
        }
    };
    let mut dsu = DisjointSets::new(n);
    for e in (0..m).filter(|&e| reach[e]) {
        let (a, b) = graph.edges()[e];
        dsu.union(a, b);
    }
    let parts = dsu.classes();
    let mut class = vec![0; n];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            class[v] = i;
        }
    }
    let cross_count = graph.edges().iter().filter(|&&(a, b)| class[a] != class[b]).count();
    PackingOutcome::Obstruction(PartitionWitness { parts, cross_count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_splits_into_two_trees() {
        let g = Graph::complete(4);
        match tree_packing(&g, 2) {
            PackingOutcome::Packing(d) => assert!(d.violations_against(&g).is_empty()),
            other => panic!("expected packing, got {other:?}"),
        }
    }

    #[test]
    fn a_tree_cannot_hold_two_trees() {
        let g = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        match tree_packing(&g, 2) {
            PackingOutcome::Obstruction(w) => {
                assert!(w.verify(&g, 2));
                assert_eq!(w.parts.len(), 5);
                assert_eq!(w.cross_count, 4);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn disconnected_graph_has_no_single_tree() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        match tree_packing(&g, 1) {
            PackingOutcome::Obstruction(w) => assert!(w.verify(&g, 1)),
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn k7_minus_triangle_packs_three() {
        let k7 = Graph::complete(7);
        let edges = k7
            .edges()
            .iter()
            .copied()
            .filter(|e| ![(0, 1), (0, 2), (1, 2)].contains(e));
        let g = Graph::new(7, edges).unwrap();
        assert_eq!(g.edge_count(), 18);
        match tree_packing(&g, 3) {
            PackingOutcome::Packing(d) => assert!(d.violations_against(&g).is_empty()),
            other => panic!("expected packing, got {other:?}"),
        }
    }

    #[test]
    fn complete_graph_bound_is_tight() {
        for m in 2..=9 {
            assert!(tree_packing(&Graph::complete(m), m / 2).is_packing());
            match tree_packing(&Graph::complete(m), m / 2 + 1) {
                PackingOutcome::Obstruction(w) => assert!(w.verify(&Graph::complete(m), m / 2 + 1)),
                _ => panic!("K_{m} cannot hold {} trees", m / 2 + 1),
            }
        }
    }
}
