//! Board graphs, spanning-tree decompositions and anchored instances.
//!
//! Edges are addressed by their position in [`Graph::edges`]; every other
//! module talks in edge indices rather than vertex pairs.

mod canon;
mod complete;
mod dsu;
mod io;
mod packing;

pub use canon::{automorphisms, canonical_form, CanonicalCode, CANON_MAX_N};
pub use complete::{complete_tree_pairs, decompose_complete};
pub use dsu::DisjointSets;
pub use io::{InstanceFile, TreeColors};
pub use packing::{tree_packing, PackingOutcome, PartitionWitness};

use std::fmt;

use crate::error::{Error, Result};

pub type EdgeIdx = usize;

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalizing each pair to `(min, max)`. Rejects loops,
    /// duplicate pairs and endpoints `>= n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut out = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge {}-{}", e.0, e.1)));
            }
            out.push(e);
        }
        Ok(Self { n, edges: out })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeIdx) -> Result<(usize, usize)> {
        self.edges.get(e).copied().ok_or(Error::EdgeOutOfRange {
            index: e,
            len: self.edges.len(),
        })
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<EdgeIdx> {
        let key = (a.min(b), a.max(b));
        self.edges.iter().position(|&e| e == key)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// The complement graph, with edges in lexicographic order.
    pub fn complement(&self) -> Self {
        let mut adj = vec![vec![false; self.n]; self.n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
        }
        let edges = (0..self.n)
            .flat_map(|a| (a + 1..self.n).map(move |b| (a, b)))
            .filter(|&(a, b)| !adj[a][b])
            .collect::<Vec<_>>();
        Self::new(self.n, edges).expect("complement is simple")
    }

    /// Relabels vertex `v` as `perm[v]`, keeping edge order.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Precondition(format!(
                "permutation has length {}, graph has {} vertices",
                perm.len(),
                self.n
            )));
        }
        Self::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    fn check_indices(&self, edges: &[EdgeIdx]) -> Result<()> {
        match edges.iter().find(|&&e| e >= self.edges.len()) {
            Some(&index) => Err(Error::EdgeOutOfRange {
                index,
                len: self.edges.len(),
            }),
            None => Ok(()),
        }
    }
}

/// Connected components of `(0..n, chosen)`, each sorted, ordered by
/// smallest member. Untouched vertices come back as singletons.
pub fn components(graph: &Graph, chosen: &[EdgeIdx]) -> Result<Vec<Vec<usize>>> {
    graph.check_indices(chosen)?;
    let mut dsu = DisjointSets::new(graph.n);
    for &e in chosen {
        let (a, b) = graph.edges[e];
        dsu.union(a, b);
    }
    Ok(dsu.classes())
}

/// `true` iff `edges` has exactly `n - 1` distinct members that connect all
/// vertices of `graph`.
pub fn is_spanning_tree(graph: &Graph, edges: &[EdgeIdx]) -> Result<bool> {
    graph.check_indices(edges)?;
    if graph.n == 0 || edges.len() != graph.n - 1 {
        return Ok(false);
    }
    let mut dsu = DisjointSets::new(graph.n);
    for &e in edges {
        let (a, b) = graph.edges[e];
        if !dsu.union(a, b) {
            return Ok(false);
        }
    }
    Ok(dsu.set_count() == 1)
}

/// `k` edge-index sets over a parent graph, intended to be spanning trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub trees: Vec<Vec<EdgeIdx>>,
}

impl Decomposition {
    pub fn new(trees: Vec<Vec<EdgeIdx>>) -> Self {
        Self { trees }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Tree index owning each edge, `None` for uncovered edges. Edges claimed
    /// twice keep their first owner.
    pub fn owners(&self, edge_count: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; edge_count];
        for (t, tree) in self.trees.iter().enumerate() {
            for &e in tree {
                if e < edge_count && owner[e].is_none() {
                    owner[e] = Some(t);
                }
            }
        }
        owner
    }

    /// Checks that the sets are pairwise disjoint spanning trees of `graph`.
    /// Coverage of the whole edge set is not required here.
    pub fn violations_against(&self, graph: &Graph) -> Vec<Violation> {
        let mut out = Vec::new();
        let m = graph.edge_count();
        let mut owner: Vec<Option<usize>> = vec![None; m];
        let expected = graph.n().saturating_sub(1);
        for (t, tree) in self.trees.iter().enumerate() {
            let mut valid = Vec::with_capacity(tree.len());
            for &e in tree {
                if e >= m {
                    out.push(Violation::EdgeIndexOutOfRange { tree: t, edge: e });
                    continue;
                }
                match owner[e] {
                    Some(prev) if prev == t => out.push(Violation::RepeatedInTree { tree: t, edge: e }),
                    Some(prev) => out.push(Violation::SharedEdge {
                        edge: e,
                        first: prev,
                        second: t,
                    }),
                    None => owner[e] = Some(t),
                }
                valid.push(e);
            }
            if tree.len() != expected {
                out.push(Violation::TreeSize {
                    tree: t,
                    actual: tree.len(),
                    expected,
                });
            } else if !is_spanning_tree(graph, &valid).unwrap_or(false) {
                out.push(Violation::NotSpanning { tree: t });
            }
        }
        out
    }
}

/// A board graph with a certified decomposition into `q + 1` spanning trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub decomposition: Decomposition,
    pub q: usize,
    pub anchors: Option<[usize; 3]>,
}

impl Instance {
    /// Builds an instance from trees given as vertex pairs. The edge list is
    /// the union of all trees in lexicographic order.
    pub fn from_tree_pairs(
        n: usize,
        q: usize,
        trees: &[Vec<(usize, usize)>],
        anchors: Option<[usize; 3]>,
    ) -> Result<Self> {
        let mut all: Vec<(usize, usize)> = trees.iter().flatten().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        all.sort_unstable();
        let graph = Graph::new(n, all.iter().copied())?;
        let index: rustc_hash::FxHashMap<(usize, usize), usize> =
            all.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let trees = trees
            .iter()
            .map(|t| {
                let mut ids: Vec<usize> = t.iter().map(|&(a, b)| index[&(a.min(b), a.max(b))]).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        Ok(Self {
            graph,
            decomposition: Decomposition::new(trees),
            q,
            anchors,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn trees(&self) -> usize {
        self.q + 1
    }

    /// Trees of the decomposition as vertex pairs.
    pub fn tree_pairs(&self) -> Vec<Vec<(usize, usize)>> {
        self.decomposition
            .trees
            .iter()
            .map(|t| t.iter().map(|&e| self.graph.edges()[e]).collect())
            .collect()
    }

    /// Edges with at least one anchor endpoint (empty without anchors).
    pub fn anchor_edges(&self) -> Vec<EdgeIdx> {
        match self.anchors {
            None => Vec::new(),
            Some(a) => (0..self.graph.edge_count())
                .filter(|&e| {
                    let (x, y) = self.graph.edges()[e];
                    a.contains(&x) || a.contains(&y)
                })
                .collect(),
        }
    }

    /// Returns every violated invariant; an empty list means the instance
    /// is valid.
    pub fn violations(&self) -> Vec<Violation> {
        let g = &self.graph;
        let n = g.n();
        let m = g.edge_count();
        let k = self.q + 1;
        let mut out = Vec::new();
        if n < 2 {
            out.push(Violation::TooFewVertices { n });
        }
        if m != k * n.saturating_sub(1) {
            out.push(Violation::EdgeCount {
                actual: m,
                expected: k * n.saturating_sub(1),
            });
        }
        if self.decomposition.len() != k {
            out.push(Violation::TreeCount {
                actual: self.decomposition.len(),
                expected: k,
            });
        }
        out.extend(self.decomposition.violations_against(g));
        let owners = self.decomposition.owners(m);
        for (e, o) in owners.iter().enumerate() {
            if o.is_none() {
                out.push(Violation::UncoveredEdge { edge: e });
            }
        }
        if let Some(anchors) = self.anchors {
            let [a, b, c] = anchors;
            if anchors.iter().any(|&v| v >= n) {
                out.push(Violation::AnchorOutOfRange { anchors });
                return out;
            }
            if a == b || b == c || a == c {
                out.push(Violation::AnchorsNotDistinct { anchors });
            }
            for (x, y) in [(a, b), (b, c), (a, c)] {
                if x != y && g.find_edge(x, y).is_none() {
                    out.push(Violation::AnchorPairMissing { a: x, b: y });
                }
            }
            let deg = g.degrees();
            for v in anchors {
                if deg[v] != self.q + 2 {
                    out.push(Violation::AnchorDegree {
                        vertex: v,
                        degree: deg[v],
                        expected: self.q + 2,
                    });
                }
            }
        }
        out
    }

    /// `Ok(())` when every invariant holds, otherwise all violations.
    pub fn verify(&self) -> std::result::Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}

/// Free-function form of [`Instance::verify`].
pub fn verify_instance(inst: &Instance) -> std::result::Result<(), Vec<Violation>> {
    inst.verify()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TooFewVertices {
        n: usize,
    },
    EdgeCount {
        actual: usize,
        expected: usize,
    },
    TreeCount {
        actual: usize,
        expected: usize,
    },
    EdgeIndexOutOfRange {
        tree: usize,
        edge: EdgeIdx,
    },
    RepeatedInTree {
        tree: usize,
        edge: EdgeIdx,
    },
    SharedEdge {
        edge: EdgeIdx,
        first: usize,
        second: usize,
    },
    TreeSize {
        tree: usize,
        actual: usize,
        expected: usize,
    },
    NotSpanning {
        tree: usize,
    },
    UncoveredEdge {
        edge: EdgeIdx,
    },
    AnchorOutOfRange {
        anchors: [usize; 3],
    },
    AnchorsNotDistinct {
        anchors: [usize; 3],
    },
    AnchorPairMissing {
        a: usize,
        b: usize,
    },
    AnchorDegree {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            TooFewVertices { n } => write!(f, "instance has {n} vertices, need at least 2"),
            EdgeCount { actual, expected } => {
                write!(f, "graph has {actual} edges, expected (q+1)(n-1) = {expected}")
            }
            TreeCount { actual, expected } => {
                write!(f, "decomposition has {actual} trees, expected q+1 = {expected}")
            }
            EdgeIndexOutOfRange { tree, edge } => {
                write!(f, "tree {tree} references edge {edge}, which does not exist")
            }
            RepeatedInTree { tree, edge } => write!(f, "tree {tree} lists edge {edge} twice"),
            SharedEdge { edge, first, second } => {
                write!(f, "edge {edge} belongs to both tree {first} and tree {second}")
            }
            TreeSize { tree, actual, expected } => {
                write!(f, "tree {tree} has {actual} edges, expected {expected}")
            }
            NotSpanning { tree } => write!(f, "tree {tree} is not a spanning tree"),
            UncoveredEdge { edge } => write!(f, "edge {edge} is not in any tree"),
            AnchorOutOfRange { anchors } => write!(f, "anchors {anchors:?} out of range"),
            AnchorsNotDistinct { anchors } => write!(f, "anchors {anchors:?} are not distinct"),
            AnchorPairMissing { a, b } => write!(f, "anchor pair {a}-{b} is not an edge"),
            AnchorDegree {
                vertex,
                degree,
                expected,
            } => write!(
                f,
                "anchor degree \u{2260} q+2: vertex {vertex} has degree {degree}, expected {expected}"
            ),
        }
    }
}
