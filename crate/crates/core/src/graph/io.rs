//! Text, JSON and DOT formats for graphs and instances.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Decomposition, Graph, Instance};
use crate::error::{Error, Result};

/// On-disk instance layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub q: usize,
    pub edges: Vec<[usize; 2]>,
    pub trees: Vec<Vec<usize>>,
    pub anchors: Option<[usize; 3]>,
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        Self {
            n: inst.n(),
            q: inst.q,
            edges: inst.graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            trees: inst.decomposition.trees.clone(),
            anchors: inst.anchors,
        }
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        let graph = Graph::new(f.n, f.edges.iter().map(|e| (e[0], e[1])))?;
        Ok(Instance {
            graph,
            decomposition: Decomposition::new(f.trees),
            q: f.q,
            anchors: f.anchors,
        })
    }
}

impl Instance {
    /// Compact, deterministic JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&InstanceFile::from(self)).expect("instance serializes")
    }

    /// Parses JSON into an instance. The graph must be simple; decomposition
    /// and anchor invariants are left to [`Instance::verify`].
    pub fn from_json(s: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(s)?;
        f.try_into()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// SHA-256 of the JSON form, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// Graphviz rendering: edges colored by tree, anchors drawn as filled
    /// double circles.
    pub fn to_dot(&self) -> String {
        let owners = self.decomposition.owners(self.graph.edge_count());
        let mut out = String::from("graph G {\n  node [shape=circle];\n");
        for v in 0..self.n() {
            let anchor = self.anchors.is_some_and(|a| a.contains(&v));
            if anchor {
                let _ = writeln!(out, "  {v} [shape=doublecircle, style=filled, fillcolor=gold];");
            } else {
                let _ = writeln!(out, "  {v};");
            }
        }
        for (e, &(a, b)) in self.graph.edges().iter().enumerate() {
            let color = match owners[e] {
                Some(t) => TreeColors::get(t),
                None => "gray",
            };
            let tree = owners[e].map_or("-".to_string(), |t| t.to_string());
            let _ = writeln!(out, "  {a} -- {b} [color={color}, label=\"e{e}/T{tree}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// Palette for tree coloring in DOT output.
pub struct TreeColors;

impl TreeColors {
    const PALETTE: [&'static str; 10] = [
        "red",
        "blue",
        "darkgreen",
        "orange",
        "purple",
        "brown",
        "magenta",
        "cyan4",
        "olivedrab",
        "navy",
    ];

    pub fn get(tree: usize) -> &'static str {
        Self::PALETTE[tree % Self::PALETTE.len()]
    }
}

impl Graph {
    /// `"n m"` header, then one `"u v"` line per edge in index order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count());
        for &(a, b) in self.edges() {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing \"n m\" header".into()))?;
        let (n, m) = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::new(n, edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| Error::Parse(format!("not a non-negative integer: {t:?}")))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(Error::Parse(format!("expected two integers, got {line:?}"))),
    }
}
