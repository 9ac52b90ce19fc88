//! Graphs, type trees, tree rank and clique/independent set extraction.
//!
//! A type tree places every vertex at a node of a partial binary tree. The
//! child direction records adjacency to the parent, and adjacency to an
//! ancestor stays constant throughout each subtree. Equivalently, for every
//! proper ancestor `η` of `ν`, `a_η ~ a_ν` iff `ν(|η|) = 1`; the validator
//! checks that form and reports violations against the two original
//! conditions.

mod rank;

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::setsystem::SetSystem;
use crate::{Error, Result};

pub use rank::{check_height_bound, tree_rank, HeightCheck, HeightReport, HeightStatus, TreeRank};

/// Largest vertex count; adjacency rows are `u128` masks.
pub const MAX_VERTICES: usize = 128;

/// A simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u128>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::input(format!("{n} vertices exceed {MAX_VERTICES}")));
        }
        let mut adj = vec![0u128; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at {u}")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Graph { n, adj })
    }

    pub fn complete(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::new(n, &edges)
    }

    pub fn empty(n: usize) -> Result<Graph> {
        Graph::new(n, &[])
    }

    pub fn path(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &edges)
    }

    /// Erdős–Rényi `G(n, p)`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::input(format!("edge probability {p} outside [0, 1]")));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> u128 {
        self.adj[v]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| (u + 1..self.n).filter(move |&v| self.adjacent(u, v)).map(move |v| (u, v)))
            .collect()
    }

    /// The family of neighborhoods `{N(v)}` over the vertex set.
    pub fn neighborhood_system(&self) -> Result<SetSystem> {
        SetSystem::new(self.n, self.adj.iter().copied())
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }

    pub fn is_independent(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v)))
    }
}

/// A labeling of a prefix-closed set of binary strings by vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TypeTree {
    nodes: BTreeMap<String, usize>,
}

impl TypeTree {
    /// Checks that keys are binary strings, closed under initial segments,
    /// and that no vertex is used twice.
    pub fn new(nodes: BTreeMap<String, usize>) -> Result<TypeTree> {
        let mut seen = std::collections::HashSet::new();
        for (key, &v) in &nodes {
            if !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::input(format!("node `{key}` is not a binary string")));
            }
            if !key.is_empty() && !nodes.contains_key(&key[..key.len() - 1]) {
                return Err(Error::input(format!("node `{key}` has no parent")));
            }
            if !seen.insert(v) {
                return Err(Error::input(format!("vertex {v} labels two nodes")));
            }
        }
        Ok(TypeTree { nodes })
    }

    pub fn nodes(&self) -> &BTreeMap<String, usize> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vertex(&self, node: &str) -> Option<usize> {
        self.nodes.get(node).copied()
    }

    /// Number of levels: a lone root has height 1, the empty tree 0.
    pub fn height(&self) -> usize {
        self.nodes.keys().map(|k| k.len() + 1).max().unwrap_or(0)
    }

    /// Node count per level.
    pub fn level_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.height()];
        for k in self.nodes.keys() {
            counts[k.len()] += 1;
        }
        counts
    }

    /// Whether the index set is all of `2^{<h}`.
    pub fn is_full(&self) -> bool {
        let h = self.height();
        h < usize::BITS as usize && self.nodes.len() == (1usize << h) - 1
    }

    /// Checks the type tree conditions against `g` and that every vertex of
    /// `g` is labeled exactly once.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), Violation> {
        self.validate_labels(g, true)
    }

    /// As [`TypeTree::validate`], but for a tree on an induced subgraph.
    pub fn validate_induced(&self, g: &Graph) -> std::result::Result<(), Violation> {
        self.validate_labels(g, false)
    }

    fn validate_labels(&self, g: &Graph, spanning: bool) -> std::result::Result<(), Violation> {
        let mut used = vec![false; g.n];
        for (node, &v) in &self.nodes {
            if v >= g.n {
                return Err(Violation::UnknownVertex {
                    node: node.clone(),
                    vertex: v,
                });
            }
            used[v] = true;
        }
        if spanning {
            if let Some(v) = used.iter().position(|u| !u) {
                return Err(Violation::Unlabeled { vertex: v });
            }
        }
        for (node, &v) in &self.nodes {
            for depth in 0..node.len() {
                let ancestor = &node[..depth];
                let bit = node.as_bytes()[depth] == b'1';
                let a = self.nodes[ancestor];
                if g.adjacent(a, v) != bit {
                    return Err(if depth + 1 == node.len() {
                        Violation::Condition1 {
                            parent: ancestor.to_string(),
                            child: node.clone(),
                        }
                    } else {
                        Violation::Condition2 {
                            ancestor: ancestor.to_string(),
                            child: node[..depth + 1].to_string(),
                            descendant: node.clone(),
                        }
                    });
                }
            }
        }
        Ok(())
    }
}

/// The first way a labeling fails to be a type tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    UnknownVertex { node: String, vertex: usize },
    Unlabeled { vertex: usize },
    /// The child's adjacency to its parent disagrees with its direction.
    Condition1 { parent: String, child: String },
    /// Adjacency to `ancestor` differs between `child` and `descendant`.
    Condition2 {
        ancestor: String,
        child: String,
        descendant: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex { node, vertex } => {
                write!(f, "node `{node}` is labeled by unknown vertex {vertex}")
            }
            Violation::Unlabeled { vertex } => write!(f, "vertex {vertex} is not in the tree"),
            Violation::Condition1 { parent, child } => {
                write!(f, "child `{child}` has the wrong adjacency to parent `{parent}`")
            }
            Violation::Condition2 {
                ancestor,
                child,
                descendant,
            } => write!(
                f,
                "`{child}` and `{descendant}` disagree on adjacency to `{ancestor}`"
            ),
        }
    }
}

/// Inserts the vertices in `order`: each walks down from the root, turning
/// toward 1 at every node whose vertex it is adjacent to, and settles at the
/// first free position. `order` must list every vertex once.
pub fn build_type_tree(g: &Graph, order: &[usize]) -> Result<TypeTree> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..g.n).collect::<Vec<_>>() {
        return Err(Error::input("insertion order must be a permutation of the vertices"));
    }
    let mut nodes = BTreeMap::new();
    for &v in order {
        let mut key = String::new();
        while let Some(&a) = nodes.get(&key) {
            key.push(if g.adjacent(a, v) { '1' } else { '0' });
        }
        nodes.insert(key, v);
    }
    Ok(TypeTree { nodes })
}

/// Insertion in natural vertex order.
pub fn build_type_tree_natural(g: &Graph) -> TypeTree {
    let order: Vec<usize> = (0..g.n).collect();
    build_type_tree(g, &order).expect("identity order")
}

/// Insertion in a uniformly shuffled order.
pub fn build_type_tree_shuffled<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> TypeTree {
    let mut order: Vec<usize> = (0..g.n).collect();
    order.shuffle(rng);
    build_type_tree(g, &order).expect("shuffled order")
}

/// A clique and an independent set, each read off a branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub clique_branch: String,
    pub clique: Vec<usize>,
    pub independent_branch: String,
    pub independent: Vec<usize>,
}

impl Extraction {
    pub fn largest(&self) -> usize {
        self.clique.len().max(self.independent.len())
    }
}

/// Along a branch `η`, an ancestor where `η` turns 1 is adjacent to every
/// vertex below it and one turning 0 to none. The 1-turns plus the bottom
/// vertex form a clique, the 0-turns plus the bottom vertex an independent
/// set. Each set is taken from the branch where it is largest, so both are
/// at least as large as on a deepest branch.
pub fn extract_clique_or_independent(tt: &TypeTree) -> Extraction {
    let mut best = Extraction {
        clique_branch: String::new(),
        clique: vec![],
        independent_branch: String::new(),
        independent: vec![],
    };
    for branch in tt.nodes.keys() {
        let ones = branch.bytes().filter(|&b| b == b'1').count();
        let zeros = branch.len() - ones;
        if ones + 1 > best.clique.len() {
            best.clique = branch_set(tt, branch, b'1');
            best.clique_branch = branch.clone();
        }
        if zeros + 1 > best.independent.len() {
            best.independent = branch_set(tt, branch, b'0');
            best.independent_branch = branch.clone();
        }
    }
    best
}

fn branch_set(tt: &TypeTree, branch: &str, turn: u8) -> Vec<usize> {
    let mut out: Vec<usize> = branch
        .bytes()
        .enumerate()
        .filter(|&(_, b)| b == turn)
        .map(|(m, _)| tt.nodes[&branch[..m]])
        .collect();
    out.push(tt.nodes[branch]);
    out
}
