use rand::Rng;
use serde::Serialize;

use crate::setsystem::{Bits, SetSystem};
use crate::{Error, Result};

/// A `2^s`-ary element tree of height `n`: every node above the leaves
/// carries an `s`-tuple of universe elements. `s = 1` gives binary element
/// trees.
///
/// Nodes are stored level by level; the children of node `i` are
/// `i * 2^s + 1 + d` for digits `d` in `0..2^s`. Digit `d` encodes the
/// membership pattern sigma, bit `i` of `d` being membership of tuple entry `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementTree {
    arity_exponent: usize,
    height: usize,
    labels: Vec<Vec<usize>>,
}

impl ElementTree {
    pub fn new(arity_exponent: usize, height: usize, labels: Vec<Vec<usize>>) -> Result<Self> {
        if arity_exponent == 0 || arity_exponent > 6 {
            return Err(Error::input("arity exponent must be in 1..=6"));
        }
        let expected = internal_nodes(arity_exponent, height)?;
        if labels.len() != expected {
            return Err(Error::input(format!(
                "tree of height {height} with arity 2^{arity_exponent} needs {expected} labels, got {}",
                labels.len()
            )));
        }
        if let Some(i) = labels.iter().position(|l| l.len() != arity_exponent) {
            return Err(Error::input(format!("node {i} label is not a {arity_exponent}-tuple")));
        }
        Ok(ElementTree {
            arity_exponent,
            height,
            labels,
        })
    }

    /// Every node labeled with independent uniform elements of `[universe]`.
    pub fn random<R: Rng + ?Sized>(
        arity_exponent: usize,
        height: usize,
        universe: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if universe == 0 && height > 0 {
            return Err(Error::input("cannot label a tree from an empty universe"));
        }
        let count = internal_nodes(arity_exponent, height)?;
        let labels = (0..count)
            .map(|_| (0..arity_exponent).map(|_| rng.gen_range(0..universe)).collect())
            .collect();
        ElementTree::new(arity_exponent, height, labels)
    }

    pub fn arity_exponent(&self) -> usize {
        self.arity_exponent
    }

    pub fn arity(&self) -> usize {
        1 << self.arity_exponent
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn label(&self, node: usize) -> &[usize] {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn child(&self, node: usize, digit: usize) -> usize {
        node * self.arity() + 1 + digit
    }

    pub fn max_label(&self) -> Option<usize> {
        self.labels.iter().flatten().copied().max()
    }

    /// Whether `set` properly labels the leaf reached by `path` (one digit per level).
    pub fn properly_labels(&self, set: Bits, path: &[usize]) -> bool {
        let mut node = 0;
        for &d in path {
            if pattern(set, self.label(node)) != d {
                return false;
            }
            node = self.child(node, d);
        }
        true
    }

    /// Number of leaves properly labeled by some member of `f`. Each member
    /// follows exactly one path, so this is the number of distinct paths.
    pub fn properly_labeled_leaves(&self, f: &SetSystem) -> u128 {
        let mut paths: Vec<Vec<usize>> = f.sets().iter().map(|&s| self.path_of(s)).collect();
        paths.sort();
        paths.dedup();
        paths.len() as u128
    }

    /// The leaf a set follows: at each node, the digit of its membership pattern.
    pub fn path_of(&self, set: Bits) -> Vec<usize> {
        let mut node = 0;
        let mut path = Vec::with_capacity(self.height);
        for _ in 0..self.height {
            let d = pattern(set, self.label(node));
            path.push(d);
            node = self.child(node, d);
        }
        path
    }
}

/// Membership pattern of `set` on a tuple, as a digit.
pub(crate) fn pattern(set: Bits, tuple: &[usize]) -> usize {
    tuple
        .iter()
        .enumerate()
        .fold(0, |d, (i, &x)| d | ((set >> x & 1) as usize) << i)
}

fn internal_nodes(s: usize, height: usize) -> Result<usize> {
    let arity = 1usize << s;
    let mut total: usize = 0;
    let mut level: usize = 1;
    for _ in 0..height {
        total = total
            .checked_add(level)
            .filter(|&t| t <= 1 << 24)
            .ok_or_else(|| Error::input("element tree too large"))?;
        level = level.saturating_mul(arity);
    }
    Ok(total)
}
