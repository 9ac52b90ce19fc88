//! Problems built from parity, set systems, element trees and type trees.
//! Ban sets are computed on demand; nothing is materialized.

use std::collections::{BTreeMap, HashSet};

use super::{BanProblem, BanRule, Shape, Subset, MAX_ALPHABET};
use crate::dims::{op_rank, vc_witness, ElementTree, RankValue};
use crate::setsystem::{Bits, SetSystem};
use crate::typetree::{Graph, TypeTree};
use crate::{Caps, Error, Result};

/// `f({s}, X) = {1}` if `X` has an even number of ones, else `{0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityRule {
    n: usize,
}

impl ParityRule {
    pub fn new(n: usize) -> Result<ParityRule> {
        Shape::new(n, 1, 2)?;
        Ok(ParityRule { n })
    }
}

impl BanRule for ParityRule {
    fn shape(&self) -> Shape {
        Shape {
            n: self.n,
            k: 1,
            j: 2,
        }
    }

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool {
        let at = s.elems[0];
        let ones = seq.iter().filter(|&&d| d == 1).count() - seq[at] as usize;
        seq[at] == u8::from(ones % 2 == 0)
    }
}

pub fn parity_problem(n: usize) -> Result<BanProblem> {
    Ok(BanProblem::Parity(ParityRule::new(n)?))
}

/// `f(S) = {Z : no member's trace on S has characteristic sequence Z}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcRule {
    shape: Shape,
    sets: Vec<Bits>,
}

impl BanRule for VcRule {
    fn shape(&self) -> Shape {
        self.shape
    }

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool {
        let smask = s.mask as Bits;
        let z = s
            .elems
            .iter()
            .fold(0 as Bits, |m, &i| m | (seq[i] as Bits) << i);
        !self.sets.iter().any(|&a| a & smask == z)
    }
}

/// The independent `m`-fold problem over the universe in ascending order.
/// Needs `vc_dimension(f) < m`; otherwise a shattered `m`-set is named.
pub fn from_vc(f: &SetSystem, m: usize, caps: &Caps) -> Result<BanProblem> {
    let shape = Shape::new(f.universe(), m, 2)?;
    if let Some(w) = vc_witness(f, caps)? {
        if w.len() >= m {
            return Err(Error::input(format!(
                "VC dimension is at least {m}: {:?} is shattered",
                &w[..m]
            )));
        }
    }
    Ok(BanProblem::Vc(VcRule {
        shape,
        sets: f.sets().to_vec(),
    }))
}

/// `Z ∈ f(S, X)` iff no member properly labels the leaf of `X ∧ Z`, where
/// only the nodes at levels in `S` constrain the labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeRule {
    shape: Shape,
    tree: ElementTree,
    sets: Vec<Bits>,
}

impl BanRule for TreeRule {
    fn shape(&self) -> Shape {
        self.shape
    }

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool {
        let last = s.elems[s.elems.len() - 1];
        let (mut inside, mut outside) = (0 as Bits, 0 as Bits);
        let mut node = 0;
        for (level, &d) in seq.iter().enumerate().take(last + 1) {
            if s.contains(level) {
                for (i, &x) in self.tree.label(node).iter().enumerate() {
                    if d >> i & 1 == 1 {
                        inside |= 1 << x;
                    } else {
                        outside |= 1 << x;
                    }
                }
            }
            node = self.tree.child(node, d as usize);
        }
        !self
            .sets
            .iter()
            .any(|&a| a & inside == inside && a & outside == 0)
    }
}

/// The `m`-fold problem of length `height` over the alphabet `2^s` of a
/// `2^s`-ary element tree. Needs `op_rank(f, s) < m`.
pub fn from_element_tree(
    tree: &ElementTree,
    f: &SetSystem,
    m: usize,
    caps: &Caps,
) -> Result<BanProblem> {
    let j = tree.arity();
    if j > MAX_ALPHABET {
        return Err(Error::input(format!("arity {j} exceeds the alphabet limit {MAX_ALPHABET}")));
    }
    let shape = Shape::new(tree.height(), m, j)?;
    if let Some(x) = tree.max_label() {
        if x >= f.universe() {
            return Err(Error::input(format!(
                "tree label {x} outside the universe of size {}",
                f.universe()
            )));
        }
    }
    let rank = op_rank(f, tree.arity_exponent(), caps)?;
    if let RankValue::Finite(r) = rank {
        if r as usize >= m {
            return Err(Error::input(format!(
                "op-rank for s={} is {r}, need it below {m}",
                tree.arity_exponent()
            )));
        }
    }
    Ok(BanProblem::ElementTree(TreeRule {
        shape,
        tree: tree.clone(),
        sets: f.sets().to_vec(),
    }))
}

/// `Z ∈ f(S, X)` iff the prefix of `X ∧ Z` through the last position of
/// `S` is not a node of the type tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeTreeRule {
    shape: Shape,
    index: HashSet<Vec<u8>>,
}

impl BanRule for TypeTreeRule {
    fn shape(&self) -> Shape {
        self.shape
    }

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool {
        let last = s.elems[s.elems.len() - 1];
        !self.index.contains(&seq[..=last])
    }
}

/// The `t`-fold problem of length `h - 1` for a type tree of height `h`.
pub fn from_type_tree(g: &Graph, tt: &TypeTree, t: usize) -> Result<BanProblem> {
    type_tree_level_problem(g, tt, t, tt.height().saturating_sub(1))
}

/// The same rule on sequences of length `len`; its solutions are exactly
/// the nodes at level `len`.
///
/// An empty ban set at `(S, X)` means every `Z` leads into the tree, which
/// spells out a full type tree of height `t + 1`: that tree is returned as
/// [`Error::TreeRankExceeded`].
pub fn type_tree_level_problem(g: &Graph, tt: &TypeTree, t: usize, len: usize) -> Result<BanProblem> {
    if t < 2 {
        return Err(Error::input(format!("type tree problems need t >= 2, got {t}")));
    }
    tt.validate(g)
        .map_err(|v| Error::input(format!("not a type tree: {v}")))?;
    let shape = Shape::new(len, t, 2)?;
    let index: HashSet<Vec<u8>> = tt
        .nodes()
        .keys()
        .map(|k| k.bytes().map(|b| b - b'0').collect())
        .collect();
    if let Some(tree) = full_subtree(tt, &index, t, len) {
        tree.validate_induced(g)
            .map_err(|v| Error::input(format!("extracted tree is invalid: {v}")))?;
        return Err(Error::TreeRankExceeded {
            t,
            tree: Box::new(tree),
        });
    }
    Ok(BanProblem::TypeTree(TypeTreeRule { shape, index }))
}

/// Searches for `S` (size `t`, positions below `len`) and `X` such that
/// every `Z` keeps `(X ∧ Z)` inside the index set through `max S`.
fn full_subtree(tt: &TypeTree, index: &HashSet<Vec<u8>>, t: usize, len: usize) -> Option<TypeTree> {
    if !index.contains(&Vec::new()) {
        return None;
    }
    let mut found = BTreeMap::new();
    search(tt, index, t, len, vec![Vec::new()], 0, &mut found).then(|| {
        TypeTree::new(found).expect("a full binary tree is prefix-closed")
    })
}

/// `strings` are the current prefixes (length `pos`), one per `Z`-prefix
/// after `found.len()` levels of branching, in `Z` order.
fn search(
    tt: &TypeTree,
    index: &HashSet<Vec<u8>>,
    t: usize,
    len: usize,
    strings: Vec<Vec<u8>>,
    pos: usize,
    out: &mut BTreeMap<String, usize>,
) -> bool {
    let branched = strings.len().trailing_zeros() as usize;
    if branched == t {
        for (i, s) in strings.iter().enumerate() {
            out.insert(eta(i, t), vertex(tt, s));
        }
        return true;
    }
    if len - pos < t - branched {
        return false;
    }
    let extend = |bits: &dyn Fn(usize) -> Vec<u8>| -> Option<Vec<Vec<u8>>> {
        let mut next = Vec::new();
        for s in &strings {
            for b in bits(0) {
                let mut e = s.clone();
                e.push(b);
                if !index.contains(&e) {
                    return None;
                }
                next.push(e);
            }
        }
        Some(next)
    };
    // Position `pos` in S: every string splits both ways.
    if let Some(next) = extend(&|_| vec![0, 1]) {
        let mut sub = BTreeMap::new();
        if search(tt, index, t, len, next, pos + 1, &mut sub) {
            for (i, s) in strings.iter().enumerate() {
                out.insert(eta(i, branched), vertex(tt, s));
            }
            out.extend(sub);
            return true;
        }
    }
    // Position `pos` outside S: one shared digit.
    for b in [0u8, 1] {
        if let Some(next) = extend(&|_| vec![b]) {
            if search(tt, index, t, len, next, pos + 1, out) {
                return true;
            }
        }
    }
    false
}

fn eta(i: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|b| if i >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn vertex(tt: &TypeTree, s: &[u8]) -> usize {
    let key: String = s.iter().map(|&d| (b'0' + d) as char).collect();
    tt.vertex(&key).expect("searched strings are nodes")
}
