use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::{Graph, TypeTree};
use crate::dims::{thicket_dimension, RankValue};
use crate::{Caps, Result};

/// Tree rank, or bounds on it when the graph is above the exact-search cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeRank {
    pub lower: u32,
    pub upper: u32,
    pub exact: bool,
    /// A full type tree of height `lower` on an induced subgraph.
    pub witness: TypeTree,
}

impl TreeRank {
    pub fn value(&self) -> Option<u32> {
        self.exact.then_some(self.lower)
    }
}

/// Largest `t` with a full binary type tree of height `t` on some set of
/// vertices.
///
/// A full tree of height `t+1` on a pool `P` is a root `v ∈ P` with full
/// trees of height `t` on `P \ N[v]` and on `P ∩ N(v)`, so
/// `rank(P) = max_v 1 + min(rank(P \ N[v]), rank(P ∩ N(v)))`. Exact up to
/// `caps.tree_rank_vertices`; above that the lower bound comes from a
/// shallow search and the upper bound from the thicket dimension of the
/// neighborhood system plus one.
pub fn tree_rank(g: &Graph, caps: &Caps) -> Result<TreeRank> {
    let n = g.vertex_count();
    let all = if n == 0 { 0 } else { u128::MAX >> (128 - n) };
    let log_bound = (n as u64 + 1).ilog2();
    let thicket_bound = match thicket_dimension(&g.neighborhood_system()?) {
        RankValue::NegInfinity => 0,
        RankValue::Finite(d) => d + 1,
    };
    if n <= caps.tree_rank_vertices.min(24) {
        let mut search = Exact {
            g,
            memo: vec![u8::MAX; 1 << n],
        };
        let rank = search.rank(all as u32) as u32;
        let mut nodes = BTreeMap::new();
        search.build(all as u32, rank as u8, String::new(), &mut nodes);
        return Ok(TreeRank {
            lower: rank,
            upper: rank,
            exact: true,
            witness: TypeTree { nodes },
        });
    }
    let mut nodes = BTreeMap::new();
    let lower = greedy(g, all, 2, String::new(), &mut nodes);
    let upper = thicket_bound.min(log_bound).max(lower);
    Ok(TreeRank {
        lower,
        upper,
        exact: lower == upper,
        witness: TypeTree { nodes },
    })
}

struct Exact<'a> {
    g: &'a Graph,
    memo: Vec<u8>,
}

impl Exact<'_> {
    fn pools(&self, pool: u32, v: usize) -> (u32, u32) {
        let nb = self.g.neighbors(v) as u32;
        (pool & !nb & !(1 << v), pool & nb)
    }

    fn rank(&mut self, pool: u32) -> u8 {
        if pool == 0 {
            return 0;
        }
        if self.memo[pool as usize] != u8::MAX {
            return self.memo[pool as usize];
        }
        let ceiling = (pool.count_ones() + 1).ilog2() as u8;
        let mut best = 1;
        let mut rest = pool;
        while rest != 0 && best < ceiling {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (p0, p1) = self.pools(pool, v);
            let cap = (p0.count_ones().min(p1.count_ones()) + 1).ilog2() as u8;
            if cap + 1 <= best {
                continue;
            }
            let a = self.rank(p0);
            if a + 1 <= best {
                continue;
            }
            let b = self.rank(p1);
            best = best.max(1 + a.min(b));
        }
        self.memo[pool as usize] = best;
        best
    }

    fn build(&mut self, pool: u32, height: u8, key: String, out: &mut BTreeMap<String, usize>) {
        if height == 0 {
            return;
        }
        let mut rest = pool;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (p0, p1) = self.pools(pool, v);
            if self.rank(p0) + 1 >= height && self.rank(p1) + 1 >= height {
                out.insert(key.clone(), v);
                self.build(p0, height - 1, format!("{key}0"), out);
                self.build(p1, height - 1, format!("{key}1"), out);
                return;
            }
        }
        unreachable!("pool supports the requested height");
    }
}

/// A full tree found by trying every root for the top `depth` levels and
/// the most balanced split below. Returns its height.
fn greedy(g: &Graph, pool: u128, depth: u32, key: String, out: &mut BTreeMap<String, usize>) -> u32 {
    if pool == 0 {
        return 0;
    }
    let split = |v: usize| (pool & !g.neighbors(v) & !(1 << v), pool & g.neighbors(v));
    let vertices: Vec<usize> = (0..128).filter(|&v| pool >> v & 1 == 1).collect();
    let candidates: Vec<usize> = if depth > 0 {
        vertices
    } else {
        let best = vertices
            .iter()
            .copied()
            .max_by_key(|&v| {
                let (p0, p1) = split(v);
                (p0.count_ones().min(p1.count_ones()), std::cmp::Reverse(v))
            })
            .unwrap();
        vec![best]
    };
    let mut best: Option<(u32, BTreeMap<String, usize>)> = None;
    for v in candidates {
        let (p0, p1) = split(v);
        let mut sub0 = BTreeMap::new();
        let mut sub1 = BTreeMap::new();
        let a = greedy(g, p0, depth.saturating_sub(1), format!("{key}0"), &mut sub0);
        let b = greedy(g, p1, depth.saturating_sub(1), format!("{key}1"), &mut sub1);
        let h = 1 + a.min(b);
        if best.as_ref().map_or(true, |(bh, _)| h > *bh) {
            let mut nodes = BTreeMap::from([(key.clone(), v)]);
            // Trim both subtrees to the common height.
            nodes.extend(sub0.into_iter().chain(sub1).filter(|(k, _)| k.len() < key.len() + h as usize));
            best = Some((h, nodes));
        }
    }
    let (h, nodes) = best.unwrap();
    out.extend(nodes);
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightStatus {
    Holds,
    Fails,
    /// `t < 2` or `h < 2t`.
    NotApplicable,
    /// Tree rank is only bounded and some candidate value would fail.
    Inconclusive,
}

/// `(h-1)^t` against `n (t-2)!` for one candidate `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightCheck {
    pub t: u32,
    pub applicable: bool,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightReport {
    pub n: usize,
    pub h: usize,
    pub rank_lower: u32,
    pub rank_upper: u32,
    pub rank_exact: bool,
    pub checks: Vec<HeightCheck>,
    pub status: HeightStatus,
}

/// Checks `(h-1)^t >= n (t-2)!` for a type tree of height `h` on all `n`
/// vertices of a graph of tree rank `t`, when `t >= 2` and `h >= 2t`. With a
/// bounded rank every candidate `t` in the bounds is checked.
pub fn check_height_bound(g: &Graph, tt: &TypeTree, caps: &Caps) -> Result<HeightReport> {
    tt.validate(g)
        .map_err(|v| crate::Error::input(format!("not a type tree: {v}")))?;
    let rank = tree_rank(g, caps)?;
    let n = g.vertex_count();
    let h = tt.height();
    let checks: Vec<HeightCheck> = (rank.lower..=rank.upper)
        .map(|t| {
            let applicable = t >= 2 && h >= 2 * t as usize;
            let lhs = BigUint::from(h.saturating_sub(1)).pow(t);
            let fact: BigUint = (1..=t.saturating_sub(2) as u64).map(BigUint::from).product();
            let rhs = BigUint::from(n) * fact;
            HeightCheck {
                t,
                applicable,
                holds: lhs >= rhs,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }
        })
        .collect();
    let relevant: Vec<&HeightCheck> = checks.iter().filter(|c| c.applicable).collect();
    let status = if relevant.is_empty() {
        HeightStatus::NotApplicable
    } else if relevant.iter().all(|c| c.holds) {
        HeightStatus::Holds
    } else if rank.exact {
        HeightStatus::Fails
    } else {
        HeightStatus::Inconclusive
    };
    Ok(HeightReport {
        n,
        h,
        rank_lower: rank.lower,
        rank_upper: rank.upper,
        rank_exact: rank.exact,
        checks,
        status,
    })
}
