//! Exact dimensions and shatter functions of finite set systems.
//!
//! All recursions run over subfamilies of the input family, encoded as bit
//! masks over the (sorted) member list. Because every child of a subfamily
//! is again a subfamily, those masks are canonical memo keys.

mod audit;
mod tree;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combin::subsets;
use crate::setsystem::{Bits, SetSystem};
use crate::{Caps, Error, Result};

pub use audit::{audit_bounds, AuditRow, BoundAuditReport, Quantity};
pub use tree::ElementTree;

/// A rank or dimension: a non-negative integer, or `-inf` for the empty family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RankValue {
    NegInfinity,
    Finite(u32),
}

impl RankValue {
    pub fn finite(self) -> Option<u32> {
        match self {
            RankValue::Finite(v) => Some(v),
            RankValue::NegInfinity => None,
        }
    }

    /// `self + 1`, with `-inf + 1 = -inf`.
    pub fn succ(self) -> RankValue {
        match self {
            RankValue::Finite(v) => RankValue::Finite(v + 1),
            RankValue::NegInfinity => RankValue::NegInfinity,
        }
    }

    fn from_raw(v: i32) -> RankValue {
        if v < 0 {
            RankValue::NegInfinity
        } else {
            RankValue::Finite(v as u32)
        }
    }

    /// Value as a signed integer with `-inf` mapped to `-1`, for bound sums
    /// where an empty index range is intended.
    pub fn as_i64(self) -> i64 {
        self.finite().map_or(-1, i64::from)
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::NegInfinity => f.write_str("-inf"),
            RankValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for RankValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RankValue::NegInfinity => s.serialize_str("-inf"),
            RankValue::Finite(v) => s.serialize_u32(*v),
        }
    }
}

impl<'de> Deserialize<'de> for RankValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(RankValue::Finite(v)),
            Raw::Text(t) if t == "-inf" => Ok(RankValue::NegInfinity),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected integer or \"-inf\", got {t:?}"))),
        }
    }
}

/// Subfamily of a fixed root family, one bit per root member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Mask(Box<[u64]>);

impl Mask {
    fn full(len: usize) -> Mask {
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if len % 64 != 0 {
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        Mask(words.into_boxed_slice())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn and(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & !b).collect())
    }
}

/// Root family with its per-element membership columns.
struct Columns {
    universe: usize,
    root: Mask,
    cols: Vec<Mask>,
}

impl Columns {
    fn new(f: &SetSystem) -> Columns {
        let words = f.len().div_ceil(64).max(1);
        let cols = (0..f.universe())
            .map(|x| {
                let mut m = vec![0u64; words];
                for (i, &s) in f.sets().iter().enumerate() {
                    if s >> x & 1 == 1 {
                        m[i / 64] |= 1 << (i % 64);
                    }
                }
                Mask(m.into_boxed_slice())
            })
            .collect();
        let mut root = Mask::full(f.len());
        if root.0.is_empty() {
            root = Mask(vec![0u64; 1].into_boxed_slice());
        }
        Columns {
            universe: f.universe(),
            root,
            cols,
        }
    }

    /// The `2^s` children of `mask` on the tuple `xs`, indexed by `sigma`
    /// with bit `i` of the index giving membership of `xs[i]`.
    fn children(&self, mask: &Mask, xs: &[usize]) -> Vec<Mask> {
        let mut parts = vec![mask.clone()];
        for &x in xs {
            let col = &self.cols[x];
            let mut next = Vec::with_capacity(parts.len() * 2);
            for p in &parts {
                next.push(p.and_not(col));
            }
            for p in &parts {
                next.push(p.and(col));
            }
            parts = next;
        }
        parts
    }
}

fn floor_log2(c: u32) -> u32 {
    31 - c.max(1).leading_zeros()
}

fn check_universe(f: &SetSystem, limit: usize, cap: &'static str) -> Result<()> {
    Error::check_cap(cap, f.universe() as u128, limit as u128)
}

/// Whether the family's trace on `y` is the full powerset of `y`.
pub fn shatters(f: &SetSystem, y: &[usize]) -> Result<bool> {
    if let Some(&x) = y.iter().find(|&&x| x >= f.universe()) {
        return Err(Error::input(format!("element {x} outside universe of size {}", f.universe())));
    }
    let keep = crate::combin::mask_of(y);
    Ok(shatters_mask(f, keep))
}

fn shatters_mask(f: &SetSystem, keep: Bits) -> bool {
    let k = keep.count_ones();
    if k >= 127 {
        return false;
    }
    f.len() as u128 >= 1u128 << k && f.trace_count(keep) as u128 == 1u128 << k
}

/// Some largest shattered set, or `None` for the empty family.
pub fn vc_witness(f: &SetSystem, caps: &Caps) -> Result<Option<Vec<usize>>> {
    check_universe(f, caps.vc_universe, "vc_universe")?;
    if f.is_empty() {
        return Ok(None);
    }
    // Shattered sets are closed under subsets, so grow level by level.
    let n = f.universe();
    let mut level: Vec<Bits> = vec![0];
    loop {
        let mut next: Vec<Bits> = Vec::new();
        for &y in &level {
            let top = if y == 0 { 0 } else { 128 - y.leading_zeros() as usize };
            for x in top..n {
                let cand = y | 1u128 << x;
                if shatters_mask(f, cand) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return Ok(Some(crate::combin::indices_of(level[0])));
        }
        level = next;
    }
}

pub fn vc_dimension(f: &SetSystem, caps: &Caps) -> Result<RankValue> {
    Ok(match vc_witness(f, caps)? {
        None => RankValue::NegInfinity,
        Some(w) => RankValue::Finite(w.len() as u32),
    })
}

/// `pi_F(n)`: the largest projection onto an `n`-subset of the universe.
pub fn vc_shatter_function(f: &SetSystem, n: usize, caps: &Caps) -> Result<u128> {
    check_universe(f, caps.vc_universe, "vc_universe")?;
    if n > f.universe() {
        return Err(Error::input(format!(
            "shatter function argument {n} exceeds universe size {}",
            f.universe()
        )));
    }
    if f.is_empty() {
        return Ok(0);
    }
    let ceiling = (f.len() as u128).min(if n >= 127 { u128::MAX } else { 1u128 << n });
    let mut best = 0u128;
    for y in subsets(f.universe(), n) {
        let c = f.trace_count(crate::combin::mask_of(&y)) as u128;
        best = best.max(c);
        if best == ceiling {
            break;
        }
    }
    Ok(best)
}

/// Thicket (Littlestone) dimension by the binary split recursion
/// `dim(F) = max(0, max_x 1 + min(dim(F_{x out}), dim(F_{x in})))`.
pub fn thicket_dimension(f: &SetSystem) -> RankValue {
    let cols = Columns::new(f);
    let mut memo = HashMap::new();
    RankValue::from_raw(thicket_rec(&cols, &cols.root, &mut memo))
}

fn thicket_rec(cols: &Columns, mask: &Mask, memo: &mut HashMap<Mask, i32>) -> i32 {
    let count = mask.count();
    if count == 0 {
        return -1;
    }
    let ceiling = floor_log2(count) as i32;
    if ceiling == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(mask) {
        return v;
    }
    let mut best = 0;
    for col in &cols.cols {
        let inside = mask.and(col);
        let c_in = inside.count();
        if c_in == 0 || c_in == count {
            continue;
        }
        let c_out = count - c_in;
        if floor_log2(c_in.min(c_out)) as i32 + 1 <= best {
            continue;
        }
        let outside = mask.and_not(col);
        let a = thicket_rec(cols, &inside, memo);
        if a + 1 <= best {
            continue;
        }
        let b = thicket_rec(cols, &outside, memo);
        best = best.max(1 + a.min(b));
        if best == ceiling {
            break;
        }
    }
    memo.insert(mask.clone(), best);
    best
}

/// `rho_F(n)`: the most leaves of a height-`n` binary element tree that
/// members of `F` properly label.
pub fn thicket_shatter(f: &SetSystem, n: usize) -> u128 {
    let cols = Columns::new(f);
    let mut memo = HashMap::new();
    shatter_rec(&cols, &cols.root, n, 1, &mut memo)
}

/// op_s-rank: the height of the tallest `2^s`-ary element tree all of whose
/// leaves are properly labeled. Searches unordered tuples of distinct elements.
pub fn op_rank(f: &SetSystem, s: usize, caps: &Caps) -> Result<RankValue> {
    if s == 0 {
        return Err(Error::input("op-rank needs s >= 1"));
    }
    if s >= 2 {
        check_universe(f, caps.op_universe, "op_universe")?;
    }
    let cols = Columns::new(f);
    let tuples: Vec<Vec<usize>> = subsets(f.universe(), s).collect();
    let mut memo = HashMap::new();
    Ok(RankValue::from_raw(op_rank_rec(&cols, &tuples, s as u32, &cols.root, &mut memo)))
}

fn op_rank_rec(
    cols: &Columns,
    tuples: &[Vec<usize>],
    s: u32,
    mask: &Mask,
    memo: &mut HashMap<Mask, i32>,
) -> i32 {
    let count = mask.count();
    if count == 0 {
        return -1;
    }
    // A full tree of height k properly labels (2^s)^k leaves with distinct members.
    let ceiling = (floor_log2(count) / s) as i32;
    if ceiling == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(mask) {
        return v;
    }
    let mut best = 0;
    'tuples: for xs in tuples {
        let children = cols.children(mask, xs);
        let mut worst = i32::MAX;
        for c in &children {
            let cc = c.count();
            if cc == 0 || (floor_log2(cc) / s) as i32 + 1 <= best {
                continue 'tuples;
            }
        }
        for c in &children {
            let v = op_rank_rec(cols, tuples, s, c, memo);
            worst = worst.min(v);
            if worst + 1 <= best {
                continue 'tuples;
            }
        }
        best = best.max(worst + 1);
        if best == ceiling {
            break;
        }
    }
    memo.insert(mask.clone(), best);
    best
}

/// `psi^s_F(n)`: the most leaves of a height-`n` `2^s`-ary element tree that
/// members of `F` properly label.
///
/// Only tuples of `min(s, |X|)` distinct elements are searched: a repeated
/// element, or a shorter tuple, yields a coarsening of the children of some
/// such tuple, and leaf counts are subadditive over disjoint subfamilies.
pub fn op_shatter(f: &SetSystem, s: usize, n: usize, caps: &Caps) -> Result<u128> {
    if s == 0 {
        return Err(Error::input("op shatter function needs s >= 1"));
    }
    if s >= 2 {
        check_universe(f, caps.op_universe, "op_universe")?;
    }
    let cols = Columns::new(f);
    let mut memo = HashMap::new();
    Ok(shatter_rec(&cols, &cols.root, n, s, &mut memo))
}

fn shatter_rec(
    cols: &Columns,
    mask: &Mask,
    n: usize,
    s: usize,
    memo: &mut HashMap<(Mask, usize), u128>,
) -> u128 {
    let count = mask.count() as u128;
    if count == 0 {
        return 0;
    }
    // A member labels exactly one leaf, so the count never exceeds |F|.
    if n == 0 || count == 1 || cols.universe == 0 {
        return 1;
    }
    let width = s.min(cols.universe);
    let ceiling = count.min(crate::combin::pow_sat(2, (width * n) as u64));
    let key = (mask.clone(), n);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut best = 0;
    for xs in subsets(cols.universe, width) {
        let total: u128 = cols
            .children(mask, &xs)
            .iter()
            .map(|c| shatter_rec(cols, c, n - 1, s, memo))
            .sum();
        best = best.max(total);
        if best == ceiling {
            break;
        }
    }
    memo.insert(key, best);
    best
}

/// Number of children `F_sigma` on `xs` whose op_r-rank is at most `op_rank(F, r) - l`.
pub fn count_children_dropping(
    f: &SetSystem,
    xs: &[usize],
    r: usize,
    l: u32,
    caps: &Caps,
) -> Result<usize> {
    if f.is_empty() {
        return Err(Error::input("count_children_dropping needs a nonempty family"));
    }
    if xs.len() >= 64 {
        return Err(Error::input("tuple too long"));
    }
    let a = op_rank(f, r, caps)?.finite().expect("nonempty family has finite rank") as i64;
    let threshold = a - l as i64;
    let mut count = 0;
    for code in 0u64..(1 << xs.len()) {
        let sigma: Vec<bool> = (0..xs.len()).map(|i| code >> i & 1 == 1).collect();
        let child = f.child(xs, &sigma)?;
        let dropped = match op_rank(&child, r, caps)? {
            RankValue::NegInfinity => true,
            RankValue::Finite(v) => i64::from(v) <= threshold,
        };
        if dropped {
            count += 1;
        }
    }
    Ok(count)
}

/// `op_r`-rank for `r = 1..=max_s`; on finite systems this profile replaces
/// the (always degenerate) op-dimension.
pub fn rank_profile(f: &SetSystem, max_s: usize, caps: &Caps) -> Result<Vec<RankValue>> {
    (1..=max_s).map(|s| op_rank(f, s, caps)).collect()
}
