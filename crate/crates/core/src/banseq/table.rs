use rand::Rng;

use super::construct::{ParityRule, TreeRule, TypeTreeRule, VcRule};
use super::{all_subsets, fill, x_code, z_code, BanRule, Shape, Subset};
use crate::{Error, Result};

/// Largest table, in bits (`C(n,k) j^n`).
const MAX_TABLE_BITS: u128 = 1 << 30;

/// An explicit ban table. Ban sets are bitsets over `Z` codes, stored per
/// key `(rank of S, code of X)`. Ban sets may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BanTable {
    shape: Shape,
    subsets: Vec<Subset>,
    x_count: u64,
    z_count: u64,
    words: usize,
    bits: Vec<u64>,
}

impl BanTable {
    /// The table banning nothing.
    pub fn empty(shape: Shape) -> Result<BanTable> {
        let bits = shape.subset_count().saturating_mul(shape.sequence_count());
        Error::check_cap("table_bits", bits, MAX_TABLE_BITS)?;
        let x_count = shape.x_count() as u64;
        let z_count = shape.z_count() as u64;
        let words = z_count.div_ceil(64) as usize;
        let keys = shape.subset_count() as usize * x_count as usize;
        Ok(BanTable {
            shape,
            subsets: all_subsets(shape.n, shape.k),
            x_count,
            z_count,
            words,
            bits: vec![0; keys * words],
        })
    }

    /// Evaluates `rule` on every key.
    pub fn materialize<R: BanRule + ?Sized>(rule: &R) -> Result<BanTable> {
        let shape = rule.shape();
        let mut table = BanTable::empty(shape)?;
        let mut seq = vec![0u8; shape.n];
        for si in 0..table.subsets.len() {
            for x in 0..table.x_count {
                for z in 0..table.z_count {
                    let s = &table.subsets[si];
                    fill(&mut seq, s, x, z, shape.j);
                    if rule.bans(s, &seq) {
                        table.set(si, x, z, true);
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn subsets(&self) -> &[Subset] {
        &self.subsets
    }

    pub fn x_count(&self) -> u64 {
        self.x_count
    }

    pub fn z_count(&self) -> u64 {
        self.z_count
    }

    fn offset(&self, s_rank: usize, x: u64) -> usize {
        (s_rank * self.x_count as usize + x as usize) * self.words
    }

    pub fn set(&mut self, s_rank: usize, x: u64, z: u64, banned: bool) {
        let o = self.offset(s_rank, x) + (z / 64) as usize;
        if banned {
            self.bits[o] |= 1 << (z % 64);
        } else {
            self.bits[o] &= !(1 << (z % 64));
        }
    }

    pub fn is_set(&self, s_rank: usize, x: u64, z: u64) -> bool {
        self.bits[self.offset(s_rank, x) + (z / 64) as usize] >> (z % 64) & 1 == 1
    }

    /// Banned `Z` codes at `(S, X)`, ascending.
    pub fn ban_set(&self, s_rank: usize, x: u64) -> Vec<u64> {
        (0..self.z_count)
            .filter(|&z| self.is_set(s_rank, x, z))
            .collect()
    }

    /// First key whose ban set is empty.
    pub fn first_empty(&self) -> Option<(usize, u64)> {
        (0..self.subsets.len())
            .flat_map(|s| (0..self.x_count).map(move |x| (s, x)))
            .find(|&(s, x)| {
                let o = self.offset(s, x);
                self.bits[o..o + self.words].iter().all(|&w| w == 0)
            })
    }

    /// Rank of a `k`-subset given as ascending positions.
    pub fn rank_of(&self, elems: &[usize]) -> Option<usize> {
        self.subsets.iter().position(|s| s.elems == elems)
    }
}

impl BanRule for BanTable {
    fn shape(&self) -> Shape {
        self.shape
    }

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool {
        let j = self.shape.j;
        self.is_set(s.rank, x_code(seq, s, j), z_code(seq, s, j))
    }
}

/// A ban problem: every ban set is nonempty. Explicit tables and the lazy
/// constructions share this type.
#[derive(Clone, Debug)]
pub enum BanProblem {
    Table(BanTable),
    Parity(ParityRule),
    Vc(VcRule),
    ElementTree(TreeRule),
    TypeTree(TypeTreeRule),
}

impl BanProblem {
    /// Wraps a table after checking that no ban set is empty.
    pub fn from_table(table: BanTable) -> Result<BanProblem> {
        if let Some((s, x)) = table.first_empty() {
            let shape = table.shape;
            let subset = &table.subsets[s];
            let mut seq = vec![0u8; shape.n];
            fill(&mut seq, subset, x, 0, shape.j);
            let xs: Vec<u8> = (0..shape.n)
                .filter(|i| !subset.contains(*i))
                .map(|i| seq[i])
                .collect();
            return Err(Error::input(format!(
                "empty ban set at S={:?}, X=\"{}\"",
                subset.elems,
                super::seq_to_string(&xs)
            )));
        }
        Ok(BanProblem::Table(table))
    }

    /// Explicit table for this problem.
    pub fn to_table(&self) -> Result<BanTable> {
        match self {
            BanProblem::Table(t) => Ok(t.clone()),
            other => BanTable::materialize(other),
        }
    }

    fn rule(&self) -> &dyn BanRule {
        match self {
            BanProblem::Table(t) => t,
            BanProblem::Parity(r) => r,
            BanProblem::Vc(r) => r,
            BanProblem::ElementTree(r) => r,
            BanProblem::TypeTree(r) => r,
        }
    }
}

impl BanRule for BanProblem {
    fn shape(&self) -> Shape {
        self.rule().shape()
    }

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool {
        self.rule().bans(s, seq)
    }
}

/// A ban table whose ban sets may be empty, as produced by the reductions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxedBanProblem(pub BanTable);

impl RelaxedBanProblem {
    pub fn table(&self) -> &BanTable {
        &self.0
    }

    /// Promotes to a ban problem when every ban set is nonempty.
    pub fn into_strict(self) -> Result<BanProblem> {
        BanProblem::from_table(self.0)
    }
}

impl BanRule for RelaxedBanProblem {
    fn shape(&self) -> Shape {
        self.0.shape
    }

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool {
        self.0.bans(s, seq)
    }
}

/// A random problem: each `Z` is banned independently with probability
/// `density`, and an empty ban set receives one uniformly chosen `Z`.
pub fn random_problem<R: Rng + ?Sized>(
    shape: Shape,
    density: f64,
    rng: &mut R,
) -> Result<BanProblem> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::input(format!("density {density} outside [0, 1]")));
    }
    let mut t = BanTable::empty(shape)?;
    for s in 0..t.subsets.len() {
        for x in 0..t.x_count {
            let mut any = false;
            for z in 0..t.z_count {
                if rng.gen_bool(density) {
                    t.set(s, x, z, true);
                    any = true;
                }
            }
            if !any {
                let z = rng.gen_range(0..t.z_count);
                t.set(s, x, z, true);
            }
        }
    }
    BanProblem::from_table(t)
}
