//! Finite set systems over a dense universe `[n] = {0, .., n-1}`.
//!
//! Sets are fixed-width bit vectors (`u128`, bit `i` is element `i`). A
//! [`SetSystem`] keeps its family deduplicated and sorted by numeric value,
//! so two extensionally equal families compare and hash equal.

pub mod geometry;

use rand::Rng;

use crate::combin::{indices_of, mask_of};
use crate::{Error, Result};

pub use geometry::{Halfspace, PointArrangement};

/// Largest universe a bit-vector set can carry.
pub const MAX_UNIVERSE: usize = 128;

/// One member of a family, as a bit vector over the universe.
pub type Bits = u128;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    universe: usize,
    sets: Vec<Bits>,
    name: Option<String>,
}

/// Bits of `set` selected by `keep`, packed down to the low bits in ascending order.
pub fn compress(set: Bits, keep: Bits) -> Bits {
    let mut out = 0;
    let mut k = keep;
    let mut pos = 0;
    while k != 0 {
        let i = k.trailing_zeros();
        if set >> i & 1 == 1 {
            out |= 1 << pos;
        }
        pos += 1;
        k &= k - 1;
    }
    out
}

pub fn universe_mask(n: usize) -> Bits {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// `'0'/'1'` string of length `n`, character `i` giving membership of element `i`.
pub fn bits_to_string(set: Bits, n: usize) -> String {
    (0..n)
        .map(|i| if set >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn bits_from_string(s: &str, n: usize) -> Result<Bits> {
    if s.chars().count() != n {
        return Err(Error::input(format!(
            "set string `{s}` has length {}, universe is {n}",
            s.chars().count()
        )));
    }
    let mut out = 0;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => out |= 1u128 << i,
            _ => return Err(Error::input(format!("set string `{s}` contains `{c}`"))),
        }
    }
    Ok(out)
}

impl SetSystem {
    /// Builds a family, deduplicating and sorting. Fails if a set has a bit
    /// outside the universe or the universe exceeds [`MAX_UNIVERSE`].
    pub fn new(universe: usize, sets: impl IntoIterator<Item = Bits>) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::input(format!(
                "universe {universe} exceeds the supported {MAX_UNIVERSE}"
            )));
        }
        let full = universe_mask(universe);
        let mut sets: Vec<Bits> = sets.into_iter().collect();
        if let Some(bad) = sets.iter().find(|&&s| s & !full != 0) {
            return Err(Error::input(format!(
                "set with bit {} lies outside universe of size {universe}",
                127 - bad.leading_zeros()
            )));
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(SetSystem {
            universe,
            sets,
            name: None,
        })
    }

    pub fn from_index_sets<I, S>(universe: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut bits = Vec::new();
        for s in sets {
            let s = s.as_ref();
            if let Some(&x) = s.iter().find(|&&x| x >= universe) {
                return Err(Error::input(format!(
                    "element {x} outside universe of size {universe}"
                )));
            }
            bits.push(mask_of(s));
        }
        SetSystem::new(universe, bits)
    }

    pub fn empty_family(universe: usize) -> Result<Self> {
        SetSystem::new(universe, [])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Bits] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: Bits) -> bool {
        self.sets.binary_search(&set).is_ok()
    }

    pub fn full_mask(&self) -> Bits {
        universe_mask(self.universe)
    }

    /// Sets as ascending element lists.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&s| indices_of(s)).collect()
    }

    fn check_elements(&self, elems: &[usize]) -> Result<()> {
        match elems.iter().find(|&&x| x >= self.universe) {
            Some(x) => Err(Error::input(format!(
                "element {x} outside universe of size {}",
                self.universe
            ))),
            None => Ok(()),
        }
    }

    /// Trace of the family on `y`, re-indexed to `[|y|]` in ascending order of
    /// the original indices. Duplicate indices in `y` are ignored.
    pub fn project(&self, y: &[usize]) -> Result<SetSystem> {
        self.check_elements(y)?;
        let keep = mask_of(y);
        self.project_mask(keep)
    }

    pub fn project_mask(&self, keep: Bits) -> Result<SetSystem> {
        if keep & !self.full_mask() != 0 {
            return Err(Error::input("projection target outside the universe"));
        }
        SetSystem::new(
            keep.count_ones() as usize,
            self.sets.iter().map(|&s| compress(s, keep)),
        )
    }

    /// Number of distinct traces on `keep` (the size of the projection), without building it.
    pub fn trace_count(&self, keep: Bits) -> usize {
        let mut traces: Vec<Bits> = self.sets.iter().map(|&s| s & keep).collect();
        traces.sort_unstable();
        traces.dedup();
        traces.len()
    }

    /// The dual system: base set is the family (indexed in stored order), and
    /// element `x` contributes the set of members containing it.
    pub fn dual(&self) -> Result<SetSystem> {
        if self.sets.len() > MAX_UNIVERSE {
            return Err(Error::input(format!(
                "dual of a family with {} sets exceeds the universe limit {MAX_UNIVERSE}",
                self.sets.len()
            )));
        }
        let cols = (0..self.universe).map(|x| {
            self.sets
                .iter()
                .enumerate()
                .filter(|(_, &s)| s >> x & 1 == 1)
                .fold(0u128, |m, (i, _)| m | 1 << i)
        });
        SetSystem::new(self.sets.len(), cols)
    }

    /// `F_sigma`: the members whose membership pattern on `xs` equals `sigma`.
    pub fn child(&self, xs: &[usize], sigma: &[bool]) -> Result<SetSystem> {
        if xs.len() != sigma.len() {
            return Err(Error::input(format!(
                "child tuple has {} elements but sigma has length {}",
                xs.len(),
                sigma.len()
            )));
        }
        self.check_elements(xs)?;
        let kept = self
            .sets
            .iter()
            .copied()
            .filter(|&s| xs.iter().zip(sigma).all(|(&x, &b)| (s >> x & 1 == 1) == b));
        Ok(SetSystem {
            universe: self.universe,
            sets: kept.collect(),
            name: None,
        })
    }

    /// Subfamily chosen by a predicate on members; stays sorted.
    pub fn filter(&self, mut keep: impl FnMut(Bits) -> bool) -> SetSystem {
        SetSystem {
            universe: self.universe,
            sets: self.sets.iter().copied().filter(|&s| keep(s)).collect(),
            name: None,
        }
    }

    /// Uniformly random family of at most `count` distinct sets (duplicates collapse).
    pub fn random<R: Rng + ?Sized>(universe: usize, count: usize, rng: &mut R) -> Result<Self> {
        let full = universe_mask(universe);
        SetSystem::new(universe, (0..count).map(|_| rng.gen::<u128>() & full))
    }
}

/// The named fixture families.
#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    Powerset(usize),
    SingletonsWithEmpty(usize),
    Thresholds(usize),
    Intervals(usize),
    SubsetsOfSizeAtMost(usize, usize),
    HalfspaceIncidence(PointArrangement),
    HalfspaceDual(PointArrangement),
}

pub fn generate(kind: &Kind) -> Result<SetSystem> {
    let bounded = |n: usize, limit: usize| -> Result<()> {
        if n > limit {
            Err(Error::input(format!("universe {n} too large for this generator (max {limit})")))
        } else {
            Ok(())
        }
    };
    let sys = match *kind {
        Kind::Powerset(n) => {
            bounded(n, 20)?;
            SetSystem::new(n, 0..(1u128 << n))?.with_name(format!("powerset({n})"))
        }
        Kind::SingletonsWithEmpty(n) => {
            bounded(n, MAX_UNIVERSE)?;
            SetSystem::new(n, std::iter::once(0).chain((0..n).map(|i| 1u128 << i)))?
                .with_name(format!("singletons_with_empty({n})"))
        }
        Kind::Thresholds(n) => {
            bounded(n, MAX_UNIVERSE)?;
            SetSystem::new(n, (0..=n).map(universe_mask))?.with_name(format!("thresholds({n})"))
        }
        Kind::Intervals(n) => {
            bounded(n, MAX_UNIVERSE)?;
            let ivs = (0..n)
                .flat_map(|a| (a + 1..=n).map(move |b| universe_mask(b) & !universe_mask(a)));
            SetSystem::new(n, std::iter::once(0).chain(ivs))?.with_name(format!("intervals({n})"))
        }
        Kind::SubsetsOfSizeAtMost(n, d) => {
            bounded(n, 20)?;
            SetSystem::new(n, (0..(1u128 << n)).filter(|s| s.count_ones() as usize <= d))?
                .with_name(format!("all_subsets_of_size_at_most({n},{d})"))
        }
        Kind::HalfspaceIncidence(ref arr) => arr.incidence()?.with_name("halfspace_incidence"),
        Kind::HalfspaceDual(ref arr) => arr.incidence()?.dual()?.with_name("halfspace_dual"),
    };
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, sets: &[&[usize]]) -> SetSystem {
        SetSystem::from_index_sets(n, sets.iter().copied()).unwrap()
    }

    #[test]
    fn construction_dedups_and_sorts() {
        let f = SetSystem::new(3, [0b110, 0b001, 0b110]).unwrap();
        assert_eq!(f.sets(), &[0b001, 0b110]);
        assert!(SetSystem::new(2, [0b100]).is_err());
        assert!(SetSystem::empty_family(4).unwrap().is_empty());
    }

    #[test]
    fn projection_examples() {
        let f = sys(2, &[&[0, 1], &[1]]);
        let p = f.project(&[1]).unwrap();
        assert_eq!(p.universe(), 1);
        assert_eq!(p.index_sets(), vec![vec![0]]);

        let p = f.project(&[]).unwrap();
        assert_eq!(p.sets(), &[0]);
        let empty = SetSystem::empty_family(3).unwrap();
        assert!(empty.project(&[]).unwrap().is_empty());

        let pw = generate(&Kind::Powerset(3)).unwrap();
        let p = pw.project(&[0, 2]).unwrap();
        assert_eq!(p.universe(), 2);
        assert_eq!(p.len(), 4);

        assert!(pw.project(&[3]).is_err());
    }

    #[test]
    fn projection_reindexes_ascending() {
        let f = sys(4, &[&[1, 3], &[3]]);
        let p = f.project(&[3, 1]).unwrap();
        assert_eq!(p.index_sets(), vec![vec![1], vec![0, 1]]);
    }

    #[test]
    fn dual_examples() {
        let d = sys(2, &[&[]]).dual().unwrap();
        assert_eq!(d.universe(), 1);
        assert_eq!(d.sets(), &[0]);

        let d = sys(2, &[&[0], &[1]]).dual().unwrap();
        assert_eq!(d, sys(2, &[&[0], &[1]]));

        // powerset(2) is stored as 00, 10, 01, 11 -> 0b00, 0b01, 0b10, 0b11
        let d = generate(&Kind::Powerset(2)).unwrap().dual().unwrap();
        assert_eq!(d.universe(), 4);
        assert_eq!(d.len(), 2);
        assert!(d.sets().iter().all(|s| s.count_ones() == 2));
        assert_eq!(d.sets(), &[0b1010, 0b1100]);
    }

    #[test]
    fn child_examples() {
        let pw = generate(&Kind::Powerset(2)).unwrap();
        let c = pw.child(&[0], &[true]).unwrap();
        assert_eq!(c.index_sets(), vec![vec![0], vec![0, 1]]);

        for f in [pw.clone(), sys(3, &[&[0], &[1, 2]])] {
            assert!(f.child(&[0, 0], &[false, true]).unwrap().is_empty());
        }

        let f = sys(2, &[&[], &[0], &[0, 1]]);
        let c = f.child(&[0, 1], &[true, false]).unwrap();
        assert_eq!(c.index_sets(), vec![vec![0]]);

        assert!(f.child(&[0], &[true, false]).is_err());
    }

    #[test]
    fn generator_examples() {
        let t = generate(&Kind::Thresholds(3)).unwrap();
        assert_eq!(t.index_sets(), vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2]]);
        assert_eq!(generate(&Kind::SubsetsOfSizeAtMost(4, 1)).unwrap().len(), 5);
        assert_eq!(generate(&Kind::Intervals(3)).unwrap().len(), 7);
        assert_eq!(generate(&Kind::SingletonsWithEmpty(4)).unwrap().len(), 5);
        assert!(generate(&Kind::Powerset(21)).is_err());
    }

    #[test]
    fn string_round_trip() {
        assert_eq!(bits_to_string(0b0110, 4), "0110");
        assert_eq!(bits_from_string("0110", 4).unwrap(), 0b0110);
        assert!(bits_from_string("012", 3).is_err());
        assert!(bits_from_string("01", 3).is_err());
    }
}
