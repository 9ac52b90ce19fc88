//! Test trees on finite probability spaces and the estimator `test(x̄, S)`.
//!
//! A test tree of height `n` labels every node `σ ∈ 2^{<n}` by an
//! independent draw from `μ`. A set `S` reads the tree along its
//! characteristic path: at each node it goes right iff the label is in `S`.
//! The estimate is the fraction of right turns.
//!
//! Trees are never built. The label of `σ` is a pure function of the seed
//! and `σ`, computed through a chain hash
//! `k_∅ = mix(seed)`, `k_{σb} = mix(k_σ ⊕ (b+1)·A ⊕ |σ|·B)` and one
//! SplitMix64 step from `k_σ` to the draw. Walking a path costs `O(1)` per
//! node, and any traversal order yields the same tree.

mod experiment;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::rational::{self, Rational};
use crate::setsystem::{Bits, SetSystem, MAX_UNIVERSE};
use crate::{Caps, Error, Result};

pub use experiment::{
    rho_estimate, run_vc_theorem, run_weak_law, weak_law_bound, ExperimentConfig,
    ExperimentReport, RhoEstimate, TrialRow,
};

/// A finite probability space with exact rational weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbSpace {
    weights: Vec<Rational>,
    sampler: Sampler,
}

#[derive(Clone, Debug, PartialEq)]
enum Sampler {
    /// Cumulative numerators over a common denominator.
    Exact { denominator: u64, cumulative: Vec<u64> },
    Float { cumulative: Vec<f64> },
}

impl ProbSpace {
    /// Weights must be nonnegative and sum to exactly one.
    pub fn new(weights: Vec<Rational>) -> Result<ProbSpace> {
        if weights.is_empty() || weights.len() > MAX_UNIVERSE {
            return Err(Error::input(format!(
                "a space needs 1..={MAX_UNIVERSE} points, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::input(format!("negative weight {}", rational::format(w))));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::input(format!(
                "weights sum to {}, not 1",
                rational::format(&total)
            )));
        }
        let sampler = build_sampler(&weights);
        Ok(ProbSpace { weights, sampler })
    }

    pub fn uniform(points: usize) -> Result<ProbSpace> {
        ProbSpace::new(vec![rational::from_ratio(1, points.max(1) as i64); points])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `μ(S)`.
    pub fn measure(&self, s: Bits) -> Rational {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| s >> i & 1 == 1)
            .map(|(_, w)| w)
            .sum()
    }

    /// Maps a uniform 64-bit word to a point. The exact sampler scales by
    /// the common denominator `D` with a 128-bit product, which is within
    /// `D / 2^64` of exact in total variation.
    pub fn draw(&self, word: u64) -> usize {
        match &self.sampler {
            Sampler::Exact {
                denominator,
                cumulative,
            } => {
                let u = ((word as u128 * *denominator as u128) >> 64) as u64;
                cumulative.partition_point(|&c| c <= u)
            }
            Sampler::Float { cumulative } => {
                let u = (word >> 11) as f64 / (1u64 << 53) as f64;
                cumulative
                    .partition_point(|&c| c <= u)
                    .min(cumulative.len() - 1)
            }
        }
    }

    fn check_subset(&self, s: Bits) -> Result<()> {
        if self.len() < MAX_UNIVERSE && s >> self.len() != 0 {
            return Err(Error::input(format!(
                "subset reaches beyond the {} points of the space",
                self.len()
            )));
        }
        Ok(())
    }
}

fn build_sampler(weights: &[Rational]) -> Sampler {
    let lcm = weights
        .iter()
        .try_fold(BigInt::one(), |acc, w| {
            let l = num_integer::Integer::lcm(&acc, w.denom());
            (l <= BigInt::from(u64::MAX)).then_some(l)
        });
    if let Some(d) = lcm.and_then(|d| d.to_u64()) {
        let mut acc = 0u64;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += (w * Rational::from(BigInt::from(d))).to_integer().to_u64().unwrap();
                acc
            })
            .collect();
        return Sampler::Exact {
            denominator: d,
            cumulative,
        };
    }
    let mut acc = 0.0;
    let cumulative = weights
        .iter()
        .map(|w| {
            acc += rational::to_f64(w);
            acc
        })
        .collect();
    Sampler::Float { cumulative }
}

const STEP: u64 = 0x9E37_79B9_7F4A_7C15;
const BRANCH: u64 = 0xD1B5_4A32_D192_ED03;
const DEPTH: u64 = 0x8CB9_2BA7_2F3D_8DD7;

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(STEP);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn child_key(key: u64, bit: u8, depth: usize) -> u64 {
    mix(key ^ (bit as u64 + 1).wrapping_mul(BRANCH) ^ (depth as u64).wrapping_mul(DEPTH))
}

/// A lazily evaluated test tree.
///
/// With `path_dependent` false, every node at a depth shares its label,
/// which is an i.i.d. tuple; that is the sampler of the classical weak law.
#[derive(Clone, Debug)]
pub struct TestTree<'a> {
    space: &'a ProbSpace,
    height: usize,
    seed: u64,
    path_dependent: bool,
    record: Option<HashMap<String, usize>>,
    pins: HashMap<String, usize>,
}

impl<'a> TestTree<'a> {
    pub fn new(space: &'a ProbSpace, height: usize, seed: u64) -> Result<TestTree<'a>> {
        if height == 0 {
            return Err(Error::input("a test tree needs height at least 1"));
        }
        Ok(TestTree {
            space,
            height,
            seed,
            path_dependent: true,
            record: None,
            pins: HashMap::new(),
        })
    }

    /// Labels depend on depth only.
    pub fn tuple(space: &'a ProbSpace, height: usize, seed: u64) -> Result<TestTree<'a>> {
        let mut t = TestTree::new(space, height, seed)?;
        t.path_dependent = false;
        Ok(t)
    }

    /// Keeps every label read from now on, keyed by node string.
    pub fn recording(mut self) -> Self {
        self.record = Some(HashMap::new());
        self
    }

    /// Overrides the label of one node, for hand-built examples.
    pub fn pin(&mut self, node: &str, point: usize) -> Result<()> {
        if node.len() >= self.height || !node.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::input(format!("`{node}` is not a node of the tree")));
        }
        if point >= self.space.len() {
            return Err(Error::input(format!("point {point} outside the space")));
        }
        self.pins.insert(node.to_string(), point);
        Ok(())
    }

    /// Nodes read so far with their labels (only when recording).
    pub fn populated(&self) -> Option<&HashMap<String, usize>> {
        self.record.as_ref()
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Label of the node `sigma` (a 0/1 digit string shorter than the height).
    pub fn label(&self, sigma: &[u8]) -> usize {
        assert!(sigma.len() < self.height, "node outside the tree");
        if let Some(&x) = self.pins.get(&path_to_string(sigma)) {
            return x;
        }
        let mut key = mix(self.seed);
        for (depth, &b) in sigma.iter().enumerate() {
            key = child_key(key, if self.path_dependent { b } else { 0 }, depth);
        }
        self.space.draw(mix(key))
    }

    /// Walks the characteristic path of `s`, returning its bits.
    pub fn characteristic_path(&mut self, s: Bits) -> Vec<u8> {
        let mut key = mix(self.seed);
        let mut path = Vec::with_capacity(self.height);
        for depth in 0..self.height {
            let mut x = self.space.draw(mix(key));
            if !self.pins.is_empty() || self.record.is_some() {
                let node = path_to_string(&path);
                if let Some(&p) = self.pins.get(&node) {
                    x = p;
                }
                if let Some(rec) = self.record.as_mut() {
                    rec.insert(node, x);
                }
            }
            let bit = (s >> x & 1) as u8;
            path.push(bit);
            key = child_key(key, if self.path_dependent { bit } else { 0 }, depth);
        }
        path
    }

    /// Number of ones on the characteristic path, without storing it.
    pub fn ones(&self, s: Bits) -> usize {
        if !self.pins.is_empty() {
            return self.clone().characteristic_path(s).iter().filter(|&&b| b == 1).count();
        }
        let mut key = mix(self.seed);
        let mut ones = 0;
        for depth in 0..self.height {
            let bit = (s >> self.space.draw(mix(key)) & 1) as u8;
            ones += bit as usize;
            key = child_key(key, if self.path_dependent { bit } else { 0 }, depth);
        }
        ones
    }

    /// `test(x̄, S)`: the fraction of ones on the characteristic path.
    pub fn estimate(&self, s: Bits) -> Rational {
        rational::from_ratio(self.ones(s) as i64, self.height as i64)
    }
}

pub fn path_to_string(path: &[u8]) -> String {
    path.iter().map(|&b| (b'0' + b) as char).collect()
}

/// `sup_{S ∈ F} |test(x̄, S) - μ(S)|`, zero for the empty family.
pub fn uniform_deviation(tree: &TestTree<'_>, f: &SetSystem, space: &ProbSpace) -> Result<Rational> {
    if f.universe() != space.len() {
        return Err(Error::input(format!(
            "family lives on {} points, space has {}",
            f.universe(),
            space.len()
        )));
    }
    Ok(f.sets()
        .iter()
        .map(|&s| (tree.estimate(s) - space.measure(s)).abs())
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Exact `E[test(x̄, S)]` by enumerating every label sequence along the
/// characteristic path with its probability.
pub fn exact_expectation(space: &ProbSpace, s: Bits, n: usize, caps: &Caps) -> Result<Rational> {
    space.check_subset(s)?;
    if n == 0 {
        return Err(Error::input("height must be at least 1"));
    }
    let paths = crate::combin::pow_sat(space.len() as u128, n as u64);
    Error::check_cap("expectation_paths", paths, caps.expectation_paths)?;
    // Expected number of ones, accumulated over all label sequences.
    fn walk(space: &ProbSpace, s: Bits, left: usize, weight: &Rational, ones: usize, acc: &mut Rational) {
        if left == 0 {
            *acc += weight * Rational::from(BigInt::from(ones));
            return;
        }
        for (x, w) in space.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            walk(space, s, left - 1, &(weight * w), ones + (s >> x & 1) as usize, acc);
        }
    }
    let mut acc = Rational::zero();
    walk(space, s, n, &Rational::one(), 0, &mut acc);
    Ok(acc / Rational::from(BigInt::from(n)))
}

/// Summary of one sampled tree for a set, used by the command line tool.
#[derive(Clone, Debug, Serialize)]
pub struct PathReport {
    pub path: String,
    pub estimate: String,
    pub measure: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> ProbSpace {
        ProbSpace::uniform(2).unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(ProbSpace::new(vec![rational::from_ratio(1, 2)]).is_err());
        assert!(ProbSpace::new(vec![rational::from_ratio(3, 2), rational::from_ratio(-1, 2)]).is_err());
        assert!(ProbSpace::new(vec![]).is_err());
        let s = ProbSpace::new(vec![
            rational::from_ratio(1, 2),
            rational::from_ratio(1, 4),
            rational::from_ratio(1, 4),
        ])
        .unwrap();
        assert_eq!(s.measure(0b110), rational::from_ratio(1, 2));
    }

    #[test]
    fn exact_sampler_boundaries() {
        let s = ProbSpace::new(vec![
            rational::from_ratio(1, 4),
            Rational::zero(),
            rational::from_ratio(3, 4),
        ])
        .unwrap();
        assert_eq!(s.draw(0), 0);
        assert_eq!(s.draw(u64::MAX / 4), 0);
        assert_eq!(s.draw(u64::MAX / 4 + 1), 2);
        assert_eq!(s.draw(u64::MAX), 2);
    }

    #[test]
    fn one_point_space_labels_everything_alike() {
        let s = ProbSpace::uniform(1).unwrap();
        let t = TestTree::new(&s, 10, 99).unwrap();
        assert_eq!(t.label(&[]), 0);
        assert_eq!(t.label(&[1, 0, 1]), 0);
    }

    #[test]
    fn labels_are_deterministic() {
        let s = ProbSpace::uniform(7).unwrap();
        let t = TestTree::new(&s, 10, 5).unwrap();
        assert_eq!(t.label(&[0, 1, 1]), t.label(&[0, 1, 1]));
        let u = TestTree::new(&s, 10, 5).unwrap();
        assert_eq!(t.label(&[1, 1, 0, 0]), u.label(&[1, 1, 0, 0]));
    }

    #[test]
    fn paths_for_trivial_sets() {
        let s = two_point();
        let mut t = TestTree::new(&s, 6, 1).unwrap().recording();
        assert_eq!(path_to_string(&t.characteristic_path(0b11)), "111111");
        assert_eq!(path_to_string(&t.characteristic_path(0)), "000000");
        // The two paths share only the root.
        assert_eq!(t.populated().unwrap().len(), 11);
        assert_eq!(t.estimate(0b11), Rational::one());
        assert_eq!(t.estimate(0), Rational::zero());
    }

    #[test]
    fn pinned_two_point_example() {
        let s = two_point();
        let mut t = TestTree::new(&s, 2, 0).unwrap();
        t.pin("", 0).unwrap();
        t.pin("1", 1).unwrap();
        assert_eq!(path_to_string(&t.characteristic_path(0b01)), "10");
        assert_eq!(t.estimate(0b01), rational::from_ratio(1, 2));
        assert!(t.pin("11", 0).is_err());
    }

    #[test]
    fn path_matches_node_labels() {
        let s = ProbSpace::uniform(5).unwrap();
        let mut t = TestTree::new(&s, 8, 12).unwrap().recording();
        let path = t.characteristic_path(0b10110);
        for m in 0..8 {
            let x = t.label(&path[..m]);
            assert_eq!(path[m], (0b10110u128 >> x & 1) as u8);
            assert_eq!(t.populated().unwrap()[&path_to_string(&path[..m])], x);
        }
        assert_eq!(t.ones(0b10110), path.iter().filter(|&&b| b == 1).count());
    }

    #[test]
    fn expectations_are_exact() {
        let caps = Caps::default();
        let s = two_point();
        assert_eq!(exact_expectation(&s, 0b01, 3, &caps).unwrap(), rational::from_ratio(1, 2));
        assert_eq!(exact_expectation(&s, 0, 3, &caps).unwrap(), Rational::zero());
        let t = ProbSpace::new(vec![
            rational::from_ratio(1, 2),
            rational::from_ratio(1, 4),
            rational::from_ratio(1, 4),
        ])
        .unwrap();
        assert_eq!(exact_expectation(&t, 0b010, 2, &caps).unwrap(), rational::from_ratio(1, 4));
        assert!(matches!(
            exact_expectation(&ProbSpace::uniform(10).unwrap(), 1, 7, &caps),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn deviation_of_trivial_families() {
        let s = two_point();
        let t = TestTree::new(&s, 1, 3).unwrap();
        let both = SetSystem::new(2, [0, 0b11]).unwrap();
        assert_eq!(uniform_deviation(&t, &both, &s).unwrap(), Rational::zero());
        let one = SetSystem::new(2, [0b01]).unwrap();
        for seed in 0..20 {
            let t = TestTree::new(&s, 1, seed).unwrap();
            assert_eq!(uniform_deviation(&t, &one, &s).unwrap(), rational::from_ratio(1, 2));
        }
    }
}
