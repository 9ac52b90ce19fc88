//! Banned sequence problems over a `j`-letter alphabet.
//!
//! A `k`-fold problem of length `n` assigns to every `k`-subset `S` of
//! positions and every filling `X` of the other positions a set of banned
//! fillings `Z` of `S`. A sequence is a solution when none of its
//! restrictions is banned.
//!
//! Sequences are digit vectors. Whenever a filling is flattened to an integer
//! code, the lowest position is the most significant digit, so code order is
//! the lexicographic order of the printed strings.

mod construct;
mod extremal;
mod hereditary;
mod reduce;
mod table;

use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{binomial, pow_sat, subsets};
use crate::{Caps, Error, Result};

pub use construct::{
    from_element_tree, from_type_tree, from_vc, parity_problem, type_tree_level_problem,
    ParityRule, TreeRule, TypeTreeRule, VcRule,
};
pub use extremal::{max_solutions, min_subcube_hitting};
pub use hereditary::{check_witness, is_hereditary, HereditaryReport, HereditaryWitness};
pub use reduce::{
    check_counting_inequality, reduce_hat, reduce_prime, CountingReport, HatReduction,
    PrimeReduction,
};
pub use table::{random_problem, BanProblem, BanTable, RelaxedBanProblem};

/// Largest alphabet; digits print as `0-9a-z`.
pub const MAX_ALPHABET: usize = 36;
/// Longest supported sequence.
pub const MAX_LENGTH: usize = 64;

/// Length, fold and alphabet size of a problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Shape {
    pub n: usize,
    pub k: usize,
    pub j: usize,
}

impl Shape {
    pub fn new(n: usize, k: usize, j: usize) -> Result<Shape> {
        if !(2..=MAX_ALPHABET).contains(&j) {
            return Err(Error::input(format!("alphabet size must be in 2..=36, got {j}")));
        }
        if n > MAX_LENGTH {
            return Err(Error::input(format!("length {n} exceeds {MAX_LENGTH}")));
        }
        if k == 0 || k > n {
            return Err(Error::input(format!("fold must satisfy 1 <= k <= n, got k={k}, n={n}")));
        }
        Ok(Shape { n, k, j })
    }

    /// `j^n`, saturating.
    pub fn sequence_count(&self) -> u128 {
        pow_sat(self.j as u128, self.n as u64)
    }

    /// Number of fillings of the complement of an `S`.
    pub fn x_count(&self) -> u128 {
        pow_sat(self.j as u128, (self.n - self.k) as u64)
    }

    /// Number of fillings of an `S`.
    pub fn z_count(&self) -> u128 {
        pow_sat(self.j as u128, self.k as u64)
    }

    pub fn subset_count(&self) -> u128 {
        binomial(self.n as u64, self.k as u64)
    }

    /// `(j^k - 1) j^(n-k)`: one banned extension per subcube is unavoidable.
    pub fn trivial_upper_bound(&self) -> u128 {
        (self.z_count() - 1).saturating_mul(self.x_count())
    }

    /// `sum_{i<k} (j-1)^(n-i) C(n,i)`: the bound for hereditary problems.
    pub fn hereditary_bound(&self) -> u128 {
        (0..self.k).fold(0u128, |acc, i| {
            let term = pow_sat(self.j as u128 - 1, (self.n - i) as u64)
                .saturating_mul(binomial(self.n as u64, i as u64));
            acc.saturating_add(term)
        })
    }
}

/// A `k`-subset of positions with its lexicographic rank among all `k`-subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subset {
    pub rank: usize,
    pub mask: u64,
    pub elems: Vec<usize>,
}

impl Subset {
    pub fn contains(&self, pos: usize) -> bool {
        self.mask >> pos & 1 == 1
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn all_subsets(n: usize, k: usize) -> Vec<Subset> {
    subsets(n, k)
        .enumerate()
        .map(|(rank, elems)| Subset {
            rank,
            mask: elems.iter().fold(0, |m, &i| m | 1 << i),
            elems,
        })
        .collect()
}

/// Anything that answers "is `seq|_S` banned at `(S, seq|_{[n]\S})`".
///
/// Implemented by explicit tables and by the lazy constructions, so the
/// solver and the reductions never need a materialized table.
pub trait BanRule: Sync {
    fn shape(&self) -> Shape;

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool;
}

impl<R: BanRule + ?Sized> BanRule for &R {
    fn shape(&self) -> Shape {
        (**self).shape()
    }

    fn bans(&self, s: &Subset, seq: &[u8]) -> bool {
        (**self).bans(s, seq)
    }
}

/// Code of a digit string, lowest index most significant.
pub fn encode(digits: &[u8], j: usize) -> u64 {
    digits.iter().fold(0u64, |c, &d| c * j as u64 + d as u64)
}

/// Inverse of [`encode`] for strings of length `len`.
pub fn decode(mut code: u64, len: usize, j: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for slot in out.iter_mut().rev() {
        *slot = (code % j as u64) as u8;
        code /= j as u64;
    }
    out
}

/// Code of `seq` restricted to the complement of `s`.
pub fn x_code(seq: &[u8], s: &Subset, j: usize) -> u64 {
    seq.iter()
        .enumerate()
        .filter(|(i, _)| !s.contains(*i))
        .fold(0u64, |c, (_, &d)| c * j as u64 + d as u64)
}

/// Code of `seq` restricted to `s`.
pub fn z_code(seq: &[u8], s: &Subset, j: usize) -> u64 {
    s.elems.iter().fold(0u64, |c, &i| c * j as u64 + seq[i] as u64)
}

/// Writes `X` (by code) on the complement of `s` and `Z` on `s`.
pub fn fill(seq: &mut [u8], s: &Subset, x: u64, z: u64, j: usize) {
    let (mut x, mut z) = (x, z);
    for i in (0..seq.len()).rev() {
        let code = if s.contains(i) { &mut z } else { &mut x };
        seq[i] = (*code % j as u64) as u8;
        *code /= j as u64;
    }
}

pub fn digit_char(d: u8) -> char {
    std::char::from_digit(d as u32, MAX_ALPHABET as u32).expect("digit below 36")
}

pub fn seq_to_string(seq: &[u8]) -> String {
    seq.iter().map(|&d| digit_char(d)).collect()
}

/// Parses a `j`-ary string of the given length.
pub fn seq_from_string(text: &str, len: usize, j: usize) -> Result<Vec<u8>> {
    let digits = text
        .chars()
        .map(|c| match c.to_digit(MAX_ALPHABET as u32) {
            Some(d) if !c.is_ascii_uppercase() && (d as usize) < j => Ok(d as u8),
            _ => Err(Error::input(format!("`{text}` is not a {j}-ary string"))),
        })
        .collect::<Result<Vec<u8>>>()?;
    if digits.len() != len {
        return Err(Error::input(format!(
            "`{text}` has length {}, expected {len}",
            digits.len()
        )));
    }
    Ok(digits)
}

/// Solutions of a problem, as codes in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solutions {
    pub shape: Shape,
    pub codes: Vec<u64>,
    /// `j^n - |solutions|`.
    pub banned: u128,
}

impl Solutions {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn sequences(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.codes
            .iter()
            .map(|&c| decode(c, self.shape.n, self.shape.j))
    }

    pub fn strings(&self) -> Vec<String> {
        self.sequences().map(|s| seq_to_string(&s)).collect()
    }
}

const CHUNK: u64 = 1 << 12;

/// Enumerates every solution. Works for relaxed problems too.
pub fn solutions<R: BanRule + ?Sized>(f: &R, caps: &Caps) -> Result<Solutions> {
    let shape = f.shape();
    let total = shape.sequence_count();
    Error::check_cap("sequences", total, caps.sequences)?;
    let total = total as u64;
    let subsets = all_subsets(shape.n, shape.k);
    let chunks = total.div_ceil(CHUNK);
    let codes: Vec<u64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut seq = decode(start, shape.n, shape.j);
            let mut found = Vec::new();
            for code in start..end {
                if !subsets.iter().any(|s| f.bans(s, &seq)) {
                    found.push(code);
                }
                increment(&mut seq, shape.j);
            }
            found
        })
        .collect();
    let banned = total as u128 - codes.len() as u128;
    Ok(Solutions {
        shape,
        codes,
        banned,
    })
}

/// `B(f)`: the number of banned sequences.
pub fn banned_count<R: BanRule + ?Sized>(f: &R, caps: &Caps) -> Result<u128> {
    Ok(solutions(f, caps)?.banned)
}

/// `(j^k - 1) j^(n-k)`.
pub fn trivial_upper_bound<R: BanRule + ?Sized>(f: &R) -> u128 {
    f.shape().trivial_upper_bound()
}

/// Whether `f(S, X)` is the same for all `X`, for every `S`.
pub fn is_independent(f: &BanProblem, caps: &Caps) -> Result<bool> {
    let shape = f.shape();
    Error::check_cap(
        "sequences",
        shape.sequence_count().saturating_mul(shape.subset_count()),
        caps.sequences.saturating_mul(64),
    )?;
    let (xs, zs) = (shape.x_count() as u64, shape.z_count() as u64);
    let mut seq = vec![0u8; shape.n];
    for s in all_subsets(shape.n, shape.k) {
        let mut reference = Vec::with_capacity(zs as usize);
        for z in 0..zs {
            fill(&mut seq, &s, 0, z, shape.j);
            reference.push(f.bans(&s, &seq));
        }
        for x in 1..xs {
            for z in 0..zs {
                fill(&mut seq, &s, x, z, shape.j);
                if f.bans(&s, &seq) != reference[z as usize] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Report of [`verify_main_theorem`].
#[derive(Clone, Debug, Serialize)]
pub struct MainTheoremReport {
    pub shape: Shape,
    pub hereditary: bool,
    pub witness: Option<HereditaryWitness>,
    pub solutions: u128,
    pub banned: u128,
    pub bound: u128,
    pub trivial_bound: u128,
    /// `bound - solutions`; negative means the bound is exceeded.
    pub slack: i128,
    /// False only for a hereditary problem above the bound.
    pub ok: bool,
}

/// Solves `f`, checks hereditariness and compares against the hereditary bound.
/// Exceeding the bound is legal for non-hereditary problems and is reported.
pub fn verify_main_theorem(f: &BanProblem, caps: &Caps) -> Result<MainTheoremReport> {
    let shape = f.shape();
    let sols = solutions(f, caps)?;
    let report = is_hereditary(f, caps)?;
    let bound = shape.hereditary_bound();
    let count = sols.len() as u128;
    let slack = bound as i128 - count as i128;
    let trivial_bound = shape.trivial_upper_bound();
    if count > trivial_bound {
        return Err(Error::input(format!(
            "solver found {count} solutions above the trivial bound {trivial_bound}"
        )));
    }
    Ok(MainTheoremReport {
        shape,
        hereditary: report.hereditary,
        witness: report.witness,
        solutions: count,
        banned: sols.banned,
        bound,
        trivial_bound,
        slack,
        ok: !report.hereditary || slack >= 0,
    })
}

fn increment(seq: &mut [u8], j: usize) {
    for d in seq.iter_mut().rev() {
        if (*d as usize) + 1 < j {
            *d += 1;
            return;
        }
        *d = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip_in_lexicographic_order() {
        let all: Vec<String> = (0..9).map(|c| seq_to_string(&decode(c, 2, 3))).collect();
        assert_eq!(all, ["00", "01", "02", "10", "11", "12", "20", "21", "22"]);
        assert_eq!(encode(&decode(1234, 8, 5), 5), 1234);
    }

    #[test]
    fn fill_and_codes_agree() {
        let s = &all_subsets(5, 2)[3]; // {0, 4}
        assert_eq!(s.elems, [0, 4]);
        let mut seq = vec![0; 5];
        fill(&mut seq, s, 5, 2, 2);
        assert_eq!(seq_to_string(&seq), "11010");
        assert_eq!(x_code(&seq, s, 2), 5);
        assert_eq!(z_code(&seq, s, 2), 2);
    }

    #[test]
    fn string_parsing() {
        assert_eq!(seq_from_string("0a2", 3, 11).unwrap(), [0, 10, 2]);
        assert!(seq_from_string("012", 3, 2).is_err());
        assert!(seq_from_string("01", 3, 2).is_err());
        assert!(seq_from_string("0A", 2, 11).is_err());
    }

    #[test]
    fn shape_bounds() {
        assert_eq!(Shape::new(4, 2, 2).unwrap().trivial_upper_bound(), 12);
        assert_eq!(Shape::new(3, 1, 3).unwrap().trivial_upper_bound(), 18);
        assert_eq!(Shape::new(5, 5, 3).unwrap().trivial_upper_bound(), 242);
        for (n, j) in [(3, 2), (4, 3), (5, 4)] {
            let s = Shape::new(n, n, j).unwrap();
            assert_eq!(s.hereditary_bound(), s.sequence_count() - 1);
        }
        assert_eq!(Shape::new(4, 1, 2).unwrap().hereditary_bound(), 1);
        assert_eq!(Shape::new(3, 2, 2).unwrap().hereditary_bound(), 4);
        assert!(Shape::new(3, 0, 2).is_err());
        assert!(Shape::new(3, 4, 2).is_err());
        assert!(Shape::new(3, 1, 1).is_err());
        assert!(Shape::new(3, 1, 37).is_err());
    }

    #[test]
    fn ban_one_pattern_at_full_fold() {
        let shape = Shape::new(2, 2, 2).unwrap();
        let mut t = BanTable::empty(shape).unwrap();
        t.set(0, 0, 3, true);
        let f = BanProblem::from_table(t).unwrap();
        let sols = solutions(&f, &Caps::default()).unwrap();
        assert_eq!(sols.strings(), ["00", "01", "10"]);
        assert_eq!(sols.banned, 1);
        assert!(is_independent(&f, &Caps::default()).unwrap());
    }

    #[test]
    fn solver_respects_cap() {
        let f = parity_problem(23).unwrap();
        assert!(matches!(
            solutions(&f, &Caps::default()),
            Err(Error::Resource { .. })
        ));
    }
}
