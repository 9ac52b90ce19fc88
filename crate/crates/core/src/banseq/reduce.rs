//! The two reductions of the inductive count and the counting inequality
//! `B(f) >= B(f̂) + (j-1) B(f')`.

use serde::Serialize;

use super::{all_subsets, banned_count, BanRule, BanTable, RelaxedBanProblem, Shape, Subset};
use crate::{Caps, Error, Result};

/// `f̂`: `Z ∈ f̂(T, X)` iff `Z∧l ∈ f(T ∪ {n-1}, X)` for some last digit `l`.
pub struct HatReduction<R> {
    inner: R,
    shape: Shape,
    lift: Vec<Subset>,
}

impl<R: BanRule> HatReduction<R> {
    pub fn new(inner: R) -> Result<Self> {
        let Shape { n, k, j } = inner.shape();
        if k < 2 || n < 2 {
            return Err(Error::input(format!("f̂ needs k >= 2 and n >= 2, got n={n}, k={k}")));
        }
        let outer = all_subsets(n, k);
        let lift = all_subsets(n - 1, k - 1)
            .into_iter()
            .map(|t| {
                let mask = t.mask | 1 << (n - 1);
                outer.iter().find(|s| s.mask == mask).unwrap().clone()
            })
            .collect();
        Ok(HatReduction {
            inner,
            shape: Shape::new(n - 1, k - 1, j)?,
            lift,
        })
    }
}

impl<R: BanRule> BanRule for HatReduction<R> {
    fn shape(&self) -> Shape {
        self.shape
    }

    fn bans(&self, t: &Subset, seq: &[u8]) -> bool {
        let s = &self.lift[t.rank];
        let mut buf = [0u8; super::MAX_LENGTH];
        let n = seq.len() + 1;
        buf[..n - 1].copy_from_slice(seq);
        (0..self.shape.j as u8).any(|l| {
            buf[n - 1] = l;
            self.inner.bans(s, &buf[..n])
        })
    }
}

/// `f'`: `Z ∈ f'(S, X)` iff `Z ∈ f(S, X∧l)` for every last digit `l`.
pub struct PrimeReduction<R> {
    inner: R,
    shape: Shape,
    lift: Vec<Subset>,
}

impl<R: BanRule> PrimeReduction<R> {
    pub fn new(inner: R) -> Result<Self> {
        let Shape { n, k, j } = inner.shape();
        if n < 2 || k > n - 1 {
            return Err(Error::input(format!("f' needs n >= 2 and k <= n-1, got n={n}, k={k}")));
        }
        let outer = all_subsets(n, k);
        let lift = all_subsets(n - 1, k)
            .into_iter()
            .map(|t| outer.iter().find(|s| s.mask == t.mask).unwrap().clone())
            .collect();
        Ok(PrimeReduction {
            inner,
            shape: Shape::new(n - 1, k, j)?,
            lift,
        })
    }
}

impl<R: BanRule> BanRule for PrimeReduction<R> {
    fn shape(&self) -> Shape {
        self.shape
    }

    fn bans(&self, t: &Subset, seq: &[u8]) -> bool {
        let s = &self.lift[t.rank];
        let mut buf = [0u8; super::MAX_LENGTH];
        let n = seq.len() + 1;
        buf[..n - 1].copy_from_slice(seq);
        (0..self.shape.j as u8).all(|l| {
            buf[n - 1] = l;
            self.inner.bans(s, &buf[..n])
        })
    }
}

/// Materialized `f̂`. Accepts relaxed inputs.
pub fn reduce_hat<R: BanRule + ?Sized>(f: &R) -> Result<RelaxedBanProblem> {
    Ok(RelaxedBanProblem(BanTable::materialize(&HatReduction::new(f)?)?))
}

/// Materialized `f'`. Accepts relaxed inputs.
pub fn reduce_prime<R: BanRule + ?Sized>(f: &R) -> Result<RelaxedBanProblem> {
    Ok(RelaxedBanProblem(BanTable::materialize(&PrimeReduction::new(f)?)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingReport {
    pub shape: Shape,
    pub banned: u128,
    pub banned_hat: u128,
    pub banned_prime: u128,
    /// `B(f̂) + (j-1) B(f')`.
    pub rhs: u128,
    pub holds: bool,
}

/// Counts banned sequences of `f`, `f̂` and `f'` and compares.
pub fn check_counting_inequality<R: BanRule + ?Sized>(f: &R, caps: &Caps) -> Result<CountingReport> {
    let shape = f.shape();
    if shape.k < 2 {
        return Err(Error::input("the counting inequality needs k >= 2"));
    }
    let hat = HatReduction::new(f)?;
    let prime = PrimeReduction::new(f).ok();
    let banned = banned_count(f, caps)?;
    let banned_hat = banned_count(&hat, caps)?;
    // With k = n there is no f'; it has no positions to ban and counts zero.
    let banned_prime = match &prime {
        Some(p) => banned_count(p, caps)?,
        None => 0,
    };
    let rhs = banned_hat + (shape.j as u128 - 1) * banned_prime;
    Ok(CountingReport {
        shape,
        banned,
        banned_hat,
        banned_prime,
        rhs,
        holds: banned >= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banseq::{
        parity_problem, random_problem, solutions, BanProblem, ParityRule,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn full_table(shape: Shape) -> BanTable {
        let mut t = BanTable::empty(shape).unwrap();
        for s in 0..t.subsets().len() {
            for x in 0..t.x_count() {
                for z in 0..t.z_count() {
                    t.set(s, x, z, true);
                }
            }
        }
        t
    }

    #[test]
    fn banning_everything_survives_both_reductions() {
        let f = BanProblem::from_table(full_table(Shape::new(3, 2, 2).unwrap())).unwrap();
        for r in [reduce_hat(&f).unwrap(), reduce_prime(&f).unwrap()] {
            assert!(solutions(&r, &Caps::default()).unwrap().is_empty());
            let t = r.table();
            for s in 0..t.subsets().len() {
                for x in 0..t.x_count() {
                    assert_eq!(t.ban_set(s, x).len() as u64, t.z_count());
                }
            }
        }
        let c = check_counting_inequality(&f, &Caps::default()).unwrap();
        assert_eq!((c.banned, c.banned_hat, c.banned_prime), (8, 4, 4));
        assert!(c.holds);
    }

    #[test]
    fn hat_of_single_pattern() {
        // n=3, k=2: ban only Z=11 at S={1,2}, for every X.
        let shape = Shape::new(3, 2, 2).unwrap();
        let mut t = BanTable::empty(shape).unwrap();
        let s = t.rank_of(&[1, 2]).unwrap();
        for x in 0..2 {
            t.set(s, x, 3, true);
        }
        let hat = reduce_hat(&RelaxedBanProblem(t)).unwrap();
        let h = hat.table();
        assert_eq!(h.shape(), Shape::new(2, 1, 2).unwrap());
        for x in 0..2 {
            assert_eq!(h.ban_set(h.rank_of(&[1]).unwrap(), x), vec![1]);
            assert!(h.ban_set(h.rank_of(&[0]).unwrap(), x).is_empty());
        }
    }

    #[test]
    fn parity_prime_is_empty() {
        let p = reduce_prime(&parity_problem(3).unwrap()).unwrap();
        let t = p.table();
        for s in 0..t.subsets().len() {
            for x in 0..t.x_count() {
                assert!(t.ban_set(s, x).is_empty());
            }
        }
        assert!(reduce_hat(&ParityRule::new(3).unwrap()).is_err());
    }

    #[test]
    fn inequality_on_random_problems() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=6 {
            for k in 2..=n {
                for j in [2, 3] {
                    let f = random_problem(Shape::new(n, k, j).unwrap(), 0.25, &mut rng).unwrap();
                    assert!(check_counting_inequality(&f, &Caps::default()).unwrap().holds);
                }
            }
        }
    }

    #[test]
    fn precondition_errors() {
        let f = parity_problem(1).unwrap();
        assert!(reduce_prime(&f).is_err());
        assert!(check_counting_inequality(&f, &Caps::default()).is_err());
    }
}
