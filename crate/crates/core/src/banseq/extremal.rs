use crate::combin::subsets;
use crate::{Caps, Error, Result};

/// Hard limit on the length: points of the cube must fit a `u128`.
const MAX_HITTING_LENGTH: usize = 7;

/// Minimum number of points of `{0,1}^n` meeting every `k`-dimensional
/// subcube (every `(S, X)` extension set).
///
/// Iterative deepening with a disjoint-cube lower bound. Translations of the
/// cube map subcubes to subcubes, so some optimal set contains the origin.
pub fn min_subcube_hitting(n: usize, k: usize, caps: &Caps) -> Result<u32> {
    if k == 0 || k > n {
        return Err(Error::input(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    Error::check_cap("hitting_length", n as u128, caps.hitting_length as u128)?;
    Error::check_cap("hitting_length", n as u128, MAX_HITTING_LENGTH as u128)?;
    let cubes = cubes(n, k);
    let start: u128 = 1;
    let mut budget = 1;
    loop {
        if search(&cubes, start, budget - 1) {
            return Ok(budget);
        }
        budget += 1;
    }
}

/// `2^n - min_subcube_hitting(n, k)`: the most solutions a binary `k`-fold
/// problem of length `n` can have. Banning one hitting point per subcube
/// leaves the complement of a hitting set as the solution set.
pub fn max_solutions(n: usize, k: usize, caps: &Caps) -> Result<u128> {
    Ok((1u128 << n) - min_subcube_hitting(n, k, caps)? as u128)
}

/// Every subcube as a mask over the `2^n` points.
fn cubes(n: usize, k: usize) -> Vec<u128> {
    let mut out = Vec::new();
    for s in subsets(n, k) {
        let smask: usize = s.iter().fold(0, |m, &i| m | 1 << i);
        let free = (1usize << n) - 1 & !smask;
        // Enumerate assignments outside S as sub-masks of `free`.
        let mut x = 0usize;
        loop {
            let cube = (0..1usize << n)
                .filter(|p| p & free == x)
                .fold(0u128, |m, p| m | 1 << p);
            out.push(cube);
            if x == free {
                break;
            }
            x = (x.wrapping_sub(free)) & free;
        }
    }
    out
}

fn search(cubes: &[u128], chosen: u128, budget: u32) -> bool {
    let Some(&target) = cubes.iter().find(|&&c| c & chosen == 0) else {
        return true;
    };
    if budget == 0 || disjoint_unhit(cubes, chosen) > budget {
        return false;
    }
    let mut points = target;
    while points != 0 {
        let p = points.trailing_zeros();
        points &= points - 1;
        if search(cubes, chosen | 1 << p, budget - 1) {
            return true;
        }
    }
    false
}

/// Size of a greedy family of pairwise disjoint unhit cubes; each needs its own point.
fn disjoint_unhit(cubes: &[u128], chosen: u128) -> u32 {
    let mut used = 0u128;
    let mut count = 0;
    for &c in cubes {
        if c & chosen == 0 && c & used == 0 {
            used |= c;
            count += 1;
        }
    }
    count
}
