//! Points and half-spaces in `Q^r` with exact rational predicates.

use num_traits::Zero;
use rand::Rng;

use super::SetSystem;
use crate::combin::{binomial_prefix_sum, subsets};
use crate::rational::{from_ratio, Rational};
use crate::{Error, Result};

/// `{ p : <normal, p> >= offset }`. With `>=` replaced by `=` it is also the
/// bounding hyperplane, which is how lines are given to
/// [`line_arrangement_cells`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    fn value(&self, p: &[Rational]) -> Rational {
        self.normal
            .iter()
            .zip(p)
            .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.value(p) >= self.offset
    }

    pub fn on_boundary(&self, p: &[Rational]) -> bool {
        self.value(p) == self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointArrangement {
    r: usize,
    points: Vec<Vec<Rational>>,
    halfspaces: Vec<Halfspace>,
    general_position: bool,
}

impl PointArrangement {
    pub fn new(r: usize, points: Vec<Vec<Rational>>, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if r == 0 {
            return Err(Error::input("arrangement dimension must be positive"));
        }
        if let Some(i) = points.iter().position(|p| p.len() != r) {
            return Err(Error::input(format!("point {i} does not have {r} coordinates")));
        }
        if let Some(i) = halfspaces.iter().position(|h| h.normal.len() != r) {
            return Err(Error::input(format!("halfspace {i} normal does not have {r} coordinates")));
        }
        if let Some(i) = halfspaces.iter().position(|h| h.normal.iter().all(Zero::is_zero)) {
            return Err(Error::input(format!("halfspace {i} has a zero normal")));
        }
        let mut arr = PointArrangement {
            r,
            points,
            halfspaces,
            general_position: false,
        };
        arr.general_position = arr.check_general_position().is_ok();
        Ok(arr)
    }

    pub fn dimension(&self) -> usize {
        self.r
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn general_position(&self) -> bool {
        self.general_position
    }

    /// `Ok` iff every `m <= r` of the hyperplanes have linearly independent
    /// normals and no point lies on a hyperplane; otherwise names a violation.
    pub fn check_general_position(&self) -> Result<()> {
        for (hi, h) in self.halfspaces.iter().enumerate() {
            if let Some(pi) = self.points.iter().position(|p| h.on_boundary(p)) {
                return Err(Error::input(format!("point {pi} lies on hyperplane {hi}")));
            }
        }
        let m = self.halfspaces.len().min(self.r);
        for group in subsets(self.halfspaces.len(), m) {
            let rows: Vec<Vec<Rational>> =
                group.iter().map(|&i| self.halfspaces[i].normal.clone()).collect();
            if rank(rows) < m {
                return Err(Error::input(format!(
                    "hyperplanes {group:?} have linearly dependent normals"
                )));
            }
        }
        Ok(())
    }

    /// Base = points (in given order), one set per half-space: the points it contains.
    pub fn incidence(&self) -> Result<SetSystem> {
        if self.points.len() > super::MAX_UNIVERSE {
            return Err(Error::input("too many points for a bit-vector universe"));
        }
        let sets = self.halfspaces.iter().map(|h| {
            self.points
                .iter()
                .enumerate()
                .filter(|(_, p)| h.contains(p))
                .fold(0u128, |m, (i, _)| m | 1 << i)
        });
        SetSystem::new(self.points.len(), sets)
    }
}

/// Row rank over the rationals.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &rows[rank][c];
                for k in c..cols {
                    let delta = &factor * &rows[rank][k];
                    rows[i][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Cells cut out of `R^r` by `s` hyperplanes in general position.
pub fn region_count_general_position(r: usize, s: usize) -> u128 {
    binomial_prefix_sum(s as u64, r as i64)
}

fn intersection(a: &Halfspace, b: &Halfspace) -> Option<(Rational, Rational)> {
    let (a1, b1, c1) = (&a.normal[0], &a.normal[1], &a.offset);
    let (a2, b2, c2) = (&b.normal[0], &b.normal[1], &b.offset);
    let det = a1 * b2 - a2 * b1;
    if det.is_zero() {
        return None;
    }
    let x = (c1 * b2 - c2 * b1) / &det;
    let y = (a1 * c2 - a2 * c1) / &det;
    Some((x, y))
}

/// Checks the lines (`<normal, p> = offset` in `Q^2`) are pairwise
/// non-parallel with no three concurrent.
pub fn check_lines_general(lines: &[Halfspace]) -> Result<()> {
    if let Some(i) = lines.iter().position(|l| l.normal.len() != 2) {
        return Err(Error::input(format!("line {i} is not in Q^2")));
    }
    if let Some(i) = lines.iter().position(|l| l.normal.iter().all(Zero::is_zero)) {
        return Err(Error::input(format!("line {i} has a zero normal")));
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let Some(p) = intersection(&lines[i], &lines[j]) else {
                return Err(Error::input(format!("lines {i} and {j} are parallel")));
            };
            let pt = [p.0, p.1];
            if let Some(k) = (j + 1..lines.len()).find(|&k| lines[k].on_boundary(&pt)) {
                return Err(Error::input(format!("lines {i}, {j} and {k} are concurrent")));
            }
        }
    }
    Ok(())
}

/// Exact number of faces of a line arrangement in general position, by
/// counting vertices and edges and applying Euler's relation on the sphere
/// (all unbounded edges meet in one extra vertex at infinity):
/// `F = 1 + E - V`.
pub fn line_arrangement_cells(lines: &[Halfspace]) -> Result<u128> {
    check_lines_general(lines)?;
    let mut vertices: Vec<(Rational, Rational)> = Vec::new();
    let mut per_line: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); lines.len()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = intersection(&lines[i], &lines[j]) {
                per_line[i].push(p.clone());
                per_line[j].push(p.clone());
                vertices.push(p);
            }
        }
    }
    let distinct = |v: &mut Vec<(Rational, Rational)>| {
        v.sort();
        v.dedup();
        v.len() as u128
    };
    let v = distinct(&mut vertices);
    let e: u128 = per_line.iter_mut().map(|pts| distinct(pts) + 1).sum();
    Ok(1 + e - v)
}

/// Random lines with small integer coefficients, resampled until the whole
/// set is in general position.
pub fn random_general_lines<R: Rng + ?Sized>(s: usize, rng: &mut R) -> Vec<Halfspace> {
    let mut lines: Vec<Halfspace> = Vec::with_capacity(s);
    while lines.len() < s {
        let a = rng.gen_range(-20i64..=20);
        let b = rng.gen_range(-20i64..=20);
        if a == 0 && b == 0 {
            continue;
        }
        let c = rng.gen_range(-50i64..=50);
        lines.push(Halfspace::new(vec![from_ratio(a, 1), from_ratio(b, 1)], from_ratio(c, 1)));
        if check_lines_general(&lines).is_err() {
            lines.pop();
        }
    }
    lines
}
