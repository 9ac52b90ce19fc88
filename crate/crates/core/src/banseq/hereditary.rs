//! Hereditary check as a game.
//!
//! For a fixed `S`, a family `{(Z, X_Z)}` with every `X_Z ∧ Z` unbanned and
//! pairwise first differences inside `S` is the same thing as a `j`-ary
//! decision tree that branches on every digit of `Z` at the positions of
//! `S` and picks the other digits as functions of the `Z`-prefix seen so
//! far. The search walks positions left to right: at a position of `S` all
//! digits must succeed, elsewhere one digit must.

use serde::Serialize;

use super::{all_subsets, seq_to_string, BanProblem, BanRule, Subset};
use crate::{Caps, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    #[serde(rename = "Z")]
    pub z: String,
    #[serde(rename = "X")]
    pub x: String,
}

/// A subset `S` and, for every `Z`, an `X_Z` with `Z ∉ f(S, X_Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HereditaryWitness {
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub assignments: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HereditaryReport {
    pub hereditary: bool,
    pub witness: Option<HereditaryWitness>,
}

/// Decides hereditariness; a non-hereditary problem comes with a witness.
pub fn is_hereditary(f: &BanProblem, caps: &Caps) -> Result<HereditaryReport> {
    let shape = f.shape();
    Error::check_cap("sequences", shape.sequence_count(), caps.sequences)?;
    let mut seq = vec![0u8; shape.n];
    for s in all_subsets(shape.n, shape.k) {
        if wins(f, &s, &mut seq, 0) {
            let mut rows = Vec::new();
            extract(f, &s, &mut seq, 0, &mut rows);
            let assignments = rows
                .into_iter()
                .map(|full| split(&full, &s))
                .collect();
            return Ok(HereditaryReport {
                hereditary: false,
                witness: Some(HereditaryWitness {
                    s: s.elems.clone(),
                    assignments,
                }),
            });
        }
    }
    Ok(HereditaryReport {
        hereditary: true,
        witness: None,
    })
}

fn wins<R: BanRule + ?Sized>(f: &R, s: &Subset, seq: &mut [u8], pos: usize) -> bool {
    if pos == seq.len() {
        return !f.bans(s, seq);
    }
    let j = f.shape().j as u8;
    if s.contains(pos) {
        (0..j).all(|d| {
            seq[pos] = d;
            wins(f, s, seq, pos + 1)
        })
    } else {
        (0..j).any(|d| {
            seq[pos] = d;
            wins(f, s, seq, pos + 1)
        })
    }
}

/// Follows a winning strategy, collecting one leaf per `Z` in `Z` order.
fn extract<R: BanRule + ?Sized>(
    f: &R,
    s: &Subset,
    seq: &mut [u8],
    pos: usize,
    out: &mut Vec<Vec<u8>>,
) {
    if pos == seq.len() {
        out.push(seq.to_vec());
        return;
    }
    let j = f.shape().j as u8;
    if s.contains(pos) {
        for d in 0..j {
            seq[pos] = d;
            extract(f, s, seq, pos + 1, out);
        }
    } else {
        let d = (0..j)
            .find(|&d| {
                seq[pos] = d;
                wins(f, s, seq, pos + 1)
            })
            .expect("extract is only called on winning positions");
        seq[pos] = d;
        extract(f, s, seq, pos + 1, out);
    }
}

fn split(full: &[u8], s: &Subset) -> Assignment {
    let (mut z, mut x) = (Vec::new(), Vec::new());
    for (i, &d) in full.iter().enumerate() {
        if s.contains(i) {
            z.push(d);
        } else {
            x.push(d);
        }
    }
    Assignment {
        z: seq_to_string(&z),
        x: seq_to_string(&x),
    }
}

/// Validates a witness directly against the definition: every `Z` appears
/// once, `X_Z ∧ Z` is unbanned, and any two full sequences first differ
/// inside `S`.
pub fn check_witness<R: BanRule + ?Sized>(
    f: &R,
    w: &HereditaryWitness,
) -> std::result::Result<(), String> {
    let shape = f.shape();
    let s = all_subsets(shape.n, shape.k)
        .into_iter()
        .find(|c| c.elems == w.s)
        .ok_or_else(|| format!("{:?} is not a {}-subset", w.s, shape.k))?;
    if w.assignments.len() as u128 != shape.z_count() {
        return Err(format!(
            "{} assignments, expected {}",
            w.assignments.len(),
            shape.z_count()
        ));
    }
    let mut fulls = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for a in &w.assignments {
        let z = super::seq_from_string(&a.z, shape.k, shape.j).map_err(|e| e.to_string())?;
        let x =
            super::seq_from_string(&a.x, shape.n - shape.k, shape.j).map_err(|e| e.to_string())?;
        if !seen.insert(z.clone()) {
            return Err(format!("Z={} listed twice", a.z));
        }
        let (mut zi, mut xi) = (z.into_iter(), x.into_iter());
        let full: Vec<u8> = (0..shape.n)
            .map(|i| {
                if s.contains(i) {
                    zi.next().unwrap()
                } else {
                    xi.next().unwrap()
                }
            })
            .collect();
        if f.bans(&s, &full) {
            return Err(format!("Z={} is banned at X={}", a.z, a.x));
        }
        fulls.push(full);
    }
    for (a, fa) in fulls.iter().enumerate() {
        for fb in &fulls[a + 1..] {
            let first = fa.iter().zip(fb).position(|(p, q)| p != q);
            match first {
                Some(i) if s.contains(i) => {}
                _ => {
                    return Err(format!(
                        "{} and {} first differ outside S",
                        seq_to_string(fa),
                        seq_to_string(fb)
                    ))
                }
            }
        }
    }
    Ok(())
}
