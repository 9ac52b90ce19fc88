//! Brute-force oracles and seeded corpora shared by the integration tests.
//! Nothing here calls the library's search code; only constructors and the
//! `BanRule::bans` query are used.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shatterlab::banseq::{all_subsets, BanRule};
use shatterlab::setsystem::{generate, Kind};
use shatterlab::typetree::Graph;
use shatterlab::SetSystem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The named fixtures on small universes.
pub fn zoo() -> Vec<SetSystem> {
    let mut out = vec![SetSystem::empty_family(3).unwrap(), SetSystem::new(3, [0b101]).unwrap()];
    for n in 1..=4 {
        out.push(generate(&Kind::Powerset(n)).unwrap());
        out.push(generate(&Kind::SingletonsWithEmpty(n)).unwrap());
        out.push(generate(&Kind::Thresholds(n)).unwrap());
        out.push(generate(&Kind::Intervals(n)).unwrap());
        for d in 0..n {
            out.push(generate(&Kind::SubsetsOfSizeAtMost(n, d)).unwrap());
        }
    }
    out
}

pub fn random_families(count: usize, max_universe: usize, max_sets: usize, seed: u64) -> Vec<SetSystem> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let u = r.gen_range(1..=max_universe);
            let m = r.gen_range(0..=max_sets);
            SetSystem::random(u, m, &mut r).unwrap()
        })
        .collect()
}

/// Number of distinct leaves reached by members of `f` in a `2^s`-ary tree
/// of height `h` whose node `i` (children of `i` at `i * 2^s + 1 + d`) carries
/// the tuple `labels[i]`. A member reaches exactly one leaf, and every leaf it
/// reaches is one it properly labels.
pub fn leaves_reached(f: &SetSystem, s: usize, h: usize, labels: &[Vec<usize>]) -> usize {
    let mut leaves: Vec<usize> = f
        .sets()
        .iter()
        .map(|&a| {
            let mut node = 0;
            for _ in 0..h {
                let digit = labels[node]
                    .iter()
                    .enumerate()
                    .fold(0usize, |d, (i, &x)| d | (((a >> x) & 1) as usize) << i);
                node = node * (1 << s) + 1 + digit;
            }
            node
        })
        .collect();
    leaves.sort_unstable();
    leaves.dedup();
    leaves.len()
}

/// Calls `visit` on every labeling of a `2^s`-ary tree of height `h` by
/// ordered `s`-tuples over `0..u`.
pub fn for_each_tree(u: usize, s: usize, h: usize, mut visit: impl FnMut(&[Vec<usize>])) {
    let arity = 1usize << s;
    let nodes = (0..h).map(|l| arity.pow(l as u32)).sum::<usize>();
    let tuples: Vec<Vec<usize>> = (0..u.pow(s as u32))
        .map(|mut c| {
            (0..s)
                .map(|_| {
                    let x = c % u;
                    c /= u;
                    x
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; nodes];
    loop {
        let labels: Vec<Vec<usize>> = idx.iter().map(|&i| tuples[i].clone()).collect();
        visit(&labels);
        let mut p = 0;
        loop {
            if p == nodes {
                return;
            }
            idx[p] += 1;
            if idx[p] < tuples.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Most leaves reached over all `2^s`-ary trees of height `h`.
pub fn brute_tree_shatter(f: &SetSystem, s: usize, h: usize) -> usize {
    if f.is_empty() {
        return 0;
    }
    let mut best = 0;
    for_each_tree(f.universe(), s, h, |labels| best = best.max(leaves_reached(f, s, h, labels)));
    best
}

/// Most leaves reached over binary trees whose levels carry one label each.
pub fn brute_vc_shatter(f: &SetSystem, h: usize) -> usize {
    let u = f.universe();
    let mut best = 0;
    let mut level = vec![0usize; h];
    loop {
        let labels: Vec<Vec<usize>> = (0..h)
            .flat_map(|l| std::iter::repeat(vec![level[l]]).take(1 << l))
            .collect();
        best = best.max(leaves_reached(f, 1, h, &labels));
        let mut p = 0;
        loop {
            if p == h {
                return best;
            }
            level[p] += 1;
            if level[p] < u {
                break;
            }
            level[p] = 0;
            p += 1;
        }
    }
}

/// All `j^n` sequences in lexicographic order.
pub fn all_sequences(n: usize, j: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..j as u8).map(move |d| {
                    let mut q = p.clone();
                    q.push(d);
                    q
                })
            })
            .collect();
    }
    out
}

/// Solution count by checking every sequence against every `S`.
pub fn brute_solutions<R: BanRule + ?Sized>(f: &R) -> usize {
    let sh = f.shape();
    let subsets = all_subsets(sh.n, sh.k);
    all_sequences(sh.n, sh.j)
        .iter()
        .filter(|seq| subsets.iter().all(|s| !f.bans(s, seq)))
        .count()
}

/// Hereditariness straight from the definition: for some `S`, pick a full
/// sequence for every pattern `Z` on `S`, unbanned at `S`, with every pair
/// first differing inside `S`. Plain backtracking over the patterns.
pub fn brute_hereditary<R: BanRule + ?Sized>(f: &R) -> bool {
    let sh = f.shape();
    let seqs = all_sequences(sh.n, sh.j);
    for s in all_subsets(sh.n, sh.k) {
        let patterns = all_sequences(sh.k, sh.j);
        // Candidates per pattern: full sequences carrying it on S and unbanned.
        let cands: Vec<Vec<&Vec<u8>>> = patterns
            .iter()
            .map(|z| {
                seqs.iter()
                    .filter(|q| s.elems.iter().zip(z).all(|(&i, &d)| q[i] == d) && !f.bans(&s, q))
                    .collect()
            })
            .collect();
        if cands.iter().any(Vec::is_empty) {
            continue;
        }
        let compatible = |a: &[u8], b: &[u8]| match a.iter().zip(b).position(|(x, y)| x != y) {
            Some(i) => s.contains(i),
            None => false,
        };
        let mut chosen: Vec<&Vec<u8>> = vec![];
        if backtrack(&cands, &mut chosen, &compatible) {
            return false;
        }
    }
    true
}

fn backtrack<'a>(
    cands: &[Vec<&'a Vec<u8>>],
    chosen: &mut Vec<&'a Vec<u8>>,
    compatible: &impl Fn(&[u8], &[u8]) -> bool,
) -> bool {
    let i = chosen.len();
    if i == cands.len() {
        return true;
    }
    for &c in &cands[i] {
        if chosen.iter().all(|p| compatible(p, c)) {
            chosen.push(c);
            if backtrack(cands, chosen, compatible) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Smallest set of binary sequences meeting every subcube obtained by fixing
/// `n - k` coordinates, by trying all point sets in order of size.
pub fn brute_min_hitting(n: usize, k: usize) -> u32 {
    let points = 1usize << n;
    let cubes: Vec<Vec<usize>> = {
        let mut out = vec![];
        for fixed in 0usize..points {
            if fixed.count_ones() as usize != n - k {
                continue;
            }
            for vals in 0usize..points {
                if vals & !fixed != 0 {
                    continue;
                }
                out.push((0..points).filter(|p| p & fixed == vals).collect());
            }
        }
        out
    };
    let mut best = u32::MAX;
    for set in 0u64..(1u64 << points) {
        let size = set.count_ones();
        if size >= best {
            continue;
        }
        if cubes.iter().all(|c| c.iter().any(|&p| set >> p & 1 == 1)) {
            best = size;
        }
    }
    best
}

/// Whether `order` (a full binary tree in breadth-first order) is a type tree:
/// each node's adjacency to every proper ancestor follows the branch taken there.
fn full_tree_ok(g: &Graph, labels: &[usize]) -> bool {
    for node in 1..labels.len() {
        let mut child = node;
        let mut parent = (node - 1) / 2;
        loop {
            let went_right = child == 2 * parent + 2;
            if g.adjacent(labels[parent], labels[node]) != went_right {
                return false;
            }
            if parent == 0 {
                break;
            }
            child = parent;
            parent = (parent - 1) / 2;
        }
    }
    true
}

fn place(g: &Graph, labels: &mut Vec<usize>, used: u128, size: usize) -> bool {
    if labels.len() == size {
        return true;
    }
    for v in 0..g.vertex_count() {
        if used >> v & 1 == 1 {
            continue;
        }
        labels.push(v);
        if full_tree_ok(g, labels) && place(g, labels, used | 1 << v, size) {
            return true;
        }
        labels.pop();
    }
    false
}

/// Whether some injective labeling of the full binary tree of height `t`
/// by vertices is a type tree of an induced subgraph.
pub fn has_full_type_tree(g: &Graph, t: usize) -> bool {
    place(g, &mut vec![], 0, (1 << t) - 1)
}

pub fn brute_tree_rank(g: &Graph) -> u32 {
    let mut t = 0u32;
    while has_full_type_tree(g, t as usize + 1) {
        t += 1;
    }
    t
}
