//! JSON file formats. Every `parse_*` accepts the text form and validates
//! it into the library type; every `*_to_json` emits text that parses back
//! to an equal value.
//!
//! | object | shape |
//! |---|---|
//! | set system | `{"universe": 3, "sets": ["011", "100"], "name": "..."}` |
//! | arrangement | `{"r": 2, "points": [["1/2","0"]], "halfspaces": [{"normal": ["1","0"], "offset": "0"}]}` |
//! | ban problem | `{"n": 4, "k": 2, "j": 2, "bans": [{"S": [0,2], "X": "01", "banned": ["10"]}]}` or `{"generator": "parity", "n": 5}` |
//! | graph | `{"vertices": 4, "edges": [[0,1],[1,2]]}` |
//! | type tree | `{"": 0, "0": 2, "1": 1}` |
//! | probability space | `{"points": 3, "weights": ["1/4","1/4","1/2"]}` |
//! | element tree | `{"arity_exponent": 1, "height": 2, "labels": [[0],[1],[2]]}` |

use std::collections::{BTreeMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::banseq::{
    fill, from_element_tree, from_vc, parity_problem, random_problem, seq_from_string,
    seq_to_string, BanProblem, BanTable, RelaxedBanProblem, Shape,
};
use crate::dims::ElementTree;
use crate::rational::{self, Rational};
use crate::setsystem::geometry::{Halfspace, PointArrangement};
use crate::setsystem::{bits_from_string, bits_to_string, SetSystem};
use crate::thicketvc::ProbSpace;
use crate::typetree::{Graph, TypeTree};
use crate::{Caps, Error, Result};

fn to_text<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

// ---- set systems ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSetSystem {
    universe: usize,
    sets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

pub fn parse_set_system(text: &str) -> Result<SetSystem> {
    let raw: RawSetSystem = serde_json::from_str(text)?;
    set_system_from_raw(raw)
}

fn set_system_from_raw(raw: RawSetSystem) -> Result<SetSystem> {
    let sets = raw
        .sets
        .iter()
        .map(|s| bits_from_string(s, raw.universe))
        .collect::<Result<Vec<_>>>()?;
    let f = SetSystem::new(raw.universe, sets)?;
    Ok(match raw.name {
        Some(n) => f.with_name(n),
        None => f,
    })
}

fn set_system_raw(f: &SetSystem) -> RawSetSystem {
    RawSetSystem {
        universe: f.universe(),
        sets: f.sets().iter().map(|&s| bits_to_string(s, f.universe())).collect(),
        name: f.name().map(str::to_string),
    }
}

pub fn set_system_to_json(f: &SetSystem) -> String {
    to_text(&set_system_raw(f))
}

// ---- arrangements ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHalfspace {
    normal: Vec<String>,
    offset: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrangement {
    r: usize,
    points: Vec<Vec<String>>,
    halfspaces: Vec<RawHalfspace>,
}

fn rationals(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rational::parse(s)).collect()
}

fn rational_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

pub fn parse_arrangement(text: &str) -> Result<PointArrangement> {
    let raw: RawArrangement = serde_json::from_str(text)?;
    let points = raw
        .points
        .iter()
        .map(|p| rationals(p))
        .collect::<Result<Vec<_>>>()?;
    let halfspaces = raw
        .halfspaces
        .iter()
        .map(|h| Ok(Halfspace::new(rationals(&h.normal)?, rational::parse(&h.offset)?)))
        .collect::<Result<Vec<_>>>()?;
    PointArrangement::new(raw.r, points, halfspaces)
}

pub fn arrangement_to_json(a: &PointArrangement) -> String {
    to_text(&RawArrangement {
        r: a.dimension(),
        points: a.points().iter().map(|p| rational_strings(p)).collect(),
        halfspaces: a
            .halfspaces()
            .iter()
            .map(|h| RawHalfspace {
                normal: rational_strings(&h.normal),
                offset: rational::format(&h.offset),
            })
            .collect(),
    })
}

// ---- element trees ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElementTree {
    arity_exponent: usize,
    height: usize,
    labels: Vec<Vec<usize>>,
}

pub fn parse_element_tree(text: &str) -> Result<ElementTree> {
    element_tree_from_raw(serde_json::from_str(text)?)
}

fn element_tree_from_raw(raw: RawElementTree) -> Result<ElementTree> {
    ElementTree::new(raw.arity_exponent, raw.height, raw.labels)
}

pub fn element_tree_to_json(t: &ElementTree) -> String {
    to_text(t)
}

// ---- ban problems ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBan {
    #[serde(rename = "S")]
    s: Vec<usize>,
    #[serde(rename = "X")]
    x: String,
    banned: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBanTable {
    n: usize,
    k: usize,
    j: usize,
    bans: Vec<RawBan>,
}

#[derive(Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
enum Generator {
    Parity {
        n: usize,
    },
    Vc {
        system: RawSetSystem,
        m: usize,
    },
    ElementTree {
        tree: RawElementTree,
        system: RawSetSystem,
        m: usize,
    },
    Random {
        n: usize,
        k: usize,
        j: usize,
        #[serde(default = "default_density")]
        density: f64,
        #[serde(default)]
        seed: u64,
    },
}

fn default_density() -> f64 {
    0.25
}

/// Parses an explicit ban table. With `strict`, every key must be listed
/// and every ban set nonempty; otherwise missing keys are empty.
pub fn parse_ban_table(text: &str, strict: bool) -> Result<BanTable> {
    let raw: RawBanTable = serde_json::from_str(text)?;
    let shape = Shape::new(raw.n, raw.k, raw.j)?;
    let mut table = BanTable::empty(shape)?;
    let mut seen = HashSet::new();
    for (i, ban) in raw.bans.iter().enumerate() {
        let at = |msg: String| Error::input(format!("bans[{i}]: {msg}"));
        let rank = table
            .rank_of(&ban.s)
            .ok_or_else(|| at(format!("S={:?} is not an ascending {}-subset of [{}]", ban.s, raw.k, raw.n)))?;
        let x = seq_from_string(&ban.x, raw.n - raw.k, raw.j).map_err(|e| at(e.to_string()))?;
        let x_code = crate::banseq::encode(&x, raw.j);
        if !seen.insert((rank, x_code)) {
            return Err(at(format!("duplicate key S={:?}, X=\"{}\"", ban.s, ban.x)));
        }
        for z in &ban.banned {
            let z = seq_from_string(z, raw.k, raw.j).map_err(|e| at(e.to_string()))?;
            table.set(rank, x_code, crate::banseq::encode(&z, raw.j), true);
        }
    }
    if strict {
        let keys = shape.subset_count() * shape.x_count();
        if seen.len() as u128 != keys {
            return Err(Error::input(format!(
                "table lists {} of the {keys} (S, X) keys",
                seen.len()
            )));
        }
    }
    Ok(table)
}

/// Parses an explicit table or a generator shorthand.
pub fn parse_ban_problem(text: &str, caps: &Caps) -> Result<BanProblem> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("generator").is_none() {
        return BanProblem::from_table(parse_ban_table(text, true)?);
    }
    match serde_json::from_value::<Generator>(value)? {
        Generator::Parity { n } => parity_problem(n),
        Generator::Vc { system, m } => from_vc(&set_system_from_raw(system)?, m, caps),
        Generator::ElementTree { tree, system, m } => from_element_tree(
            &element_tree_from_raw(tree)?,
            &set_system_from_raw(system)?,
            m,
            caps,
        ),
        Generator::Random {
            n,
            k,
            j,
            density,
            seed,
        } => random_problem(Shape::new(n, k, j)?, density, &mut ChaCha8Rng::seed_from_u64(seed)),
    }
}

pub fn parse_relaxed_problem(text: &str) -> Result<RelaxedBanProblem> {
    Ok(RelaxedBanProblem(parse_ban_table(text, false)?))
}

/// Every key in order (`S` lexicographic, then `X`), including empty ban sets.
pub fn ban_table_to_json(t: &BanTable) -> String {
    let shape = t.shape();
    let mut seq = vec![0u8; shape.n];
    let mut bans = Vec::new();
    for s in t.subsets() {
        for x in 0..t.x_count() {
            fill(&mut seq, s, x, 0, shape.j);
            let xs: Vec<u8> = (0..shape.n).filter(|&i| !s.contains(i)).map(|i| seq[i]).collect();
            let banned = t
                .ban_set(s.rank, x)
                .into_iter()
                .map(|z| seq_to_string(&crate::banseq::decode(z, shape.k, shape.j)))
                .collect();
            bans.push(RawBan {
                s: s.elems.clone(),
                x: seq_to_string(&xs),
                banned,
            });
        }
    }
    to_text(&RawBanTable {
        n: shape.n,
        k: shape.k,
        j: shape.j,
        bans,
    })
}

pub fn ban_problem_to_json(f: &BanProblem) -> Result<String> {
    Ok(ban_table_to_json(&f.to_table()?))
}

// ---- graphs and type trees ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let raw: RawGraph = serde_json::from_str(text)?;
    Graph::new(raw.vertices, &raw.edges)
}

pub fn graph_to_json(g: &Graph) -> String {
    to_text(&RawGraph {
        vertices: g.vertex_count(),
        edges: g.edges(),
    })
}

pub fn parse_type_tree(text: &str) -> Result<TypeTree> {
    let nodes: BTreeMap<String, usize> = serde_json::from_str(text)?;
    TypeTree::new(nodes)
}

pub fn type_tree_to_json(t: &TypeTree) -> String {
    to_text(t)
}

// ---- probability spaces ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    points: usize,
    weights: Vec<String>,
}

pub fn parse_prob_space(text: &str) -> Result<ProbSpace> {
    let raw: RawSpace = serde_json::from_str(text)?;
    if raw.weights.len() != raw.points {
        return Err(Error::input(format!(
            "{} weights for {} points",
            raw.weights.len(),
            raw.points
        )));
    }
    ProbSpace::new(rationals(&raw.weights)?)
}

pub fn prob_space_to_json(s: &ProbSpace) -> String {
    to_text(&RawSpace {
        points: s.len(),
        weights: rational_strings(s.weights()),
    })
}

/// Parses a subset given as a 0/1 string over `n` points or as a JSON list
/// of indices.
pub fn parse_subset(text: &str, n: usize) -> Result<crate::setsystem::Bits> {
    let text = text.trim();
    if text.starts_with('[') {
        let idx: Vec<usize> = serde_json::from_str(text)?;
        if let Some(&i) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::input(format!("index {i} outside 0..{n}")));
        }
        return Ok(crate::combin::mask_of(&idx));
    }
    bits_from_string(text, n)
}

/// Convenience for reports: a JSON value from any serializable object.
pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| json!({ "error": e.to_string() }))
}
