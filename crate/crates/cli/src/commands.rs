//! One function per subcommand. Each returns an [`Outcome`] or a library error.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use shatterlab::banseq::{
    check_counting_inequality, check_witness, from_element_tree, from_type_tree, from_vc,
    is_hereditary, max_solutions, min_subcube_hitting, parity_problem, random_problem, reduce_hat,
    reduce_prime, solutions, type_tree_level_problem, verify_main_theorem, BanProblem, BanRule, Shape,
};
use shatterlab::dims::{
    audit_bounds, op_rank, op_shatter, thicket_dimension, thicket_shatter, vc_dimension, vc_shatter_function,
    vc_witness, AuditRow, Quantity,
};
use shatterlab::formats::{self, ban_problem_to_json, ban_table_to_json};
use shatterlab::setsystem::geometry::{line_arrangement_cells, random_general_lines, region_count_general_position};
use shatterlab::setsystem::SetSystem;
use shatterlab::thicketvc::{exact_expectation, run_vc_theorem, run_weak_law, ExperimentConfig, ExperimentReport};
use shatterlab::typetree::{
    build_type_tree_natural, build_type_tree_shuffled, check_height_bound, extract_clique_or_independent,
    tree_rank, Graph, HeightStatus, TypeTree,
};
use shatterlab::{rational, Caps, Error};

use crate::output::{csv_table, Outcome};
use crate::{
    BanCommand, Cli, Command, CommandResult, Context, DimKind, GeneratorKind, GeomCommand, GraphCommand, McCommand,
    ReduceOp, SysCommand,
};

pub fn run(cli: &Cli) -> CommandResult {
    let ctx = cli.context();
    match &cli.command {
        Command::Sys(c) => sys(c, &ctx),
        Command::Ban(c) => ban(c, &ctx),
        Command::Graph(c) => graph(c, &ctx),
        Command::Mc(c) => mc(c, &ctx),
        Command::Geom(c) => geom(c, &ctx),
    }
}

/// Reads a file; I/O and JSON errors become input errors naming the path
/// (serde already reports line and column).
fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, Error>) -> Result<T, Error> {
    parse(&read(path)?).map_err(|e| match e {
        Error::Json(j) => Error::Input(format!("{}: {j}", path.display())),
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn usize_cap(cap: u128) -> usize {
    usize::try_from(cap).unwrap_or(usize::MAX)
}

/// Large counts stay exact as strings.
fn count(v: u128) -> Value {
    u64::try_from(v).map_or_else(|_| json!(v.to_string()), |x| json!(x))
}

fn rng(ctx: &Context) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(ctx.seed)
}

// ---- sys ----

fn dim_caps(ctx: &Context, kind: DimKind) -> Caps {
    let mut caps = Caps::default();
    if let Some(c) = ctx.cap {
        match kind {
            DimKind::Vc => caps.vc_universe = usize_cap(c),
            DimKind::Op => caps.op_universe = usize_cap(c),
            DimKind::Thicket => {}
        }
    }
    caps
}

fn sys(cmd: &SysCommand, ctx: &Context) -> CommandResult {
    match cmd {
        SysCommand::Dim { kind, s, file } => {
            let f = load(file, formats::parse_set_system)?;
            let caps = dim_caps(ctx, *kind);
            Ok(Outcome::new(match kind {
                DimKind::Vc => {
                    json!({ "dimension": vc_dimension(&f, &caps)?, "witness": vc_witness(&f, &caps)? })
                }
                DimKind::Thicket => json!({ "dimension": thicket_dimension(&f) }),
                DimKind::Op => json!({ "dimension": op_rank(&f, *s, &caps)?, "s": s }),
            }))
        }
        SysCommand::Shatter { kind, s, n, file } => {
            let f = load(file, formats::parse_set_system)?;
            let caps = dim_caps(ctx, *kind);
            let value = match kind {
                DimKind::Vc => {
                    if *n > f.universe() {
                        return Err(Error::Input(format!(
                            "n = {n} exceeds the universe size {}",
                            f.universe()
                        )));
                    }
                    vc_shatter_function(&f, *n, &caps)?
                }
                DimKind::Thicket => thicket_shatter(&f, *n),
                DimKind::Op => op_shatter(&f, *s, *n, &caps)?,
            };
            let mut out = json!({ "n": n, "value": count(value) });
            if *kind == DimKind::Op {
                out["s"] = json!(s);
            }
            Ok(Outcome::new(out))
        }
        SysCommand::Audit {
            s,
            r,
            n,
            inject_false_bound,
            file,
        } => {
            let f = load(file, formats::parse_set_system)?;
            let mut caps = Caps::default();
            if let Some(c) = ctx.cap {
                caps.vc_universe = usize_cap(c);
                caps.op_universe = usize_cap(c);
            }
            let mut report = audit_bounds(&f, *s, *r, *n, &caps)?;
            if *inject_false_bound {
                report.rows.push(AuditRow::at_most(
                    "injected_false_bound",
                    Default::default(),
                    Quantity::Value(1),
                    Quantity::Value(0),
                ));
            }
            let rows: Vec<AuditCsv> = report
                .rows
                .iter()
                .map(|row| AuditCsv {
                    bound: row.bound.clone(),
                    params: row.params_text(),
                    lhs: row.lhs.to_string(),
                    rhs: row.rhs.to_string(),
                    pass: row.pass,
                })
                .collect();
            let failing: Vec<String> = report.failures().map(|row| format!("bound `{}` fails: {} > {} ({})", row.bound, row.lhs, row.rhs, row.params_text())).collect();
            let mut out = Outcome::new(json!({ "all_pass": report.all_pass(), "rows": report.rows }))
                .with_csv(csv_table(&rows));
            if !failing.is_empty() {
                out.failed = true;
                out.diagnostics = failing;
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct AuditCsv {
    bound: String,
    params: String,
    lhs: String,
    rhs: String,
    pass: bool,
}

// ---- ban ----

fn ban_caps(ctx: &Context) -> Caps {
    let mut caps = Caps::default();
    if let Some(c) = ctx.cap {
        caps.sequences = c;
    }
    caps
}

#[derive(Serialize)]
struct SequenceRow<'a> {
    sequence: &'a str,
}

fn ban(cmd: &BanCommand, ctx: &Context) -> CommandResult {
    let caps = ban_caps(ctx);
    match cmd {
        BanCommand::Solve { list, theorem, file } => {
            let f = load(file, |t| formats::parse_ban_problem(t, &caps))?;
            let sols = solutions(&f, &caps)?;
            let strings = sols.strings();
            let mut out = json!({
                "shape": f.shape(),
                "solutions": strings.len(),
                "banned": count(sols.banned),
                "sequences": strings,
            });
            let mut failed = false;
            if *theorem {
                let report = verify_main_theorem(&f, &caps)?;
                failed = !report.ok;
                out["theorem"] = formats::to_value(&report);
            }
            let rows: Vec<SequenceRow> = strings.iter().map(|s| SequenceRow { sequence: s }).collect();
            let csv = csv_table(&rows);
            let mut o = Outcome::new(out)
                .with_csv(csv)
                .failed_if(failed, "hereditary problem has more solutions than the hereditary bound");
            if *list {
                o.lines = Some(strings);
            }
            Ok(o)
        }
        BanCommand::Hereditary { file } => {
            let f = load(file, |t| formats::parse_ban_problem(t, &caps))?;
            let report = is_hereditary(&f, &caps)?;
            let checked = report.witness.as_ref().map(|w| check_witness(&f, w));
            let mut out = formats::to_value(&report);
            if let Some(check) = &checked {
                out["witness_valid"] = json!(check.is_ok());
            }
            let bad = checked.and_then(Result::err);
            let failed = bad.is_some();
            Ok(Outcome::new(out).failed_if(failed, format!("witness rejected: {}", bad.unwrap_or_default())))
        }
        BanCommand::Reduce { op, relaxed, file } => {
            let text = read(file)?;
            let input: Box<dyn BanRule> = if *relaxed {
                Box::new(load(file, |_| formats::parse_relaxed_problem(&text))?)
            } else {
                Box::new(load(file, |_| formats::parse_ban_problem(&text, &caps))?)
            };
            let f = input.as_ref();
            match op {
                ReduceOp::Hat => Outcome::artifact(ban_table_to_json(reduce_hat(f)?.table())),
                ReduceOp::Prime => Outcome::artifact(ban_table_to_json(reduce_prime(f)?.table())),
                ReduceOp::Count => {
                    let report = check_counting_inequality(f, &caps)?;
                    let holds = report.holds;
                    Ok(Outcome::of(&report).failed_if(!holds, "counting inequality fails"))
                }
            }
        }
        BanCommand::Maxsol { n, k } => {
            let mut caps = Caps::default();
            if let Some(c) = ctx.cap {
                caps.hitting_length = usize_cap(c);
            }
            let hitting = min_subcube_hitting(*n, *k, &caps)?;
            let max = max_solutions(*n, *k, &caps)?;
            Ok(Outcome::new(json!({ "max_solutions": count(max), "min_hitting": hitting })))
        }
        BanCommand::Gen {
            generator,
            n,
            k,
            j,
            density,
            m,
            system,
            tree,
            graph,
            length,
        } => {
            let need_usize = |v: &Option<usize>, flag: &str| {
                v.ok_or_else(|| Error::Input(format!("generator {generator:?} needs --{flag}")))
            };
            let need_path = |v: &Option<std::path::PathBuf>, flag: &str| {
                v.clone()
                    .ok_or_else(|| Error::Input(format!("generator {generator:?} needs --{flag}")))
            };
            let problem: BanProblem = match generator {
                GeneratorKind::Parity => parity_problem(need_usize(n, "n")?)?,
                GeneratorKind::Random => random_problem(
                    Shape::new(need_usize(n, "n")?, need_usize(k, "k")?, *j)?,
                    *density,
                    &mut rng(ctx),
                )?,
                GeneratorKind::Vc => {
                    let f = load(&need_path(system, "system")?, formats::parse_set_system)?;
                    from_vc(&f, need_usize(m, "m")?, &Caps::default())?
                }
                GeneratorKind::ElementTree => {
                    let f = load(&need_path(system, "system")?, formats::parse_set_system)?;
                    let t = load(&need_path(tree, "tree")?, formats::parse_element_tree)?;
                    let mut caps = Caps::default();
                    if let Some(c) = ctx.cap {
                        caps.op_universe = usize_cap(c);
                    }
                    from_element_tree(&t, &f, need_usize(m, "m")?, &caps)?
                }
                GeneratorKind::TypeTree => {
                    let g = load(&need_path(graph, "graph")?, formats::parse_graph)?;
                    let tt = match tree {
                        Some(p) => load(p, formats::parse_type_tree)?,
                        None => build_type_tree_natural(&g),
                    };
                    let t = need_usize(m, "m")?;
                    match length {
                        Some(len) => type_tree_level_problem(&g, &tt, t, *len)?,
                        None => from_type_tree(&g, &tt, t)?,
                    }
                }
            };
            Outcome::artifact(ban_problem_to_json(&problem)?)
        }
    }
}

// ---- graph ----

fn graph_tree(g: &Graph, tree: &Option<std::path::PathBuf>, shuffle: bool, ctx: &Context) -> Result<TypeTree, Error> {
    match tree {
        Some(p) => load(p, formats::parse_type_tree),
        None if shuffle => Ok(build_type_tree_shuffled(g, &mut rng(ctx))),
        None => Ok(build_type_tree_natural(g)),
    }
}

fn graph(cmd: &GraphCommand, ctx: &Context) -> CommandResult {
    let mut caps = Caps::default();
    if let Some(c) = ctx.cap {
        caps.tree_rank_vertices = usize_cap(c);
    }
    match cmd {
        GraphCommand::Typetree { shuffle, validate, file } => {
            let g = load(file, formats::parse_graph)?;
            match validate {
                None => {
                    let tt = graph_tree(&g, &None, *shuffle, ctx)?;
                    Outcome::artifact(formats::type_tree_to_json(&tt))
                }
                Some(p) => {
                    let tt = load(p, formats::parse_type_tree)?;
                    match tt.validate(&g) {
                        Ok(()) => Ok(Outcome::new(json!({ "valid": true, "height": tt.height() }))),
                        Err(v) => Ok(Outcome::new(json!({ "valid": false, "violation": v }))
                            .failed_if(true, format!("not a type tree: {v}"))),
                    }
                }
            }
        }
        GraphCommand::Treerank { file } => {
            let g = load(file, formats::parse_graph)?;
            Ok(Outcome::of(&tree_rank(&g, &caps)?))
        }
        GraphCommand::Extract { tree, shuffle, file } => {
            let g = load(file, formats::parse_graph)?;
            let tt = graph_tree(&g, tree, *shuffle, ctx)?;
            tt.validate(&g)
                .map_err(|v| Error::Input(format!("not a type tree: {v}")))?;
            let ex = extract_clique_or_independent(&tt);
            let h = tt.height();
            let target = h.div_ceil(2);
            let clique_ok = g.is_clique(&ex.clique);
            let independent_ok = g.is_independent(&ex.independent);
            let mut out = formats::to_value(&ex);
            out["height"] = json!(h);
            out["target"] = json!(target);
            out["clique_verified"] = json!(clique_ok);
            out["independent_verified"] = json!(independent_ok);
            let failed = !clique_ok || !independent_ok || ex.largest() < target;
            Ok(Outcome::new(out).failed_if(failed, "extracted sets fail verification"))
        }
        GraphCommand::Heightcheck { tree, shuffle, file } => {
            let g = load(file, formats::parse_graph)?;
            let tt = graph_tree(&g, tree, *shuffle, ctx)?;
            let report = check_height_bound(&g, &tt, &caps)?;
            let failed = report.status == HeightStatus::Fails;
            Ok(Outcome::of(&report).failed_if(failed, "height bound fails for this type tree"))
        }
    }
}

// ---- mc ----

fn experiment_outcome(report: ExperimentReport) -> Outcome {
    let csv = csv_table(&report.rows);
    let pass = report.pass;
    Outcome::of(&report)
        .with_csv(csv)
        .failed_if(!pass, "empirical exceedance rate above the bound")
}

fn mc(cmd: &McCommand, ctx: &Context) -> CommandResult {
    match cmd {
        McCommand::Weaklaw {
            space,
            subset,
            n,
            epsilon,
            trials,
            tuple,
        } => {
            let space = load(space, formats::parse_prob_space)?;
            let s = formats::parse_subset(subset, space.len())?;
            let cfg = ExperimentConfig {
                n: *n,
                epsilon: rational::parse(epsilon)?,
                trials: *trials,
                seed: ctx.seed,
                tuple: *tuple,
            };
            let report = run_weak_law(&space, s, &cfg)?;
            let mut caps = Caps::default();
            if let Some(c) = ctx.cap {
                caps.expectation_paths = c;
            }
            let mut out = experiment_outcome(report);
            match exact_expectation(&space, s, *n, &caps) {
                Ok(e) => out.json["exact_expectation"] = json!(rational::format(&e)),
                Err(Error::Resource { .. }) => out
                    .diagnostics
                    .push("exact expectation skipped: above the expectation_paths cap".into()),
                Err(e) => return Err(e),
            }
            Ok(out)
        }
        McCommand::Vcthm {
            space,
            system,
            n,
            epsilon,
            trials,
        } => {
            let space = load(space, formats::parse_prob_space)?;
            let f: SetSystem = load(system, formats::parse_set_system)?;
            let cfg = ExperimentConfig {
                n: *n,
                epsilon: rational::parse(epsilon)?,
                trials: *trials,
                seed: ctx.seed,
                tuple: false,
            };
            Ok(experiment_outcome(run_vc_theorem(&space, &f, &cfg)?))
        }
    }
}

// ---- geom ----

fn geom(cmd: &GeomCommand, ctx: &Context) -> CommandResult {
    match cmd {
        GeomCommand::Regions { r, s } => Ok(Outcome::new(
            json!({ "r": r, "s": s, "regions": count(region_count_general_position(*r, *s)) }),
        )),
        GeomCommand::Cells { file, random } => {
            let lines = match (file, random) {
                (Some(p), None) => {
                    let a = load(p, formats::parse_arrangement)?;
                    if a.dimension() != 2 {
                        return Err(Error::Input(format!(
                            "{}: cells needs a planar arrangement, got r = {}",
                            p.display(),
                            a.dimension()
                        )));
                    }
                    a.halfspaces().to_vec()
                }
                (None, Some(s)) => random_general_lines(*s, &mut rng(ctx)),
                _ => return Err(Error::Input("give exactly one of an arrangement file or --random".into())),
            };
            let cells = line_arrangement_cells(&lines)?;
            let formula = region_count_general_position(2, lines.len());
            Ok(Outcome::new(json!({
                "lines": lines.len(),
                "cells": count(cells),
                "formula": count(formula),
            }))
            .failed_if(cells != formula, "cell count disagrees with the general position formula"))
        }
    }
}
