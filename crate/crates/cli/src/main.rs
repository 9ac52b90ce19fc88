//! `shatterlab`: command line front end.
//!
//! Exit codes: 0 success, 1 a checked bound or validator failed, 2 invalid
//! input, 3 a resource cap was hit.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shatterlab::caps::CAP_ENV;

use output::{Format, Outcome};

#[derive(Parser, Debug)]
#[command(name = "shatterlab", version, about = "Exact shatter functions, banned sequence problems, type trees and test-tree sampling")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the resource cap that applies to the subcommand.
    #[arg(long, global = true, env = CAP_ENV)]
    cap: Option<u128>,
    /// Suppress non-error diagnostics on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Set system dimensions, shatter functions and bound audits.
    #[command(subcommand)]
    Sys(SysCommand),
    /// Banned sequence problems.
    #[command(subcommand)]
    Ban(BanCommand),
    /// Graphs, type trees and tree rank.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Monte Carlo audits on test trees.
    #[command(subcommand)]
    Mc(McCommand),
    /// Hyperplane arrangement counts.
    #[command(subcommand)]
    Geom(GeomCommand),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimKind {
    Vc,
    Thicket,
    Op,
}

#[derive(Subcommand, Debug)]
pub enum SysCommand {
    /// VC dimension, thicket dimension or op-rank of a set system file.
    Dim {
        #[arg(long, value_enum)]
        kind: DimKind,
        /// Tuple size for `--kind op`.
        #[arg(long, default_value_t = 1)]
        s: usize,
        file: PathBuf,
    },
    /// The matching shatter function at `n`.
    Shatter {
        #[arg(long, value_enum)]
        kind: DimKind,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        n: usize,
        file: PathBuf,
    },
    /// Evaluates every shatter bound; exits 1 if any row fails.
    Audit {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Append a deliberately false row (exercises the failure path).
        #[arg(long)]
        inject_false_bound: bool,
        file: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceOp {
    Hat,
    Prime,
    Count,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Parity,
    Random,
    Vc,
    ElementTree,
    TypeTree,
}

#[derive(Subcommand, Debug)]
pub enum BanCommand {
    /// Enumerates solutions of a ban problem file.
    Solve {
        /// Print solutions one per line instead of a JSON report.
        #[arg(long)]
        list: bool,
        /// Also check the hereditary bound; exits 1 if a hereditary problem exceeds it.
        #[arg(long)]
        theorem: bool,
        file: PathBuf,
    },
    /// Decides hereditariness and prints a witness if there is one.
    Hereditary { file: PathBuf },
    /// Applies a reduction or checks the counting inequality.
    Reduce {
        #[arg(long, value_enum)]
        op: ReduceOp,
        /// Read the input as a relaxed table (empty ban sets allowed).
        #[arg(long)]
        relaxed: bool,
        file: PathBuf,
    },
    /// Largest solution count of a binary k-fold problem of length n.
    Maxsol {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Builds a ban problem and prints its explicit table.
    Gen {
        #[arg(long, value_enum)]
        generator: GeneratorKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 2)]
        j: usize,
        #[arg(long, default_value_t = 0.25)]
        density: f64,
        /// Fold for the vc, element-tree and type-tree constructions.
        #[arg(long)]
        m: Option<usize>,
        /// Set system file (vc, element-tree).
        #[arg(long)]
        system: Option<PathBuf>,
        /// Element tree file or type tree file.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Graph file (type-tree).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Sequence length for the type tree problem (defaults to height - 1).
        #[arg(long)]
        length: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphCommand {
    /// Builds a type tree by insertion, or validates a given one.
    Typetree {
        /// Insert in a seeded random order instead of vertex order.
        #[arg(long)]
        shuffle: bool,
        /// Validate this type tree instead of building one.
        #[arg(long)]
        validate: Option<PathBuf>,
        file: PathBuf,
    },
    /// Tree rank, exact below the cap and bounded above it.
    Treerank { file: PathBuf },
    /// Clique and independent set from the branches of a type tree.
    Extract {
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        shuffle: bool,
        file: PathBuf,
    },
    /// Checks the height bound for type trees; exits 1 if it fails.
    Heightcheck {
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        shuffle: bool,
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum McCommand {
    /// Weak law of large numbers on test trees (or tuples).
    Weaklaw {
        space: PathBuf,
        /// The set S, as a 0/1 string over the points or a JSON index list.
        #[arg(long)]
        subset: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Sample i.i.d. tuples instead of test trees.
        #[arg(long)]
        tuple: bool,
    },
    /// Uniform deviation over a family against the exponential bound.
    Vcthm {
        space: PathBuf,
        system: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GeomCommand {
    /// Cells cut by s hyperplanes in general position in R^r.
    Regions {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// Counts the cells of a line arrangement exactly.
    Cells {
        /// Arrangement file whose half-spaces give the lines.
        file: Option<PathBuf>,
        /// Use this many seeded random lines in general position instead.
        #[arg(long)]
        random: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli);
    output::finish(outcome, cli.format, cli.quiet)
}

pub struct Context {
    pub seed: u64,
    pub cap: Option<u128>,
    pub format: Format,
}

impl Cli {
    fn context(&self) -> Context {
        Context {
            seed: self.seed,
            cap: self.cap,
            format: self.format,
        }
    }
}

pub type CommandResult = Result<Outcome, shatterlab::Error>;
