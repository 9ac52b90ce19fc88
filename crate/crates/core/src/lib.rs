//! Exact, desk-scale computations around Sauer–Shelah type lemmas.
//!
//! The crate is organised by subject:
//!
//! * [`setsystem`]: finite set systems, projections, duals, children and the
//!   fixture generators, plus the half-space arrangements in [`setsystem::geometry`].
//! * [`dims`]: VC dimension, thicket (Littlestone) dimension, op-ranks, their
//!   shatter functions and a bound auditor.
//! * [`banseq`]: banned sequence problems, their solvers, the hereditary
//!   checker, the two reductions used in the inductive count, and the
//!   constructions that turn trees and set systems into ban problems.
//! * [`typetree`]: graphs, type trees, tree rank and clique/independent set
//!   extraction.
//! * [`thicketvc`]: test trees and the Monte Carlo harness for the weak laws
//!   and the VC-theorem for thickets.
//! * [`formats`]: the JSON file formats shared with the command line tool.

pub mod banseq;
pub mod caps;
pub mod combin;
pub mod dims;
mod error;
pub mod formats;
pub mod rational;
pub mod setsystem;
pub mod thicketvc;
pub mod typetree;

pub use caps::Caps;
pub use error::{Error, Result};
pub use setsystem::SetSystem;
