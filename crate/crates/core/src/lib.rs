//! Argumentative rule induction.
//!
//! A classifier is an argumentation graph over attribute-value arguments plus
//! two distinguished nodes: the *target*, whose acceptance encodes a positive
//! prediction, and *top*, a meta-argument that may only attack the target.
//! The graph (the universal graph) is learned from tabular data by best-first
//! search over relation matrices. To classify a row, the graph is projected
//! onto the row's facts (the contextual graph) and the target is predicted
//! true iff it belongs to the grounded extension. Explanations are read off
//! the contextual graph as sets of defenders (accepted target) or undefended
//! attackers (rejected target).
//!
//! ```no_run
//! use argrule::{dataset, induction, Variant};
//!
//! let table = dataset::load_table("data/voting.csv", "class", "democrat", &Default::default())?;
//! let (train_rows, test_rows) = dataset::split_indices(table.len(), 0.7, 7)?;
//! let train = table.subset(&train_rows);
//! let schema = dataset::Schema::fit(&train, 6)?;
//! let train = train.atomize(&schema)?;
//! let config = induction::SearchConfig { variant: Variant::BASE, ..Default::default() };
//! let outcome = induction::search(&train, &config)?;
//! let test = table.subset(&test_rows).atomize(&schema)?;
//! println!("test accuracy {:.1}%", outcome.matrix.accuracy(&test) * 100.0);
//! # Ok::<(), argrule::Error>(())
//! ```

pub mod dataset;
pub mod dot;
mod error;
pub mod eval;
pub mod explain;
pub mod framework;
pub mod induction;
pub mod model;

pub use error::{Error, Result};
pub use framework::{
    Argument, ArgumentUniverse, ArgId, ContextualGraph, EdgeKind, Entry, Extension, Label,
    Labelling, RelationMatrix, Variant,
};
