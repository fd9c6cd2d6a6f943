//! Arguments, the relation matrix (universal graph), its projection onto a
//! fact set (contextual graph), and acceptance semantics.

mod contextual;
mod matrix;
pub mod semantics;
mod universe;

pub use contextual::ContextualGraph;
pub use matrix::{Edge, EdgeKind, Entry, RelationMatrix};
pub use semantics::{bipolar_extension, grounded, Extension, Label, Labelling};
pub use universe::{ArgId, Argument, ArgumentUniverse, Variant};
