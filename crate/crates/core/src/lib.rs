//! Ordered binary decision diagrams with bounded conjunctive decomposition.
//!
//! A diagram at bound `i` is an ordered decision diagram whose conjunction
//! vertices split a function into variable-disjoint factors, where at most
//! one factor may mention more than `i` variables. Bound 0 gives plain
//! reduced ordered BDDs; the unbounded form decomposes as far as possible.
//! Each Boolean function has exactly one canonical diagram per bound, so
//! equivalence within a [`DiagramStore`] is id equality.

pub mod compile;
pub mod convert;
pub mod decompose;
pub mod formula;
pub mod ops;
pub mod store;

pub use compile::Schedule;
pub use decompose::DecomposeError;
pub use formula::{Assignment, Clause, Cnf, FormulaError, Literal, Var, VariableOrder};
pub use ops::{ModelCount, ModelStream, ScopeError};
pub use store::{
    Bound, DiagramStore, FinestStatus, KdagError, StoreError, ValidationOptions, ValidationReport, Vertex, VertexId,
    Violation,
};
