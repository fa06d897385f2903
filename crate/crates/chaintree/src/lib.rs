//! Exact enumeration toolkit for tree-type diagrams assembled from oriented
//! labeled chains.
//!
//! A diagram glues `k` chain elements (element `i` has `q_i` edges) into a
//! tree. This crate counts such diagrams by four mutually independent
//! methods and converts between diagrams and their tree-code sequences:
//!
//! * [`counting`] — closed formulas and exact recurrences over big integers;
//! * [`series`] — truncated power series over exact rationals: functional
//!   fixed-point equations for the generating functions, identity checks and
//!   coefficient extraction by the two-term inversion formula;
//! * [`prufer`] — the encode/decode bijection between rooted diagrams and
//!   attach-point sequences, for regular and irregular chain profiles;
//! * [`oracle`] — exhaustive enumeration of acyclic parent maps, the
//!   formula-independent ground truth;
//! * [`diagram`] — the shared data model (profiles, attach points, rooted
//!   diagrams, sequences) with canonical text and JSON forms;
//! * [`dot`] — Graphviz export of the star form;
//! * [`crosscheck`] — the cross-validation suite wiring all of the above
//!   against each other.
//!
//! Start with the runnable programs under `examples/`; the `chaintree`
//! binary exposes the same functionality on the command line.

pub mod counting;
pub mod crosscheck;
pub mod diagram;
pub mod dot;
pub mod oracle;
pub mod prufer;
pub mod series;

pub use diagram::{AttachPoint, ChainProfile, PruferSequence, RootedDiagram};
