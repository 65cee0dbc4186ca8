//! Free braided monoidal string diagrams in slice form, knot invariants, and
//! the reduction of unknottedness to the word problem for the free braided
//! monoidal category generated by oriented caps and cups.

pub mod braid;
pub mod config;
pub mod construct;
pub mod diagram;
pub mod invariants;
pub mod oracle;
pub mod orient;
pub mod render;
pub mod rewrite;
#[doc(hidden)]
pub mod testing;

pub use braid::{braid_equal, BraidWord};
pub use construct::{build_instance, WordProblemInstance};
pub use diagram::{parse_diagram, serialize_diagram, Diagram, DiagramError, GeneratorKind, Orientation, Slice};
pub use invariants::{CapCupCycle, CapCupSymbol, InvariantReport, TwistedCapCup, TwistedCapCupCycle};
pub use oracle::{normalized_invariant, LaurentPoly};
pub use rewrite::{equiv_search, Budget, Move, SearchResult, Verdict};
