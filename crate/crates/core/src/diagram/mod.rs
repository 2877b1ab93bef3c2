//! Jacobi diagrams, their signed canonical form and formal sums.

mod canon;
mod corpus;
mod graph;
mod sum;

pub use canon::{canonicalize, count_i_configurations, Canonical};
pub(crate) use canon::i_configuration_pairs;
pub use corpus::{corpus, standard_corpus};
#[allow(unused_imports)]
pub(crate) use graph::Compact;
pub use graph::{HalfEdge, JacobiGraph};
pub use sum::{disjoint_union, rat, DiagramSum};
