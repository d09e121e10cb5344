//! Coordinate patterns of relations and the constructions built on them.
//!
//! The pattern of a relation tuple is the partition of its positions into
//! classes of equal entries. The pattern of a structure collects, per
//! symbol, every partition that refines the pattern of some tuple. Complete
//! structures on a pattern, the generalized chromatic number, central
//! vertices, covering arrays and the clique embeddings into Alice and Bob
//! powers all live here.

mod covering;
mod embed;
mod partition;
mod pattern;

pub use covering::{covering_array, CoveringArray};
pub use embed::{
    central_binomial, clique_into_alice_power, clique_into_alice_power_digraph, complete_into_bob_power,
    digraph_power_exponent, AliceEmbedding, BobEmbedding,
};
pub use partition::{tuple_partition, Partition};
pub use pattern::{central_vertices, chromatic_number, complete_structure, pattern_of, SigmaPattern};
