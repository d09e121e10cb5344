//! Two-prover games over constraint satisfaction templates.
//!
//! A game is played on an instance `X` against a template `Y`: the referee
//! sends Alice a relation tuple of `X` and Bob a single vertex, and the pair
//! wins when Alice's answer satisfies the relation and agrees with Bob on
//! every shared vertex. This crate builds the finite structures whose
//! homomorphism problems capture winning strategies when one prover may send
//! the other a short classical message, and the tools used to round
//! finite-dimensional quantum strategies to classical ones.
//!
//! - [`structures`]: relational structures, homomorphism search, cores.
//! - [`powers`]: Alice and Bob powers, and when one extra bit helps.
//! - [`patterns`]: coordinate patterns, complete structures, covering arrays
//!   and clique embeddings into powers.
//! - [`games`]: the referee, strategy tables, and strategy/homomorphism
//!   translations with a brute-force oracle.
//! - [`quantum`]: projection-valued measurements and quantum strategies.
//! - [`geometry`]: frames and orthogonality-avoiding sphere colorings.

pub mod error;
pub mod games;
pub mod geometry;
pub mod linalg;
pub mod patterns;
pub mod powers;
pub mod quantum;
pub mod structures;

pub use error::{Error, Result};
