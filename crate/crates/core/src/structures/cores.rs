//! Cores and isomorphism. Both rely on exhaustive search and are meant for
//! structures with roughly a dozen vertices or fewer.

use super::search::find_injective_homomorphism;
use super::{find_homomorphism, Homomorphism, Structure, Vertex};
use crate::error::Result;

/// Vertices of `y` spanning a core of `y`, in ascending order.
///
/// Starting from the whole domain, a vertex is dropped whenever the current
/// induced substructure still maps into the substructure without it. When no
/// vertex can be dropped, every endomorphism is surjective, so the remaining
/// substructure is a core.
pub fn core_vertices(y: &Structure) -> Vec<Vertex> {
    let mut keep: Vec<Vertex> = (0..y.size()).collect();
    let mut i = 0;
    while i < keep.len() {
        let current = y.induced(&keep);
        let mut smaller = keep.clone();
        smaller.remove(i);
        let candidate = y.induced(&smaller);
        let shrinks = find_homomorphism(&current, &candidate).expect("same signature").is_some();
        if shrinks {
            keep = smaller;
            i = 0;
        } else {
            i += 1;
        }
    }
    keep
}

/// The core of `y`, as an induced substructure renumbered to `0..m`.
pub fn core_of(y: &Structure) -> Structure {
    y.induced(&core_vertices(y))
}

/// A relation-preserving bijection whose inverse also preserves relations.
pub fn find_isomorphism(a: &Structure, b: &Structure) -> Result<Option<Homomorphism>> {
    a.ensure_same_signature(b)?;
    if a.size() != b.size() || a.relations().iter().zip(b.relations()).any(|(ra, rb)| ra.len() != rb.len()) {
        return Ok(None);
    }
    // An injective homomorphism between equal-size domains that hits as many
    // tuples as the target has is a bijection on tuples as well.
    find_injective_homomorphism(a, b)
}

pub fn are_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}
