//! Alice and Bob powers of a structure.
//!
//! The `k`-fold Alice power of `Y` lives on `Y^k`: a tuple of `k`-tuples is
//! related when at least one coordinate, read across the tuple, is a tuple of
//! `Y`. Homomorphisms into it are exactly the perfect strategies in which
//! Alice sends Bob one of `k` messages.
//!
//! The `k`-fold Bob power lives on `[k] x Y`: a tuple of pairs `(slot, y)` is
//! related when, for every slot `s`, some tuple of `Y` agrees with the `y`
//! entries on the positions carrying slot `s`. Homomorphisms into it are the
//! perfect strategies in which Bob sends Alice one of `k` messages.
//!
//! Alice-power vertices are encoded as the lexicographic index of the
//! `k`-tuple (first coordinate most significant); Bob-power vertex `(s, y)` is
//! encoded as `s * |Y| + y`.

use crate::error::{Error, Result};
use crate::structures::{core_of, Relation, Structure, Vertex};

/// Size limits for materialized powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerLimits {
    /// Largest allowed domain of the power.
    pub max_vertices: u128,
    /// Largest number of candidate tuples scanned for a single relation.
    pub max_candidates: u128,
}

impl Default for PowerLimits {
    fn default() -> Self {
        PowerLimits { max_vertices: 100_000, max_candidates: 20_000_000 }
    }
}

fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

fn ensure_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("power exponent k must be >= 1".into()));
    }
    Ok(())
}

pub fn alice_encode(tuple: &[Vertex], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &v| acc * base + v)
}

pub fn alice_decode(mut index: usize, base: usize, k: usize) -> Vec<Vertex> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    t
}

pub fn bob_encode(slot: usize, v: Vertex, base: usize) -> usize {
    slot * base + v
}

pub fn bob_decode(index: usize, base: usize) -> (usize, Vertex) {
    (index / base, index % base)
}

/// Visits every tuple in `0..n` of length `arity` in lexicographic order.
fn for_each_tuple(n: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut t = vec![0; arity];
    loop {
        f(&t);
        let mut p = arity;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            t[p] += 1;
            if t[p] < n {
                break;
            }
            t[p] = 0;
        }
    }
}

/// Membership in a relation of the Alice power, given each entry as a
/// `k`-tuple of `Y`.
pub fn alice_contains<T: AsRef<[Vertex]>>(rel: &Relation, entries: &[T]) -> bool {
    let Some(k) = entries.first().map(|e| e.as_ref().len()) else {
        return false;
    };
    let mut column = vec![0; entries.len()];
    (0..k).any(|j| {
        for (c, e) in column.iter_mut().zip(entries) {
            *c = e.as_ref()[j];
        }
        rel.contains(&column)
    })
}

/// Membership in a relation of the Bob power, given each entry as
/// `(slot, vertex)`.
pub fn bob_contains(rel: &Relation, entries: &[(usize, Vertex)]) -> bool {
    if rel.is_empty() {
        return false;
    }
    let mut slots: Vec<usize> = entries.iter().map(|e| e.0).collect();
    slots.sort_unstable();
    slots.dedup();
    slots.into_iter().all(|s| rel.iter().any(|t| entries.iter().zip(t).all(|(&(slot, y), &ty)| slot != s || y == ty)))
}

/// The `k`-fold Alice power with default limits.
pub fn alice_power(y: &Structure, k: usize) -> Result<Structure> {
    alice_power_with(y, k, PowerLimits::default())
}

pub fn alice_power_with(y: &Structure, k: usize, limits: PowerLimits) -> Result<Structure> {
    ensure_k(k)?;
    let n = y.size();
    let vertices = checked_pow(n, k);
    if vertices > limits.max_vertices {
        return Err(Error::CapExceeded { what: "Alice power domain", size: vertices, cap: limits.max_vertices });
    }
    let size = vertices as usize;
    let decoded: Vec<Vec<Vertex>> = (0..size).map(|i| alice_decode(i, n, k)).collect();
    let mut relations = Vec::with_capacity(y.signature().len());
    for rel in y.relations() {
        let candidates = checked_pow(size, rel.arity());
        if candidates > limits.max_candidates {
            return Err(Error::CapExceeded {
                what: "Alice power relation candidates",
                size: candidates,
                cap: limits.max_candidates,
            });
        }
        let mut tuples = Vec::new();
        let mut entries: Vec<&[Vertex]> = Vec::with_capacity(rel.arity());
        if !rel.is_empty() {
            for_each_tuple(size, rel.arity(), |t| {
                entries.clear();
                entries.extend(t.iter().map(|&v| decoded[v].as_slice()));
                if alice_contains(rel, &entries) {
                    tuples.push(t.to_vec());
                }
            });
        }
        relations.push(tuples);
    }
    Structure::new(y.signature().clone(), size, relations)
}

/// The `k`-fold Bob power with default limits.
pub fn bob_power(y: &Structure, k: usize) -> Result<Structure> {
    bob_power_with(y, k, PowerLimits::default())
}

pub fn bob_power_with(y: &Structure, k: usize, limits: PowerLimits) -> Result<Structure> {
    ensure_k(k)?;
    let n = y.size();
    let size = k * n;
    if size as u128 > limits.max_vertices {
        return Err(Error::CapExceeded { what: "Bob power domain", size: size as u128, cap: limits.max_vertices });
    }
    let mut relations = Vec::with_capacity(y.signature().len());
    for rel in y.relations() {
        let candidates = checked_pow(size, rel.arity());
        if candidates > limits.max_candidates {
            return Err(Error::CapExceeded {
                what: "Bob power relation candidates",
                size: candidates,
                cap: limits.max_candidates,
            });
        }
        let mut tuples = Vec::new();
        let mut entries = Vec::with_capacity(rel.arity());
        if !rel.is_empty() {
            for_each_tuple(size, rel.arity(), |t| {
                entries.clear();
                entries.extend(t.iter().map(|&v| bob_decode(v, n)));
                if bob_contains(rel, &entries) {
                    tuples.push(t.to_vec());
                }
            });
        }
        relations.push(tuples);
    }
    Structure::new(y.signature().clone(), size, relations)
}

/// Checks a map `X -> Y^k` against the Alice power without materializing it.
pub fn is_homomorphism_into_alice_power(x: &Structure, y: &Structure, k: usize, rows: &[Vec<Vertex>]) -> Result<bool> {
    ensure_k(k)?;
    x.ensure_same_signature(y)?;
    if rows.len() != x.size() {
        return Err(Error::InvalidMap(format!("map has {} entries for a domain of size {}", rows.len(), x.size())));
    }
    if let Some((v, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != k || r.iter().any(|&c| c >= y.size())) {
        return Err(Error::InvalidMap(format!("vertex {v} maps to {row:?}, not a {k}-tuple over 0..{}", y.size())));
    }
    Ok(x.relations().iter().zip(y.relations()).all(|(rx, ry)| {
        rx.iter().all(|t| {
            let entries: Vec<&[Vertex]> = t.iter().map(|&v| rows[v].as_slice()).collect();
            alice_contains(ry, &entries)
        })
    }))
}

/// Checks a map `X -> [k] x Y` against the Bob power without materializing it.
pub fn is_homomorphism_into_bob_power(x: &Structure, y: &Structure, k: usize, map: &[(usize, Vertex)]) -> Result<bool> {
    ensure_k(k)?;
    x.ensure_same_signature(y)?;
    if map.len() != x.size() {
        return Err(Error::InvalidMap(format!("map has {} entries for a domain of size {}", map.len(), x.size())));
    }
    if let Some((v, img)) = map.iter().enumerate().find(|(_, &(s, c))| s >= k || c >= y.size()) {
        return Err(Error::InvalidMap(format!("vertex {v} maps to {img:?}, outside [{k}] x 0..{}", y.size())));
    }
    Ok(x.relations().iter().zip(y.relations()).all(|(rx, ry)| {
        rx.iter().all(|t| {
            let entries: Vec<(usize, Vertex)> = t.iter().map(|&v| map[v]).collect();
            bob_contains(ry, &entries)
        })
    }))
}

/// Decodes an Alice-power homomorphism into rows of `k`-tuples.
pub fn alice_rows(map: &[Vertex], y_size: usize, k: usize) -> Vec<Vec<Vertex>> {
    map.iter().map(|&v| alice_decode(v, y_size, k)).collect()
}

/// Encodes rows of `k`-tuples as Alice-power vertex ids.
pub fn alice_map(rows: &[Vec<Vertex>], y_size: usize, k: usize) -> Result<Vec<Vertex>> {
    if checked_pow(y_size, k) > usize::MAX as u128 {
        return Err(Error::CapExceeded {
            what: "Alice power vertex encoding",
            size: checked_pow(y_size, k),
            cap: usize::MAX as u128,
        });
    }
    if let Some((v, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != k || r.iter().any(|&c| c >= y_size)) {
        return Err(Error::InvalidMap(format!("vertex {v} maps to {row:?}, not a {k}-tuple over 0..{y_size}")));
    }
    Ok(rows.iter().map(|r| alice_encode(r, y_size)).collect())
}

/// Whether the relation equals the product of its coordinate projections.
pub fn is_cartesian_product(rel: &Relation, domain: usize) -> bool {
    let mut product: u128 = 1;
    for p in 0..rel.arity() {
        let mut seen = vec![false; domain];
        for t in rel.iter() {
            seen[t[p]] = true;
        }
        product = product.saturating_mul(seen.iter().filter(|&&s| s).count() as u128);
    }
    product == rel.len() as u128
}

/// Whether a single bit from Alice to Bob wins games that no-communication
/// strategies lose: exactly when the core has more than one vertex.
pub fn alice_one_bit_helps(y: &Structure) -> bool {
    core_of(y).size() > 1
}

/// Whether a single bit from Bob to Alice helps: exactly when some relation
/// of the core is not a Cartesian product of its projections.
pub fn bob_one_bit_helps(y: &Structure) -> bool {
    let core = core_of(y);
    core.relations().iter().any(|rel| !is_cartesian_product(rel, core.size()))
}
