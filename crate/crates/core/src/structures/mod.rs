//! Finite relational structures and homomorphisms between them.
//!
//! Vertices are dense integers `0..n`. Every relation is kept as a sorted,
//! duplicate-free list of tuples, so two structures with the same relations
//! compare equal and hash identically regardless of how they were built.

mod catalog;
mod cores;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalog::{make_named, CatalogName};
pub use cores::{are_isomorphic, core_of, core_vertices, find_isomorphism};
pub use search::{find_homomorphism, find_injective_homomorphism};

pub type Vertex = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of relation symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut out: Vec<Symbol> = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if arity == 0 {
                return Err(Error::InvalidStructure(format!("symbol `{name}` has arity 0")));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(Error::InvalidStructure(format!("symbol `{name}` declared twice")));
            }
            out.push(Symbol { name, arity });
        }
        Ok(Signature { symbols: out })
    }

    /// Signature with one symbol. Panics on arity 0.
    pub fn single(name: &str, arity: usize) -> Self {
        Signature::new([(name, arity)]).expect("arity must be positive")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.symbols[symbol].arity
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.symbols[symbol].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

/// A relation: sorted, duplicate-free tuples of a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    tuples: Vec<Vec<Vertex>>,
}

impl Relation {
    /// Sorts and deduplicates; does not check vertex bounds.
    pub fn new(arity: usize, mut tuples: Vec<Vec<Vertex>>) -> Result<Self> {
        if let Some(t) = tuples.iter().find(|t| t.len() != arity) {
            return Err(Error::InvalidStructure(format!("tuple {t:?} has length {} but arity is {arity}", t.len())));
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(Relation { arity, tuples })
    }

    pub fn empty(arity: usize) -> Self {
        Relation { arity, tuples: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<Vertex>] {
        &self.tuples
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Vertex]> {
        self.tuples.iter().map(Vec::as_slice)
    }

    pub fn contains(&self, tuple: &[Vertex]) -> bool {
        self.tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).is_ok()
    }

    /// Index of `tuple` in the sorted order, if present.
    pub fn position(&self, tuple: &[Vertex]) -> Option<usize> {
        self.tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).ok()
    }
}

/// A finite relational structure over a [`Signature`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StructureFile", into = "StructureFile")]
pub struct Structure {
    signature: Signature,
    size: usize,
    relations: Vec<Relation>,
}

impl Structure {
    /// `relations[i]` holds the tuples for the `i`-th symbol of `signature`.
    pub fn new(signature: Signature, size: usize, relations: Vec<Vec<Vec<Vertex>>>) -> Result<Self> {
        if relations.len() != signature.len() {
            return Err(Error::InvalidStructure(format!(
                "{} relations given for {} symbols",
                relations.len(),
                signature.len()
            )));
        }
        let mut rels = Vec::with_capacity(relations.len());
        for (sym, tuples) in signature.symbols().iter().zip(relations) {
            if let Some(t) = tuples.iter().find(|t| t.iter().any(|&v| v >= size)) {
                return Err(Error::InvalidStructure(format!(
                    "tuple {t:?} of `{}` leaves the domain 0..{size}",
                    sym.name
                )));
            }
            rels.push(Relation::new(sym.arity, tuples).map_err(|e| match e {
                Error::InvalidStructure(msg) => Error::InvalidStructure(format!("relation `{}`: {msg}", sym.name)),
                other => other,
            })?);
        }
        Ok(Structure { signature, size, relations: rels })
    }

    pub(crate) fn from_parts(signature: Signature, size: usize, relations: Vec<Relation>) -> Self {
        debug_assert_eq!(signature.len(), relations.len());
        Structure { signature, size, relations }
    }

    /// Structure over a single symbol.
    pub fn single(name: &str, arity: usize, size: usize, tuples: Vec<Vec<Vertex>>) -> Result<Self> {
        Structure::new(Signature::new([(name, arity)])?, size, vec![tuples])
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation(&self, symbol: usize) -> &Relation {
        &self.relations[symbol]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&Relation> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(Relation::len).sum()
    }

    pub fn ensure_same_signature(&self, other: &Structure) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(format!("{} vs {}", self.signature, other.signature)));
        }
        Ok(())
    }

    /// Substructure induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[Vertex]) -> Structure {
        let mut index = vec![usize::MAX; self.size];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                let tuples = rel
                    .iter()
                    .filter(|t| t.iter().all(|&v| index[v] != usize::MAX))
                    .map(|t| t.iter().map(|&v| index[v]).collect())
                    .collect();
                Relation::new(rel.arity(), tuples).expect("arity preserved")
            })
            .collect();
        Structure::from_parts(self.signature.clone(), vertices.len(), relations)
    }

    /// Number of relation tuples each vertex occurs in (with multiplicity per tuple).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.size];
        for rel in &self.relations {
            for t in rel.iter() {
                for &v in t {
                    deg[v] += 1;
                }
            }
        }
        deg
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structures always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureFile {
    signature: Vec<Symbol>,
    domain: usize,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<Vertex>>>,
}

impl TryFrom<StructureFile> for Structure {
    type Error = Error;

    fn try_from(file: StructureFile) -> Result<Self> {
        let signature = Signature::new(file.signature.iter().map(|s| (s.name.clone(), s.arity)))?;
        let mut relations = file.relations;
        if let Some(name) = relations.keys().find(|k| signature.index_of(k).is_none()) {
            return Err(Error::InvalidStructure(format!("relation `{name}` is not in the signature")));
        }
        let tuples = signature.symbols().iter().map(|s| relations.remove(&s.name).unwrap_or_default()).collect();
        Structure::new(signature, file.domain, tuples)
    }
}

impl From<Structure> for StructureFile {
    fn from(s: Structure) -> Self {
        let relations =
            s.signature.symbols().iter().zip(s.relations).map(|(sym, rel)| (sym.name.clone(), rel.tuples)).collect();
        StructureFile { signature: s.signature.symbols, domain: s.size, relations }
    }
}

/// A vertex map between two structures, stored as a total table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Homomorphism {
    map: Vec<Vertex>,
}

impl Homomorphism {
    /// Wraps a map without checking it.
    pub fn new(map: Vec<Vertex>) -> Self {
        Homomorphism { map }
    }

    /// Wraps `map` after confirming it is a homomorphism `source -> target`.
    pub fn checked(map: Vec<Vertex>, source: &Structure, target: &Structure) -> Result<Self> {
        if is_homomorphism(&map, source, target)? {
            Ok(Homomorphism { map })
        } else {
            Err(Error::NotAHomomorphism("some relation tuple is not preserved".into()))
        }
    }

    pub fn image(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    pub fn apply(&self, tuple: &[Vertex]) -> Vec<Vertex> {
        tuple.iter().map(|&v| self.map[v]).collect()
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Homomorphism) -> Homomorphism {
        Homomorphism { map: self.map.iter().map(|&v| then.map[v]).collect() }
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.map
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

pub(crate) fn check_map(map: &[Vertex], source_size: usize, target_size: usize) -> Result<()> {
    if map.len() != source_size {
        return Err(Error::InvalidMap(format!("map has {} entries for a domain of size {source_size}", map.len())));
    }
    if let Some((v, &img)) = map.iter().enumerate().find(|(_, &img)| img >= target_size) {
        return Err(Error::InvalidMap(format!("vertex {v} maps to {img}, outside 0..{target_size}")));
    }
    Ok(())
}

/// Whether `map` sends every relation tuple of `source` into the matching
/// relation of `target`.
pub fn is_homomorphism(map: &[Vertex], source: &Structure, target: &Structure) -> Result<bool> {
    source.ensure_same_signature(target)?;
    check_map(map, source.size(), target.size())?;
    let mut image = Vec::new();
    for (rs, rt) in source.relations.iter().zip(&target.relations) {
        for t in rs.iter() {
            image.clear();
            image.extend(t.iter().map(|&v| map[v]));
            if !rt.contains(&image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Structure {
        make_named(CatalogName::Clique, &[2]).unwrap()
    }

    #[test]
    fn identity_on_triangle_is_homomorphism() {
        let k3 = make_named(CatalogName::Clique, &[3]).unwrap();
        assert!(is_homomorphism(&[0, 1, 2], &k3, &k3).unwrap());
    }

    #[test]
    fn reversed_edge_has_no_image_in_directed_edge() {
        let d2 = make_named(CatalogName::DirectedEdge, &[]).unwrap();
        assert!(!is_homomorphism(&[0, 1], &k2(), &d2).unwrap());
        assert!(!is_homomorphism(&[1, 0], &k2(), &d2).unwrap());
    }

    #[test]
    fn map_errors() {
        let k3 = make_named(CatalogName::Clique, &[3]).unwrap();
        assert!(matches!(is_homomorphism(&[0, 1], &k3, &k3), Err(Error::InvalidMap(_))));
        assert!(matches!(is_homomorphism(&[0, 1, 3], &k3, &k3), Err(Error::InvalidMap(_))));
        let nae = make_named(CatalogName::Nae, &[2]).unwrap();
        assert!(matches!(is_homomorphism(&[0, 1], &k2(), &nae), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn json_schema_example() {
        let s = Structure::from_json(
            r#"{"signature":[{"name":"R","arity":2}],"domain":3,"relations":{"R":[[1,2],[0,1],[0,1]]}}"#,
        )
        .unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(s.relation(0).tuples(), &[vec![0, 1], vec![1, 2]]);
        let again = Structure::from_json(&s.to_json()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn json_rejects_bad_input() {
        let out_of_domain = r#"{"signature":[{"name":"E","arity":2}],"domain":2,"relations":{"E":[[0,2]]}}"#;
        let err = Structure::from_json(out_of_domain).unwrap_err().to_string();
        assert!(err.contains("domain"), "{err}");
        let bad_arity = r#"{"signature":[{"name":"E","arity":2}],"domain":2,"relations":{"E":[[0]]}}"#;
        assert!(Structure::from_json(bad_arity).is_err());
        let unknown = r#"{"signature":[{"name":"E","arity":2}],"domain":2,"relations":{"F":[[0,1]]}}"#;
        assert!(Structure::from_json(unknown).is_err());
    }

    #[test]
    fn induced_renumbers() {
        let k3 = make_named(CatalogName::Clique, &[3]).unwrap();
        let sub = k3.induced(&[2, 0]);
        assert_eq!(sub, k2());
    }
}
