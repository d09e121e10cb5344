use std::collections::BTreeMap;

use super::partition::{tuple_partition, Partition};
use crate::error::{Error, Result};
use crate::structures::{find_homomorphism, Signature, Structure, Vertex};

/// One set of partitions per relation symbol, each kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPattern {
    signature: Signature,
    parts: Vec<Vec<Partition>>,
}

impl SigmaPattern {
    pub fn new(signature: Signature, parts: Vec<Vec<Partition>>) -> Result<Self> {
        if parts.len() != signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} partition sets for {} symbols",
                parts.len(),
                signature.len()
            )));
        }
        let mut parts = parts;
        for (symbol, set) in parts.iter_mut().enumerate() {
            let arity = signature.arity(symbol);
            if let Some(p) = set.iter().find(|p| p.len() != arity) {
                return Err(Error::InvalidParameter(format!(
                    "partition {p} given for symbol `{}` of arity {arity}",
                    signature.name(symbol)
                )));
            }
            set.sort();
            set.dedup();
        }
        Ok(SigmaPattern { signature, parts })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// The partitions for one symbol, sorted.
    pub fn partitions(&self, symbol: usize) -> &[Partition] {
        &self.parts[symbol]
    }

    pub fn contains(&self, symbol: usize, p: &Partition) -> bool {
        self.parts[symbol].binary_search(p).is_ok()
    }

    /// Whether every partition set is closed under refinement.
    pub fn is_downward_closed(&self) -> bool {
        self.parts.iter().enumerate().all(|(symbol, set)| {
            let r = self.signature.arity(symbol);
            Partition::all(r).iter().all(|q| !set.iter().any(|p| q.refines_unchecked(p)) || self.contains(symbol, q))
        })
    }

    /// Symbol name to partitions in 1-based block notation.
    pub fn to_named_map(&self) -> BTreeMap<String, Vec<String>> {
        self.parts
            .iter()
            .enumerate()
            .map(|(s, set)| (self.signature.name(s).to_string(), set.iter().map(|p| p.to_string()).collect()))
            .collect()
    }
}

/// For each symbol, all partitions refining the partition of some tuple.
pub fn pattern_of(y: &Structure) -> SigmaPattern {
    let parts = y
        .relations()
        .iter()
        .map(|rel| {
            let mut maximal: Vec<Partition> =
                rel.iter().map(|t| tuple_partition(t).expect("arity is positive")).collect();
            maximal.sort();
            maximal.dedup();
            Partition::all(rel.arity()).into_iter().filter(|q| maximal.iter().any(|p| q.refines_unchecked(p))).collect()
        })
        .collect();
    SigmaPattern::new(y.signature().clone(), parts).expect("arities match by construction")
}

/// The structure on `0..n` whose `R`-tuples are those whose partition
/// refines some member of `P_R`.
pub fn complete_structure(n: usize, pattern: &SigmaPattern) -> Result<Structure> {
    if n == 0 {
        return Err(Error::InvalidParameter("complete structure needs n >= 1".into()));
    }
    let mut relations = Vec::with_capacity(pattern.signature.len());
    for (symbol, set) in pattern.parts.iter().enumerate() {
        let r = pattern.signature.arity(symbol);
        let total = (n as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
        const CAP: u128 = 20_000_000;
        if total > CAP {
            return Err(Error::CapExceeded { what: "complete structure tuples", size: total, cap: CAP });
        }
        let mut tuples = Vec::new();
        if !set.is_empty() {
            for code in 0..total as usize {
                let mut t: Vec<Vertex> = vec![0; r];
                let mut c = code;
                for slot in t.iter_mut().rev() {
                    *slot = c % n;
                    c /= n;
                }
                let p = tuple_partition(&t)?;
                if set.iter().any(|q| p.refines_unchecked(q)) {
                    tuples.push(t);
                }
            }
        }
        relations.push(tuples);
    }
    Structure::new(pattern.signature.clone(), n, relations)
}

/// Least `n` such that `y` maps into the complete structure of size `n` on
/// its own pattern. At most `|Y|`; an empty domain gives 1.
pub fn chromatic_number(y: &Structure) -> Result<usize> {
    let pattern = pattern_of(y);
    for n in 1..=y.size().max(1) {
        let target = complete_structure(n, &pattern)?;
        if find_homomorphism(y, &target)?.is_some() {
            return Ok(n);
        }
    }
    Err(Error::ConstructionFailed("no complete structure up to |Y| accepted Y; the identity map should".into()))
}

/// Vertices `v` such that for every symbol, every block of every pattern
/// partition can be filled with `v` by some tuple of the relation.
pub fn central_vertices(y: &Structure) -> Vec<Vertex> {
    let pattern = pattern_of(y);
    let mut blocks_per_symbol: Vec<Vec<Vec<usize>>> = Vec::new();
    for symbol in 0..y.signature().len() {
        let mut blocks: Vec<Vec<usize>> = pattern.partitions(symbol).iter().flat_map(|p| p.blocks()).collect();
        blocks.sort();
        blocks.dedup();
        blocks_per_symbol.push(blocks);
    }
    (0..y.size())
        .filter(|&v| {
            blocks_per_symbol.iter().enumerate().all(|(symbol, blocks)| {
                blocks.iter().all(|block| y.relation(symbol).iter().any(|t| block.iter().all(|&p| t[p] == v)))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{are_isomorphic, is_homomorphism, make_named, CatalogName};

    fn named(name: CatalogName, params: &[usize]) -> Structure {
        make_named(name, params).unwrap()
    }

    /// The 4-ary example with a central vertex that never appears in a tuple
    /// of the coarsest pattern. Vertices are shifted to start at 0.
    pub(crate) fn appendix_example() -> Structure {
        Structure::single("R", 4, 7, vec![vec![0, 0, 1, 2], vec![3, 4, 0, 0], vec![5, 5, 6, 6]]).unwrap()
    }

    #[test]
    fn patterns_of_small_structures() {
        let k2 = pattern_of(&named(CatalogName::Clique, &[2]));
        assert_eq!(k2.partitions(0), &[Partition::discrete(2)]);
        let lp = pattern_of(&named(CatalogName::Loop, &[]));
        assert_eq!(lp.partitions(0).len(), 2);
        let ex = pattern_of(&appendix_example());
        let coarse = tuple_partition(&[0, 0, 1, 1]).unwrap();
        assert!(ex.contains(0, &coarse));
        for q in Partition::all(4) {
            if q.refines_unchecked(&coarse) {
                assert!(ex.contains(0, &q));
            }
        }
        assert!(ex.is_downward_closed());
    }

    #[test]
    fn complete_structures() {
        let k2 = named(CatalogName::Clique, &[2]);
        let p = pattern_of(&k2);
        for n in 1..5 {
            assert_eq!(complete_structure(n, &p).unwrap(), named(CatalogName::Clique, &[n]));
        }
        let lp = pattern_of(&named(CatalogName::Loop, &[]));
        assert!(complete_structure(1, &lp).unwrap().relation(0).contains(&[0, 0]));
        assert!(complete_structure(1, &p).unwrap().relation(0).is_empty());
        let nae2 = pattern_of(&named(CatalogName::Nae, &[2]));
        assert_eq!(complete_structure(3, &nae2).unwrap(), named(CatalogName::Nae, &[3]));
    }

    #[test]
    fn identity_into_complete_structure() {
        for y in [appendix_example(), named(CatalogName::Nae, &[2]), named(CatalogName::DirectedCycle, &[4])] {
            let c = complete_structure(y.size(), &pattern_of(&y)).unwrap();
            let id: Vec<usize> = (0..y.size()).collect();
            assert!(is_homomorphism(&id, &y, &c).unwrap());
        }
    }

    #[test]
    fn chromatic_numbers() {
        for n in 2..5 {
            assert_eq!(chromatic_number(&named(CatalogName::Clique, &[n])).unwrap(), n);
        }
        assert_eq!(chromatic_number(&named(CatalogName::DirectedCycle, &[5])).unwrap(), 3);
        assert_eq!(chromatic_number(&named(CatalogName::DirectedEdge, &[])).unwrap(), 2);
        assert_eq!(chromatic_number(&named(CatalogName::Loop, &[])).unwrap(), 1);
    }

    #[test]
    fn central_vertex_examples() {
        assert_eq!(central_vertices(&appendix_example()), vec![0]);
        assert_eq!(central_vertices(&named(CatalogName::Clique, &[3])), vec![0, 1, 2]);
        let y = Structure::single("E", 2, 2, vec![vec![0, 0]]).unwrap();
        assert_eq!(central_vertices(&y), vec![0]);
        assert!(central_vertices(&named(CatalogName::DirectedEdge, &[])).is_empty());
    }

    #[test]
    fn complete_structure_on_clique_pattern_is_clique() {
        let p = pattern_of(&named(CatalogName::Rainbow, &[3]));
        let c = complete_structure(4, &p).unwrap();
        assert!(are_isomorphic(&c, &named(CatalogName::Rainbow, &[4])).unwrap());
    }
}
