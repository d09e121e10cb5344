use rand::Rng;
use serde::{Deserialize, Serialize};

use super::covering::covering_array;
use super::partition::tuple_partition;
use super::pattern::{central_vertices, complete_structure, pattern_of};
use crate::error::{Error, Result};
use crate::powers::{alice_map, is_homomorphism_into_alice_power, is_homomorphism_into_bob_power};
use crate::structures::{Homomorphism, Signature, Structure, Vertex};

/// A map into the `k`-fold Alice power, one `k`-tuple of target vertices per
/// source vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliceEmbedding {
    pub k: usize,
    pub rows: Vec<Vec<Vertex>>,
}

impl AliceEmbedding {
    /// The same map with Alice-power vertices encoded as integers. Fails
    /// when `|Y|^k` does not fit in a vertex id.
    pub fn to_homomorphism(&self, y_size: usize) -> Result<Homomorphism> {
        Ok(Homomorphism::new(alice_map(&self.rows, y_size, self.k)?))
    }
}

/// A map into the `k`-fold Bob power, one `(slot, vertex)` per source vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BobEmbedding {
    pub k: usize,
    pub map: Vec<(usize, Vertex)>,
}

/// Embeds the complete structure of size `n` on the pattern of `y` into an
/// Alice power of `y`.
///
/// For every symbol `R` and every partition `π` in its pattern, the
/// lexicographically least tuple `ȳ` of `R` with `π ⪯ π_ȳ` is chosen, and a
/// covering array with `n` rows over the distinct entries of `ȳ` is built.
/// Concatenating all arrays gives the rows. The result is checked against
/// the Alice power without building it, so `k` may be large.
pub fn clique_into_alice_power<G: Rng + ?Sized>(y: &Structure, n: usize, rng: &mut G) -> Result<AliceEmbedding> {
    let pattern = pattern_of(y);
    let source = complete_structure(n, &pattern)?;
    let mut rows: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for (symbol, rel) in y.relations().iter().enumerate() {
        let r = rel.arity();
        for pi in pattern.partitions(symbol) {
            let witness = rel
                .iter()
                .find(|t| pi.refines_unchecked(&tuple_partition(t).expect("arity is positive")))
                .expect("pattern partitions refine some tuple");
            let mut alphabet: Vec<Vertex> = witness.to_vec();
            alphabet.sort_unstable();
            alphabet.dedup();
            let ca = covering_array(n, r.min(n), alphabet.len(), rng)?;
            for (row, ca_row) in rows.iter_mut().zip(ca.rows()) {
                row.extend(ca_row.iter().map(|&c| alphabet[c]));
            }
        }
    }
    if rows.first().is_some_and(Vec::is_empty) {
        // Empty pattern: the complete structure has no tuples, any map works.
        if y.size() == 0 {
            return Err(Error::Precondition("Y has an empty domain".into()));
        }
        rows.iter_mut().for_each(|r| r.push(0));
    }
    let k = rows.first().map_or(1, Vec::len);
    if !is_homomorphism_into_alice_power(&source, y, k, &rows)? {
        return Err(Error::ConstructionFailed(
            "covering-array rows do not map the complete structure into the Alice power".into(),
        ));
    }
    Ok(AliceEmbedding { k, rows })
}

/// `ceil(log2 m + log2 log2 m + 2)`, at least 1.
pub fn digraph_power_exponent(m: usize) -> usize {
    if m <= 1 {
        return 1;
    }
    let l = (m as f64).log2();
    let inner = if l > 0.0 { l.log2() } else { 0.0 };
    (l + inner + 2.0).ceil() as usize
}

pub fn central_binomial(k: usize) -> u128 {
    let h = (k / 2) as u128;
    let mut c: u128 = 1;
    for i in 0..h {
        c = c * (k as u128 - i) / (i + 1);
    }
    c
}

/// Maps `K_m` into an Alice power of a digraph: the `m` clique vertices go
/// to the first `m` tuples over `{y1, y2}` (in lexicographic order of the
/// `y1`/`y2` pattern) with exactly `floor(k/2)` copies of `y1`, where
/// `(y1, y2)` is the least non-loop edge (or the least loop if there is no
/// other edge).
pub fn clique_into_alice_power_digraph(y: &Structure, m: usize) -> Result<AliceEmbedding> {
    if y.signature().len() != 1 || y.signature().arity(0) != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected a digraph with one binary symbol, got signature {}",
            y.signature()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("clique size m must be >= 1".into()));
    }
    let edges = y.relation(0);
    let edge = edges
        .iter()
        .find(|e| e[0] != e[1])
        .or_else(|| edges.iter().next())
        .ok_or_else(|| Error::Precondition("the digraph has no edges".into()))?;
    let (y1, y2) = (edge[0], edge[1]);
    let k = digraph_power_exponent(m);
    if central_binomial(k) < m as u128 {
        return Err(Error::ConstructionFailed(format!("C({k}, {}) < {m}", k / 2)));
    }
    if k >= 64 {
        return Err(Error::CapExceeded { what: "digraph clique exponent", size: k as u128, cap: 63 });
    }
    let rows: Vec<Vec<Vertex>> = (0u64..1 << k)
        .filter(|mask| (k - mask.count_ones() as usize) == k / 2)
        .take(m)
        .map(|mask| (0..k).map(|j| if mask >> (k - 1 - j) & 1 == 0 { y1 } else { y2 }).collect())
        .collect();
    let source = clique_in(y.signature().clone(), m)?;
    if !is_homomorphism_into_alice_power(&source, y, k, &rows)? {
        return Err(Error::ConstructionFailed("balanced tuples do not map the clique into the Alice power".into()));
    }
    Ok(AliceEmbedding { k, rows })
}

fn clique_in(signature: Signature, m: usize) -> Result<Structure> {
    let edges = (0..m).flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| vec![a, b])).collect();
    Structure::new(signature, m, vec![edges])
}

/// Embeds the complete structure of size `n` on the pattern of `y` into the
/// `n`-fold Bob power via `i -> (i, v)` for the least central vertex `v`.
/// `None` when `y` has no central vertex.
pub fn complete_into_bob_power(y: &Structure, n: usize) -> Result<Option<BobEmbedding>> {
    let source = complete_structure(n, &pattern_of(y))?;
    let Some(&v) = central_vertices(y).first() else {
        return Ok(None);
    };
    let map: Vec<(usize, Vertex)> = (0..n).map(|i| (i, v)).collect();
    if !is_homomorphism_into_bob_power(&source, y, n, &map)? {
        return Err(Error::ConstructionFailed("central-vertex map is not a homomorphism into the Bob power".into()));
    }
    Ok(Some(BobEmbedding { k: n, map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powers::alice_power;
    use crate::structures::{is_homomorphism, make_named, CatalogName};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn named(name: CatalogName, params: &[usize]) -> Structure {
        make_named(name, params).unwrap()
    }

    #[test]
    fn exponents() {
        assert_eq!(digraph_power_exponent(2), 3);
        assert_eq!(digraph_power_exponent(6), 6);
        assert_eq!(central_binomial(6), 20);
        for m in 2..200 {
            assert!(central_binomial(digraph_power_exponent(m)) >= m as u128, "m = {m}");
        }
    }

    #[test]
    fn alice_embeddings() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (y, n) in [
            (named(CatalogName::Clique, &[2]), 2),
            (named(CatalogName::DirectedEdge, &[]), 4),
            (named(CatalogName::Nae, &[2]), 3),
        ] {
            let e = clique_into_alice_power(&y, n, &mut rng).unwrap();
            assert_eq!(e.rows.len(), n);
        }
    }

    #[test]
    fn small_embedding_checks_against_materialized_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let y = named(CatalogName::Clique, &[2]);
        let e = clique_into_alice_power(&y, 2, &mut rng).unwrap();
        let h = e.to_homomorphism(2).unwrap();
        let p = alice_power(&y, e.k).unwrap();
        assert!(is_homomorphism(h.as_slice(), &named(CatalogName::Clique, &[2]), &p).unwrap());
    }

    #[test]
    fn digraph_embeddings() {
        let d2 = named(CatalogName::DirectedEdge, &[]);
        let e = clique_into_alice_power_digraph(&d2, 6).unwrap();
        assert_eq!(e.k, 6);
        let mut distinct = e.rows.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 6);
        let c3 = named(CatalogName::DirectedCycle, &[3]);
        assert!(clique_into_alice_power_digraph(&c3, 8).is_ok());
        let empty = Structure::single("E", 2, 2, vec![]).unwrap();
        assert!(matches!(clique_into_alice_power_digraph(&empty, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn bob_embeddings() {
        let e = complete_into_bob_power(&named(CatalogName::Clique, &[3]), 4).unwrap().unwrap();
        assert_eq!(e.k, 4);
        assert_eq!(e.map, vec![(0, 0), (1, 0), (2, 0), (3, 0)]);
        assert!(complete_into_bob_power(&named(CatalogName::DirectedEdge, &[]), 2).unwrap().is_none());
        let ex = Structure::single("R", 4, 7, vec![vec![0, 0, 1, 2], vec![3, 4, 0, 0], vec![5, 5, 6, 6]]).unwrap();
        let e = complete_into_bob_power(&ex, 2).unwrap().unwrap();
        assert_eq!(e.map, vec![(0, 0), (1, 0)]);
    }
}
