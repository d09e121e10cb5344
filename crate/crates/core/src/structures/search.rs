//! Complete homomorphism search: backtracking over a static variable order
//! with generalized arc consistency maintained after every assignment.
//!
//! Variables are source vertices ordered by descending relation degree, ties
//! broken by vertex id; values are tried in ascending order. The first witness
//! in that order is returned, so results are deterministic.

use super::{Homomorphism, Structure};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn empty(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    pub(crate) fn full(n: usize) -> Self {
        let mut s = BitSet::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub(crate) fn single(n: usize, v: usize) -> Self {
        let mut s = BitSet::empty(n);
        s.insert(v);
        s
    }

    #[inline]
    pub(crate) fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    /// Returns true if the bit was set.
    pub(crate) fn remove(&mut self, v: usize) -> bool {
        let had = self.contains(v);
        self.words[v / 64] &= !(1 << (v % 64));
        had
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Intersects in place; returns whether anything was removed.
    pub(crate) fn intersect_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            let next = *w & o;
            changed |= next != *w;
            *w = next;
        }
        changed
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

struct Constraint {
    symbol: usize,
    vars: Vec<usize>,
    /// For each position, the first position holding the same variable.
    first_pos: Vec<usize>,
}

struct Solver<'a> {
    target: &'a Structure,
    injective: bool,
    constraints: Vec<Constraint>,
    watches: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(source: &'a Structure, target: &'a Structure, injective: bool) -> Self {
        let mut constraints = Vec::new();
        let mut watches = vec![Vec::new(); source.size()];
        for (symbol, rel) in source.relations().iter().enumerate() {
            for t in rel.iter() {
                let id = constraints.len();
                let first_pos = (0..t.len()).map(|p| t.iter().position(|&v| v == t[p]).unwrap()).collect();
                for (p, &v) in t.iter().enumerate() {
                    if t[..p].iter().all(|&u| u != v) {
                        watches[v].push(id);
                    }
                }
                constraints.push(Constraint { symbol, vars: t.to_vec(), first_pos });
            }
        }
        let degrees = source.degrees();
        let mut order: Vec<usize> = (0..source.size()).collect();
        order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
        Solver { target, injective, constraints, watches, order }
    }

    /// Narrows the domains of one constraint's variables to supported values.
    /// Returns `None` on a wipeout, otherwise the variables that changed.
    #[allow(clippy::needless_range_loop)]
    fn revise(&self, c: &Constraint, domains: &mut [BitSet]) -> Option<Vec<usize>> {
        let n = self.target.size();
        let arity = c.vars.len();
        let mut support = vec![BitSet::empty(n); arity];
        'tuples: for t in self.target.relation(c.symbol).iter() {
            for p in 0..arity {
                if t[p] != t[c.first_pos[p]] || !domains[c.vars[p]].contains(t[p]) {
                    continue 'tuples;
                }
            }
            for p in 0..arity {
                if c.first_pos[p] == p {
                    support[p].insert(t[p]);
                }
            }
        }
        let mut changed = Vec::new();
        for p in 0..arity {
            if c.first_pos[p] != p {
                continue;
            }
            let var = c.vars[p];
            if domains[var].intersect_with(&support[p]) {
                if domains[var].is_empty() {
                    return None;
                }
                changed.push(var);
            }
        }
        Some(changed)
    }

    fn propagate(&self, domains: &mut [BitSet], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; self.constraints.len()];
        for &c in &queue {
            queued[c] = true;
        }
        while let Some(c) = queue.pop() {
            queued[c] = false;
            let Some(changed) = self.revise(&self.constraints[c], domains) else {
                return false;
            };
            for var in changed {
                for &d in &self.watches[var] {
                    if !queued[d] {
                        queued[d] = true;
                        queue.push(d);
                    }
                }
            }
        }
        true
    }

    fn solve(&self, source_size: usize) -> Option<Vec<usize>> {
        let n = self.target.size();
        if source_size == 0 {
            return Some(Vec::new());
        }
        if n == 0 || (self.injective && source_size > n) {
            return None;
        }
        let mut domains = vec![BitSet::full(n); source_size];
        let all: Vec<usize> = (0..self.constraints.len()).rev().collect();
        if !self.propagate(&mut domains, all) {
            return None;
        }
        let mut used = BitSet::empty(n);
        let solved = self.backtrack(0, domains, &mut used)?;
        Some(solved.iter().map(|d| d.first().unwrap()).collect())
    }

    fn backtrack(&self, depth: usize, domains: Vec<BitSet>, used: &mut BitSet) -> Option<Vec<BitSet>> {
        let Some(&var) = self.order.get(depth) else {
            return Some(domains);
        };
        let n = self.target.size();
        let values: Vec<usize> = domains[var].iter().collect();
        for value in values {
            if self.injective && used.contains(value) {
                continue;
            }
            let mut next = domains.clone();
            next[var] = BitSet::single(n, value);
            let mut queue = self.watches[var].clone();
            if self.injective {
                let mut wiped = false;
                for &other in &self.order[depth + 1..] {
                    if next[other].remove(value) {
                        if next[other].is_empty() {
                            wiped = true;
                            break;
                        }
                        queue.extend_from_slice(&self.watches[other]);
                    }
                }
                if wiped {
                    continue;
                }
                queue.sort_unstable();
                queue.dedup();
            }
            if !self.propagate(&mut next, queue) {
                continue;
            }
            if self.injective {
                used.insert(value);
            }
            if let Some(done) = self.backtrack(depth + 1, next, used) {
                return Some(done);
            }
            if self.injective {
                used.remove(value);
            }
        }
        None
    }
}

/// Searches for a homomorphism `source -> target`. `Ok(None)` is a definitive
/// answer: the search is complete.
pub fn find_homomorphism(source: &Structure, target: &Structure) -> Result<Option<Homomorphism>> {
    source.ensure_same_signature(target)?;
    let solver = Solver::new(source, target, false);
    Ok(solver.solve(source.size()).map(Homomorphism::new))
}

/// Like [`find_homomorphism`], restricted to injective maps.
pub fn find_injective_homomorphism(source: &Structure, target: &Structure) -> Result<Option<Homomorphism>> {
    source.ensure_same_signature(target)?;
    let solver = Solver::new(source, target, true);
    Ok(solver.solve(source.size()).map(Homomorphism::new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{is_homomorphism, make_named, CatalogName};

    fn clique(n: usize) -> Structure {
        make_named(CatalogName::Clique, &[n]).unwrap()
    }

    #[test]
    fn bitset_basics() {
        let mut s = BitSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert!(s.remove(64));
        assert!(!s.remove(64));
        assert_eq!(s.first(), Some(0));
        let mut t = BitSet::full(130);
        assert!(t.intersect_with(&s));
        assert_eq!(t, s);
    }

    #[test]
    fn triangle_to_triangle_and_edge() {
        let h = find_homomorphism(&clique(3), &clique(3)).unwrap().unwrap();
        let mut img = h.clone().into_vec();
        img.sort();
        assert_eq!(img, vec![0, 1, 2]);
        assert!(is_homomorphism(h.as_slice(), &clique(3), &clique(3)).unwrap());
        assert!(find_homomorphism(&clique(3), &clique(2)).unwrap().is_none());
    }

    #[test]
    fn repeated_variables_in_a_tuple() {
        // A loop in the source needs a loop in the target.
        let looped = make_named(CatalogName::Loop, &[]).unwrap();
        assert!(find_homomorphism(&looped, &clique(4)).unwrap().is_none());
        assert!(find_homomorphism(&clique(4), &looped).unwrap().is_some());
    }

    #[test]
    fn empty_cases() {
        let empty = Structure::single("E", 2, 0, vec![]).unwrap();
        assert_eq!(find_homomorphism(&empty, &clique(2)).unwrap().unwrap().len(), 0);
        assert!(find_homomorphism(&clique(1), &empty).unwrap().is_none());
        // Isolated vertices default to the least target vertex.
        let isolated = Structure::single("E", 2, 3, vec![]).unwrap();
        assert_eq!(find_homomorphism(&isolated, &clique(2)).unwrap().unwrap().into_vec(), vec![0, 0, 0]);
    }

    #[test]
    fn injective_search() {
        let isolated = Structure::single("E", 2, 3, vec![]).unwrap();
        let h = find_injective_homomorphism(&isolated, &clique(3)).unwrap().unwrap();
        assert_eq!(h.into_vec(), vec![0, 1, 2]);
        assert!(find_injective_homomorphism(&isolated, &clique(2)).unwrap().is_none());
    }
}
